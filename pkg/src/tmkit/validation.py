"""Static validation: referential integrity plus a versioned rule table.

Rules are data, not code paths: each mode selects a tuple of Rule records,
and relaxations (``relaxed_triggers``) swap severities in the table rather
than branching inside checkers.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Callable, Iterator

from .model import (
    ActionKind,
    EdgeKind,
    Mode,
    Severity,
    StaticModel,
    Violation,
    sorted_report,
    ValidationReport,
)

RULESET_VERSION = 1

# Legal intra-thimac flow adjacency (rule V2): src kind -> allowed dst kinds.
INTRA_FLOW_ADJACENCY: dict[ActionKind, frozenset[ActionKind]] = {
    ActionKind.TRANSFER: frozenset({ActionKind.RECEIVE}),
    ActionKind.RECEIVE: frozenset({ActionKind.PROCESS, ActionKind.RELEASE}),
    ActionKind.CREATE: frozenset({ActionKind.PROCESS, ActionKind.RELEASE}),
    ActionKind.PROCESS: frozenset({ActionKind.RELEASE}),
    ActionKind.RELEASE: frozenset({ActionKind.TRANSFER}),
}

TRIGGER_SOURCES = frozenset({ActionKind.PROCESS, ActionKind.CREATE})

Checker = Callable[[StaticModel], Iterator[Violation]]


@dataclass(frozen=True)
class Rule:
    id: str
    severity: Severity
    description: str
    check: Checker

    def run(self, model: StaticModel) -> Iterator[Violation]:
        for v in self.check(model):
            yield replace(v, rule=self.id, severity=self.severity)


def _v(location: str, message: str) -> Violation:
    # rule/severity are stamped by Rule.run
    return Violation(rule="", severity=Severity.ERROR, location=location, message=message)


def _check_boundary_flow(model: StaticModel) -> Iterator[Violation]:
    amap = model.action_map()
    for e in model.flow_edges():
        src, dst = amap[e.src], amap[e.dst]
        if src.owner != dst.owner:
            if src.kind is not ActionKind.TRANSFER or dst.kind is not ActionKind.TRANSFER:
                yield _v(
                    f"{e.src} -> {e.dst}",
                    f"flow between thimacs must connect transfer to transfer, "
                    f"got {src.kind} to {dst.kind}",
                )


def _check_intra_adjacency(model: StaticModel) -> Iterator[Violation]:
    amap = model.action_map()
    for e in model.flow_edges():
        src, dst = amap[e.src], amap[e.dst]
        if src.owner == dst.owner and dst.kind not in INTRA_FLOW_ADJACENCY[src.kind]:
            yield _v(
                f"{e.src} -> {e.dst}",
                f"flow {src.kind} to {dst.kind} is not allowed within a thimac",
            )


def _check_gate_degrees(model: StaticModel) -> Iterator[Violation]:
    out_count: dict[str, int] = {}
    in_count: dict[str, int] = {}
    for e in model.flow_edges():
        out_count[e.src] = out_count.get(e.src, 0) + 1
        in_count[e.dst] = in_count.get(e.dst, 0) + 1
    for a in model.actions:
        if a.kind is ActionKind.RELEASE and out_count.get(a.id, 0) > 1:
            yield _v(a.id, f"release has {out_count[a.id]} outgoing flows, at most 1 allowed")
        if a.kind is ActionKind.RECEIVE and in_count.get(a.id, 0) > 1:
            yield _v(a.id, f"receive has {in_count[a.id]} incoming flows, at most 1 allowed")


def _check_trigger_shape(model: StaticModel) -> Iterator[Violation]:
    amap = model.action_map()
    for e in model.trigger_edges():
        src, dst = amap[e.src], amap[e.dst]
        if src.kind not in TRIGGER_SOURCES:
            yield _v(f"{e.src} -> {e.dst}", f"trigger source must be process or create, got {src.kind}")
        if dst.kind is not ActionKind.CREATE:
            yield _v(f"{e.src} -> {e.dst}", f"trigger target must be create, got {dst.kind}")


def _check_reachability(model: StaticModel) -> Iterator[Violation]:
    # Every non-create action should be flow-reachable from a create or from
    # an entry gate (a transfer with no incoming flow).
    has_in: set[str] = {e.dst for e in model.flow_edges()}
    sources = [
        a.id
        for a in model.actions
        if a.kind is ActionKind.CREATE
        or (a.kind is ActionKind.TRANSFER and a.id not in has_in)
    ]
    succ: dict[str, list[str]] = {}
    for e in model.flow_edges():
        succ.setdefault(e.src, []).append(e.dst)
    seen = set(sources)
    stack = list(sources)
    while stack:
        node = stack.pop()
        for nxt in succ.get(node, ()):
            if nxt not in seen:
                seen.add(nxt)
                stack.append(nxt)
    for a in model.actions:
        if a.kind is not ActionKind.CREATE and a.id not in seen:
            yield _v(a.id, "not flow-reachable from any create or entry transfer")


def _check_no_flow_into_create(model: StaticModel) -> Iterator[Violation]:
    amap = model.action_map()
    for e in model.flow_edges():
        if amap[e.dst].kind is ActionKind.CREATE:
            yield _v(f"{e.src} -> {e.dst}", "flow may not enter a create; things originate there")


def _rule(rid: str, severity: Severity, description: str, check: Checker) -> Rule:
    return Rule(id=rid, severity=severity, description=description, check=check)


def rules_for(mode: Mode, relaxed_triggers: bool = False) -> tuple[Rule, ...]:
    """The ordered rule table for a validation mode (ruleset v1)."""
    trigger_sev = Severity.WARNING if relaxed_triggers else Severity.ERROR
    if mode is Mode.STRICT:
        return (
            _rule("V1", Severity.ERROR, "boundary flows are transfer-to-transfer", _check_boundary_flow),
            _rule("V2", Severity.ERROR, "intra-thimac flow adjacency whitelist", _check_intra_adjacency),
            _rule("V3", Severity.ERROR, "release/receive carry at most one flow", _check_gate_degrees),
            _rule("V4", trigger_sev, "triggers run process/create to create", _check_trigger_shape),
            _rule("V5", Severity.WARNING, "actions reachable from a create or entry gate", _check_reachability),
        )
    return (
        _rule("S1", Severity.ERROR, "no flow into a create", _check_no_flow_into_create),
        _rule("S2", Severity.ERROR, "release/receive carry at most one flow", _check_gate_degrees),
        _rule("V4", Severity.WARNING, "triggers run process/create to create", _check_trigger_shape),
    )


def check_integrity(model: StaticModel) -> ValidationReport:
    """Referential integrity: duplicate ids, dangling references, forest shape."""
    violations: list[Violation] = []

    seen_thimacs: set[str] = set()
    for t in model.thimacs:
        if t.id in seen_thimacs:
            violations.append(Violation("DUPID", Severity.ERROR, t.id, "duplicate thimac id"))
        seen_thimacs.add(t.id)
    seen_actions: set[str] = set()
    for a in model.actions:
        if a.id in seen_actions or a.id in seen_thimacs:
            violations.append(Violation("DUPID", Severity.ERROR, a.id, "duplicate id"))
        seen_actions.add(a.id)

    tmap = model.thimac_map()
    amap = model.action_map()
    for t in model.thimacs:
        if t.parent is not None and t.parent not in tmap:
            violations.append(Violation("DANGLING", Severity.ERROR, t.id, f"parent {t.parent!r} not declared"))
        for c in t.children:
            child = tmap.get(c)
            if child is None:
                violations.append(Violation("DANGLING", Severity.ERROR, t.id, f"child {c!r} not declared"))
            elif child.parent != t.id:
                violations.append(Violation("DANGLING", Severity.ERROR, c, f"parent link does not match {t.id!r}"))
        for aid in t.actions:
            a = amap.get(aid)
            if a is None:
                violations.append(Violation("DANGLING", Severity.ERROR, t.id, f"action {aid!r} not declared"))
            elif a.owner != t.id:
                violations.append(Violation("DANGLING", Severity.ERROR, aid, f"owner link does not match {t.id!r}"))
    for a in model.actions:
        owner = tmap.get(a.owner)
        if owner is None:
            violations.append(Violation("DANGLING", Severity.ERROR, a.id, f"owner {a.owner!r} not declared"))
        elif a.id not in owner.actions:
            violations.append(Violation("DANGLING", Severity.ERROR, a.id, f"not listed by owner {a.owner!r}"))

    for e in model.edges:
        for endpoint in (e.src, e.dst):
            if endpoint not in amap:
                violations.append(
                    Violation("DANGLING", Severity.ERROR, f"{e.src} -> {e.dst}", f"unknown action {endpoint!r}")
                )
        if e.src == e.dst:
            violations.append(
                Violation("DANGLING", Severity.ERROR, f"{e.src} -> {e.dst}", "self-edges are not allowed")
            )

    # Forest shape: walking parents must terminate at a root, never cycle.
    for t in model.thimacs:
        seen_path: set[str] = set()
        cur: str | None = t.id
        while cur is not None:
            if cur in seen_path:
                violations.append(Violation("DANGLING", Severity.ERROR, t.id, "containment cycle"))
                break
            seen_path.add(cur)
            parent = tmap.get(cur)
            cur = parent.parent if parent is not None else None

    return sorted_report(violations)


def validate_static(model: StaticModel, relaxed_triggers: bool = False) -> ValidationReport:
    """Run the rule table for the model's mode.

    Integrity problems (DUPID/DANGLING) short-circuit: the report carries
    only those, since rule checkers assume resolvable references.
    """
    integrity = check_integrity(model)
    if not integrity.ok:
        return integrity
    violations: list[Violation] = []
    for rule in rules_for(model.mode, relaxed_triggers=relaxed_triggers):
        violations.extend(rule.run(model))
    return sorted_report(violations)
