"""Static-model types: thimacs, action nodes, edges, validation reports.

A model is a forest of thimacs (thing/machine units), each owning action
nodes of the five generic kinds, plus flow and trigger edges between
actions. Identifiers are dotted paths mirroring containment
(``Service.Scheduler.plan``), unique model-wide.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from .errors import DuplicateIdError

ThimacId = str
ActionId = str


class ActionKind(enum.Enum):
    CREATE = "create"
    PROCESS = "process"
    RELEASE = "release"
    TRANSFER = "transfer"
    RECEIVE = "receive"

    def __str__(self) -> str:
        return self.value


class EdgeKind(enum.Enum):
    FLOW = "flow"
    TRIGGER = "trigger"

    def __str__(self) -> str:
        return self.value


class Mode(enum.Enum):
    STRICT = "strict"
    SIMPLIFIED = "simplified"

    def __str__(self) -> str:
        return self.value


class Severity(enum.Enum):
    ERROR = "error"
    WARNING = "warning"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class Thimac:
    id: ThimacId
    name: str
    parent: ThimacId | None
    children: tuple[ThimacId, ...] = ()
    actions: tuple[ActionId, ...] = ()


@dataclass(frozen=True)
class ActionNode:
    id: ActionId
    kind: ActionKind
    owner: ThimacId
    label: str | None = None

    @property
    def name(self) -> str:
        return self.id.rsplit(".", 1)[-1]


@dataclass(frozen=True)
class Edge:
    src: ActionId
    dst: ActionId
    kind: EdgeKind
    marker: int | None = None  # the "@n" figure-number annotation; metadata only


@dataclass(frozen=True)
class StaticModel:
    name: str
    thimacs: tuple[Thimac, ...]
    actions: tuple[ActionNode, ...]
    edges: tuple[Edge, ...]
    mode: Mode = Mode.STRICT

    def thimac_map(self) -> dict[ThimacId, Thimac]:
        return {t.id: t for t in self.thimacs}

    def action_map(self) -> dict[ActionId, ActionNode]:
        return {a.id: a for a in self.actions}

    def flow_edges(self) -> tuple[Edge, ...]:
        return tuple(e for e in self.edges if e.kind is EdgeKind.FLOW)

    def trigger_edges(self) -> tuple[Edge, ...]:
        return tuple(e for e in self.edges if e.kind is EdgeKind.TRIGGER)

    def actions_of(self, thimac_id: ThimacId, transitive: bool = True) -> tuple[ActionId, ...]:
        """Action ids owned by a thimac, descending into sub-thimacs by default."""
        tmap = self.thimac_map()
        out: list[ActionId] = []

        def walk(tid: ThimacId) -> None:
            t = tmap[tid]
            out.extend(t.actions)
            if transitive:
                for child in t.children:
                    walk(child)

        walk(thimac_id)
        return tuple(out)


@dataclass(frozen=True)
class Violation:
    rule: str
    severity: Severity
    location: str
    message: str

    def render(self) -> str:
        return f"{self.severity.value}[{self.rule}] {self.location}: {self.message}"


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...] = ()

    @property
    def errors(self) -> tuple[Violation, ...]:
        return tuple(v for v in self.violations if v.severity is Severity.ERROR)

    @property
    def warnings(self) -> tuple[Violation, ...]:
        return tuple(v for v in self.violations if v.severity is Severity.WARNING)

    @property
    def ok(self) -> bool:
        return not self.errors

    def render(self) -> str:
        lines = [v.render() for v in self.violations]
        lines.append(f"{len(self.errors)} errors, {len(self.warnings)} warnings")
        return "\n".join(lines)

    def to_json_obj(self) -> dict:
        return {
            "errors": [vars_of(v) for v in self.errors],
            "warnings": [vars_of(v) for v in self.warnings],
        }


def vars_of(v: Violation) -> dict:
    return {"rule": v.rule, "severity": v.severity.value, "location": v.location, "message": v.message}


def sorted_report(violations: list[Violation]) -> ValidationReport:
    # Canonical order: errors before warnings, then by rule, location, message.
    key = lambda v: (v.severity is not Severity.ERROR, v.rule, v.location, v.message)
    return ValidationReport(tuple(sorted(violations, key=key)))


def merge_reports(*reports: ValidationReport) -> ValidationReport:
    merged: list[Violation] = []
    for r in reports:
        merged.extend(r.violations)
    return sorted_report(merged)


class ModelBuilder:
    """Incremental construction with path derivation and fail-fast name checks.

    Names must be unique among siblings (actions and sub-thimacs share one
    namespace per scope) so that derived dotted paths are unique model-wide.
    """

    def __init__(self, name: str, mode: Mode = Mode.STRICT) -> None:
        self.name = name
        self.mode = mode
        self._thimacs: dict[ThimacId, dict] = {}
        self._actions: list[ActionNode] = []
        self._edges: list[Edge] = []
        self._scopes: dict[ThimacId | None, set[str]] = {None: set()}

    def _claim(self, scope: ThimacId | None, name: str) -> None:
        names = self._scopes.setdefault(scope, set())
        if name in names:
            where = scope or "top level"
            raise DuplicateIdError(f"duplicate name {name!r} in {where}")
        names.add(name)

    def thimac(self, name: str, parent: ThimacId | None = None) -> ThimacId:
        self._claim(parent, name)
        tid = f"{parent}.{name}" if parent else name
        self._thimacs[tid] = {"name": name, "parent": parent, "children": [], "actions": []}
        if parent is not None:
            self._thimacs[parent]["children"].append(tid)
        return tid

    def action(
        self,
        owner: ThimacId,
        kind: ActionKind | str,
        name: str,
        label: str | None = None,
    ) -> ActionId:
        if owner not in self._thimacs:
            raise KeyError(f"unknown thimac {owner!r}")
        self._claim(owner, name)
        kind = ActionKind(kind) if isinstance(kind, str) else kind
        aid = f"{owner}.{name}"
        self._actions.append(ActionNode(id=aid, kind=kind, owner=owner, label=label))
        self._thimacs[owner]["actions"].append(aid)
        return aid

    def edge(self, src: ActionId, dst: ActionId, kind: EdgeKind | str, marker: int | None = None) -> None:
        kind = EdgeKind(kind) if isinstance(kind, str) else kind
        self._edges.append(Edge(src=src, dst=dst, kind=kind, marker=marker))

    def flow(self, src: ActionId, dst: ActionId, marker: int | None = None) -> None:
        self.edge(src, dst, EdgeKind.FLOW, marker)

    def trigger(self, src: ActionId, dst: ActionId, marker: int | None = None) -> None:
        self.edge(src, dst, EdgeKind.TRIGGER, marker)

    def build(self) -> StaticModel:
        # Canonical order regardless of call interleaving: thimacs in
        # pre-order (roots and children in creation order), actions grouped
        # per thimac. Printing then parsing a built model reproduces it.
        ordered: list[ThimacId] = []

        def visit(tid: ThimacId) -> None:
            ordered.append(tid)
            for child in self._thimacs[tid]["children"]:
                visit(child)

        for tid, spec in self._thimacs.items():
            if spec["parent"] is None:
                visit(tid)
        thimacs = tuple(
            Thimac(id=tid, name=self._thimacs[tid]["name"], parent=self._thimacs[tid]["parent"],
                   children=tuple(self._thimacs[tid]["children"]),
                   actions=tuple(self._thimacs[tid]["actions"]))
            for tid in ordered
        )
        by_id = {a.id: a for a in self._actions}
        actions = tuple(by_id[aid] for t in thimacs for aid in t.actions)
        return StaticModel(
            name=self.name,
            thimacs=thimacs,
            actions=actions,
            edges=tuple(self._edges),
            mode=self.mode,
        )
