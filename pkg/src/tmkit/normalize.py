"""Simplified-to-strict normalization.

A simplified model draws a thing's movement as one arrow; the strict form
spells out the gate sequence the thing passes through. Normalization
re-inserts those gates: every flow edge that strict mode would reject is
replaced by the shortest legal chain of fresh release/transfer/receive
nodes, splitting at the thimac boundary when the edge crosses one.

The canonical gate cycle (kept independent of the validator's rule table on
purpose; the test suite cross-checks the two):

    create|process|receive -> release -> transfer
        [-> boundary -> transfer] -> receive -> process|release
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InvalidInputError
from .model import (
    ActionKind,
    ActionNode,
    Edge,
    EdgeKind,
    Mode,
    StaticModel,
    Thimac,
)
from .validation import validate_static

# Successor kinds a flow may enter directly, within one thimac.
_CANON_NEXT: dict[ActionKind, tuple[ActionKind, ...]] = {
    ActionKind.CREATE: (ActionKind.PROCESS, ActionKind.RELEASE),
    ActionKind.PROCESS: (ActionKind.RELEASE,),
    ActionKind.RELEASE: (ActionKind.TRANSFER,),
    ActionKind.TRANSFER: (ActionKind.RECEIVE,),
    ActionKind.RECEIVE: (ActionKind.PROCESS, ActionKind.RELEASE),
}

# Gate kinds to walk from a node kind out to a boundary transfer.
_EGRESS: dict[ActionKind, tuple[ActionKind, ...]] = {
    ActionKind.CREATE: (ActionKind.RELEASE, ActionKind.TRANSFER),
    ActionKind.PROCESS: (ActionKind.RELEASE, ActionKind.TRANSFER),
    ActionKind.RECEIVE: (ActionKind.RELEASE, ActionKind.TRANSFER),
    ActionKind.RELEASE: (ActionKind.TRANSFER,),
    ActionKind.TRANSFER: (),
}

# Gate kinds to walk from a boundary transfer into a node kind.
_INGRESS: dict[ActionKind, tuple[ActionKind, ...]] = {
    ActionKind.PROCESS: (ActionKind.RECEIVE,),
    ActionKind.RELEASE: (ActionKind.RECEIVE,),
    ActionKind.RECEIVE: (),
    ActionKind.TRANSFER: (),
}


def _intra_fill(src: ActionKind, dst: ActionKind) -> tuple[ActionKind, ...] | None:
    """Shortest chain of intermediate kinds making src -> dst legal in one thimac."""
    # BFS over the canonical successor graph; fills here are short and unique.
    frontier: list[tuple[ActionKind, tuple[ActionKind, ...]]] = [(src, ())]
    seen = {src}
    while frontier:
        nxt: list[tuple[ActionKind, tuple[ActionKind, ...]]] = []
        for kind, path in frontier:
            for succ in _CANON_NEXT[kind]:
                if succ is dst:
                    return path
                if succ not in seen:
                    seen.add(succ)
                    nxt.append((succ, path + (succ,)))
        frontier = nxt
    return None


@dataclass(frozen=True)
class EdgeExpansion:
    """Record of one replaced edge: the fresh gates and the spliced-in chain."""

    original: Edge
    index: int  # position of the replaced edge in the input model's edge tuple
    src_side: tuple[str, ...]  # fresh action ids grouped with the sending node
    dst_side: tuple[str, ...]  # fresh action ids grouped with the receiving node
    chain: tuple[Edge, ...]
    boundary: bool


class _Workspace:
    """Mutable copy of a model while gates are spliced in."""

    def __init__(self, model: StaticModel) -> None:
        self.name = model.name
        self.thimac_meta = {
            t.id: {"name": t.name, "parent": t.parent, "children": list(t.children), "actions": list(t.actions)}
            for t in model.thimacs
        }
        self.thimac_order = [t.id for t in model.thimacs]
        self.actions: dict[str, ActionNode] = {a.id: a for a in model.actions}
        self.used_names: dict[str, set[str]] = {
            t.id: {c.rsplit(".", 1)[-1] for c in list(t.children) + list(t.actions)} for t in model.thimacs
        }

    def fresh_action(self, owner: str, kind: ActionKind, base: str, suffix: str, label: str | None) -> str:
        name = f"{base}_{suffix}"
        n = 1
        while name in self.used_names[owner]:
            n += 1
            name = f"{base}_{suffix}{n}"
        self.used_names[owner].add(name)
        aid = f"{owner}.{name}"
        self.actions[aid] = ActionNode(id=aid, kind=kind, owner=owner, label=label)
        self.thimac_meta[owner]["actions"].append(aid)
        return aid

    def build(self, edges: list[Edge]) -> StaticModel:
        # Canonical order: thimac pre-order walk, actions grouped per thimac.
        roots = [tid for tid in self.thimac_order if self.thimac_meta[tid]["parent"] is None]
        ordered_thimacs: list[str] = []

        def walk(tid: str) -> None:
            ordered_thimacs.append(tid)
            for child in self.thimac_meta[tid]["children"]:
                walk(child)

        for r in roots:
            walk(r)
        thimacs = tuple(
            Thimac(
                id=tid,
                name=self.thimac_meta[tid]["name"],
                parent=self.thimac_meta[tid]["parent"],
                children=tuple(self.thimac_meta[tid]["children"]),
                actions=tuple(self.thimac_meta[tid]["actions"]),
            )
            for tid in ordered_thimacs
        )
        ordered_actions = tuple(
            self.actions[aid] for tid in ordered_thimacs for aid in self.thimac_meta[tid]["actions"]
        )
        return StaticModel(
            name=self.name, thimacs=thimacs, actions=ordered_actions, edges=tuple(edges), mode=Mode.STRICT
        )


_GATE_SUFFIX = {ActionKind.RELEASE: "rel", ActionKind.RECEIVE: "rcv", ActionKind.TRANSFER: "xfr"}


def _expand_boundary(ws: _Workspace, edge: Edge, index: int, src: ActionNode, dst: ActionNode) -> EdgeExpansion:
    label = src.label
    egress: list[str] = []
    for kind in _EGRESS[src.kind]:
        suffix = "out" if kind is ActionKind.TRANSFER else _GATE_SUFFIX[kind]
        egress.append(ws.fresh_action(src.owner, kind, src.name, suffix, label))
    ingress: list[str] = []
    if dst.kind is not ActionKind.TRANSFER:
        ingress.append(ws.fresh_action(dst.owner, ActionKind.TRANSFER, dst.name, "in", label))
        for kind in _INGRESS[dst.kind]:
            ingress.append(ws.fresh_action(dst.owner, kind, dst.name, _GATE_SUFFIX[kind], label))
    node_seq = [src.id, *egress, *ingress, dst.id]
    hop_src = egress[-1] if egress else src.id  # last node in src's thimac
    chain = [
        Edge(src=a, dst=b, kind=EdgeKind.FLOW, marker=edge.marker if a == hop_src else None)
        for a, b in zip(node_seq, node_seq[1:])
    ]
    return EdgeExpansion(
        original=edge, index=index,
        src_side=tuple(egress), dst_side=tuple(ingress), chain=tuple(chain), boundary=True,
    )


def _expand_intra(ws: _Workspace, edge: Edge, index: int, src: ActionNode, dst: ActionNode) -> EdgeExpansion:
    fill = _intra_fill(src.kind, dst.kind)
    assert fill is not None, "callers reject flows into a create before expanding"
    label = src.label
    fresh: list[str] = []
    sides: list[str] = []
    past_gate = src.kind is ActionKind.TRANSFER
    for kind in fill:
        base = dst.name if kind is ActionKind.RECEIVE else src.name
        aid = ws.fresh_action(src.owner, kind, base, _GATE_SUFFIX[kind], label)
        if kind is ActionKind.TRANSFER:
            past_gate = True
        fresh.append(aid)
        sides.append("dst" if past_gate else "src")
    node_seq = [src.id, *fresh, dst.id]
    chain = [
        Edge(src=a, dst=b, kind=EdgeKind.FLOW, marker=edge.marker if i == 0 else None)
        for i, (a, b) in enumerate(zip(node_seq, node_seq[1:]))
    ]
    return EdgeExpansion(
        original=edge,
        index=index,
        src_side=tuple(aid for aid, side in zip(fresh, sides) if side == "src"),
        dst_side=tuple(aid for aid, side in zip(fresh, sides) if side == "dst"),
        chain=tuple(chain),
        boundary=False,
    )


def _edge_is_strict_legal(src: ActionNode, dst: ActionNode) -> bool:
    if src.owner != dst.owner:
        return src.kind is ActionKind.TRANSFER and dst.kind is ActionKind.TRANSFER
    return dst.kind in _CANON_NEXT[src.kind]


def normalize_with_expansions(
    model: StaticModel, relaxed_triggers: bool = False
) -> tuple[StaticModel, tuple[EdgeExpansion, ...]]:
    """Normalize and also report which gates were inserted for which edge."""
    simplified = StaticModel(
        name=model.name, thimacs=model.thimacs, actions=model.actions, edges=model.edges, mode=Mode.SIMPLIFIED
    )
    report = validate_static(simplified, relaxed_triggers=relaxed_triggers)
    blocking = list(report.errors)
    if not relaxed_triggers:
        blocking += [v for v in report.warnings if v.rule == "V4"]
    if blocking:
        raise InvalidInputError(
            f"model is not normalizable: {'; '.join(v.render() for v in blocking)}", report=report
        )

    ws = _Workspace(model)
    amap = model.action_map()
    out_edges: list[Edge] = []
    expansions: list[EdgeExpansion] = []
    for idx, edge in enumerate(model.edges):
        if edge.kind is EdgeKind.TRIGGER:
            out_edges.append(edge)
            continue
        src, dst = amap[edge.src], amap[edge.dst]
        if _edge_is_strict_legal(src, dst):
            out_edges.append(edge)
            continue
        expand = _expand_boundary if src.owner != dst.owner else _expand_intra
        expansion = expand(ws, edge, idx, src, dst)
        out_edges.extend(expansion.chain)
        expansions.append(expansion)
    return ws.build(out_edges), tuple(expansions)


def normalize(model: StaticModel, relaxed_triggers: bool = False) -> StaticModel:
    """Return the strict-mode equivalent of a simplified-valid model.

    Idempotent; the identity on models that already satisfy strict rules.
    Raises InvalidInputError when the input fails simplified validation (or
    carries trigger-shape violations, which gate insertion cannot repair).
    """
    normalized, _ = normalize_with_expansions(model, relaxed_triggers=relaxed_triggers)
    return normalized
