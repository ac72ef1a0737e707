"""Dynamics layer: events carve regions out of the static model, and a
behavior model orders events into a chronology.

Loop conventions (shared by the simulator and the ordering oracle): a
bounded edge whose target is declared no later than its source is a loop
edge; ``repeat <= K`` means the loop body runs K times in total. All other
edges are precedence prerequisites. Bounds are never invented: unbounded
back edges stay invalid until a default bound is applied explicitly.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .analysis import find_cycle_nodes, weakly_connected_components
from .errors import (
    DisconnectedRegionError,
    InvalidInputError,
    UndefinedReferenceError,
)
from .model import (
    Edge,
    Severity,
    StaticModel,
    ValidationReport,
    Violation,
    sorted_report,
)

EventId = str


@dataclass(frozen=True)
class Region:
    """Non-empty set of action ids, expected weakly connected when induced."""

    action_ids: tuple[str, ...]

    def induced_edges(self, static: StaticModel) -> tuple[Edge, ...]:
        members = set(self.action_ids)
        return tuple(e for e in static.edges if e.src in members and e.dst in members)

    def components(self, static: StaticModel) -> list[tuple[str, ...]]:
        pairs = [(e.src, e.dst) for e in self.induced_edges(static)]
        return weakly_connected_components(self.action_ids, pairs)

    def is_connected(self, static: StaticModel) -> bool:
        return len(self.components(static)) <= 1


@dataclass(frozen=True)
class Event:
    id: EventId
    name: str
    region: Region
    time: str | None = None


@dataclass(frozen=True)
class BehaviorEdge:
    src: EventId
    dst: EventId
    bound: int | None = None


@dataclass(frozen=True)
class BehaviorModel:
    events: tuple[EventId, ...] = ()  # declaration order; drives every tie-break
    edges: tuple[BehaviorEdge, ...] = ()

    def index_of(self) -> dict[EventId, int]:
        return {eid: i for i, eid in enumerate(self.events)}


def define_event(
    static: StaticModel,
    event_id: EventId,
    paths: list[str] | tuple[str, ...],
    name: str | None = None,
    time: str | None = None,
    allow_disconnected: bool = False,
) -> Event:
    """Resolve region paths (action ids, or thimac ids meaning all their
    actions, sub-thimacs included) into an Event."""
    amap = static.action_map()
    tmap = static.thimac_map()
    resolved: list[str] = []
    for path in paths:
        if path in amap:
            resolved.append(path)
        elif path in tmap:
            resolved.extend(static.actions_of(path))
        else:
            raise UndefinedReferenceError(f"region path {path!r} names no action or thimac")
    if not resolved:
        raise InvalidInputError(f"event {event_id!r} has an empty region")
    order = {a.id: i for i, a in enumerate(static.actions)}
    region = Region(tuple(sorted(dict.fromkeys(resolved), key=order.__getitem__)))
    if not allow_disconnected:
        components = region.components(static)
        if len(components) > 1:
            raise DisconnectedRegionError(
                f"region of event {event_id!r} splits into {len(components)} components",
                components=tuple(components),
            )
    return Event(id=event_id, name=name if name is not None else event_id, region=region, time=time)


def is_loop_edge(edge: BehaviorEdge, index: dict[EventId, int]) -> bool:
    return edge.bound is not None and index[edge.dst] <= index[edge.src]


def apply_default_bounds(behavior: BehaviorModel, default_bound: int) -> BehaviorModel:
    """Fill the default bound on back edges the DSL left unbounded.

    Explicit bounds are never overridden; forward edges are never touched.
    """
    index = behavior.index_of()
    edges = tuple(
        replace(e, bound=default_bound)
        if e.bound is None and e.src in index and e.dst in index and index[e.dst] <= index[e.src]
        else e
        for e in behavior.edges
    )
    return BehaviorModel(events=behavior.events, edges=edges)


@dataclass(frozen=True)
class Loop:
    edge: BehaviorEdge
    body: tuple[EventId, ...]  # events re-run per iteration, declaration order


def loop_structures(behavior: BehaviorModel) -> tuple[Loop, ...]:
    """Resolve each loop edge to its body: events on forward paths from the
    edge's target back to its source (the self-loop body is the event itself).
    Callers must have validated references; shape problems come back as
    empty bodies for validate_behavior to flag."""
    index = behavior.index_of()
    loops: list[Loop] = []
    forward = [e for e in behavior.edges if not is_loop_edge(e, index)]
    succ: dict[EventId, list[EventId]] = {}
    pred: dict[EventId, list[EventId]] = {}
    for e in forward:
        succ.setdefault(e.src, []).append(e.dst)
        pred.setdefault(e.dst, []).append(e.src)

    def closure(start: EventId, adjacency: dict[EventId, list[EventId]]) -> set[EventId]:
        seen = {start}
        stack = [start]
        while stack:
            for nxt in adjacency.get(stack.pop(), ()):
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
        return seen

    for e in behavior.edges:
        if not is_loop_edge(e, index):
            continue
        if e.src == e.dst:
            body = {e.src}
        else:
            body = closure(e.dst, succ) & closure(e.src, pred)
            if e.src not in body or e.dst not in body:
                body = set()
        loops.append(Loop(edge=e, body=tuple(sorted(body, key=index.__getitem__))))
    return tuple(loops)


def validate_behavior(
    behavior: BehaviorModel,
    events: tuple[Event, ...],
    static: StaticModel,
    allow_disconnected_regions: bool = False,
) -> ValidationReport:
    """Cross-check the chronology against its events and the static model.

    Errors: unknown event references (UNDEF), cycles with no bounded back
    edge (UNBOUNDED_LOOP), bounded back edges that close no forward cycle
    (LOOP_SHAPE), overlapping loop bodies (LOOP_OVERLAP), disconnected
    regions (REGION_DISCONNECTED) unless allowed. Warnings: bounds on
    forward edges (BOUND_FORWARD, ignored by the simulator), events no
    source reaches (UNREACHABLE), actions no region covers (COVERAGE).
    The report is sorted canonically, independent of declaration order.
    """
    violations: list[Violation] = []

    declared = {e.id for e in events}
    seen: set[str] = set()
    for eid in behavior.events:
        if eid in seen:
            violations.append(Violation("DUPID", Severity.ERROR, eid, "event listed twice in behavior"))
        seen.add(eid)
        if eid not in declared:
            violations.append(Violation("UNDEF", Severity.ERROR, eid, "behavior names an undeclared event"))
    for ev in events:
        if ev.id not in seen:
            violations.append(Violation("UNDEF", Severity.ERROR, ev.id, "event missing from behavior's event list"))
    for e in behavior.edges:
        for endpoint in (e.src, e.dst):
            if endpoint not in seen:
                violations.append(
                    Violation("UNDEF", Severity.ERROR, f"{e.src} -> {e.dst}", f"unknown event {endpoint!r}")
                )
    if any(v.severity is Severity.ERROR for v in violations):
        return sorted_report(violations)

    index = behavior.index_of()
    forward_pairs = [(e.src, e.dst) for e in behavior.edges if not is_loop_edge(e, index)]

    # Cycles must be broken by a bounded back edge.
    for component in find_cycle_nodes(behavior.events, forward_pairs):
        violations.append(
            Violation(
                "UNBOUNDED_LOOP",
                Severity.ERROR,
                ", ".join(component),
                "cycle has no bounded back edge; add repeat <= N or supply a default bound",
            )
        )

    loops = loop_structures(behavior)
    for loop in loops:
        if not loop.body:
            violations.append(
                Violation(
                    "LOOP_SHAPE",
                    Severity.ERROR,
                    f"{loop.edge.src} -> {loop.edge.dst}",
                    "bounded back edge closes no forward path from target to source",
                )
            )
    for i, a in enumerate(loops):
        for b in loops[i + 1 :]:
            common = set(a.body) & set(b.body)
            if common:
                violations.append(
                    Violation(
                        "LOOP_OVERLAP",
                        Severity.ERROR,
                        f"{a.edge.src} -> {a.edge.dst}; {b.edge.src} -> {b.edge.dst}",
                        f"loop bodies overlap on {', '.join(sorted(common, key=index.__getitem__))}",
                    )
                )
    for e in behavior.edges:
        if e.bound is not None and index[e.dst] > index[e.src]:
            violations.append(
                Violation(
                    "BOUND_FORWARD",
                    Severity.WARNING,
                    f"{e.src} -> {e.dst}",
                    "repeat bound on a forward edge is ignored",
                )
            )
        if e.bound is not None and e.bound < 1:
            violations.append(
                Violation(
                    "LOOP_SHAPE", Severity.ERROR, f"{e.src} -> {e.dst}", "repeat bound must be at least 1"
                )
            )

    # Reachability from source events over forward edges.
    indeg = {eid: 0 for eid in behavior.events}
    for a, b in forward_pairs:
        indeg[b] += 1
    sources = [eid for eid in behavior.events if indeg[eid] == 0]
    reachable = set(sources)
    stack = list(sources)
    succ: dict[str, list[str]] = {}
    for a, b in forward_pairs:
        succ.setdefault(a, []).append(b)
    while stack:
        for nxt in succ.get(stack.pop(), ()):
            if nxt not in reachable:
                reachable.add(nxt)
                stack.append(nxt)
    for eid in behavior.events:
        if eid not in reachable:
            violations.append(
                Violation("UNREACHABLE", Severity.WARNING, eid, "no source event reaches this event")
            )

    # Region sanity and coverage of the static model.
    if not allow_disconnected_regions:
        for ev in events:
            components = ev.region.components(static)
            if len(components) > 1:
                violations.append(
                    Violation(
                        "REGION_DISCONNECTED",
                        Severity.ERROR,
                        ev.id,
                        f"region splits into {len(components)} components",
                    )
                )
    covered: set[str] = set()
    for ev in events:
        covered.update(ev.region.action_ids)
    for action in static.actions:
        if action.id not in covered:
            violations.append(
                Violation("COVERAGE", Severity.WARNING, action.id, "no event region covers this action")
            )

    return sorted_report(violations)
