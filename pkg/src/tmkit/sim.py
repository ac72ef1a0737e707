"""Deterministic execution of a bundle's chronology.

The simulator walks the behavior graph with per-event firing counters; the
ordering oracle answers "which event sequences are admissible at all" by
unrolling loops into an occurrence DAG and enumerating its linear
extensions. The two deliberately share no traversal code: the oracle is
the independent check on the simulator (a simulated sequence must be one
of the enumerated orderings).

Loop semantics: ``repeat <= K`` on a back edge runs the loop body K times
in total. An event outside a loop waits for the full completion of any
loop it depends on; events inside one loop body advance in lockstep, one
iteration at a time.
"""

from __future__ import annotations

from dataclasses import dataclass

from .analysis import topological_order
from .dynamics import (
    BehaviorModel,
    apply_default_bounds,
    is_loop_edge,
    loop_structures,
    validate_behavior,
)
from .errors import (
    InvalidInputError,
    StepBudgetError,
    TooLargeError,
    UndefinedReferenceError,
)
from .model import Severity, merge_reports, sorted_report
from .validation import validate_static

ENUMERATION_NODE_CAP = 12


@dataclass(frozen=True)
class SimConfig:
    max_steps: int = 10_000
    default_loop_bound: int = 1
    tie_break: str = "declaration"


@dataclass(frozen=True)
class TraceStep:
    index: int  # 0-based step number, strictly increasing
    event_id: str
    actions: tuple[str, ...]  # region actions in dependency order


@dataclass(frozen=True)
class Trace:
    steps: tuple[TraceStep, ...]

    @property
    def event_sequence(self) -> tuple[str, ...]:
        return tuple(s.event_id for s in self.steps)


def trace_to_text(trace: Trace) -> str:
    lines = [f"{s.index}\t{s.event_id}\t{','.join(s.actions)}" for s in trace.steps]
    return "\n".join(lines) + ("\n" if lines else "")


def _plan_totals(behavior: BehaviorModel) -> tuple[dict[str, int], dict[str, int], list, list]:
    """Shared unrolling arithmetic: per-event totals, loop-body membership,
    and the precedence/loop edge split. Assumes a validated behavior."""
    index = behavior.index_of()
    loops = loop_structures(behavior)
    body_of: dict[str, int] = {}
    totals: dict[str, int] = {eid: 1 for eid in behavior.events}
    for li, loop in enumerate(loops):
        bound = loop.edge.bound
        assert bound is not None
        for eid in loop.body:
            body_of[eid] = li
            totals[eid] = bound
    precedence = [e for e in behavior.edges if not is_loop_edge(e, index)]
    loop_edges = [loop.edge for loop in loops]
    return totals, body_of, precedence, loop_edges


def simulate(bundle, config: SimConfig | None = None) -> Trace:
    """Run the chronology to completion, one event per step.

    Scheduling is deterministic: among ready events, the earliest-declared
    fires. A step's actions are the event's region in an order consistent
    with its internal flow and trigger links (declaration order breaks
    ties). Raises InvalidInputError when validation of the bundle fails or
    a region's constraints are cyclic, StepBudgetError (partial trace
    attached) when max_steps would be exceeded.
    """
    config = config or SimConfig()
    if config.tie_break != "declaration":
        raise InvalidInputError(f"unknown tie_break {config.tie_break!r}")
    if config.max_steps < 0 or config.default_loop_bound < 1:
        raise InvalidInputError("max_steps must be >= 0 and default_loop_bound >= 1")

    behavior = apply_default_bounds(bundle.behavior, config.default_loop_bound)
    report = merge_reports(
        validate_static(bundle.static),
        validate_behavior(behavior, bundle.events, bundle.static),
    )
    if not report.ok:
        raise InvalidInputError("bundle fails validation; simulation refused", report=report)

    events = bundle.event_map()
    totals, body_of, precedence, loop_edges = _plan_totals(behavior)

    action_plans: dict[str, tuple[str, ...]] = {}
    for eid in behavior.events:
        region = events[eid].region
        pairs = [(e.src, e.dst) for e in region.induced_edges(bundle.static)]
        order = topological_order(region.action_ids, pairs)
        if order is None:
            raise InvalidInputError(f"region of event {eid!r} has cyclic flow constraints")
        action_plans[eid] = tuple(order)

    preds: dict[str, list[str]] = {eid: [] for eid in behavior.events}
    for e in precedence:
        preds[e.dst].append(e.src)
    loop_preds: dict[str, list[str]] = {eid: [] for eid in behavior.events}
    for e in loop_edges:
        loop_preds[e.dst].append(e.src)

    done = {eid: 0 for eid in behavior.events}

    def ready(eid: str) -> bool:
        if done[eid] >= totals[eid]:
            return False
        for u in preds[eid]:
            same_body = body_of.get(u) is not None and body_of.get(u) == body_of.get(eid)
            if same_body:
                if done[u] < done[eid] + 1:
                    return False
            elif done[u] < totals[u]:
                return False
        for u in loop_preds[eid]:
            if done[u] < done[eid]:
                return False
        return True

    steps: list[TraceStep] = []
    while True:
        if all(done[eid] >= totals[eid] for eid in behavior.events):
            break
        candidate = next((eid for eid in behavior.events if ready(eid)), None)
        if candidate is None:
            raise InvalidInputError(
                "simulation deadlocked: incomplete events remain but none is ready"
            )
        if len(steps) >= config.max_steps:
            raise StepBudgetError(
                f"step budget of {config.max_steps} exhausted with events still pending",
                trace=Trace(tuple(steps)),
            )
        done[candidate] += 1
        steps.append(TraceStep(len(steps), candidate, action_plans[candidate]))
    return Trace(tuple(steps))


def enumerate_orderings(
    behavior: BehaviorModel, limit: int | None = None
) -> list[tuple[str, ...]]:
    """Every admissible event sequence for a loop-bounded chronology.

    Loops are unrolled into per-iteration occurrences (at most
    ENUMERATION_NODE_CAP in total, else TooLargeError) and all linear
    extensions of the resulting DAG are produced in deterministic order
    (earliest-declared event first at every choice point). The output can
    be factorial in size; pass ``limit`` to truncate. Raises
    UndefinedReferenceError for edges naming unknown events,
    InvalidInputError for cycles without bounded back edges or malformed
    loops.
    """
    known = set(behavior.events)
    for e in behavior.edges:
        for endpoint in (e.src, e.dst):
            if endpoint not in known:
                raise UndefinedReferenceError(f"behavior edge names unknown event {endpoint!r}")

    violations = [v for v in _behavior_only_violations(behavior) if v.severity is Severity.ERROR]
    if violations:
        raise InvalidInputError(
            "behavior is not enumerable: " + "; ".join(v.render() for v in violations),
            report=sorted_report(violations),
        )

    totals, body_of, precedence, loop_edges = _plan_totals(behavior)

    nodes: list[tuple[str, int]] = [
        (eid, k) for eid in behavior.events for k in range(1, totals[eid] + 1)
    ]
    if len(nodes) > ENUMERATION_NODE_CAP:
        raise TooLargeError(
            f"{len(nodes)} unrolled event occurrences exceed the cap of {ENUMERATION_NODE_CAP}"
        )
    pos = {node: i for i, node in enumerate(nodes)}
    succs: list[list[int]] = [[] for _ in nodes]
    indeg = [0] * len(nodes)

    def add(a: tuple[str, int], b: tuple[str, int]) -> None:
        succs[pos[a]].append(pos[b])
        indeg[pos[b]] += 1

    for e in precedence:
        same_body = body_of.get(e.src) is not None and body_of.get(e.src) == body_of.get(e.dst)
        if same_body:
            for k in range(1, totals[e.src] + 1):
                add((e.src, k), (e.dst, k))
        else:
            add((e.src, totals[e.src]), (e.dst, 1))
    for e in loop_edges:
        for k in range(1, totals[e.src]):
            add((e.src, k), (e.dst, k + 1))

    results: list[tuple[str, ...]] = []
    chosen = [False] * len(nodes)
    sequence: list[str] = []

    def backtrack() -> bool:
        """Returns False when the limit cut off enumeration."""
        if len(sequence) == len(nodes):
            results.append(tuple(sequence))
            return limit is None or len(results) < limit
        for i, node in enumerate(nodes):
            if chosen[i] or indeg[i] > 0:
                continue
            chosen[i] = True
            for j in succs[i]:
                indeg[j] -= 1
            sequence.append(node[0])
            keep_going = backtrack()
            sequence.pop()
            for j in succs[i]:
                indeg[j] += 1
            chosen[i] = False
            if not keep_going:
                return False
        return True

    backtrack()
    return results


def _behavior_only_violations(behavior: BehaviorModel):
    """Structural loop/cycle checks without any event or region context."""
    from .dynamics import Event, Region  # local: avoids polluting module API
    from .model import StaticModel

    dummy_static = StaticModel(name="_", thimacs=(), actions=(), edges=())
    dummy_events = tuple(
        Event(id=eid, name=eid, region=Region(action_ids=(f"_{eid}",))) for eid in behavior.events
    )
    report = validate_behavior(behavior, dummy_events, dummy_static, allow_disconnected_regions=True)
    return [v for v in report.violations if v.rule in ("UNBOUNDED_LOOP", "LOOP_SHAPE", "LOOP_OVERLAP")]
