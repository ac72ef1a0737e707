"""Seeded random generators for property-style tests.

All generators take a `random.Random` so every test run is reproducible from
an integer seed. They construct inputs that satisfy the documented
*preconditions* of the operation under test and nothing more — the properties
the operations promise are asserted by the tests, never baked in here.
"""

from __future__ import annotations

import random
import string

from tmkit import (
    ActionKind,
    BehaviorEdge,
    BehaviorModel,
    Event,
    Mode,
    ModelBuilder,
    ModelBundle,
    StaticModel,
)

FIVE_KINDS = (
    ActionKind.CREATE,
    ActionKind.PROCESS,
    ActionKind.RELEASE,
    ActionKind.TRANSFER,
    ActionKind.RECEIVE,
)

# A few deliberately awkward labels to exercise quoting and escaping.
LABEL_POOL = (
    "plain",
    "two words",
    'says "hi"',
    "back\\slash",
    "trailing space ",
    "",
)


def _ident(rng: random.Random, prefix: str, taken: set[str]) -> str:
    while True:
        name = prefix + "".join(rng.choices(string.ascii_lowercase, k=3))
        if name not in taken:
            taken.add(name)
            return name


def gen_simplified_model(rng: random.Random, max_actions: int = 20) -> StaticModel:
    """A random Simplified-mode-valid model.

    Valid by construction: unique names, no self or duplicate edges, no flow
    into a create, at most one flow out of a release / into a receive, and
    triggers only from create/process into create.
    """
    builder = ModelBuilder("generated", mode=Mode.SIMPLIFIED)
    taken: set[str] = set()

    thimac_ids: list[str] = []
    for _ in range(rng.randint(1, 3)):
        tid = builder.thimac(_ident(rng, "t_", taken))
        thimac_ids.append(tid)
        if rng.random() < 0.3:
            thimac_ids.append(builder.thimac(_ident(rng, "s_", taken), parent=tid))

    n_actions = rng.randint(1, max_actions)
    kinds = rng.choices(FIVE_KINDS, weights=(30, 40, 10, 10, 10), k=n_actions)
    actions: list[tuple[str, ActionKind]] = []
    for kind in kinds:
        owner = rng.choice(thimac_ids)
        label = rng.choice(LABEL_POOL) if rng.random() < 0.4 else None
        aid = builder.action(owner, kind, _ident(rng, "a_", taken), label=label)
        actions.append((aid, kind))

    release_out: set[str] = set()
    receive_in: set[str] = set()
    used_pairs: set[tuple[str, str]] = set()
    for _ in range(rng.randint(0, int(1.5 * n_actions))):
        (src, src_kind), (dst, dst_kind) = rng.sample(actions, k=2) if n_actions >= 2 else [actions[0], actions[0]]
        if src == dst or (src, dst) in used_pairs:
            continue
        if dst_kind is ActionKind.CREATE:
            continue  # no flow may end at a create
        if src_kind is ActionKind.RELEASE and src in release_out:
            continue  # at most one flow out of a release
        if dst_kind is ActionKind.RECEIVE and dst in receive_in:
            continue  # at most one flow into a receive
        used_pairs.add((src, dst))
        release_out.add(src)
        receive_in.add(dst)
        builder.flow(src, dst, marker=rng.randint(1, 9) if rng.random() < 0.2 else None)

    trigger_sources = [a for a in actions if a[1] in (ActionKind.CREATE, ActionKind.PROCESS)]
    trigger_targets = [a for a in actions if a[1] is ActionKind.CREATE]
    for _ in range(rng.randint(0, max(1, n_actions // 4))):
        if not trigger_sources or not trigger_targets:
            break
        src = rng.choice(trigger_sources)[0]
        dst = rng.choice(trigger_targets)[0]
        if src == dst or (src, dst) in used_pairs:
            continue
        used_pairs.add((src, dst))
        builder.trigger(src, dst)

    return builder.build()


def gen_bundle(rng: random.Random) -> ModelBundle:
    """A random full bundle (static + events + behavior) for round-trips.

    Events use singleton regions, so region connectivity holds trivially and
    the interesting surface (names, times, bounds, markers, labels) gets all
    the variation.
    """
    static = gen_simplified_model(rng, max_actions=12)
    action_ids = [a.id for a in static.actions]
    rng.shuffle(action_ids)
    n_events = rng.randint(0, min(6, len(action_ids)))

    events = []
    for i in range(n_events):
        time = rng.choice(("t0", "after lunch", None, "1999-12-31"))
        name = rng.choice((f"E{i + 1}", "event " + rng.choice(LABEL_POOL)))
        events.append(Event(id=f"E{i + 1}", name=name,
                            region=_single_region(static, action_ids[i]),
                            time=time if rng.random() < 0.5 else None))

    edges = []
    used: set[tuple[str, str]] = set()
    for _ in range(rng.randint(0, 2 * n_events)):
        if n_events < 2:
            break
        i, j = sorted(rng.sample(range(n_events), k=2))
        src, dst = f"E{i + 1}", f"E{j + 1}"
        if rng.random() < 0.2:
            src, dst = dst, src  # a back edge; give it a bound
            bound = rng.randint(1, 3)
        else:
            bound = rng.randint(1, 3) if rng.random() < 0.1 else None
        if (src, dst) in used:
            continue
        used.add((src, dst))
        edges.append(BehaviorEdge(src=src, dst=dst, bound=bound))

    behavior = BehaviorModel(events=tuple(e.id for e in events), edges=tuple(edges))
    return ModelBundle(static=static, events=tuple(events), behavior=behavior)


def _single_region(static: StaticModel, action_id: str):
    from tmkit import Region

    return Region(action_ids=(action_id,))


def gen_behavior_bundle(rng: random.Random, max_events: int = 10) -> ModelBundle:
    """A bundle whose behavior is a random DAG over n singleton-region events.

    The static part is a row of create actions, one per event, so strict
    validation passes and each trace step fires exactly one action.
    """
    n = rng.randint(1, max_events)
    builder = ModelBuilder("dag")
    tid = builder.thimac("Box")
    aids = [builder.action(tid, ActionKind.CREATE, f"c{i + 1}") for i in range(n)]
    static = builder.build()

    events = tuple(
        Event(id=f"E{i + 1}", name=f"E{i + 1}", region=_single_region(static, aids[i]))
        for i in range(n)
    )
    # Aim for at least a tree's worth of edges: near-edgeless graphs on 10
    # nodes have millions of linear extensions, which tests nothing new and
    # swamps the enumeration oracle.
    max_pairs = n * (n - 1) // 2
    target = min(max_pairs, rng.randint(max(1, n - 1), 2 * n)) if n >= 2 else 0
    edges = []
    used: set[tuple[int, int]] = set()
    while len(used) < target:
        i, j = sorted(rng.sample(range(n), k=2))
        if (i, j) in used:
            continue
        used.add((i, j))
        edges.append(BehaviorEdge(src=f"E{i + 1}", dst=f"E{j + 1}"))

    behavior = BehaviorModel(events=tuple(e.id for e in events), edges=tuple(edges))
    return ModelBundle(static=static, events=events, behavior=behavior)


def gen_ad_document(rng: random.Random, max_actions: int = 8) -> dict:
    """A random activity-diagram document (raw JSON object form).

    Control edges over the action nodes form a DAG in declaration order
    (plus an occasional self-loop, which imports as a behavior self-loop);
    object edges ride on a subset of pairs, sometimes relaying one object
    name along a chain so the importer's origination rule sees both cases.
    """
    n_parts = rng.randint(0, 3)
    partitions = [
        {"id": f"p{i}", "name": rng.choice(("Desk", "Floor", "Back Office", "Lane 4"))}
        for i in range(n_parts)
    ]
    n_actions = rng.randint(1, max_actions)
    nodes = []
    for i in range(n_actions):
        node: dict = {"id": f"a{i}", "kind": "action",
                      "name": rng.choice(("Check stock", "File papers", "Ring bell", "Pack box"))}
        if partitions and rng.random() < 0.8:
            node["partition"] = rng.choice(partitions)["id"]
        nodes.append(node)

    edges: list[dict] = []
    used: set[tuple[str, str]] = set()
    for _ in range(rng.randint(0, 2 * n_actions)):
        if n_actions < 2:
            break
        i, j = sorted(rng.sample(range(n_actions), k=2))
        pair = (f"a{i}", f"a{j}")
        if pair in used:
            continue
        used.add(pair)
        edges.append({"from": pair[0], "to": pair[1], "kind": "control"})
    if rng.random() < 0.15:
        k = rng.randrange(n_actions)
        if (f"a{k}", f"a{k}") not in used:
            used.add((f"a{k}", f"a{k}"))
            edges.append({"from": f"a{k}", "to": f"a{k}", "kind": "control"})

    # Thread an object through a random increasing chain of actions, then
    # sprinkle independent one-hop objects.
    if n_actions >= 2 and rng.random() < 0.7:
        chain = sorted(rng.sample(range(n_actions), k=rng.randint(2, min(4, n_actions))))
        for a, b in zip(chain, chain[1:]):
            edges.append({"from": f"a{a}", "to": f"a{b}", "kind": "object",
                          "objectName": "parcel"})
    for _ in range(rng.randint(0, n_actions // 2)):
        if n_actions < 2:
            break
        i, j = sorted(rng.sample(range(n_actions), k=2))
        edges.append({"from": f"a{i}", "to": f"a{j}", "kind": "object",
                      "objectName": rng.choice(("form", "ticket", "key"))})

    if rng.random() < 0.7:
        nodes.insert(0, {"id": "start", "kind": "initial"})
        first = rng.randrange(n_actions)
        edges.append({"from": "start", "to": f"a{first}", "kind": "control"})
    if rng.random() < 0.7:
        nodes.append({"id": "end", "kind": "final"})
        last = rng.randrange(n_actions)
        edges.append({"from": f"a{last}", "to": "end", "kind": "control"})

    return {
        "version": 1,
        "name": "generated_ad",
        "partitions": partitions,
        "nodes": nodes,
        "edges": edges,
    }
