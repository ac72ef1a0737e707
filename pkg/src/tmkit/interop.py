"""Interchange: JSON documents, Graphviz DOT rendering, and import of
activity-diagram documents into validated bundles.

Model JSON (schema version 1): containment is carried by ``parent`` on
thimacs and ``owner`` on actions; children/action lists are derived, so a
document cannot contradict itself. Optional fields are written explicitly
as null. Structural problems raise SchemaError with a JSON pointer;
``"version" != 1`` raises SchemaVersionError.

Activity-diagram JSON describes partitions, nodes (action/initial/final)
and control/object edges. import_activity translates object flows into
create/flow/trigger structure, runs gate normalization so the result is
strict-valid by construction, and derives one event per action node plus
a chronology from the control edges.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass

from .dsl import ModelBundle
from .dynamics import BehaviorEdge, BehaviorModel, Event, Region
from .errors import (
    MultipleInitialError,
    ParseError,
    SchemaError,
    SchemaVersionError,
    UndefinedReferenceError,
    UnsupportedNodeError,
)
from .model import (
    ActionKind,
    ActionNode,
    Edge,
    EdgeKind,
    Mode,
    ModelBuilder,
    StaticModel,
    Thimac,
)
from .normalize import normalize_with_expansions
from .sim import Trace

SCHEMA_VERSION = 1

_ACTION_KINDS = {k.value for k in ActionKind}
_EDGE_KINDS = {k.value for k in EdgeKind}
_MODES = {m.value for m in Mode}


# --------------------------- model JSON ---------------------------


def export_json(bundle: ModelBundle) -> str:
    """Version-1 JSON text for a bundle (a two-space-indented document)."""
    return json.dumps(bundle_to_obj(bundle), indent=2) + "\n"


def bundle_to_obj(bundle: ModelBundle) -> dict:
    """Plain-data form of a bundle; what export_json serializes."""
    m = bundle.static
    return {
        "version": SCHEMA_VERSION,
        "name": m.name,
        "mode": m.mode.value,
        "thimacs": [{"id": t.id, "name": t.name, "parent": t.parent} for t in m.thimacs],
        "actions": [
            {"id": a.id, "kind": a.kind.value, "owner": a.owner, "label": a.label}
            for a in m.actions
        ],
        "edges": [
            {"src": e.src, "dst": e.dst, "kind": e.kind.value, "marker": e.marker}
            for e in m.edges
        ],
        "events": [
            {"id": ev.id, "name": ev.name, "region": list(ev.region.action_ids), "time": ev.time}
            for ev in bundle.events
        ],
        "behavior": [
            {"from": be.src, "to": be.dst, "repeat": be.bound} for be in bundle.behavior.edges
        ],
    }


def _want_str(doc: dict, key: str, pointer: str, nullable: bool = False, optional: bool = False):
    if key not in doc:
        if optional:
            return None
        raise SchemaError(f"missing required key {key!r}", pointer=pointer)
    value = doc[key]
    if value is None and nullable:
        return None
    if not isinstance(value, str):
        raise SchemaError(f"key {key!r} must be a string", pointer=f"{pointer}/{key}")
    return value


def _want_list(doc: dict, key: str, pointer: str, optional: bool = False) -> list:
    if key not in doc:
        if optional:
            return []
        raise SchemaError(f"missing required key {key!r}", pointer=pointer)
    value = doc[key]
    if not isinstance(value, list):
        raise SchemaError(f"key {key!r} must be an array", pointer=f"{pointer}/{key}")
    return value


def _want_obj(item, pointer: str) -> dict:
    if not isinstance(item, dict):
        raise SchemaError("array item must be an object", pointer=pointer)
    return item


def _check_version(doc: dict) -> None:
    if not isinstance(doc, dict):
        raise SchemaError("document must be a JSON object", pointer="")
    if "version" not in doc:
        raise SchemaError("missing required key 'version'", pointer="")
    version = doc["version"]
    if not isinstance(version, int) or isinstance(version, bool):
        raise SchemaError("key 'version' must be an integer", pointer="/version")
    if version != SCHEMA_VERSION:
        raise SchemaVersionError(
            f"unsupported document version {version}; this build reads version {SCHEMA_VERSION}"
        )


def import_json(doc: str | bytes | dict) -> ModelBundle:
    """Rebuild a bundle from version-1 JSON text (or an already-parsed object).

    Raises SchemaVersionError for other versions and SchemaError (with a
    JSON pointer) for any structural problem: malformed JSON, wrong types,
    duplicate ids, or references to undeclared ids.
    """
    if isinstance(doc, (str, bytes)):
        try:
            doc = json.loads(doc)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"not valid JSON: {exc}", pointer="") from exc
    _check_version(doc)
    name = _want_str(doc, "name", "")
    mode_text = _want_str(doc, "mode", "", optional=True) or Mode.STRICT.value
    if mode_text not in _MODES:
        raise SchemaError(f"unknown mode {mode_text!r}", pointer="/mode")

    thimac_items = _want_list(doc, "thimacs", "")
    action_items = _want_list(doc, "actions", "")
    edge_items = _want_list(doc, "edges", "")
    event_items = _want_list(doc, "events", "", optional=True)
    behavior_items = _want_list(doc, "behavior", "", optional=True)

    seen_ids: set[str] = set()
    thimac_rows: list[tuple[str, str, str | None]] = []
    for i, item in enumerate(thimac_items):
        pointer = f"/thimacs/{i}"
        obj = _want_obj(item, pointer)
        tid = _want_str(obj, "id", pointer)
        if not tid:
            raise SchemaError("id must be non-empty", pointer=f"{pointer}/id")
        if tid in seen_ids:
            raise SchemaError(f"duplicate id {tid!r}", pointer=f"{pointer}/id")
        seen_ids.add(tid)
        tname = _want_str(obj, "name", pointer)
        parent = _want_str(obj, "parent", pointer, nullable=True)
        thimac_rows.append((tid, tname, parent))
    thimac_ids = {tid for tid, _, _ in thimac_rows}
    for i, (tid, _, parent) in enumerate(thimac_rows):
        if parent is not None and parent not in thimac_ids:
            raise SchemaError(f"unknown parent {parent!r}", pointer=f"/thimacs/{i}/parent")
        if parent == tid:
            raise SchemaError("thimac cannot be its own parent", pointer=f"/thimacs/{i}/parent")

    actions: list[ActionNode] = []
    for i, item in enumerate(action_items):
        pointer = f"/actions/{i}"
        obj = _want_obj(item, pointer)
        aid = _want_str(obj, "id", pointer)
        if not aid:
            raise SchemaError("id must be non-empty", pointer=f"{pointer}/id")
        if aid in seen_ids:
            raise SchemaError(f"duplicate id {aid!r}", pointer=f"{pointer}/id")
        seen_ids.add(aid)
        kind = _want_str(obj, "kind", pointer)
        if kind not in _ACTION_KINDS:
            raise SchemaError(f"unknown action kind {kind!r}", pointer=f"{pointer}/kind")
        owner = _want_str(obj, "owner", pointer)
        if owner not in thimac_ids:
            raise SchemaError(f"unknown owner thimac {owner!r}", pointer=f"{pointer}/owner")
        label = _want_str(obj, "label", pointer, nullable=True, optional=True)
        actions.append(ActionNode(id=aid, kind=ActionKind(kind), owner=owner, label=label))
    action_ids = {a.id for a in actions}

    edges: list[Edge] = []
    for i, item in enumerate(edge_items):
        pointer = f"/edges/{i}"
        obj = _want_obj(item, pointer)
        src = _want_str(obj, "src", pointer)
        dst = _want_str(obj, "dst", pointer)
        kind = _want_str(obj, "kind", pointer)
        if kind not in _EDGE_KINDS:
            raise SchemaError(f"unknown edge kind {kind!r}", pointer=f"{pointer}/kind")
        for key, endpoint in (("src", src), ("dst", dst)):
            if endpoint not in action_ids:
                raise SchemaError(f"unknown action {endpoint!r}", pointer=f"{pointer}/{key}")
        marker = obj.get("marker")
        if marker is not None and (not isinstance(marker, int) or isinstance(marker, bool) or marker < 0):
            raise SchemaError("marker must be null or a non-negative integer", pointer=f"{pointer}/marker")
        edges.append(Edge(src=src, dst=dst, kind=EdgeKind(kind), marker=marker))

    children: dict[str, list[str]] = {tid: [] for tid in thimac_ids}
    owned: dict[str, list[str]] = {tid: [] for tid in thimac_ids}
    for tid, _, parent in thimac_rows:
        if parent is not None:
            children[parent].append(tid)
    for a in actions:
        owned[a.owner].append(a.id)
    thimacs = tuple(
        Thimac(id=tid, name=tname, parent=parent, children=tuple(children[tid]), actions=tuple(owned[tid]))
        for tid, tname, parent in thimac_rows
    )
    static = StaticModel(
        name=name, thimacs=thimacs, actions=tuple(actions), edges=tuple(edges), mode=Mode(mode_text)
    )

    events: list[Event] = []
    event_ids: set[str] = set()
    for i, item in enumerate(event_items):
        pointer = f"/events/{i}"
        obj = _want_obj(item, pointer)
        eid = _want_str(obj, "id", pointer)
        if not eid:
            raise SchemaError("id must be non-empty", pointer=f"{pointer}/id")
        if eid in event_ids:
            raise SchemaError(f"duplicate event id {eid!r}", pointer=f"{pointer}/id")
        event_ids.add(eid)
        ename = _want_str(obj, "name", pointer)
        region_items = _want_list(obj, "region", pointer)
        if not region_items:
            raise SchemaError("region must be a non-empty array", pointer=f"{pointer}/region")
        region_ids: list[str] = []
        for j, rid in enumerate(region_items):
            if not isinstance(rid, str):
                raise SchemaError("region entries must be strings", pointer=f"{pointer}/region/{j}")
            if rid not in action_ids:
                raise SchemaError(f"unknown action {rid!r}", pointer=f"{pointer}/region/{j}")
            region_ids.append(rid)
        time = _want_str(obj, "time", pointer, nullable=True, optional=True)
        events.append(Event(id=eid, name=ename, region=Region(tuple(region_ids)), time=time))

    behavior_edges: list[BehaviorEdge] = []
    for i, item in enumerate(behavior_items):
        pointer = f"/behavior/{i}"
        obj = _want_obj(item, pointer)
        src = _want_str(obj, "from", pointer)
        dst = _want_str(obj, "to", pointer)
        for key, endpoint in (("from", src), ("to", dst)):
            if endpoint not in event_ids:
                raise SchemaError(f"unknown event {endpoint!r}", pointer=f"{pointer}/{key}")
        repeat = obj.get("repeat")
        if repeat is not None and (not isinstance(repeat, int) or isinstance(repeat, bool) or repeat < 1):
            raise SchemaError("repeat must be null or an integer >= 1", pointer=f"{pointer}/repeat")
        behavior_edges.append(BehaviorEdge(src=src, dst=dst, bound=repeat))

    return ModelBundle(
        static=static,
        events=tuple(events),
        behavior=BehaviorModel(events=tuple(ev.id for ev in events), edges=tuple(behavior_edges)),
    )


def trace_to_json(trace: Trace) -> dict:
    return {
        "steps": [
            {"index": s.index, "event": s.event_id, "actions": list(s.actions)} for s in trace.steps
        ]
    }


# --------------------------- DOT rendering ---------------------------


def _dot_quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _cluster_token(path: str, taken: set[str]) -> str:
    base = "cluster_" + re.sub(r"[^A-Za-z0-9_]", "_", path)
    token = base
    n = 1
    while token in taken:
        n += 1
        token = f"{base}_{n}"
    taken.add(token)
    return token


def export_dot(bundle: ModelBundle, show_events: bool = False) -> str:
    """Graphviz text: one cluster per thimac (nested), box nodes per action,
    solid edges for flows (marker as edge label), dashed for triggers.
    With show_events, each event becomes a note node dotted to its region.
    """
    m = bundle.static
    amap = m.action_map()
    tmap = m.thimac_map()
    taken: set[str] = set()
    out: list[str] = [f"digraph {_dot_quote(m.name)} {{"]
    out.append("  rankdir=LR;")
    out.append("  node [shape=box];")

    def emit_thimac(tid: str, depth: int) -> None:
        t = tmap[tid]
        pad = "  " * depth
        out.append(f"{pad}subgraph {_cluster_token(tid, taken)} {{")
        out.append(f"{pad}  label={_dot_quote(t.name)};")
        for aid in t.actions:
            a = amap[aid]
            text = f"{a.kind.value}: {a.label if a.label is not None else a.name}"
            out.append(f"{pad}  {_dot_quote(aid)} [label={_dot_quote(text)}];")
        for child in t.children:
            emit_thimac(child, depth + 1)
        out.append(f"{pad}}}")

    for t in m.thimacs:
        if t.parent is None:
            emit_thimac(t.id, 1)

    for e in m.edges:
        attrs: list[str] = []
        if e.kind is EdgeKind.TRIGGER:
            attrs.append("style=dashed")
        if e.marker is not None:
            attrs.append(f"label={_dot_quote(str(e.marker))}")
        suffix = f" [{', '.join(attrs)}]" if attrs else ""
        out.append(f"  {_dot_quote(e.src)} -> {_dot_quote(e.dst)}{suffix};")

    if show_events:
        for ev in bundle.events:
            node_id = f"event:{ev.id}"
            text = f"{ev.id}: {ev.name}" if ev.name != ev.id else ev.id
            out.append(f"  {_dot_quote(node_id)} [shape=note, label={_dot_quote(text)}];")
            for aid in ev.region.action_ids:
                out.append(
                    f"  {_dot_quote(node_id)} -> {_dot_quote(aid)} [style=dotted, arrowhead=none];"
                )

    out.append("}")
    return "\n".join(out) + "\n"


def check_dot(text: str) -> None:
    """Independent well-formedness check over emitted DOT text.

    Accepts the subset this package emits: a named digraph containing
    attribute statements, nested clusters with labels, quoted node
    statements with attribute lists, and quoted edge statements. Verifies
    brace balance, statement shape, unique node declarations, and that
    every edge endpoint was declared as a node. Raises ParseError.
    """
    tokens = _dot_tokenize(text)
    pos = 0

    def peek() -> tuple[str, str]:
        return tokens[pos] if pos < len(tokens) else ("EOF", "")

    def take(expected_type: str | None = None, expected_value: str | None = None) -> tuple[str, str]:
        nonlocal pos
        tok = peek()
        if expected_type is not None and tok[0] != expected_type:
            raise ParseError(f"dot check: expected {expected_type}, found {tok[1]!r}")
        if expected_value is not None and tok[1] != expected_value:
            raise ParseError(f"dot check: expected {expected_value!r}, found {tok[1]!r}")
        pos += 1
        return tok

    declared: set[str] = set()
    pending_edges: list[tuple[str, str]] = []
    cluster_names: set[str] = set()

    def parse_attr_list() -> None:
        take("PUNCT", "[")
        while True:
            take("NAME")
            take("PUNCT", "=")
            kind, _ = peek()
            if kind not in ("NAME", "STRING"):
                raise ParseError("dot check: attribute value must be a name or quoted string")
            take()
            if peek() == ("PUNCT", ","):
                take()
                continue
            break
        take("PUNCT", "]")

    def parse_body() -> None:
        while True:
            kind, value = peek()
            if (kind, value) == ("PUNCT", "}"):
                return
            if kind == "EOF":
                raise ParseError("dot check: unexpected end of input inside a block")
            if kind == "NAME" and value == "subgraph":
                take()
                _, cluster = take("NAME")
                if not cluster.startswith("cluster_"):
                    raise ParseError(f"dot check: subgraph {cluster!r} is not a cluster")
                if cluster in cluster_names:
                    raise ParseError(f"dot check: duplicate cluster {cluster!r}")
                cluster_names.add(cluster)
                take("PUNCT", "{")
                parse_body()
                take("PUNCT", "}")
                continue
            if kind == "NAME":
                take()
                nxt = peek()
                if nxt == ("PUNCT", "="):  # e.g. rankdir=LR; label="...";
                    take()
                    vk, _ = take()
                    if vk not in ("NAME", "STRING"):
                        raise ParseError("dot check: attribute value must be a name or quoted string")
                elif nxt == ("PUNCT", "["):  # e.g. node [shape=box];
                    parse_attr_list()
                else:
                    raise ParseError(f"dot check: unexpected token after {value!r}")
                take("PUNCT", ";")
                continue
            if kind == "STRING":
                _, node = take()
                nxt = peek()
                if nxt == ("PUNCT", "->"):
                    take()
                    _, target = take("STRING")
                    pending_edges.append((node, target))
                    if peek() == ("PUNCT", "["):
                        parse_attr_list()
                elif nxt == ("PUNCT", "["):
                    if node in declared:
                        raise ParseError(f"dot check: node {node!r} declared twice")
                    declared.add(node)
                    parse_attr_list()
                else:
                    raise ParseError(f"dot check: unexpected token after node {node!r}")
                take("PUNCT", ";")
                continue
            raise ParseError(f"dot check: unexpected token {value!r}")

    take("NAME", "digraph")
    take("STRING")
    take("PUNCT", "{")
    parse_body()
    take("PUNCT", "}")
    if peek()[0] != "EOF":
        raise ParseError("dot check: trailing content after closing brace")
    for src, dst in pending_edges:
        for endpoint in (src, dst):
            if endpoint not in declared:
                raise ParseError(f"dot check: edge endpoint {endpoint!r} was never declared")


def _dot_tokenize(text: str) -> list[tuple[str, str]]:
    tokens: list[tuple[str, str]] = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch in " \t\r\n":
            i += 1
            continue
        if ch == '"':
            i += 1
            parts: list[str] = []
            while True:
                if i >= n:
                    raise ParseError("dot check: unterminated string")
                c = text[i]
                if c == "\\" and i + 1 < n:
                    parts.append(text[i + 1])
                    i += 2
                    continue
                if c == '"':
                    i += 1
                    break
                parts.append(c)
                i += 1
            tokens.append(("STRING", "".join(parts)))
            continue
        if ch.isalnum() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(("NAME", text[i:j]))
            i = j
            continue
        if text.startswith("->", i):
            tokens.append(("PUNCT", "->"))
            i += 2
            continue
        if ch in "{}[];=,":
            tokens.append(("PUNCT", ch))
            i += 1
            continue
        raise ParseError(f"dot check: unexpected character {ch!r}")
    return tokens


# --------------------------- activity-diagram import ---------------------------


@dataclass(frozen=True)
class AdPartition:
    id: str
    name: str


@dataclass(frozen=True)
class AdNode:
    id: str
    kind: str  # "action" | "initial" | "final" (anything else is rejected later)
    name: str
    partition: str | None = None


@dataclass(frozen=True)
class AdEdge:
    src: str
    dst: str
    kind: str  # "control" | "object"
    object_name: str | None = None


@dataclass(frozen=True)
class AdDocument:
    name: str
    partitions: tuple[AdPartition, ...]
    nodes: tuple[AdNode, ...]
    edges: tuple[AdEdge, ...]


def load_ad_document(doc: dict) -> AdDocument:
    """Shape-check an activity-diagram JSON document (version 1)."""
    _check_version(doc)
    name = _want_str(doc, "name", "")
    partitions: list[AdPartition] = []
    seen_partitions: set[str] = set()
    for i, item in enumerate(_want_list(doc, "partitions", "", optional=True)):
        pointer = f"/partitions/{i}"
        obj = _want_obj(item, pointer)
        pid = _want_str(obj, "id", pointer)
        if pid in seen_partitions:
            raise SchemaError(f"duplicate partition id {pid!r}", pointer=f"{pointer}/id")
        seen_partitions.add(pid)
        partitions.append(AdPartition(id=pid, name=_want_str(obj, "name", pointer)))

    nodes: list[AdNode] = []
    seen_nodes: set[str] = set()
    for i, item in enumerate(_want_list(doc, "nodes", "")):
        pointer = f"/nodes/{i}"
        obj = _want_obj(item, pointer)
        nid = _want_str(obj, "id", pointer)
        if nid in seen_nodes:
            raise SchemaError(f"duplicate node id {nid!r}", pointer=f"{pointer}/id")
        seen_nodes.add(nid)
        kind = _want_str(obj, "kind", pointer)
        node_name = _want_str(obj, "name", pointer, optional=True)
        partition = _want_str(obj, "partition", pointer, nullable=True, optional=True)
        nodes.append(AdNode(id=nid, kind=kind, name=node_name if node_name is not None else nid, partition=partition))

    edges: list[AdEdge] = []
    for i, item in enumerate(_want_list(doc, "edges", "", optional=True)):
        pointer = f"/edges/{i}"
        obj = _want_obj(item, pointer)
        src = _want_str(obj, "from", pointer)
        dst = _want_str(obj, "to", pointer)
        kind = _want_str(obj, "kind", pointer)
        if kind not in ("control", "object"):
            raise SchemaError(f"unknown edge kind {kind!r}", pointer=f"{pointer}/kind")
        object_name = _want_str(obj, "objectName", pointer, nullable=True, optional=True)
        if kind == "object" and not object_name:
            raise SchemaError("object edges need an objectName", pointer=f"{pointer}/objectName")
        if kind == "control" and object_name is not None:
            raise SchemaError("objectName is only valid on object edges", pointer=f"{pointer}/objectName")
        edges.append(AdEdge(src=src, dst=dst, kind=kind, object_name=object_name))

    return AdDocument(name=name, partitions=tuple(partitions), nodes=tuple(nodes), edges=tuple(edges))


def _identifier_from(text: str, fallback: str) -> str:
    parts = re.findall(r"[A-Za-z0-9]+", text)
    word = "".join(p[:1].upper() + p[1:] for p in parts)
    if not word:
        word = fallback
    if word[0].isdigit():
        word = "n" + word
    return word


class _NameAllocator:
    """Deterministic unique identifiers per scope."""

    def __init__(self) -> None:
        self.used: dict[str | None, set[str]] = {}

    def allocate(self, scope: str | None, wanted: str) -> str:
        taken = self.used.setdefault(scope, set())
        name = wanted
        n = 1
        while name in taken:
            n += 1
            name = f"{wanted}{n}"
        taken.add(name)
        return name


def import_activity(doc: AdDocument) -> ModelBundle:
    """Translate an activity diagram into a strict-valid bundle.

    Partitions become top-level thimacs (partitionless action nodes live in
    an ``Unassigned`` thimac); each action node becomes a process action and
    one event. An object edge whose source has no incoming object edge with
    the same objectName originates the object there: the process triggers a
    create, which flows to the consumer. Other object edges relay the
    object from process to process. Gate normalization then restores strict
    flow shape, and the fresh gate actions join the sender's event (egress)
    or the receiver's event (ingress). Control edges between action nodes
    become the chronology; at most one initial node is allowed, and final
    nodes terminate without constraints.
    """
    node_by_id = {n.id: n for n in doc.nodes}
    partition_ids = {p.id for p in doc.partitions}
    for n in doc.nodes:
        if n.kind not in ("action", "initial", "final"):
            raise UnsupportedNodeError(f"node {n.id!r}: unsupported kind {n.kind!r}")
        if n.partition is not None and n.partition not in partition_ids:
            raise UndefinedReferenceError(f"node {n.id!r} names unknown partition {n.partition!r}")
    initials = [n for n in doc.nodes if n.kind == "initial"]
    if len(initials) > 1:
        raise MultipleInitialError(
            f"{len(initials)} initial nodes ({', '.join(n.id for n in initials)}); at most one is allowed"
        )
    for e in doc.edges:
        for endpoint in (e.src, e.dst):
            if endpoint not in node_by_id:
                raise UndefinedReferenceError(f"edge references unknown node {endpoint!r}")
        if e.kind == "object":
            for endpoint in (e.src, e.dst):
                if node_by_id[endpoint].kind != "action":
                    raise UnsupportedNodeError(
                        f"object flow touches non-action node {endpoint!r}"
                    )
            if e.src == e.dst:
                raise UnsupportedNodeError(f"object flow from node {e.src!r} to itself")
        else:
            if node_by_id[e.src].kind == "final":
                raise UnsupportedNodeError(f"control flow leaving final node {e.src!r}")
            if node_by_id[e.dst].kind == "initial":
                raise UnsupportedNodeError(f"control flow entering initial node {e.dst!r}")

    builder = ModelBuilder(_identifier_from(doc.name, "Imported"), mode=Mode.SIMPLIFIED)
    names = _NameAllocator()

    thimac_of_partition: dict[str, str] = {}
    for p in doc.partitions:
        tid = builder.thimac(names.allocate(None, _identifier_from(p.name, p.id)))
        thimac_of_partition[p.id] = tid
    unassigned: str | None = None

    def thimac_for(node: AdNode) -> str:
        nonlocal unassigned
        if node.partition is not None:
            return thimac_of_partition[node.partition]
        if unassigned is None:
            unassigned = builder.thimac(names.allocate(None, "Unassigned"))
        return unassigned

    action_nodes = [n for n in doc.nodes if n.kind == "action"]
    process_of: dict[str, str] = {}
    for n in action_nodes:
        owner = thimac_for(n)
        pname = names.allocate(owner, _identifier_from(n.name, n.id))
        process_of[n.id] = builder.action(owner, ActionKind.PROCESS, pname, label=n.name)

    incoming_objects: dict[tuple[str, str], int] = {}
    for e in doc.edges:
        if e.kind == "object":
            incoming_objects[(e.dst, e.object_name)] = incoming_objects.get((e.dst, e.object_name), 0) + 1

    create_of: dict[tuple[str, str], str] = {}
    triggered_creates: dict[str, list[str]] = {n.id: [] for n in action_nodes}
    edge_count = 0
    flow_records: list[tuple[int, str, str]] = []  # (edge index, sender node, receiver node)
    for e in doc.edges:
        if e.kind != "object":
            continue
        originates = (e.src, e.object_name) not in incoming_objects
        if originates:
            key = (e.src, e.object_name)
            if key not in create_of:
                owner = thimac_for(node_by_id[e.src])
                cname = names.allocate(owner, _identifier_from(e.object_name, "Object"))
                create_of[key] = builder.action(owner, ActionKind.CREATE, cname, label=e.object_name)
                builder.trigger(process_of[e.src], create_of[key])
                edge_count += 1
                triggered_creates[e.src].append(create_of[key])
            flow_src = create_of[key]
        else:
            flow_src = process_of[e.src]
        builder.flow(flow_src, process_of[e.dst])
        flow_records.append((edge_count, e.src, e.dst))
        edge_count += 1

    normalized, expansions = normalize_with_expansions(builder.build())
    expansion_by_index = {x.index: x for x in expansions}

    extra_region: dict[str, list[str]] = {n.id: [] for n in action_nodes}
    for edge_index, sender, receiver in flow_records:
        expansion = expansion_by_index.get(edge_index)
        if expansion is None:
            continue
        extra_region[sender].extend(expansion.src_side)
        extra_region[receiver].extend(expansion.dst_side)

    action_order = {a.id: i for i, a in enumerate(normalized.actions)}
    events: list[Event] = []
    for i, n in enumerate(action_nodes, start=1):
        members = [process_of[n.id]] + triggered_creates[n.id] + extra_region[n.id]
        region = Region(tuple(sorted(set(members), key=action_order.__getitem__)))
        events.append(Event(id=f"E{i}", name=n.name, region=region))
    event_of_node = {n.id: ev.id for n, ev in zip(action_nodes, events)}

    behavior_edges = [
        BehaviorEdge(event_of_node[e.src], event_of_node[e.dst])
        for e in doc.edges
        if e.kind == "control"
        and node_by_id[e.src].kind == "action"
        and node_by_id[e.dst].kind == "action"
    ]

    return ModelBundle(
        static=normalized,
        events=tuple(events),
        behavior=BehaviorModel(
            events=tuple(ev.id for ev in events), edges=tuple(behavior_edges)
        ),
    )
