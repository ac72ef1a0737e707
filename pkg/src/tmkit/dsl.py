"""Textual notation for model bundles: parser and canonical printer.

Layout of a bundle file (all blocks after the first optional):

    model Name {
      thimac Outer {
        create seed "optional label";
        thimac Inner { ... }
      }
      flow Outer.seed -> Outer.Inner.step @1;
      trigger Outer.Inner.step -> Outer.other;
    }

    events {
      event E1 "label" {
        region: Outer.seed, Outer.Inner;
        time: "t0";
      }
    }

    behavior {
      E1 -> E2;
      E2 -> E1 [repeat <= 3];
    }

Keywords are reserved words and cannot name thimacs, actions, or events.
Region paths may name actions or whole thimacs (meaning every action in
them, sub-thimacs included). The printer emits the canonical form: thimacs
in pre-order with actions before sub-thimacs, edges after all thimacs,
regions expanded to resolved action ids; parsing its output reproduces the
bundle exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .dynamics import BehaviorEdge, BehaviorModel, Event, define_event, validate_behavior
from .errors import DuplicateIdError, ParseError, UndefinedReferenceError
from .model import (
    ActionKind,
    Mode,
    ModelBuilder,
    StaticModel,
    ValidationReport,
    merge_reports,
)
from .validation import validate_static

KEYWORDS = frozenset(
    {
        "model",
        "thimac",
        "create",
        "process",
        "release",
        "transfer",
        "receive",
        "flow",
        "trigger",
        "events",
        "event",
        "region",
        "time",
        "behavior",
        "repeat",
    }
)
ACTION_KEYWORDS = ("create", "process", "release", "transfer", "receive")
_PUNCT_TWO = ("->", "<=")
_PUNCT_ONE = "{};,:@.[]"


@dataclass(frozen=True)
class SourceSpan:
    line: int  # 1-based
    col: int  # 1-based

    def __str__(self) -> str:
        return f"{self.line}:{self.col}"


@dataclass(frozen=True)
class ModelBundle:
    static: StaticModel
    events: tuple[Event, ...] = ()
    behavior: BehaviorModel = BehaviorModel()
    spans: dict = field(default_factory=dict, compare=False, repr=False)

    def event_map(self) -> dict[str, Event]:
        return {e.id: e for e in self.events}


@dataclass(frozen=True)
class _Token:
    type: str  # KEYWORD | IDENT | INT | STRING | PUNCT | EOF
    value: str
    span: SourceSpan


def _tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    i, line, col = 0, 1, 1
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            i, line, col = i + 1, line + 1, 1
            continue
        if ch in " \t\r":
            i, col = i + 1, col + 1
            continue
        if text.startswith("//", i):
            while i < n and text[i] != "\n":
                i += 1
            continue
        span = SourceSpan(line, col)
        if ch == '"':
            i += 1
            col += 1
            parts: list[str] = []
            while True:
                if i >= n or text[i] == "\n":
                    raise ParseError("unterminated string literal", span=span)
                c = text[i]
                if c == "\\":
                    if i + 1 >= n or text[i + 1] not in '"\\':
                        raise ParseError(
                            "bad escape in string literal (only \\\" and \\\\ are recognized)",
                            span=SourceSpan(line, col),
                        )
                    parts.append(text[i + 1])
                    i += 2
                    col += 2
                    continue
                if c == '"':
                    i += 1
                    col += 1
                    break
                parts.append(c)
                i += 1
                col += 1
            tokens.append(_Token("STRING", "".join(parts), span))
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(_Token("INT", text[i:j], span))
            col += j - i
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            word = text[i:j]
            tokens.append(_Token("KEYWORD" if word in KEYWORDS else "IDENT", word, span))
            col += j - i
            i = j
            continue
        two = text[i : i + 2]
        if two in _PUNCT_TWO:
            tokens.append(_Token("PUNCT", two, span))
            i += 2
            col += 2
            continue
        if ch in _PUNCT_ONE:
            tokens.append(_Token("PUNCT", ch, span))
            i += 1
            col += 1
            continue
        raise ParseError(f"unexpected character {ch!r}", span=span)
    tokens.append(_Token("EOF", "", SourceSpan(line, col)))
    return tokens


@dataclass
class _RawEdge:
    kind: str  # "flow" | "trigger"
    src: str
    src_span: SourceSpan
    dst: str
    dst_span: SourceSpan
    marker: int | None


class _Parser:
    def __init__(self, tokens: list[_Token]) -> None:
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def next(self) -> _Token:
        tok = self.tokens[self.pos]
        if tok.type != "EOF":
            self.pos += 1
        return tok

    def fail(self, tok: _Token, expected: tuple[str, ...]) -> ParseError:
        shown = tok.value if tok.type != "EOF" else "end of input"
        return ParseError(f"unexpected {shown!r}", span=tok.span, expected=expected)

    def expect_punct(self, value: str) -> _Token:
        tok = self.next()
        if tok.type != "PUNCT" or tok.value != value:
            raise self.fail(tok, (value,))
        return tok

    def expect_keyword(self, *words: str) -> _Token:
        tok = self.next()
        if tok.type != "KEYWORD" or tok.value not in words:
            raise self.fail(tok, words)
        return tok

    def expect_ident(self, what: str) -> _Token:
        tok = self.next()
        if tok.type != "IDENT":
            if tok.type == "KEYWORD":
                raise ParseError(
                    f"{tok.value!r} is a reserved word and cannot be used as {what}", span=tok.span
                )
            raise self.fail(tok, (what,))
        return tok

    def at_punct(self, value: str) -> bool:
        tok = self.peek()
        return tok.type == "PUNCT" and tok.value == value

    def at_keyword(self, *words: str) -> bool:
        tok = self.peek()
        return tok.type == "KEYWORD" and tok.value in words

    def parse_path(self, what: str = "a name") -> tuple[str, SourceSpan]:
        first = self.expect_ident(what)
        parts = [first.value]
        while self.at_punct("."):
            self.next()
            parts.append(self.expect_ident("a path segment").value)
        return ".".join(parts), first.span


def parse(text: str, allow_disconnected_regions: bool = False) -> ModelBundle:
    """Parse bundle text. Raises ParseError on malformed syntax,
    DuplicateIdError on sibling name reuse (both occurrences located),
    UndefinedReferenceError on unresolved edge/region/behavior references,
    and DisconnectedRegionError unless disconnected regions are allowed."""
    p = _Parser(_tokenize(text))
    spans: dict[str, SourceSpan] = {}
    raw_edges: list[_RawEdge] = []
    name_spans: dict[tuple[str | None, str], SourceSpan] = {}

    p.expect_keyword("model")
    model_name = p.expect_ident("a model name")
    mode = Mode.STRICT
    if p.peek().type == "IDENT" and p.peek().value in ("strict", "simplified"):
        # Optional mode word; plain `model Name {` means strict.
        mode = Mode(p.next().value)
    builder = ModelBuilder(model_name.value, mode=mode)
    p.expect_punct("{")

    def claim(scope: str | None, name: str, span: SourceSpan) -> None:
        prior = name_spans.get((scope, name))
        if prior is not None:
            where = scope or "the top level"
            raise DuplicateIdError(
                f"duplicate name {name!r} in {where} (first at {prior}, again at {span})",
                first_span=prior,
                second_span=span,
            )
        name_spans[(scope, name)] = span

    def parse_thimac(parent: str | None) -> None:
        name_tok = p.expect_ident("a thimac name")
        claim(parent, name_tok.value, name_tok.span)
        tid = builder.thimac(name_tok.value, parent)
        spans[tid] = name_tok.span
        p.expect_punct("{")
        while not p.at_punct("}"):
            if p.at_keyword("thimac"):
                p.next()
                parse_thimac(tid)
            elif p.at_keyword(*ACTION_KEYWORDS):
                kind_tok = p.next()
                action_tok = p.expect_ident("an action name")
                label = p.next().value if p.peek().type == "STRING" else None
                p.expect_punct(";")
                claim(tid, action_tok.value, action_tok.span)
                aid = builder.action(tid, ActionKind(kind_tok.value), action_tok.value, label)
                spans[aid] = action_tok.span
            else:
                raise p.fail(p.peek(), ("thimac", *ACTION_KEYWORDS, "}"))
        p.next()

    while not p.at_punct("}"):
        if p.at_keyword("thimac"):
            p.next()
            parse_thimac(None)
        elif p.at_keyword("flow", "trigger"):
            kind = p.next().value
            src, src_span = p.parse_path("an action path")
            p.expect_punct("->")
            dst, dst_span = p.parse_path("an action path")
            marker = None
            if p.at_punct("@"):
                p.next()
                marker_tok = p.next()
                if marker_tok.type != "INT":
                    raise p.fail(marker_tok, ("a marker number",))
                marker = int(marker_tok.value)
            p.expect_punct(";")
            raw_edges.append(_RawEdge(kind, src, src_span, dst, dst_span, marker))
        else:
            raise p.fail(p.peek(), ("thimac", "flow", "trigger", "}"))
    p.next()

    static_no_edges = builder.build()
    amap = static_no_edges.action_map()
    tmap = static_no_edges.thimac_map()
    for raw in raw_edges:
        for path, span in ((raw.src, raw.src_span), (raw.dst, raw.dst_span)):
            if path not in amap:
                if path in tmap:
                    raise UndefinedReferenceError(
                        f"edge endpoint {path!r} names a thimac; edges connect actions (at {span})",
                        span=span,
                    )
                raise UndefinedReferenceError(f"unknown action {path!r} (at {span})", span=span)
        builder.edge(raw.src, raw.dst, raw.kind, raw.marker)
    static = builder.build()

    events: list[Event] = []
    event_order: list[str] = []
    if p.at_keyword("events"):
        p.next()
        p.expect_punct("{")
        while not p.at_punct("}"):
            p.expect_keyword("event")
            id_tok = p.expect_ident("an event id")
            claim("events", id_tok.value, id_tok.span)
            name = p.next().value if p.peek().type == "STRING" else None
            p.expect_punct("{")
            p.expect_keyword("region")
            p.expect_punct(":")
            paths: list[tuple[str, SourceSpan]] = [p.parse_path("an action or thimac path")]
            while p.at_punct(","):
                p.next()
                paths.append(p.parse_path("an action or thimac path"))
            p.expect_punct(";")
            time = None
            if p.at_keyword("time"):
                p.next()
                p.expect_punct(":")
                time_tok = p.next()
                if time_tok.type != "STRING":
                    raise p.fail(time_tok, ("a quoted time string",))
                time = time_tok.value
                p.expect_punct(";")
            p.expect_punct("}")
            for path, span in paths:
                if path not in amap and path not in tmap:
                    raise UndefinedReferenceError(
                        f"region path {path!r} names no action or thimac (at {span})", span=span
                    )
            events.append(
                define_event(
                    static,
                    id_tok.value,
                    [path for path, _ in paths],
                    name=name,
                    time=time,
                    allow_disconnected=allow_disconnected_regions,
                )
            )
            event_order.append(id_tok.value)
            spans[id_tok.value] = id_tok.span
        p.next()

    behavior_edges: list[BehaviorEdge] = []
    if p.at_keyword("behavior"):
        p.next()
        p.expect_punct("{")
        known = set(event_order)
        while not p.at_punct("}"):
            src_tok = p.expect_ident("an event id")
            p.expect_punct("->")
            dst_tok = p.expect_ident("an event id")
            bound = None
            if p.at_punct("["):
                p.next()
                p.expect_keyword("repeat")
                p.expect_punct("<=")
                bound_tok = p.next()
                if bound_tok.type != "INT":
                    raise p.fail(bound_tok, ("a repeat bound",))
                bound = int(bound_tok.value)
                p.expect_punct("]")
            p.expect_punct(";")
            for tok in (src_tok, dst_tok):
                if tok.value not in known:
                    raise UndefinedReferenceError(
                        f"unknown event {tok.value!r} (at {tok.span})", span=tok.span
                    )
            behavior_edges.append(BehaviorEdge(src_tok.value, dst_tok.value, bound))
        p.next()

    trailing = p.peek()
    if trailing.type != "EOF":
        raise p.fail(trailing, ("events", "behavior", "end of input"))

    return ModelBundle(
        static=static,
        events=tuple(events),
        behavior=BehaviorModel(events=tuple(event_order), edges=tuple(behavior_edges)),
        spans=spans,
    )


def _quote(value: str) -> str:
    return '"' + value.replace("\\", "\\\\").replace('"', '\\"') + '"'


def print_bundle(bundle: ModelBundle) -> str:
    """Canonical text for a bundle; parse(print_bundle(b)) == b."""
    m = bundle.static
    amap = m.action_map()
    tmap = m.thimac_map()
    mode_word = "" if m.mode is Mode.STRICT else f" {m.mode.value}"
    out: list[str] = [f"model {m.name}{mode_word} {{"]

    def emit_thimac(tid: str, depth: int) -> None:
        t = tmap[tid]
        pad = "  " * depth
        out.append(f"{pad}thimac {t.name} {{")
        for aid in t.actions:
            a = amap[aid]
            label = f" {_quote(a.label)}" if a.label is not None else ""
            out.append(f"{pad}  {a.kind.value} {a.name}{label};")
        for child in t.children:
            emit_thimac(child, depth + 1)
        out.append(f"{pad}}}")

    roots = [t.id for t in m.thimacs if t.parent is None]
    for tid in roots:
        emit_thimac(tid, 1)
    if m.edges and roots:
        out.append("")
    for e in m.edges:
        marker = f" @{e.marker}" if e.marker is not None else ""
        out.append(f"  {e.kind.value} {e.src} -> {e.dst}{marker};")
    out.append("}")

    if bundle.events:
        out.append("")
        out.append("events {")
        for ev in bundle.events:
            label = f" {_quote(ev.name)}" if ev.name != ev.id else ""
            out.append(f"  event {ev.id}{label} {{")
            out.append(f"    region: {', '.join(ev.region.action_ids)};")
            if ev.time is not None:
                out.append(f"    time: {_quote(ev.time)};")
            out.append("  }")
        out.append("}")

    if bundle.behavior.edges:
        out.append("")
        out.append("behavior {")
        for be in bundle.behavior.edges:
            repeat = f" [repeat <= {be.bound}]" if be.bound is not None else ""
            out.append(f"  {be.src} -> {be.dst}{repeat};")
        out.append("}")

    return "\n".join(out) + "\n"


def validate_bundle(
    bundle: ModelBundle,
    relaxed_triggers: bool = False,
    allow_disconnected_regions: bool = False,
) -> ValidationReport:
    """Static rule table plus behavior cross-checks, one merged report."""
    static_report = validate_static(bundle.static, relaxed_triggers=relaxed_triggers)
    if not bundle.events and not bundle.behavior.events and not bundle.behavior.edges:
        return static_report
    behavior_report = validate_behavior(
        bundle.behavior,
        bundle.events,
        bundle.static,
        allow_disconnected_regions=allow_disconnected_regions,
    )
    return merge_reports(static_report, behavior_report)
