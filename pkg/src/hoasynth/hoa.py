"""Lexer, parser and printer for the supported subset of HOA v1.

The supported subset covers edge-labelled automata with explicit labels,
one start state, aliases, and the synthesis header item
``controllable-AP: INT*``.  Anything else that is valid HOA but outside
that subset raises :class:`UnsupportedFeature`.

Structural equality of documents ignores source positions, so
``parse(print_document(doc)) == doc`` for every accepted document.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Any, Iterable, Sequence, Union

from .errors import (
    BadHeader,
    HoaSyntaxError,
    LexError,
    OutOfRangeSet,
    UnsupportedFeature,
    UnsupportedNegatedSet,
)

# ---------------------------------------------------------------------------
# Expression trees shared by edge labels and acceptance formulas


@dataclass(frozen=True)
class Const:
    value: bool


@dataclass(frozen=True)
class Var:
    """Atomic proposition reference by index."""

    index: int


@dataclass(frozen=True)
class AliasRef:
    name: str  # without the leading '@'


@dataclass(frozen=True)
class Not:
    arg: Any


@dataclass(frozen=True)
class And:
    left: Any
    right: Any


@dataclass(frozen=True)
class Or:
    left: Any
    right: Any


@dataclass(frozen=True)
class Fin:
    set: int


@dataclass(frozen=True)
class Inf:
    set: int


TRUE = Const(True)
FALSE = Const(False)

LabelExpr = Union[Const, Var, AliasRef, Not, And, Or]
AccFormula = Union[Const, Fin, Inf, And, Or]


# ---------------------------------------------------------------------------
# Tokens


@dataclass(frozen=True)
class Token:
    kind: str
    value: Any
    line: int = field(default=0, compare=False)
    column: int = field(default=0, compare=False)

    def __str__(self):
        if self.kind == "STRING":
            return quote(self.value)
        if self.kind == "HEADER":
            return self.value + ":"
        if self.kind == "ALIAS":
            return "@" + self.value
        return str(self.value)


_PUNCT = set("!&|()[]{}")
_IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_-]*")
_ALIAS_RE = re.compile(r"@[A-Za-z0-9_-]+")
_INT_RE = re.compile(r"[0-9]+")
_DELIMITERS = {"--BODY--": "BODY", "--END--": "END", "--ABORT--": "ABORT"}
_ESCAPES = {'"': '"', "\\": "\\", "n": "\n", "t": "\t"}


def quote(s: str) -> str:
    out = s.replace("\\", "\\\\").replace('"', '\\"')
    out = out.replace("\n", "\\n").replace("\t", "\\t")
    return '"' + out + '"'


def tokenize(text: str) -> list[Token]:
    """Split HOA text into tokens, dropping whitespace and comments.

    Comments nest, as in the HOA grammar.  Strings may not span lines.
    The returned list always ends with an ``EOF`` token.
    """
    tokens = []
    i, n = 0, len(text)
    line, line_start = 1, 0

    def col(pos):
        return pos - line_start + 1

    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            line_start = i + 1
            i += 1
        elif ch.isspace():
            i += 1
        elif text.startswith("/*", i):
            start_line, start_col = line, col(i)
            depth = 1
            i += 2
            while depth:
                if i >= n:
                    raise LexError("unterminated comment", start_line, start_col)
                if text.startswith("/*", i):
                    depth += 1
                    i += 2
                elif text.startswith("*/", i):
                    depth -= 1
                    i += 2
                else:
                    if text[i] == "\n":
                        line += 1
                        line_start = i + 1
                    i += 1
        elif ch == '"':
            start = i
            i += 1
            buf = []
            while True:
                if i >= n or text[i] == "\n":
                    raise LexError("unterminated string", line, col(start))
                c = text[i]
                if c == '"':
                    i += 1
                    break
                if c == "\\":
                    if i + 1 >= n or text[i + 1] == "\n":
                        raise LexError("unterminated string", line, col(start))
                    esc = text[i + 1]
                    buf.append(_ESCAPES.get(esc, esc))
                    i += 2
                else:
                    buf.append(c)
                    i += 1
            tokens.append(Token("STRING", "".join(buf), line, col(start)))
        elif ch in _PUNCT:
            tokens.append(Token(ch, ch, line, col(i)))
            i += 1
        elif ch == "-":
            for text_, kind in _DELIMITERS.items():
                if text.startswith(text_, i):
                    tokens.append(Token(kind, text_, line, col(i)))
                    i += len(text_)
                    break
            else:
                raise LexError("unexpected character '-'", line, col(i))
        elif ch == "@":
            m = _ALIAS_RE.match(text, i)
            if not m:
                raise LexError("malformed alias name", line, col(i))
            tokens.append(Token("ALIAS", m.group()[1:], line, col(i)))
            i = m.end()
        elif ch.isdigit():
            m = _INT_RE.match(text, i)
            tokens.append(Token("INT", int(m.group()), line, col(i)))
            i = m.end()
        else:
            m = _IDENT_RE.match(text, i)
            if not m:
                raise LexError(f"unexpected character {ch!r}", line, col(i))
            start = i
            i = m.end()
            if i < n and text[i] == ":":
                tokens.append(Token("HEADER", m.group(), line, col(start)))
                i += 1
            else:
                tokens.append(Token("IDENT", m.group(), line, col(start)))
    tokens.append(Token("EOF", None, line, col(i)))
    return tokens


class _Stream:
    """Cursor over a token list with an implicit EOF sentinel."""

    def __init__(self, tokens: Sequence[Token]):
        self.tokens = list(tokens)
        if not self.tokens or self.tokens[-1].kind != "EOF":
            last = self.tokens[-1] if self.tokens else Token("EOF", None, 1, 1)
            self.tokens.append(Token("EOF", None, last.line, last.column))
        self.pos = 0

    def peek(self, offset=0) -> Token:
        return self.tokens[min(self.pos + offset, len(self.tokens) - 1)]

    def next(self) -> Token:
        tok = self.peek()
        if tok.kind != "EOF":
            self.pos += 1
        return tok

    def at(self, *kinds) -> bool:
        return self.peek().kind in kinds

    def expect(self, kind, what=None) -> Token:
        tok = self.peek()
        if tok.kind != kind:
            raise error_at(tok, f"expected {what or kind}, found {describe(tok)}")
        return self.next()

    def at_end(self) -> bool:
        return self.peek().kind == "EOF"


def describe(tok: Token) -> str:
    if tok.kind == "EOF":
        return "end of input" if tok.value is None else f"'{tok.value}'"
    return f"'{tok}'"


def error_at(tok: Token, message, cls=HoaSyntaxError):
    return cls(message, tok.line, tok.column)


def _as_stream(tokens) -> _Stream:
    if isinstance(tokens, str):
        return _Stream(tokenize(tokens))
    return _Stream(tokens)


# ---------------------------------------------------------------------------
# Label expressions:  '!' binds tighter than '&', which binds tighter than '|'


def _label_or(ts: _Stream):
    node = _label_and(ts)
    while ts.at("|"):
        ts.next()
        node = Or(node, _label_and(ts))
    return node


def _label_and(ts: _Stream):
    node = _label_not(ts)
    while ts.at("&"):
        ts.next()
        node = And(node, _label_not(ts))
    return node


def _label_not(ts: _Stream):
    if ts.at("!"):
        ts.next()
        return Not(_label_not(ts))
    return _label_atom(ts)


def _label_atom(ts: _Stream):
    tok = ts.next()
    if tok.kind == "INT":
        return Var(tok.value)
    if tok.kind == "ALIAS":
        return AliasRef(tok.value)
    if tok.kind == "IDENT" and tok.value in ("t", "f"):
        return Const(tok.value == "t")
    if tok.kind == "(":
        node = _label_or(ts)
        ts.expect(")", "')'")
        return node
    raise error_at(tok, f"expected a label atom, found {describe(tok)}")


def parse_label_expr(tokens) -> LabelExpr:
    """Parse a complete label expression from tokens or a string."""
    ts = _as_stream(tokens)
    node = _label_or(ts)
    if not ts.at_end():
        raise error_at(ts.peek(), f"unexpected {describe(ts.peek())} in label")
    return node


# ---------------------------------------------------------------------------
# Acceptance formulas


def _acc_or(ts: _Stream, count):
    node = _acc_and(ts, count)
    while ts.at("|"):
        ts.next()
        node = Or(node, _acc_and(ts, count))
    return node


def _acc_and(ts: _Stream, count):
    node = _acc_atom(ts, count)
    while ts.at("&"):
        ts.next()
        node = And(node, _acc_atom(ts, count))
    return node


def _acc_atom(ts: _Stream, count):
    tok = ts.next()
    if tok.kind == "(":
        node = _acc_or(ts, count)
        ts.expect(")", "')'")
        return node
    if tok.kind == "IDENT" and tok.value in ("t", "f"):
        return Const(tok.value == "t")
    if tok.kind == "IDENT" and tok.value in ("Fin", "Inf"):
        ts.expect("(", "'('")
        if ts.at("!"):
            raise error_at(
                ts.peek(), "negated acceptance sets are not supported",
                UnsupportedNegatedSet,
            )
        num = ts.expect("INT", "an acceptance set number")
        ts.expect(")", "')'")
        if num.value >= count:
            raise error_at(
                num,
                f"acceptance set {num.value} out of range (declared {count})",
                OutOfRangeSet,
            )
        return Fin(num.value) if tok.value == "Fin" else Inf(num.value)
    raise error_at(tok, f"expected Fin, Inf, t, f or '(', found {describe(tok)}")


def parse_acceptance(tokens) -> tuple[int, AccFormula]:
    """Parse the payload of an ``Acceptance:`` item into (set count, formula)."""
    ts = _as_stream(tokens)
    count = ts.expect("INT", "the number of acceptance sets").value
    formula = _acc_or(ts, count)
    if not ts.at_end():
        raise error_at(ts.peek(), f"unexpected {describe(ts.peek())} in acceptance")
    return count, formula


# ---------------------------------------------------------------------------
# Documents


@dataclass(frozen=True)
class HeaderItem:
    """One header item.

    ``value`` depends on the keyword: ``str`` for ``HOA``, ``int`` for
    ``States``/``Start``, ``(count, names)`` for ``AP``, ``(name, expr)``
    for ``Alias``, ``(count, formula)`` for ``Acceptance``, a tuple of ints
    for ``controllable-AP``, and a tuple of tokens for everything else.
    """

    keyword: str
    value: Any
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class RawEdge:
    label: LabelExpr
    dest: int
    colors: tuple[int, ...] = ()
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class RawState:
    index: int
    name: str | None = None
    edges: tuple[RawEdge, ...] = ()
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class RawDocument:
    header_items: tuple[HeaderItem, ...]
    body_states: tuple[RawState, ...]

    def items(self, keyword) -> list[HeaderItem]:
        return [h for h in self.header_items if h.keyword == keyword]

    def get(self, keyword, default=None):
        """Value of the first item with ``keyword``."""
        for h in self.header_items:
            if h.keyword == keyword:
                return h.value
        return default

    def controllable_ap(self) -> tuple[int, ...]:
        return self.get("controllable-AP", ())


KNOWN_ITEMS = (
    "HOA", "States", "Start", "AP", "Alias", "Acceptance", "acc-name",
    "controllable-AP", "tool", "name", "properties",
)


def _payload_ints(head: Token, payload: list[Token]):
    for tok in payload:
        if tok.kind != "INT":
            raise error_at(tok, f"{head.value}: expected an integer, found {describe(tok)}")
    return tuple(t.value for t in payload)


def _single_int(head: Token, payload: list[Token]) -> int:
    if len(payload) != 1 or payload[0].kind != "INT":
        if len(payload) > 1 and payload[1].kind == "&" and head.value == "Start":
            raise error_at(payload[1], "conjunctive start states are not supported",
                           UnsupportedFeature)
        tok = payload[0] if payload else head
        raise error_at(tok, f"{head.value}: expected a single integer")
    return payload[0].value


def _check_kinds(head: Token, payload: list[Token], kinds, what):
    for tok in payload:
        if tok.kind not in kinds:
            raise error_at(tok, f"{head.value}: expected {what}, found {describe(tok)}")


def _header_value(head: Token, payload: list[Token]):
    kw = head.value
    if kw == "HOA":
        if len(payload) != 1 or payload[0].kind != "IDENT":
            raise error_at(payload[0] if payload else head, "HOA: expected a version")
        if payload[0].value != "v1":
            raise error_at(payload[0], f"unsupported HOA version {payload[0].value}",
                           UnsupportedFeature)
        return "v1"
    if kw in ("States", "Start"):
        return _single_int(head, payload)
    if kw == "AP":
        if not payload or payload[0].kind != "INT":
            raise error_at(payload[0] if payload else head, "AP: expected a count")
        _check_kinds(head, payload[1:], ("STRING",), "a quoted name")
        return payload[0].value, tuple(t.value for t in payload[1:])
    if kw == "Alias":
        if not payload or payload[0].kind != "ALIAS":
            raise error_at(payload[0] if payload else head, "Alias: expected @name")
        return payload[0].value, parse_label_expr(payload[1:] + [_eof_after(head, payload)])
    if kw == "Acceptance":
        return parse_acceptance(payload + [_eof_after(head, payload)])
    if kw == "controllable-AP":
        return _payload_ints(head, payload)
    if kw == "acc-name":
        if not payload or payload[0].kind != "IDENT":
            raise error_at(payload[0] if payload else head, "acc-name: expected a name")
        _check_kinds(head, payload[1:], ("IDENT", "INT"), "an identifier or integer")
    elif kw == "tool":
        if not 1 <= len(payload) <= 2:
            raise error_at(head, "tool: expected one or two strings")
        _check_kinds(head, payload, ("STRING",), "a string")
    elif kw == "name":
        if len(payload) != 1:
            raise error_at(head, "name: expected one string")
        _check_kinds(head, payload, ("STRING",), "a string")
    elif kw == "properties":
        _check_kinds(head, payload, ("IDENT",), "a property name")
    return tuple(payload)


def _eof_after(head: Token, payload: list[Token]) -> Token:
    last = payload[-1] if payload else head
    return Token("EOF", None, last.line, last.column + len(str(last)))


def parse(text: str | bytes) -> RawDocument:
    """Parse extended-HOA text into a :class:`RawDocument`."""
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise LexError(f"input is not valid UTF-8: {exc}") from None
    ts = _Stream(tokenize(text))

    first = ts.peek()
    if first.kind != "HEADER" or first.value != "HOA":
        raise error_at(first, "document must start with 'HOA:'")

    items = []
    seen_controllable = False
    while ts.at("HEADER"):
        head = ts.next()
        if head.value == "State":
            raise error_at(head, "'State:' before '--BODY--'")
        payload = []
        while not ts.at("HEADER", "BODY", "END", "ABORT", "EOF"):
            payload.append(ts.next())
        kw = head.value
        if kw not in KNOWN_ITEMS and kw[0].isupper():
            raise error_at(head, f"unknown header item '{kw}:'")
        if kw == "controllable-AP":
            if seen_controllable:
                raise error_at(head, "controllable-AP: may appear at most once", BadHeader)
            seen_controllable = True
        items.append(HeaderItem(kw, _header_value(head, payload), head.line))
    if ts.at("ABORT"):
        raise error_at(ts.peek(), "--ABORT-- is not supported", UnsupportedFeature)
    ts.expect("BODY", "'--BODY--'")

    states = []
    while ts.at("HEADER"):
        states.append(_parse_state(ts))
    if ts.at("ABORT"):
        raise error_at(ts.peek(), "--ABORT-- is not supported", UnsupportedFeature)
    ts.expect("END", "'State:' or '--END--'")
    if not ts.at_end():
        raise error_at(ts.peek(), "trailing input after '--END--'")
    return RawDocument(tuple(items), tuple(states))


def _color_set(ts: _Stream) -> tuple[int, ...]:
    ts.expect("{")
    colors = []
    while ts.at("INT"):
        colors.append(ts.next().value)
    ts.expect("}", "'}'")
    return tuple(colors)


def _parse_state(ts: _Stream) -> RawState:
    head = ts.next()
    if head.value != "State":
        raise error_at(head, f"unexpected header item '{head.value}:' in body")
    if ts.at("["):
        raise error_at(ts.peek(), "state labels are not supported", UnsupportedFeature)
    index = ts.expect("INT", "a state number").value
    name = ts.next().value if ts.at("STRING") else None
    if ts.at("{"):
        raise error_at(ts.peek(), "state-based acceptance is not supported",
                       UnsupportedFeature)
    edges = []
    while ts.at("[", "INT"):
        if ts.at("INT"):
            raise error_at(ts.peek(), "implicit edge labels are not supported",
                           UnsupportedFeature)
        start = ts.next()
        label_tokens = []
        while not ts.at("]"):
            tok = ts.peek()
            if tok.kind in ("EOF", "HEADER", "BODY", "END", "["):
                raise error_at(tok, f"expected ']', found {describe(tok)}")
            label_tokens.append(ts.next())
        close = ts.next()
        label_tokens.append(Token("EOF", "]", close.line, close.column))
        if len(label_tokens) == 1:
            raise error_at(close, "empty edge label")
        label = parse_label_expr(label_tokens)
        dest = ts.expect("INT", "a destination state").value
        if ts.at("&"):
            raise error_at(ts.peek(), "universal branching is not supported",
                           UnsupportedFeature)
        colors = _color_set(ts) if ts.at("{") else ()
        edges.append(RawEdge(label, dest, colors, start.line))
    return RawState(index, name, tuple(edges), head.line)


# ---------------------------------------------------------------------------
# Printing

_PREC = {Or: 1, And: 2, Not: 3}


def format_expr(node) -> str:
    """Render a label or acceptance tree with the fewest parentheses that
    still parse back to the same (left-associative) tree."""
    if isinstance(node, Const):
        return "t" if node.value else "f"
    if isinstance(node, Var):
        return str(node.index)
    if isinstance(node, AliasRef):
        return "@" + node.name
    if isinstance(node, Fin):
        return f"Fin({node.set})"
    if isinstance(node, Inf):
        return f"Inf({node.set})"
    if isinstance(node, Not):
        return "!" + _wrap(node.arg, 3)
    if isinstance(node, (And, Or)):
        prec = _PREC[type(node)]
        op = " & " if isinstance(node, And) else " | "
        # right operand of the same operator needs parentheses (left-assoc)
        return _wrap(node.left, prec) + op + _wrap(node.right, prec + 1)
    raise TypeError(f"not an expression node: {node!r}")


def _wrap(node, min_prec):
    text = format_expr(node)
    if _PREC.get(type(node), 4) < min_prec:
        return "(" + text + ")"
    return text


def _format_item(item: HeaderItem) -> str:
    kw, v = item.keyword, item.value
    if kw == "HOA":
        body = v
    elif kw in ("States", "Start"):
        body = str(v)
    elif kw == "AP":
        body = " ".join([str(v[0])] + [quote(s) for s in v[1]])
    elif kw == "Alias":
        body = f"@{v[0]} {format_expr(v[1])}"
    elif kw == "Acceptance":
        body = f"{v[0]} {format_expr(v[1])}"
    elif kw == "controllable-AP":
        body = " ".join(map(str, v))
    else:
        body = " ".join(map(str, v))
    return f"{kw}: {body}".rstrip()


def format_colors(colors: Iterable[int]) -> str:
    colors = list(colors)
    if not colors:
        return ""
    return " {" + " ".join(map(str, colors)) + "}"


def print_document(doc: RawDocument) -> str:
    """Canonical serialization; one header item and one edge per line."""
    lines = [_format_item(item) for item in doc.header_items]
    lines.append("--BODY--")
    for st in doc.body_states:
        head = f"State: {st.index}"
        if st.name is not None:
            head += " " + quote(st.name)
        lines.append(head)
        for e in st.edges:
            lines.append(f"[{format_expr(e.label)}] {e.dest}{format_colors(e.colors)}")
    lines.append("--END--")
    return "\n".join(lines) + "\n"
