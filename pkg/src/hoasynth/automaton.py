"""Validated deterministic, complete, colored parity automata.

Valuations are plain integers: bit ``i`` holds the value of AP ``i``.
Edge labels are compiled to truth tables, i.e. integers with ``2**n`` bits
where bit ``v`` is set iff valuation ``v`` satisfies the label, so that
determinism and completeness reduce to a few big-integer operations.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

from . import hoa
from .errors import (
    BadHeader,
    BadReference,
    EmptyInf,
    NotColored,
    NotComplete,
    NotDeterministic,
    TooManyValuations,
    UnsupportedAcceptance,
    WidthMismatch,
)
from .hoa import (
    AliasRef, And, Const, Fin, HeaderItem, Inf, Not, Or, RawDocument, RawEdge,
    RawState, Token, Var,
)

MAX_APS = 24
MAX_COLORS = 16


class Mode(enum.Enum):
    MAX = "max"
    MIN = "min"


class Parity(enum.IntEnum):
    EVEN = 0
    ODD = 1

    @property
    def word(self):
        return self.name.lower()


@dataclass(frozen=True)
class ParitySpec:
    mode: Mode
    parity: Parity
    colors: int

    def __str__(self):
        return f"{self.mode.value} {self.parity.word} {self.colors}"


@dataclass(frozen=True)
class APTable:
    names: tuple[str, ...]
    controllable: frozenset[int] = frozenset()

    def __len__(self):
        return len(self.names)

    @property
    def uncontrollable_indices(self) -> tuple[int, ...]:
        return tuple(i for i in range(len(self.names)) if i not in self.controllable)

    @property
    def controllable_indices(self) -> tuple[int, ...]:
        return tuple(sorted(self.controllable))


@dataclass(frozen=True)
class Valuation:
    """Bit vector over some AP domain; bit ``i`` is position ``i``."""

    bits: int
    width: int
    domain: str = "full"

    @classmethod
    def of(cls, values: Sequence, domain="full"):
        bits = 0
        for i, b in enumerate(values):
            if b:
                bits |= 1 << i
        return cls(bits, len(values), domain)

    def __len__(self):
        return self.width

    def __iter__(self):
        return (self.bits >> i & 1 for i in range(self.width))

    def __getitem__(self, i):
        if not 0 <= i < self.width:
            raise IndexError(i)
        return self.bits >> i & 1

    def __str__(self):
        return "".join(map(str, self)) or "-"


@dataclass(frozen=True)
class Edge:
    label: object
    dest: int
    color: int


@dataclass(frozen=True)
class Automaton:
    state_count: int
    start: int
    ap: APTable
    edges: tuple[tuple[Edge, ...], ...]
    parity: ParitySpec
    acc_formula: object
    name: str | None = None
    state_names: tuple = ()
    tables: tuple = field(default=(), compare=False, repr=False)

    @property
    def n_aps(self):
        return len(self.ap)

    def step(self, q: int, v: int) -> tuple[int, int]:
        """(destination, color) of the edge of ``q`` enabled by full valuation ``v``."""
        for edge, table in zip(self.edges[q], self.tables[q]):
            if table >> v & 1:
                return edge.dest, edge.color
        raise AssertionError(f"no enabled edge in state {q} for {v}")


# ---------------------------------------------------------------------------
# Label semantics


def eval_label(expr, v: int) -> bool:
    """Evaluate an alias-free label on full valuation ``v``."""
    if isinstance(expr, Const):
        return expr.value
    if isinstance(expr, Var):
        return bool(v >> expr.index & 1)
    if isinstance(expr, Not):
        return not eval_label(expr.arg, v)
    if isinstance(expr, And):
        return eval_label(expr.left, v) and eval_label(expr.right, v)
    if isinstance(expr, Or):
        return eval_label(expr.left, v) or eval_label(expr.right, v)
    raise TypeError(f"unexpected label node {expr!r}")


@lru_cache(maxsize=None)
def _var_table(index: int, n: int) -> int:
    period = 1 << (index + 1)
    table = ((1 << (1 << index)) - 1) << (1 << index)
    while period < (1 << n):
        table |= table << period
        period <<= 1
    return table


def label_table(expr, n: int) -> int:
    """Truth table of ``expr`` over ``n`` APs."""
    full = (1 << (1 << n)) - 1
    if isinstance(expr, Const):
        return full if expr.value else 0
    if isinstance(expr, Var):
        return _var_table(expr.index, n)
    if isinstance(expr, Not):
        return full ^ label_table(expr.arg, n)
    if isinstance(expr, And):
        return label_table(expr.left, n) & label_table(expr.right, n)
    if isinstance(expr, Or):
        return label_table(expr.left, n) | label_table(expr.right, n)
    raise TypeError(f"unexpected label node {expr!r}")


def _lowest_bit(x: int) -> int:
    return (x & -x).bit_length() - 1


# ---------------------------------------------------------------------------
# Parity semantics


def parity_accepts(spec: ParitySpec, inf) -> bool:
    inf = set(inf)
    if not inf:
        raise EmptyInf("the set of colors seen infinitely often cannot be empty")
    m = max(inf) if spec.mode is Mode.MAX else min(inf)
    return m % 2 == spec.parity


def eval_acceptance(formula, inf) -> bool:
    if isinstance(formula, Const):
        return formula.value
    if isinstance(formula, Inf):
        return formula.set in inf
    if isinstance(formula, Fin):
        return formula.set not in inf
    if isinstance(formula, And):
        return eval_acceptance(formula.left, inf) and eval_acceptance(formula.right, inf)
    if isinstance(formula, Or):
        return eval_acceptance(formula.left, inf) or eval_acceptance(formula.right, inf)
    raise TypeError(f"unexpected acceptance node {formula!r}")


def parity_formula(spec: ParitySpec):
    """The acceptance formula HOA tools emit for ``acc-name: parity ...``.

    Colors are visited from the most significant one (highest for max,
    lowest for min); a good color contributes ``Inf(i) | rest``, a bad one
    ``Fin(i) & rest``.
    """
    order = list(range(spec.colors))
    if spec.mode is Mode.MAX:
        order.reverse()
    formula = None
    for i in reversed(order):
        good = i % 2 == spec.parity
        if formula is None:
            formula = Inf(i) if good else Fin(i)
        else:
            formula = Or(Inf(i), formula) if good else And(Fin(i), formula)
    return formula


def nonempty_subsets(k: int):
    for mask in range(1, 1 << k):
        yield {i for i in range(k) if mask >> i & 1}


# ---------------------------------------------------------------------------
# Valuation split / join


def split(ap: APTable, v: Valuation) -> tuple[Valuation, Valuation]:
    if v.width != len(ap):
        raise WidthMismatch(f"valuation has width {v.width}, expected {len(ap)}")
    u = [v.bits >> i & 1 for i in ap.uncontrollable_indices]
    c = [v.bits >> i & 1 for i in ap.controllable_indices]
    return Valuation.of(u, "u"), Valuation.of(c, "c")


def join(ap: APTable, u: Valuation, c: Valuation) -> Valuation:
    unc, con = ap.uncontrollable_indices, ap.controllable_indices
    if u.width != len(unc) or c.width != len(con):
        raise WidthMismatch(
            f"split widths ({u.width}, {c.width}) do not match ({len(unc)}, {len(con)})"
        )
    return Valuation(join_bits(unc, con, u.bits, c.bits), len(ap))


def join_bits(unc: Sequence[int], con: Sequence[int], u: int, c: int) -> int:
    v = 0
    for k, i in enumerate(unc):
        if u >> k & 1:
            v |= 1 << i
    for k, i in enumerate(con):
        if c >> k & 1:
            v |= 1 << i
    return v


def successor(aut: Automaton, q: int, v: Valuation) -> tuple[int, int]:
    if v.width != aut.n_aps:
        raise WidthMismatch(f"valuation has width {v.width}, expected {aut.n_aps}")
    return aut.step(q, v.bits)


# ---------------------------------------------------------------------------
# Validation


def _required(doc: hoa.RawDocument, keyword) -> HeaderItem:
    items = doc.items(keyword)
    if not items:
        raise BadHeader(f"missing '{keyword}:' header item")
    if len(items) > 1:
        raise BadHeader(f"'{keyword}:' given {len(items)} times", items[1].line)
    return items[0]


def _parity_spec(doc: hoa.RawDocument, set_count: int) -> ParitySpec:
    items = doc.items("acc-name")
    if not items:
        raise UnsupportedAcceptance("missing 'acc-name:'; only parity acceptance is supported")
    item = items[0]
    words = [t.value for t in item.value]
    if words[0] != "parity":
        raise UnsupportedAcceptance(
            f"acceptance '{words[0]}' is not supported, expected parity", item.line
        )
    if (
        len(words) != 4
        or words[1] not in ("max", "min")
        or words[2] not in ("even", "odd")
        or not isinstance(words[3], int)
    ):
        raise UnsupportedAcceptance(
            "expected 'acc-name: parity (max|min) (even|odd) INT'", item.line
        )
    if words[3] != set_count:
        raise BadHeader(
            f"acc-name declares {words[3]} colors but Acceptance: has {set_count} sets",
            item.line,
        )
    if set_count == 0:
        raise UnsupportedAcceptance("parity acceptance needs at least one color", item.line)
    if set_count > MAX_COLORS:
        raise UnsupportedAcceptance(f"more than {MAX_COLORS} colors", item.line)
    return ParitySpec(Mode(words[1]), Parity[words[2].upper()], set_count)


def resolve_aliases(expr, aliases, _stack=()):
    if isinstance(expr, AliasRef):
        if expr.name in _stack:
            raise BadReference(f"alias @{expr.name} is recursive")
        if expr.name not in aliases:
            raise BadReference(f"undefined alias @{expr.name}")
        return resolve_aliases(aliases[expr.name], aliases, _stack + (expr.name,))
    if isinstance(expr, Not):
        return Not(resolve_aliases(expr.arg, aliases, _stack))
    if isinstance(expr, (And, Or)):
        return type(expr)(
            resolve_aliases(expr.left, aliases, _stack),
            resolve_aliases(expr.right, aliases, _stack),
        )
    return expr


def _max_var(expr) -> int:
    if isinstance(expr, Var):
        return expr.index
    if isinstance(expr, Not):
        return _max_var(expr.arg)
    if isinstance(expr, (And, Or)):
        return max(_max_var(expr.left), _max_var(expr.right))
    return -1


def validate(doc: hoa.RawDocument) -> Automaton:
    """Check a parsed document and build the semantic automaton."""
    state_count = _required(doc, "States").value
    if state_count < 1:
        raise BadHeader("an automaton needs at least one state")
    start_item = _required(doc, "Start")
    start = start_item.value
    if start >= state_count:
        raise BadReference(f"start state {start} out of range", start_item.line)

    ap_item = _required(doc, "AP")
    ap_count, names = ap_item.value
    if ap_count != len(names):
        raise BadHeader(f"AP: declares {ap_count} names but lists {len(names)}", ap_item.line)
    if len(set(names)) != len(names):
        raise BadHeader("AP: names must be unique", ap_item.line)
    if ap_count > MAX_APS:
        raise TooManyValuations(f"{ap_count} APs exceed the limit of {MAX_APS}", ap_item.line)

    controllable = doc.controllable_ap()
    ctrl_line = doc.items("controllable-AP")[0].line if controllable else None
    for i in controllable:
        if i >= ap_count:
            raise BadHeader(f"controllable AP index {i} out of range", ctrl_line)
    if len(set(controllable)) != len(controllable):
        raise BadHeader("controllable-AP: indices must not repeat", ctrl_line)
    ap = APTable(tuple(names), frozenset(controllable))

    acc_item = _required(doc, "Acceptance")
    set_count, formula = acc_item.value
    spec = _parity_spec(doc, set_count)
    for inf in nonempty_subsets(set_count):
        if eval_acceptance(formula, inf) != parity_accepts(spec, inf):
            raise UnsupportedAcceptance(
                f"Acceptance: formula is not equivalent to parity {spec} "
                f"(differs on Inf={sorted(inf)})",
                acc_item.line,
            )

    aliases = {}
    for item in doc.items("Alias"):
        name, expr = item.value
        if name in aliases:
            raise BadHeader(f"alias @{name} defined twice", item.line)
        aliases[name] = expr

    by_index = {}
    for st in doc.body_states:
        if st.index >= state_count:
            raise BadReference(f"state {st.index} out of range", st.line)
        if st.index in by_index:
            raise BadHeader(f"state {st.index} defined twice", st.line)
        by_index[st.index] = st

    full = (1 << (1 << ap_count)) - 1
    all_edges, all_tables = [], []
    for q in range(state_count):
        raw = by_index.get(q)
        edges, tables = [], []
        for k, e in enumerate(raw.edges if raw else ()):
            try:
                label = resolve_aliases(e.label, aliases)
            except BadReference as exc:
                raise BadReference(exc.message, e.line) from None
            if _max_var(label) >= ap_count:
                raise BadReference(f"label refers to AP {_max_var(label)}", e.line)
            if e.dest >= state_count:
                raise BadReference(f"destination {e.dest} out of range", e.line)
            if len(e.colors) != 1:
                raise NotColored(q, k, len(e.colors), e.line)
            if e.colors[0] >= set_count:
                raise BadReference(f"color {e.colors[0]} out of range", e.line)
            edges.append(Edge(label, e.dest, e.colors[0]))
            tables.append(label_table(label, ap_count))

        line = raw.line if raw else None
        seen = 0
        for k, t in enumerate(tables):
            overlap = seen & t
            if overlap:
                raise NotDeterministic(q, _witness(_lowest_bit(overlap), ap_count),
                                       raw.edges[k].line)
            seen |= t
        if seen != full:
            raise NotComplete(q, _witness(_lowest_bit(full ^ seen), ap_count), line)
        all_edges.append(tuple(edges))
        all_tables.append(tuple(tables))

    name = doc.get("name")
    return Automaton(
        state_count=state_count,
        start=start,
        ap=ap,
        edges=tuple(all_edges),
        parity=spec,
        acc_formula=formula,
        name=name[0].value if name else None,
        state_names=tuple(by_index[q].name if q in by_index else None
                          for q in range(state_count)),
        tables=tuple(all_tables),
    )


def _witness(v: int, n: int) -> Valuation:
    return Valuation(v, n)


# ---------------------------------------------------------------------------
# Back to text


def to_document(aut: Automaton, tool=None) -> RawDocument:
    items = [HeaderItem("HOA", "v1"), HeaderItem("States", aut.state_count),
             HeaderItem("Start", aut.start),
             HeaderItem("AP", (len(aut.ap), aut.ap.names))]
    if tool:
        items.append(HeaderItem("tool", (Token("STRING", tool),)))
    if aut.name is not None:
        items.append(HeaderItem("name", (Token("STRING", aut.name),)))
    spec = aut.parity
    items.append(HeaderItem("acc-name", (
        Token("IDENT", "parity"), Token("IDENT", spec.mode.value),
        Token("IDENT", spec.parity.word), Token("INT", spec.colors))))
    items.append(HeaderItem("Acceptance", (spec.colors, aut.acc_formula)))
    items.append(HeaderItem("controllable-AP", aut.ap.controllable_indices))
    states = []
    for q, edges in enumerate(aut.edges):
        name = aut.state_names[q] if aut.state_names else None
        states.append(RawState(q, name, tuple(
            RawEdge(e.label, e.dest, (e.color,)) for e in edges)))
    return RawDocument(tuple(items), tuple(states))


def summary(aut: Automaton) -> dict:
    return {
        "states": aut.state_count,
        "start": aut.start,
        "aps": list(aut.ap.names),
        "controllable": list(aut.ap.controllable_indices),
        "parity": str(aut.parity),
    }
