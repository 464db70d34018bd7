import itertools
import random

import pytest

from hoasynth import errors
from hoasynth.automaton import (
    MAX_APS, APTable, Mode, Parity, ParitySpec, Valuation, eval_acceptance, join,
    label_table, nonempty_subsets, parity_accepts, parity_formula, split, successor,
    to_document, validate,
)
from hoasynth.corpus import corpus_files, generate
from hoasynth.hoa import Var, parse, print_document

import oracles
from test_hoa import EX_A

EX_B = EX_A.replace("[1] 0 {0}\n[!1] 0 {1}", "[0] 0 {1}\n[!0] 0 {0}")


def load(text):
    return validate(parse(text))


def test_ex_a():
    aut = load(EX_A)
    assert aut.state_count == 1
    assert aut.parity == ParitySpec(Mode.MAX, Parity.EVEN, 2)
    assert aut.ap.controllable == {1}
    assert aut.ap.names == ("u", "c")


def test_extra_true_edge_is_nondeterministic():
    with pytest.raises(errors.NotDeterministic) as info:
        load(EX_A.replace("[!1] 0 {1}", "[!1] 0 {1}\n[t] 0 {0}"))
    assert info.value.state == 0
    assert info.value.witness.width == 2


def test_missing_edge_is_incomplete():
    with pytest.raises(errors.NotComplete) as info:
        load(EX_A.replace("[!1] 0 {1}\n", ""))
    assert info.value.state == 0
    assert info.value.witness[1] == 0


@pytest.mark.parametrize("spec, inf, expected", [
    (ParitySpec(Mode.MAX, Parity.EVEN, 3), {0, 2}, True),
    (ParitySpec(Mode.MIN, Parity.ODD, 3), {1, 2}, True),
    (ParitySpec(Mode.MAX, Parity.EVEN, 2), {1}, False),
    (ParitySpec(Mode.MIN, Parity.EVEN, 3), {1, 2}, False),
    (ParitySpec(Mode.MAX, Parity.ODD, 4), {0, 3}, True),
])
def test_parity_accepts(spec, inf, expected):
    assert parity_accepts(spec, inf) is expected


def test_parity_accepts_empty():
    with pytest.raises(errors.EmptyInf):
        parity_accepts(ParitySpec(Mode.MAX, Parity.EVEN, 2), set())


def test_parity_formula_shapes():
    from hoasynth.hoa import format_expr
    assert format_expr(parity_formula(ParitySpec(Mode.MAX, Parity.EVEN, 2))) == "Fin(1) & Inf(0)"
    assert format_expr(parity_formula(ParitySpec(Mode.MIN, Parity.EVEN, 3))) == \
        "Inf(0) | Fin(1) & Inf(2)"
    assert format_expr(parity_formula(ParitySpec(Mode.MIN, Parity.ODD, 1))) == "Fin(0)"


@pytest.mark.parametrize("k", range(1, 11))
def test_parity_formula_semantics(k):
    for mode, parity in itertools.product(Mode, Parity):
        spec = ParitySpec(mode, parity, k)
        formula = parity_formula(spec)
        for inf in nonempty_subsets(k):
            want = oracles.accepts(mode.value, int(parity), inf)
            assert eval_acceptance(formula, inf) == want == parity_accepts(spec, inf)


def test_successor():
    a, b = load(EX_A), load(EX_B)
    assert successor(a, 0, Valuation.of([1, 1])) == (0, 0)
    assert successor(a, 0, Valuation.of([0, 0])) == (0, 1)
    assert successor(b, 0, Valuation.of([1, 1])) == (0, 1)
    with pytest.raises(errors.WidthMismatch):
        successor(a, 0, Valuation.of([1]))


def test_split_join():
    ap = APTable(("u", "c"), frozenset({1}))
    u, c = split(ap, Valuation.of([1, 0]))
    assert (list(u), list(c)) == ([1], [0])
    assert list(join(ap, Valuation.of([1], "u"), Valuation.of([1], "c"))) == [1, 1]
    empty = APTable(("a", "b"), frozenset())
    u, c = split(empty, Valuation.of([0, 1]))
    assert c.width == 0 and list(u) == [0, 1]
    with pytest.raises(errors.WidthMismatch):
        join(ap, Valuation.of([1, 1]), Valuation.of([]))


def test_split_join_roundtrip_exhaustive():
    rng = random.Random(3)
    for n in range(0, 6):
        names = tuple(f"a{i}" for i in range(n))
        ap = APTable(names, frozenset(i for i in range(n) if rng.random() < 0.5))
        for bits in range(1 << n):
            v = Valuation(bits, n)
            assert join(ap, *split(ap, v)) == v


def test_label_table_matches_enumeration():
    from test_hoa import labels
    from hypothesis import given, settings

    @settings(max_examples=150, deadline=None)
    @given(labels(depth=5, n_aps=6))
    def check(expr):
        table = label_table(expr, 6)
        for v in range(1 << 6):
            bits = tuple(bool(v >> i & 1) for i in range(6))
            assert bool(table >> v & 1) == oracles.eval_label(expr, bits)

    check()


def _random_labelled_doc(rng, n_aps, n_edges):
    """A one-state automaton with arbitrary (possibly overlapping) labels."""
    from hoasynth.hoa import And, Not, Or

    def rand_label(d=0):
        r = rng.random()
        if d > 3 or r < 0.3:
            return Var(rng.randrange(n_aps))
        if r < 0.5:
            return Not(rand_label(d + 1))
        return (And if r < 0.75 else Or)(rand_label(d + 1), rand_label(d + 1))

    lines = ["HOA: v1", "States: 1", "Start: 0",
             f"AP: {n_aps} " + " ".join(f'"p{i}"' for i in range(n_aps)),
             "acc-name: parity max even 1", "Acceptance: 1 Inf(0)", "--BODY--", "State: 0"]
    from hoasynth.hoa import format_expr
    for _ in range(n_edges):
        lines.append(f"[{format_expr(rand_label())}] 0 {{0}}")
    lines.append("--END--")
    return "\n".join(lines)


def test_validator_agrees_with_enumeration():
    rng = random.Random(11)
    verdicts = set()
    for _ in range(300):
        n = rng.randint(1, 10 if rng.random() < 0.1 else 4)
        text = _random_labelled_doc(rng, n, rng.randint(1, 4))
        doc = parse(text)
        edges = [e.label for e in doc.body_states[0].edges]
        counts = [sum(oracles.eval_label(l, bits) for l in edges)
                  for bits in oracles.all_valuations(n)]
        try:
            validate(doc)
            verdict = "ok"
        except errors.NotDeterministic:
            verdict = "nondet"
        except errors.NotComplete:
            verdict = "incomplete"
        expected = ("nondet" if max(counts) > 1 else
                    "incomplete" if min(counts) == 0 else "ok")
        assert verdict == expected
        verdicts.add(verdict)
    assert verdicts == {"ok", "nondet", "incomplete"}


def test_successor_unique_on_generated():
    for seed in range(60):
        aut = generate(seed, (4, 5, 3))
        for q in range(aut.state_count):
            for bits in itertools.product((0, 1), repeat=aut.n_aps):
                full = Valuation.of(bits)
                enabled = oracles.enabled_edges(aut, q, [bool(b) for b in bits])
                assert len(enabled) == 1
                edge = aut.edges[q][enabled[0]]
                assert successor(aut, q, full) == (edge.dest, edge.color)


def test_formula_equivalence_not_structure():
    text = EX_A.replace("Fin(1) & Inf(0)", "Inf(0) & Fin(1) | Fin(0) & Fin(1)")
    assert load(text).parity.colors == 2
    with pytest.raises(errors.UnsupportedAcceptance):
        load(EX_A.replace("Fin(1) & Inf(0)", "Inf(0)"))


def test_too_many_aps():
    names = " ".join(f'"a{i}"' for i in range(MAX_APS + 1))
    text = EX_A.replace('AP: 2 "u" "c"', f"AP: {MAX_APS + 1} {names}")
    with pytest.raises(errors.TooManyValuations):
        load(text)


def test_aliases_resolved():
    aut = load(next(f.text for f in corpus_files("valid") if f.name == "aliases"))
    from hoasynth.hoa import AliasRef

    def has_alias(e):
        if isinstance(e, AliasRef):
            return True
        return any(has_alias(getattr(e, a)) for a in ("arg", "left", "right") if hasattr(e, a))

    assert not any(has_alias(e.label) for row in aut.edges for e in row)


def test_to_document_round_trip():
    for seed in range(20):
        aut = generate(seed)
        again = load(print_document(to_document(aut)))
        assert again == aut


def test_corpus_summaries():
    from hoasynth.automaton import summary
    for f in corpus_files("valid"):
        assert summary(load(f.text)) == f.expect["summary"], f.name


def test_corpus_rejections():
    for f in corpus_files("malformed"):
        with pytest.raises(errors.HoaSynthError) as info:
            load(f.text)
        assert info.value.code == f.expect["error"], f.name
