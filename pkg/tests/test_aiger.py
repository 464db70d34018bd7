import random

import pytest

from hoasynth import errors
from hoasynth.aiger import (
    AigerCircuit, MealyMachine, encode, extract_mealy, read_aag, synthesize, write_aag,
)
from hoasynth.automaton import APTable, validate
from hoasynth.corpus import corpus_files, generate
from hoasynth.game import build_arena
from hoasynth.hoa import parse
from hoasynth.solver import zielonka
from hoasynth.verify import Simulator

import oracles
from test_automaton import EX_B
from test_hoa import EX_A

EX_A_AAG = """aag 1 1 0 1 0
2
1
i0 u
o0 c
c
hoasynth 0.1.0
"""

TOGGLE = MealyMachine([0, 1], 0, 0, {(0, 0): (0, 1), (1, 0): (0, 0)})


def load(text):
    return validate(parse(text))


def test_ex_a_mealy():
    aut = load(EX_A)
    arena = build_arena(aut)
    mealy = extract_mealy(aut, zielonka(arena), arena)
    assert mealy.states == [0]
    assert mealy.transition == {(0, 0): (1, 0), (0, 1): (1, 0)}


def test_ex_b_unrealizable():
    aut = load(EX_B)
    arena = build_arena(aut)
    with pytest.raises(errors.Unrealizable):
        extract_mealy(aut, zielonka(arena), arena)
    with pytest.raises(errors.Unrealizable):
        synthesize(aut)


def test_ex_a_golden():
    circuit, _ = synthesize(load(EX_A))
    assert write_aag(circuit) == EX_A_AAG


def test_all_accepting_picks_smallest_c():
    # both colors even: every strategy wins, the tie-break decides
    text = EX_A.replace("parity max even 2", "parity max even 3").replace(
        "Acceptance: 2 Fin(1) & Inf(0)", "Acceptance: 3 Inf(2) | Fin(1) & Inf(0)"
    ).replace("[!1] 0 {1}", "[!1] 0 {2}")
    circuit, mealy = synthesize(load(text))
    assert set(mealy.transition.values()) == {(0, 0)}
    assert circuit.outputs == [0]


def test_no_outputs():
    text = EX_A.replace("controllable-AP: 1\n", "").replace(
        "[1] 0 {0}\n[!1] 0 {1}", "[t] 0 {0}")
    circuit, _ = synthesize(load(text))
    assert write_aag(circuit).splitlines()[0] == "aag 2 2 0 0 0"


def test_toggle():
    circuit = encode(TOGGLE, APTable((), frozenset()))
    assert circuit.latches == [(2, 3)]
    text = write_aag(circuit)
    assert text.splitlines()[:2] == ["aag 1 0 1 0 0", "2 3"]
    sim = Simulator(read_aag(text))
    assert sim.step([0], []) == ((), (1,))
    assert sim.step([1], []) == ((), (0,))


def test_empty_circuit():
    assert write_aag(AigerCircuit()) == "aag 0 0 0 0 0\n"
    assert read_aag("aag 0 0 0 0 0\n") == AigerCircuit()


def test_three_states_two_latches():
    mealy = MealyMachine([0, 1, 2], 1, 1, {
        (0, 0): (0, 1), (0, 1): (1, 2),
        (1, 0): (1, 0), (1, 1): (0, 1),
        (2, 0): (0, 2), (2, 1): (1, 0),
    })
    circuit = encode(mealy, APTable(("x", "y"), frozenset({1})))
    assert len(circuit.latches) == 2
    circuit.check()
    oracles.circuit_matches_mealy(Simulator(circuit), mealy, depth=8)


def _well_formed(circuit):
    circuit.check()
    n_i, n_l = len(circuit.inputs), len(circuit.latches)
    assert circuit.inputs == [2 * (1 + i) for i in range(n_i)]
    assert [lit for lit, _ in circuit.latches] == [2 * (1 + n_i + j) for j in range(n_l)]
    for k, (lhs, a, b) in enumerate(circuit.and_gates):
        assert lhs == 2 * (1 + n_i + n_l + k)
        assert lhs > a and lhs > b
    used = [x for g in circuit.and_gates for x in g[1:]]
    used += circuit.outputs + [nxt for _, nxt in circuit.latches]
    assert all(x >> 1 <= circuit.max_var for x in used)


def test_generated_circuits():
    rng = random.Random(4)
    synthesized = 0
    for seed in range(60):
        aut = generate(seed, (6, 4, 4))
        try:
            circuit, mealy = synthesize(aut)
        except errors.Unrealizable:
            continue
        synthesized += 1
        _well_formed(circuit)
        assert len(circuit.latches) == (len(mealy.states) - 1).bit_length()
        again = read_aag(write_aag(circuit))
        assert again == circuit
        sim = Simulator(again)
        oracles.circuit_matches_mealy(sim, mealy, depth=8)
        assert oracles.random_run_matches(sim, mealy, rng)
    assert synthesized > 10


def test_mealy_closed_and_total():
    for seed in range(40):
        aut = generate(seed, (6, 3, 3))
        arena = build_arena(aut)
        sol = zielonka(arena)
        if arena.initial not in sol.win_ctrl:
            continue
        mealy = extract_mealy(aut, sol, arena)
        for code, q in enumerate(mealy.states):
            assert arena.state_vertex[q] in sol.win_ctrl
            for u in range(1 << mealy.n_inputs):
                _, nxt = mealy.step(code, u)
                assert 0 <= nxt < len(mealy.states)


def test_symbols_and_comments_round_trip():
    for f in corpus_files("valid"):
        aut = load(f.text)
        if f.expect["verdict"] != "REALIZABLE":
            continue
        circuit, _ = synthesize(aut)
        text = write_aag(circuit)
        assert read_aag(text) == circuit
        assert write_aag(read_aag(text)) == text


def test_read_reset_values():
    c = read_aag("aag 1 0 1 0 0\n2 3 1\n")
    assert c.latch_init == [1]
    assert Simulator(c).initial_state() == (1,)
    assert write_aag(c).splitlines()[1] == "2 3 1"
    with pytest.raises(errors.AigerSyntaxError):
        read_aag("aag 1 0 1 0 0\n2 3 2\n")


@pytest.mark.parametrize("text", [
    "",
    "aig 0 0 0 0 0\n",
    "aag 1 1 0 0\n2\n",
    "aag 1 1 0 0 0\n",
    "aag 1 1 0 0 0\n3\n",
    "aag 0 1 0 0 0\n2\n",
    "aag 2 1 0 1 1\n2\n4\n4 4 2\n",
    "aag 1 0 0 1 0\n2\n",
    "aag 3 0 0 0 2\n4 6 1\n6 4 1\n",
    "aag 1 0 0 0 0 1\n",
    "aag 0 0 0 0 0\nx0 foo\n",
])
def test_read_errors(text):
    with pytest.raises(errors.AigerSyntaxError):
        read_aag(text)


def test_third_party_gate_order():
    # gates listed out of dependency order still simulate correctly
    text = "aag 4 2 0 1 2\n2\n4\n8\n8 6 2\n6 2 4\n"
    sim = Simulator(read_aag(text))
    assert [sim.step([], [a, b])[0] for a in (0, 1) for b in (0, 1)] == [(0,), (0,), (0,), (1,)]
