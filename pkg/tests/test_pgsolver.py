import warnings

import pytest

from hoasynth import errors
from hoasynth.automaton import validate
from hoasynth.corpus import corpus_files, generate
from hoasynth.game import Game, Player, build_arena
from hoasynth.hoa import parse
from hoasynth.pgsolver import PGSolverWarning, parse_pgsolver, write_pgsolver
from hoasynth.solver import zielonka

from test_hoa import EX_A

EX_A_PG = """parity 4;
0 0 1 1,2 "q0";
1 0 0 3,4 "q0|u=0";
2 0 0 3,4 "q0|u=1";
3 0 1 0 "t:q0#0";
4 1 1 0 "t:q0#1";
"""

ONE_AP = """HOA: v1
States: 1
Start: 0
AP: 1 "x"
acc-name: parity max even 1
Acceptance: 1 Inf(0)
--BODY--
State: 0
[0] 0 {0}
[!0] 0 {0}
--END--
"""


def arena_of(text):
    return build_arena(validate(parse(text)))


def test_ex_a():
    text = write_pgsolver(arena_of(EX_A))
    assert text == EX_A_PG
    assert '0 0 1 1,2 "q0";' in text.splitlines()
    assert '4 1 1 0 "t:q0#1";' in text.splitlines()


def test_single_valuation_pattern():
    lines = write_pgsolver(arena_of(ONE_AP)).splitlines()
    assert lines[0] == "parity 3;"
    rows = [line.split() for line in lines[1:]]
    assert len(rows) == 4
    assert [r[1] for r in rows] == ["0"] * 4
    # state, two choices, one transition
    assert [r[2] for r in rows] == ["1", "0", "0", "1"]


def test_ex_a_parsed_back():
    game = parse_pgsolver(EX_A_PG)
    assert zielonka(game).winner(0) == Player.CTRL
    assert game.names == ["q0", "q0|u=0", "q0|u=1", "t:q0#0", "t:q0#1"]


def test_two_cycle():
    game = parse_pgsolver("parity 1; 0 0 0 1; 1 1 1 0;")
    assert len(game) == 2 and game.successors == [[1], [0]]
    sol = zielonka(game)
    assert sol.win_env == {0, 1}


def test_missing_semicolon_warns():
    with pytest.warns(PGSolverWarning):
        game = parse_pgsolver("parity 1;\n0 0 0 1;\n1 1 1 0\n")
    assert game.successors == [[1], [0]]


def test_well_formed_input_is_quiet():
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        parse_pgsolver(EX_A_PG)


def test_sparse_ids_and_start():
    game = parse_pgsolver("parity 9;\nstart 9;\n9 2 0 4;\n4 1 1 9,4;\n")
    assert game.successors == [[1, 0], [0]]
    assert game.priority == [1, 2]
    assert game.initial == 1
    assert game.names == [None, None]


def test_names_with_quotes():
    game = Game([Player.CTRL], [0], [[0]], names=['a "b" \\c'])
    assert parse_pgsolver(write_pgsolver(game)).names == game.names


@pytest.mark.parametrize("text", [
    "",
    "parity 1;\n0 0 2 0;\n",
    "parity 1;\n0 0 0;\n",
    "parity 1;\n0 0 0 1;\n",
    "parity 1;\n0 0 0 0,;\n",
    "parity 1;\n0 0 0 0;\n0 1 1 0;\n",
    "parity x;\n0 0 0 0;\n",
    "0 0 0 0 $;\n",
])
def test_syntax_errors(text):
    with pytest.raises(errors.PGSolverSyntaxError):
        parse_pgsolver(text)


def test_error_line_number():
    with pytest.raises(errors.PGSolverSyntaxError) as info:
        parse_pgsolver("parity 2;\n0 0 0 1;\n1 0 7 0;\n")
    assert info.value.line == 3


def test_byte_stable():
    for seed in range(10):
        aut = generate(seed, (4, 3, 3))
        assert write_pgsolver(build_arena(aut)) == write_pgsolver(build_arena(aut))


def test_round_trip_winners():
    cases = [validate(parse(f.text)) for f in corpus_files("valid")]
    cases += [generate(seed, (6, 4, 4)) for seed in range(60)]
    for aut in cases:
        arena = build_arena(aut)
        text = write_pgsolver(arena)
        game = parse_pgsolver(text)
        assert game.owner == arena.owner and game.priority == arena.priority
        assert [sorted(s) for s in game.successors] == [sorted(s) for s in arena.successors]
        assert zielonka(game).winner(0) == zielonka(arena).winner(arena.initial)
        assert write_pgsolver(game) == text
