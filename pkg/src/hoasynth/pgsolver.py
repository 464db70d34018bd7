"""PGSolver game format.

Written games use owner 0 for the controller and 1 for the environment;
in PGSolver player 0 wins iff the largest priority seen infinitely often
is even, which is exactly the arena's convention.  Vertex names record
where each vertex came from::

    "q3"          state vertex of automaton state 3
    "q3|u=01"     controller choice after the environment picked u (AP order)
    "t:q1#2"      transition into state 1 with automaton color 2
"""

from __future__ import annotations

import re
import warnings

from .errors import PGSolverSyntaxError
from .game import Game, Player


class PGSolverWarning(UserWarning):
    pass


def _quote(name):
    return '"' + name.replace("\\", "\\\\").replace('"', '\\"') + '"'


def write_pgsolver(game: Game) -> str:
    n = len(game)
    lines = [f"parity {n - 1};"]
    for v in range(n):
        succ = ",".join(map(str, sorted(game.successors[v])))
        line = f"{v} {game.priority[v]} {int(game.owner[v])} {succ}"
        if game.names and game.names[v]:
            line += " " + _quote(game.names[v])
        lines.append(line + ";")
    return "\n".join(lines) + "\n"


_TOKEN = re.compile(r'\s*(?:(\d+)|("(?:[^"\\]|\\.)*")|(,)|(;)|([A-Za-z_]+)|(\S))')


def _tokens(line, lineno):
    pos = 0
    out = []
    while True:
        m = _TOKEN.match(line, pos)
        if not m or m.end() == pos:
            break
        pos = m.end()
        num, string, comma, semi, word, bad = m.groups()
        if bad is not None:
            raise PGSolverSyntaxError(f"unexpected character {bad!r}", lineno)
        if num is not None:
            out.append(("INT", int(num)))
        elif string is not None:
            body = re.sub(r"\\(.)", r"\1", string[1:-1])
            out.append(("STRING", body))
        elif comma:
            out.append((",", ","))
        elif semi:
            out.append((";", ";"))
        else:
            out.append(("WORD", word))
    return out


def _statements(text):
    """Yield (line number, tokens) per ';'-terminated statement.

    A statement still open at the end of a line is closed there, with a
    warning; statements never span lines.
    """
    for lineno, line in enumerate(text.splitlines(), 1):
        current = []
        for tok in _tokens(line, lineno):
            if tok[0] == ";":
                if current:
                    yield lineno, current
                current = []
            else:
                current.append(tok)
        if current:
            warnings.warn(f"line {lineno}: missing ';'", PGSolverWarning, stacklevel=3)
            yield lineno, current


def parse_pgsolver(text: str) -> Game:
    """Read a PGSolver game; vertex ids are renumbered densely in id order."""
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    declared = None
    start = None
    raw = {}
    lines = {}
    for lineno, toks in _statements(text):
        kinds = [k for k, _ in toks]
        if kinds[0] == "WORD":
            word = toks[0][1]
            if word not in ("parity", "start") or kinds[1:] != ["INT"]:
                raise PGSolverSyntaxError(f"malformed '{word}' statement", lineno)
            if word == "parity":
                declared = toks[1][1]
            else:
                start = toks[1][1]
            continue
        if len(toks) < 4 or kinds[:3] != ["INT", "INT", "INT"]:
            raise PGSolverSyntaxError("expected 'id priority owner successors'", lineno)
        vid, prio, owner = (t[1] for t in toks[:3])
        if owner not in (0, 1):
            raise PGSolverSyntaxError(f"owner must be 0 or 1, got {owner}", lineno)
        rest = toks[3:]
        name = None
        if rest and rest[-1][0] == "STRING":
            name = rest.pop()[1]
        succ = []
        expect_int = True
        for kind, value in rest:
            if expect_int and kind == "INT":
                succ.append(value)
            elif not expect_int and kind == ",":
                pass
            else:
                raise PGSolverSyntaxError("malformed successor list", lineno)
            expect_int = not expect_int
        if expect_int:
            raise PGSolverSyntaxError("malformed successor list", lineno)
        if vid in raw:
            raise PGSolverSyntaxError(f"vertex {vid} declared twice", lineno)
        raw[vid] = (prio, owner, succ, name)
        lines[vid] = lineno
    if not raw:
        raise PGSolverSyntaxError("no vertices", 1)
    if declared is not None and max(raw) > declared:
        warnings.warn(f"vertex {max(raw)} exceeds declared maximum {declared}",
                      PGSolverWarning, stacklevel=2)

    ids = sorted(raw)
    dense = {vid: i for i, vid in enumerate(ids)}
    game = Game(owner=[], priority=[], successors=[], names=[])
    for vid in ids:
        prio, owner, succ, name = raw[vid]
        for w in succ:
            if w not in dense:
                raise PGSolverSyntaxError(f"successor {w} is not a vertex", lines[vid])
        game.owner.append(Player(owner))
        game.priority.append(prio)
        game.successors.append([dense[w] for w in succ])
        game.names.append(name)
    if start is not None:
        if start not in dense:
            raise PGSolverSyntaxError(f"start vertex {start} is not a vertex", 1)
        game.initial = dense[start]
    else:
        game.initial = 0
    return game
