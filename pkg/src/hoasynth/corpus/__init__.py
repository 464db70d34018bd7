"""Golden corpus files and a seeded generator of random parity automata.

Each file ``data/<group>/<name>.hoa`` has a sidecar ``<name>.json``.  Valid
files record ``{"verdict": ..., "summary": ...}``; malformed files record
``{"error": <code>}``.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from importlib import resources
from typing import NamedTuple

from ..automaton import (
    APTable, Automaton, Edge, Mode, Parity, ParitySpec, label_table, parity_formula,
)
from ..hoa import TRUE, And, Not, Or, Var


class Bounds(NamedTuple):
    states: int = 4
    aps: int = 3
    colors: int = 3


@dataclass(frozen=True)
class CorpusFile:
    group: str
    name: str
    text: str
    expect: dict


def corpus_files(group=None) -> list[CorpusFile]:
    root = resources.files(__name__) / "data"
    out = []
    for sub in sorted(p.name for p in root.iterdir() if p.is_dir()):
        if group is not None and sub != group:
            continue
        for path in sorted(root.joinpath(sub).iterdir(), key=lambda p: p.name):
            if not path.name.endswith(".hoa"):
                continue
            stem = path.name[:-4]
            expect = json.loads(root.joinpath(sub, stem + ".json").read_text())
            out.append(CorpusFile(sub, stem, path.read_text(), expect))
    return out


def _conj(lits):
    expr = lits[0]
    for lit in lits[1:]:
        expr = And(expr, lit)
    return expr


def _disj(terms):
    expr = terms[0]
    for t in terms[1:]:
        expr = Or(expr, t)
    return expr


def _partition(rng: random.Random, n_aps: int, depth_budget: int):
    """Leaves of a random decision tree over the APs, as literal lists.

    The leaves' cubes partition the valuation space.
    """
    leaves = []

    def grow(path, free):
        if not free or len(path) >= depth_budget or (path and rng.random() < 0.35):
            leaves.append(path)
            return
        var = rng.choice(free)
        rest = [x for x in free if x != var]
        grow(path + [Var(var)], rest)
        grow(path + [Not(Var(var))], rest)

    grow([], list(range(n_aps)))
    return leaves


def generate(seed, bounds=Bounds()) -> Automaton:
    """A random deterministic, complete, colored parity automaton."""
    bounds = Bounds(*bounds)
    if bounds.states > 16 or bounds.aps > 6 or bounds.colors > 6:
        raise ValueError("bounds exceed states <= 16, APs <= 6, colors <= 6")
    rng = random.Random(seed)
    n_states = rng.randint(1, bounds.states)
    n_aps = rng.randint(1, bounds.aps)
    k = rng.randint(1, bounds.colors)
    spec = ParitySpec(rng.choice(list(Mode)), rng.choice(list(Parity)), k)
    controllable = frozenset(i for i in range(n_aps) if rng.random() < 0.5)
    ap = APTable(tuple(f"p{i}" for i in range(n_aps)), controllable)

    edges, tables = [], []
    for _ in range(n_states):
        leaves = _partition(rng, n_aps, depth_budget=rng.randint(1, n_aps))
        rng.shuffle(leaves)
        groups = []
        for leaf in leaves:
            if groups and rng.random() < 0.3:
                groups[rng.randrange(len(groups))].append(leaf)
            else:
                groups.append([leaf])
        row = []
        for group in groups:
            label = _disj([_conj(leaf) if leaf else TRUE for leaf in group])
            row.append(Edge(label, rng.randrange(n_states), rng.randrange(k)))
        edges.append(tuple(row))
        tables.append(tuple(label_table(e.label, n_aps) for e in row))

    return Automaton(
        state_count=n_states,
        start=0,
        ap=ap,
        edges=tuple(edges),
        parity=spec,
        acc_formula=parity_formula(spec),
        name=f"random-{seed}",
        state_names=(None,) * n_states,
        tables=tuple(tables),
    )
