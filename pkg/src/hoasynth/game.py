"""Turn-based arenas and their construction from automata.

One round of the synthesis game becomes three vertex layers::

    StateV(q)  --env picks u-->  ChoiceV(q, u)  --ctrl picks c-->  TransV(q', p)  -->  StateV(q')

Priorities follow the max-even convention: the controller (player 0)
wins a play iff the largest priority seen infinitely often is even.
Only transition vertices carry the (normalized) color; the others carry 0.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from .automaton import MAX_APS, Automaton, Mode, Parity, ParitySpec, join_bits
from .errors import TooManyValuations


class Player(enum.IntEnum):
    CTRL = 0  # wins on even maxima
    ENV = 1

    @property
    def opponent(self):
        return Player(1 - self)


# frozen dataclasses rather than tuples: ChoiceV(0, 1) must not equal TransV(0, 1)
@dataclass(frozen=True)
class StateV:
    state: int


@dataclass(frozen=True)
class ChoiceV:
    state: int
    u: int


@dataclass(frozen=True)
class TransV:
    state: int  # destination
    color: int  # original automaton color


@dataclass
class Game:
    """A parity game with vertices ``0 .. n-1`` stored as parallel lists.

    Successor lists may carry a preference order; solvers break ties by
    taking the first admissible successor in list order.
    """

    owner: list
    priority: list
    successors: list
    names: list = field(default_factory=list)
    initial: int = 0

    def __len__(self):
        return len(self.owner)

    @property
    def max_priority(self):
        return max(self.priority, default=0)

    def predecessors(self):
        preds = [[] for _ in self.owner]
        for v, succ in enumerate(self.successors):
            for w in succ:
                preds[w].append(v)
        return preds

    def check(self):
        """Raise ValueError on dead ends or dangling successor indices."""
        n = len(self.owner)
        if not (len(self.priority) == len(self.successors) == n):
            raise ValueError("owner/priority/successor lists differ in length")
        for v, succ in enumerate(self.successors):
            if not succ:
                raise ValueError(f"vertex {v} has no successor")
            for w in succ:
                if not 0 <= w < n:
                    raise ValueError(f"vertex {v} has successor {w} out of range")


@dataclass
class Arena(Game):
    tags: list = field(default_factory=list)
    # (ChoiceV index, TransV index) -> smallest controller valuation realizing it
    choice: dict = field(default_factory=dict)
    # (state, u) -> ChoiceV index; state -> StateV index
    choice_vertex: dict = field(default_factory=dict)
    state_vertex: dict = field(default_factory=dict)
    n_inputs: int = 0
    n_outputs: int = 0


def normalize(spec: ParitySpec, p: int) -> int:
    """Map a color of ``spec`` to a max-even priority with the same meaning."""
    if not 0 <= p < spec.colors:
        raise ValueError(f"color {p} out of range for {spec.colors} colors")
    if spec.mode is Mode.MAX:
        return p if spec.parity is Parity.EVEN else p + 1
    top = spec.colors - 1
    if top % 2 != spec.parity:
        top += 1
    return top - p


def _check_width(n, what):
    if n > MAX_APS:
        raise TooManyValuations(
            f"2^{n} {what} valuations exceed the enumeration ceiling of 2^{MAX_APS}"
        )


def reachable_states(aut: Automaton) -> list[int]:
    """Start state first, then every other reachable state in ascending order."""
    seen = {aut.start}
    stack = [aut.start]
    while stack:
        q = stack.pop()
        for e in aut.edges[q]:
            if e.dest not in seen:
                seen.add(e.dest)
                stack.append(e.dest)
    return [aut.start] + sorted(seen - {aut.start})


def u_bits(u: int, width: int) -> str:
    return "".join(str(u >> i & 1) for i in range(width))


def build_arena(aut: Automaton) -> Arena:
    unc = aut.ap.uncontrollable_indices
    con = aut.ap.controllable_indices
    _check_width(len(unc), "uncontrollable")
    _check_width(len(con), "controllable")
    n_u, n_c = 1 << len(unc), 1 << len(con)

    states = reachable_states(aut)
    pos = {q: i for i, q in enumerate(states)}

    # per (q, u): ordered distinct (dest, color) outcomes with smallest c
    outcomes = {}
    trans_keys = set()
    for q in states:
        for u in range(n_u):
            row = {}
            for c in range(n_c):
                key = aut.step(q, join_bits(unc, con, u, c))
                if key not in row:
                    row[key] = c
            outcomes[q, u] = row
            trans_keys.update(row)

    spec = aut.parity
    trans_order = sorted(trans_keys, key=lambda k: (pos[k[0]], normalize(spec, k[1])))

    arena = Arena(owner=[], priority=[], successors=[], n_inputs=len(unc),
                  n_outputs=len(con))
    n_states = len(states)
    n_choices = n_states * n_u
    trans_index = {k: n_states + n_choices + i for i, k in enumerate(trans_order)}

    def add(owner, priority, succ, tag, name):
        arena.owner.append(owner)
        arena.priority.append(priority)
        arena.successors.append(succ)
        arena.tags.append(tag)
        arena.names.append(name)

    for i, q in enumerate(states):
        arena.state_vertex[q] = i
        add(Player.ENV, 0, list(range(n_states + i * n_u, n_states + (i + 1) * n_u)),
            StateV(q), f"q{q}")
    for i, q in enumerate(states):
        for u in range(n_u):
            v = n_states + i * n_u + u
            arena.choice_vertex[q, u] = v
            succ = []
            for key, c in outcomes[q, u].items():
                t = trans_index[key]
                succ.append(t)
                arena.choice[v, t] = c
            add(Player.CTRL, 0, succ, ChoiceV(q, u), f"q{q}|u={u_bits(u, len(unc))}")
    for dest, color in trans_order:
        add(Player.ENV, normalize(spec, color), [pos[dest]], TransV(dest, color),
            f"t:q{dest}#{color}")
    arena.initial = 0
    return arena
