"""Check that a circuit is a winning controller for an automaton.

The check only looks at the circuit (as parsed from AIGER text) and the
automaton.  It builds the product of both from ``(start, all-zero
latches)`` and lets the environment choose every input; the circuit is
winning iff the environment cannot reach a cycle whose largest priority
is odd.
"""

from __future__ import annotations

from .aiger import AigerCircuit, read_aag
from .automaton import Automaton, join_bits
from .errors import InterfaceMismatch, ProductTooLarge, WidthMismatch
from .game import Game, Player, normalize
from .solver import zielonka

MAX_PRODUCT = 1 << 20


def _as_circuit(circuit) -> AigerCircuit:
    if isinstance(circuit, (str, bytes)):
        if isinstance(circuit, bytes):
            circuit = circuit.decode("ascii")
        return read_aag(circuit)
    return circuit


class Simulator:
    """Evaluates a circuit step by step; bits are sequences of 0/1."""

    def __init__(self, circuit: AigerCircuit):
        self.circuit = circuit
        self.gates = circuit.gate_order()

    def step(self, latch_state, inputs):
        c = self.circuit
        latch_state, inputs = list(latch_state), list(inputs)
        if len(latch_state) != len(c.latches):
            raise WidthMismatch(f"expected {len(c.latches)} latch bits, got {len(latch_state)}")
        if len(inputs) != len(c.inputs):
            raise WidthMismatch(f"expected {len(c.inputs)} input bits, got {len(inputs)}")
        val = {0: 0}
        for lit, b in zip(c.inputs, inputs):
            val[lit >> 1] = 1 if b else 0
        for (lit, _), b in zip(c.latches, latch_state):
            val[lit >> 1] = 1 if b else 0

        def lit_value(lit):
            return val[lit >> 1] ^ (lit & 1)

        for lhs, a, b in self.gates:
            val[lhs >> 1] = lit_value(a) & lit_value(b)
        outputs = tuple(lit_value(lit) for lit in c.outputs)
        nxt = tuple(lit_value(n) for _, n in c.latches)
        return outputs, nxt

    def initial_state(self):
        c = self.circuit
        return tuple(c.latch_init[j] if j < len(c.latch_init) else 0
                     for j in range(len(c.latches)))


def simulate(circuit, latch_state, inputs):
    """One clock step: ``(outputs, next latch state)``."""
    return Simulator(_as_circuit(circuit)).step(latch_state, inputs)


def _bits(x, width):
    return tuple(x >> i & 1 for i in range(width))


def _int(bits):
    return sum(b << i for i, b in enumerate(bits))


def product_check(aut: Automaton, circuit, limit=MAX_PRODUCT) -> bool:
    circuit = _as_circuit(circuit)
    unc = aut.ap.uncontrollable_indices
    con = aut.ap.controllable_indices
    if len(circuit.inputs) != len(unc) or len(circuit.outputs) != len(con):
        raise InterfaceMismatch(
            f"circuit has {len(circuit.inputs)} inputs / {len(circuit.outputs)} outputs, "
            f"automaton has {len(unc)} uncontrollable / {len(con)} controllable APs"
        )
    sim = Simulator(circuit)

    # vertices: ("s", q, latches) with priority 0, ("t", q', latches', prio)
    index = {}
    owner, priority, successors = [], [], []

    def vertex(key, prio):
        if key not in index:
            if len(index) >= limit:
                raise ProductTooLarge(f"product exceeds {limit} vertices")
            index[key] = len(owner)
            owner.append(Player.ENV)
            priority.append(prio)
            successors.append([])
        return index[key]

    start = ("s", aut.start, sim.initial_state())
    vertex(start, 0)
    stack = [start]
    while stack:
        key = stack.pop()
        _, q, latches = key
        v = index[key]
        for u in range(1 << len(unc)):
            outs, nxt = sim.step(latches, _bits(u, len(unc)))
            dest, color = aut.step(q, join_bits(unc, con, u, _int(outs)))
            prio = normalize(aut.parity, color)
            tkey = ("t", dest, nxt, prio)
            fresh = tkey not in index
            t = vertex(tkey, prio)
            if t not in successors[v]:
                successors[v].append(t)
            if fresh:
                skey = ("s", dest, nxt)
                s_fresh = skey not in index
                successors[t].append(vertex(skey, 0))
                if s_fresh:
                    stack.append(skey)

    game = Game(owner, priority, successors)
    return 0 not in zielonka(game).win_env
