"""Controller extraction and ASCII AIGER encoding.

Uncontrollable APs become circuit inputs and controllable APs become
outputs, both in ascending AP index.  The controller state lives in
``ceil(log2 |states|)`` latches; AIGER latches start at 0, so the initial
state always gets code 0.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import __version__
from .errors import AigerSyntaxError, Unrealizable
from .game import Arena, build_arena
from .solver import Solution, zielonka

TOOL_NAME = "hoasynth"


@dataclass
class MealyMachine:
    """Finite-state controller; state codes index ``states``."""

    states: list  # automaton state per code; states[0] is the initial state
    n_inputs: int
    n_outputs: int
    # (code, u) -> (c, next code)
    transition: dict = field(default_factory=dict)

    @property
    def initial(self):
        return 0

    def step(self, code, u):
        return self.transition[code, u]

    def run(self, inputs, code=0):
        """Outputs and state codes visited along an input sequence."""
        trace = []
        for u in inputs:
            c, code = self.transition[code, u]
            trace.append((c, code))
        return trace


def extract_mealy(aut, solution: Solution, arena: Arena) -> MealyMachine:
    if arena.initial not in solution.win_ctrl:
        raise Unrealizable("the environment wins from the initial state")
    n_u = 1 << arena.n_inputs
    codes = {aut.start: 0}
    order = [aut.start]
    machine = MealyMachine(order, arena.n_inputs, arena.n_outputs)
    i = 0
    while i < len(order):
        q = order[i]
        for u in range(n_u):
            cv = arena.choice_vertex[q, u]
            tv = solution.strat_ctrl[cv]
            dest = arena.tags[tv].state
            if dest not in codes:
                codes[dest] = len(order)
                order.append(dest)
            machine.transition[i, u] = (arena.choice[cv, tv], codes[dest])
        i += 1
    return machine


# ---------------------------------------------------------------------------
# Circuits


@dataclass
class AigerCircuit:
    max_var: int = 0
    inputs: list = field(default_factory=list)
    latches: list = field(default_factory=list)  # (literal, next literal)
    outputs: list = field(default_factory=list)
    and_gates: list = field(default_factory=list)  # (lhs, rhs0, rhs1)
    latch_init: list = field(default_factory=list)  # reset values, 0 unless read otherwise
    symbols: dict = field(default_factory=dict)  # ("i"|"l"|"o", position) -> name
    comments: list = field(default_factory=list)

    def check(self):
        """Raise ValueError unless every literal is well formed and the gates
        form an acyclic graph over defined variables."""
        defined = {0}
        for lit in self.inputs + [lit for lit, _ in self.latches] + [g[0] for g in self.and_gates]:
            if lit & 1 or lit < 2:
                raise ValueError(f"literal {lit} cannot be defined (odd or constant)")
            if lit >> 1 > self.max_var:
                raise ValueError(f"variable {lit >> 1} exceeds M={self.max_var}")
            if lit >> 1 in defined:
                raise ValueError(f"variable {lit >> 1} defined twice")
            defined.add(lit >> 1)
        used = [x for _, a, b in self.and_gates for x in (a, b)]
        used += [nxt for _, nxt in self.latches] + self.outputs
        for lit in used:
            if lit >> 1 not in defined:
                raise ValueError(f"literal {lit} refers to an undefined variable")
        self.gate_order()

    def gate_order(self):
        """AND gates sorted so that every operand precedes its use."""
        gates = {lhs >> 1: (lhs, a, b) for lhs, a, b in self.and_gates}
        done, order = set(), []
        for root in sorted(gates):
            stack = [(root, False)]
            on_path = set()
            while stack:
                var, expanded = stack.pop()
                if var in done or var not in gates:
                    continue
                if expanded:
                    on_path.discard(var)
                    done.add(var)
                    order.append(gates[var])
                    continue
                if var in on_path:
                    raise ValueError(f"combinational cycle through variable {var}")
                on_path.add(var)
                stack.append((var, True))
                _, a, b = gates[var]
                for x in (b >> 1, a >> 1):
                    if x in on_path and x in gates:
                        raise ValueError(f"combinational cycle through variable {x}")
                    stack.append((x, False))
        return order


class _GateBuilder:
    def __init__(self, first_var):
        self.next_var = first_var
        self.gates = []
        self.memo = {}

    def and2(self, a, b):
        if a < b:
            a, b = b, a
        if (a, b) not in self.memo:
            lhs = 2 * self.next_var
            self.next_var += 1
            self.gates.append((lhs, a, b))
            self.memo[a, b] = lhs
        return self.memo[a, b]

    def conj(self, lits):
        acc = lits[0]
        for lit in lits[1:]:
            acc = self.and2(acc, lit)
        return acc

    def disj(self, terms):
        if len(terms) == 1:
            return terms[0]
        return self.conj([t ^ 1 for t in terms]) ^ 1


def encode(mealy: MealyMachine, ap) -> AigerCircuit:
    """Sum-of-minterms circuit for the outputs and next-state bits of ``mealy``."""
    n_in, n_out = mealy.n_inputs, mealy.n_outputs
    n_states = len(mealy.states)
    n_lat = (n_states - 1).bit_length()
    input_lits = [2 * (1 + i) for i in range(n_in)]
    latch_lits = [2 * (1 + n_in + j) for j in range(n_lat)]
    domain = [(code, u) for code in range(n_states) for u in range(1 << n_in)]
    space = (1 << n_lat) << n_in
    gb = _GateBuilder(1 + n_in + n_lat)

    def minterm(code, u):
        lits = [lit if code >> j & 1 else lit ^ 1 for j, lit in enumerate(latch_lits)]
        lits += [lit if u >> i & 1 else lit ^ 1 for i, lit in enumerate(input_lits)]
        return lits

    def function(bit_of):
        ones = [(code, u) for code, u in domain if bit_of(code, u)]
        if not ones:
            return 0
        if len(ones) == space:
            return 1
        return gb.disj([gb.conj(minterm(code, u)) for code, u in ones])

    outputs = [function(lambda code, u, k=k: mealy.transition[code, u][0] >> k & 1)
               for k in range(n_out)]
    nexts = [function(lambda code, u, j=j: mealy.transition[code, u][1] >> j & 1)
             for j in range(n_lat)]

    circuit = AigerCircuit(
        max_var=gb.next_var - 1,
        inputs=input_lits,
        latches=list(zip(latch_lits, nexts)),
        outputs=outputs,
        and_gates=gb.gates,
        latch_init=[0] * n_lat,
    )
    names = ap.names
    for i, idx in enumerate(ap.uncontrollable_indices):
        circuit.symbols["i", i] = names[idx]
    for k, idx in enumerate(ap.controllable_indices):
        circuit.symbols["o", k] = names[idx]
    circuit.comments = [f"{TOOL_NAME} {__version__}"]
    return circuit


def write_aag(circuit: AigerCircuit) -> str:
    c = circuit
    lines = [f"aag {c.max_var} {len(c.inputs)} {len(c.latches)} "
             f"{len(c.outputs)} {len(c.and_gates)}"]
    lines += [str(lit) for lit in c.inputs]
    for j, (lit, nxt) in enumerate(c.latches):
        init = c.latch_init[j] if j < len(c.latch_init) else 0
        lines.append(f"{lit} {nxt}" if init == 0 else f"{lit} {nxt} {init}")
    lines += [str(lit) for lit in c.outputs]
    lines += [f"{lhs} {a} {b}" for lhs, a, b in c.and_gates]
    for kind in "ilo":
        for (k, pos), name in sorted(c.symbols.items()):
            if k == kind:
                lines.append(f"{kind}{pos} {name}")
    if c.comments:
        lines.append("c")
        lines += c.comments
    return "\n".join(lines) + "\n"


def read_aag(text: str) -> AigerCircuit:
    """Parse an ASCII AIGER file (latch reset values 0 and 1 supported)."""
    lines = text.split("\n")

    def ints(lineno, expected):
        if lineno >= len(lines):
            raise AigerSyntaxError("unexpected end of file", lineno + 1)
        fields = lines[lineno].split()
        if len(fields) not in expected or not all(f.isdigit() for f in fields):
            raise AigerSyntaxError(f"malformed line {lines[lineno]!r}", lineno + 1)
        return [int(f) for f in fields]

    header = lines[0].split() if lines else []
    if len(header) < 6 or header[0] != "aag" or not all(h.isdigit() for h in header[1:]):
        raise AigerSyntaxError("expected header 'aag M I L O A'", 1)
    m, i, l, o, a, *extra = map(int, header[1:])
    if any(extra):
        raise AigerSyntaxError("bad-state, constraint, justice and fairness "
                               "sections are not supported", 1)
    circuit = AigerCircuit(max_var=m)
    row = 1
    for _ in range(i):
        circuit.inputs.append(ints(row, (1,))[0])
        row += 1
    for _ in range(l):
        fields = ints(row, (2, 3))
        init = fields[2] if len(fields) == 3 else 0
        if init not in (0, 1):
            raise AigerSyntaxError("uninitialized latches are not supported", row + 1)
        circuit.latches.append((fields[0], fields[1]))
        circuit.latch_init.append(init)
        row += 1
    for _ in range(o):
        circuit.outputs.append(ints(row, (1,))[0])
        row += 1
    for _ in range(a):
        circuit.and_gates.append(tuple(ints(row, (3,))))
        row += 1
    while row < len(lines):
        line = lines[row]
        row += 1
        if line == "c":
            circuit.comments = [x for x in lines[row:] if x]
            break
        if not line:
            continue
        kind, sep, name = line.partition(" ")
        if kind[:1] not in ("i", "l", "o") or not kind[1:].isdigit() or not sep:
            raise AigerSyntaxError(f"malformed symbol line {line!r}", row)
        circuit.symbols[kind[0], int(kind[1:])] = name
    if m < i + l + a:
        raise AigerSyntaxError(f"M={m} is smaller than I+L+A={i + l + a}", 1)
    try:
        circuit.check()
    except ValueError as exc:
        raise AigerSyntaxError(str(exc)) from None
    return circuit


def synthesize(aut):
    """Solve ``aut`` and return ``(circuit, mealy)``; raises Unrealizable."""
    arena = build_arena(aut)
    solution = zielonka(arena)
    mealy = extract_mealy(aut, solution, arena)
    return encode(mealy, aut.ap), mealy
