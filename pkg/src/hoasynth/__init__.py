"""Reactive synthesis from extended-HOA parity automata.

Pipeline: parse an HOA v1 file carrying a ``controllable-AP`` header,
validate it as a deterministic complete parity automaton, build the
environment/controller arena, solve it with Zielonka's algorithm and emit
the controller as an ASCII AIGER circuit.
"""

__version__ = "0.1.0"

from .errors import HoaSynthError
from .hoa import parse, print_document
from .automaton import Automaton, validate
from .game import build_arena
from .solver import zielonka, realizable
from .aiger import extract_mealy, encode, write_aag, read_aag, synthesize
from .verify import product_check, simulate
from .pgsolver import write_pgsolver, parse_pgsolver


def load(text):
    """Parse and validate extended-HOA text in one go."""
    return validate(parse(text))


__all__ = [
    "HoaSynthError",
    "parse",
    "print_document",
    "Automaton",
    "validate",
    "load",
    "build_arena",
    "zielonka",
    "realizable",
    "extract_mealy",
    "encode",
    "write_aag",
    "read_aag",
    "synthesize",
    "product_check",
    "simulate",
    "write_pgsolver",
    "parse_pgsolver",
]
