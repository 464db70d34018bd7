"""Command line interface.

Exit codes: 10 realizable, 20 unrealizable, 0 success for the other
commands, 1 invalid input or failed check, 2 usage error.  Verdicts go to
standard output; diagnostics go to standard error, errors as
``error[<code>]: message``.
"""

from __future__ import annotations

import argparse
import logging
import sys

from . import __version__
from .aiger import read_aag, synthesize, write_aag
from .automaton import summary, validate
from .errors import HoaSynthError, Unrealizable
from .game import build_arena
from .hoa import parse
from .pgsolver import write_pgsolver
from .solver import zielonka
from .verify import product_check

log = logging.getLogger("hoasynth")

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_USAGE = 2
EXIT_REALIZABLE = 10
EXIT_UNREALIZABLE = 20


def _read(path, stdin):
    if path == "-":
        return stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _write(path, text, stdout):
    if path is None or path == "-":
        stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def build_parser():
    p = argparse.ArgumentParser(
        prog="hoasynth",
        description="Realizability and synthesis for extended-HOA parity automata.",
    )
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("-q", "--quiet", action="store_true",
                   help="only report errors on standard error")
    p.add_argument("-v", "--verbose", action="store_true",
                   help="report progress on standard error")
    sub = p.add_subparsers(dest="command", required=True, metavar="COMMAND")

    c = sub.add_parser("check", help="validate an automaton and print a summary")
    c.add_argument("file")

    r = sub.add_parser("realizability", help="print REALIZABLE or UNREALIZABLE")
    r.add_argument("file")

    s = sub.add_parser("synth", help="synthesize an AIGER controller")
    s.add_argument("file")
    s.add_argument("-o", "--output", help="write the circuit here instead of stdout")
    s.add_argument("--verify", action="store_true",
                   help="model-check the circuit before emitting it")

    h = sub.add_parser(
        "hoa2pg",
        help="export the game in PGSolver format",
        description="Export the game in PGSolver format. Player 0 is the controller "
                    "(wins on even maximal priority), player 1 the environment.",
    )
    h.add_argument("file")
    h.add_argument("-o", "--output")

    v = sub.add_parser("verify", help="check that an AIGER circuit is a winning controller")
    v.add_argument("file")
    v.add_argument("circuit")
    return p


def _load(path, stdin):
    aut = validate(parse(_read(path, stdin)))
    log.info("%s: %d states, %d APs, parity %s", path, aut.state_count, aut.n_aps,
             aut.parity)
    return aut


def _run(args, stdin, stdout):
    if args.command == "check":
        aut = _load(args.file, stdin)
        info = summary(aut)
        stdout.write(f"states: {info['states']}\n")
        stdout.write(f"start: {info['start']}\n")
        stdout.write(f"aps: {len(info['aps'])} " + " ".join(info["aps"]) + "\n")
        stdout.write("controllable: " + " ".join(map(str, info["controllable"])) + "\n")
        stdout.write(f"parity: {info['parity']}\n")
        return EXIT_OK

    if args.command == "realizability":
        aut = _load(args.file, stdin)
        arena = build_arena(aut)
        log.info("arena: %d vertices", len(arena))
        won = arena.initial in zielonka(arena).win_ctrl
        stdout.write("REALIZABLE\n" if won else "UNREALIZABLE\n")
        return EXIT_REALIZABLE if won else EXIT_UNREALIZABLE

    if args.command == "synth":
        aut = _load(args.file, stdin)
        try:
            circuit, mealy = synthesize(aut)
        except Unrealizable:
            stdout.write("UNREALIZABLE\n")
            return EXIT_UNREALIZABLE
        text = write_aag(circuit)
        log.info("controller: %d states, %d AND gates", len(mealy.states),
                 len(circuit.and_gates))
        if args.verify and not product_check(aut, read_aag(text)):
            print("error[verification-failed]: synthesized circuit is not winning",
                  file=sys.stderr)
            return EXIT_INVALID
        stdout.write("REALIZABLE\n")
        _write(args.output, text, stdout)
        return EXIT_REALIZABLE

    if args.command == "hoa2pg":
        aut = _load(args.file, stdin)
        _write(args.output, write_pgsolver(build_arena(aut)), stdout)
        return EXIT_OK

    if args.command == "verify":
        aut = _load(args.file, stdin)
        with open(args.circuit, encoding="ascii") as fh:
            ok = product_check(aut, read_aag(fh.read()))
        stdout.write("OK\n" if ok else "FAIL\n")
        return EXIT_OK if ok else EXIT_INVALID

    raise AssertionError(args.command)


def run(argv=None, stdin=None, stdout=None) -> int:
    stdin = stdin or sys.stdin
    stdout = stdout or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("%(levelname)s: %(message)s"))
    log.handlers[:] = [handler]
    log.propagate = False
    if args.quiet:
        log.setLevel(logging.ERROR)
    else:
        log.setLevel(logging.INFO if args.verbose else logging.WARNING)
    try:
        return _run(args, stdin, stdout)
    except HoaSynthError as exc:
        print(f"error[{exc.code}]: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"error[io]: {exc}", file=sys.stderr)
        return EXIT_INVALID


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
