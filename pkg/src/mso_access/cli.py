"""``mso-access`` command line.

Exit codes: 0 ok, 1 usage, 2 validation failure, 3 out-of-bounds,
4 budget violation.
"""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional, Sequence

from . import acceptance
from .access import count, direct_access, enumerate_outputs, preprocess
from .automaton import (
    VsetAutomaton,
    check_unambiguous,
    format_mapping,
    parse_automaton,
    parse_order,
    resolve_order,
)
from .editing import StringsDB, apply_program, materialize, parse_program
from .errors import MsoAccessError, OutOfBounds
from .fixtures import a0
from .oracle import sorted_outputs

EXIT_OK, EXIT_USAGE, EXIT_INVALID, EXIT_BOUNDS, EXIT_BUDGET = 0, 1, 2, 3, 4

log = logging.getLogger("mso_access")


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse would exit with 2
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


def _read_automaton(path: str, skip_check: bool) -> VsetAutomaton:
    a = parse_automaton(Path(path).read_text())
    if not skip_check:
        ok, witness = check_unambiguous(a)
        if not ok:
            raise MsoAccessError(f"automaton is ambiguous; witness {' '.join(witness)!r}")
    return a


def _read_string(args) -> List[str]:
    text = Path(args.input).read_text() if args.input is not None else args.string
    if args.chars:
        return list(text.rstrip("\n"))
    return text.split()


def _show(symbols: Sequence[str]) -> str:
    if all(len(c) == 1 for c in symbols):
        return "".join(symbols)
    return " ".join(symbols)


# -- subcommands ------------------------------------------------------------

def cmd_validate(args) -> int:
    a = parse_automaton(Path(args.automaton).read_text())
    if a.removed_states:
        print(f"notice: trimmed states {', '.join(a.removed_states)}")
    width = max(len(q) for q in a.states)
    for name, vs in zip(a.states, a.var_sets):
        print(f"X_{name:<{width}} = {{{','.join(sorted(vs))}}}")
    if args.skip_unambiguity_check:
        print("functional: yes; unambiguous: not checked")
        return EXIT_OK
    ok, witness = check_unambiguous(a)
    if not ok:
        print(f"functional: yes; unambiguous: no (witness {_show(witness)!r})")
        return EXIT_INVALID
    print("functional: yes; unambiguous: yes")
    return EXIT_OK


def cmd_count(args) -> int:
    a = _read_automaton(args.automaton, args.skip_unambiguity_check)
    print(count(preprocess(a, _read_string(args))))
    return EXIT_OK


def cmd_get(args) -> int:
    a = _read_automaton(args.automaton, args.skip_unambiguity_check)
    order = resolve_order(a, parse_order(args.order))
    ix = preprocess(a, _read_string(args))
    print(format_mapping(direct_access(ix, args.index, order), order))
    return EXIT_OK


def cmd_enumerate(args) -> int:
    a = _read_automaton(args.automaton, args.skip_unambiguity_check)
    order = resolve_order(a, parse_order(args.order))
    s = _read_string(args)
    got = list(enumerate_outputs(preprocess(a, s), order))
    for m in got:
        print(format_mapping(m, order))
    if args.oracle:
        want = sorted_outputs(a, s, order)
        if got != want:
            print(f"oracle: MISMATCH ({len(got)} outputs vs {len(want)} from the oracle)",
                  file=sys.stderr)
            return EXIT_INVALID
        print(f"oracle: agrees on {len(want)} outputs", file=sys.stderr)
    return EXIT_OK


def cmd_edit(args) -> int:
    a = _read_automaton(args.automaton, args.skip_unambiguity_check)
    strings, program = parse_program(Path(args.program).read_text())
    ix = apply_program(program, StringsDB(a, strings))
    if args.count:
        print(count(ix))
    elif args.index is not None:
        order = resolve_order(a, parse_order(args.order))
        print(format_mapping(direct_access(ix, args.index, order), order))
    else:
        print(_show(materialize(ix)))
    return EXIT_OK


def cmd_bench(args) -> int:
    failed = False
    for n in args.n:
        report = acceptance.measure_budgets(n, seed=args.seed, trials=args.trials)
        problems = report.violations(len(a0().variables))
        print(f"n {n}")
        print(f"height {report.height}")
        print(f"max_set_multiplications {report.max_set_multiplications} "
              f"budget {acceptance.set_budget(n)}")
        print(f"max_access_sets {report.max_access_sets} "
              f"budget {acceptance.access_budget(n, 2)}")
        print(f"max_access_multiplications {report.max_access_multiplications}")
        print(f"max_edit_nodes {report.max_edit_nodes} budget {acceptance.edit_budget(n)}")
        for p in problems:
            print(f"violation {p}")
        failed |= bool(problems)
    return EXIT_BUDGET if failed else EXIT_OK


def cmd_selftest(args) -> int:
    results = []
    for check in acceptance.ALL_CRITERIA:
        result = check()
        print(result.line(), flush=True)
        results.append(result)
    failed = [r.number for r in results if not r.passed]
    if not failed:
        return EXIT_OK
    return EXIT_BUDGET if failed == [7] else EXIT_INVALID


def cmd_dump(args) -> int:
    a = _read_automaton(args.automaton, True)
    print(preprocess(a, _read_string(args)).tree.dump())
    return EXIT_OK


# -- parser -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="mso-access",
                     description="Direct access to the outputs of vset automata over strings.")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def with_automaton(p):
        p.add_argument("--automaton", required=True, metavar="FILE")
        p.add_argument("--skip-unambiguity-check", action="store_true",
                       help="trust that the automaton is unambiguous")

    def with_input(p):
        src = p.add_mutually_exclusive_group(required=True)
        src.add_argument("--input", metavar="FILE", help="whitespace-separated symbols")
        src.add_argument("--string", metavar="TEXT", help="the input given inline")
        p.add_argument("--chars", action="store_true",
                       help="read the input as one symbol per character")

    p = sub.add_parser("validate", help="trim, check functionality and unambiguity")
    with_automaton(p)
    p.set_defaults(run=cmd_validate)

    p = sub.add_parser("count", help="number of outputs")
    with_automaton(p)
    with_input(p)
    p.set_defaults(run=cmd_count)

    p = sub.add_parser("get", help="the i-th output")
    with_automaton(p)
    with_input(p)
    p.add_argument("--index", type=int, required=True)
    p.add_argument("--order", help="variable order, e.g. x2,x1")
    p.set_defaults(run=cmd_get)

    p = sub.add_parser("enumerate", help="all outputs in order")
    with_automaton(p)
    with_input(p)
    p.add_argument("--order")
    p.add_argument("--oracle", action="store_true", help="compare with brute-force enumeration")
    p.set_defaults(run=cmd_enumerate)

    p = sub.add_parser("edit", help="run an editing program")
    with_automaton(p)
    p.add_argument("--program", required=True, metavar="FILE")
    what = p.add_mutually_exclusive_group()
    what.add_argument("--index", type=int)
    what.add_argument("--count", action="store_true")
    p.add_argument("--order")
    p.set_defaults(run=cmd_edit)

    p = sub.add_parser("bench", help="check operation budgets on synthetic inputs")
    p.add_argument("--n", type=int, nargs="+", default=[1 << 16])
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--seed", type=int, default=acceptance.DEFAULT_SEED)
    p.set_defaults(run=cmd_bench)

    p = sub.add_parser("selftest", help="run the acceptance checks")
    p.set_defaults(run=cmd_selftest)

    p = sub.add_parser("dump", help="print the preprocessed tree")
    with_automaton(p)
    with_input(p)
    p.set_defaults(run=cmd_dump)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    if args.command == "bench" and any(n < 1 for n in args.n):
        print("mso-access: error: --n must be positive", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.run(args)
    except OutOfBounds as exc:
        print(exc, file=sys.stderr)
        return EXIT_BOUNDS
    except (MsoAccessError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
