"""Command-line interface.

Exit status: 0 success or affirmative verdict, 1 negative verdict, 2 usage or
parse error, 3 search budget exceeded.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .automaton import (
    DEFAULT_BUDGET,
    SearchBudget,
    dump_fta,
    format_fta,
    load_fta,
    parse_assignment,
    run,
)
from .equivalence import equivalent, is_f0_covered
from .errors import EssentreeError, SearchBudgetExceeded
from .essential import essential_chain, essentiality_report
from .language import InfiniteLanguage, enumerate_ground, is_finite_language, minimize_automaton, optimal_pair
from .reduction import reduce
from .terms import format_position, format_term, parse_term, subterm_at

EXIT_OK, EXIT_NEGATIVE, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3

# command -> number of --term files it takes
TERM_COUNTS = {
    "run": 1,
    "ess": 1,
    "chain": 1,
    "reduce": 1,
    "equiv": 2,
    "covered": 1,
    "finite": 0,
    "enumerate": 0,
    "minimize": 0,
    "optimal": 0,
}


class UsageError(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="essentree",
        description="Essential inputs, fictive-input reduction and language analysis for tree automata.",
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")
    helps = {
        "run": "state reached on a term under --assign",
        "ess": "essential and r-essential variables of a term",
        "chain": "strong chain along which --var stays essential",
        "reduce": "apply fictive-input removal rules to a fixpoint",
        "equiv": "compare two terms for A- or rA-equivalence",
        "covered": "check whether a term is F0-covered",
        "finite": "decide finiteness of the ground language",
        "enumerate": "list accepted ground terms up to --max-depth",
        "minimize": "minimal equivalent automaton",
        "optimal": "optimal automaton/language pair for a finite language",
    }
    for name, text in helps.items():
        p = sub.add_parser(name, help=text, description=text)
        p.add_argument("--automaton", required=True, type=Path, help=".fta file")
        if TERM_COUNTS[name]:
            p.add_argument("--term", action="append", default=[], type=Path, help=".term file")
        p.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="maximum number of automaton runs")
        if name in ("ess", "equiv", "reduce", "optimal"):
            p.add_argument("--mode", choices=["A", "rA"], default="A")
        if name == "run":
            p.add_argument("--assign", required=True, help='e.g. "x1=0,x2=1"')
        if name in ("chain", "ess"):
            p.add_argument("--var", type=int, required=name == "chain", help="variable index")
        if name == "enumerate":
            p.add_argument("--max-depth", type=int, required=True)
        if name in ("minimize", "optimal"):
            p.add_argument("--out", type=Path, help="output file (minimize) or prefix (optimal)")
    return parser


def _read_terms(args, sig):
    paths = getattr(args, "term", [])
    want = TERM_COUNTS[args.command]
    if len(paths) != want:
        raise UsageError(f"{args.command} needs exactly {want} --term file(s), got {len(paths)}")
    return [parse_term(p.read_text(encoding="utf-8").strip(), sig) for p in paths]


def dispatch(args: argparse.Namespace, out=None) -> int:
    out = sys.stdout if out is None else out
    a = load_fta(args.automaton)
    terms = _read_terms(args, a.signature)
    budget = SearchBudget(args.budget)
    cmd = args.command

    def say(*lines):
        for line in lines:
            print(line, file=out)

    if cmd == "run":
        try:
            g = parse_assignment(args.assign, a.signature)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        q = run(a, g, terms[0])
        say(f"{q} ({'accepted' if q in a.final else 'rejected'})")
        return EXIT_OK

    if cmd == "ess":
        report = essentiality_report(a, terms[0], budget)
        say(*report.lines())
        if args.var is not None:
            found = report.r_essential if args.mode == "rA" else report.essential
            return EXIT_OK if args.var in found else EXIT_NEGATIVE
        return EXIT_OK

    if cmd == "chain":
        chain = essential_chain(a, terms[0], args.var, budget)
        if chain is None:
            say(f"x{args.var} is fictive for the term; no chain")
            return EXIT_NEGATIVE
        say(*(f"{format_position(p)}\t{format_term(subterm_at(terms[0], p))}" for p in chain))
        return EXIT_OK

    if cmd == "reduce":
        result, trace = reduce(a, terms[0], args.mode, budget)
        say(format_term(result), *map(str, trace))
        return EXIT_OK

    if cmd == "equiv":
        verdict = equivalent(a, terms[0], terms[1], args.mode, budget)
        say(str(verdict))
        return EXIT_OK if verdict else EXIT_NEGATIVE

    if cmd == "covered":
        verdict = is_f0_covered(a, terms[0], budget)
        say(str(verdict))
        return EXIT_OK if verdict else EXIT_NEGATIVE

    if cmd == "finite":
        result = is_finite_language(a)
        say(str(result))
        return EXIT_OK if result else EXIT_NEGATIVE

    if cmd == "enumerate":
        say(*map(format_term, enumerate_ground(a, args.max_depth, limit=args.budget)))
        return EXIT_OK

    if cmd == "minimize":
        m = minimize_automaton(a)
        if args.out:
            dump_fta(m, args.out)
            say(f"wrote {args.out} ({len(m.states)} states)")
        else:
            out.write(format_fta(m))
        return EXIT_OK

    if cmd == "optimal":
        pair = optimal_pair(a, args.mode, budget)
        if isinstance(pair, InfiniteLanguage):
            say(str(pair))
            return EXIT_NEGATIVE
        if args.out:
            fta, tf = pair.write(args.out)
            say(f"wrote {fta} and {tf}")
        say(f"minimal automaton: {len(pair.automaton.states)} states", "language:")
        say(*(f"  {format_term(t)}" for t in pair.language))
        return EXIT_OK

    raise UsageError(f"unknown command {cmd}")  # pragma: no cover


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return dispatch(args)
    except SearchBudgetExceeded as exc:
        print(f"essentree: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (UsageError, EssentreeError, OSError, ValueError) as exc:
        print(f"essentree: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
