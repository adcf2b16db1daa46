"""``winrat CNF PROOF``: check a DRAT/DRUP refutation."""

from __future__ import annotations

import argparse
import logging
import sys

from winrat.driver import verify
from winrat.proof_io import IntegrityError, ParseError, load_proof, parse_dimacs
from winrat.propagation import KERNEL
from winrat.session import INF, Config


def _positive(kind=int, allow_inf=False):
    def parse(text):
        if allow_inf and text.lower() in ("inf", "infinity"):
            return INF
        try:
            v = kind(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"expected a number, got {text!r}") from None
        if v < 1:
            raise argparse.ArgumentTypeError(f"must be >= 1, got {text!r}")
        return v

    return parse


def _budget(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return v


def build_parser() -> argparse.ArgumentParser:
    d = Config()
    ap = argparse.ArgumentParser(prog="winrat", description=__doc__)
    ap.add_argument("cnf", help="DIMACS CNF formula")
    ap.add_argument("proof", help="ASCII DRAT or DRUP proof")
    ap.add_argument("--theta", type=_positive(int, True), default=d.theta, help="window size, or 'inf'")
    ap.add_argument("--mu", type=_positive(int, True), default=d.mu, help="max inference size in a window")
    ap.add_argument("--span", type=_positive(), default=d.span, help="subset window span")
    ap.add_argument("--tail", type=_budget, default=d.tail, help="index beyond which every size enters the window pass")
    ap.add_argument("--add-max", type=_budget, default=d.add_max, help="max size of subset-verified clauses added to F")
    ap.add_argument("--mem-budget", type=_budget, default=None, help="resident inference bodies beyond the active set")
    ap.add_argument("--no-probe", action="store_true")
    ap.add_argument("--no-subset", action="store_true")
    ap.add_argument("--no-window", action="store_true")
    ap.add_argument("--no-deactivate", action="store_true")
    ap.add_argument("--no-prune", action="store_true")
    ap.add_argument("--no-fastpath", action="store_true")
    ap.add_argument("--stats", action="store_true", help="print statistics as 'c ' lines")
    ap.add_argument("--debug-theorem2", action="store_true", help="count full-pass checks whose conflict has no falsified input clause")
    ap.add_argument("-v", "--verbose", action="store_true")
    return ap


def config_from_args(args) -> Config:
    return Config(
        theta=args.theta,
        mu=args.mu,
        span=args.span,
        tail=args.tail,
        add_max=args.add_max,
        probe=not args.no_probe,
        subset=not args.no_subset,
        window=not args.no_window,
        deactivate=not args.no_deactivate,
        prune=not args.no_prune,
        fastpath=not args.no_fastpath,
        debug_theorem2=args.debug_theorem2,
    )


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return 0 if e.code == 0 else 2
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.ERROR,
        format="c %(levelname)s %(message)s",
        stream=sys.stderr,
    )
    try:
        formula = parse_dimacs(args.cnf)
        db = load_proof(args.proof, args.mem_budget)
    except (OSError, ParseError) as e:
        print(f"winrat: {e}", file=sys.stderr)
        return 2
    try:
        verdict, stats = verify(formula, db, config_from_args(args))
    except IntegrityError as e:
        print(f"winrat: {e}", file=sys.stderr)
        return 2
    finally:
        db.close()
    if args.stats:
        print(f"c kernel {KERNEL}")
        if verdict.reason:
            print(f"c reason {verdict.reason}")
        for line in stats.lines():
            print(f"c {line}")
    print(f"s {verdict.status}")
    return 0 if verdict.verified else 1


if __name__ == "__main__":
    sys.exit(main())
