"""Command-line front end: ``clustersing <subcommand> [flags]``.

JSON goes to stdout with sorted keys; diagnostics go to stderr.  Exit codes:
0 success, 1 discrepancies, 2 invalid flags, 3 budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

from .algebra import is_prime
from .classifier import CoefficientPoint, classify, stratify
from .oracle import BudgetExceeded, diff_against_classifier
from .presentations import (
    FAMILIES,
    bfz_presentation,
    family_rank,
    normalize_family,
    reduced_presentation,
    reduction_witness,
    verify_reduction,
)
from .seeds import (
    LabeledSeed,
    dynkin_seed,
    mutate_seed,
    rank_two_seed,
    with_generic_coefficients,
    with_principal_coefficients,
)

EXIT_DISCREPANCY = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3


class UsageError(ValueError):
    pass


def _family_args(p: argparse.ArgumentParser, need_prime: bool = False) -> None:
    p.add_argument("--type", dest="kind", default=None, help=f"one of {', '.join(FAMILIES)}")
    p.add_argument("--n", type=int, default=None, help="rank (types A-E)")
    p.add_argument("--a", type=int, default=None, help="rank-2 entry b_12")
    p.add_argument("--b", type=int, default=None, help="rank-2 entry b_21")
    if need_prime:
        p.add_argument("--p", type=int, required=True, help="characteristic")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="clustersing", description="Singularities of cluster algebra fibers.")
    parser.add_argument("--format", choices=("json", "text"), default="json")
    sub = parser.add_subparsers(dest="command", required=True)

    s = sub.add_parser("seed", help="emit an initial seed")
    _family_args(s)
    s.add_argument("--coeffs", choices=("trivial", "principal", "generic"), default="trivial")

    m = sub.add_parser("mutate", help="mutate a seed in one direction")
    _family_args(m)
    m.add_argument("--coeffs", choices=("trivial", "principal", "generic"), default="trivial")
    m.add_argument("--seed-file", type=Path, default=None)
    m.add_argument("-k", type=int, required=True, help="mutable direction (1-based)")

    pr = sub.add_parser("present", help="exchange relations of an acyclic seed")
    _family_args(pr)
    pr.add_argument("--coeffs", choices=("trivial", "principal", "generic"), default="principal")
    pr.add_argument("--seed-file", type=Path, default=None)

    r = sub.add_parser("reduce", help="reduced presentation and witness check")
    _family_args(r)

    c = sub.add_parser("classify", help="singularity report for one coefficient point")
    _family_args(c, need_prime=True)
    c.add_argument("--eta", required=True, help="comma-separated residues")

    st = sub.add_parser("stratify", help="strata of the coefficient torus")
    _family_args(st, need_prime=True)

    v = sub.add_parser("verify", help="exhaustive oracle diff over all coefficient points")
    _family_args(v, need_prime=True)
    v.add_argument("--budget", type=int, default=None, help="max points per fiber")
    return parser


def _family(ns: argparse.Namespace) -> tuple[str, int]:
    if ns.kind is None:
        raise UsageError("--type is required")
    try:
        kind = normalize_family(ns.kind)
        n = family_rank(kind, ns.n, ns.a, ns.b)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    if kind != "rank2" and (ns.a is not None or ns.b is not None):
        raise UsageError("--a/--b only apply to --type rank2")
    return kind, n


def _prime(ns: argparse.Namespace) -> int:
    if not is_prime(ns.p):
        raise UsageError(f"--p {ns.p} is not prime")
    return ns.p


def parse_eta(text: str, n: int, p: int) -> CoefficientPoint:
    try:
        values = tuple(int(x) for x in text.split(","))
    except ValueError as exc:
        raise UsageError(f"--eta must be comma-separated integers, got {text!r}") from exc
    if len(values) != n:
        raise UsageError(f"--eta needs {n} entries, got {len(values)}")
    if any(v % p == 0 for v in values):
        raise UsageError(f"--eta entries must be nonzero mod {p}")
    return CoefficientPoint(p, values)


def _seed(ns: argparse.Namespace) -> LabeledSeed:
    if getattr(ns, "seed_file", None) is not None:
        try:
            base = LabeledSeed.from_json(ns.seed_file.read_text())
        except (OSError, ValueError, KeyError) as exc:
            raise UsageError(f"cannot read seed file: {exc}") from exc
    else:
        kind, n = _family(ns)
        base = rank_two_seed(ns.a, ns.b) if kind == "rank2" else dynkin_seed(kind, n)
    if ns.coeffs == "principal":
        return with_principal_coefficients(base)
    if ns.coeffs == "generic":
        return with_generic_coefficients(base)
    return base


def _run(ns: argparse.Namespace) -> tuple[dict | list, int, list[str]]:
    cmd = ns.command
    if cmd == "seed":
        return _seed(ns).to_json(), 0, []
    if cmd == "mutate":
        s = _seed(ns)
        if not 1 <= ns.k <= s.n:
            raise UsageError(f"-k must lie in 1..{s.n}")
        new, rel = mutate_seed(s, ns.k)
        return {"seed": new.to_json(), "relation": str(rel)}, 0, [str(rel)]
    if cmd == "present":
        try:
            pres = bfz_presentation(_seed(ns))
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        return pres.to_json(), 0, [str(g) for g in pres.generators]
    if cmd == "reduce":
        kind, n = _family(ns)
        pres = reduced_presentation(kind, n, ns.a, ns.b)
        report = verify_reduction(kind, n, ns.a, ns.b)
        w = reduction_witness(kind, n, ns.a, ns.b)
        out = {
            "reduced": pres.to_json(),
            "change": w.change.describe(),
            "forward": {k: str(v) for k, v in w.forward.items()},
            "verification": report.to_json(),
        }
        lines = [str(g) for g in pres.generators] + [
            f"{'ok  ' if c.passed else 'FAIL'} {c.label}" for c in report.checks
        ]
        return out, 0 if report.passed else EXIT_DISCREPANCY, lines
    if cmd == "classify":
        kind, n = _family(ns)
        p = _prime(ns)
        pt = parse_eta(ns.eta, n, p)
        rep = classify(kind, n, pt, ns.a, ns.b)
        lines = [rep.summary()] + [f"{c.name}: " + ", ".join(map(str, c.equations)) for c in rep.components]
        return rep.to_json(), 0, lines
    if cmd == "stratify":
        kind, n = _family(ns)
        p = _prime(ns)
        strata = [s.to_json() for s in stratify(kind, n, p, ns.a, ns.b)]
        lines = [f"{s['name']}: {' and '.join(s['conditions'])} -> {s['verdict']}" for s in strata]
        return strata, 0, lines
    kind, n = _family(ns)
    p = _prime(ns)
    if ns.budget is not None and ns.budget < 1:
        raise UsageError("--budget must be positive")
    diff = diff_against_classifier(kind, n, p, ns.a, ns.b, budget=ns.budget)
    return diff.to_json(), 0 if diff.ok else EXIT_DISCREPANCY, [diff.summary()]


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        payload, code, lines = _run(ns)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"clustersing: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BudgetExceeded as exc:
        print(f"clustersing: budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    if ns.format == "text":
        print("\n".join(lines))
    else:
        print(json.dumps(payload, sort_keys=True, indent=2))
    if ns.command == "verify":
        print(lines[0], file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
