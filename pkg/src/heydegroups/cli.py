"""Batch command-line front end; JSON in, JSON out.

Exit codes: 0 success (``check``: symmetric), 1 ``check`` found the
instance not symmetric, 2 input or precondition error.
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings
from fractions import Fraction
from pathlib import Path

from . import config
from .counterexamples import ConstructionError, lemma5_truncated, lemma6, thm1_II
from .distributions import classify
from .finite_difference import GroupFunction, is_polynomial
from .groups import Group
from .heyde import (
    VanishingCharacteristicFunction,
    check_coefficients,
    check_heyde_cf,
    check_heyde_exact,
    check_q_heyde,
    classify_conclusion,
)
from .jsonio import InputError, distribution_from_json, distribution_to_json, dumps, instance_from_json, instance_to_json, read_group
from .oracle import sample_check

EXIT_OK = 0
EXIT_NOT_SYMMETRIC = 1
EXIT_ERROR = 2


class UsageError(Exception):
    pass


def _load(path: str):
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON in {path}: {exc}") from exc


def _settings(args) -> dict:
    return {
        "tolerance": args.tolerance,
        "seed": args.seed,
        "jobs": args.jobs,
        "enum_bound": config.enum_bound(),
    }


def cmd_check(args) -> tuple[dict, int]:
    g, spec, mus = instance_from_json(_load(args.instance))
    coeffs = check_coefficients(g, spec)
    report: dict = {"command": "check", "settings": _settings(args), "instance": instance_to_json(g, spec, mus)}
    report["coefficients"] = coeffs.to_json()
    if not coeffs.passes and not args.allow_inadmissible:
        report["error"] = "; ".join(coeffs.failures)
        return report, EXIT_ERROR
    verdict = check_heyde_cf(g, spec, mus, tol=args.tolerance)
    report["heyde_cf"] = verdict.to_json()
    symmetric = verdict.holds
    if args.exact:
        exact = check_heyde_exact(g, spec, mus)
        report["heyde_exact"] = exact.to_json()
        report["oracle_agrees"] = exact.holds == verdict.holds
    if args.q:
        try:
            report["q_heyde"] = check_q_heyde(g, spec, mus, tol=args.tolerance).to_json()
        except VanishingCharacteristicFunction as exc:
            report["q_heyde"] = {"error": str(exc)}
    if args.classify:
        report["conclusion"] = classify_conclusion(g, spec, mus, verdict)
    report["symmetric"] = symmetric
    return report, EXIT_OK if symmetric else EXIT_NOT_SYMMETRIC


def cmd_construct(args) -> tuple[dict, int]:
    weight = Fraction(args.weight)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        if args.kind == "thm1-ii":
            g = read_group(args.group or "Z(9)")
            x0 = g.element(args.x0) if args.x0 is not None else _default_x0(g)
            inst = thm1_II(g, x0, weight)
        elif args.kind == "lemma5":
            inst = lemma5_truncated(args.p or 3, args.k, weight)
        else:
            inst = lemma6(args.p or 5, args.y1, args.y2, args.amplitude)
    report = instance_to_json(inst.group, inst.spec, inst.distributions)
    report.update({"command": "construct", "kind": inst.kind, "params": inst.params, "verification": inst.checks})
    report["settings"] = _settings(args)
    if caught:
        report["warnings"] = [str(w.message) for w in caught]
    return report, EXIT_OK


def _default_x0(g: Group):
    """First element (in index order) of prime order p with pX nontrivial."""
    from .groups import _is_prime, element_order, is_admissible

    for x in g.elements():
        p = element_order(x)
        if _is_prime(p) and is_admissible(g, p):
            return x
    raise ConstructionError(f"{g} has no element of prime order p with pX nontrivial")


def cmd_classify(args) -> tuple[dict, int]:
    mu = distribution_from_json(_load(args.distribution))
    classes = classify(mu, tol=args.tolerance)
    report = {
        "command": "classify",
        "settings": _settings(args),
        "distribution": distribution_to_json(mu),
        "classes": {
            "D": classes["degenerate"],
            "Gamma": classes["gaussian"],
            "I": classes["idempotent_shift"],
            "Gamma*I": classes["gaussian_times_idempotent"],
        },
    }
    return report, EXIT_OK


def cmd_polytest(args) -> tuple[dict, int]:
    data = _load(args.function)
    if isinstance(data, dict):
        group = read_group(data.get("group", args.group))
        rows = data.get("values", [])
    else:
        if args.group is None:
            raise InputError("a bare function table needs --group")
        group = read_group(args.group)
        rows = data
    if not rows:
        raise InputError("function table is empty")
    try:
        f = GroupFunction.from_json(group, rows)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(str(exc)) from exc
    result = is_polynomial(f, max_degree=args.max_degree, tol=args.tolerance)
    return {"command": "polytest", "settings": _settings(args), "group": group.to_json(), "result": result.to_json()}, EXIT_OK


def cmd_oracle_sample(args) -> tuple[dict, int]:
    g, spec, mus = instance_from_json(_load(args.instance))
    stats = sample_check(g, spec, mus, trials=args.trials, seed=args.seed, jobs=args.jobs)
    return {"command": "oracle sample", "settings": _settings(args), "report": stats}, EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="PRNG seed (default 0)")
    common.add_argument("--tolerance", type=float, default=config.TOL_EQUATION, help="zero threshold for equation checks")
    common.add_argument("--jobs", type=int, default=1, help="worker cap")
    common.add_argument("-o", "--output", help="write the JSON report here instead of stdout")

    parser = argparse.ArgumentParser(prog="heyde", description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", parents=[common], help="symmetry check of an instance file")
    p.add_argument("instance")
    p.add_argument("--exact", action="store_true", help="also compare exact joint laws")
    p.add_argument("--q", action="store_true", help="also run the Q-independence variant")
    p.add_argument("--classify", action="store_true", help="place the instance against the characterization results")
    p.add_argument("--allow-inadmissible", action="store_true", help="run even if coefficients are inadmissible")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("construct", parents=[common], help="emit a verified counterexample instance")
    p.add_argument("kind", choices=["thm1-ii", "lemma5", "lemma6"])
    p.add_argument("--group", help='group literal for thm1-ii, e.g. "Z(9)"')
    p.add_argument("--x0", type=int, nargs="+", help="coordinates of the prime-order element (thm1-ii)")
    p.add_argument("--weight", default="1/2", help="mixture weight a in (0, 1)")
    p.add_argument("--p", type=int)
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--y1", type=int, default=1)
    p.add_argument("--y2", type=int, default=2)
    p.add_argument("--amplitude", type=float, default=1.0)
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("classify", parents=[common], help="class membership of a distribution file")
    p.add_argument("distribution")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("polytest", parents=[common], help="polynomial test of a tabulated function")
    p.add_argument("function")
    p.add_argument("--group", help="group of a bare function table")
    p.add_argument("--max-degree", type=int, default=None)
    p.set_defaults(func=cmd_polytest)

    p = sub.add_parser("oracle", help="independent oracles")
    osub = p.add_subparsers(dest="oracle_command", required=True)
    q = osub.add_parser("sample", parents=[common], help="Monte-Carlo joint-law comparison")
    q.add_argument("instance")
    q.add_argument("--trials", type=int, default=100_000)
    q.set_defaults(func=cmd_oracle_sample)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        report, code = args.func(args)
    except (InputError, ConstructionError, VanishingCharacteristicFunction, config.EnumerationBoundError, ValueError) as exc:
        report, code = {"command": args.command, "error": str(exc)}, EXIT_ERROR
    text = dumps(report)
    if getattr(args, "output", None):
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    if code == EXIT_ERROR and "error" in report:
        print(f"error: {report['error']}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
