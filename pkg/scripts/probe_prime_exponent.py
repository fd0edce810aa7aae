"""Random search for a symmetric tuple with a non-degenerate law on groups of prime exponent.

Runs search_nondegenerate on Z(p)^d for p in {3, 5, 7}, d <= 2, with fresh
admissible coefficient specs per trial, plus the exhaustive rational grid on
Z(3). A witness would contradict the positive result for these groups.
"""

import argparse
import sys
import time

from heydegroups.groups import Group
from heydegroups.heyde import LinearFormsSpec
from heydegroups.jsonio import distribution_to_json, dumps
from heydegroups.oracle import search_nondegenerate


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--budget", type=int, default=10_000)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--grid-denominator", type=int, default=6)
    args = parser.parse_args(argv)

    results = []
    start = time.perf_counter()
    res = search_nondegenerate(Group((3,)), LinearFormsSpec((1, 1), (1, 1)), grid_denominator=args.grid_denominator)
    results.append({"group": "Z(3)", "mode": res.mode, "examined": res.examined, "found": res.found})
    for moduli in ((3,), (5,), (7,), (3, 3), (5, 5), (7, 7)):
        g = Group(moduli)
        res = search_nondegenerate(g, budget=args.budget, seed=args.seed)
        row = {"group": str(g), "mode": res.mode, "examined": res.examined, "found": res.found}
        if res.found:
            row["spec"] = res.spec.to_json()
            row["witness"] = [distribution_to_json(mu, False) for mu in res.witness]
        results.append(row)
    report = {"seed": args.seed, "budget": args.budget, "results": results, "seconds": round(time.perf_counter() - start, 1)}
    sys.stdout.write(dumps(report))
    return 1 if any(r["found"] for r in results) else 0


if __name__ == "__main__":
    sys.exit(main())
