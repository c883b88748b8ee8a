"""Print predicate counts for protomodular structures on small carriers.

    python3 scripts/census.py            # default grid
    python3 scripts/census.py --s 4 --n 1 --dedup
"""

import argparse
import json
import time

from palab.config import Limits
from palab.search import SearchSpec, classify

GRID = [(2, 1, False), (3, 1, False), (3, 1, True), (2, 2, False), (2, 2, True), (4, 1, True)]


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--s", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--dedup", action="store_true")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--json", action="store_true")
    args = p.parse_args()
    grid = [(args.s, args.n, args.dedup)] if args.s else GRID
    limits = Limits.from_env(workers=args.workers)
    for s, n, dedup in grid:
        t0 = time.perf_counter()
        summary = classify(SearchSpec(s, n, dedup=dedup), limits)
        if args.json:
            print(json.dumps(summary, sort_keys=True))
            continue
        print(f"s={s} n={n} dedup={dedup}: {summary['total']} structures ({time.perf_counter() - t0:.1f}s)")
        for key in ("rc_i", "two_associative", "group", "group_collapse_applicable", "group_collapse_violations"):
            if key in summary:
                print(f"  {key:28s} {summary[key]}")


if __name__ == "__main__":
    main()
