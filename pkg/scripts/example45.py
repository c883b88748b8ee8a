"""Run the two-element example through every check, its powers and their quotients."""

import argparse
import sys
from collections import Counter

from palab.config import Limits
from palab.report import describe
from palab.search import verify_example_4_5


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--max-power", type=int, default=3)
    p.add_argument("--verbose", action="store_true")
    args = p.parse_args()
    bundle = verify_example_4_5(Limits.from_env(), max_power=args.max_power)
    per_check = Counter((r.check_name, r.holds) for _, r in bundle.entries)
    for (name, ok), count in sorted(per_check.items()):
        print(f"{name:24s} {'pass' if ok else 'FAIL'} x{count}")
    if args.verbose:
        for label, r in bundle.entries:
            print(f"[{label}] {describe(r)}")
    print("all pass" if bundle.holds else "FAILURES")
    return 0 if bundle.holds else 1


if __name__ == "__main__":
    sys.exit(main())
