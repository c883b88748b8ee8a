"""Command-line front end.

Exit codes: 0 when every requested check holds, 1 when a check (or a
precondition of one) fails, 2 on malformed input or exceeded caps.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

from .algebra import (
    AlgebraError,
    congruence_from_dict,
    enumerate_congruences,
    load_algebra,
    power,
    quotient,
)
from .checks import CHECKS, check_derived_abc
from .config import ConfigError, Limits
from .report import CheckReport, InvariantViolation, PreconditionError, describe, failed
from .search import SearchSpec, catalog_lines, classify, search, verify_example_4_5
from .topology import (
    check_lemma_4_1,
    check_theorem_4_2,
    compatible_topologies,
    load_topology,
    sep_axioms,
)
from .uniformity import check_lemma_4_4, verify_C_conditions

AXIOMS = ("t0", "t1", "t2", "regular", "completely_regular")
ALL_CHECKS = ("protomodular", "abc", "2-assoc", "rc-i", "rc-ii", "rc-iii", "rc-iv", "rc-v", "lemma31", "group")


class InputError(Exception):
    pass


def _emit(args, payload: dict, lines: list[str]) -> None:
    if args.json:
        print(json.dumps(payload, sort_keys=True))
    else:
        for line in lines:
            print(line)


def _read_json(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"{path}: {exc}") from None


def _reports_out(args, reports: list[CheckReport], extra: Optional[dict] = None) -> int:
    payload = {"reports": [r.to_dict() for r in reports], **(extra or {})}
    _emit(args, payload, [describe(r) for r in reports])
    return 0 if all(r.holds for r in reports) else 1


def cmd_verify(args, limits: Limits) -> int:
    A = load_algebra(args.algebra)
    names = [c.strip() for c in args.checks.split(",") if c.strip()] if args.checks else list(ALL_CHECKS)
    unknown = [c for c in names if c not in ALL_CHECKS]
    if unknown:
        raise InputError(f"unknown checks {unknown}; choose from {', '.join(ALL_CHECKS)}")
    reports = []
    for name in names:
        try:
            if name == "abc":
                reports.extend(check_derived_abc(A))
            else:
                reports.append(CHECKS[name](A, limits.workers))
        except PreconditionError as exc:
            reports.append(failed(name, {"violated": "precondition", "reason": str(exc)}))
    return _reports_out(args, reports)


def cmd_topologies(args, limits: Limits) -> int:
    A = load_algebra(args.algebra)
    tops = compatible_topologies(A, limits)
    rows = []
    for T in tops:
        ax = sep_axioms(T)
        if args.axiom and not getattr(ax, args.axiom):
            continue
        rows.append({"opens": T.open_lists(), **ax.to_dict()})
    reports = []
    try:
        if args.lemma41:
            reports.append(check_lemma_4_1(A, limits))
        if args.theorem42:
            reports.append(check_theorem_4_2(A, limits))
    except PreconditionError as exc:
        reports.append(failed("precondition", {"violated": "precondition", "reason": str(exc)}))
    lines = [f"{len(tops)} compatible topologies on {A.s} points" + (f", {len(rows)} with {args.axiom}" if args.axiom else "")]
    if args.list or not reports:
        header = "opens".ljust(40) + " ".join(a[:5].rjust(5) for a in AXIOMS)
        lines.append(header)
        for r in rows:
            lines.append(json.dumps(r["opens"]).ljust(40) + " ".join(str(int(r[a])).rjust(5) for a in AXIOMS))
    lines += [describe(r) for r in reports]
    payload = {"compatible": rows, "reports": [r.to_dict() for r in reports]}
    _emit(args, payload, lines)
    return 0 if all(r.holds for r in reports) else 1


def cmd_uniformity(args, limits: Limits) -> int:
    A = load_algebra(args.algebra)
    T = load_topology(args.topology)
    if T.s != A.s:
        raise InputError(f"topology on {T.s} points, algebra on {A.s} elements")
    reports = []
    lines = []
    try:
        c = verify_C_conditions(A, T)
        reports.append(c)
        for g in c.details["generators"]:
            lines.append(f"C_H for H={g['H']}: {g['blocks']}")
        for w in c.details["star_refinements"]:
            refined = w["H'"]
            lines.append(f"star refinement of H={w['H']}: H'={refined}")
        reports.append(check_lemma_4_4(A, T))
    except (PreconditionError, InvariantViolation) as exc:
        reports.append(failed("precondition", {"violated": "precondition", "reason": str(exc)}))
    lines += [describe(r) for r in reports]
    for r in reports:
        if r.check_name == "lemma_4_4" and not r.holds:
            lines.append(f"induced topology: {r.details['induced']}")
    _emit(args, {"reports": [r.to_dict() for r in reports]}, lines)
    return 0 if all(r.holds for r in reports) else 1


def cmd_search(args, limits: Limits) -> int:
    filters = set()
    for f in args.filter or []:
        filters.update(x.strip() for x in f.split(",") if x.strip())
    try:
        spec = SearchSpec(args.s, args.n, frozenset(filters), args.dedup)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    result = search(spec, limits)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            for line in catalog_lines(result):
                fh.write(line + "\n")
    summary = {"s": spec.s, "n": spec.n, "filters": sorted(spec.filters), "dedup": spec.dedup, **result.counts}
    if args.classify:
        summary["classification"] = classify(spec, limits)
    lines = [f"{result.counts['found']} structures (s={spec.s}, n={spec.n}, filters={sorted(spec.filters)}, dedup={spec.dedup})"]
    if args.classify:
        for combo, count in summary["classification"]["combinations"].items():
            lines.append(f"  {combo}: {count}")
    _emit(args, summary, lines)
    return 0


def _write_or_print(args, d: dict) -> None:
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(d, fh)
            fh.write("\n")
    else:
        print(json.dumps(d))


def cmd_product(args, limits: Limits) -> int:
    A = load_algebra(args.algebra)
    _write_or_print(args, power(A, args.power, limits).to_dict())
    return 0


def cmd_quotient(args, limits: Limits) -> int:
    A = load_algebra(args.algebra)
    R = congruence_from_dict(_read_json(args.congruence), A.s)
    _write_or_print(args, quotient(A, R).to_dict())
    return 0


def cmd_congruences(args, limits: Limits) -> int:
    A = load_algebra(args.algebra)
    cons = enumerate_congruences(A, limits)
    _emit(args, {"congruences": [R.to_dict() for R in cons]},
          [f"{len(cons)} congruences"] + [json.dumps(R.to_dict()) for R in cons])
    return 0


def cmd_example45(args, limits: Limits) -> int:
    bundle = verify_example_4_5(limits, max_power=args.max_power)
    lines = [f"[{label}] {describe(r)}" for label, r in bundle.entries]
    lines.append("Example bundle: " + ("all pass" if bundle.holds else "FAILURES"))
    _emit(args, bundle.to_dict(), lines)
    return 0 if bundle.holds else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="palab", description=__doc__.splitlines()[0])
    p.add_argument("--json", action="store_true", help="machine-readable output")
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--topology-s-max", type=int, default=None)
    p.add_argument("--table-entry-max", type=int, default=None)
    p.add_argument("--congruence-s-max", type=int, default=None)
    p.add_argument("--search-budget", type=int, default=None)
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run identity checks on an algebra file")
    v.add_argument("algebra")
    v.add_argument("--checks", help=f"comma-separated subset of {','.join(ALL_CHECKS)}")
    v.set_defaults(func=cmd_verify)

    t = sub.add_parser("topologies", help="compatible topologies and separation axioms")
    t.add_argument("algebra")
    t.add_argument("--axiom", choices=AXIOMS)
    t.add_argument("--list", action="store_true")
    t.add_argument("--lemma41", action="store_true", help="check T0 => T1 over compatible topologies")
    t.add_argument("--theorem42", action="store_true", help="check T0 => completely regular")
    t.set_defaults(func=cmd_topologies)

    u = sub.add_parser("uniformity", help="covering conditions and induced topology")
    u.add_argument("algebra")
    u.add_argument("topology")
    u.set_defaults(func=cmd_uniformity)

    s = sub.add_parser("search", help="enumerate protomodular structures")
    s.add_argument("--s", type=int, required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--filter", action="append", help="protomodular, rc_i, two_associative, right_identity_3_8")
    s.add_argument("--dedup", action="store_true", help="keep canonical forms only")
    s.add_argument("--classify", action="store_true")
    s.add_argument("--out", help="JSON-lines catalog path")
    s.set_defaults(func=cmd_search)

    pr = sub.add_parser("product", help="direct power of an algebra")
    pr.add_argument("algebra")
    pr.add_argument("--power", type=int, required=True)
    pr.add_argument("--out")
    pr.set_defaults(func=cmd_product)

    q = sub.add_parser("quotient", help="quotient by a congruence file")
    q.add_argument("algebra")
    q.add_argument("congruence")
    q.add_argument("--out")
    q.set_defaults(func=cmd_quotient)

    c = sub.add_parser("congruences", help="list all congruences")
    c.add_argument("algebra")
    c.set_defaults(func=cmd_congruences)

    e = sub.add_parser("example45", help="run the full two-element example pipeline")
    e.add_argument("--max-power", type=int, default=3)
    e.set_defaults(func=cmd_example45)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0) and 2
    try:
        limits = Limits.from_env(
            workers=args.workers,
            topology_s_max=args.topology_s_max,
            table_entry_max=args.table_entry_max,
            congruence_s_max=args.congruence_s_max,
            search_budget=args.search_budget,
        )
        return args.func(args, limits)
    except (AlgebraError, ConfigError, InputError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
