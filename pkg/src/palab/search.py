"""Exhaustive search for protomodular structures on small carriers.

Only protomodular structures are generated. The identity
theta(alpha(a, b), b) = a forces every column ``theta(-, b)`` to be onto the
carrier with ``theta(e, b) = b``, and for each cell (a, b) the tuple
(alpha_1(a, b), ..., alpha_n(a, b)) must be a preimage of a under that
column, with the diagonal cells pinned to e. For n = 1 the columns are
therefore permutations and alpha is their inverse; for larger n the alpha
tables range over the preimages cell by cell.
"""

from __future__ import annotations

import itertools
import json
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterator, Optional

import numpy as np

from ._parallel import flatten, ordered_map
from .algebra import (
    FiniteAlgebra,
    SizeLimitError,
    algebra_from_arrays,
    canonical_form,
    decode,
    enumerate_congruences,
    power,
    quotient,
)
from .checks import (
    check_2_associative,
    check_group_collapse,
    check_lemma31_consistency,
    check_protomodular,
    check_rc_i,
    is_group,
)
from .config import DEFAULT, Limits
from .fixtures import e45
from .report import CheckReport
from .topology import compatible_topologies, discrete, sep_axioms
from .topology import check_lemma_4_1, check_theorem_4_2
from .uniformity import check_lemma_4_4, verify_C_conditions

FILTERS = ("protomodular", "rc_i", "two_associative", "right_identity_3_8")


class BudgetError(SizeLimitError):
    pass


@dataclass(frozen=True)
class SearchSpec:
    s: int
    n: int
    filters: frozenset = frozenset({"protomodular"})
    dedup: bool = False

    def __post_init__(self):
        object.__setattr__(self, "filters", frozenset(self.filters) | {"protomodular"})
        unknown = self.filters - set(FILTERS)
        if unknown:
            raise ValueError(f"unknown filters {sorted(unknown)}; choose from {FILTERS}")
        if self.s < 1 or self.n < 1:
            raise ValueError("s and n must be positive")
        if "right_identity_3_8" in self.filters and self.n != 1:
            raise ValueError("right_identity_3_8 is defined for n = 1 only")

    def estimate(self) -> int:
        return self.s ** ((self.n + 1) * self.s**self.n)


@dataclass
class SearchResult:
    spec: SearchSpec
    algebras: list[FiniteAlgebra]
    counts: dict = field(default_factory=dict)


def _check_budget(spec: SearchSpec, limits: Limits) -> None:
    if spec.estimate() > limits.search_budget:
        raise BudgetError(
            f"search at s={spec.s}, n={spec.n} has estimate {spec.estimate()} "
            f"above budget {limits.search_budget}"
        )


# --- candidate generation -------------------------------------------------------


def _columns(s: int, n: int, e_packed: int, b: int) -> list[np.ndarray]:
    """Maps s**n -> s that are onto and send the packed e-tuple to b."""
    S = s**n
    if n == 1:
        rest = [x for x in range(s) if x != b]
        out = []
        others = [x for x in range(S) if x != e_packed]
        for perm in itertools.permutations(rest):
            col = np.empty(S, dtype=np.int64)
            col[e_packed] = b
            col[others] = perm
            out.append(col)
        return out
    out = []
    others = [x for x in range(S) if x != e_packed]
    for vals in itertools.product(range(s), repeat=S - 1):
        if len(set(vals) | {b}) < s:
            continue
        col = np.empty(S, dtype=np.int64)
        col[e_packed] = b
        col[others] = vals
        out.append(col)
    return out


def _alpha_choices(theta: np.ndarray, s: int, n: int, es: tuple[int, ...]) -> Iterator[list[np.ndarray]]:
    """All alpha tuples satisfying both protomodular identities for a fixed theta matrix (S, s)."""
    e_packed = 0
    for e in es:
        e_packed = e_packed * s + e
    cells = []
    for a in range(s):
        for b in range(s):
            if a == b:
                cells.append([e_packed])
            else:
                cells.append(np.flatnonzero(theta[:, b] == a).tolist())
    digits = np.array([decode(x, s, n) for x in range(s**n)], dtype=np.int64)
    for pick in itertools.product(*cells):
        d = digits[list(pick)].reshape(s, s, n)
        yield [d[:, :, i] for i in range(n)]


def _candidates_for(s: int, n: int, es: tuple[int, ...], first_col: np.ndarray) -> list[FiniteAlgebra]:
    S = s**n
    e_packed = 0
    for e in es:
        e_packed = e_packed * s + e
    other_cols = [_columns(s, n, e_packed, b) for b in range(1, s)]
    out = []
    for rest in itertools.product(*other_cols):
        theta = np.stack([first_col, *rest], axis=1)  # (S, s)
        theta_arr = theta.reshape((s,) * (n + 1))
        if n == 1:
            inv = np.argsort(theta, axis=0)  # column inverses
            out.append(algebra_from_arrays(theta_arr, [inv], es))
        else:
            for alphas in _alpha_choices(theta, s, n, es):
                out.append(algebra_from_arrays(theta_arr, alphas, es))
    return out


def _work_units(s: int, n: int) -> list[tuple[tuple[int, ...], np.ndarray]]:
    """Split the space by constants and the first theta column."""
    units = []
    for es in itertools.product(range(s), repeat=n):
        e_packed = 0
        for e in es:
            e_packed = e_packed * s + e
        for col in _columns(s, n, e_packed, 0):
            units.append((es, col))
    return units


def _passes(A: FiniteAlgebra, filters: frozenset) -> bool:
    if "rc_i" in filters and not check_rc_i(A).holds:
        return False
    if "two_associative" in filters and not check_2_associative(A).holds:
        return False
    if "right_identity_3_8" in filters:
        e = A.es[0]
        if not np.array_equal(A.theta.array[:, e], np.arange(A.s)):
            return False
    return True


def search(spec: SearchSpec, limits: Limits = DEFAULT) -> SearchResult:
    _check_budget(spec, limits)
    s, n = spec.s, spec.n
    if s == 1:
        units_out = [[algebra_from_arrays(np.zeros((1,) * (n + 1), dtype=np.int64),
                                          [np.zeros((1, 1), dtype=np.int64)] * n, (0,) * n)]]
        generated = 1
    else:
        units = _work_units(s, n)

        def run(unit):
            es, col = unit
            cands = _candidates_for(s, n, es, col)
            hits = [A for A in cands if _passes(A, spec.filters)]
            if spec.dedup:
                hits = [canonical_form(A) for A in hits]
            return len(cands), hits

        results = ordered_map(run, units, limits.workers)
        generated = sum(r[0] for r in results)
        units_out = [r[1] for r in results]
    hits = flatten(units_out)
    if s == 1:
        hits = [A for A in hits if _passes(A, spec.filters)]
    if spec.dedup:
        hits = list({A.key(): A for A in hits}.values())
    hits.sort(key=FiniteAlgebra.key)
    return SearchResult(spec, hits, {"generated": generated, "found": len(hits)})


# --- classification -------------------------------------------------------------------


def predicates(A: FiniteAlgebra) -> dict[str, bool]:
    flags = {
        "protomodular": check_protomodular(A).holds,
        "rc_i": check_rc_i(A).holds,
        "two_associative": check_2_associative(A).holds,
    }
    if A.n == 1:
        flags["right_identity_3_8"] = bool(np.array_equal(A.theta.array[:, A.es[0]], np.arange(A.s)))
        flags["group"] = is_group(A.theta)
    return flags


def classify(spec: SearchSpec, limits: Limits = DEFAULT) -> dict:
    """Counts of searched structures per predicate combination."""
    result = search(spec, limits)
    flags = ordered_map(predicates, result.algebras, limits.workers)
    combos = Counter(
        ",".join(f"{k}={int(v)}" for k, v in sorted(f.items()) if k != "right_identity_3_8") for f in flags
    )
    summary = {
        "s": spec.s,
        "n": spec.n,
        "filters": sorted(spec.filters),
        "dedup": spec.dedup,
        "total": len(result.algebras),
        "combinations": dict(sorted(combos.items())),
    }
    for key in ("rc_i", "two_associative", "group"):
        if flags and key in flags[0]:
            summary[key] = sum(f[key] for f in flags)
    if spec.n == 1:
        collapse = ordered_map(check_group_collapse, result.algebras, limits.workers)
        applicable = [r for r in collapse if r.details.get("applicable")]
        summary["group_collapse_applicable"] = len(applicable)
        summary["group_collapse_violations"] = sum(not r.holds for r in applicable)
    return summary


def catalog_lines(result: SearchResult) -> Iterator[str]:
    for A in result.algebras:
        yield json.dumps({**A.to_dict(), "flags": predicates(A)}, sort_keys=True)


# --- the two-element example pipeline -------------------------------------------------------------


@dataclass
class Bundle:
    entries: list[tuple[str, CheckReport]] = field(default_factory=list)

    @property
    def holds(self) -> bool:
        return all(r.holds for _, r in self.entries)

    def add(self, label: str, report: CheckReport) -> None:
        self.entries.append((label, report))

    def to_dict(self) -> dict:
        return {
            "holds": self.holds,
            "reports": [{"algebra": label, **r.to_dict()} for label, r in self.entries],
        }


def run_pipeline(bundle: Bundle, label: str, A: FiniteAlgebra, limits: Limits) -> None:
    w = limits.workers
    proto = check_protomodular(A)
    bundle.add(label, proto)
    bundle.add(label, check_rc_i(A, w))
    if not proto.holds:
        return
    bundle.add(label, check_lemma31_consistency(A, w))
    if A.s > limits.topology_s_max:
        return
    bundle.add(label, check_lemma_4_1(A, limits))
    if not check_rc_i(A).holds:
        return
    bundle.add(label, check_theorem_4_2(A, limits))
    for T in compatible_topologies(A, limits):
        if sep_axioms(T).t0:
            bundle.add(f"{label} {T.open_lists()}", verify_C_conditions(A, T))
            bundle.add(f"{label} {T.open_lists()}", check_lemma_4_4(A, T))


def verify_example_4_5(limits: Limits = DEFAULT, max_power: int = 3) -> Bundle:
    bundle = Bundle()
    A = e45()
    run_pipeline(bundle, "E45", A, limits)
    for k in range(2, max_power + 1):
        P = power(A, k, limits)
        run_pipeline(bundle, f"E45^{k}", P, limits)
        for R in enumerate_congruences(P, limits):
            run_pipeline(bundle, f"E45^{k}/{list(R.block_of)}", quotient(P, R), limits)
    return bundle
