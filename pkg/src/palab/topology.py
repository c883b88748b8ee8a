"""Finite topologies as families of bitmask-encoded open sets.

A finite topology is the same thing as a preorder via specialization:
``x <= y`` iff x lies in every open set containing y. The minimal open
neighbourhood of y is ``U_y = {x : x <= y}`` and the open sets are exactly the
down-closed sets. Products are never materialized; continuity is tested on
boxes of minimal neighbourhoods.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from ._parallel import ordered_map
from .algebra import AlgebraError, FiniteAlgebra, OperationTable, SizeLimitError
from .config import DEFAULT, Limits
from .report import CheckReport, PreconditionError, failed, passed


def to_mask(elems: Iterable[int]) -> int:
    m = 0
    for x in elems:
        m |= 1 << x
    return m


def members(mask: int) -> list[int]:
    return [x for x in range(mask.bit_length()) if mask >> x & 1]


def _sort_key(mask: int) -> list[int]:
    return members(mask)


def is_topology(family: Iterable[int], s: int) -> bool:
    fam = set(family)
    full = (1 << s) - 1
    if 0 not in fam or full not in fam:
        return False
    if any(m & ~full for m in fam):
        return False
    return all(a | b in fam and a & b in fam for a in fam for b in fam)


@dataclass(frozen=True)
class FiniteTopology:
    s: int
    opens: tuple[int, ...]

    def __post_init__(self):
        opens = tuple(sorted(set(self.opens), key=_sort_key))
        object.__setattr__(self, "opens", opens)
        if not is_topology(opens, self.s):
            raise AlgebraError(f"family {self.open_lists()} is not a topology on {self.s} points")

    @classmethod
    def from_lists(cls, s: int, opens: Iterable[Iterable[int]]) -> "FiniteTopology":
        return cls(s, tuple(to_mask(o) for o in opens))

    @classmethod
    def from_preorder(cls, leq: np.ndarray) -> "FiniteTopology":
        s = leq.shape[0]
        down = [to_mask(np.flatnonzero(leq[:, y]).tolist()) for y in range(s)]
        opens = []
        for m in range(1 << s):
            if all(down[y] & ~m == 0 for y in members(m)):
                opens.append(m)
        return cls(s, tuple(opens))

    @property
    def full(self) -> int:
        return (1 << self.s) - 1

    @cached_property
    def open_set(self) -> frozenset[int]:
        return frozenset(self.opens)

    @cached_property
    def minimal_nbhd(self) -> tuple[int, ...]:
        """``U_x``, the intersection of all opens containing x."""
        out = []
        for x in range(self.s):
            u = self.full
            for o in self.opens:
                if o >> x & 1:
                    u &= o
            out.append(u)
        return tuple(out)

    @cached_property
    def leq(self) -> np.ndarray:
        """Specialization preorder: ``leq[x, y]`` iff x is in every open containing y."""
        m = np.zeros((self.s, self.s), dtype=bool)
        for y, u in enumerate(self.minimal_nbhd):
            for x in members(u):
                m[x, y] = True
        m.setflags(write=False)
        return m

    @cached_property
    def closed_sets(self) -> tuple[int, ...]:
        return tuple(sorted((self.full & ~o for o in self.opens), key=_sort_key))

    def is_open(self, mask: int) -> bool:
        return mask in self.open_set

    def nbhds(self, x: int) -> list[int]:
        """Open sets containing x, in canonical order."""
        return [o for o in self.opens if o >> x & 1]

    def open_lists(self) -> list[list[int]]:
        return [members(o) for o in self.opens]

    def to_dict(self) -> dict:
        return {"s": self.s, "opens": self.open_lists()}


def discrete(s: int) -> FiniteTopology:
    return FiniteTopology(s, tuple(range(1 << s)))


def indiscrete(s: int) -> FiniteTopology:
    return FiniteTopology(s, (0, (1 << s) - 1))


def sierpinski() -> FiniteTopology:
    """Opens {}, {1}, {0, 1}."""
    return FiniteTopology.from_lists(2, [[], [1], [0, 1]])


def topology_from_dict(d: dict) -> FiniteTopology:
    if not isinstance(d, dict) or "s" not in d or "opens" not in d:
        raise AlgebraError("topology file must hold {\"s\": int, \"opens\": [[...], ...]}")
    s = d["s"]
    if not isinstance(s, int) or s < 1:
        raise AlgebraError(f"topology size must be a positive integer, got {s!r}")
    for o in d["opens"]:
        if any(not isinstance(x, int) or not 0 <= x < s for x in o):
            raise AlgebraError(f"open set {o} not inside range({s})")
    return FiniteTopology.from_lists(s, d["opens"])


def load_topology(path) -> FiniteTopology:
    try:
        with open(path, encoding="utf-8") as fh:
            return topology_from_dict(json.load(fh))
    except json.JSONDecodeError as exc:
        raise AlgebraError(f"{path}: not valid JSON ({exc})") from None


# --- enumeration --------------------------------------------------------------


def enumerate_preorders(s: int) -> list[np.ndarray]:
    """All reflexive transitive relations on range(s).

    A preorder on k+1 points extends one on k points by choosing a down-set D
    of elements below k and an up-set U of elements above k with D x U already
    related; those are exactly the transitive extensions.
    """
    current = [np.ones((1, 1), dtype=bool)] if s >= 1 else [np.zeros((0, 0), dtype=bool)]
    for k in range(1, s):
        nxt = []
        for P in current:
            down_sets = [m for m in range(1 << k) if _closed_down(P, m, k)]
            up_sets = [m for m in range(1 << k) if _closed_up(P, m, k)]
            for D in down_sets:
                d = members(D)
                for U in up_sets:
                    u = members(U)
                    if d and u and not P[np.ix_(d, u)].all():
                        continue
                    Q = np.zeros((k + 1, k + 1), dtype=bool)
                    Q[:k, :k] = P
                    Q[k, k] = True
                    Q[d, k] = True
                    Q[k, u] = True
                    nxt.append(Q)
        current = nxt
    return current


def _closed_down(P: np.ndarray, m: int, k: int) -> bool:
    # x in m and y <= x  =>  y in m
    return all(m >> y & 1 for x in members(m) for y in range(k) if P[y, x])


def _closed_up(P: np.ndarray, m: int, k: int) -> bool:
    return all(m >> y & 1 for x in members(m) for y in range(k) if P[x, y])


def enumerate_topologies(s: int, limits: Limits = DEFAULT) -> list[FiniteTopology]:
    if s > limits.topology_s_max:
        raise SizeLimitError(f"topology enumeration on {s} points exceeds cap {limits.topology_s_max}")
    tops = [FiniteTopology.from_preorder(P) for P in enumerate_preorders(s)]
    return sorted(tops, key=lambda T: [_sort_key(o) for o in T.opens])


# --- continuity ---------------------------------------------------------------


def is_continuous(table: OperationTable, T: FiniteTopology) -> bool:
    """f maps every box of minimal neighbourhoods U_u1 x ... x U_uk into U_f(u).

    On finite spaces that is monotonicity for the specialization preorder, and
    monotone in each argument separately suffices by transitivity.
    """
    if table.s != T.s:
        raise AlgebraError(f"table on {table.s} elements, topology on {T.s} points")
    L = T.leq
    F = table.array
    for axis in range(table.arity):
        Fx = np.moveaxis(F, axis, 0).reshape(T.s, -1)
        ok = L[Fx[:, None, :], Fx[None, :, :]] | ~L[:, :, None]
        if not ok.all():
            return False
    return True


def is_compatible_topology(A: FiniteAlgebra, T: FiniteTopology) -> bool:
    return T.s == A.s and all(is_continuous(t, T) for t in A.operations)


def compatible_topologies(A: FiniteAlgebra, limits: Limits = DEFAULT) -> list[FiniteTopology]:
    tops = enumerate_topologies(A.s, limits)
    keep = ordered_map(lambda T: is_compatible_topology(A, T), tops, limits.workers)
    return [T for T, k in zip(tops, keep) if k]


# --- separation --------------------------------------------------------------------


@dataclass(frozen=True)
class SeparationAxioms:
    t0: bool
    t1: bool
    t2: bool
    regular: bool
    completely_regular: bool

    def to_dict(self) -> dict:
        return {
            "t0": self.t0, "t1": self.t1, "t2": self.t2,
            "regular": self.regular, "completely_regular": self.completely_regular,
        }


def sep_axioms(T: FiniteTopology) -> SeparationAxioms:
    """Separation properties; complete regularity is decided by clopen separation.

    A continuous map from a finite space into [0, 1] takes finitely many values,
    so a threshold between them cuts out a clopen set; conversely the indicator
    of a clopen set is continuous. Hence point/closed-set separation by
    functions is the same as separation by a clopen set.
    """
    s, L, U = T.s, T.leq, T.minimal_nbhd
    pairs = [(x, y) for x in range(s) for y in range(s) if x != y]
    t0 = all(not (L[x, y] and L[y, x]) for x, y in pairs)
    t1 = all(not L[x, y] for x, y in pairs)
    t2 = all(U[x] & U[y] == 0 for x, y in pairs)
    clopens = [o for o in T.opens if T.full & ~o in T.open_set]

    def down_closure(F: int) -> int:
        out = 0
        for f in members(F):
            out |= U[f]
        return out

    regular = completely_regular = True
    for F in T.closed_sets:
        hull = down_closure(F)  # least open set containing F
        for x in range(s):
            if F >> x & 1:
                continue
            if U[x] & hull:
                regular = False
            if not any(c >> x & 1 and c & F == 0 for c in clopens):
                completely_regular = False
    return SeparationAxioms(t0, t1, t2, regular, completely_regular)


# --- neighbourhood bases ---------------------------------------------------------------


def validate_nbhd_tuple(A: FiniteAlgebra, T: FiniteTopology, H: Sequence[int]) -> tuple[int, ...]:
    if len(H) != A.n:
        raise PreconditionError(f"expected {A.n} neighbourhoods, got {len(H)}")
    for i, h in enumerate(H):
        if not T.is_open(h):
            raise PreconditionError(f"H_{i + 1} = {members(h)} is not open")
        if not h >> A.es[i] & 1:
            raise PreconditionError(f"H_{i + 1} = {members(h)} does not contain e_{i + 1} = {A.es[i]}")
    return tuple(H)


def nbhd_tuples(A: FiniteAlgebra, T: FiniteTopology, base: str = "all") -> list[tuple[int, ...]]:
    """Tuples (H_1, ..., H_n) of open neighbourhoods of (e_1, ..., e_n).

    ``base="minimal"`` keeps only the minimal neighbourhoods, itself a
    neighbourhood base at each e_i.
    """
    if base == "all":
        choices = [T.nbhds(e) for e in A.es]
    elif base == "minimal":
        choices = [[T.minimal_nbhd[e]] for e in A.es]
    else:
        raise ValueError(f"unknown base {base!r}")
    return list(itertools.product(*choices))


def neighborhood_base_sets(A: FiniteAlgebra, T: FiniteTopology, a: int, H: Sequence[int]) -> int:
    """The set of b with alpha_i(b, a) in H_i for every i, as a bitmask."""
    H = validate_nbhd_tuple(A, T, H)
    return _base_set(A, a, H)


def _base_set(A: FiniteAlgebra, a: int, H: Sequence[int]) -> int:
    out = (1 << A.s) - 1
    for al, h in zip(A.alphas, H):
        col = al.array[:, a]
        out &= to_mask(b for b in range(A.s) if h >> int(col[b]) & 1)
    return out


def _require_compatible(A: FiniteAlgebra, T: FiniteTopology) -> None:
    if not is_compatible_topology(A, T):
        raise PreconditionError("the topology does not make every operation continuous")


def check_prop_2_2(A: FiniteAlgebra, T: FiniteTopology) -> CheckReport:
    """The sets {b : alpha_i(b, a) in H_i for all i} form a neighbourhood base at a."""
    from .checks import check_protomodular

    _require_compatible(A, T)
    if not check_protomodular(A).holds:
        raise PreconditionError("neighbourhood-base check needs a protomodular algebra")
    name = "prop_2_2"
    tuples = nbhd_tuples(A, T)
    for a in range(A.s):
        sets = [(H, _base_set(A, a, H)) for H in tuples]
        for H, B in sets:
            if not (B >> a & 1) or T.minimal_nbhd[a] & ~B:
                return failed(name, {"condition": "neighbourhood", "a": a, "H": [members(h) for h in H],
                                     "base_set": members(B)})
        for O in T.nbhds(a):
            if not any(B & ~O == 0 for _, B in sets):
                return failed(name, {"condition": "base", "a": a, "open": members(O)})
    return passed(name)


def check_lemma_4_1(A: FiniteAlgebra, limits: Limits = DEFAULT) -> CheckReport:
    """T0 implies T1 on every compatible topology."""
    return _sweep(A, limits, "lemma_4_1", "t1", need_rc=False)


def check_theorem_4_2(A: FiniteAlgebra, limits: Limits = DEFAULT) -> CheckReport:
    """Every compatible T0 topology on a right-cancellable algebra is completely regular."""
    return _sweep(A, limits, "theorem_4_2", "completely_regular", need_rc=True)


def _sweep(A: FiniteAlgebra, limits: Limits, name: str, conclusion: str, need_rc: bool) -> CheckReport:
    from .checks import check_protomodular, check_rc_i

    if A.s > limits.topology_s_max:
        raise SizeLimitError(f"{A.s} points exceeds the topology cap {limits.topology_s_max}")
    if not check_protomodular(A).holds:
        raise PreconditionError(f"{name} needs a protomodular algebra")
    if need_rc and not check_rc_i(A).holds:
        raise PreconditionError(f"{name} needs a right-cancellable algebra")
    tops = compatible_topologies(A, limits)
    axioms = ordered_map(sep_axioms, tops, limits.workers)
    t0_tops = [T.open_lists() for T, ax in zip(tops, axioms) if ax.t0]
    details = {"compatible": len(tops), "t0_topologies": t0_tops}
    for T, ax in zip(tops, axioms):
        if ax.t0 and not getattr(ax, conclusion):
            return failed(name, {"condition": f"t0 => {conclusion}", "topology": T.open_lists(),
                                 "axioms": ax.to_dict()}, **details)
    return passed(name, **details)
