"""Coverings C_H, stars, conditions (C1)-(C4), entourages and the induced topology.

The family of all coverings refined by some C_H is kept implicit: it is the
upward closure of the generators ``{C_H}``, which makes (C1) hold by
construction. Everything else is checked on the generators.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from .algebra import AlgebraError, FiniteAlgebra
from .checks import check_protomodular, check_rc_i, derive_Ti
from .topology import (
    FiniteTopology,
    _base_set,
    _require_compatible,
    is_topology,
    members,
    nbhd_tuples,
    sep_axioms,
    to_mask,
    validate_nbhd_tuple,
)
from .report import CheckReport, InvariantViolation, PreconditionError, failed, passed


@dataclass(frozen=True)
class Covering:
    s: int
    blocks: tuple[int, ...]

    def __post_init__(self):
        blocks = tuple(sorted(set(self.blocks), key=members))
        object.__setattr__(self, "blocks", blocks)
        full = (1 << self.s) - 1
        if any(b == 0 for b in blocks):
            raise AlgebraError("a covering has no empty blocks")
        if any(b & ~full for b in blocks):
            raise AlgebraError(f"block outside range({self.s})")
        union = 0
        for b in blocks:
            union |= b
        if union != full:
            raise AlgebraError("blocks do not cover the carrier")

    @classmethod
    def from_lists(cls, s: int, blocks: Iterable[Iterable[int]]) -> "Covering":
        return cls(s, tuple(to_mask(b) for b in blocks))

    def block_lists(self) -> list[list[int]]:
        return [members(b) for b in self.blocks]

    def to_dict(self) -> dict:
        return {"s": self.s, "blocks": self.block_lists()}


def covering_from_dict(d: dict) -> Covering:
    if not isinstance(d, dict) or "s" not in d or "blocks" not in d:
        raise AlgebraError("covering file must hold {\"s\": int, \"blocks\": [[...], ...]}")
    return Covering.from_lists(d["s"], d["blocks"])


def load_covering(path) -> Covering:
    with open(path, encoding="utf-8") as fh:
        return covering_from_dict(json.load(fh))


def covering_CH(A: FiniteAlgebra, T: FiniteTopology, H: Sequence[int]) -> Covering:
    """Blocks ``{b : alpha_i(b, a) in H_i for all i}``, one per a."""
    _require_compatible(A, T)
    H = validate_nbhd_tuple(A, T, H)
    return _covering(A, H)


def _covering(A: FiniteAlgebra, H: Sequence[int]) -> Covering:
    return Covering(A.s, tuple(_base_set(A, a, H) for a in range(A.s)))


def star(M: int, C: Covering) -> int:
    out = 0
    for b in C.blocks:
        if b & M:
            out |= b
    return out


def is_inscribed(inner: Covering, outer: Covering) -> bool:
    """Every block of ``inner`` lies inside some block of ``outer``."""
    return all(any(a & ~b == 0 for b in outer.blocks) for a in inner.blocks)


def is_strong_star_inscribed(inner: Covering, outer: Covering) -> bool:
    """For every block B of ``inner``, St(B, inner) lies inside one block of ``outer``."""
    return all(any(star(B, inner) & ~a == 0 for a in outer.blocks) for B in inner.blocks)


def _by_size(tuples: list[tuple[int, ...]]) -> list[tuple[int, ...]]:
    return sorted(tuples, key=lambda H: (sum(bin(h).count("1") for h in H), [members(h) for h in H]))


def _search_star_refinement(A: FiniteAlgebra, T: FiniteTopology, H: Sequence[int]) -> Optional[tuple[int, ...]]:
    target = _covering(A, H)
    for H2 in _by_size(nbhd_tuples(A, T)):
        if is_strong_star_inscribed(_covering(A, H2), target):
            return H2
    return None


def pointwise_star_condition(A: FiniteAlgebra, H2: Sequence[int], H: Sequence[int]) -> bool:
    """St(N(a, H'), C_H') is inside N(a, H) for every a."""
    C2 = _covering(A, H2)
    return all(star(_base_set(A, a, H2), C2) & ~_base_set(A, a, H) == 0 for a in range(A.s))


def constructive_star_refinement(A: FiniteAlgebra, T: FiniteTopology, H: Sequence[int]) -> tuple[int, ...]:
    """The refinement built from continuity of the derived terms T_i.

    For each i take neighbourhoods of the e_j whose box T_i maps into H_i; the
    minimal neighbourhoods always qualify because T_i is continuous and sends
    (e, e, e) to e_i. Then intersect over i and the three argument slots.
    """
    terms, report = derive_Ti(A, "via_ii")
    if not report.holds:
        raise InvariantViolation(f"derived terms fail their witness check: {report.to_json()}")
    n = A.n
    U = T.minimal_nbhd
    # chosen[i][slot][j]: neighbourhood of e_j in argument block ``slot`` of T_i
    chosen = []
    for i in range(n):
        slots = [[U[e] for e in A.es] for _ in range(3)]
        box = [members(h) for slot in slots for h in slot]
        image = np.unique(terms.T[i].array[np.ix_(*box)])
        if any(not H[i] >> int(v) & 1 for v in image):
            raise InvariantViolation(f"T_{i + 1} does not map the minimal box into H_{i + 1}")
        chosen.append(slots)
    H2 = []
    for j in range(n):
        h = T.full
        for i in range(n):
            for slot in range(3):
                h &= chosen[i][slot][j]
        H2.append(h)
    return tuple(H2)


def find_star_refinement(A: FiniteAlgebra, T: FiniteTopology, H: Sequence[int]) -> tuple[int, ...]:
    """Smallest H' (by total size) whose covering is strongly star-inscribed in C_H.

    The constructive refinement is computed as a cross-check; both must pass
    the star-inscription test.
    """
    if not check_rc_i(A).holds:
        raise PreconditionError("star refinement needs a right-cancellable algebra")
    _require_compatible(A, T)
    if not sep_axioms(T).t0:
        raise PreconditionError("star refinement needs a T0 topology")
    H = validate_nbhd_tuple(A, T, H)
    found = _search_star_refinement(A, T, H)
    if found is None:
        raise InvariantViolation(f"no star refinement of H = {[members(h) for h in H]}")
    built = constructive_star_refinement(A, T, H)
    target = _covering(A, H)
    if not is_strong_star_inscribed(_covering(A, built), target) or not pointwise_star_condition(A, built, H):
        raise InvariantViolation(f"constructed refinement {[members(h) for h in built]} fails")
    return found


def verify_C_conditions(A: FiniteAlgebra, T: FiniteTopology) -> CheckReport:
    if not check_protomodular(A).holds:
        raise PreconditionError("covering conditions need a protomodular algebra")
    _require_compatible(A, T)
    tuples = nbhd_tuples(A, T)
    gens = {H: _covering(A, H) for H in tuples}
    status = {"C1": True, "C2": True, "C3": True, "C4": True}
    witness: dict = {}
    star_witnesses = []

    for H1 in tuples:
        for H2 in tuples:
            meet = tuple(x & y for x, y in zip(H1, H2))
            C = gens[meet]
            if not (is_inscribed(C, gens[H1]) and is_inscribed(C, gens[H2])):
                status["C2"] = False
                witness.setdefault("C2", {"H": [members(h) for h in H1], "H'": [members(h) for h in H2]})

    for H in tuples:
        H2 = _search_star_refinement(A, T, H)
        if H2 is None:
            status["C3"] = False
            witness.setdefault("C3", {"H": [members(h) for h in H]})
        else:
            star_witnesses.append({"H": [members(h) for h in H], "H'": [members(h) for h in H2]})

    for x in range(A.s):
        for y in range(x + 1, A.s):
            pair = (1 << x) | (1 << y)
            if not any(all(b & pair != pair for b in C.blocks) for C in gens.values()):
                status["C4"] = False
                witness.setdefault("C4", {"x": x, "y": y})

    details = {
        "conditions": status,
        "generators": [{"H": [members(h) for h in H], "blocks": gens[H].block_lists()} for H in tuples],
        "star_refinements": star_witnesses,
    }
    bad = [c for c, ok in status.items() if not ok]
    if bad:
        return failed("C_conditions", {"condition": bad[0], **witness[bad[0]], "failed": bad}, **details)
    return passed("C_conditions", **details)


# --- entourages ------------------------------------------------------------------


def entourage(C: Covering) -> tuple[int, ...]:
    """Union of block x block, as row bitmasks: row x is the ball around x."""
    rows = [0] * C.s
    for b in C.blocks:
        for x in members(b):
            rows[x] |= b
    return tuple(rows)


def ball(x: int, R: Sequence[int]) -> int:
    return R[x]


def induced_topology(generators: Sequence[Sequence[int]], s: Optional[int] = None) -> FiniteTopology:
    """O is open iff every x in O has a generator R with ball(x, R) inside O."""
    if not generators:
        raise ValueError("need at least one generator relation")
    s = len(generators[0]) if s is None else s
    opens = [
        O for O in range(1 << s)
        if all(any(ball(x, R) & ~O == 0 for R in generators) for x in members(O))
    ]
    if not is_topology(opens, s):
        raise InvariantViolation("ball-open sets do not form a topology")
    return FiniteTopology(s, tuple(opens))


def generator_relations(A: FiniteAlgebra, T: FiniteTopology, base: str = "all") -> list[tuple[int, ...]]:
    return [entourage(_covering(A, H)) for H in nbhd_tuples(A, T, base)]


def check_lemma_4_4(A: FiniteAlgebra, T: FiniteTopology, base: str = "all") -> CheckReport:
    """The topology induced by the uniformity equals T."""
    if not check_rc_i(A).holds:
        raise PreconditionError("the induced-topology check needs a right-cancellable algebra")
    _require_compatible(A, T)
    if not sep_axioms(T).t0:
        raise PreconditionError("the induced-topology check needs a T0 topology")
    induced = induced_topology(generator_relations(A, T, base), A.s)
    if induced.opens == T.opens:
        return passed("lemma_4_4", induced=induced.open_lists())
    only_induced = sorted(set(induced.opens) - set(T.opens))
    only_original = sorted(set(T.opens) - set(induced.opens))
    return failed(
        "lemma_4_4",
        {
            "condition": "induced topology = original",
            "only_induced": [members(o) for o in only_induced],
            "only_original": [members(o) for o in only_original],
        },
        induced=induced.open_lists(),
    )
