"""Finite algebras in the signature (theta, alpha_1..alpha_n, e_1..e_n).

Tables are flat, first argument most significant: the entry for
``(x_1, ..., x_k)`` sits at ``sum(x_j * s**(k-1-j))``.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, Sequence

import numpy as np

from .config import DEFAULT, Limits


class AlgebraError(ValueError):
    """Malformed tables, out-of-range elements, or incompatible inputs."""


class SizeLimitError(AlgebraError):
    pass


def _index(args: Sequence[int], s: int) -> int:
    idx = 0
    for x in args:
        idx = idx * s + x
    return idx


def decode(index: int, s: int, k: int) -> tuple[int, ...]:
    """Inverse of the table index map for ``k`` coordinates."""
    out = [0] * k
    for j in range(k - 1, -1, -1):
        index, out[j] = divmod(index, s)
    return tuple(out)


def encode(coords: Sequence[int], s: int) -> int:
    return _index(coords, s)


@dataclass(frozen=True)
class OperationTable:
    arity: int
    s: int
    entries: tuple[int, ...]

    def __post_init__(self):
        if self.s < 1:
            raise AlgebraError(f"carrier size must be positive, got {self.s}")
        if self.arity < 0:
            raise AlgebraError(f"arity must be non-negative, got {self.arity}")
        object.__setattr__(self, "entries", tuple(int(x) for x in self.entries))
        if len(self.entries) != self.s**self.arity:
            raise AlgebraError(
                f"table of arity {self.arity} on {self.s} elements needs "
                f"{self.s ** self.arity} entries, got {len(self.entries)}"
            )
        bad = [x for x in self.entries if not 0 <= x < self.s]
        if bad:
            raise AlgebraError(f"table entry {bad[0]} outside carrier [0, {self.s})")

    @classmethod
    def from_array(cls, arr: np.ndarray) -> "OperationTable":
        arr = np.asarray(arr)
        s = arr.shape[0] if arr.ndim else 1
        return cls(arr.ndim, s, tuple(arr.ravel().tolist()))

    @classmethod
    def from_function(cls, f, arity: int, s: int) -> "OperationTable":
        return cls(arity, s, tuple(f(*u) for u in itertools.product(range(s), repeat=arity)))

    @cached_property
    def array(self) -> np.ndarray:
        """Entries as an ``s x s x ... x s`` integer array (read-only)."""
        arr = np.array(self.entries, dtype=np.int64).reshape((self.s,) * self.arity)
        arr.setflags(write=False)
        return arr

    def __call__(self, *args: int) -> int:
        return eval_table(self, args)


def eval_table(table: OperationTable, args: Sequence[int]) -> int:
    if len(args) != table.arity:
        raise AlgebraError(f"expected {table.arity} arguments, got {len(args)}")
    for x in args:
        if not (isinstance(x, (int, np.integer)) and 0 <= x < table.s):
            raise AlgebraError(f"argument {x!r} outside carrier [0, {table.s})")
    return table.entries[_index(args, table.s)]


@dataclass(frozen=True)
class FiniteAlgebra:
    s: int
    n: int
    theta: OperationTable
    alphas: tuple[OperationTable, ...]
    es: tuple[int, ...]

    @property
    def operations(self) -> tuple[OperationTable, ...]:
        return (self.theta, *self.alphas)

    @cached_property
    def theta_matrix(self) -> np.ndarray:
        """theta reshaped to ``(s**n, s)``: row = packed (a_1..a_n), column = b."""
        return self.theta.array.reshape(self.s**self.n, self.s)

    @cached_property
    def alpha_stack(self) -> np.ndarray:
        return np.stack([a.array for a in self.alphas])

    @cached_property
    def e_index(self) -> int:
        """Packed row index of (e_1, ..., e_n) in :attr:`theta_matrix`."""
        return _index(self.es, self.s)

    def key(self) -> tuple[int, ...]:
        """Concatenated theta, alpha tables and constants; the order used by canonical_form."""
        out = list(self.theta.entries)
        for a in self.alphas:
            out.extend(a.entries)
        out.extend(self.es)
        return tuple(out)

    def to_dict(self) -> dict:
        return {
            "s": self.s,
            "n": self.n,
            "theta": list(self.theta.entries),
            "alphas": [list(a.entries) for a in self.alphas],
            "es": list(self.es),
        }


def make_algebra(s, n, theta, alphas, es) -> FiniteAlgebra:
    """Validate raw tables (flat lists or OperationTables) into a FiniteAlgebra.

    Only shapes and ranges are checked, not the protomodular identities.
    """
    if not isinstance(s, int) or s < 1:
        raise AlgebraError(f"s: carrier size must be a positive integer, got {s!r}")
    if not isinstance(n, int) or n < 1:
        raise AlgebraError(f"n: must be an integer >= 1, got {n!r}")

    def table(raw, arity, name):
        if isinstance(raw, OperationTable):
            if raw.arity != arity or raw.s != s:
                raise AlgebraError(f"{name}: expected arity {arity} on {s} elements")
            return raw
        try:
            return OperationTable(arity, s, tuple(raw))
        except (AlgebraError, TypeError) as exc:
            raise AlgebraError(f"{name}: {exc}") from None

    theta_t = table(theta, n + 1, "theta")
    alphas = list(alphas)
    if len(alphas) != n:
        raise AlgebraError(f"alphas: expected {n} tables, got {len(alphas)}")
    alpha_t = tuple(table(a, 2, f"alphas[{i}]") for i, a in enumerate(alphas))
    es = tuple(es)
    if len(es) != n:
        raise AlgebraError(f"es: expected {n} constants, got {len(es)}")
    for i, e in enumerate(es):
        if not isinstance(e, (int, np.integer)) or not 0 <= e < s:
            raise AlgebraError(f"es[{i}]: constant {e!r} outside carrier [0, {s})")
    return FiniteAlgebra(s, n, theta_t, alpha_t, tuple(int(e) for e in es))


def algebra_from_arrays(theta: np.ndarray, alphas: Sequence[np.ndarray], es) -> FiniteAlgebra:
    theta = np.asarray(theta)
    return make_algebra(
        int(theta.shape[0]),
        theta.ndim - 1,
        theta.ravel().tolist(),
        [np.asarray(a).ravel().tolist() for a in alphas],
        [int(e) for e in es],
    )


def algebra_from_dict(d: dict) -> FiniteAlgebra:
    if not isinstance(d, dict):
        raise AlgebraError("algebra file must hold a JSON object")
    missing = {"s", "n", "theta", "alphas", "es"} - d.keys()
    if missing:
        raise AlgebraError(f"algebra file missing fields: {sorted(missing)}")
    return make_algebra(d["s"], d["n"], d["theta"], d["alphas"], d["es"])


def load_algebra(path) -> FiniteAlgebra:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise AlgebraError(f"{path}: not valid JSON ({exc})") from None
    return algebra_from_dict(data)


def dump_algebra(A: FiniteAlgebra, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(A.to_dict(), fh)
        fh.write("\n")


# --- products -------------------------------------------------------------


def power(A: FiniteAlgebra, k: int, limits: Limits = DEFAULT) -> FiniteAlgebra:
    """The k-th direct power, operations componentwise.

    Element ``(x_1, ..., x_k)`` is encoded as ``sum(x_j * s**(k-1-j))``.
    """
    if k < 1:
        raise AlgebraError(f"power must be positive, got {k}")
    S = A.s**k
    if S ** (A.n + 1) > limits.table_entry_max:
        raise SizeLimitError(
            f"power {k} of a {A.s}-element algebra needs {S ** (A.n + 1)} theta entries "
            f"(cap {limits.table_entry_max})"
        )
    # digits[x, j] = j-th coordinate of element x
    digits = np.array([decode(x, A.s, k) for x in range(S)], dtype=np.int64)
    weights = A.s ** np.arange(k - 1, -1, -1, dtype=np.int64)

    def lift(table: OperationTable) -> np.ndarray:
        m = table.arity
        grids = np.meshgrid(*([np.arange(S)] * m), indexing="ij")
        coord = np.zeros(grids[0].shape, dtype=np.int64) if m else np.zeros((), dtype=np.int64)
        for j in range(k):
            comp = table.array[tuple(digits[g, j] for g in grids)]
            coord = coord + comp * weights[j]
        return coord

    es = [int(sum(e * w for w in weights)) for e in A.es]  # diagonal (e, ..., e)
    return algebra_from_arrays(lift(A.theta), [lift(a) for a in A.alphas], es)


# --- congruences ----------------------------------------------------------


@dataclass(frozen=True)
class Congruence:
    block_of: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "block_of", normalize_blocks(self.block_of))

    @property
    def s(self) -> int:
        return len(self.block_of)

    @property
    def n_blocks(self) -> int:
        return max(self.block_of) + 1 if self.block_of else 0

    def blocks(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.n_blocks)]
        for x, b in enumerate(self.block_of):
            out[b].append(x)
        return out

    def to_dict(self) -> dict:
        return {"block_of": list(self.block_of)}

    @classmethod
    def identity(cls, s: int) -> "Congruence":
        return cls(tuple(range(s)))

    @classmethod
    def total(cls, s: int) -> "Congruence":
        return cls((0,) * s)


def normalize_blocks(block_of: Sequence[int]) -> tuple[int, ...]:
    """Relabel block ids to 0..k-1 in order of first occurrence."""
    seen: dict[int, int] = {}
    return tuple(seen.setdefault(int(b), len(seen)) for b in block_of)


def congruence_from_dict(d: dict, s: int | None = None) -> Congruence:
    if not isinstance(d, dict) or "block_of" not in d:
        raise AlgebraError("congruence file must hold {\"block_of\": [...]}")
    R = Congruence(tuple(d["block_of"]))
    if s is not None and R.s != s:
        raise AlgebraError(f"congruence has {R.s} entries, algebra has {s} elements")
    return R


def restricted_growth_strings(s: int) -> Iterator[tuple[int, ...]]:
    """All set partitions of range(s) as normalized block arrays, in lexicographic order."""
    if s == 0:
        yield ()
        return
    word = [0] * s

    def rec(pos: int, top: int):
        if pos == s:
            yield tuple(word)
            return
        for b in range(top + 2):
            word[pos] = b
            yield from rec(pos + 1, max(top, b))

    yield from rec(1, 0)


def _compatible_with(table: OperationTable, blocks: np.ndarray) -> bool:
    if table.arity == 0:
        return True
    # representative of each element's block
    rep = np.empty_like(blocks)
    for b in np.unique(blocks):
        members = np.flatnonzero(blocks == b)
        rep[members] = members[0]
    fb = blocks[table.array]
    # changing one argument inside its block must not change the image block;
    # the one-argument moves generate the full componentwise relation
    for axis in range(table.arity):
        if not np.array_equal(fb, np.take(fb, rep, axis=axis)):
            return False
    return True


def is_compatible(A: FiniteAlgebra, R: Congruence) -> bool:
    if R.s != A.s:
        return False
    blocks = np.asarray(R.block_of, dtype=np.int64)
    return all(_compatible_with(t, blocks) for t in A.operations)


def enumerate_congruences(
    A: FiniteAlgebra, limits: Limits = DEFAULT
) -> list[Congruence]:
    if A.s > limits.congruence_s_max:
        raise SizeLimitError(
            f"congruence enumeration on {A.s} elements exceeds cap {limits.congruence_s_max}"
        )
    return [
        Congruence(rgs)
        for rgs in restricted_growth_strings(A.s)
        if is_compatible(A, Congruence(rgs))
    ]


def quotient(A: FiniteAlgebra, R: Congruence) -> FiniteAlgebra:
    if R.s != A.s:
        raise AlgebraError(f"congruence has {R.s} entries, algebra has {A.s} elements")
    if not is_compatible(A, R):
        raise AlgebraError("partition is not compatible with the operations")
    blocks = np.asarray(R.block_of, dtype=np.int64)
    reps = np.array([members[0] for members in R.blocks()], dtype=np.int64)

    def induced(table: OperationTable) -> np.ndarray:
        return blocks[table.array[np.ix_(*([reps] * table.arity))]]

    return algebra_from_arrays(
        induced(A.theta), [induced(a) for a in A.alphas], [blocks[e] for e in A.es]
    )


# --- relabeling -----------------------------------------------------------


def relabel(A: FiniteAlgebra, perm: Sequence[int]) -> FiniteAlgebra:
    """Transport A along the bijection ``x -> perm[x]``."""
    p = np.asarray(perm, dtype=np.int64)
    if sorted(p.tolist()) != list(range(A.s)):
        raise AlgebraError(f"{list(perm)} is not a permutation of range({A.s})")
    inv = np.argsort(p)

    def move(table: OperationTable) -> np.ndarray:
        return p[table.array[np.ix_(*([inv] * table.arity))]]

    return algebra_from_arrays(move(A.theta), [move(a) for a in A.alphas], [p[e] for e in A.es])


def canonical_form(A: FiniteAlgebra) -> FiniteAlgebra:
    """Lexicographically least relabeling of A (by :meth:`FiniteAlgebra.key`)."""
    best, best_key = A, A.key()
    for perm in itertools.permutations(range(A.s)):
        B = relabel(A, perm)
        k = B.key()
        if k < best_key:
            best, best_key = B, k
    return best
