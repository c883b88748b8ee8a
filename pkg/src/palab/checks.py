"""Exhaustive identity checks for protomodular and right-cancellable algebras.

Every check evaluates its identity over the whole tuple space with numpy and,
on failure, reports the lexicographically least violating tuple. Tuples are
ordered by ``(i, a, a', a'', b, b')`` with the packed n-tuples compared
coordinatewise, so the reported witness is independent of ``workers``.

Counterexample indices ``i`` are 1-based to match the usual alpha_1..alpha_n.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from ._parallel import first_hit
from .algebra import FiniteAlgebra, OperationTable, decode
from .report import CheckReport, PreconditionError, failed, passed


def _digits(A: FiniteAlgebra, packed: int) -> list[int]:
    return list(decode(int(packed), A.s, A.n))


def _first_b_dependence(
    make: Callable[[range], np.ndarray], rows: int, workers: int
) -> Optional[tuple[tuple[int, ...], int, int, int]]:
    """Find the first prefix where ``V[..., b]`` is not constant in ``b``.

    ``make(rng)`` returns V restricted to leading-axis rows ``rng``; the last
    axis is ``b``. Returns ``(prefix, b', V[b=0], V[b'])`` or None.
    """

    def scan(rng: range):
        if not len(rng):
            return None
        V = make(rng)
        bad = V != V[..., :1]
        hits = np.argwhere(bad)
        if not len(hits):
            return None
        h = tuple(int(x) for x in hits[0])
        prefix = (h[0] + rng.start,) + h[1:-1]
        return prefix, h[-1], int(V[h[:-1] + (0,)]), int(V[h])

    return first_hit(scan, rows, workers)


# --- protomodularity --------------------------------------------------------


def check_protomodular(A: FiniteAlgebra) -> CheckReport:
    """alpha_i(a, a) = e_i and theta(alpha_1(a,b), ..., alpha_n(a,b), b) = a."""
    s, n = A.s, A.n
    al = A.alpha_stack
    for i in range(n):
        diag = np.diagonal(al[i])
        bad = np.flatnonzero(diag != A.es[i])
        if len(bad):
            a = int(bad[0])
            return failed(
                "protomodular",
                {"identity": "(2.1)", "i": i + 1, "tuple": {"a": a}, "values": [int(diag[a]), A.es[i]]},
            )
    weights = s ** np.arange(n - 1, -1, -1)
    packed = np.tensordot(weights, al, axes=1)  # packed[a, b] = (alpha_1(a,b), ..., alpha_n(a,b))
    back = A.theta_matrix[packed, np.arange(s)[None, :]]
    bad = np.argwhere(back != np.arange(s)[:, None])
    if len(bad):
        a, b = (int(x) for x in bad[0])
        return failed(
            "protomodular",
            {"identity": "(2.2)", "tuple": {"a": a, "b": b}, "values": [int(back[a, b]), a]},
        )
    return passed("protomodular")


def _require_protomodular(A: FiniteAlgebra, what: str) -> None:
    if not check_protomodular(A).holds:
        raise PreconditionError(f"{what} needs a protomodular algebra")


def check_derived_abc(A: FiniteAlgebra) -> tuple[CheckReport, CheckReport, CheckReport]:
    """The three immediate consequences (a), (b), (c) of protomodularity."""
    _require_protomodular(A, "derived facts (a)-(c)")
    s = A.s
    al = A.alpha_stack
    off = ~np.eye(s, dtype=bool)

    # (a): alpha_i(a,c) = alpha_i(b,c) for all i forces a = b
    same = np.all(al[:, :, None, :] == al[:, None, :, :], axis=0) & off[:, :, None]
    hits = np.argwhere(same)
    if len(hits):
        a, b, c = (int(x) for x in hits[0])
        ra = failed("derived_a", {"identity": "(a)", "tuple": {"a": a, "b": b, "c": c}, "values": [a, b]})
    else:
        ra = passed("derived_a")

    # (b): alpha_i(a,b) = e_i for all i forces a = b
    unit = np.all(al == np.asarray(A.es)[:, None, None], axis=0) & off
    hits = np.argwhere(unit)
    if len(hits):
        a, b = (int(x) for x in hits[0])
        rb = failed("derived_b", {"identity": "(b)", "tuple": {"a": a, "b": b}, "values": [a, b]})
    else:
        rb = passed("derived_b")

    # (c): theta(e_1, ..., e_n, a) = a
    row = A.theta_matrix[A.e_index]
    bad = np.flatnonzero(row != np.arange(s))
    if len(bad):
        a = int(bad[0])
        rc = failed("derived_c", {"identity": "(c)", "tuple": {"a": a}, "values": [int(row[a]), a]})
    else:
        rc = passed("derived_c")
    return ra, rb, rc


# --- 2-associativity ----------------------------------------------------------


def check_2_associative(A: FiniteAlgebra, workers: int = 1) -> CheckReport:
    """theta(a, theta(b, c)) = theta(theta(a, b_1), ..., theta(a, b_n), c)."""
    s, n = A.s, A.n
    S = s**n
    Th = A.theta_matrix
    D = np.array([decode(B, s, n) for B in range(S)], dtype=np.int64)  # D[B, j] = b_j
    weights = s ** np.arange(n - 1, -1, -1)

    def scan(rng: range):
        if not len(rng):
            return None
        rows = np.arange(rng.start, rng.stop)
        lhs = Th[rows[:, None, None], Th[None, :, :]]  # (r, B, c)
        inner = np.tensordot(Th[rows][:, D], weights, axes=([2], [0]))  # (r, B)
        rhs = Th[inner[:, :, None], np.arange(s)[None, None, :]]
        hits = np.argwhere(lhs != rhs)
        if not len(hits):
            return None
        r, B, c = (int(x) for x in hits[0])
        return rng.start + r, B, c, int(lhs[r, B, c]), int(rhs[r, B, c])

    hit = first_hit(scan, S, workers)
    if hit is None:
        return passed("2-associative")
    a, B, c, lv, rv = hit
    return failed(
        "2-associative",
        {"identity": "(2.5)", "tuple": {"a": _digits(A, a), "b": _digits(A, B), "c": c}, "values": [lv, rv]},
    )


# --- right-cancellability, conditions (i), (ii), (iii), (v) -----------------------


def check_rc_i(A: FiniteAlgebra, workers: int = 1) -> CheckReport:
    """alpha_i(theta(a, b), theta(a', b)) does not depend on b."""
    S, Th = A.s**A.n, A.theta_matrix
    for i, al in enumerate(A.alpha_stack):
        hit = _first_b_dependence(
            lambda rng: al[Th[rng.start : rng.stop][:, None, :], Th[None, :, :]], S, workers
        )
        if hit:
            (a, a1), b1, v0, v1 = hit
            return failed(
                "rc_i",
                {
                    "identity": "(3.1)",
                    "i": i + 1,
                    "tuple": {"a": _digits(A, a), "a'": _digits(A, a1), "b": 0, "b'": b1},
                    "values": [v0, v1],
                },
            )
    return passed("rc_i")


def check_rc_ii(A: FiniteAlgebra, workers: int = 1) -> CheckReport:
    """alpha_i(theta(a, theta(a', b)), theta(a'', b)) does not depend on b."""
    S, Th = A.s**A.n, A.theta_matrix
    for i, al in enumerate(A.alpha_stack):

        def make(rng, al=al):
            first = Th[np.arange(rng.start, rng.stop)[:, None, None, None], Th[None, :, None, :]]
            return al[first, Th[None, None, :, :]]

        hit = _first_b_dependence(make, S, workers)
        if hit:
            (a, a1, a2), b1, v0, v1 = hit
            return failed(
                "rc_ii",
                {
                    "identity": "(3.2)",
                    "i": i + 1,
                    "tuple": {
                        "a": _digits(A, a), "a'": _digits(A, a1), "a''": _digits(A, a2),
                        "b": 0, "b'": b1,
                    },
                    "values": [v0, v1],
                },
            )
    return passed("rc_ii")


def check_rc_iii(A: FiniteAlgebra, workers: int = 1) -> CheckReport:
    """alpha_i(theta(a, b), theta(a', theta(a'', b))) does not depend on b."""
    S, Th = A.s**A.n, A.theta_matrix
    nested = Th[np.arange(S)[:, None, None], Th[None, :, :]]  # (a', a'', b)
    for i, al in enumerate(A.alpha_stack):

        def make(rng, al=al):
            return al[Th[rng.start : rng.stop][:, None, None, :], nested[None, :, :, :]]

        hit = _first_b_dependence(make, S, workers)
        if hit:
            (a, a1, a2), b1, v0, v1 = hit
            return failed(
                "rc_iii",
                {
                    "identity": "(3.3)",
                    "i": i + 1,
                    "tuple": {
                        "a": _digits(A, a), "a'": _digits(A, a1), "a''": _digits(A, a2),
                        "b": 0, "b'": b1,
                    },
                    "values": [v0, v1],
                },
            )
    return passed("rc_iii")


def check_rc_v(A: FiniteAlgebra, workers: int = 1) -> CheckReport:
    """alpha_i(theta(a, b), b) and alpha_i(b, theta(a, b)) do not depend on b."""
    S, Th = A.s**A.n, A.theta_matrix
    bs = np.arange(A.s)[None, :]
    for label, order in (("(3.6)", 0), ("(3.7)", 1)):
        for i, al in enumerate(A.alpha_stack):

            def make(rng, al=al, order=order):
                rows = Th[rng.start : rng.stop]
                return al[rows, bs] if order == 0 else al[bs, rows]

            hit = _first_b_dependence(make, S, workers)
            if hit:
                (a,), b1, v0, v1 = hit
                return failed(
                    "rc_v",
                    {
                        "identity": label,
                        "i": i + 1,
                        "tuple": {"a": _digits(A, a), "b": 0, "b'": b1},
                        "values": [v0, v1],
                    },
                )
    return passed("rc_v")


# --- condition (iv) --------------------------------------------------------------


def _constraint_mask(A: FiniteAlgebra, rows: np.ndarray) -> np.ndarray:
    """mask[a, a', b, b'] = (theta(a, b) == theta(a', b')) for a in ``rows``."""
    Th = A.theta_matrix
    return Th[rows][:, None, :, None] == Th[None, :, None, :]


def check_rc_iv_semantic(A: FiniteAlgebra, workers: int = 1) -> CheckReport:
    """Whenever theta(a, b) = theta(a', b'), alpha_i(theta(a'', b'), b) is a function of (a, a', a'')."""
    _require_protomodular(A, "condition (iv)")
    s, S, Th = A.s, A.s**A.n, A.theta_matrix
    b_of_pair = np.repeat(np.arange(s), s)  # flattened (b, b') pairs, b major
    for i, al in enumerate(A.alpha_stack):
        # value[a'', (b, b')] = alpha_i(theta(a'', b'), b)
        value = al[Th[:, None, :], np.arange(s)[None, :, None]].reshape(S, s * s)

        def scan(rng: range, value=value):
            if not len(rng):
                return None
            mask = _constraint_mask(A, np.arange(rng.start, rng.stop)).reshape(len(rng), S, s * s)
            has = mask.any(axis=2)
            p0 = np.argmax(mask, axis=2)  # first constrained (b, b') for each (a, a')
            ref = value[:, p0]  # (a'', r, S)
            ref = np.moveaxis(ref, 0, 2)  # (r, a', a'')
            bad = mask[:, :, None, :] & (value[None, None, :, :] != ref[..., None])
            bad &= has[:, :, None, None]
            hits = np.argwhere(bad)
            if not len(hits):
                return None
            r, a1, a2, p = (int(x) for x in hits[0])
            q = int(p0[r, a1])
            return rng.start + r, a1, a2, q, p, int(value[a2, q]), int(value[a2, p])

        hit = first_hit(scan, S, workers)
        if hit:
            a, a1, a2, q, p, v0, v1 = hit
            return failed(
                "rc_iv_semantic",
                {
                    "identity": "(3.4)=>(3.5)",
                    "i": i + 1,
                    "tuple": {
                        "a": _digits(A, a), "a'": _digits(A, a1), "a''": _digits(A, a2),
                        "first": {"b": int(b_of_pair[q]), "b'": q % s},
                        "second": {"b": int(b_of_pair[p]), "b'": p % s},
                    },
                    "values": [v0, v1],
                },
            )
    return passed("rc_iv_semantic")


@dataclass(frozen=True)
class DerivedTermTables:
    """Tables of the explicit terms from the (ii)=>(iv) or (iii)=>(iv) argument.

    ``T[i]`` has arity 3n with arguments ordered (a, a', a'').  ``t[i]`` has
    arity 2n on the via_ii route (arguments (x, y)) and arity n on the via_iii
    route, where it depends on a single n-tuple.
    """

    route: str
    T: tuple[OperationTable, ...]
    t: tuple[OperationTable, ...]


ROUTES = ("via_ii", "via_iii")


def _term_tables(A: FiniteAlgebra, route: str, pivot: Optional[int] = None) -> DerivedTermTables:
    s, n, S = A.s, A.n, A.s**A.n
    Th, al = A.theta_matrix, A.alpha_stack
    weights = s ** np.arange(n - 1, -1, -1)

    def cancel_at(i: int) -> int:
        return A.es[i] if pivot is None else pivot

    if route == "via_ii":
        # t_j(x, y) = alpha_j(theta(x, e_j), theta(y, e_j)); T_i = alpha_i(theta(t(a'', a'), theta(a, e_i)), e_i)
        t = np.stack(
            [al[j][Th[:, cancel_at(j)][:, None], Th[:, cancel_at(j)][None, :]] for j in range(n)]
        )  # (n, x, y)
        t_packed = np.tensordot(weights, t, axes=1)  # (x, y)
        T = np.stack(
            [
                al[i][Th[t_packed.T[None, :, :], Th[:, A.es[i]][:, None, None]], A.es[i]]
                for i in range(n)
            ]
        )  # (n, a, a', a'')
        t_tables = tuple(OperationTable(2 * n, s, tuple(t[j].ravel().tolist())) for j in range(n))
    elif route == "via_iii":
        # t_j(a) = alpha_j(e_j, theta(a, e_j)); T_i = alpha_i(theta(a'', e_i), theta(t(a), theta(a', e_i)))
        t = np.stack([al[j][cancel_at(j), Th[:, cancel_at(j)]] for j in range(n)])  # (n, a)
        t_packed = np.tensordot(weights, t, axes=1)  # (a,)
        T = np.stack(
            [
                al[i][
                    Th[:, A.es[i]][None, None, :],
                    Th[t_packed[:, None], Th[:, A.es[i]][None, :]][:, :, None],
                ]
                for i in range(n)
            ]
        )  # (n, a, a', a'')
        t_tables = tuple(OperationTable(n, s, tuple(t[j].tolist())) for j in range(n))
    else:
        raise ValueError(f"unknown route {route!r}; expected one of {ROUTES}")
    T_tables = tuple(OperationTable(3 * n, s, tuple(T[i].ravel().tolist())) for i in range(n))
    return DerivedTermTables(route, T_tables, t_tables)


def derive_Ti(A: FiniteAlgebra, route: str = "via_ii", workers: int = 1) -> tuple[DerivedTermTables, CheckReport]:
    """Tabulate the explicit terms T_i and check that, on every tuple meeting the
    constraint, they reproduce the alpha value.

    Besides the witness property the report checks ``T_i(e, e, e) = e_i`` and
    that the t-tables come out the same whatever element is cancelled in
    place of e_j.
    """
    if route not in ROUTES:
        raise ValueError(f"unknown route {route!r}; expected one of {ROUTES}")
    if not check_rc_i(A).holds:
        raise PreconditionError("derive_Ti needs an algebra satisfying (3.1)")
    s, n, S = A.s, A.n, A.s**A.n
    Th, al = A.theta_matrix, A.alpha_stack
    terms = _term_tables(A, route)
    name = f"derive_Ti[{route}]"

    for c in range(s):
        other = _term_tables(A, route, pivot=c)
        if other.t != terms.t:
            return failed(name, {"violated": "t-table independent of the cancelled element", "pivot": c})

    e_packed = A.e_index
    for i in range(n):
        Tarr = terms.T[i].array.reshape(S, S, S)
        got = int(Tarr[e_packed, e_packed, e_packed])
        if got != A.es[i]:
            return failed(name, {"violated": "T_i(e,e,e) = e_i", "i": i + 1, "values": [got, A.es[i]]})

    for i in range(n):
        Tarr = terms.T[i].array.reshape(S, S, S)
        # target[a'', b, b'] = alpha_i(theta(a'', b'), b)
        target = al[i][Th[:, None, :], np.arange(s)[None, :, None]]

        def scan(rng: range, Tarr=Tarr, target=target):
            if not len(rng):
                return None
            mask = _constraint_mask(A, np.arange(rng.start, rng.stop))  # (r, a', b, b')
            bad = mask[:, :, None, :, :] & (
                target[None, None, :, :, :] != Tarr[rng.start : rng.stop][:, :, :, None, None]
            )
            hits = np.argwhere(bad)
            if not len(hits):
                return None
            r, a1, a2, b, b1 = (int(x) for x in hits[0])
            return rng.start + r, a1, a2, b, b1, int(target[a2, b, b1]), int(Tarr[rng.start + r, a1, a2])

        hit = first_hit(scan, S, workers)
        if hit:
            a, a1, a2, b, b1, lv, rv = hit
            return terms, failed(
                name,
                {
                    "identity": "(3.5)",
                    "i": i + 1,
                    "tuple": {
                        "a": _digits(A, a), "a'": _digits(A, a1), "a''": _digits(A, a2), "b": b, "b'": b1,
                    },
                    "values": [lv, rv],
                },
            )
    return terms, passed(name)


# --- the equivalent conditions together ---------------------------------------------------------


def rc_outcomes(A: FiniteAlgebra, workers: int = 1) -> dict[str, bool]:
    return {
        "rc_i": check_rc_i(A, workers).holds,
        "rc_ii": check_rc_ii(A, workers).holds,
        "rc_iii": check_rc_iii(A, workers).holds,
        "rc_iv_semantic": check_rc_iv_semantic(A, workers).holds,
        "rc_v": check_rc_v(A, workers).holds,
        "2-associative": check_2_associative(A, workers).holds,
    }


def check_lemma31_consistency(A: FiniteAlgebra, workers: int = 1) -> CheckReport:
    """Conditions (i)-(iv) agree, each implies (v), and (v) implies (i) when theta is 2-associative."""
    _require_protomodular(A, "the right-cancellability consistency check")
    o = rc_outcomes(A, workers)
    name = "lemma31_consistency"
    eq = ("rc_i", "rc_ii", "rc_iii", "rc_iv_semantic")
    for x in eq[1:]:
        if o[x] != o["rc_i"]:
            return failed(name, {"violated": f"rc_i <=> {x}", "outcomes": o}, outcomes=o)
    if o["rc_i"] and not o["rc_v"]:
        return failed(name, {"violated": "rc_i => rc_v", "outcomes": o}, outcomes=o)
    if o["2-associative"] and o["rc_v"] and not o["rc_i"]:
        return failed(name, {"violated": "2-associative and rc_v => rc_i", "outcomes": o}, outcomes=o)
    return passed(name, outcomes=o)


# --- n = 1: the group collapse ---------------------------------------------------------


def is_group(table: OperationTable) -> bool:
    """Associative binary operation with a two-sided identity and two-sided inverses."""
    m = table.array
    s = table.s
    xs = np.arange(s)
    if not np.array_equal(m[m[:, :, None], xs[None, None, :]], m[xs[:, None, None], m[None, :, :]]):
        return False
    ids = [u for u in range(s) if np.array_equal(m[u], np.arange(s)) and np.array_equal(m[:, u], np.arange(s))]
    if not ids:
        return False
    u = ids[0]
    return all(np.any((m[a] == u) & (m[:, a] == u)) for a in range(s))


def check_group_collapse(A: FiniteAlgebra) -> CheckReport:
    """A right-cancellable n=1 algebra with theta(a, e) = a is a group."""
    if A.n != 1:
        raise PreconditionError(f"group collapse applies to n = 1, got n = {A.n}")
    _require_protomodular(A, "group collapse")
    name = "group_collapse"
    s, e = A.s, A.es[0]
    m = A.theta.array
    al = A.alphas[0].array
    xs = np.arange(s)
    if not check_rc_i(A).holds:
        return passed(name, applicable=False, reason="(3.1) fails")
    bad = np.flatnonzero(m[:, e] != xs)
    if len(bad):
        return passed(name, applicable=False, reason=f"(3.8) fails at a={int(bad[0])}")

    bad = np.flatnonzero(al[:, e] != xs)
    if len(bad):
        a = int(bad[0])
        return failed(name, {"identity": "(3.9)", "tuple": {"a": a}, "values": [int(al[a, e]), a]})
    lhs = al[m[:, None, :], m[None, :, :]]  # (a, a', b)
    rhs = np.broadcast_to(al[:, :, None], lhs.shape)
    hits = np.argwhere(lhs != rhs)
    if len(hits):
        a, a1, b = (int(x) for x in hits[0])
        return failed(
            name,
            {"identity": "(3.10)", "tuple": {"a": a, "a'": a1, "b": b}, "values": [int(lhs[a, a1, b]), int(rhs[a, a1, b])]},
        )
    assoc_l = m[m[:, :, None], xs[None, None, :]]
    assoc_r = m[xs[:, None, None], m[None, :, :]]
    hits = np.argwhere(assoc_l != assoc_r)
    if len(hits):
        a, b, c = (int(x) for x in hits[0])
        return failed(
            name,
            {"identity": "associativity", "tuple": {"a": a, "b": b, "c": c},
             "values": [int(assoc_l[a, b, c]), int(assoc_r[a, b, c])]},
        )
    bad = np.flatnonzero((m[e, :] != xs) | (m[:, e] != xs))
    if len(bad):
        a = int(bad[0])
        return failed(name, {"identity": "two-sided identity", "tuple": {"a": a}, "values": [int(m[e, a]), int(m[a, e])]})
    for a in range(s):
        if not np.any((m[a] == e) & (m[:, a] == e)):
            return failed(name, {"identity": "two-sided inverse", "tuple": {"a": a}, "values": [a, e]})
    return passed(name, applicable=True)


CHECKS = {
    "protomodular": lambda A, w=1: check_protomodular(A),
    "rc-i": check_rc_i,
    "rc-ii": check_rc_ii,
    "rc-iii": check_rc_iii,
    "rc-iv": check_rc_iv_semantic,
    "rc-v": check_rc_v,
    "lemma31": check_lemma31_consistency,
    "2-assoc": check_2_associative,
    "group": lambda A, w=1: check_group_collapse(A),
}
