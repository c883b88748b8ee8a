"""Brute-force reference implementations in plain Python.

Nothing here imports palab's checking code: algebras are read through their
raw ``entries`` and every quantifier is an explicit loop.
"""

import itertools


def op(table):
    s, k, entries = table.s, table.arity, table.entries

    def f(*args):
        idx = 0
        for x in args:
            idx = idx * s + x
        return entries[idx]

    return f


def tuples(s, k):
    return itertools.product(range(s), repeat=k)


def protomodular(A):
    th = op(A.theta)
    als = [op(a) for a in A.alphas]
    for i, al in enumerate(als):
        if any(al(a, a) != A.es[i] for a in range(A.s)):
            return False
    for a, b in tuples(A.s, 2):
        if th(*[al(a, b) for al in als], b) != a:
            return False
    return True


def rc_i_first_violation(A):
    """Lexicographically least (i, a, a', b, b') where alpha_i of two theta values depends on b, or None."""
    th = op(A.theta)
    s, n = A.s, A.n
    for i, al in enumerate(op(x) for x in A.alphas):
        for a in tuples(s, n):
            for a1 in tuples(s, n):
                for b in range(s):
                    for b1 in range(s):
                        lhs = al(th(*a, b), th(*a1, b))
                        rhs = al(th(*a, b1), th(*a1, b1))
                        if lhs != rhs:
                            return i + 1, list(a), list(a1), b, b1, lhs, rhs
    return None


def rc_i(A):
    return rc_i_first_violation(A) is None


def two_associative(A):
    th = op(A.theta)
    s, n = A.s, A.n
    for a in tuples(s, n):
        for b in tuples(s, n):
            for c in range(s):
                if th(*a, th(*b, c)) != th(*[th(*a, bj) for bj in b], c):
                    return False
    return True


def is_group(table):
    """Associativity by triple loop, a two-sided identity, two-sided inverses."""
    m = op(table)
    s = table.s
    for a, b, c in tuples(s, 3):
        if m(m(a, b), c) != m(a, m(b, c)):
            return False
    ids = [u for u in range(s) if all(m(u, x) == x == m(x, u) for x in range(s))]
    if not ids:
        return False
    u = ids[0]
    return all(any(m(a, b) == u == m(b, a) for b in range(s)) for a in range(s))


def congruence_ok(A, block_of):
    for table in A.operations:
        f = op(table)
        for u in tuples(A.s, table.arity):
            for v in tuples(A.s, table.arity):
                if all(block_of[x] == block_of[y] for x, y in zip(u, v)):
                    if block_of[f(*u)] != block_of[f(*v)]:
                        return False
    return True


def all_partitions(s):
    """Every set partition of range(s) as a block-id list (not normalized)."""
    out = set()
    for labels in tuples(s, s):
        seen = {}
        out.add(tuple(seen.setdefault(x, len(seen)) for x in labels))
    return sorted(out)


def raw_topologies(s):
    """Every family of subsets of range(s) that is a topology, by direct search."""
    subsets = list(range(1 << s))
    full = (1 << s) - 1
    found = []
    for bits in range(1 << len(subsets)):
        fam = {subsets[j] for j in range(len(subsets)) if bits >> j & 1}
        if 0 not in fam or full not in fam:
            continue
        if all(x | y in fam and x & y in fam for x in fam for y in fam):
            found.append(frozenset(fam))
    return found


def continuous(table, opens, s):
    """Preimage of every open set is open in the product topology.

    Opens of the product are unions of boxes of opens; on a finite space a
    set is open iff it contains, around each point, a box of minimal
    neighbourhoods.
    """
    f = op(table)
    k = table.arity
    U = []
    for x in range(s):
        u = (1 << s) - 1
        for o in opens:
            if o >> x & 1:
                u &= o
        U.append([y for y in range(s) if u >> y & 1])
    for O in opens:
        pre = {t for t in tuples(s, k) if O >> f(*t) & 1}
        for t in pre:
            if not all(v in pre for v in itertools.product(*[U[x] for x in t])):
                return False
    return True


def raw_protomodular_n1(s):
    """All (theta, alpha, e) on s points satisfying both protomodular identities, by raw table enumeration."""
    found = []
    for e in range(s):
        for th in tuples(s, s * s):
            t = lambda a, b: th[a * s + b]
            for al in tuples(s, s * s):
                if all(al[a * s + a] == e for a in range(s)) and all(
                    t(al[a * s + b], b) == a for a in range(s) for b in range(s)
                ):
                    found.append((th, al, e))
    return found


def protomodular_count_by_cells(s, n):
    """Count protomodular structures: raw theta and constants, alpha choices counted cell by cell.

    The two identities constrain each alpha cell (a, b) independently, so the
    number of alpha tuples for a fixed theta is the product of per-cell counts.
    """
    total = 0
    S = s**n
    for es in tuples(s, n):
        for th in tuples(s, S * s):
            prod = 1
            for a in range(s):
                for b in range(s):
                    count = 0
                    for x in tuples(s, n):
                        if a == b and x != es:
                            continue
                        idx = 0
                        for xi in x:
                            idx = idx * s + xi
                        if th[idx * s + b] == a:
                            count += 1
                    prod *= count
                    if not prod:
                        break
                if not prod:
                    break
            total += prod
    return total


def raw_protomodular(s, n):
    """Yield (theta, alphas, es) for every protomodular structure, raw tables as tuples."""
    S = s**n
    for es in tuples(s, n):
        for th in tuples(s, S * s):
            cells = []
            for a in range(s):
                for b in range(s):
                    opts = []
                    for idx, x in enumerate(tuples(s, n)):
                        if a == b and x != es:
                            continue
                        if th[idx * s + b] == a:
                            opts.append(x)
                    cells.append(opts)
            for pick in itertools.product(*cells):
                alphas = tuple(tuple(x[i] for x in pick) for i in range(n))
                yield th, alphas, es


def canonical_key(th, alphas, es, s):
    """Least concatenated (theta, alphas, es) over all relabelings."""
    n = len(es)
    best = None
    for p in itertools.permutations(range(s)):
        inv = [0] * s
        for x, y in enumerate(p):
            inv[y] = x

        def moved(entries, k):
            out = []
            for t in tuples(s, k):
                idx = 0
                for x in t:
                    idx = idx * s + inv[x]
                out.append(p[entries[idx]])
            return out

        key = tuple(moved(th, n + 1) + [v for a in alphas for v in moved(a, 2)] + [p[e] for e in es])
        if best is None or key < best:
            best = key
    return best
