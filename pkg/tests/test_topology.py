import numpy as np
import pytest

from palab import fixtures
from palab.algebra import OperationTable, SizeLimitError, power
from palab.config import Limits
from palab.topology import (
    FiniteTopology,
    check_lemma_4_1,
    check_prop_2_2,
    check_theorem_4_2,
    compatible_topologies,
    discrete,
    enumerate_preorders,
    enumerate_topologies,
    indiscrete,
    is_continuous,
    is_topology,
    members,
    neighborhood_base_sets,
    sep_axioms,
    sierpinski,
    to_mask,
)
from palab.report import PreconditionError

import oracles


def test_is_topology_examples():
    assert is_topology({0, 0b11}, 2)
    assert not is_topology({0, 0b01, 0b10}, 2)
    assert is_topology(sierpinski().opens, 2)


@pytest.mark.parametrize("s, count", [(1, 1), (2, 4), (3, 29), (4, 355)])
def test_topology_counts(s, count):
    assert len(enumerate_topologies(s)) == count


@pytest.mark.parametrize("s", [1, 2, 3])
def test_topologies_match_raw_families(s):
    ours = {T.open_set for T in enumerate_topologies(s)}
    assert ours == set(oracles.raw_topologies(s))


def test_topology_cap():
    with pytest.raises(SizeLimitError):
        enumerate_topologies(5)
    assert len(enumerate_topologies(5, Limits(topology_s_max=5))) == 6942


@pytest.mark.parametrize("s", [1, 2, 3, 4])
def test_preorders_are_preorders(s):
    for P in enumerate_preorders(s):
        assert P.diagonal().all()
        assert (((P.astype(int) @ P.astype(int)) > 0) <= P).all()


@pytest.mark.parametrize("s", [2, 3, 4])
def test_specialization_round_trip(s):
    for T in enumerate_topologies(s):
        assert FiniteTopology.from_preorder(np.array(T.leq)) == T


def test_specialization_convention():
    S = sierpinski()
    # 1 lies in every open containing 0
    assert S.leq[1, 0] and not S.leq[0, 1]
    assert [members(u) for u in S.minimal_nbhd] == [[0, 1], [1]]


def test_continuity_extremes(E45):
    for T in (discrete(2), indiscrete(2)):
        assert all(is_continuous(t, T) for t in E45.operations)


def test_alpha2_not_continuous_for_sierpinski(E45):
    assert not is_continuous(E45.alphas[1], sierpinski())
    assert not oracles.continuous(E45.alphas[1], sierpinski().opens, 2)


def test_constant_table_continuous():
    c = OperationTable.from_function(lambda a, b, c: 1, 3, 3)
    assert all(is_continuous(c, T) for T in enumerate_topologies(3))


@pytest.mark.parametrize("name", ["E45", "G2", "L3"])
def test_continuity_matches_preimage_oracle(name):
    A = fixtures.FIXTURES[name]()
    for T in enumerate_topologies(A.s):
        for t in A.operations:
            assert is_continuous(t, T) == oracles.continuous(t, T.opens, A.s)


def test_continuity_oracle_on_power(E45):
    P = power(E45, 2)
    for T in enumerate_topologies(4)[::7]:
        assert is_continuous(P.alphas[1], T) == oracles.continuous(P.alphas[1], T.opens, 4)


def test_compatible_topologies(E45):
    assert set(compatible_topologies(E45)) == {indiscrete(2), discrete(2)}
    assert compatible_topologies(fixtures.one(2)) == [discrete(1)]


@pytest.mark.parametrize("name", ["E45", "G2", "L3"])
def test_indiscrete_and_discrete_always_compatible(name):
    A = fixtures.FIXTURES[name]()
    tops = compatible_topologies(A)
    assert indiscrete(A.s) in tops and discrete(A.s) in tops


def test_sep_sierpinski():
    ax = sep_axioms(sierpinski())
    assert ax.t0 and not ax.t1 and not ax.completely_regular


def test_sep_discrete():
    assert all(sep_axioms(discrete(3)).to_dict().values())


def test_sep_partition_topology():
    ax = sep_axioms(FiniteTopology.from_lists(3, [[], [0, 1], [2], [0, 1, 2]]))
    assert not ax.t0 and ax.completely_regular


def _function_separation(T):
    """Point/closed-set separation by continuous maps into [0, 1].

    If x lies in every open set around y, continuity into the (T1) real line
    forces f(x) = f(y), and any map constant along such pairs is continuous.
    Searching {0, 1/2, 1}-valued maps covers every separation pattern.
    """
    import itertools

    s = T.s
    L = T.leq
    vals = (0.0, 0.5, 1.0)
    maps = [f for f in itertools.product(vals, repeat=s)
            if all(f[x] == f[y] for x in range(s) for y in range(s) if L[x, y])]
    for F in T.closed_sets:
        for x in range(s):
            if F >> x & 1:
                continue
            if not any(f[x] == 0.0 and all(f[y] == 1.0 for y in members(F)) for f in maps):
                return False
    return True


@pytest.mark.parametrize("s", [1, 2, 3, 4])
def test_complete_regularity_by_functions(s):
    for T in enumerate_topologies(s):
        assert sep_axioms(T).completely_regular == _function_separation(T)


@pytest.mark.parametrize("s", [1, 2, 3, 4])
def test_axiom_implications(s):
    for T in enumerate_topologies(s):
        ax = sep_axioms(T)
        assert not ax.t2 or ax.t1
        assert not ax.t1 or ax.t0
        assert not ax.completely_regular or ax.regular
        assert not (ax.completely_regular and ax.t0) or ax.t1
        # T1 on a finite set forces the discrete topology
        assert ax.t1 == (T == discrete(s))


def test_neighborhood_base_sets(E45, G2):
    assert members(neighborhood_base_sets(E45, discrete(2), 0, (to_mask([0]), to_mask([1])))) == [0]
    assert members(neighborhood_base_sets(G2, discrete(2), 1, (to_mask([0]),))) == [1]
    for a in range(2):
        assert neighborhood_base_sets(E45, discrete(2), a, (3, 3)) == 3


def test_neighborhood_base_sets_bad_h(E45):
    with pytest.raises(PreconditionError):
        neighborhood_base_sets(E45, discrete(2), 0, (to_mask([1]), to_mask([1])))
    with pytest.raises(PreconditionError):
        neighborhood_base_sets(E45, sierpinski(), 0, (to_mask([0]), 3))


def test_base_sets_are_neighbourhoods(E45, G2):
    assert check_prop_2_2(E45, discrete(2)).holds
    assert check_prop_2_2(E45, indiscrete(2)).holds
    assert check_prop_2_2(G2, discrete(2)).holds


def test_base_sets_on_power(E45):
    P = power(E45, 2)
    for T in compatible_topologies(P):
        assert check_prop_2_2(P, T).holds


def test_base_sets_require_compatibility(E45):
    with pytest.raises(PreconditionError):
        check_prop_2_2(E45, sierpinski())


def test_t0_implies_t1_e45(E45):
    r = check_lemma_4_1(E45)
    assert r.holds
    assert r.details["t0_topologies"] == [discrete(2).open_lists()]


def test_t0_implies_completely_regular(E45):
    assert check_theorem_4_2(E45).holds
    assert check_theorem_4_2(power(E45, 2)).holds


def test_complete_regularity_sweep_requires_rc(L3):
    with pytest.raises(PreconditionError):
        check_theorem_4_2(L3)
    assert check_lemma_4_1(L3).holds
