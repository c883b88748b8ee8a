import itertools
import json

import numpy as np
import pytest

from palab import fixtures
from palab.algebra import (
    AlgebraError,
    Congruence,
    OperationTable,
    SizeLimitError,
    algebra_from_dict,
    canonical_form,
    decode,
    dump_algebra,
    encode,
    enumerate_congruences,
    eval_table,
    is_compatible,
    load_algebra,
    make_algebra,
    power,
    quotient,
    relabel,
)
from palab.checks import check_protomodular, check_rc_i, is_group
from palab.config import Limits

import oracles


def test_eval_examples(E45, G2):
    assert eval_table(E45.theta, (0, 0, 0)) == 1
    assert eval_table(E45.theta, (0, 1, 1)) == 1
    assert eval_table(G2.theta, (1, 1)) == 0


def test_eval_index_order():
    # first argument most significant
    first = OperationTable.from_function(lambda a, b: a, 2, 3)
    assert first.entries == (0, 0, 0, 1, 1, 1, 2, 2, 2)
    t = OperationTable(2, 3, (0, 1, 2, 2, 0, 1, 1, 2, 0))
    assert eval_table(t, (1, 2)) == 1
    assert t(2, 0) == 1


@pytest.mark.parametrize("args", [(0, 0), (0, 0, 0, 0), (0, 2, 0), (0, -1, 0)])
def test_eval_rejects_bad_args(E45, args):
    with pytest.raises(AlgebraError):
        eval_table(E45.theta, args)


def test_make_algebra_accepts_raw_e45(E45):
    raw = E45.to_dict()
    assert make_algebra(raw["s"], raw["n"], raw["theta"], raw["alphas"], raw["es"]) == E45


def test_make_algebra_range_error_names_field():
    with pytest.raises(AlgebraError, match="theta"):
        make_algebra(2, 1, [0, 1, 1, 2], [[0, 1, 1, 0]], [0])


def test_make_algebra_rejects_n0():
    with pytest.raises(AlgebraError, match="n"):
        make_algebra(2, 0, [0, 1], [], [])


@pytest.mark.parametrize(
    "kwargs, field",
    [
        (dict(theta=[0, 1, 1]), "theta"),
        (dict(alphas=[[0, 1, 1, 0], [0, 0, 0, 0]]), "alphas"),
        (dict(alphas=[[0, 1, 1]]), "alphas"),
        (dict(es=[2]), "es"),
        (dict(es=[]), "es"),
    ],
)
def test_make_algebra_shape_errors(kwargs, field):
    base = dict(s=2, n=1, theta=[0, 1, 1, 0], alphas=[[0, 1, 1, 0]], es=[0])
    base.update(kwargs)
    with pytest.raises(AlgebraError, match=field):
        make_algebra(**base)


def test_power_e45_square(E45):
    P = power(E45, 2)
    assert (P.s, P.n) == (4, 2)
    for u in itertools.product(range(4), repeat=3):
        coords = [decode(x, 2, 2) for x in u]
        expect = [E45.theta(*[c[j] for c in coords]) for j in range(2)]
        assert decode(P.theta(*u), 2, 2) == tuple(expect)
    assert P.es == (0, 3)


def test_power_one_is_identity(G2):
    assert power(G2, 1) == G2


def test_power_g2_square_is_klein_group(G2):
    V = power(G2, 2)
    assert oracles.is_group(V.theta)
    assert all(V.theta(x, x) == 0 for x in range(4))


def test_power_size_limit(E45):
    with pytest.raises(SizeLimitError):
        power(E45, 3, Limits(table_entry_max=100))


def test_encoding_round_trip():
    for s, k in [(2, 3), (3, 2), (4, 1)]:
        for x in range(s**k):
            assert encode(decode(x, s, k), s) == x


def test_congruences_e45(E45):
    cons = enumerate_congruences(E45)
    assert [R.block_of for R in cons] == [(0, 0), (0, 1)]
    expected = [p for p in oracles.all_partitions(2) if oracles.congruence_ok(E45, p)]
    assert [R.block_of for R in cons] == expected


def test_congruences_one():
    assert [R.block_of for R in enumerate_congruences(fixtures.one(2))] == [(0,)]


@pytest.mark.parametrize("name", ["E45", "G2", "L3"])
def test_congruences_match_brute_force(name):
    A = fixtures.FIXTURES[name]()
    got = [R.block_of for R in enumerate_congruences(A)]
    expected = [p for p in oracles.all_partitions(A.s) if oracles.congruence_ok(A, p)]
    assert got == expected
    assert (0,) * A.s in got and tuple(range(A.s)) in got


def test_congruences_of_e45_square_brute_force(E45):
    P = power(E45, 2)
    got = [R.block_of for R in enumerate_congruences(P)]
    expected = [p for p in oracles.all_partitions(4) if oracles.congruence_ok(P, p)]
    assert got == expected
    # the affine structure over GF(2)^2 gives the five subgroup cosets
    assert len(got) == 5


def test_congruence_cap(E45):
    with pytest.raises(SizeLimitError):
        enumerate_congruences(power(E45, 3), Limits(congruence_s_max=4))


def test_normalization():
    assert Congruence((5, 5, 2, 5)).block_of == (0, 0, 1, 0)


def test_quotient_one_block(E45):
    Q = quotient(E45, Congruence.total(2))
    assert Q == fixtures.one(2)


def test_quotient_identity(E45):
    assert quotient(E45, Congruence.identity(2)) == E45


def test_quotient_rejects_incompatible(L3):
    R = Congruence((0, 0, 1))
    assert not oracles.congruence_ok(L3, R.block_of)
    with pytest.raises(AlgebraError):
        quotient(L3, R)


def test_quotients_of_power_stay_right_cancellable(E45):
    P = power(E45, 2)
    for R in enumerate_congruences(P):
        Q = quotient(P, R)
        assert check_protomodular(Q).holds and oracles.protomodular(Q)
        assert check_rc_i(Q).holds and oracles.rc_i(Q)


@pytest.mark.parametrize("name", ["E45", "G2", "L3"])
def test_canonical_form_idempotent(name):
    A = fixtures.FIXTURES[name]()
    C = canonical_form(A)
    assert canonical_form(C) == C


def test_canonical_form_orbit(G2, E45):
    assert canonical_form(relabel(G2, [1, 0])) == canonical_form(G2)
    assert canonical_form(E45) == canonical_form(power(E45, 1))


def test_canonical_form_matches_oracle(L3):
    C = canonical_form(L3)
    assert C.key() == oracles.canonical_key(L3.theta.entries, [a.entries for a in L3.alphas], L3.es, 3)


def test_json_round_trip(tmp_path, E45):
    path = tmp_path / "e45.json"
    dump_algebra(E45, path)
    assert json.loads(path.read_text()) == {
        "s": 2, "n": 2, "theta": [1, 0, 0, 1, 0, 1, 1, 0], "alphas": [[0, 0, 0, 0], [1, 0, 0, 1]], "es": [0, 1],
    }
    assert load_algebra(path) == E45


def test_dict_missing_field():
    with pytest.raises(AlgebraError, match="missing"):
        algebra_from_dict({"s": 2})


def test_is_group_klein(G2):
    assert is_group(power(G2, 2).theta)
    assert not is_group(fixtures.l3().theta)
