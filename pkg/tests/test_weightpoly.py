import itertools
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from artifact.weightpoly import (
    NotInPolytopeError,
    SubsetIndex,
    Wall,
    WeightVector,
    canonical_wall,
    h_value,
    is_in_delta,
    is_in_pi,
    same_chamber,
    signature,
    signed_permutation_group_order,
    wall_list,
    weyl_generators_check,
)

A6 = WeightVector((F(2, 3),) + (F(1, 3),) * 5)


def weights(n):
    return st.lists(st.fractions(min_value=0, max_value=1, max_denominator=60), min_size=n, max_size=n).map(
        lambda a: WeightVector(tuple(a)))


def brute_h(I, a):
    # straight from the definition, per coordinate
    return sum((1 - x) if i in I else x for i, x in enumerate(a, 1))


def subsets(n):
    for r in range(n + 1):
        yield from itertools.combinations(range(1, n + 1), r)


def test_h_value_examples():
    xi = WeightVector.vertex(5, 0b00011)
    assert h_value(SubsetIndex.of(5, [1]), xi) == 1
    assert all(h_value(m, WeightVector.central(6)) == 3 for m in range(64))
    assert h_value(0, A6) == sum(A6.a)


def test_dimension_mismatch():
    with pytest.raises(ValueError):
        h_value(SubsetIndex.of(6, [1]), WeightVector.central(5))


def test_n_below_five_rejected():
    with pytest.raises(ValueError, match="at least 5"):
        WeightVector.central(4)
    with pytest.raises(ValueError):
        wall_list(4)


def test_weights_outside_unit_interval_rejected():
    with pytest.raises(ValueError):
        WeightVector((F(3, 2),) + (F(0),) * 4)


def test_delta_examples():
    assert is_in_delta(WeightVector.vertex(5, 0b00011))
    assert not is_in_delta(WeightVector.vertex(5, 0b00001))
    assert is_in_delta(WeightVector.central(5))


def test_pi_examples():
    assert is_in_pi(WeightVector.central(5), strict=True)
    assert not is_in_pi(WeightVector.vertex(5, 0b00011))


def test_pi_interior_point_by_brute_force():
    a = A6.a
    ok = all(0 < x < 1 for x in a)
    for I in subsets(6):
        h = brute_h(I, a)
        ok = ok and (h > 1 if len(I) % 2 else h > 2)
    assert ok
    assert is_in_pi(A6, strict=True)


@pytest.mark.parametrize("n, expected", [(5, 16), (6, 48), (7, 128)])
def test_wall_counts(n, expected):
    # independent count: hyperplanes as sets of (I, k), merging I with its complement at k = n/2
    planes = set()
    for k in range(2, n // 2 + 1):
        for I in subsets(n):
            if len(I) % 2 == k % 2:
                comp = tuple(i for i in range(1, n + 1) if i not in I)
                planes.add((k, min(I, comp)) if 2 * k == n else (k, I))
    assert len(planes) == expected
    assert len(wall_list(n)) == expected


@pytest.mark.parametrize("n", [5, 6, 7, 8])
def test_walls_are_canonical_and_ordered(n):
    walls = wall_list(n)
    assert list(walls) == sorted(walls)
    assert len(set(walls)) == len(walls)
    for w in walls:
        assert 2 <= w.k <= n / 2
        assert bin(w.mask).count("1") % 2 == w.k % 2


def test_noncanonical_wall_rejected():
    with pytest.raises(ValueError):
        Wall(3, 0b111000, 6)


def test_canonical_wall_orientation():
    w, orient = canonical_wall(0b001110, 3, 6)
    assert w.indices() == [1, 5, 6] and orient == -1


def test_signature_central_n5_all_positive():
    sig = signature(WeightVector.central(5))
    for w, s in sig.items():
        assert s == (1 if brute_h(w.indices(), (F(1, 2),) * 5) > w.k else 0)
    assert set(sig.signs) == {1}


def test_signature_central_n6_zero_on_middle_walls():
    for w, s in signature(WeightVector.central(6)).items():
        assert s == (0 if w.k == 3 else 1)


def test_signature_of_epsilon_weight_is_open():
    sig = signature(A6)
    assert sig.is_open()
    values = {brute_h(w.indices(), A6.a) for w in wall_list(6)}
    assert {F(7, 3), F(8, 3), F(10, 3)} <= values
    for w, s in sig.items():
        h = brute_h(w.indices(), A6.a)
        assert s == (h > w.k) - (h < w.k)


def test_signature_requires_delta():
    with pytest.raises(NotInPolytopeError):
        signature(WeightVector.vertex(5, 1))


def test_signature_json_shape():
    js = signature(WeightVector.central(5)).to_json()
    assert len(js) == 16
    assert js[0] == {"I": [], "k": 2, "sign": 1}


def test_same_chamber_examples():
    assert same_chamber(A6, A6)
    off = WeightVector((F(1, 2) + F(1, 100), F(1, 2) - F(1, 100)) + (F(1, 2),) * 4)
    assert not same_chamber(WeightVector.central(6), off)


def test_same_chamber_small_perturbations():
    import random
    rng = random.Random(3)
    found = 0
    while found < 20:
        B = WeightVector(tuple(x + F(rng.randint(-1000, 1000), 10 ** 6) for x in A6.a))
        assert same_chamber(A6, B)
        found += 1


def test_weyl_checks():
    assert weyl_generators_check(5)
    assert weyl_generators_check(6)


def test_wd5_order():
    assert signed_permutation_group_order(5) == 2 ** 4 * 120


@pytest.mark.parametrize("n", [5, 6])
def test_vertex_identity_exhaustive(n):
    for J in range(1 << n):
        A = WeightVector.vertex(n, J)
        for I in range(1 << n):
            assert h_value(I, A) == bin(~I & J & ((1 << n) - 1)).count("1") + bin(~J & I & ((1 << n) - 1)).count("1")


@pytest.mark.parametrize("n", [5, 6, 7])
def test_vertex_parity_decides_delta(n):
    for J in range(1 << n):
        assert is_in_delta(WeightVector.vertex(n, J)) == (bin(J).count("1") % 2 == 0)


@settings(max_examples=60, deadline=None)
@given(weights(6), st.integers(0, 63))
def test_complement_sum(A, I):
    assert h_value(I, A) + h_value(63 ^ I, A) == 6


@settings(max_examples=100, deadline=None)
@given(st.integers(5, 8).flatmap(lambda n: st.tuples(weights(n), st.integers(0, 2 ** n - 1), st.integers(0, 2 ** n - 1))))
def test_wall_flip_identity(args):
    A, I, R = args
    flipped = WeightVector(tuple(1 - x if R >> i & 1 else x for i, x in enumerate(A.a)))
    assert h_value(I, flipped) == h_value(I ^ R, A)


@settings(max_examples=60, deadline=None)
@given(weights(6))
def test_table_agrees_with_direct_sum(A):
    for I in range(64):
        num, den = A.scaled_h(I)
        assert F(num, den) == h_value(I, A)


@settings(max_examples=40, deadline=None)
@given(weights(6), weights(6), weights(6))
def test_same_chamber_is_an_equivalence(A, B, C):
    pts = [X for X in (A, B, C) if is_in_delta(X)]
    for X in pts:
        assert same_chamber(X, X)
        for Y in pts:
            assert same_chamber(X, Y) == same_chamber(Y, X)
            for Z in pts:
                if same_chamber(X, Y) and same_chamber(Y, Z):
                    assert same_chamber(X, Z)


@settings(max_examples=80, deadline=None)
@given(weights(6))
def test_strict_pi_implies_delta(A):
    if is_in_pi(A, strict=True):
        assert is_in_delta(A)
