from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from artifact.exactcore import (
    RatMatrix,
    UniPoly,
    eval_poly,
    format_rational,
    nullspace,
    parse_rational,
    poly_gcd,
    rank,
)

rationals = st.fractions(min_value=-100, max_value=100, max_denominator=50)
small = st.fractions(min_value=-5, max_value=5, max_denominator=4)


def naive_rank(rows):
    # textbook Gaussian elimination over Fractions, used only as a cross-check
    m = [list(map(F, r)) for r in rows]
    r = 0
    cols = len(m[0]) if m else 0
    for c in range(cols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c] / m[r][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        r += 1
    return r


def test_nullspace_rank_one():
    assert nullspace(RatMatrix.from_rows([[1, 1], [2, 2]])) == [(F(1), F(-1))]


def test_nullspace_identity_is_empty():
    assert nullspace(RatMatrix.from_rows([[1, 0, 0], [0, 1, 0], [0, 0, 1]])) == []


def test_nullspace_of_zero_matrix_is_everything():
    basis = nullspace(RatMatrix.from_rows([[0, 0, 0], [0, 0, 0]]))
    assert len(basis) == 3
    assert rank(RatMatrix.from_rows(basis)) == 3


def test_nullspace_of_empty_matrix():
    assert len(nullspace(RatMatrix(0, 4, ()))) == 4


def test_matrix_entry_count_checked():
    with pytest.raises(ValueError):
        RatMatrix(2, 2, (1, 2, 3))


@settings(max_examples=150, deadline=None)
@given(st.integers(1, 5), st.integers(1, 6), st.data())
def test_nullspace_kernel_and_rank_nullity(r, c, data):
    rows = [[data.draw(small) for _ in range(c)] for _ in range(r)]
    m = RatMatrix.from_rows(rows)
    basis = nullspace(m)
    for v in basis:
        assert all(x == 0 for x in m @ v)
        assert next(x for x in v if x) == 1
    assert rank(m) + len(basis) == c
    assert rank(m) == naive_rank(rows)
    if basis:
        assert rank(RatMatrix.from_rows(basis)) == len(basis)


def test_poly_gcd_examples():
    t = UniPoly.t()
    assert poly_gcd(t * t - 1, t - 1) == t - 1
    assert poly_gcd(t, t + 1) == UniPoly.const(1)
    assert poly_gcd(UniPoly(), 2 * t) == t


def test_poly_gcd_of_zeros_is_undefined():
    with pytest.raises(ValueError, match="undefined gcd"):
        poly_gcd(UniPoly(), UniPoly())


@settings(max_examples=100, deadline=None)
@given(st.lists(small, max_size=4), st.lists(small, max_size=4), st.lists(small, max_size=3))
def test_poly_gcd_divides_both(a, b, c):
    common = UniPoly(tuple(c)) if any(c) else UniPoly.const(1)
    f, g = UniPoly(tuple(a)) * common, UniPoly(tuple(b)) * common
    if f.is_zero() and g.is_zero():
        return
    h = poly_gcd(f, g)
    assert h.lead() == 1
    assert (f % h).is_zero() and (g % h).is_zero()
    if not f.is_zero() and not g.is_zero():
        assert h.degree >= common.degree


def test_eval_poly_examples():
    t = UniPoly.t()
    assert eval_poly(t * t - 1, F(2)) == 3
    assert eval_poly(UniPoly(), F(7)) == 0
    assert eval_poly(t * F(1, 2), F(1, 3)) == F(1, 6)


@given(st.lists(rationals, max_size=5), st.lists(rationals, max_size=3), rationals.filter(bool))
def test_divmod_reconstructs(a, b, lead):
    f, g = UniPoly(tuple(a)), UniPoly(tuple(b) + (lead,))
    q, r = divmod(f, g)
    assert q * g + r == f
    assert r.degree < g.degree


@given(rationals, rationals, rationals)
def test_field_laws_exact(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a * (b + c) == a * b + a * c


def test_trailing_zeros_trimmed():
    assert UniPoly((1, 2, 0, 0)).coeffs == (F(1), F(2))
    assert UniPoly((0, 0)).is_zero()


def test_rational_strings():
    assert format_rational(F(6, 4)) == "3/2"
    assert format_rational(F(4, 2)) == "2"
    assert parse_rational("-3/6") == F(-1, 2)
    with pytest.raises(ValueError):
        parse_rational("0.5")


def test_poly_json_round_trip():
    p = UniPoly((F(1, 2), 0, -3))
    assert p.to_json() == ["1/2", "0", "-3"]
    assert UniPoly.from_json(p.to_json()) == p


def test_bareiss_handles_growth():
    # Hilbert-type matrix: large intermediate numbers, exact answer known
    n = 8
    rows = [[F(1, i + j + 1) for j in range(n)] for i in range(n)]
    assert rank(RatMatrix.from_rows(rows)) == n
    rows.append([sum(r[j] for r in rows) for j in range(n)])
    assert rank(RatMatrix.from_rows(rows)) == n
