import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from kvacert.errors import DomainError, HypothesisError
from kvacert.exactmath import Surd, compare
from kvacert.lattice import SIMPLE
from kvacert.seshadri import (
    SeshadriBound,
    abelian_multi_point,
    bound_bauer_szemberg,
    bound_kuchle,
    bound_pell_rho1,
    bound_szemberg_floor,
    universal_upper_bound,
)


@pytest.mark.parametrize("d, r, expected", [(2, 1, Surd(2)), (4, 1, Surd(Fraction(8, 3))), (1, 2, Surd(1)),
                                            (13, 4, Surd(Fraction(130, 51)))])
def test_pell_bound_examples(d, r, expected):
    assert bound_pell_rho1(d, r).value == expected


def test_pell_bound_relaxed():
    b = bound_pell_rho1(4, 1)
    assert b.relaxed == Surd(Fraction(8, 3))
    assert b.pell.D == 8
    assert "picard-rank-one" in b.assumptions


@pytest.mark.parametrize("L2, r, eps1, expected", [(16, 4, 3, Surd.sqrt(3)), (8, 2, 10, Surd.sqrt(2))])
def test_kuchle_examples(L2, r, eps1, expected):
    assert bound_kuchle(L2, r, eps1).value == expected


def test_kuchle_needs_two_points():
    with pytest.raises(HypothesisError):
        bound_kuchle(8, 1, 3)


@pytest.mark.parametrize("d, eps0, expected", [(7, 100, Surd(Fraction(7, 2))), (100, 1, Surd(1)), (4, 3, Surd.sqrt(7))])
def test_bauer_szemberg_examples(d, eps0, expected):
    assert bound_bauer_szemberg(d, eps0).value == expected


def test_bauer_szemberg_simple():
    b = bound_bauer_szemberg(4, SIMPLE)
    assert b.value == Surd.sqrt(7)
    assert b.assumptions == ("no-elliptic-curves",)


@pytest.mark.parametrize("L2, r, expected", [(36, 4, 3), (37, 4, 3), (1, 1, 1), (35, 4, 2)])
def test_szemberg_floor_examples(L2, r, expected):
    assert bound_szemberg_floor(L2, r).value == Surd(expected)


def test_invalid_bound():
    with pytest.raises(DomainError):
        SeshadriBound(Surd(-1), "kuchle")
    with pytest.raises(DomainError):
        SeshadriBound(Surd(1), "made-up")
    with pytest.raises(DomainError):
        bound_pell_rho1(0, 1)


@given(st.integers(1, 1000), st.integers(1, 50))
def test_pell_bound_between_relaxed_and_upper(d, r):
    b = bound_pell_rho1(d, r)
    assert compare(b.value, b.relaxed) >= 0
    assert compare(b.value, universal_upper_bound(2 * d, r)) <= 0


@given(st.integers(1, 500), st.integers(2, 40), st.one_of(st.integers(1, 60), st.just(SIMPLE)))
def test_multi_point_below_upper(d, r, e_min):
    assert compare(abelian_multi_point(d, r, e_min).value, universal_upper_bound(2 * d, r)) <= 0


def test_szemberg_floor_monotone_in_r():
    for L2 in range(1, 200):
        values = [bound_szemberg_floor(L2, r).value for r in range(1, 30)]
        assert all(compare(a, b) >= 0 for a, b in zip(values, values[1:]))
        assert all(compare(v, universal_upper_bound(L2, r)) <= 0 for r, v in enumerate(values, 1))


def test_pell_branch_cross_check():
    # where sqrt(2d/r) is rational, perturbing d forces the Pell branch; both stay below sqrt(2d/r)
    rng = random.Random(7)
    for _ in range(200):
        a, r = rng.randint(1, 20), rng.randint(1, 20)
        d = 2 * a * a * r  # 2d/r = 4a^2
        exact = bound_pell_rho1(d, r)
        assert exact.value == Surd(2 * a)
        near = bound_pell_rho1(d + 1, r)
        assert compare(near.value, universal_upper_bound(2 * (d + 1), r)) <= 0
        assert compare(near.value, exact.value - 1) >= 0
