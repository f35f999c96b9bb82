import pytest
from hypothesis import given, strategies as st

from kvacert.errors import DomainError, LatticeError
from kvacert.lattice import (
    SIMPLE,
    BundleQuery,
    DivisorClass,
    NumericProfile,
    adjoint_twist,
    bundle_class,
    elliptic_degree_allows,
    exceptional,
    pair,
    profile_feasible,
    pullback,
    self_intersection,
)


def test_basic_pairings():
    H = pullback(1, 3, 5)
    E0, E1 = exceptional(0, 3, 5), exceptional(1, 3, 5)
    assert pair(H, H) == 10
    assert pair(E0, E0) == -1
    assert pair(E0, E1) == 0
    assert pair(H, E0) == 0


def test_ktrivial_model():
    H = pullback(2, 2, 7, "ktrivial")
    assert self_intersection(H) == 28


def test_bundle_meets_exceptional():
    q = BundleQuery(2, 3, 1, 4)
    M = bundle_class(q, 13)
    assert pair(M, exceptional(2, 4, 13)) == 3
    N = adjoint_twist(q, 13)
    assert self_intersection(N) == 4 * 26 - 4 * 16


def test_lattice_mismatch():
    with pytest.raises(LatticeError):
        pair(pullback(1, 2, 5), pullback(1, 3, 5))
    with pytest.raises(LatticeError):
        pair(pullback(1, 2, 5), pullback(1, 2, 5, "ktrivial"))


def test_invalid_inputs():
    with pytest.raises(DomainError):
        BundleQuery(0, 1, 1, 1)
    with pytest.raises(DomainError):
        exceptional(3, 3, 5)
    with pytest.raises(DomainError):
        NumericProfile(3, -2, (1,))


classes = st.builds(
    lambda a, m: DivisorClass(a, tuple(m), 7),
    st.integers(-20, 20),
    st.lists(st.integers(-20, 20), min_size=4, max_size=4),
)


@given(classes, classes, classes, st.integers(-5, 5))
def test_bilinear_symmetric(x, y, z, n):
    assert pair(x, y) == pair(y, x)
    assert pair(x + y, z) == pair(x, z) + pair(y, z)
    assert pair(n * x, y) == n * pair(x, y)
    assert self_intersection(x) == pair(x, x)
    assert pair(x - y, z) == pair(x, z) - pair(y, z)


def test_profile_feasible_order():
    # ell < 1 and Hodge first, then parity, then elliptic exclusion
    assert profile_feasible(NumericProfile(0, 0, ()), 5, 1).rule == "R2-hodge"
    assert profile_feasible(NumericProfile(3, 2, ()), 5, 1).rule == "R2-hodge"
    assert profile_feasible(NumericProfile(10, 3, ()), 5, 1).rule == "R3-parity"
    assert profile_feasible(NumericProfile(1, 0, ()), 5, 2).rule == "R4-elliptic-excluded"
    assert profile_feasible(NumericProfile(1, 0, ()), 5, 1).feasible
    assert profile_feasible(NumericProfile(4, 0, ()), 5, SIMPLE).rule == "R4-elliptic-excluded"
    assert profile_feasible(NumericProfile(10, 8, (1, 1)), 5, SIMPLE).feasible


def test_elliptic_degree_allows():
    assert elliptic_degree_allows(3, 3)
    assert not elliptic_degree_allows(2, 3)
    assert not elliptic_degree_allows(100, SIMPLE)


def test_profile_sums():
    p = NumericProfile(7, 2, (2, 1, 0, 1))
    assert (p.s, p.q, p.beta) == (4, 6, 3)
