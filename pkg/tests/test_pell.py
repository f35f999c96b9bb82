from fractions import Fraction

import pytest
from sympy.solvers.diophantine.diophantine import diop_DN

from kvacert.errors import DomainError, PellError
from kvacert.pell import PellSolution, pell_lower_bound_l0, pell_primitive

# classical fundamental solutions, cross-checked against the brute force below
FROZEN = {
    2: (3, 2),
    3: (2, 1),
    8: (3, 1),
    13: (649, 180),
    61: (1766319049, 226153980),
    109: (158070671986249, 15140424455100),
}


@pytest.mark.parametrize("D", sorted(FROZEN))
def test_frozen(D):
    sol = pell_primitive(D)
    assert (sol.l0, sol.k0) == FROZEN[D]


def brute_force(D, k_cap=10**5):
    for k in range(1, k_cap):
        l2 = 1 + D * k * k
        l = int(l2**0.5)
        while l * l < l2:
            l += 1
        while l * l > l2:
            l -= 1
        if l * l == l2:
            return l, k
    return None


def test_brute_force_small_range():
    for D in range(2, 400):
        if int(D**0.5) ** 2 == D:
            continue
        hit = brute_force(D)
        if hit is not None:
            sol = pell_primitive(D)
            assert (sol.l0, sol.k0) == hit


def test_sympy_agrees():
    for D in list(range(2, 300)) + [991, 1621, 4729, 9781]:
        if int(D**0.5) ** 2 == D:
            continue
        ((l, k),) = [sol for sol in diop_DN(D, 1) if sol[1] > 0][:1]
        sol = pell_primitive(D)
        assert (sol.l0, sol.k0) == (l, k)


@pytest.mark.parametrize("D", [-3, 0, 1])
def test_domain(D):
    with pytest.raises(DomainError):
        pell_primitive(D)


@pytest.mark.parametrize("D", [4, 9, 400])
def test_square_coefficient(D):
    with pytest.raises(PellError, match="degenerate"):
        pell_primitive(D)


def test_solution_validates():
    with pytest.raises(PellError):
        PellSolution(4, 1, 8)


def test_lower_bound():
    assert pell_lower_bound_l0(2, 13) == Fraction(53)
    for r in range(1, 20):
        for d in range(1, 20):
            D = 2 * r * d
            if int(D**0.5) ** 2 == D:
                continue
            assert pell_primitive(D).l0 ** 2 >= pell_lower_bound_l0(r, d)
    with pytest.raises(DomainError):
        pell_lower_bound_l0(0, 3)
