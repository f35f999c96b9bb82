"""Fundamental solutions of ``l**2 - D*k**2 = 1``."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError, PellError
from .exactmath import cfrac_sqrt, convergents, is_square


@dataclass(frozen=True)
class PellSolution:
    l0: int
    k0: int
    D: int

    def __post_init__(self) -> None:
        if self.l0 * self.l0 - self.D * self.k0 * self.k0 != 1:
            raise PellError(f"({self.l0}, {self.k0}) does not solve l^2 - {self.D} k^2 = 1")


def pell_primitive(D: int) -> PellSolution:
    """Smallest positive solution of ``l^2 - D k^2 = 1``.

    Taken from the convergent closing the first period of ``sqrt(D)`` when the
    period length is even, or the second period when it is odd.
    """
    if D < 2:
        raise DomainError(f"Pell coefficient must be >= 2, got {D}")
    if is_square(D):
        raise PellError(f"equation degenerate: D = {D} is a perfect square")
    cf = cfrac_sqrt(D)
    p = len(cf.period)
    index = p - 1 if p % 2 == 0 else 2 * p - 1
    for i, (h, k) in enumerate(convergents(cf.terms(periods=2))):
        if i == index:
            return PellSolution(h, k, D)
    raise AssertionError("unreachable: two periods always contain the index")


def pell_lower_bound_l0(r: int, d: int) -> Fraction:
    """Lower bound ``1 + 2rd`` for ``l0**2`` in ``l^2 - 2rd k^2 = 1`` (uses ``k0 >= 1``)."""
    if r < 1 or d < 1:
        raise DomainError(f"need r >= 1 and d >= 1, got r={r}, d={d}")
    return Fraction(1 + 2 * r * d)
