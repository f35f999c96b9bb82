"""Certified lower bounds for multi-point Seshadri constants on surfaces.

Every bound is returned as an exact :class:`~kvacert.exactmath.Surd` together
with the hypotheses it consumed. The "points are general" hypothesis is never
verified, only recorded.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError, HypothesisError
from .exactmath import Surd, isqrt, is_square, minimum
from .lattice import SIMPLE, EllipticDegree
from .pell import PellSolution, pell_primitive

PROVENANCES = ("pell-rho1", "kuchle", "bauer-szemberg", "szemberg-floor", "user-asserted-eps0")


@dataclass(frozen=True)
class SeshadriBound:
    value: Surd
    provenance: str
    assumptions: tuple[str, ...] = ()
    relaxed: Surd | None = None
    pell: PellSolution | None = None

    def __post_init__(self) -> None:
        if self.provenance not in PROVENANCES:
            raise DomainError(f"unknown provenance {self.provenance!r}")
        if self.value.sign() < 0:
            raise DomainError("a Seshadri lower bound is non-negative")


def _positive(name: str, value: int) -> None:
    if value < 1:
        raise DomainError(f"{name} must be >= 1, got {value}")


def bound_pell_rho1(d: int, r: int) -> SeshadriBound:
    """Picard rank one abelian surface of type ``(1, d)``, ``r`` general points.

    ``sqrt(2d/r)`` when that is rational, otherwise ``2d*k0/l0`` from the
    fundamental solution of ``l^2 - 2rd k^2 = 1``. ``relaxed`` carries the
    weaker ``2d/sqrt(1 + 2rd)`` that follows from ``l0^2 >= 1 + 2rd`` alone.
    """
    _positive("d", d)
    _positive("r", r)
    D = 2 * r * d
    relaxed = Surd.sqrt(Fraction(4 * d * d, 1 + D))
    assumptions = ("picard-rank-one", "points-general")
    if is_square(D):
        return SeshadriBound(Surd.sqrt(Fraction(2 * d, r)), "pell-rho1", assumptions, relaxed)
    sol = pell_primitive(D)
    value = Surd.of(Fraction(2 * d * sol.k0, sol.l0))
    return SeshadriBound(value, "pell-rho1", assumptions, relaxed, sol)


def bound_kuchle(L2: int, r: int, eps1: Surd | int | Fraction) -> SeshadriBound:
    """``min{eps(L;1), sqrt(L^2)/2, sqrt(L^2 (r-1))/r}`` on a surface, ``r >= 2``."""
    _positive("L2", L2)
    if r < 2:
        raise HypothesisError(f"the multi-point bound needs r >= 2, got r={r}")
    value = minimum([Surd.of(eps1), Surd.sqrt(L2) / 2, Surd.sqrt(L2 * (r - 1)) / r])
    return SeshadriBound(value, "kuchle", ("points-general",))


def bound_bauer_szemberg(d: int, eps0: EllipticDegree) -> SeshadriBound:
    """Single-point bound ``min{eps0, (sqrt 7 / 2) sqrt d}`` on an abelian surface.

    ``eps0`` is the asserted minimal elliptic degree; :data:`SIMPLE` drops it.
    """
    _positive("d", d)
    generic = Surd.sqrt(7 * d) / 2
    if eps0 == SIMPLE:
        return SeshadriBound(generic, "bauer-szemberg", ("no-elliptic-curves",))
    _positive("eps0", eps0)
    return SeshadriBound(minimum([Surd.of(eps0), generic]), "bauer-szemberg", ("user-asserted-eps0",))


def bound_szemberg_floor(L2: int, r: int) -> SeshadriBound:
    """``floor(sqrt(L^2 / r))`` for Picard rank one surfaces with trivial canonical class."""
    _positive("L2", L2)
    _positive("r", r)
    # floor(sqrt(x)) == isqrt(floor(x)) for rational x >= 0
    root, _ = isqrt(L2 // r)
    return SeshadriBound(Surd.of(root), "szemberg-floor", ("picard-rank-one", "k-trivial", "points-general"))


def user_asserted_eps1(value: Surd | int | Fraction) -> SeshadriBound:
    return SeshadriBound(Surd.of(value), "user-asserted-eps0", ("user-asserted-eps1",))


def abelian_multi_point(d: int, r: int, e_min: EllipticDegree) -> SeshadriBound:
    """Lower bound for ``eps(L; r)`` on any abelian surface of type ``(1, d)``.

    Chains the single-point bound into the multi-point one; for ``r == 1``
    the single-point bound is returned unchanged.
    """
    one = bound_bauer_szemberg(d, e_min)
    if r == 1:
        return one
    multi = bound_kuchle(2 * d, r, one.value)
    return SeshadriBound(multi.value, "kuchle", one.assumptions + multi.assumptions)


def universal_upper_bound(L2: int, r: int) -> Surd:
    """``sqrt(L^2 / r)``, which no Seshadri constant at ``r`` points exceeds."""
    return Surd.sqrt(Fraction(L2, r))
