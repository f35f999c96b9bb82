"""Intersection arithmetic on the blow-up ``Bl_r(S)``.

Two models share one class type. In the abelian model ``L^2 = 2d``; in the
K-trivial model the context integer *is* ``L^2``. A class
``a*pi^*L - sum(m_i E_i)`` pairs as

    (a, m) . (b, n) = a*b*L^2 - sum(m_i * n_i)

Numeric profiles ``(ell, delta, m)`` forget the curve on ``S`` and keep only
``L.D_S``, ``D_S^2`` and the multiplicities.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal, NamedTuple, Sequence, Union

from .errors import DomainError, LatticeError

Model = Literal["abelian", "ktrivial"]

# minimal elliptic degree of a surface without elliptic curves (e.g. simple abelian)
SIMPLE = "simple"
EllipticDegree = Union[int, Literal["simple"]]


def elliptic_degree_allows(ell: int, e_min: "EllipticDegree") -> bool:
    """Can an elliptic curve (or union of them) have ``L``-degree ``ell``?"""
    return e_min != SIMPLE and ell >= e_min


@dataclass(frozen=True)
class DivisorClass:
    a: int
    m: tuple[int, ...]
    d: int
    model: Model = "abelian"

    def __post_init__(self) -> None:
        object.__setattr__(self, "m", tuple(int(x) for x in self.m))
        if self.d < 1:
            raise DomainError(f"context degree must be positive, got {self.d}")
        if self.model not in ("abelian", "ktrivial"):
            raise DomainError(f"unknown model {self.model!r}")

    @property
    def r(self) -> int:
        return len(self.m)

    @property
    def L2(self) -> int:
        return 2 * self.d if self.model == "abelian" else self.d

    def _check(self, other: "DivisorClass") -> None:
        if (self.r, self.d, self.model) != (other.r, other.d, other.model):
            raise LatticeError(
                f"classes live on different lattices: "
                f"(r={self.r}, d={self.d}, {self.model}) vs (r={other.r}, d={other.d}, {other.model})"
            )

    def __add__(self, other: "DivisorClass") -> "DivisorClass":
        self._check(other)
        return DivisorClass(self.a + other.a, tuple(x + y for x, y in zip(self.m, other.m)), self.d, self.model)

    def __neg__(self) -> "DivisorClass":
        return DivisorClass(-self.a, tuple(-x for x in self.m), self.d, self.model)

    def __sub__(self, other: "DivisorClass") -> "DivisorClass":
        return self + (-other)

    def __rmul__(self, n: int) -> "DivisorClass":
        return DivisorClass(n * self.a, tuple(n * x for x in self.m), self.d, self.model)


def pullback(a: int, r: int, d: int, model: Model = "abelian") -> DivisorClass:
    """``a * pi^*L``."""
    return DivisorClass(a, (0,) * r, d, model)


def exceptional(j: int, r: int, d: int, model: Model = "abelian") -> DivisorClass:
    """The exceptional curve ``E_j`` (0-based index)."""
    if not 0 <= j < r:
        raise DomainError(f"exceptional index {j} out of range for r={r}")
    m = [0] * r
    m[j] = -1
    return DivisorClass(0, tuple(m), d, model)


def pair(D1: DivisorClass, D2: DivisorClass) -> int:
    D1._check(D2)
    return D1.a * D2.a * D1.L2 - sum(x * y for x, y in zip(D1.m, D2.m))


def self_intersection(D: DivisorClass) -> int:
    return D.a * D.a * D.L2 - sum(x * x for x in D.m)


@dataclass(frozen=True)
class BundleQuery:
    """``M = c*pi^*L - alpha*sum(E_i)`` on ``r`` points, target order ``k``."""

    c: int
    alpha: int
    k: int
    r: int

    def __post_init__(self) -> None:
        if self.c < 1 or self.alpha < 0 or self.k < 0 or self.r < 1:
            raise DomainError(
                f"invalid query c={self.c}, alpha={self.alpha}, k={self.k}, r={self.r}"
            )


def bundle_class(q: BundleQuery, d: int, model: Model = "abelian") -> DivisorClass:
    return DivisorClass(q.c, (q.alpha,) * q.r, d, model)


def adjoint_twist(q: BundleQuery, d: int, model: Model = "abelian") -> DivisorClass:
    """``N = M - K = c*pi^*L - (alpha+1)*sum(E_i)``.

    Holds in both models: ``K_S`` is numerically trivial, so the canonical
    class of the blow-up is ``sum(E_i)``.
    """
    return DivisorClass(q.c, (q.alpha + 1,) * q.r, d, model)


@dataclass(frozen=True)
class NumericProfile:
    ell: int
    delta: int
    m: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "m", tuple(int(x) for x in self.m))
        if self.delta < 0:
            raise DomainError(f"delta = D_S^2 must be >= 0 on an abelian surface, got {self.delta}")
        if any(x < 0 for x in self.m):
            raise DomainError("profile multiplicities must be non-negative")

    @property
    def beta(self) -> int:
        return sum(1 for x in self.m if x)

    @property
    def s(self) -> int:
        return sum(self.m)

    @property
    def q(self) -> int:
        return sum(x * x for x in self.m)


class Feasibility(NamedTuple):
    feasible: bool
    rule: str | None = None
    detail: str = ""


def profile_feasible(p: NumericProfile, d: int, e_min: EllipticDegree) -> Feasibility:
    """Hodge index, adjunction parity and elliptic exclusion, in that order.

    ``e_min`` is the minimal ``L``-degree of an elliptic curve on ``S``, or
    :data:`SIMPLE`. A profile with ``delta == 0`` is a union of elliptic
    curves, hence needs ``ell >= e_min``.
    """
    if p.ell < 1:
        return Feasibility(False, "R2-hodge", f"ell = {p.ell} < 1 for a nonzero effective divisor")
    if p.ell * p.ell < 2 * d * p.delta:
        return Feasibility(False, "R2-hodge", f"ell^2 = {p.ell * p.ell} < 2d*delta = {2 * d * p.delta}")
    if p.delta % 2:
        return Feasibility(False, "R3-parity", f"delta = {p.delta} is odd")
    if p.delta == 0 and not elliptic_degree_allows(p.ell, e_min):
        return Feasibility(False, "R4-elliptic-excluded", f"ell = {p.ell} < e_min = {e_min}")
    return Feasibility(True)


def multiplicity_sums(m: Sequence[int]) -> tuple[int, int]:
    return sum(m), sum(x * x for x in m)
