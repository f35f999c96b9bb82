"""Exact arithmetic substrate: integer roots, quadratic surds, continued fractions.

Rationals are :class:`fractions.Fraction`. A :class:`Surd` is ``u + v*sqrt(m)``
with rational ``u, v`` and a square-free radicand ``m``; comparisons between
surds are decided by sign analysis and at most two squarings, never by
floating point.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Union

from .errors import DomainError, UnsupportedComparison

Exact = Union[int, Fraction, "Surd"]


class Ordering(enum.IntEnum):
    LESS = -1
    EQUAL = 0
    GREATER = 1


def isqrt(n: int) -> tuple[int, bool]:
    """Return ``(floor(sqrt(n)), is_perfect_square)``."""
    if n < 0:
        raise DomainError(f"isqrt of negative integer {n}")
    root = math.isqrt(n)
    return root, root * root == n


def is_square(n: int) -> bool:
    return n >= 0 and isqrt(n)[1]


def square_free_decomposition(m: int) -> tuple[int, int]:
    """Split ``m = f**2 * core`` with ``core`` square-free.

    Trial division runs only up to the cube root of the shrinking cofactor;
    what is left then has at most two prime factors, so it carries a square
    factor exactly when it is itself a perfect square.
    """
    if m < 0:
        raise DomainError(f"radicand must be non-negative, got {m}")
    if m == 0:
        return 0, 1
    f, core, n = 1, 1, m
    p = 2
    while p * p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            f *= p ** (e // 2)
            if e % 2:
                core *= p
        p += 1 if p == 2 else 2
    root, exact = isqrt(n)
    if exact:
        f *= root
    else:
        core *= n
    return f, core


def _sign(x: Fraction | int) -> int:
    return (x > 0) - (x < 0)


def _sign_one_radical(a: Fraction, b: Fraction, m: int) -> int:
    """Sign of ``a + b*sqrt(m)`` for square-free ``m`` (or ``b == 0``)."""
    if b == 0 or m == 0:
        return _sign(a)
    sa, sb = _sign(a), _sign(b)
    if sa == 0:
        return sb
    if sa == sb:
        return sa
    # opposite signs: the term with the larger square wins
    lhs, rhs = a * a, b * b * m
    if lhs > rhs:
        return sa
    if lhs < rhs:
        return sb
    return 0


def radical_sign(rational: Fraction | int, radicals: dict[int, Fraction | int]) -> int:
    """Sign of ``rational + sum(coeff * sqrt(m))`` over at most two radicals.

    Radicands need not be square-free; they are normalized first. More than
    two distinct irrational radicals raise :class:`UnsupportedComparison`.
    """
    rat = Fraction(rational)
    terms: dict[int, Fraction] = {}
    for m, coeff in radicals.items():
        coeff = Fraction(coeff)
        if coeff == 0:
            continue
        f, core = square_free_decomposition(m)
        if f == 0:
            continue
        if core == 1:
            rat += coeff * f
            continue
        terms[core] = terms.get(core, Fraction(0)) + coeff * f
    terms = {m: c for m, c in terms.items() if c != 0}
    if len(terms) > 2:
        raise UnsupportedComparison(
            f"sign of an expression with {len(terms)} distinct radicals"
        )
    if not terms:
        return _sign(rat)
    if len(terms) == 1:
        ((m, b),) = terms.items()
        return _sign_one_radical(rat, b, m)
    (m, a), (n, b) = sorted(terms.items())
    # sign(a*sqrt(m) - w) with w = -rat - b*sqrt(n)
    s_left = _sign(a)
    s_right = _sign_one_radical(-rat, -b, n)
    if s_left != s_right:
        return 1 if s_left > s_right else -1
    # same nonzero sign s: compare squares a^2 m and w^2 = rat^2 + b^2 n + 2 rat b sqrt(n)
    t = _sign_one_radical(a * a * m - rat * rat - b * b * n, -2 * rat * b, n)
    return s_left * t


@dataclass(frozen=True, eq=False)
class Surd:
    """The real number ``u + v*sqrt(m)`` in normal form.

    ``m`` is square-free; a rational value is stored with ``v == 0, m == 1``.
    """

    u: Fraction
    v: Fraction = Fraction(0)
    m: int = 1

    def __post_init__(self) -> None:
        u, v, m = Fraction(self.u), Fraction(self.v), int(self.m)
        if m < 0:
            raise DomainError(f"negative radicand {m}")
        f, core = square_free_decomposition(m)
        v *= f
        if core == 1 or v == 0:
            u, v, core = u + v, Fraction(0), 1
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "v", v)
        object.__setattr__(self, "m", core)

    # -- constructors -------------------------------------------------------
    @classmethod
    def of(cls, x: Exact) -> "Surd":
        if isinstance(x, Surd):
            return x
        if isinstance(x, bool) or not isinstance(x, (int, Fraction)):
            raise TypeError(f"cannot build an exact surd from {type(x).__name__}")
        return cls(Fraction(x))

    @classmethod
    def sqrt(cls, q: int | Fraction) -> "Surd":
        """``sqrt(q)`` for a non-negative rational ``q``."""
        q = Fraction(q)
        if q < 0:
            raise DomainError(f"sqrt of negative rational {q}")
        # sqrt(p/n) = sqrt(p*n)/n
        return cls(Fraction(0), Fraction(1, q.denominator), q.numerator * q.denominator)

    # -- queries ------------------------------------------------------------
    @property
    def is_rational(self) -> bool:
        return self.v == 0

    def as_fraction(self) -> Fraction:
        if not self.is_rational:
            raise DomainError(f"{self} is irrational")
        return self.u

    def sign(self) -> int:
        return _sign_one_radical(self.u, self.v, self.m)

    def floor(self) -> int:
        """Largest integer not exceeding the value."""
        if self.is_rational:
            return math.floor(self.u)
        # v*sqrt(m) = sign(v) * sqrt(v^2 m)
        w2 = self.v * self.v * self.m
        root = math.isqrt(w2.numerator // w2.denominator)
        guess = math.floor(self.u) + (root if self.v > 0 else -root - 1) - 1
        while compare(Surd(guess + 1), self) <= 0:
            guess += 1
        while compare(Surd(guess), self) > 0:
            guess -= 1
        return guess

    # -- arithmetic ---------------------------------------------------------
    def __neg__(self) -> "Surd":
        return Surd(-self.u, -self.v, self.m)

    def __add__(self, other: Exact) -> "Surd":
        o = _coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if self.is_rational or o.is_rational or self.m == o.m:
            m = o.m if self.is_rational else self.m
            return Surd(self.u + o.u, self.v + o.v, m)
        raise UnsupportedComparison(f"sum {self} + {o} has two distinct radicals")

    __radd__ = __add__

    def __sub__(self, other: Exact) -> "Surd":
        o = _coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other: Exact) -> "Surd":
        return (-self) + other

    def __mul__(self, other: Exact) -> "Surd":
        o = _coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if o.is_rational:
            return Surd(self.u * o.u, self.v * o.u, self.m)
        if self.is_rational:
            return o * self
        if self.m == o.m:
            return Surd(self.u * o.u + self.v * o.v * self.m, self.u * o.v + self.v * o.u, self.m)
        if self.u == 0 and o.u == 0:
            return Surd(Fraction(0), self.v * o.v, self.m * o.m)
        raise UnsupportedComparison(f"product {self} * {o} is not a single-radical surd")

    __rmul__ = __mul__

    def __truediv__(self, other: int | Fraction) -> "Surd":
        if isinstance(other, Surd):
            other = other.as_fraction()
        if other == 0:
            raise ZeroDivisionError("surd division by zero")
        return self * (1 / Fraction(other))

    # -- ordering -----------------------------------------------------------
    def __eq__(self, other: object) -> bool:
        o = _coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return (self.u, self.v, self.m) == (o.u, o.v, o.m)

    def __hash__(self) -> int:
        if self.is_rational:
            return hash(self.u)
        return hash((self.u, self.v, self.m))

    def __lt__(self, other: Exact) -> bool:
        return compare(self, other) < 0

    def __le__(self, other: Exact) -> bool:
        return compare(self, other) <= 0

    def __gt__(self, other: Exact) -> bool:
        return compare(self, other) > 0

    def __ge__(self, other: Exact) -> bool:
        return compare(self, other) >= 0

    def __str__(self) -> str:
        if self.is_rational:
            return str(self.u)
        rad = f"sqrt({self.m})"
        if self.v == 1:
            tail = rad
        elif self.v == -1:
            tail = f"-{rad}"
        else:
            tail = f"{self.v}*{rad}"
        if self.u == 0:
            return tail
        if tail.startswith("-"):
            return f"{self.u} - {tail[1:]}"
        return f"{self.u} + {tail}"

    def __repr__(self) -> str:
        return f"Surd({self})"


def _coerce(x: object) -> "Surd":
    if isinstance(x, Surd):
        return x
    if isinstance(x, (int, Fraction)) and not isinstance(x, bool):
        return Surd(Fraction(x))
    return NotImplemented  # type: ignore[return-value]


def compare(a: Exact, b: Exact) -> Ordering:
    """Exact ordering of two surds (or rationals)."""
    sa, sb = Surd.of(a), Surd.of(b)
    radicals: dict[int, Fraction] = {}
    if not sa.is_rational:
        radicals[sa.m] = sa.v
    if not sb.is_rational:
        radicals[sb.m] = radicals.get(sb.m, Fraction(0)) - sb.v
    return Ordering(radical_sign(sa.u - sb.u, radicals))


surd_compare = compare


def minimum(values: Iterable[Exact]) -> Surd:
    items = [Surd.of(v) for v in values]
    if not items:
        raise DomainError("minimum of an empty collection")
    best = items[0]
    for item in items[1:]:
        if compare(item, best) < 0:
            best = item
    return best


RELATIONS = ("<", "<=", ">", ">=", "==", "!=")


def holds(lhs: Exact, relation: str, rhs: Exact) -> bool:
    """Evaluate ``lhs <relation> rhs`` exactly."""
    order = compare(lhs, rhs)
    if relation == "<":
        return order < 0
    if relation == "<=":
        return order <= 0
    if relation == ">":
        return order > 0
    if relation == ">=":
        return order >= 0
    if relation == "==":
        return order == 0
    if relation == "!=":
        return order != 0
    raise DomainError(f"unknown relation {relation!r}")


@dataclass(frozen=True)
class ContinuedFraction:
    """Periodic expansion ``sqrt(m) = [a0; period, period, ...]``."""

    m: int
    a0: int
    period: tuple[int, ...]

    def terms(self, periods: int = 1) -> Iterator[int]:
        yield self.a0
        for _ in range(periods):
            yield from self.period


def cfrac_sqrt(m: int) -> ContinuedFraction:
    """Continued fraction of ``sqrt(m)`` for non-square ``m >= 2``.

    The period ends when the complete-quotient state ``(P, Q)`` first
    returns to its value after ``a0``.
    """
    if m < 2:
        raise DomainError(f"cfrac_sqrt needs m >= 2, got {m}")
    a0, exact = isqrt(m)
    if exact:
        raise DomainError(f"{m} is a perfect square")
    p, q = a0, m - a0 * a0
    start = (p, q)
    period = []
    while True:
        a = (a0 + p) // q
        period.append(a)
        p = a * q - p
        q = (m - p * p) // q
        if (p, q) == start:
            break
    return ContinuedFraction(m, a0, tuple(period))


def convergents(terms: Iterable[int]) -> Iterator[tuple[int, int]]:
    """Yield the convergents ``(h_i, k_i)`` of a simple continued fraction."""
    h2, h1 = 0, 1
    k2, k1 = 1, 0
    for a in terms:
        h2, h1 = h1, a * h1 + h2
        k2, k1 = k1, a * k1 + k2
        yield h1, k1
