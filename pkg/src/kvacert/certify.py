"""Theorem gates for k-very ampleness of ``M = c*pi^*L - alpha*sum(E_i)``.

Each gate transcribes one sufficient criterion into a sequence of exact
inequality checks. A gate stops at the first failing check, so a certificate
trace always ends either with a failure (not certified) or with the combined
order check (certified). Strict and non-strict inequalities follow each
criterion literally.

Gates, in dispatch order:

    G1  Picard rank one, global generation (k = 0)
    G2  Picard rank one, k-very ampleness (k >= 1)
    G3  Picard rank one, numerically trivial canonical class
    G4  any Picard rank, global generation, no low-degree elliptic curves
    G5  any Picard rank, very ampleness, no low-degree elliptic curves
    G6  any Picard rank, k-very ampleness, no low-degree elliptic curves
    G7  G4/G5 with the elliptic hypothesis discharged by a corollary
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Any, Iterable, Literal

from .errors import DomainError, HypothesisError
from .exactmath import Surd, holds
from .lattice import (
    SIMPLE,
    BundleQuery,
    EllipticDegree,
    bundle_class,
    exceptional,
    pair,
)
from .seshadri import abelian_multi_point, bound_pell_rho1, bound_szemberg_floor

GATE_ORDER = ("G1", "G2", "G3", "G4", "G5", "G6", "G7")


class Verdict(str, enum.Enum):
    CERTIFIED = "certified"
    REFUTED = "refuted"
    NOT_CERTIFIED = "not-certified"


EXIT_CODES = {Verdict.CERTIFIED: 0, Verdict.NOT_CERTIFIED: 1, Verdict.REFUTED: 2}


@dataclass(frozen=True)
class SurfaceSpec:
    """The polarized surface and the hypotheses asserted about it.

    ``degree`` is ``d`` for an abelian surface of type ``(1, d)`` and ``L^2``
    for a K-trivial surface. ``min_elliptic_degree`` is ``None`` when nothing
    is asserted.
    """

    kind: Literal["abelian", "ktrivial"]
    degree: int
    picard_rank_one: bool = False
    min_elliptic_degree: EllipticDegree | None = None
    very_general: bool = False
    eps1: Surd | None = None

    def __post_init__(self) -> None:
        if self.kind not in ("abelian", "ktrivial"):
            raise DomainError(f"unknown surface kind {self.kind!r}")
        if self.degree < 1:
            raise DomainError(f"surface degree must be >= 1, got {self.degree}")
        e = self.min_elliptic_degree
        if e is not None and e != SIMPLE and (not isinstance(e, int) or e < 1):
            raise DomainError(f"min_elliptic_degree must be >= 1 or 'simple', got {e!r}")
        if self.eps1 is not None:
            object.__setattr__(self, "eps1", Surd.of(self.eps1))

    @classmethod
    def abelian(cls, d: int, **kwargs: Any) -> "SurfaceSpec":
        return cls("abelian", d, **kwargs)

    @classmethod
    def ktrivial(cls, L2: int, **kwargs: Any) -> "SurfaceSpec":
        kwargs.setdefault("picard_rank_one", True)
        return cls("ktrivial", L2, **kwargs)

    @property
    def d(self) -> int:
        if self.kind != "abelian":
            raise HypothesisError("d is only defined for abelian surfaces")
        return self.degree

    @property
    def L2(self) -> int:
        return 2 * self.degree if self.kind == "abelian" else self.degree


@dataclass(frozen=True)
class Step:
    description: str
    lhs: Surd
    relation: str
    rhs: Surd
    anchor: str
    gate: str = ""

    @property
    def holds(self) -> bool:
        return holds(self.lhs, self.relation, self.rhs)


@dataclass(frozen=True)
class Component:
    multiplicity: int
    alpha: int
    order: int


@dataclass(frozen=True)
class Decomposition:
    c: int
    alpha: int
    k: int
    alpha_floor: int
    alpha_ceil: int
    alpha_rem: int
    k_floor: int
    k_ceil: int
    k_rem: int
    branch: str
    components: tuple[Component, ...]
    combined: int


@dataclass(frozen=True)
class Certificate:
    verdict: Verdict
    k: int
    gate: str
    trace: tuple[Step, ...]
    assumptions: tuple[str, ...] = ()
    decomposition: Decomposition | None = None
    reasons: tuple[tuple[str, str], ...] = ()

    @property
    def exit_code(self) -> int:
        return EXIT_CODES[self.verdict]


def ceil_div(a: int, b: int) -> int:
    return -(-a // b)


def decompose(c: int, alpha: int) -> tuple[int, int, int]:
    """``(floor(alpha/c), ceil(alpha/c), alpha')`` with ``alpha = c*floor + alpha'``.

    Then ``alpha == (c - alpha')*floor + alpha'*ceil``.
    """
    if c < 1:
        raise DomainError(f"c must be >= 1, got {c}")
    if alpha < 0:
        raise DomainError(f"alpha must be >= 0, got {alpha}")
    return alpha // c, ceil_div(alpha, c), alpha % c


def combine_htt(orders: Iterable[tuple[int, int]]) -> int:
    """Order of k-very ampleness of a tensor product of k_i-very ample bundles.

    ``orders`` lists ``(multiplicity, order)`` pairs; the product of
    ``multiplicity`` copies of each factor is ``sum(multiplicity * order)``-very ample.
    """
    total = 0
    for mult, order in orders:
        if mult < 0 or order < 0:
            raise DomainError(f"negative multiplicity or order in {(mult, order)}")
        total += mult * order
    return total


def split_components(c: int, alpha: int, k: int) -> Decomposition:
    """Write ``M`` as a tensor product of ``c = 1`` bundles and assign orders.

    Either ``alpha' >= k'`` and the floor/ceil parts carry ``floor(k/c)`` and
    ``ceil(k/c)``, or ``floor(alpha/c) >= floor(k/c) + 1`` and both parts
    carry ``ceil(k/c)``.
    """
    af, ac, ar = decompose(c, alpha)
    kf, kc, kr = decompose(c, k)
    if c == 1:
        branch = "c=1"
        parts = [(1, alpha, k)]
    elif ar >= kr:
        branch = "alpha'>=k'"
        parts = [(c - ar, af, kf), (ar, ac, kc)]
    else:
        branch = "floor(alpha/c)>=floor(k/c)+1"
        parts = [(c - ar, af, kc), (ar, ac, kc)]
    components = tuple(Component(m, a, o) for m, a, o in parts if m > 0)
    combined = combine_htt((x.multiplicity, x.order) for x in components)
    return Decomposition(c, alpha, k, af, ac, ar, kf, kc, kr, branch, components, combined)


def split_very_ample(c: int, alpha: int) -> Decomposition:
    """Order split used for very ampleness on arbitrary Picard rank (``alpha >= 1``)."""
    af, ac, ar = decompose(c, alpha)
    if c == 1:
        parts, branch = [(1, alpha, 1)], "c=1"
    elif alpha >= c:
        parts, branch = [(c - ar, af, 1), (ar, ac, 1)], "alpha>=c"
    else:
        parts, branch = [(c - ar, af, 0), (ar, ac, 1)], "1<=alpha<c"
    components = tuple(Component(m, a, o) for m, a, o in parts if m > 0)
    combined = combine_htt((x.multiplicity, x.order) for x in components)
    return Decomposition(c, alpha, 1, af, ac, ar, 0, 1, 1 % c, branch, components, combined)


class _Trace:
    """Accumulates steps for one gate; ``ok`` turns false at the first failure."""

    def __init__(self, gate: str) -> None:
        self.gate = gate
        self.steps: list[Step] = []
        self.failure: str | None = None

    @property
    def ok(self) -> bool:
        return self.failure is None

    def check(self, description: str, lhs: Any, relation: str, rhs: Any, anchor: str) -> bool:
        if not self.ok:
            return False
        step = Step(description, Surd.of(lhs), relation, Surd.of(rhs), anchor, self.gate)
        self.steps.append(step)
        if not step.holds:
            self.failure = description
        return step.holds

    def fail(self, reason: str) -> None:
        if self.ok:
            self.failure = reason


def _necessity(trace: _Trace, s: SurfaceSpec, q: BundleQuery) -> bool:
    """``M.E_j = alpha`` for every ``j``; k-very ampleness forces ``alpha >= k``."""
    model = "abelian" if s.kind == "abelian" else "ktrivial"
    M = bundle_class(q, s.degree, model)
    meets = pair(M, exceptional(0, q.r, s.degree, model))
    trace.check("M.E_j = alpha", meets, "==", q.alpha, "necessity")
    return trace.check("M.E_j = alpha >= k", meets, ">=", q.k, "necessity")


def _refuted(s: SurfaceSpec, q: BundleQuery) -> Certificate:
    trace = _Trace("necessity")
    _necessity(trace, s, q)
    return Certificate(
        Verdict.REFUTED, q.k, "necessity", tuple(trace.steps), (),
        reasons=(("necessity", "alpha < k: M.E_j = alpha cannot reach order k"),),
    )


def _finish(trace: _Trace, q: BundleQuery, assumptions: Iterable[str],
            dec: Decomposition | None) -> Certificate:
    assumptions = tuple(dict.fromkeys(assumptions))
    if trace.ok:
        return Certificate(Verdict.CERTIFIED, q.k, trace.gate, tuple(trace.steps), assumptions, dec)
    return Certificate(
        Verdict.NOT_CERTIFIED, q.k, trace.gate, tuple(trace.steps), assumptions, dec,
        reasons=((trace.gate, trace.failure or "failed"),),
    )


def _decomposition_steps(trace: _Trace, dec: Decomposition) -> None:
    if dec.c == 1:
        return
    trace.check("alpha = (c - alpha')*floor(alpha/c) + alpha'*ceil(alpha/c)",
                (dec.c - dec.alpha_rem) * dec.alpha_floor + dec.alpha_rem * dec.alpha_ceil,
                "==", dec.alpha, "tensor-decomposition")
    if dec.branch == "alpha'>=k'":
        trace.check("alpha' >= k'", dec.alpha_rem, ">=", dec.k_rem, "tensor-decomposition")
    elif dec.branch == "floor(alpha/c)>=floor(k/c)+1":
        trace.check("floor(alpha/c) >= floor(k/c) + 1", dec.alpha_floor, ">=", dec.k_floor + 1,
                    "tensor-decomposition")
    elif dec.branch == "alpha>=c":
        trace.check("alpha >= c, so floor(alpha/c) >= 1", dec.alpha_floor, ">=", 1, "tensor-decomposition")
    elif dec.branch == "1<=alpha<c":
        trace.check("1 <= alpha < c, so alpha' > 0", dec.alpha_rem, ">", 0, "tensor-decomposition")


def _combine_step(trace: _Trace, dec: Decomposition) -> None:
    if dec.c == 1:
        return
    trace.check("tensor product order sum(mult_i * k_i) >= k", dec.combined, ">=", dec.k, "tensor-product")


# ---------------------------------------------------------------------------
# G1 / G2: abelian surfaces of Picard rank one


def _rho1_component(trace: _Trace, d: int, r: int, alpha: int, k: int) -> None:
    tag = f"[alpha={alpha}, k={k}] "
    trace.check(tag + "alpha >= k", alpha, ">=", k, "rho1-theorem")
    trace.check(tag + "r <= (2d - (4k + 5)) / (alpha + 1)^2", r, "<=",
                Fraction(2 * d - (4 * k + 5), (alpha + 1) ** 2), "rho1-theorem")
    trace.check(tag + "d - k > 0", d - k, ">", 0, "ampleness-threshold")
    if not trace.ok:
        return
    sesh = bound_pell_rho1(d, r)
    trace.check(tag + "eps(L;r) >= Pell bound >= 2d/sqrt(1 + 2rd)", sesh.value, ">=", sesh.relaxed,
                "rho1-seshadri-pell")
    trace.check(tag + "2d/sqrt(1 + 2rd) > d(alpha + 1)/(d - k)", sesh.relaxed, ">",
                Fraction(d * (alpha + 1), d - k), "ampleness-threshold")
    trace.check(tag + "N^2 = 2d - r(alpha + 1)^2 >= 4k + 5", 2 * d - r * (alpha + 1) ** 2, ">=",
                4 * k + 5, "beltrametti-sommese" if k else "reider")


def gate_rho1_kva(s: SurfaceSpec, q: BundleQuery) -> Certificate:
    if s.kind != "abelian":
        raise HypothesisError("the Picard rank one abelian gate needs an abelian surface")
    if not s.picard_rank_one:
        raise HypothesisError("the Picard rank one abelian gate needs picard_rank_one")
    if q.alpha < q.k:
        return _refuted(s, q)
    gate = "G1" if q.k == 0 else "G2"
    trace = _Trace(gate)
    _necessity(trace, s, q)
    d, c = s.d, q.c
    ac, kc = ceil_div(q.alpha, c), ceil_div(q.k, c)
    trace.check("r >= 1", q.r, ">=", 1, "rho1-theorem")
    trace.check("r <= (2d - (4*ceil(k/c) + 5)) / (ceil(alpha/c) + 1)^2", q.r, "<=",
                Fraction(2 * d - (4 * kc + 5), (ac + 1) ** 2), "rho1-theorem")
    dec = split_components(c, q.alpha, q.k)
    _decomposition_steps(trace, dec)
    for comp in dec.components:
        _rho1_component(trace, d, q.r, comp.alpha, comp.order)
    _combine_step(trace, dec)
    return _finish(trace, q, ("picard-rank-one", "points-general"), dec)


# ---------------------------------------------------------------------------
# G3: Picard rank one, numerically trivial canonical class


def _ktrivial_component(trace: _Trace, l: int, r: int, alpha: int, k: int) -> None:
    tag = f"[alpha={alpha}, k={k}] "
    trace.check(tag + "alpha >= k", alpha, ">=", k, "ktrivial-proposition")
    sesh = bound_szemberg_floor(l, r)
    trace.check(tag + "eps(L;r) >= floor(sqrt(l/r)) >= alpha + 2", sesh.value, ">=", alpha + 2,
                "szemberg-floor")
    trace.check(tag + "l - k > 0", l - k, ">", 0, "ampleness-threshold")
    trace.check(tag + "l - k(alpha + 2) > 0", l - k * (alpha + 2), ">", 0, "ampleness-threshold")
    if not trace.ok:
        return
    trace.check(tag + "alpha + 2 > l(alpha + 1)/(l - k)", alpha + 2, ">", Fraction(l * (alpha + 1), l - k),
                "ampleness-threshold")
    trace.check(tag + "N^2 = l - r(alpha + 1)^2 >= 4k + 5", l - r * (alpha + 1) ** 2, ">=", 4 * k + 5,
                "beltrametti-sommese" if k else "reider")


def gate_ktrivial(s: SurfaceSpec, q: BundleQuery) -> Certificate:
    if s.kind != "ktrivial":
        raise HypothesisError("the K-trivial gate needs a K-trivial Picard rank one surface")
    if q.alpha < q.k:
        return _refuted(s, q)
    trace = _Trace("G3")
    _necessity(trace, s, q)
    l = s.degree
    ac = ceil_div(q.alpha, q.c)
    if not trace.check("r >= 2", q.r, ">=", 2, "ktrivial-proposition"):
        trace.failure = "out-of-hypothesis: the K-trivial criterion needs r >= 2"
    trace.check("r <= L^2 / (ceil(alpha/c) + 2)^2", q.r, "<=", Fraction(l, (ac + 2) ** 2), "ktrivial-proposition")
    dec = split_components(q.c, q.alpha, q.k)
    _decomposition_steps(trace, dec)
    for comp in dec.components:
        _ktrivial_component(trace, l, q.r, comp.alpha, comp.order)
    _combine_step(trace, dec)
    return _finish(trace, q, ("picard-rank-one", "k-trivial", "points-general"), dec)


# ---------------------------------------------------------------------------
# G4 / G5 / G6: arbitrary Picard rank


def _elliptic_threshold(alpha: int, k: int) -> int:
    """Elliptic curves of degree <= this value must be absent."""
    if k == 0:
        return alpha + 1
    if k == 1:
        return alpha + 2
    return alpha + k + 1


def _r_denominator(alpha: int, k: int) -> int:
    return alpha + 1 if k <= 1 else alpha + k + 1


def _elliptic_step(trace: _Trace, e_min: EllipticDegree, bound: int, description: str, anchor: str) -> None:
    if e_min == SIMPLE:
        return
    trace.check(description, e_min, ">", bound, anchor)


def _any_picard_component(trace: _Trace, d: int, r: int, e_min: EllipticDegree, alpha: int, k: int) -> None:
    tag = f"[alpha={alpha}, k={k}] "
    anchor = "any-picard-theorem" if k <= 1 else "kva-abelian-theorem"
    trace.check(tag + "alpha >= k", alpha, ">=", k, anchor)
    den = _r_denominator(alpha, k)
    trace.check(tag + f"r < 2d/({'alpha + 1' if k <= 1 else 'alpha + k + 1'})^2 - 2", r, "<",
                Fraction(2 * d, den * den) - 2, anchor)
    _elliptic_step(trace, e_min, _elliptic_threshold(alpha, k),
                   tag + "no elliptic curve of degree <= threshold", anchor)
    if not trace.ok:
        return
    if alpha == 0 and k == 0:
        # M = pi^*L: global generation of L itself
        trace.check(tag + "L^2 = 2d >= 6", 2 * d, ">=", 6, "any-picard-theorem")
        return
    sesh = abelian_multi_point(d, r, e_min)
    trace.check(tag + "eps(L;r) >= min{eps0, sqrt(7d)/2, sqrt(2d)/2, sqrt(2d(r-1))/r} > alpha + 1",
                sesh.value, ">", alpha + 1, "kuchle")
    n2 = 2 * d - r * (alpha + 1) ** 2
    if k == 0:
        trace.check(tag + "N^2 = 2d - r(alpha + 1)^2 >= 5", n2, ">=", 5, "reider")
    elif k == 1:
        trace.check(tag + "N^2 = 2d - r(alpha + 1)^2 >= 10", n2, ">=", 10, "reider")
    else:
        trace.check(tag + "N^2 = 2d - r(alpha + 1)^2 >= 4k + 5", n2, ">=", 4 * k + 5, "beltrametti-sommese")


def _any_picard(trace: _Trace, s: SurfaceSpec, q: BundleQuery, e_min: EllipticDegree) -> Decomposition:
    d, c, k = s.d, q.c, q.k
    ac, kc = ceil_div(q.alpha, c), ceil_div(k, c)
    if k == 0:
        top_den, top_ell, anchor = ac + 1, ac + 1, "any-picard-theorem"
    elif k == 1:
        top_den, top_ell, anchor = ac + 1, ac + 2, "any-picard-theorem"
        trace.check("alpha >= 1", q.alpha, ">=", 1, anchor)
    else:
        top_den, top_ell, anchor = ac + kc + 1, ac + kc + 1, "kva-abelian-theorem"
    if not trace.check("r >= 2", q.r, ">=", 2, anchor):
        trace.failure = "out-of-hypothesis: the arbitrary Picard rank criteria need r >= 2"
    trace.check(f"r < 2d/({top_den})^2 - 2", q.r, "<", Fraction(2 * d, top_den * top_den) - 2, anchor)
    _elliptic_step(trace, e_min, top_ell, f"no elliptic curve of degree <= {top_ell}", anchor)
    dec = split_very_ample(c, q.alpha) if k == 1 else split_components(c, q.alpha, k)
    _decomposition_steps(trace, dec)
    for comp in dec.components:
        _any_picard_component(trace, d, q.r, e_min, comp.alpha, comp.order)
    _combine_step(trace, dec)
    return dec


def _any_picard_gate(q: BundleQuery) -> str:
    return "G4" if q.k == 0 else "G5" if q.k == 1 else "G6"


def gate_any_picard(s: SurfaceSpec, q: BundleQuery) -> Certificate:
    if s.kind != "abelian":
        raise HypothesisError("the arbitrary Picard rank gates need an abelian surface")
    if s.min_elliptic_degree is None:
        raise HypothesisError("the arbitrary Picard rank gates need an asserted minimal elliptic degree")
    if q.alpha < q.k:
        return _refuted(s, q)
    trace = _Trace(_any_picard_gate(q))
    _necessity(trace, s, q)
    dec = _any_picard(trace, s, q, s.min_elliptic_degree)
    assumptions = ["points-general"]
    assumptions.append("no-elliptic-curves" if s.min_elliptic_degree == SIMPLE
                       else f"min-elliptic-degree={s.min_elliptic_degree}")
    return _finish(trace, q, assumptions, dec)


# ---------------------------------------------------------------------------
# G7: corollaries replacing the elliptic hypothesis

FIVE_MINUS_ROOT5_HALF = Surd(Fraction(5, 2), Fraction(-1, 2), 5)


def gate_corollaries(s: SurfaceSpec, q: BundleQuery) -> Certificate:
    if s.kind != "abelian":
        raise HypothesisError("the corollary gate needs an abelian surface")
    if q.alpha < q.k:
        return _refuted(s, q)
    trace = _Trace("G7")
    _necessity(trace, s, q)
    if q.k > 1:
        trace.fail("no-applicable-corollary: corollaries cover k = 0 and k = 1 only")
        return _finish(trace, q, (), None)
    if not s.very_general and s.eps1 is None:
        trace.fail("no-applicable-corollary: neither very_general nor eps1 asserted")
        return _finish(trace, q, (), None)
    d = s.d
    t = ceil_div(q.alpha, q.c) + 1 + q.k
    discharged: list[str] = []
    attempts: list[Step] = []
    if s.very_general:
        probe = _Trace("G7")
        if probe.check(f"d > 81/16 * {t}^2", d, ">", Fraction(81, 16) * t * t, "very-general-corollary"):
            discharged = ["very-general"]
        attempts.extend(probe.steps)
    if not discharged and s.eps1 is not None:
        probe = _Trace("G7")
        probe.check(f"eps(L;1) > (5 - sqrt 5)/2 * {t}", s.eps1, ">", FIVE_MINUS_ROOT5_HALF * t,
                    "seshadri-corollary")
        probe.check(f"d >= 5/2 * {t}^2", d, ">=", Fraction(5, 2) * t * t, "seshadri-corollary")
        if probe.ok:
            discharged = ["user-asserted-eps1"]
        attempts.extend(probe.steps)
    trace.steps.extend(attempts)
    if not discharged:
        failing = next(step.description for step in reversed(attempts) if not step.holds)
        trace.fail(f"no-applicable-corollary: {failing}")
        return _finish(trace, q, (), None)
    # no elliptic curve of degree <= t, i.e. minimal elliptic degree >= t + 1
    dec = _any_picard(trace, s, q, t + 1)
    return _finish(trace, q, ["points-general", *discharged, f"min-elliptic-degree>={t + 1}"], dec)


# ---------------------------------------------------------------------------
# dispatcher


def certify(s: SurfaceSpec, q: BundleQuery) -> Certificate:
    """Try G1..G7 in order and return the first certified result.

    ``alpha < k`` is the only refutation. Otherwise an uncertified result
    lists every gate's reason and the concatenated traces of attempted gates.
    """
    if q.alpha < q.k:
        return _refuted(s, q)
    reasons: list[tuple[str, str]] = []
    steps: list[Step] = []

    def attempt(cert: Certificate) -> Certificate | None:
        if cert.verdict is Verdict.CERTIFIED:
            return cert
        reasons.extend(cert.reasons)
        steps.extend(cert.trace)
        return None

    rho1_gate = "G1" if q.k == 0 else "G2"
    if s.kind == "abelian" and s.picard_rank_one:
        if (hit := attempt(gate_rho1_kva(s, q))) is not None:
            return hit
    else:
        reasons.append((rho1_gate, "not applicable: needs an abelian surface of Picard rank one"))
    if s.kind == "ktrivial":
        if (hit := attempt(gate_ktrivial(s, q))) is not None:
            return hit
    else:
        reasons.append(("G3", "not applicable: needs a K-trivial surface"))
    any_gate = _any_picard_gate(q)
    if s.kind == "abelian" and s.min_elliptic_degree is not None:
        if (hit := attempt(gate_any_picard(s, q))) is not None:
            return hit
    else:
        reasons.append((any_gate, "not applicable: needs an abelian surface with asserted minimal elliptic degree"))
    if s.kind == "abelian" and (s.very_general or s.eps1 is not None):
        if (hit := attempt(gate_corollaries(s, q))) is not None:
            return hit
    else:
        reasons.append(("G7", "not applicable: no-applicable-corollary"))
    if not steps:
        trace = _Trace("none")
        _necessity(trace, s, q)
        steps = trace.steps
    order = {g: i for i, g in enumerate(GATE_ORDER)}
    reasons.sort(key=lambda item: order.get(item[0], len(order)))
    return Certificate(Verdict.NOT_CERTIFIED, q.k, "none", tuple(steps), (), None, tuple(reasons))


# ---------------------------------------------------------------------------
# serialization


def encode_rational(x: Fraction | int) -> dict[str, str]:
    x = Fraction(x)
    return {"num": str(x.numerator), "den": str(x.denominator)}


def decode_rational(obj: dict[str, str]) -> Fraction:
    return Fraction(int(obj["num"]), int(obj["den"]))


def encode_exact(x: Surd | Fraction | int) -> dict[str, Any]:
    """Rationals as ``{"num", "den"}``; irrational surds as ``{"u", "v", "m"}``."""
    s = Surd.of(x)
    if s.is_rational:
        return encode_rational(s.u)
    return {"u": encode_rational(s.u), "v": encode_rational(s.v), "m": str(s.m)}


def decode_exact(obj: dict[str, Any]) -> Surd:
    if "m" in obj:
        return Surd(decode_rational(obj["u"]), decode_rational(obj["v"]), int(obj["m"]))
    return Surd(decode_rational(obj))


def step_to_json(step: Step) -> dict[str, Any]:
    return {
        "anchor": step.anchor,
        "description": step.description,
        "gate": step.gate,
        "holds": step.holds,
        "lhs": encode_exact(step.lhs),
        "relation": step.relation,
        "rhs": encode_exact(step.rhs),
        "text": f"{step.lhs} {step.relation} {step.rhs}",
    }


def step_from_json(obj: dict[str, Any]) -> Step:
    return Step(obj["description"], decode_exact(obj["lhs"]), obj["relation"], decode_exact(obj["rhs"]),
                obj["anchor"], obj.get("gate", ""))


def decomposition_to_json(dec: Decomposition) -> dict[str, Any]:
    return {
        "alpha": str(dec.alpha), "alpha_ceil": str(dec.alpha_ceil), "alpha_floor": str(dec.alpha_floor),
        "alpha_rem": str(dec.alpha_rem), "branch": dec.branch, "c": str(dec.c), "combined_k": str(dec.combined),
        "components": [
            {"alpha": str(x.alpha), "multiplicity": str(x.multiplicity), "order": str(x.order)}
            for x in dec.components
        ],
        "k": str(dec.k), "k_ceil": str(dec.k_ceil), "k_floor": str(dec.k_floor), "k_rem": str(dec.k_rem),
    }


def certificate_to_json(cert: Certificate) -> dict[str, Any]:
    return {
        "assumptions": list(cert.assumptions),
        "decomposition": decomposition_to_json(cert.decomposition) if cert.decomposition else None,
        "gate": cert.gate,
        "gate_order": list(GATE_ORDER),
        "k": str(cert.k),
        "reasons": [{"gate": g, "reason": r} for g, r in cert.reasons],
        "trace": [step_to_json(step) for step in cert.trace],
        "verdict": cert.verdict.value,
    }


def dumps(obj: Any) -> str:
    """Canonical JSON: sorted keys, fixed indentation, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def verify_certificate(data: dict[str, Any] | Certificate) -> bool:
    """Re-evaluate every trace step of a (possibly serialized) certificate.

    True when each recorded ``holds`` flag matches exact re-evaluation and a
    certified verdict has no failing step.
    """
    if isinstance(data, Certificate):
        data = certificate_to_json(data)
    steps = [(step_from_json(s), s["holds"]) for s in data["trace"]]
    if not steps:
        return False
    for step, recorded in steps:
        if step.holds != recorded:
            return False
    if data["verdict"] == Verdict.CERTIFIED.value:
        return all(step.holds for step, _ in steps)
    return True


def render_text(cert: Certificate) -> str:
    lines = [f"verdict: {cert.verdict.value}", f"gate: {cert.gate}", f"k: {cert.k}"]
    if cert.assumptions:
        lines.append("assumptions: " + ", ".join(cert.assumptions))
    if cert.decomposition and cert.decomposition.c > 1:
        dec = cert.decomposition
        parts = " + ".join(f"{x.multiplicity}x(alpha={x.alpha}, k={x.order})" for x in dec.components)
        lines.append(f"decomposition: {dec.branch}: {parts} -> order {dec.combined}")
    lines.append("trace:")
    for step in cert.trace:
        mark = "ok " if step.holds else "FAIL"
        lines.append(f"  [{mark}] {step.gate:<9} {step.description}: {step.lhs} {step.relation} {step.rhs}"
                     f"  ({step.anchor})")
    for gate, reason in cert.reasons:
        lines.append(f"reason {gate}: {reason}")
    return "\n".join(lines) + "\n"


def with_min_elliptic_degree(s: SurfaceSpec, e_min: EllipticDegree | None) -> SurfaceSpec:
    return replace(s, min_elliptic_degree=e_min)
