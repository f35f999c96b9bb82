"""Exhaustive search for obstruction divisors on ``Bl_r(S)``.

Write ``N = pi^*L - (alpha+1)*sum(E_i)`` for the adjoint twist of a ``c = 1``
bundle. A Reider or Beltrametti-Sommese type criterion can only fail through
an effective ``D`` whose pair ``(n, e) = (N.D, D^2)`` lies in a small window.
The searches below enumerate every numerical candidate hitting the window and
either prune it with a named rule (storing the violated inequality) or report
it as a survivor.

Two models are searched:

* ``search_rho1``: Picard rank one, ``D = a*pi^*L - sum(m_i E_i)``.
* ``search_profiles``: any Picard rank, ``D`` abstracted to a numeric profile
  ``(ell, delta, m)`` with ``ell = L.D_S`` and ``delta = D_S^2``.

Both also scan exceptional-only classes ``D = sum(a_i E_i)``.

Only windows with ``n >= 0`` are enumerated: the criteria are applied with
``N`` nef, so a component meeting ``N`` negatively cannot occur.
"""

from __future__ import annotations

import csv
import io
import os
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Any, Iterable, Literal, Sequence

from .certify import ceil_div, dumps, encode_exact, split_components
from .errors import CapError, DomainError
from .exactmath import Surd, holds, isqrt
from .lattice import (
    SIMPLE,
    BundleQuery,
    DivisorClass,
    EllipticDegree,
    adjoint_twist,
    elliptic_degree_allows,
    pair,
    self_intersection,
)
from .seshadri import abelian_multi_point, bound_pell_rho1

Mode = Literal["reider-gg", "reider-va", "bs-kva"]
MODES = ("reider-gg", "reider-va", "bs-kva")

RULES = (
    "R1-exceptional-alpha-ge-k",
    "R2-hodge",
    "R3-parity",
    "R4-elliptic-excluded",
    "R5-principal-through-3",
    "R6-type12-through-5",
    "R7-elliptic-through-2",
    "R8-beta-vs-sections",
    "R9-arithmetic-infeasible",
)

WORKERS_ENV = "KVACERT_WORKERS"


def default_workers() -> int:
    try:
        return max(1, int(os.environ.get(WORKERS_ENV, "1")))
    except ValueError:
        return 1


def default_mode(k: int) -> Mode:
    return "reider-gg" if k == 0 else "reider-va" if k == 1 else "bs-kva"


@dataclass(frozen=True)
class ObstructionWindow:
    mode: Mode
    k: int

    def __post_init__(self) -> None:
        if self.mode not in MODES:
            raise DomainError(f"unknown window mode {self.mode!r}")
        if self.k < 0:
            raise DomainError(f"k must be >= 0, got {self.k}")

    def contains(self, n: int, e: int) -> bool:
        if self.mode == "reider-gg":
            return (n, e) in {(0, -1), (1, 0)}
        if self.mode == "reider-va":
            return (n, e) in {(0, -1), (0, -2), (1, 0), (1, -1), (2, 0)}
        return n - self.k - 1 <= e and 2 * e < n and n < 2 * self.k + 2

    def pairs(self) -> list[tuple[int, int]]:
        """Admissible ``(N.D, D^2)`` with ``N.D >= 0``, sorted."""
        if self.mode == "reider-gg":
            return [(0, -1), (1, 0)]
        if self.mode == "reider-va":
            return [(0, -2), (0, -1), (1, -1), (1, 0), (2, 0)]
        k = self.k
        return [(n, e) for n in range(0, 2 * k + 2) for e in range(n - k - 1, (n - 1) // 2 + 1)]


# ---------------------------------------------------------------------------
# sum / sum-of-squares realizability


@lru_cache(maxsize=1 << 20)
def _realize(r: int, s: int, q: int, cap: int) -> tuple[int, ...] | None:
    """Non-increasing parts ``<= cap``, at most ``r`` of them, with sums ``(s, q)``."""
    if s == 0:
        return () if q == 0 else None
    if r == 0 or q < s or (q - s) % 2 or q * r < s * s:
        return None
    cap = min(cap, s)
    full, rest = divmod(s, cap)
    if full + (1 if rest else 0) > r or q > full * cap * cap + rest * rest:
        return None
    # the largest part is at least the average
    for x in range(cap, ceil_div(s, r) - 1, -1):
        if x * x > q:
            continue
        tail = _realize(r - 1, s - x, q - x * x, x)
        if tail is not None:
            return (x,) + tail
    return None


def realize_vector(r: int, s: int, q: int) -> tuple[int, ...] | None:
    """A witness ``m`` in ``Z_{>=0}^r`` with ``sum(m) = s`` and ``sum(m^2) = q``."""
    if r < 1:
        raise DomainError(f"r must be >= 1, got {r}")
    if s < 0 or q < 0:
        return None
    parts = _realize(min(r, s), s, q, s)
    if parts is None:
        return None
    return parts + (0,) * (r - len(parts))


def feasible_vector(r: int, s: int, q: int) -> bool:
    return realize_vector(r, s, q) is not None


# ---------------------------------------------------------------------------
# reports


@dataclass(frozen=True)
class Inequality:
    description: str
    lhs: Surd
    relation: str
    rhs: Surd

    @property
    def holds(self) -> bool:
        return holds(self.lhs, self.relation, self.rhs)

    def to_json(self) -> dict[str, Any]:
        return {"description": self.description, "lhs": encode_exact(self.lhs),
                "relation": self.relation, "rhs": encode_exact(self.rhs)}


def _ineq(description: str, lhs: Any, relation: str, rhs: Any) -> Inequality:
    return Inequality(description, Surd.of(lhs), relation, Surd.of(rhs))


@dataclass(frozen=True)
class Candidate:
    """A numerical candidate ``D``. ``kind`` is ``rho1``, ``profile`` or ``exceptional``.

    ``a`` is set for ``rho1`` classes; ``ell`` and ``delta`` for profiles.
    ``m`` is a realizing multiplicity vector when one exists.
    """

    kind: str
    n: int
    e: int
    s: int
    q: int
    a: int | None = None
    ell: int | None = None
    delta: int | None = None
    m: tuple[int, ...] | None = None

    def sort_key(self) -> tuple:
        def z(x: int | None) -> int:
            return -1 if x is None else x
        return (self.kind, self.n, self.e, z(self.a), z(self.ell), z(self.delta), self.s, self.q)

    @property
    def beta(self) -> int | None:
        return None if self.m is None else sum(1 for x in self.m if x)

    def to_class(self, d: int) -> DivisorClass:
        """The class on ``Bl_r(S)`` for ``rho1`` and ``exceptional`` candidates."""
        if self.m is None or self.kind == "profile":
            raise DomainError("only realized rank-one or exceptional candidates have a class")
        if self.kind == "exceptional":
            return DivisorClass(0, tuple(-x for x in self.m), d)
        return DivisorClass(self.a or 0, self.m, d)

    def to_json(self) -> dict[str, Any]:
        out: dict[str, Any] = {"kind": self.kind, "n": str(self.n), "e": str(self.e),
                               "s": str(self.s), "q": str(self.q)}
        for name in ("a", "ell", "delta"):
            value = getattr(self, name)
            if value is not None:
                out[name] = str(value)
        if self.m is not None:
            out["m"] = [str(x) for x in self.m]
        return out


@dataclass(frozen=True)
class PruneReport:
    candidate: Candidate
    rule: str
    inequality: Inequality

    def to_json(self) -> dict[str, Any]:
        return {"candidate": self.candidate.to_json(), "rule": self.rule,
                "inequality": self.inequality.to_json()}


@dataclass(frozen=True)
class ComponentSearch:
    """Search result for one ``c = 1`` component ``(alpha, k)``."""

    alpha: int
    k: int
    multiplicity: int
    mode: Mode
    N2: int
    n_ample: bool | None
    caps: tuple[dict[str, str], ...]
    exhaustive: bool
    pruned: tuple[PruneReport, ...]
    survivors: tuple[Candidate, ...]

    def rule_counts(self) -> dict[str, int]:
        return dict(sorted(Counter(p.rule for p in self.pruned).items()))


@dataclass(frozen=True)
class SearchReport:
    model: str
    params: dict[str, Any]
    components: tuple[ComponentSearch, ...]

    @property
    def survivors(self) -> tuple[Candidate, ...]:
        return tuple(c for comp in self.components for c in comp.survivors)

    @property
    def pruned(self) -> tuple[PruneReport, ...]:
        return tuple(p for comp in self.components for p in comp.pruned)

    @property
    def exhaustive(self) -> bool:
        return all(comp.exhaustive for comp in self.components)

    def to_json(self, include_pruned: bool = False) -> dict[str, Any]:
        comps = []
        for comp in self.components:
            entry = {
                "alpha": str(comp.alpha), "k": str(comp.k), "multiplicity": str(comp.multiplicity),
                "mode": comp.mode, "N2": str(comp.N2),
                "n_ample_certified": comp.n_ample,
                "caps": list(comp.caps), "exhaustive": comp.exhaustive,
                "pruned_count": str(len(comp.pruned)),
                "rule_counts": {r: str(n) for r, n in comp.rule_counts().items()},
                "survivors": [c.to_json() for c in comp.survivors],
            }
            if include_pruned:
                entry["pruned"] = [p.to_json() for p in comp.pruned]
            comps.append(entry)
        return {
            "model": self.model,
            "params": {k: (v if isinstance(v, (bool, type(None))) else str(v)) for k, v in self.params.items()},
            "components": comps,
            "exhaustive": self.exhaustive,
            "survivors": [c.to_json() for c in self.survivors],
        }

    def dumps(self, include_pruned: bool = False) -> str:
        return dumps(self.to_json(include_pruned))

    def survivors_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["component_alpha", "component_k", "kind", "n", "e", "a", "ell", "delta", "s", "q", "m"])
        for comp in self.components:
            for c in comp.survivors:
                writer.writerow([comp.alpha, comp.k, c.kind, c.n, c.e,
                                 "" if c.a is None else c.a, "" if c.ell is None else c.ell,
                                 "" if c.delta is None else c.delta, c.s, c.q,
                                 "" if c.m is None else " ".join(map(str, c.m))])
        return buf.getvalue()


# ---------------------------------------------------------------------------
# shared pieces


def _exceptional_scan(alpha: int, k: int, r: int, window: ObstructionWindow) -> tuple[list, list]:
    """``D = sum(a_i E_i)``, ``a_i >= 0``: ``N.D = (alpha+1)s`` and ``D^2 = -q``."""
    pruned, survivors = [], []
    n_max = max(n for n, _ in window.pairs())
    for s in range(1, n_max // (alpha + 1) + 1):
        n = (alpha + 1) * s
        for q in range(s, s * s + 1):
            m = realize_vector(r, s, q)
            if m is None:
                continue
            cand = Candidate("exceptional", n, -q, s, q, m=m)
            if window.contains(n, -q):
                survivors.append(cand)
            else:
                ineq = _ineq("D^2 >= N.D - k - 1", -q, ">=", n - k - 1)
                if ineq.holds:
                    ineq = _ineq("(N.D, D^2) in window", 0, "==", 1)
                pruned.append(PruneReport(cand, "R1-exceptional-alpha-ge-k", ineq))
    return pruned, survivors


def _blowup_hodge(cand: Candidate, N2: int) -> PruneReport | None:
    """Hodge index on the blow-up: ``(N.D)^2 >= N^2 D^2`` when ``N^2 > 0``."""
    if cand.e > 0 and N2 > 0:
        ineq = _ineq("(N.D)^2 >= N^2 * D^2", cand.n * cand.n, ">=", N2 * cand.e)
        if not ineq.holds:
            return PruneReport(cand, "R2-hodge", ineq)
    return None


def _largest_root_floor(A: int, B: int, C: int) -> int | None:
    """``floor`` of the larger root of ``A x^2 + B x + C`` (``A > 0``), or None if no real root."""
    disc = B * B - 4 * A * C
    if disc < 0:
        return None
    root, _ = isqrt(disc)
    # floor((-B + sqrt(disc)) / 2A) == floor((-B + isqrt(disc)) / 2A)
    return (-B + root) // (2 * A)


def _run(tasks: Sequence[tuple], fn, workers: int) -> list:
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(fn, *zip(*tasks)))
    return [fn(*t) for t in tasks]


def _merge(parts: Iterable[tuple[list, list]]) -> tuple[tuple[PruneReport, ...], tuple[Candidate, ...]]:
    pruned: list[PruneReport] = []
    survivors: list[Candidate] = []
    for p, s in parts:
        pruned.extend(p)
        survivors.extend(s)
    pruned.sort(key=lambda x: (x.candidate.sort_key(), x.rule))
    survivors.sort(key=Candidate.sort_key)
    return tuple(pruned), tuple(survivors)


# ---------------------------------------------------------------------------
# Picard rank one


def _rho1_pair(d: int, alpha: int, k: int, r: int, n: int, e: int, a_hi: int, N2: int) -> tuple[list, list]:
    pruned, survivors = [], []
    for a in range(1, a_hi + 1):
        num = 2 * a * d - n
        s, rem = divmod(num, alpha + 1)
        q = 2 * a * a * d - e
        cand = Candidate("rho1", n, e, s, q, a=a)
        if rem or s < 0:
            if rem:
                ineq = _ineq("(2ad - N.D) mod (alpha+1)", rem, "==", 0)
            else:
                ineq = _ineq("s = (2ad - N.D)/(alpha+1) >= 0", s, ">=", 0)
            pruned.append(PruneReport(cand, "R9-arithmetic-infeasible", ineq))
            continue
        hit = _blowup_hodge(cand, N2)
        if hit is not None:
            pruned.append(hit)
            continue
        m = realize_vector(r, s, q)
        if m is None:
            ineq = _ineq(f"feasible_vector(r={r}, s={s}, q={q})", 0, "==", 1)
            pruned.append(PruneReport(cand, "R9-arithmetic-infeasible", ineq))
            continue
        survivors.append(Candidate("rho1", n, e, s, q, a=a, m=m))
    return pruned, survivors


def _rho1_component(d: int, alpha: int, k: int, r: int, mult: int, mode: Mode | None,
                    a_max: int | None, workers: int) -> ComponentSearch:
    mode = mode or default_mode(k)
    window = ObstructionWindow(mode, k)
    R = r * (alpha + 1) ** 2
    N2 = 2 * d - R
    caps, tasks = [], []
    exhaustive = True
    for n, e in window.pairs():
        if N2 > 0:
            # m realizable needs q >= s^2/r; with s, q linear/quadratic in a this
            # bounds a by the larger root of the quadratic below
            A, B, C = 2 * d * N2, -4 * d * n, n * n + R * e
            derived = _largest_root_floor(A, B, C)
            derived = 0 if derived is None else max(derived, 0)
            text = (f"a <= {derived}: 2d(2d - R)a^2 - 4dn*a + n^2 + R*e <= 0 "
                    f"with R = r(alpha+1)^2 = {R}, n = {n}, e = {e}")
            if a_max is not None and a_max < derived:
                raise CapError(f"a_max={a_max} is below the derived exhaustive cap {derived} for (n, e) = ({n}, {e})")
            if derived == 0:
                # scan a = 1 anyway so the last case left by the window is pruned explicitly
                text += "; a = 1 scanned explicitly"
            hi = max(derived, 1) if a_max is None else max(a_max, derived, 1)
        else:
            if a_max is None:
                raise CapError(f"no finite cap: N^2 = 2d - r(alpha+1)^2 = {N2} <= 0; pass an explicit a_max")
            hi, exhaustive = a_max, False
            text = f"a <= {a_max}: user cap, not exhaustive (N^2 = {N2} <= 0)"
        caps.append({"n": str(n), "e": str(e), "cap": str(hi), "derivation": text})
        tasks.append((d, alpha, k, r, n, e, hi, N2))
    parts = _run(tasks, _rho1_pair, workers)
    parts.append(_exceptional_scan(alpha, k, r, window))
    pruned, survivors = _merge(parts)
    ample = None
    if N2 > 0:
        ample = bound_pell_rho1(d, r).value > alpha + 1
    return ComponentSearch(alpha, k, mult, mode, N2, ample, tuple(caps), exhaustive, pruned, survivors)


def search_rho1(d: int, c: int, alpha: int, k: int, r: int, a_max: int | None = None,
                mode: Mode | None = None, workers: int | None = None) -> SearchReport:
    """Obstruction search on a Picard rank one abelian surface of type ``(1, d)``.

    For ``c > 1`` the bundle is split into ``c = 1`` components as in the
    tensor-product argument and each component is searched with its own
    order. ``mode`` overrides the window for every component.
    """
    if d < 1 or r < 1:
        raise DomainError(f"need d >= 1 and r >= 1, got d={d}, r={r}")
    BundleQuery(c, alpha, k, r)
    workers = default_workers() if workers is None else workers
    dec = split_components(c, alpha, k)
    comps = tuple(_rho1_component(d, x.alpha, x.order, r, x.multiplicity, mode, a_max, workers)
                  for x in dec.components)
    params = {"d": d, "c": c, "alpha": alpha, "k": k, "r": r, "a_max": a_max, "mode": mode}
    return SearchReport("rho1", params, comps)


# ---------------------------------------------------------------------------
# numeric profiles, any Picard rank


def _generic_rule(delta: int, beta: int) -> str | None:
    """Genericity eliminations, only in the situations where they are used."""
    if delta == 2 and beta == 3:
        return "R5-principal-through-3"
    if delta == 4 and beta == 5:
        return "R6-type12-through-5"
    if delta == 0 and beta == 2:
        return "R7-elliptic-through-2"
    if delta > 0 and beta in (delta + 1, delta + 2):
        return "R8-beta-vs-sections"
    return None


def _profile_pair(d: int, alpha: int, r: int, e_min: EllipticDegree, n: int, e: int,
                  s_hi: int, N2: int) -> tuple[list, list]:
    pruned, survivors = [], []
    for s in range(0, s_hi + 1):
        ell = n + (alpha + 1) * s
        if ell < 1:
            cand = Candidate("profile", n, e, s, max(0, -e), ell=ell, delta=e + max(0, -e))
            pruned.append(PruneReport(cand, "R2-hodge", _ineq("L.D_S >= 1", ell, ">=", 1)))
            continue
        # delta >= 0, q >= s^2/r and Hodge index ell^2 >= 2d*delta bound q
        q_lo = max(0, -e, ceil_div(s * s, r))
        q_hi = min(s * s, ell * ell // (2 * d) - e)
        for q in range(q_lo, q_hi + 1):
            delta = e + q
            cand = Candidate("profile", n, e, s, q, ell=ell, delta=delta)
            if ell * ell == 2 * d * delta and ell % (2 * d):
                # equality in Hodge index forces D_S = (ell/2d) L, impossible as L is primitive
                ineq = _ineq("L.D_S mod 2d when (L.D_S)^2 = L^2 * D_S^2", ell % (2 * d), "==", 0)
                pruned.append(PruneReport(cand, "R2-hodge", ineq))
                continue
            if delta % 2:
                pruned.append(PruneReport(cand, "R3-parity", _ineq("D_S^2 mod 2", delta % 2, "==", 0)))
                continue
            if delta == 0 and not elliptic_degree_allows(ell, e_min):
                bound = "infinity" if e_min == SIMPLE else e_min
                ineq = _ineq(f"L.D_S >= minimal elliptic degree ({bound})", ell, ">=",
                             ell + 1 if e_min == SIMPLE else e_min)
                pruned.append(PruneReport(cand, "R4-elliptic-excluded", ineq))
                continue
            hit = _blowup_hodge(cand, N2)
            if hit is not None:
                pruned.append(hit)
                continue
            m = realize_vector(r, s, q)
            if m is None:
                ineq = _ineq(f"feasible_vector(r={r}, s={s}, q={q})", 0, "==", 1)
                pruned.append(PruneReport(cand, "R9-arithmetic-infeasible", ineq))
                continue
            cand = Candidate("profile", n, e, s, q, ell=ell, delta=delta, m=m)
            if q == s:
                # all multiplicities are 0 or 1: D_S passes simply through beta = s points
                rule = _generic_rule(delta, s)
                if rule is not None:
                    ineq = _ineq("points imposed beta <= D_S^2/2 + 1", s, "<=", Fraction(delta, 2) + 1)
                    pruned.append(PruneReport(cand, rule, ineq))
                    continue
            survivors.append(cand)
    return pruned, survivors


def search_profiles(d: int, alpha: int, k: int, r: int, e_min: EllipticDegree,
                    s_max: int | None = None, mode: Mode | None = None,
                    workers: int | None = None) -> SearchReport:
    """Obstruction search over numeric profiles on an abelian surface of type ``(1, d)``.

    ``e_min`` is the minimal degree of an elliptic curve (or :data:`SIMPLE`).
    The cap on ``s = sum(m_i)`` combines Hodge index on ``S`` with
    ``q >= s^2/r``; ``s_max`` may only raise it.
    """
    if d < 1 or r < 1:
        raise DomainError(f"need d >= 1 and r >= 1, got d={d}, r={r}")
    BundleQuery(1, alpha, k, r)
    if e_min != SIMPLE and (not isinstance(e_min, int) or e_min < 0):
        raise DomainError(f"e_min must be a non-negative integer or 'simple', got {e_min!r}")
    workers = default_workers() if workers is None else workers
    mode = mode or default_mode(k)
    window = ObstructionWindow(mode, k)
    R = r * (alpha + 1) ** 2
    N2 = 2 * d - R
    caps, tasks = [], []
    exhaustive = True
    for n, e in window.pairs():
        if N2 > 0:
            # (n + (alpha+1)s)^2 >= 2d(e + q) >= 2d(e + s^2/r)
            A, B, C = N2, -2 * r * n * (alpha + 1), -r * (n * n - 2 * d * e)
            derived = _largest_root_floor(A, B, C)
            derived = -1 if derived is None else derived
            text = (f"s <= {derived}: s^2(2d - R) - 2rn(alpha+1)s - r(n^2 - 2de) <= 0 "
                    f"with R = r(alpha+1)^2 = {R}, n = {n}, e = {e}; "
                    f"max(0, -e, ceil(s^2/r)) <= q <= min(s^2, floor(ell^2/2d) - e)")
            if s_max is not None and s_max < derived:
                raise CapError(f"s_max={s_max} is below the derived exhaustive cap {derived} for (n, e) = ({n}, {e})")
            hi = derived if s_max is None else max(s_max, derived)
        else:
            if s_max is None:
                raise CapError(f"no finite cap: N^2 = 2d - r(alpha+1)^2 = {N2} <= 0; pass an explicit s_max")
            hi, exhaustive = s_max, False
            text = f"s <= {s_max}: user cap, not exhaustive (N^2 = {N2} <= 0)"
        caps.append({"n": str(n), "e": str(e), "cap": str(hi), "derivation": text})
        tasks.append((d, alpha, r, e_min, n, e, hi, N2))
    parts = _run(tasks, _profile_pair, workers)
    parts.append(_exceptional_scan(alpha, k, r, window))
    pruned, survivors = _merge(parts)
    ample = None
    if N2 > 0 and r >= 2 and (e_min == SIMPLE or e_min >= 1):
        ample = abelian_multi_point(d, r, e_min).value > alpha + 1
    comp = ComponentSearch(alpha, k, 1, mode, N2, ample, tuple(caps), exhaustive, pruned, survivors)
    params = {"d": d, "alpha": alpha, "k": k, "r": r, "e_min": e_min, "s_max": s_max, "mode": mode}
    return SearchReport("profiles", params, (comp,))


def window_recheck(cand: Candidate, d: int, alpha: int, r: int) -> tuple[int, int]:
    """Recompute ``(N.D, D^2)`` of a candidate independently of the search."""
    if cand.kind == "profile":
        return cand.ell - (alpha + 1) * cand.s, cand.delta - cand.q
    D = cand.to_class(d)
    N = adjoint_twist(BundleQuery(1, alpha, 0, r), d)
    return pair(N, D), self_intersection(D)
