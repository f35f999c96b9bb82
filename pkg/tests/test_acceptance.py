"""Acceptance criteria 1-10, one pass/fail line each.

Run with ``pytest tests/test_acceptance.py -s`` or ``python tests/test_acceptance.py``.
"""

import json
import math
import os
import random
import subprocess
import sys
import time
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from sympy.solvers.diophantine.diophantine import diop_DN

from kvacert.certify import (
    SurfaceSpec,
    Verdict,
    certificate_to_json,
    certify,
    ceil_div,
    decompose,
    dumps,
    split_components,
    verify_certificate,
)
from kvacert.exactmath import Surd, compare
from kvacert.lattice import SIMPLE, BundleQuery
from kvacert.obstruction import feasible_vector, search_profiles, search_rho1
from kvacert.pell import pell_primitive
from kvacert.seshadri import bound_pell_rho1, universal_upper_bound


@pytest.fixture
def emit(capsys):
    def _emit(number, title, ok, detail=""):
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] criterion {number}: {title}" + (f" ({detail})" if detail else ""))
        assert ok, f"criterion {number} failed: {detail}"
    return _emit


def test_criterion_01_pell_oracle(emit):
    start = time.perf_counter()
    ks = np.arange(1, 3001, dtype=np.int64)
    ks2 = ks * ks
    checked = brute = mismatches = 0
    for D in range(2, 2 * 10**4 + 1):
        if math.isqrt(D) ** 2 == D:
            continue
        sol = pell_primitive(D)
        # brute force over k <= 3000, exact in int64 since D k^2 < 2e11
        v = 1 + D * ks2
        root = np.sqrt(v.astype(np.float64)).astype(np.int64)
        hits = np.nonzero((root * root == v) | ((root + 1) * (root + 1) == v))[0]
        if hits.size:
            brute += 1
            k = int(ks[hits[0]])
            expected = (math.isqrt(1 + D * k * k), k)
        else:
            # solution beyond the brute-force cap: independent solver
            expected = min((int(l), int(k)) for l, k in diop_DN(D, 1) if k > 0)
        checked += 1
        if (sol.l0, sol.k0) != expected:
            mismatches += 1
    elapsed = time.perf_counter() - start
    emit(1, "Pell oracle equivalence", mismatches == 0 and elapsed < 30,
         f"{checked} D checked, {brute} by brute force, {mismatches} mismatches, {elapsed:.1f} s")


def test_criterion_02_seshadri_consistency(emit):
    rng = random.Random(20261016)
    violations = 0
    for _ in range(500):
        d, r = rng.randint(1, 1000), rng.randint(1, 50)
        b = bound_pell_rho1(d, r)
        if compare(b.value, b.relaxed) < 0 or compare(b.value, universal_upper_bound(2 * d, r)) > 0:
            violations += 1
        if compare(b.relaxed, universal_upper_bound(2 * d, r)) > 0:
            violations += 1
    emit(2, "Seshadri bound consistency", violations == 0, f"500 samples, {violations} violations")


def test_criterion_03_g1_sweep(emit):
    start = time.perf_counter()
    runs, bad = 0, []
    for d in range(1, 31):
        for c in (1, 2, 3):
            for alpha in range(0, 6):
                for k in range(0, alpha + 1):
                    bound = Fraction(2 * d - (4 * ceil_div(k, c) + 5), (ceil_div(alpha, c) + 1) ** 2)
                    r = 1
                    while r <= bound:
                        report = search_rho1(d, c, alpha, k, r, workers=1)
                        runs += 1
                        if report.survivors or not report.exhaustive:
                            bad.append((d, c, alpha, k, r))
                        r += 1
    elapsed = time.perf_counter() - start
    emit(3, "theorem-consistency sweep, Picard rank one", not bad and elapsed < 300,
         f"{runs} searches, {len(bad)} with survivors, {elapsed:.1f} s")


def _g6_grid():
    for d in range(1, 61):
        for alpha in range(0, 5):
            for k in range(0, alpha + 1):
                den = alpha + 1 if k <= 1 else alpha + k + 1
                r = 2
                while r < Fraction(2 * d, den * den) - 2:
                    yield d, alpha, k, r
                    r += 1


def test_criterion_04_g6_sweep(emit):
    start = time.perf_counter()
    runs, bad = 0, []
    for d, alpha, k, r in _g6_grid():
        report = search_profiles(d, alpha, k, r, alpha + k + 2, workers=1)
        runs += 1
        if report.survivors or not report.exhaustive:
            bad.append((d, alpha, k, r))
    elapsed = time.perf_counter() - start
    emit(4, "theorem-consistency sweep, numeric profiles", not bad and elapsed < 600,
         f"{runs} searches, {len(bad)} with survivors, {elapsed:.1f} s")


def test_criterion_05_relaxation(emit):
    elliptic = []
    for d, alpha, k, r in _g6_grid():
        for cand in search_profiles(d, alpha, k, r, 1, workers=1).survivors:
            if cand.kind == "profile" and cand.delta == 0:
                elliptic.append((d, alpha, k, r, cand.ell))
    degree_one = [x for x in elliptic if x[4] == 1]
    emit(5, "relaxation sensitivity", bool(degree_one),
         f"{len(elliptic)} delta = 0 survivors, {len(degree_one)} of L-degree 1")


def _random_surface(rng):
    if rng.random() < 0.2:
        return SurfaceSpec.ktrivial(rng.randint(1, 200))
    return SurfaceSpec.abelian(rng.randint(1, 200), picard_rank_one=rng.random() < 0.5,
                               min_elliptic_degree=rng.choice([None, 1, 3, 8, SIMPLE]),
                               very_general=rng.random() < 0.3,
                               eps1=rng.choice([None, Fraction(7, 2), Fraction(12)]))


def test_criterion_06_necessity(emit):
    rng = random.Random(6)
    failures = 0
    for _ in range(100):
        s = _random_surface(rng)
        k = rng.randint(1, 8)
        c, alpha, r = rng.randint(1, 4), rng.randint(0, k - 1), rng.randint(1, 30)
        cert = certify(s, BundleQuery(c, alpha, k, r))
        step = cert.trace[0]
        if cert.verdict is not Verdict.REFUTED or step.description != "M.E_j = alpha" or step.lhs != alpha:
            failures += 1
        if certify(s, BundleQuery(c, k, k, r)).verdict is Verdict.REFUTED:
            failures += 1
    emit(6, "necessity rule", failures == 0, f"100 inputs, {failures} failures")


def test_criterion_07_decomposition(emit):
    failures = cases = 0
    for c in range(1, 13):
        for alpha in range(0, 61):
            floor_, ceil_, rem = decompose(c, alpha)
            if alpha != (c - rem) * floor_ + rem * ceil_:
                failures += 1
            for k in range(0, alpha + 1):
                cases += 1
                if split_components(c, alpha, k).combined < k:
                    failures += 1
    emit(7, "decomposition identities", failures == 0, f"{cases} (c, alpha, k) cases, {failures} failures")


def _decimal(x):
    return mpmath.mpf(x.u.numerator) / x.u.denominator + mpmath.mpf(x.v.numerator) / x.v.denominator * mpmath.sqrt(x.m)


def test_criterion_08_surd_comparator(emit):
    mpmath.mp.dps = 100
    rng = random.Random(8)
    golden = Surd(Fraction(5, 2), Fraction(-1, 2), 5)

    def rand_surd():
        roll = rng.random()
        if roll < 0.2:
            return golden * rng.randint(1, 12)
        if roll < 0.4:
            return Surd.sqrt(7 * rng.randint(1, 2000)) / 2
        return Surd(Fraction(rng.randint(-400, 400), rng.randint(1, 60)),
                    Fraction(rng.randint(-400, 400), rng.randint(1, 60)), rng.randint(0, 3000))

    disagreements = 0
    for i in range(1000):
        a = rand_surd()
        # every tenth pair is a near tie: b shifted from a by a tiny rational
        b = a + Fraction(rng.choice([-1, 0, 1]), 10**12) if i % 10 == 0 else rand_surd()
        da, db = _decimal(a), _decimal(b)
        expected = 0 if abs(da - db) < mpmath.mpf(10) ** -90 else (1 if da > db else -1)
        if compare(a, b) != expected:
            disagreements += 1
    emit(8, "exact surd comparator vs 100-digit decimals", disagreements == 0,
         f"1000 instances, {disagreements} disagreements")


CLI_COMMANDS = [
    ["certify", "--surface", "abelian", "--picard1", "--d", "13", "--c", "1", "--alpha", "1", "--k", "1", "--r", "4"],
    ["certify", "--surface", "ktrivial", "--L2", "36", "--c", "2", "--alpha", "3", "--k", "1", "--r", "2",
     "--format", "text"],
    ["table", "--picard1", "--min-elliptic-degree", "simple", "--d", "5..9", "--c", "1..2", "--alpha", "0..2",
     "--k", "0..2"],
    ["search", "--model", "rho1", "--d", "30", "--c", "2", "--alpha", "3", "--k", "2", "--r", "2", "--include-pruned"],
    ["search", "--model", "profiles", "--d", "40", "--alpha", "2", "--k", "1", "--r", "3",
     "--min-elliptic-degree", "1", "--include-pruned"],
    ["pell", "--D", "9781"],
    ["seshadri", "--bound", "pell", "--d", "29", "--r", "7"],
]


def test_criterion_09_soundness_and_determinism(emit):
    rng = random.Random(9)
    certified = unsound = 0
    for _ in range(400):
        s = _random_surface(rng)
        cert = certify(s, BundleQuery(rng.randint(1, 3), rng.randint(0, 5), rng.randint(0, 4), rng.randint(1, 20)))
        data = json.loads(dumps(certificate_to_json(cert)))
        if cert.verdict is Verdict.CERTIFIED:
            certified += 1
            if not all(step.holds for step in cert.trace):
                unsound += 1
        if not verify_certificate(data):
            unsound += 1
    differing = []
    for argv in CLI_COMMANDS:
        outputs = set()
        for workers in ("1", "4", "8"):
            extra = ["--workers", workers] if argv[0] == "search" else []
            for _ in range(2):
                env = dict(os.environ, KVACERT_WORKERS=workers)
                proc = subprocess.run([sys.executable, "-m", "kvacert.cli", *argv, *extra],
                                      capture_output=True, env=env)
                outputs.add((proc.returncode, proc.stdout))
        if len(outputs) != 1:
            differing.append(argv[0])
    emit(9, "certificate soundness and CLI determinism", unsound == 0 and not differing and certified > 0,
         f"{certified} certified traces re-checked, {unsound} unsound, "
         f"{len(CLI_COMMANDS)} commands x workers 1/4/8 x 2 runs, {len(differing)} differing")


def _reachable(r, cap):
    """All (sum, sum of squares) of vectors in Z_{>=0}^r with sum <= cap, by direct enumeration."""
    seen = set()

    def walk(i, s, q):
        if i == r:
            seen.add((s, q))
            return
        for x in range(0, cap - s + 1):
            walk(i + 1, s + x, q + x * x)

    walk(0, 0, 0)
    return seen


def test_criterion_10_feasible_vector_oracle(emit):
    disagreements = cases = 0
    for r in range(1, 7):
        reach = _reachable(r, 12)
        for s in range(0, 13):
            for q in range(0, 145):
                cases += 1
                if feasible_vector(r, s, q) != ((s, q) in reach):
                    disagreements += 1
    emit(10, "feasible_vector oracle equivalence", disagreements == 0,
         f"{cases} (r, s, q) cases, {disagreements} disagreements")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-s"]))
