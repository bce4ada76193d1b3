"""Acceptance criteria, one test each, with the tolerances stated for the toolkit.

Each test prints a single pass/fail line; the lines are repeated in the
pytest terminal summary under "acceptance criteria".
"""
import math
import time
from fractions import Fraction

import numpy as np
import pytest

from hopflap.audits import AuditConfig, run_audits, summarize
from hopflap.green import ck_bounds, ck_closed, ck_quadrature
from hopflap.heat import heat_trace_coefficients
from hopflap.quadrature import haar_grid
from hopflap.su2 import inverse, multiply, random_elements
from hopflap.verify import (MCKEAN_ROW, VerifyConfig, appendix_decay_ratio, eigenfunction_checks,
                            expand5_polynomial, green_kernel_checks, green_route_checks,
                            trace_decay_ratio)
from hopflap.wigner import RepIndex, t_matrix, wigner_t

CFG = VerifyConfig(seed=0)


def test_criterion_01_expand5_polynomials(acceptance_report):
    start = time.perf_counter()
    mismatches = [(k, p) for k in range(6) for p in range(-1, 6)
                  if heat_trace_coefficients(k, 5).coefficient(p) != expand5_polynomial(p, k)]
    elapsed = time.perf_counter() - start
    ok = not mismatches and elapsed < 1.0
    assert acceptance_report(1, ok, f"expand5 polynomials exact for k=0..5, mismatches={mismatches}", elapsed)


def test_criterion_02_mckean_row(acceptance_report):
    start = time.perf_counter()
    got = heat_trace_coefficients(0, 5).coefficients
    want = (Fraction(1, 4), Fraction(1, 3), Fraction(4, 15), Fraction(64, 315), Fraction(64, 315),
            Fraction(1024, 3465), Fraction(391168, 675675))
    ok = got == want == MCKEAN_ROW
    assert acceptance_report(2, ok, "k=0 row " + ", ".join(map(str, got)), time.perf_counter() - start)


def test_criterion_03_trace_decay_ratio(acceptance_report):
    start = time.perf_counter()
    ratios = {k: trace_decay_ratio(k, R=5, t=0.05) for k in (0, 1, 2)}
    elapsed = time.perf_counter() - start
    ok = all(50 <= r <= 80 for r in ratios.values()) and elapsed < 5
    detail = "gap ratio t=0.05/0.025 " + ", ".join(f"k={k}:{r:.2f}" for k, r in ratios.items())
    assert acceptance_report(3, ok, detail + " in [50, 80]", elapsed)


def test_criterion_04_ck_table(acceptance_report):
    start = time.perf_counter()
    e1 = abs(ck_closed(1) - (math.pi / 2 - 1))
    e2 = abs(ck_closed(2) - (2 * math.log(2) - 1))
    quad = max(abs(ck_closed(s * k) - ck_quadrature(s * k)) for k in range(1, 21) for s in (1, -1))
    bounds = all(ck_bounds(s * k)[0] <= ck_closed(s * k) < ck_bounds(s * k)[1]
                 for k in range(1, 31) for s in (1, -1))
    ok = e1 <= 1e-12 and e2 <= 1e-12 and quad <= 1e-8 and bounds
    detail = f"c1 err {e1:.1e}, c2 err {e2:.1e}, closed-vs-quad {quad:.1e} (|k|<=20), bounds ok={bounds} (|k|<=30)"
    assert acceptance_report(4, ok, detail, time.perf_counter() - start)


@pytest.mark.slow
def test_criterion_05_green_kernel_multiplier(acceptance_report):
    start = time.perf_counter()
    checks = list(green_kernel_checks(CFG, ks=(1, 2, 3), max_m=3))
    checks += list(green_kernel_checks(CFG, ks=(-1, -2, -3), max_m=3))
    elapsed = time.perf_counter() - start
    worst = max(c.lhs for c in checks)
    ok = all(c.passed for c in checks) and elapsed < 120
    grid = checks[0].params["grid"]
    assert acceptance_report(5, ok, f"max rel err {worst:.1e} <= 1e-6, |k|<=3, M<=3, grid {grid}", elapsed)


def test_criterion_06_three_routes(acceptance_report):
    start = time.perf_counter()
    checks = list(green_route_checks(CFG, ks=(1, 2, 3, -1, -2, -3)))
    worst = max(c.lhs for c in checks)
    ok = all(c.passed for c in checks)
    detail = f"closed/Abel/Poisson max diff {worst:.1e} <= 1e-5 at {CFG.n_pairs} pairs, |k|<=3"
    assert acceptance_report(6, ok, detail, time.perf_counter() - start)


def test_criterion_07_wigner_suite(acceptance_report):
    start = time.perf_counter()
    g, h = random_elements(20, 70), random_elements(20, 71)
    grid = haar_grid(8, 14, 28)
    worst = {"unitarity": 0.0, "homomorphism": 0.0, "addition": 0.0, "normalization": 0.0}
    for l2 in range(13):
        T, Th = t_matrix(l2, g), t_matrix(l2, h)
        dag = np.conj(np.swapaxes(T, -1, -2))
        worst["unitarity"] = max(worst["unitarity"], np.max(np.abs(T @ dag - np.eye(l2 + 1))))
        worst["homomorphism"] = max(worst["homomorphism"], np.max(np.abs(t_matrix(l2, multiply(g, h)) - T @ Th)))
        # sum_n t_mn(g) conj(t_kn(h)) = t_mk(g h^-1), full matrix form
        add = T @ np.conj(np.swapaxes(Th, -1, -2)) - t_matrix(l2, multiply(g, inverse(h)))
        worst["addition"] = max(worst["addition"], np.max(np.abs(add)))
        for m2 in range(-l2, l2 + 1, 2):
            for n2 in range(-l2, l2 + 1, 2):
                vals = np.abs(wigner_t(RepIndex(l2, m2, n2), grid.elements)) ** 2
                worst["normalization"] = max(worst["normalization"], abs(vals @ grid.weights - 1 / (l2 + 1)))
    ok = all(v <= 1e-9 for v in worst.values())
    detail = ", ".join(f"{k} {v:.1e}" for k, v in worst.items()) + f" <= 1e-9, 2l<=12, grid {grid.describe()}"
    assert acceptance_report(7, ok, detail, time.perf_counter() - start)


def test_criterion_08_eigenfunctions(acceptance_report):
    start = time.perf_counter()
    checks = list(eigenfunction_checks(CFG, max_l2=6))
    rel = max(c.lhs for c in checks if c.check == "eigenfunction_rel")
    ok = all(c.passed for c in checks)
    detail = f"finite-difference horizontal Laplacian max rel err {rel:.1e} <= 1e-4, 2l<=6, {CFG.n_points} points"
    assert acceptance_report(8, ok, detail, time.perf_counter() - start)


@pytest.mark.slow
def test_criterion_09_inequality_audits(acceptance_report):
    start = time.perf_counter()
    cfg = AuditConfig(ks=(1, 2, 3, -2), n_sections=100)
    summary = summarize(run_audits(cfg))
    elapsed = time.perf_counter() - start
    violations = sum(v["violations"] for v in summary.values())
    min_slack = min(v["min_slack"] for v in summary.values())
    ok = violations == 0 and all(v["count"] == 100 for v in summary.values()) and elapsed < 300
    detail = (f"{len(summary)} (inequality, k, p) cells x 100 sections, violations={violations}, "
              f"min slack {min_slack:.2e}, grid {cfg.n_theta}x1x{cfg.n_psi}")
    assert acceptance_report(9, ok, detail, elapsed)


def test_criterion_10_appendix_lemma(acceptance_report):
    start = time.perf_counter()
    normalized = {(k, R): appendix_decay_ratio(k, R, x=0.02) / 2 ** (R + 1) for k in (0, 1, 2) for R in (3, 5)}
    ok = all(50 / 64 <= r <= 80 / 64 for r in normalized.values())
    detail = "gap ratio x=0.02/0.01 over 2^(R+1): " + ", ".join(
        f"k={k},R={R}:{r:.3f}" for (k, R), r in normalized.items())
    assert acceptance_report(10, ok, detail + " in [50/64, 80/64]", time.perf_counter() - start)
