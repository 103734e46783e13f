"""End-to-end acceptance checks at fixed tolerances.

Each test pins one headline quantitative claim about the benchmark
parameter set (b0=4, gamma=3/2, c=9/10, s=1/10) or one always-on property
of the implementation.  Tolerances are deliberate and must not be loosened;
a failure here means the library disagrees with its reference values.
"""

import math
import random
import time

import pytest

from rickerpp import (
    ModelParams,
    State,
    absorbing_box,
    build,
    classify_positive,
    detect_period,
    existence_threshold,
    find_chaos_onset,
    find_doubling_threshold,
    flip_coefficients,
    global_stability_criterion,
    gtilde_partials,
    iterate,
    jacobian,
    lyapunov1,
    rectangle_iteration,
    solve_positive,
)
from rickerpp.nullclines import R_operator, y_lower
from rickerpp.orbits import _orbit_jacobian, cycle_multipliers
from _oracles import fd_jacobian, taylor_oracle

BENCH = ModelParams(r=1.0, b0=4.0, gamma=1.5, c=0.9, s=0.1)
START = State(1.0, 1.0)


# --- 1. interior fixed point ------------------------------------------------

def test_accept_1_positive_fixed_point():
    t0 = time.perf_counter()
    best = math.inf
    for _ in range(5):
        t = time.perf_counter()
        p = solve_positive(BENCH)
        best = min(best, time.perf_counter() - t)
    assert p.x_star == pytest.approx(0.6930, abs=1e-3)
    assert p.y_star == pytest.approx(0.3991, abs=1e-3)
    assert best < 1e-3, f"solve took {best * 1e3:.3f} ms"
    del t0


# --- 2. existence threshold -------------------------------------------------

def test_accept_2_existence_threshold_exact():
    assert existence_threshold(BENCH) == 0.4


# --- 3. global-stability window and rectangle convergence -------------------

def test_accept_3_global_window_boundary():
    lo, hi = 0.7, 0.95
    assert not global_stability_criterion(BENCH.with_r(lo))
    assert global_stability_criterion(BENCH.with_r(hi))
    for _ in range(50):
        mid = 0.5 * (lo + hi)
        if global_stability_criterion(BENCH.with_r(mid)):
            hi = mid
        else:
            lo = mid
    assert 0.5 * (lo + hi) == pytest.approx(0.8184, abs=1e-3)


def test_accept_3_rectangles_converge_with_monotone_nesting():
    seq = rectangle_iteration(build(BENCH))
    assert seq.converged
    p = solve_positive(BENCH)
    Am, AM, Bm, BM = seq.levels[-1]
    assert abs(Am - p.x_star) < 1e-3 and abs(AM - p.x_star) < 1e-3
    assert abs(Bm - p.y_star) < 1e-3 and abs(BM - p.y_star) < 1e-3
    for prev, cur in zip(seq.levels, seq.levels[1:]):
        assert cur[0] >= prev[0] - 1e-12 and cur[1] <= prev[1] + 1e-12
        assert cur[2] >= prev[2] - 1e-12 and cur[3] <= prev[3] + 1e-12


# --- 4. flip point ----------------------------------------------------------

@pytest.fixture(scope="module")
def flip_report():
    return flip_coefficients(BENCH)


def test_accept_4_flip_point(flip_report):
    assert flip_report.r_star == pytest.approx(2.7732, abs=1e-3)
    assert -flip_report.det_J == pytest.approx(0.4746, abs=1e-3)


# --- 5. normal-form coefficients --------------------------------------------

def test_accept_5_sigma1(flip_report):
    assert flip_report.sigma1 == pytest.approx(-1.9363, abs=0.02)


def test_accept_5_sigma2_and_classification(flip_report):
    assert flip_report.sigma2 == pytest.approx(9.7182, abs=0.1)
    assert flip_report.classification == "supercritical_right"
    # Stable 2-cycle just past the flip point.
    res = detect_period(BENCH.with_r(flip_report.r_star + 0.05), START)
    assert res.period == 2
    m1, m2 = cycle_multipliers(BENCH.with_r(flip_report.r_star + 0.05),
                               res.representative, 2)
    assert abs(m1) < 1.0 and abs(m2) < 1.0


# --- 6. cascade thresholds --------------------------------------------------

def test_accept_6_cascade_thresholds():
    t0 = time.perf_counter()
    r24 = find_doubling_threshold(BENCH, 3.05, 3.17, from_period=2,
                                  start=START)
    r48 = find_doubling_threshold(BENCH, 3.20, 3.27, from_period=4,
                                  start=START)
    r816 = find_doubling_threshold(BENCH, 3.262, 3.281, from_period=8,
                                   start=START)
    onset = find_chaos_onset(BENCH, 3.277, 3.30, start=START)
    elapsed = time.perf_counter() - t0
    assert r24 == pytest.approx(3.1247, abs=2e-3)
    assert r48 == pytest.approx(3.2555, abs=2e-3)
    assert r816 == pytest.approx(3.2770, abs=2e-3)
    assert onset == pytest.approx(3.2836, abs=2e-3)
    assert elapsed < 60.0, f"threshold search took {elapsed:.1f} s"


# --- 7. periodic attractors -------------------------------------------------

@pytest.mark.parametrize("r,period", [
    (3.00, 2), (3.20, 4), (3.27, 8), (3.28, 16),
    (3.29564, 14), (3.33142, 10), (3.38593, 12), (3.43853, 9),
])
def test_accept_7_periodic_attractors(r, period):
    assert detect_period(BENCH.with_r(r), START).period == period


# --- 8. Lyapunov exponents --------------------------------------------------

@pytest.mark.parametrize("r,lam", [
    (3.30, 0.1352), (3.32, 0.1604), (3.34, 0.1578),
    (3.38, 0.2150), (3.42, 0.2712), (3.46, 0.5063),
])
def test_accept_8_lyapunov_points(r, lam):
    est = lyapunov1(BENCH.with_r(r), START, n=1_000_000, transient=10_000)
    assert est.lambda1 == pytest.approx(lam, abs=0.03)


# --- 9. always-on property suites -------------------------------------------

def test_accept_9_jacobian_vs_finite_differences_grid():
    n = 32  # 32 x 32 > 10^3 points
    for ix in range(n):
        for iy in range(n):
            x = 0.05 + 2.45 * ix / (n - 1)
            y = 0.05 + 2.45 * iy / (n - 1)
            J = jacobian(BENCH, State(x, y))
            F = fd_jacobian(BENCH, (x, y))
            for a in range(2):
                for b in range(2):
                    scale = max(abs(J[a][b]), 1e-3)
                    assert abs(J[a][b] - F[a][b]) / scale <= 1e-6


def test_accept_9_shifted_partials_vs_richardson():
    rep = flip_coefficients(BENCH)
    tab = gtilde_partials(BENCH, rep.r_star)
    for comp, table in ((0, tab.i), (1, tab.j)):
        oracle = taylor_oracle(BENCH, rep.r_star, component=comp)
        for key, val in table.items():
            if abs(val) < 1e-8:
                assert abs(oracle[key]) < 1e-6, f"component {comp}, key {key}"
            else:
                rel = abs(oracle[key] - val) / abs(val)
                assert rel <= 1e-5, f"component {comp}, key {key}: rel {rel}"


def test_accept_9_absorbing_set_invariance():
    rng = random.Random(20240817)
    box = absorbing_box(BENCH)
    for _ in range(10_000):
        x0, y0 = rng.uniform(0.0, 10.0), rng.uniform(0.0, 10.0)
        orbit = iterate(BENCH, State(x0, y0), 120)
        entered = None
        for k, st in enumerate(orbit.samples):
            inside = box.contains(st, slack=1e-9)
            if entered is None and inside:
                entered = k
            elif entered is not None:
                assert inside, f"start ({x0}, {y0}) escaped at step {k}"
        assert entered is not None, f"start ({x0}, {y0}) never entered"


def _random_valid_params(rng):
    while True:
        p = ModelParams(r=rng.uniform(0.5, 4.0), b0=rng.uniform(0.5, 10.0),
                        gamma=rng.uniform(0.05, 5.0), c=rng.uniform(0.1, 0.95),
                        s=rng.uniform(0.05, 0.9))
        rmin = existence_threshold(p)
        if rmin is not None and p.r > rmin:
            return p


def test_accept_9_jury_b_c_positive_and_no_complex_large_det():
    rng = random.Random(987654321)
    for _ in range(1000):
        p = _random_valid_params(rng)
        rep = classify_positive(p, solve_positive(p))
        assert rep.jury_b > 0, p
        assert rep.jury_c > 0, p
        disc = rep.trace * rep.trace - 4.0 * rep.det
        if disc < 0:
            assert abs(rep.det) < 1.0, p


def test_accept_9_operator_expands_below_fixed_level():
    for r in (0.83, 0.90, 1.0):
        pr = BENCH.with_r(r)
        assert global_stability_criterion(pr)
        ncs = build(pr)
        y0 = y_lower(ncs)
        for k in range(100):
            y = y0 + (ncs.y_star - y0) * k / 100.0
            assert R_operator(ncs, "U", y) > y, (r, y)


def test_accept_9_cycle_minimality_and_eigenvalues():
    for r, expected in [(1.0, 1), (3.00, 2), (3.20, 4), (3.27, 8)]:
        pr = BENCH.with_r(r)
        res = detect_period(pr, START)
        assert res.period == expected
        q = res.representative
        # Minimality: no proper divisor closes the cycle.
        for d in range(1, res.period):
            if res.period % d == 0:
                _, img = _orbit_jacobian(pr, q, d)
                assert max(abs(img.x - q.x), abs(img.y - q.y)) > 1e-6
        m1, m2 = cycle_multipliers(pr, q, res.period)
        assert abs(m1) < 1.0 and abs(m2) < 1.0


def test_accept_9_similarity_transformation():
    import numpy as np

    rep = flip_coefficients(BENCH)
    tab = gtilde_partials(BENCH, rep.r_star)
    i, j = tab.i, tab.j
    J0 = np.array([
        [i[(1, 0, 0)], i[(0, 1, 0)], i[(0, 0, 1)]],
        [0.0, 1.0, 0.0],
        [j[(1, 0, 0)], j[(0, 1, 0)], j[(0, 0, 1)]],
    ])
    eta1, eta2, _, _ = rep.eta
    T = np.array([[eta1, 0.0, eta2],
                  [0.0, 1.0, 0.0],
                  [1.0, 0.0, 1.0]])
    D = np.linalg.solve(T, J0 @ T)
    assert np.max(np.abs(D - np.diag([-1.0, 1.0, -rep.det_J]))) <= 1e-8
