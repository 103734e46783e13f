import math

import pytest

from rickerpp import (
    BracketError,
    DomainError,
    State,
    cycle_multipliers,
    detect_period,
    find_doubling_threshold,
    lyapunov1,
    solve_positive,
    step,
    sweep,
)
from _oracles import brute_force_cycle_points

START = State(1.0, 1.0)


def test_period_one_at_stable_parameters(bench_params):
    res = detect_period(bench_params, START)
    assert res.period == 1
    p = solve_positive(bench_params)
    assert res.representative.x == pytest.approx(p.x_star, abs=1e-9)
    assert res.representative.y == pytest.approx(p.y_star, abs=1e-9)
    assert res.refined and res.residual < 1e-10


def test_period_two_past_the_flip(bench_params):
    res = detect_period(bench_params.with_r(3.0), START)
    assert res.period == 2
    assert res.residual < 1e-10
    # Cross-check the cycle against plain iteration.
    pts = brute_force_cycle_points(bench_params.with_r(3.0), START, 2)
    dists = [math.hypot(res.representative.x - px, res.representative.y - py)
             for px, py in pts]
    assert min(dists) < 1e-6


def test_period_minimality_not_a_divisor_artifact(bench_params):
    """Asking with a generous cap must not return a multiple of the true
    period."""
    res = detect_period(bench_params.with_r(3.0), START, cap=64)
    assert res.period == 2


def test_detected_cycle_is_attracting(bench_params):
    for r, p in [(3.0, 2), (3.2, 4)]:
        res = detect_period(bench_params.with_r(r), START)
        assert res.period == p
        m1, m2 = cycle_multipliers(bench_params.with_r(r),
                                   res.representative, p)
        assert abs(m1) < 1.0 and abs(m2) < 1.0


def test_no_period_in_chaotic_band(bench_params):
    res = detect_period(bench_params.with_r(3.30), START)
    assert res.period is None
    assert not res.refined


def test_detect_period_argument_validation(bench_params):
    with pytest.raises(DomainError):
        detect_period(bench_params, START, cap=0)
    with pytest.raises(DomainError):
        detect_period(bench_params, START, tol=-1.0)


def test_cycle_points_map_onto_each_other(bench_params):
    pr = bench_params.with_r(3.2)
    res = detect_period(pr, START)
    q = res.representative
    for _ in range(res.period):
        q = step(pr, q)
    assert q.x == pytest.approx(res.representative.x, abs=1e-9)
    assert q.y == pytest.approx(res.representative.y, abs=1e-9)


def test_lyapunov_negative_on_stable_fixed_point(bench_params):
    est = lyapunov1(bench_params, START, n=20_000)
    assert est.lambda1 < -0.05
    assert not est.degenerate


def test_lyapunov_positive_in_chaos(bench_params):
    est = lyapunov1(bench_params.with_r(3.30), START, n=100_000)
    assert est.lambda1 > 0.05


def test_lyapunov_rejects_tiny_sample(bench_params):
    with pytest.raises(DomainError):
        lyapunov1(bench_params, START, n=100)


def test_doubling_threshold_two_to_four(bench_params):
    r = find_doubling_threshold(bench_params, 3.05, 3.17, from_period=2)
    assert r == pytest.approx(3.1247, abs=2e-3)


def test_doubling_threshold_bad_bracket(bench_params):
    with pytest.raises(BracketError):
        find_doubling_threshold(bench_params, 3.05, 3.17, from_period=4)


def test_sweep_shapes_and_errors(bench_params):
    rows = sweep(bench_params, 0.9, 3.0, steps=5, M=8, with_period=True)
    assert len(rows) == 5
    for row in rows:
        assert row.error is None
        assert len(row.attractor_samples) == 8
    assert rows[0].period == 1
    assert rows[-1].period == 2
    with pytest.raises(DomainError):
        sweep(bench_params, 0.9, 3.0, steps=1)
