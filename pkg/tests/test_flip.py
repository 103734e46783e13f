import math

import numpy as np
import pytest

from rickerpp import (
    BracketError,
    ModelParams,
    NoPositiveFixedPoint,
    find_flip_r,
    flip_coefficients,
    gtilde_partials,
    solve_positive,
    verify_flip_by_simulation,
)
from rickerpp.flip import _etas
from _oracles import _shifted_components, taylor_oracle


@pytest.fixture(scope="module")
def flip_report():
    params = ModelParams(r=1.0, b0=4.0, gamma=1.5, c=0.9, s=0.1)
    return params, flip_coefficients(params)


def test_flip_point_location(flip_report):
    _, rep = flip_report
    assert rep.r_star == pytest.approx(2.77328546, abs=1e-6)
    assert rep.det_J == pytest.approx(-0.47464348, abs=1e-6)


def test_flip_requires_strong_coupling():
    weak = ModelParams(r=1.0, b0=1.0, gamma=1.5, c=0.5, s=0.1)
    with pytest.raises(NoPositiveFixedPoint):
        find_flip_r(weak)


def test_flip_bad_bracket(flip_report):
    params, _ = flip_report
    with pytest.raises(BracketError):
        find_flip_r(params, bracket=(0.5, 1.0))


def test_flip_scan_finds_single_root(flip_report):
    params, rep = flip_report
    roots = find_flip_r(params, scan=True)
    assert len(roots) == 1
    assert roots[0] == pytest.approx(rep.r_star, abs=1e-9)


def test_shifted_partials_match_richardson_oracle(flip_report):
    params, rep = flip_report
    tab = gtilde_partials(params, rep.r_star)
    oracle_i = taylor_oracle(params, rep.r_star, component=0)
    oracle_j = taylor_oracle(params, rep.r_star, component=1)
    for table, oracle in ((tab.i, oracle_i), (tab.j, oracle_j)):
        for key, val in table.items():
            got = oracle[key]
            if abs(val) < 1e-8:
                assert abs(got) < 1e-6, f"{key}: expected ~0, oracle {got}"
            else:
                assert got == pytest.approx(val, rel=1e-5), f"key {key}"


def test_similarity_diagonalizes_extended_jacobian(flip_report):
    params, rep = flip_report
    tab = gtilde_partials(params, rep.r_star)
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
    want = np.diag([-1.0, 1.0, -rep.det_J])
    assert np.max(np.abs(D - want)) <= 1e-8


def test_eta_transform_nondegenerate(flip_report):
    params, rep = flip_report
    p = solve_positive(params.with_r(rep.r_star))
    eta1, eta2, eta3, eta4 = _etas(p.x_star, p.y_star, params)
    assert rep.eta == pytest.approx((eta1, eta2, eta3, eta4))
    assert abs(eta2 - eta1) > 1e-6


def test_normal_form_coefficients(flip_report):
    _, rep = flip_report
    assert rep.alphas[(2, 0, 0)] == pytest.approx(0.37965, abs=2e-4)
    assert rep.alphas[(1, 0, 1)] == pytest.approx(0.49908, abs=2e-4)
    assert rep.alphas[(3, 0, 0)] == pytest.approx(28.93843, abs=2e-3)
    assert rep.betas[(2, 0, 0)] == pytest.approx(-8.55731, abs=2e-3)
    assert rep.betas[(1, 1, 0)] == pytest.approx(1.75646, abs=2e-4)
    assert rep.sigma1 == pytest.approx(2.0 * rep.alphas[(1, 1, 0)])
    assert rep.sigma2_variants["benchmark"] == pytest.approx(9.7182, abs=1e-3)
    assert rep.classification == "supercritical_right"


def test_parameter_slope_matches_eigenvalue_drift(flip_report):
    """alpha110 equals d(lambda)/dr of the critical eigenvalue at the flip
    point, estimated here from the Jacobian spectrum alone."""
    params, rep = flip_report

    def crit_eig(r):
        from rickerpp.fixed_points import positive_jacobian
        p = solve_positive(params.with_r(r))
        J = positive_jacobian(params.with_r(r), p)
        tr = J[0][0] + J[1][1]
        det = J[0][0] * J[1][1] - J[0][1] * J[1][0]
        disc = math.sqrt(tr * tr / 4.0 - det)
        return tr / 2.0 - disc  # branch near -1

    h = 1e-5
    d1 = (crit_eig(rep.r_star + h) - crit_eig(rep.r_star - h)) / (2 * h)
    d2 = (crit_eig(rep.r_star + h / 2) - crit_eig(rep.r_star - h / 2)) / h
    slope = (4 * d2 - d1) / 3
    assert rep.alphas[(1, 1, 0)] == pytest.approx(slope, rel=1e-7)


def test_center_manifold_tangency_residual(flip_report):
    """v = a1*u^2 + a2*u*mu satisfies the invariance equation to third
    order: the residual shrinks ~8x when (u, mu) is halved."""
    params, rep = flip_report
    eta1, eta2, eta3, _ = rep.eta
    f = _shifted_components(params, rep.r_star)

    def residual(t):
        u, mu = t, t
        v = rep.a1 * u * u + rep.a2 * u * mu
        xt = eta1 * u + eta2 * v
        yt = u + v
        fx, fy = f(xt, mu, yt)
        v_next = eta3 * (fx - eta1 * fy)
        u_next = fy - v_next
        return abs(v_next - (rep.a1 * u_next**2 + rep.a2 * u_next * mu))

    r1, r2 = residual(1e-3), residual(5e-4)
    assert r1 < 1e-7
    assert 5.0 < r1 / r2 < 11.0


def test_flip_picture_confirmed_by_iteration(flip_report):
    params, rep = flip_report
    assert verify_flip_by_simulation(params, rep)
