"""Fixed points of the map and their stability.

Three fixed points can exist: the origin, the predator-free point (r, 0) and
a unique interior point p* = (x*, y*).  x* solves the scalar equation
zeta_inv(x) = r on the bracket (x_hat, r), where

    zeta_inv(x) = ln( c*b0*x / ((1-s)*(1+gamma*x)) ) + x

and y* follows in closed form.  Stability is decided by the Jury quantities
of the analytic Jacobian.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Tuple

from .errors import DomainError, NoPositiveFixedPoint
from .model import ModelParams, State, step

STABLE = "stable"
UNSTABLE = "unstable"
FLIP_BOUNDARY = "flip_boundary"

_BOUNDARY_TOL = 1e-10


@dataclass(frozen=True)
class PositiveFixedPoint:
    x_star: float
    y_star: float
    residual: float
    bracket: Tuple[float, float]

    @property
    def state(self) -> State:
        return State(self.x_star, self.y_star)


@dataclass(frozen=True)
class StabilityReport:
    trace: float
    det: float
    jury_a: float  # 1 + det + tr
    jury_b: float  # 1 + det - tr
    jury_c: float  # 1 - det
    classification: str
    non_hyperbolic: bool = False
    globally_stable: Optional[bool] = None


def _classify(tr: float, det: float) -> StabilityReport:
    a = 1.0 + det + tr
    b = 1.0 + det - tr
    c = 1.0 - det
    if min(abs(a), abs(b), abs(c)) < _BOUNDARY_TOL:
        cls = FLIP_BOUNDARY
    elif a > 0 and b > 0 and c > 0:
        cls = STABLE
    else:
        cls = UNSTABLE
    return StabilityReport(trace=tr, det=det, jury_a=a, jury_b=b, jury_c=c,
                           classification=cls)


def existence_threshold(params: ModelParams) -> Optional[float]:
    """Minimal r for an interior fixed point; None if none exists for any r.

    The r field of `params` is ignored.
    """
    b0, gamma, c, s = params.b0, params.gamma, params.c, params.s
    if c * b0 <= (1.0 - s) * gamma:
        return None
    return (1.0 - s) / (c * b0 - (1.0 - s) * gamma)


def x_hat(params: ModelParams) -> float:
    """Zero of the predator nullcline V, the lower solve bracket endpoint."""
    b0, gamma, c, s = params.b0, params.gamma, params.c, params.s
    denom = c * b0 - gamma * (1.0 - s)
    if denom <= 0:
        raise NoPositiveFixedPoint(
            f"c*b0 = {c * b0} must exceed (1-s)*gamma = {(1.0 - s) * gamma}")
    return (1.0 - s) / denom


def zeta_inverse(params: ModelParams, x: float) -> float:
    """The increasing map whose root at level r gives x*."""
    b0, gamma, c, s = params.b0, params.gamma, params.c, params.s
    if x <= 0:
        raise DomainError(f"zeta_inverse requires x > 0, got {x}")
    return math.log(c * b0 * x / ((1.0 - s) * (1.0 + gamma * x))) + x


def y_from_x(params: ModelParams, x: float) -> float:
    """Predator coordinate of the interior fixed point given its prey one."""
    b0, gamma, c, s = params.b0, params.gamma, params.c, params.s
    return b0 * x / ((1.0 - s) * (1.0 + gamma * x)) - 1.0 / c


def solve_positive(params: ModelParams, tol: float = 1e-12) -> PositiveFixedPoint:
    """Locate the unique interior fixed point by bracketed bisection.

    Raises NoPositiveFixedPoint when the existence condition fails.
    """
    r = params.r
    rmin = existence_threshold(params)
    if rmin is None:
        raise NoPositiveFixedPoint(
            f"c*b0 = {params.c * params.b0} <= (1-s)*gamma = "
            f"{(1.0 - params.s) * params.gamma}: no interior fixed point for any r")
    if r <= rmin:
        raise NoPositiveFixedPoint(
            f"r = {r} <= (1-s)/(c*b0-(1-s)*gamma) = {rmin}")

    lo = x_hat(params)
    hi = r
    bracket = (lo, hi)
    # zeta_inverse(lo) = lo < r and zeta_inverse(hi) > r, so bisection is safe.
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if zeta_inverse(params, mid) < r:
            lo = mid
        else:
            hi = mid
        if hi - lo < tol:
            break
    x = 0.5 * (lo + hi)
    # Newton polish, constrained to the bracket.
    for _ in range(4):
        f = zeta_inverse(params, x) - r
        fp = 1.0 / x - params.gamma / (1.0 + params.gamma * x) + 1.0
        x_new = x - f / fp
        if bracket[0] < x_new < bracket[1]:
            x = x_new
    y = y_from_x(params, x)
    sx, sy = step(params, State(x, y))
    residual = max(abs(sx - x), abs(sy - y))
    return PositiveFixedPoint(x_star=x, y_star=y, residual=residual,
                              bracket=bracket)


def positive_jacobian(params: ModelParams, p: PositiveFixedPoint):
    """Closed-form Jacobian at the interior fixed point."""
    c, s, gamma = params.c, params.s, params.gamma
    x, y = p.x_star, p.y_star
    return [
        [1.0 - x, -c * x / (1.0 + c * y)],
        [(1.0 - s) * y / (x * (1.0 + gamma * x)), s + (1.0 - s) / (1.0 + c * y)],
    ]


def classify_trivial(params: ModelParams) -> StabilityReport:
    """Stability of the origin: eigenvalues e^r and s."""
    lam1 = math.exp(params.r)
    tr = lam1 + params.s
    det = lam1 * params.s
    rep = _classify(tr, det)
    if params.r == 0.0:
        return StabilityReport(tr, det, rep.jury_a, rep.jury_b, rep.jury_c,
                               rep.classification, non_hyperbolic=True)
    return rep


def classify_predator_free(params: ModelParams) -> StabilityReport:
    """Stability of (r, 0); requires r > 0.

    The report's globally_stable flag records the closed-form global
    criterion 0 < r <= 1 together with the local predator inequality.
    """
    r, b0, gamma, c, s = params.r, params.b0, params.gamma, params.c, params.s
    if r <= 0:
        raise DomainError(f"predator-free fixed point requires r > 0, got {r}")
    lam1 = 1.0 - r
    lam2 = s + c * b0 * r / (1.0 + gamma * r)
    rep = _classify(lam1 + lam2, lam1 * lam2)
    glob = (0.0 < r <= 1.0) and lam2 < 1.0
    return StabilityReport(rep.trace, rep.det, rep.jury_a, rep.jury_b,
                           rep.jury_c, rep.classification,
                           non_hyperbolic=(r == 2.0 or lam2 == 1.0),
                           globally_stable=glob)


def classify_positive(params: ModelParams, p: PositiveFixedPoint) -> StabilityReport:
    """Jury classification of the interior fixed point."""
    J = positive_jacobian(params, p)
    tr = J[0][0] + J[1][1]
    det = J[0][0] * J[1][1] - J[0][1] * J[1][0]
    return _classify(tr, det)


def sufficient_local_criterion(params: ModelParams) -> bool:
    """Closed-form sufficient (not necessary) local stability bound on r."""
    b0, gamma, c, s = params.b0, params.gamma, params.c, params.s
    bound = 2.0 + math.log(2.0 * c * b0 / ((1.0 - s) * (1.0 + 2.0 * gamma)))
    return params.r <= bound


def global_stability_criterion(params: ModelParams) -> bool:
    """True iff r <= 1 and the nullcline inequality holds at x*.

    True guarantees orbit convergence to p* from any interior start.
    """
    if params.r > 1.0:
        return False
    p = solve_positive(params)
    b0, gamma, c, s = params.b0, params.gamma, params.c, params.s
    x = p.x_star
    rhs = (1.0 - s + c * b0 * params.r) / (c * b0 - (1.0 - s) * gamma)
    return gamma * x * x + 2.0 * x > rhs


def corollary_lower_bound(params: ModelParams, r: float) -> float:
    """Closed-form transcendental bound whose value below r certifies
    global stability; returns +inf outside its domain."""
    b0, gamma, c, s = params.b0, params.gamma, params.c, params.s
    denom = c * b0 - (1.0 - s) * gamma
    root1 = math.sqrt(denom / (c * b0 * (1.0 + gamma * r)))
    arg = (1.0 - root1) * c * b0 / (gamma * (1.0 - s))
    if arg <= 0:
        return math.inf
    term2 = (math.sqrt(gamma * (1.0 - s + c * b0 * r) / denom + 1.0) - 1.0) / gamma
    return math.log(arg) + term2


def corollary_sufficient_window(params: ModelParams,
                                grid: int = 1024) -> Optional[Tuple[float, float]]:
    """Sub-interval of (r_min, 1] where the closed-form bound certifies a
    globally stable interior fixed point, or None if empty.

    The bound is evaluated numerically on a grid and the edges refined by
    bisection; the r field of `params` is ignored.
    """
    rmin = existence_threshold(params)
    if rmin is None or rmin >= 1.0:
        return None

    def holds(r):
        return corollary_lower_bound(params, r) < r

    lo_edge = rmin + (1.0 - rmin) * 1e-9
    rs = [lo_edge + (1.0 - lo_edge) * k / (grid - 1) for k in range(grid)]
    flags = [holds(r) for r in rs]
    if not any(flags):
        return None
    first = flags.index(True)
    last = len(flags) - 1 - flags[::-1].index(True)
    left = rs[first]
    if first > 0:
        a, b = rs[first - 1], rs[first]
        for _ in range(60):
            m = 0.5 * (a + b)
            if holds(m):
                b = m
            else:
                a = m
        left = b
    right = rs[last]
    if last < len(rs) - 1:
        a, b = rs[last], rs[last + 1]
        for _ in range(60):
            m = 0.5 * (a + b)
            if holds(m):
                a = m
            else:
                b = m
        right = a
    return (left, right)
