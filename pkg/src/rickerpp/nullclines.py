"""Geometric global-stability machinery built on the nullclines.

S is the prey nullcline, V the predator nullcline, and U replaces S by its
chord through (r, 0) and (x*, y*) on [0, r].  The composed operator
R(S_i, y) = V o S_i^{-1} o V o S_i^{-1} (y) drives a nested-rectangle
iteration that constructively verifies convergence to p*.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Tuple

from .errors import DomainError
from .fixed_points import solve_positive, x_hat as _x_hat
from .model import ModelParams


@dataclass(frozen=True)
class NullclineSet:
    params: ModelParams
    x_hat: float
    x_star: float
    y_star: float


@dataclass
class RectangleSequence:
    levels: List[Tuple[float, float, float, float]]  # (Am, AM, Bm, BM)
    converged: bool
    final_gap: float


def build(params: ModelParams) -> NullclineSet:
    p = solve_positive(params)
    return NullclineSet(params=params, x_hat=_x_hat(params),
                        x_star=p.x_star, y_star=p.y_star)


def S_of(ncs: NullclineSet, x: float) -> float:
    """Prey nullcline S(x) = (e^(r-x) - 1)/c, defined for x >= 0."""
    pr = ncs.params
    if x < 0:
        raise DomainError(f"S requires x >= 0, got {x}")
    return (math.exp(pr.r - x) - 1.0) / pr.c


def S_inv(ncs: NullclineSet, y: float) -> float:
    """Closed-form inverse S^{-1}(y) = r - ln(1 + c*y) for y > -1/c."""
    pr = ncs.params
    if 1.0 + pr.c * y <= 0:
        raise DomainError(f"S_inv requires y > -1/c, got {y}")
    return pr.r - math.log(1.0 + pr.c * y)


def V_of(ncs: NullclineSet, x: float) -> float:
    """Predator nullcline V(x) = ((c*b0/(1-s)) * x/(1+gamma*x) - 1)/c."""
    pr = ncs.params
    return ((pr.c * pr.b0 / (1.0 - pr.s)) * x / (1.0 + pr.gamma * x) - 1.0) / pr.c


def V_inv(ncs: NullclineSet, y: float) -> float:
    """Closed-form inverse of V; y must lie below V's horizontal asymptote."""
    pr = ncs.params
    denom = pr.c * pr.b0 - pr.gamma * (1.0 - pr.s) * (1.0 + pr.c * y)
    if denom <= 0:
        raise DomainError(
            f"V_inv: y = {y} at or beyond the horizontal asymptote of V")
    return (1.0 - pr.s) * (1.0 + pr.c * y) / denom


def U_of(ncs: NullclineSet, x: float) -> float:
    """Chord through (r, 0) and (x*, y*) on [0, r]; equals S beyond r."""
    pr = ncs.params
    if x < 0:
        raise DomainError(f"U requires x >= 0, got {x}")
    if x > pr.r:
        return S_of(ncs, x)
    return ncs.y_star * (pr.r - x) / (pr.r - ncs.x_star)


def U_inv(ncs: NullclineSet, y: float) -> float:
    """Piecewise inverse of U: linear solve on [0, U(0)], S branch below 0."""
    pr = ncs.params
    if y < 0:
        return S_inv(ncs, y)
    u0 = ncs.y_star * pr.r / (pr.r - ncs.x_star)  # U(0)
    if y > u0:
        raise DomainError(f"U_inv: y = {y} exceeds U(0) = {u0}")
    return pr.r - y * (pr.r - ncs.x_star) / ncs.y_star


def y_lower(ncs: NullclineSet) -> float:
    """Lower endpoint of the operator's admissible interval, clamped at 0."""
    u_at_xhat = U_of(ncs, ncs.x_hat)
    v_at_r = V_of(ncs, ncs.params.r)
    if v_at_r < u_at_xhat:
        return 0.0
    y = U_of(ncs, V_inv(ncs, u_at_xhat))
    return max(y, 0.0)


def R_operator(ncs: NullclineSet, which: str, y: float) -> float:
    """The four-fold composition V o S_i^{-1} o V o S_i^{-1} at y.

    `which` selects the decreasing function: "S" or "U" (the chord variant).
    Domain errors from inner inverses are re-raised naming the failing stage.
    """
    if which == "S":
        inv = S_inv
    elif which == "U":
        inv = U_inv
    else:
        raise DomainError(f"which must be 'S' or 'U', got {which!r}")
    stages = ("inner inverse", "inner V", "outer inverse", "outer V")
    funcs = (lambda t: inv(ncs, t), lambda t: V_of(ncs, t),
             lambda t: inv(ncs, t), lambda t: V_of(ncs, t))
    val = y
    for stage, f in zip(stages, funcs):
        try:
            val = f(val)
        except DomainError as exc:
            raise DomainError(f"R({which}, {y}): {stage} failed: {exc}") from exc
    return val


def rectangle_iteration(ncs: NullclineSet, max_levels: int = 10_000,
                        tol: float = 1e-10) -> RectangleSequence:
    """Nested rectangles D_k contracting toward p* under the S/V recursion.

    Level 0 uses Am = S^{-1}(V(S^{-1}(0))), AM = r and the V images as the
    y-bounds; each later level maps the previous bounds through S^{-1} o V
    and V o S^{-1}.  Stops when the largest side drops below tol.  When the
    global-stability criterion fails the rectangles stall; converged stays
    False and the caller sees the final gap.
    """
    pr = ncs.params
    try:
        Am = S_inv(ncs, V_of(ncs, S_inv(ncs, 0.0)))
        AM = pr.r
        Bm = V_of(ncs, Am)
        BM = V_of(ncs, AM)
    except DomainError as exc:
        raise DomainError(f"rectangle_iteration: level 0 failed: {exc}") from exc
    levels = [(Am, AM, Bm, BM)]
    converged = False
    gap = max(AM - Am, BM - Bm)
    for level in range(1, max_levels + 1):
        try:
            Am_new = S_inv(ncs, V_of(ncs, AM))
            AM_new = S_inv(ncs, V_of(ncs, Am))
            Bm_new = V_of(ncs, S_inv(ncs, BM))
            BM_new = V_of(ncs, S_inv(ncs, Bm))
        except DomainError as exc:
            raise DomainError(
                f"rectangle_iteration: level {level} failed: {exc}") from exc
        # Clamp to enforce nesting against rounding noise.
        Am = max(Am, Am_new)
        AM = min(AM, AM_new)
        Bm = max(Bm, Bm_new)
        BM = min(BM, BM_new)
        levels.append((Am, AM, Bm, BM))
        new_gap = max(AM - Am, BM - Bm)
        if new_gap < tol:
            converged = True
            gap = new_gap
            break
        if new_gap >= gap * (1.0 - 1e-15) and level > 8:
            # Stalled: no contraction in this regime.
            gap = new_gap
            break
        gap = new_gap
    return RectangleSequence(levels=levels, converged=converged, final_gap=gap)
