"""Long-run orbit diagnostics: period detection, Lyapunov exponents,
doubling thresholds and parameter sweeps."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

from .errors import BracketError, DomainError
from .model import ModelParams, State, jacobian, step

DEFAULT_START = State(1.0, 1.0)
DEFAULT_TRANSIENT = 10_000
ESCALATED_TRANSIENT = 200_000
PERIOD_CAP = 64
RECURRENCE_TOL = 1e-6
REFINE_TOL = 1e-11
CHAOS_LYAP_MIN = 0.01


@dataclass
class PeriodResult:
    period: Optional[int]
    representative: State
    residual: float
    refined: bool = True


@dataclass
class LyapunovEstimate:
    lambda1: float
    n: int
    transient: int
    degenerate: bool = False


@dataclass
class SweepRow:
    r: float
    attractor_samples: List[State]
    period: Optional[int] = None
    lambda1: Optional[float] = None
    error: Optional[str] = None


def _advance(params: ModelParams, x: float, y: float, n: int):
    r, b0, gamma, c, s = params.r, params.b0, params.gamma, params.c, params.s
    for _ in range(n):
        cy = c * y
        x, y = (
            x * math.exp(r - x) / (1.0 + cy),
            s * y + (b0 * x / (1.0 + gamma * x)) * (cy / (1.0 + cy)),
        )
    return x, y


def _orbit_jacobian(params: ModelParams, q: State, p: int):
    """Product of step Jacobians along p iterates from q, and G^p(q)."""
    M = [[1.0, 0.0], [0.0, 1.0]]
    state = q
    for _ in range(p):
        J = jacobian(params, state)
        M = [
            [J[0][0] * M[0][0] + J[0][1] * M[1][0],
             J[0][0] * M[0][1] + J[0][1] * M[1][1]],
            [J[1][0] * M[0][0] + J[1][1] * M[1][0],
             J[1][0] * M[0][1] + J[1][1] * M[1][1]],
        ]
        state = step(params, state)
    return M, state


def _refine_cycle(params: ModelParams, q: State, p: int,
                  tol: float = REFINE_TOL):
    """Damped Newton on G^p(q) = q; returns (point, residual, converged)."""
    x, y = q
    for _ in range(60):
        M, image = _orbit_jacobian(params, State(x, y), p)
        fx, fy = image.x - x, image.y - y
        res = max(abs(fx), abs(fy))
        if res <= tol:
            return State(x, y), res, True
        a, b = M[0][0] - 1.0, M[0][1]
        c_, d = M[1][0], M[1][1] - 1.0
        det = a * d - b * c_
        if det == 0.0 or not math.isfinite(det):
            break
        dx = (d * fx - b * fy) / det
        dy = (a * fy - c_ * fx) / det
        lam = 1.0
        stepped = False
        for _ in range(8):
            xn, yn = x - lam * dx, y - lam * dy
            if xn >= 0.0 and yn >= 0.0 and math.isfinite(xn) and math.isfinite(yn):
                _, img = _orbit_jacobian(params, State(xn, yn), p)
                new_res = max(abs(img.x - xn), abs(img.y - yn))
                if new_res < res:
                    x, y = xn, yn
                    stepped = True
                    break
            lam *= 0.5
        if not stepped:
            break
    _, image = _orbit_jacobian(params, State(x, y), p)
    return State(x, y), max(abs(image.x - x), abs(image.y - y)), False


def _proper_divisors(p: int):
    return [d for d in range(1, p) if p % d == 0]


def detect_period(params: ModelParams, start: State = DEFAULT_START,
                  cap: int = PERIOD_CAP, tol: float = RECURRENCE_TOL,
                  transient: int = DEFAULT_TRANSIENT,
                  max_transient: int = ESCALATED_TRANSIENT) -> PeriodResult:
    """Minimal period of the attractor reached from `start`.

    Looks for the smallest p <= cap whose recurrence error stays below tol
    over 4p consecutive checks, refines the cycle point with Newton on
    G^p(q) = q, and rejects non-minimal candidates via proper divisors.
    When nothing recurs within the transient the burn-in is escalated once
    up to max_transient before giving up.
    """
    if cap < 1:
        raise DomainError(f"cap must be >= 1, got {cap}")
    if tol <= 0:
        raise DomainError(f"tol must be > 0, got {tol}")
    x, y = float(start[0]), float(start[1])
    window = 6 * cap
    burned = 0
    budget = transient
    while True:
        x, y = _advance(params, x, y, budget - burned)
        burned = budget
        seq = []
        sx, sy = x, y
        for _ in range(window):
            seq.append((sx, sy))
            sx, sy = _advance(params, sx, sy, 1)
        found = None
        for p in range(1, cap + 1):
            ok = True
            for k in range(min(4 * p, window - p)):
                a, b = seq[k], seq[k + p]
                if max(abs(a[0] - b[0]), abs(a[1] - b[1])) >= tol:
                    ok = False
                    break
            if ok:
                found = p
                break
        if found is not None:
            break
        if burned >= max_transient:
            return PeriodResult(period=None, representative=State(x, y),
                                residual=math.inf, refined=False)
        budget = max_transient

    q, res, converged = _refine_cycle(params, State(*seq[0]), found)
    if not converged:
        return PeriodResult(period=found, representative=q, residual=res,
                            refined=False)
    # Minimality: collapse to the smallest divisor that already closes up.
    for d in _proper_divisors(found):
        _, image = _orbit_jacobian(params, q, d)
        if max(abs(image.x - q.x), abs(image.y - q.y)) < 1e-8:
            qd, res_d, conv_d = _refine_cycle(params, q, d)
            return PeriodResult(period=d, representative=qd, residual=res_d,
                                refined=conv_d)
    return PeriodResult(period=found, representative=q, residual=res,
                        refined=True)


def cycle_multipliers(params: ModelParams, q: State, p: int):
    """Eigenvalues of the Jacobian product around a p-cycle."""
    M, _ = _orbit_jacobian(params, q, p)
    tr = M[0][0] + M[1][1]
    det = M[0][0] * M[1][1] - M[0][1] * M[1][0]
    disc = tr * tr / 4.0 - det
    if disc >= 0:
        rt = math.sqrt(disc)
        return complex(tr / 2.0 + rt), complex(tr / 2.0 - rt)
    rt = math.sqrt(-disc)
    return complex(tr / 2.0, rt), complex(tr / 2.0, -rt)


def lyapunov1(params: ModelParams, start: State = DEFAULT_START,
              n: int = 1_000_000, transient: int = DEFAULT_TRANSIENT) -> LyapunovEstimate:
    """Largest Lyapunov exponent by tangent-vector renormalization.

    Natural-log units per iterate; deterministic for fixed arguments.
    """
    if n < 10_000:
        raise DomainError(f"lyapunov1 requires n >= 10^4, got {n}")
    r, b0, gamma, c, s = params.r, params.b0, params.gamma, params.c, params.s
    x, y = float(start[0]), float(start[1])
    x, y = _advance(params, x, y, transient)
    v0, v1 = 1.0, 0.0
    acc = 0.0
    for _ in range(n):
        e = math.exp(r - x)
        cy1 = 1.0 + c * y
        gx1 = 1.0 + gamma * x
        j00 = (1.0 - x) * e / cy1
        j01 = -c * x * e / (cy1 * cy1)
        j10 = b0 * c * y / (gx1 * gx1 * cy1)
        j11 = s + b0 * c * x / (gx1 * cy1 * cy1)
        w0 = j00 * v0 + j01 * v1
        w1 = j10 * v0 + j11 * v1
        norm = math.hypot(w0, w1)
        acc += math.log(norm)
        v0, v1 = w0 / norm, w1 / norm
        cy = c * y
        x, y = x * e / (1.0 + cy), s * y + (b0 * x / gx1) * (cy / (1.0 + cy))
    degenerate = x < 1e-12 and y < 1e-12
    return LyapunovEstimate(lambda1=acc / n, n=n, transient=transient,
                            degenerate=degenerate)


def find_doubling_threshold(params: ModelParams, r_lo: float, r_hi: float,
                            from_period: int, r_tol: float = 1e-4,
                            start: State = DEFAULT_START) -> float:
    """Bisect the parameter where the attractor period leaves from_period.

    Requires period from_period at r_lo and 2*from_period at r_hi; any
    sample inside the bracket that is neither from_period nor a higher
    multiple of it signals periodic-window interference and raises.
    """
    p_lo = detect_period(params.with_r(r_lo), start).period
    p_hi = detect_period(params.with_r(r_hi), start).period
    if p_lo != from_period or p_hi != 2 * from_period:
        raise BracketError(
            f"bracket does not straddle a {from_period}->{2 * from_period} "
            f"doubling: period({r_lo}) = {p_lo}, period({r_hi}) = {p_hi}")
    conflicts = []
    lo, hi = r_lo, r_hi
    while hi - lo > r_tol:
        mid = 0.5 * (lo + hi)
        p = detect_period(params.with_r(mid), start).period
        if p == from_period:
            lo = mid
        elif p is not None and p > from_period and p % from_period == 0:
            hi = mid
        else:
            conflicts.append((mid, p))
            raise BracketError(
                f"non-monotone period inside bracket: samples {conflicts}")
    return 0.5 * (lo + hi)


def find_chaos_onset(params: ModelParams, r_lo: float, r_hi: float,
                     r_tol: float = 1e-4, start: State = DEFAULT_START,
                     lyap_n: int = 400_000) -> float:
    """Bisect the edge of the doubling cascade where chaos begins.

    A parameter value counts as past the onset when no period is detected
    and lambda1 > 0, or when the detected period is not a power of two:
    such periods only arise in the periodic windows embedded in the chaotic
    regime, so treating them as past-onset keeps the bisection monotone.
    """

    def past_onset(r):
        pr = params.with_r(r)
        p = detect_period(pr, start).period
        if p is not None:
            return p & (p - 1) != 0  # window period, not a cascade power of 2
        return lyapunov1(pr, start, n=lyap_n, transient=50_000).lambda1 > 0.0

    if past_onset(r_lo) or not past_onset(r_hi):
        raise BracketError(
            f"bracket [{r_lo}, {r_hi}] does not straddle the chaos onset")
    lo, hi = r_lo, r_hi
    while hi - lo > r_tol:
        mid = 0.5 * (lo + hi)
        if past_onset(mid):
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def sweep(params: ModelParams, r_from: float, r_to: float, steps: int,
          M: int = 64, start: State = DEFAULT_START,
          with_period: bool = True, with_lyapunov: bool = False,
          lyap_n: int = 100_000,
          transient: int = DEFAULT_TRANSIENT) -> List[SweepRow]:
    """Uniform r grid of attractor samples with optional diagnostics.

    Per-row failures are recorded on the row and never abort the sweep.
    """
    if steps < 2:
        raise DomainError(f"steps must be >= 2, got {steps}")
    rows = []
    for k in range(steps):
        r = r_from + (r_to - r_from) * k / (steps - 1)
        pr = params.with_r(r)
        row = SweepRow(r=r, attractor_samples=[])
        try:
            x, y = _advance(pr, float(start[0]), float(start[1]), transient)
            for _ in range(M):
                x, y = _advance(pr, x, y, 1)
                row.attractor_samples.append(State(x, y))
            if with_period:
                row.period = detect_period(pr, start, transient=transient).period
            if with_lyapunov:
                row.lambda1 = lyapunov1(pr, start, n=max(lyap_n, 10_000),
                                        transient=transient).lambda1
        except Exception as exc:  # recorded, not raised
            row.error = f"{type(exc).__name__}: {exc}"
        rows.append(row)
    return rows
