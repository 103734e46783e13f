"""Core predator-prey map: evaluation, Jacobian, absorbing box, orbits.

The map sends (x, y) to

    x' = x * exp(r - x) / (1 + c*y)
    y' = s*y + (b0*x / (1 + gamma*x)) * (c*y / (1 + c*y))

with prey density x and predator density y.  All operations here are pure
functions of their arguments.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

from .errors import DomainError, NonFiniteOrbitError


@dataclass(frozen=True)
class ModelParams:
    """The five map parameters.

    r is the prey growth exponent (any sign); b0 > 0 the maximal conversion,
    gamma > 0 the conversion saturation, c in (0,1) the consumption scale and
    s in (0,1) the predator survival.
    """

    r: float
    b0: float
    gamma: float
    c: float
    s: float

    def __post_init__(self):
        for name in ("r", "b0", "gamma", "c", "s"):
            v = getattr(self, name)
            if not math.isfinite(v):
                raise DomainError(f"parameter {name} must be finite, got {v}")
        if self.b0 <= 0:
            raise DomainError(f"b0 must be > 0, got {self.b0}")
        if self.gamma <= 0:
            raise DomainError(f"gamma must be > 0, got {self.gamma}")
        if not 0 < self.c < 1:
            raise DomainError(f"c must be in (0,1), got {self.c}")
        if not 0 < self.s < 1:
            raise DomainError(f"s must be in (0,1), got {self.s}")

    def with_r(self, r: float) -> "ModelParams":
        return ModelParams(r, self.b0, self.gamma, self.c, self.s)


class State(NamedTuple):
    """A nonnegative prey/predator pair."""

    x: float
    y: float


def _check_state(state) -> State:
    x, y = state
    if not (math.isfinite(x) and math.isfinite(y)):
        raise DomainError(f"state must be finite, got {(x, y)}")
    if x < 0 or y < 0:
        raise DomainError(f"state must be nonnegative, got {(x, y)}")
    return State(float(x), float(y))


@dataclass(frozen=True)
class AbsorbingBox:
    """The compact box [0, K1] x [0, K2] that every orbit eventually enters."""

    K1: float
    K2: float

    def contains(self, state, slack: float = 0.0) -> bool:
        x, y = state
        return -slack <= x <= self.K1 + slack and -slack <= y <= self.K2 + slack


@dataclass
class Orbit:
    """A deterministic trajectory segment after an optional transient."""

    samples: list  # of State
    transient_discarded: int
    params: ModelParams = field(repr=False)


def step(params: ModelParams, state) -> State:
    """One application of the map.

    The prey factor 1 - c*y/(1+c*y) is evaluated as 1/(1+c*y), which is
    algebraically identical and avoids cancellation for large c*y.
    """
    x, y = _check_state(state)
    r, b0, gamma, c, s = params.r, params.b0, params.gamma, params.c, params.s
    cy = c * y
    x_next = x * math.exp(r - x) / (1.0 + cy)
    y_next = s * y + (b0 * x / (1.0 + gamma * x)) * (cy / (1.0 + cy))
    return State(x_next, y_next)


def jacobian(params: ModelParams, state):
    """Analytic Jacobian of the map at `state` as a 2x2 nested list."""
    x, y = _check_state(state)
    r, b0, gamma, c, s = params.r, params.b0, params.gamma, params.c, params.s
    e = math.exp(r - x)
    cy1 = 1.0 + c * y
    gx1 = 1.0 + gamma * x
    return [
        [(1.0 - x) * e / cy1, -c * x * e / cy1**2],
        [b0 * c * y / (gx1**2 * cy1), s + b0 * c * x / (gx1 * cy1**2)],
    ]


def absorbing_box(params: ModelParams) -> AbsorbingBox:
    """K1 = e^(r-1), K2 = b0/(gamma*(1-s)) + 1."""
    return AbsorbingBox(
        K1=math.exp(params.r - 1.0),
        K2=params.b0 / (params.gamma * (1.0 - params.s)) + 1.0,
    )


def iterate(params: ModelParams, start, n: int, transient: int = 0) -> Orbit:
    """Apply the map transient + n times and retain the final n states.

    Raises NonFiniteOrbitError with the failing iteration index if the orbit
    leaves the representable range.
    """
    if n < 0 or transient < 0:
        raise DomainError("n and transient must be nonnegative")
    x, y = _check_state(start)
    r, b0, gamma, c, s = params.r, params.b0, params.gamma, params.c, params.s
    samples = []
    total = transient + n
    for k in range(total):
        cy = c * y
        x, y = (
            x * math.exp(r - x) / (1.0 + cy),
            s * y + (b0 * x / (1.0 + gamma * x)) * (cy / (1.0 + cy)),
        )
        if not (math.isfinite(x) and math.isfinite(y)):
            raise NonFiniteOrbitError(k, (x, y))
        if k >= transient:
            samples.append(State(x, y))
    return Orbit(samples=samples, transient_discarded=transient, params=params)


def ricker_1d(r: float, z0: float, n: int) -> list:
    """Orbit of the scalar comparison model z -> z * exp(r - z)."""
    z = float(z0)
    out = [z]
    for _ in range(n):
        z = z * math.exp(r - z)
        out.append(z)
    return out
