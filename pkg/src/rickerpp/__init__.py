"""Analysis toolkit for a discrete Ricker-type predator-prey map."""

from .errors import (
    BracketError,
    DegenerateTransformError,
    DomainError,
    NonFiniteOrbitError,
    NoPositiveFixedPoint,
    RickerError,
)
from .model import (
    AbsorbingBox,
    ModelParams,
    Orbit,
    State,
    absorbing_box,
    iterate,
    jacobian,
    ricker_1d,
    step,
)
from .fixed_points import (
    PositiveFixedPoint,
    StabilityReport,
    classify_positive,
    classify_predator_free,
    classify_trivial,
    corollary_lower_bound,
    corollary_sufficient_window,
    existence_threshold,
    global_stability_criterion,
    solve_positive,
    sufficient_local_criterion,
)
from .nullclines import (
    NullclineSet,
    RectangleSequence,
    R_operator,
    build,
    rectangle_iteration,
)
from .flip import (
    FlipReport,
    find_flip_r,
    flip_coefficients,
    gtilde_partials,
    verify_flip_by_simulation,
)
from .orbits import (
    LyapunovEstimate,
    PeriodResult,
    SweepRow,
    cycle_multipliers,
    detect_period,
    find_chaos_onset,
    find_doubling_threshold,
    lyapunov1,
    sweep,
)

__version__ = "0.1.0"
