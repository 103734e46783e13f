"""Exception hierarchy for the toolkit."""


class RickerError(Exception):
    """Base class for all toolkit errors."""


class DomainError(RickerError):
    """Input outside the mathematical domain of an operation."""


class NonFiniteOrbitError(RickerError):
    """An orbit produced a non-finite state.

    Attributes
    ----------
    index : iteration index at which the state became non-finite.
    """

    def __init__(self, index, state):
        self.index = index
        self.state = state
        super().__init__(f"non-finite state {state} at iteration {index}")


class NoPositiveFixedPoint(RickerError):
    """The existence condition for the interior fixed point fails."""


class BracketError(RickerError):
    """A root bracket does not enclose a sign change."""


class DegenerateTransformError(RickerError):
    """The eigenvector transformation is singular (eta2 == eta1)."""
