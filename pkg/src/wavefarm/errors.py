"""Exception types shared across the package."""


class WavefarmError(Exception):
    """Base class for all errors raised by this package."""


class ExtrapolationError(WavefarmError):
    """A frequency outside the tabulated range was requested."""


class InvalidLayoutError(WavefarmError):
    """Layout positions are malformed (non-finite, wrong shape, ...)."""


class SolverError(WavefarmError):
    """The coupled motion system is singular or too ill-conditioned."""


class InvalidClimateError(WavefarmError):
    """A wave climate violates its invariants (weights, empty grid, ...)."""


class UndefinedQError(WavefarmError):
    """q-factor requested but the isolated-buoy power is zero."""


class InvalidStartError(WavefarmError):
    """Simplex start point has a non-finite objective value."""


class InvalidBudgetError(WavefarmError):
    """Evaluation budget is too small or malformed."""


class InvalidParamsError(WavefarmError):
    """Optimizer parameters are out of their valid range."""


class InfeasibleTileError(WavefarmError):
    """Sub-layout construction could not produce a feasible tile."""


class BudgetExhausted(WavefarmError):
    """Internal signal: the evaluation budget ran out mid-search."""


class ConfigError(WavefarmError):
    """Experiment configuration file is malformed."""
