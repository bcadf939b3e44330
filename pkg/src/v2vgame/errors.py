"""Exception hierarchy for the broadcast-game solver.

Everything raised on purpose by this package derives from GameError, so
callers can catch one type at the boundary.  Validation problems (bad
parameters, malformed curves, a fixed accident probability outside the
crash curve's range) share the ValidationError base because they all mean
"this instance is not solvable as posed" rather than "the solver broke".
"""

from __future__ import annotations


class GameError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(GameError):
    """An instance or argument failed validation before any solving began."""


class RangeError(ValidationError):
    """A scalar parameter is outside its admissible range."""


class CurveError(ValidationError):
    """A technology or crash curve is malformed or violates an ordering."""


class ExoRangeError(ValidationError):
    """A fixed accident probability lies outside the crash curve's range."""


class DegenerateError(GameError):
    """Thresholds are undefined because the technology carries no signal."""


class ConditioningError(GameError):
    """A posterior was requested conditional on a probability-zero event."""


class IllegalStrategyError(GameError):
    """A strategy was used with an agent type that may not play it."""


class ModelMismatchError(GameError):
    """Objects built under different agent models were combined."""


class SolverError(GameError):
    """Base class for failures inside equilibrium computation."""


class ExhaustivenessError(SolverError):
    """No outcome family matched; indicates a broken classification chain."""


class BracketError(SolverError):
    """A root-finding bracket does not straddle a sign change."""


class NonConvergenceError(SolverError):
    """Iteration hit its cap before reaching the requested tolerance."""


class ModeError(GameError):
    """An analysis routine was invoked on results of the wrong mode."""


class StatisticalFailure(GameError):
    """A Monte-Carlo check exceeded its allowed statistical deviation."""
