"""Core game objects: agent models, driver types, strategies, instances,
critical thresholds, and displayed-warning statistics.

A driver chooses how to drive after (possibly) seeing a broadcast hazard
warning.  Equipped drivers split by whether a warning is displayed; the
belief-updating model treats the two displayed states as separate driver
types with posterior beliefs, while the advisory-following model keeps one
equipped type whose Trust strategy simply obeys the display.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum
from typing import NamedTuple

from ._backend import kernel
from .curves import ModelCurves
from .errors import (
    ConditioningError,
    ExoRangeError,
    IllegalStrategyError,
    RangeError,
)


class Model(Enum):
    """How equipped drivers price the displayed warning."""

    BAYESIAN = "bayesian"
    NON_BAYESIAN = "non-bayesian"

    @property
    def code(self) -> int:
        """Integer code used by the scalar kernels."""
        return 0 if self is Model.BAYESIAN else 1


class AgentType(Enum):
    NON_V2V = "n"
    V2V = "v"
    V2V_UNSIGNALED = "vu"
    V2V_SIGNALED = "vs"


class Strategy(Enum):
    CAREFUL = "C"
    RECKLESS = "R"
    TRUST = "T"


_MODEL_TYPES = {
    Model.BAYESIAN: (AgentType.NON_V2V, AgentType.V2V_UNSIGNALED, AgentType.V2V_SIGNALED),
    Model.NON_BAYESIAN: (AgentType.NON_V2V, AgentType.V2V),
}

_LEGAL = {
    (Model.BAYESIAN, AgentType.NON_V2V): (Strategy.CAREFUL, Strategy.RECKLESS),
    (Model.BAYESIAN, AgentType.V2V_UNSIGNALED): (Strategy.CAREFUL, Strategy.RECKLESS),
    (Model.BAYESIAN, AgentType.V2V_SIGNALED): (Strategy.CAREFUL, Strategy.RECKLESS),
    (Model.NON_BAYESIAN, AgentType.NON_V2V): (Strategy.CAREFUL, Strategy.RECKLESS),
    (Model.NON_BAYESIAN, AgentType.V2V): (
        Strategy.TRUST,
        Strategy.CAREFUL,
        Strategy.RECKLESS,
    ),
}


def model_types(model: Model) -> tuple[AgentType, ...]:
    """Driver types present under a model."""
    return _MODEL_TYPES[model]


def legal_strategies(model: Model, agent_type: AgentType) -> tuple[Strategy, ...]:
    """Strategies an agent type may play, or IllegalStrategyError for a type
    absent from the model (e.g. the merged equipped type under belief
    updating)."""
    try:
        return _LEGAL[(model, agent_type)]
    except KeyError:
        raise IllegalStrategyError(
            "%s is not a driver type of the %s model" % (agent_type, model.value)
        ) from None


def check_legal(model: Model, agent_type: AgentType, strategy: Strategy) -> None:
    if strategy not in legal_strategies(model, agent_type):
        raise IllegalStrategyError(
            "%s may not play %s under the %s model"
            % (agent_type, strategy, model.value)
        )


class Thresholds(NamedTuple):
    """Critical accident probabilities, ordered p_vs < p_n <= p_vu.

    Below its threshold a type prefers recklessness, above it caution:
    ``p_vs`` governs drivers facing a displayed warning, ``p_n`` unequipped
    drivers, ``p_vu`` equipped drivers with no warning displayed.  The last
    two coincide exactly when the weighted detection gap beta*(t - f) is 0.
    """

    p_vs: float
    p_n: float
    p_vu: float


def compute_thresholds(beta: float, r: float, t_val: float, f_val: float) -> Thresholds:
    """Thresholds from information quality, cost ratio, and the detection
    rates evaluated at the instance's penetration.

    Raises RangeError on out-of-range scalars and DegenerateError when a
    threshold denominator vanishes (no usable warning content).
    """
    for name, val in (("beta", beta), ("r", r), ("t_val", t_val), ("f_val", f_val)):
        if not math.isfinite(val):
            raise RangeError("%s must be finite, got %r" % (name, val))
    if not 0.0 <= beta <= 1.0:
        raise RangeError("beta must lie in [0, 1], got %r" % beta)
    if r <= 1.0:
        raise RangeError("cost ratio r must exceed 1, got %r" % r)
    if not 0.0 <= f_val <= t_val <= 1.0:
        raise RangeError(
            "detection rates need 0 <= f <= t <= 1, got f=%r t=%r" % (f_val, t_val)
        )
    return Thresholds(*kernel.thresholds(beta, r, t_val, f_val))


def signal_prob(beta: float, t_val: float, f_val: float, p_accident: float) -> float:
    """Probability a warning is displayed when the accident probability is
    p_accident.  Matches the kernel's evaluation order exactly so values are
    interchangeable across layers."""
    return beta * (p_accident * (t_val - f_val) + f_val)


def posterior_signaled(beta: float, t_val: float, f_val: float, p_accident: float) -> float:
    """Accident probability given a displayed warning.

    The display filter applies equally to true and false detections, so
    information quality cancels from the ratio; it still decides whether
    the conditioning event is possible at all.  Raises ConditioningError
    when a warning has probability zero.
    """
    if signal_prob(beta, t_val, f_val, p_accident) <= 0.0:
        raise ConditioningError(
            "posterior conditioned on a warning, but warnings have probability zero"
        )
    den = p_accident * t_val + (1.0 - p_accident) * f_val
    return p_accident * t_val / den


def posterior_unsignaled(beta: float, t_val: float, f_val: float, p_accident: float) -> float:
    """Accident probability given no displayed warning.

    Raises ConditioningError when a warning is displayed almost surely.
    """
    ps = signal_prob(beta, t_val, f_val, p_accident)
    if ps >= 1.0:
        raise ConditioningError(
            "posterior conditioned on no warning, but a warning is displayed "
            "with probability one"
        )
    return p_accident * (1.0 - beta * t_val) / (1.0 - ps)


@dataclass(frozen=True)
class SignalStats:
    """Displayed-state probabilities at a fixed accident probability.

    Posterior fields are None when the conditioning event has probability
    zero; strategy costs conditioned on such states carry no mass.
    """

    p_accident: float
    p_signal: float
    posterior_signaled: float | None
    posterior_unsignaled: float | None


def signal_stats(beta: float, t_val: float, f_val: float, p_accident: float) -> SignalStats:
    ps = signal_prob(beta, t_val, f_val, p_accident)
    try:
        post_s = posterior_signaled(beta, t_val, f_val, p_accident)
    except ConditioningError:
        post_s = None
    try:
        post_u = posterior_unsignaled(beta, t_val, f_val, p_accident)
    except ConditioningError:
        post_u = None
    return SignalStats(p_accident, ps, post_s, post_u)


@dataclass(frozen=True)
class GameInstance:
    """One parameterization of the signaling game.

    ``exo_p`` fixes the accident probability (exogenous mode) when present;
    otherwise the accident probability is determined in equilibrium through
    the crash curve (endogenous mode).  Detection rates are evaluated once
    at the instance's penetration and cached.
    """

    beta: float
    y: float
    r: float
    curves: ModelCurves
    exo_p: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "t_val", float(self.curves.true_positive(self.y)))
        object.__setattr__(self, "f_val", float(self.curves.false_positive(self.y)))

    @property
    def mode(self) -> str:
        return "endogenous" if self.exo_p is None else "exogenous"

    def thresholds(self) -> Thresholds:
        return compute_thresholds(self.beta, self.r, self.t_val, self.f_val)

    def stats_at(self, p_accident: float) -> SignalStats:
        return signal_stats(self.beta, self.t_val, self.f_val, p_accident)

    def with_beta(self, beta: float) -> "GameInstance":
        return replace(self, beta=float(beta))

    def without_exo(self) -> "GameInstance":
        return replace(self, exo_p=None)

    def to_dict(self) -> dict:
        data = {
            "beta": self.beta,
            "y": self.y,
            "r": self.r,
            "curves": self.curves.to_dict(),
        }
        if self.exo_p is not None:
            data["exo_p"] = self.exo_p
        return data

    @classmethod
    def from_dict(cls, data: dict) -> "GameInstance":
        try:
            curves = ModelCurves.from_dict(data["curves"])
            exo = data.get("exo_p")
            return cls(
                beta=float(data["beta"]),
                y=float(data["y"]),
                r=float(data["r"]),
                curves=curves,
                exo_p=None if exo is None else float(exo),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise RangeError("malformed instance mapping: %s" % exc) from exc


def validate_instance(instance: GameInstance) -> GameInstance:
    """Full instance validation; returns the instance when solvable.

    Scalar ranges raise RangeError, curve problems raise CurveError, and a
    fixed accident probability outside the crash curve's value range raises
    ExoRangeError.  All three derive from ValidationError.
    """
    for name, val in (("beta", instance.beta), ("y", instance.y), ("r", instance.r)):
        if not isinstance(val, (int, float)) or not math.isfinite(val):
            raise RangeError("%s must be a finite number, got %r" % (name, val))
    if not 0.0 <= instance.beta <= 1.0:
        raise RangeError("beta must lie in [0, 1], got %r" % instance.beta)
    if not 0.0 <= instance.y <= 1.0:
        raise RangeError("penetration y must lie in [0, 1], got %r" % instance.y)
    if instance.r <= 1.0:
        raise RangeError("cost ratio r must exceed 1, got %r" % instance.r)
    instance.curves.validate()
    if instance.exo_p is not None:
        if not math.isfinite(instance.exo_p):
            raise RangeError("exo_p must be finite, got %r" % instance.exo_p)
        lo, hi = instance.curves.crash.value_range()
        if not lo <= instance.exo_p <= hi:
            raise ExoRangeError(
                "fixed accident probability %r outside the crash curve's range "
                "[%.6g, %.6g]" % (instance.exo_p, lo, hi)
            )
    return instance
