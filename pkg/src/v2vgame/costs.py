"""Per-strategy expected costs and recklessness weights for both models.

Careful driving always avoids the accident at opportunity cost 1 when no
accident would have happened; reckless driving costs r > 1 when one does.
Belief-updating drivers price these through the posterior of their
displayed state; advisory followers can also Trust the display, paying the
careful cost on warning days and the reckless cost otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass
from types import MappingProxyType
from typing import Mapping

from .errors import ConditioningError, IllegalStrategyError
from .game import (
    AgentType,
    Model,
    SignalStats,
    Strategy,
    check_legal,
    legal_strategies,
    model_types,
)


@dataclass(frozen=True)
class CostTable:
    """Expected cost per (driver type, strategy) at one accident probability.

    Entries are None exactly when the strategy's cost conditions on a
    probability-zero displayed state; such types carry zero mass wherever
    the table is consumed.
    """

    model: Model
    r: float
    stats: SignalStats
    entries: Mapping[tuple[AgentType, Strategy], float | None]

    def __post_init__(self):
        object.__setattr__(self, "entries", MappingProxyType(dict(self.entries)))

    def cost(self, agent_type: AgentType, strategy: Strategy) -> float | None:
        check_legal(self.model, agent_type, strategy)
        return self.entries[(agent_type, strategy)]

    def best(self, agent_type: AgentType) -> tuple[float, tuple[Strategy, ...]]:
        """Minimum defined cost for a type and the exactly-minimal strategies.

        Raises ConditioningError when every entry of the type is undefined
        (the type itself has probability zero then).
        """
        defined = [
            (self.entries[(agent_type, s)], s)
            for s in legal_strategies(self.model, agent_type)
            if self.entries[(agent_type, s)] is not None
        ]
        if not defined:
            raise ConditioningError(
                "all costs of %s are conditioned on a probability-zero state"
                % agent_type
            )
        low = min(c for c, _ in defined)
        return low, tuple(s for c, s in defined if c == low)


def bayesian_costs(stats: SignalStats, r: float) -> CostTable:
    """Cost table of the belief-updating model at the given displayed-state
    statistics."""
    p = stats.p_accident
    entries: dict[tuple[AgentType, Strategy], float | None] = {
        (AgentType.NON_V2V, Strategy.CAREFUL): 1.0 - p,
        (AgentType.NON_V2V, Strategy.RECKLESS): r * p,
    }
    post_u = stats.posterior_unsignaled
    entries[(AgentType.V2V_UNSIGNALED, Strategy.CAREFUL)] = (
        None if post_u is None else 1.0 - post_u
    )
    entries[(AgentType.V2V_UNSIGNALED, Strategy.RECKLESS)] = (
        None if post_u is None else r * post_u
    )
    post_s = stats.posterior_signaled
    entries[(AgentType.V2V_SIGNALED, Strategy.CAREFUL)] = (
        None if post_s is None else 1.0 - post_s
    )
    entries[(AgentType.V2V_SIGNALED, Strategy.RECKLESS)] = (
        None if post_s is None else r * post_s
    )
    return CostTable(Model.BAYESIAN, r, stats, entries)


def nonbayesian_costs(
    stats: SignalStats, r: float, beta: float, t_val: float, f_val: float
) -> CostTable:
    """Cost table of the advisory-following model.

    The Trust entry is the unconditional blend: a false warning on a safe
    day wastes the careful opportunity cost, a missed (or undisplayed)
    detection on an accident day incurs the reckless cost.
    """
    p = stats.p_accident
    trust = (1.0 - p) * beta * f_val + r * p * (1.0 - beta * t_val)
    entries = {
        (AgentType.NON_V2V, Strategy.CAREFUL): 1.0 - p,
        (AgentType.NON_V2V, Strategy.RECKLESS): r * p,
        (AgentType.V2V, Strategy.CAREFUL): 1.0 - p,
        (AgentType.V2V, Strategy.RECKLESS): r * p,
        (AgentType.V2V, Strategy.TRUST): trust,
    }
    return CostTable(Model.NON_BAYESIAN, r, stats, entries)


def cost_table(
    model: Model, stats: SignalStats, r: float, beta: float, t_val: float, f_val: float
) -> CostTable:
    if model is Model.BAYESIAN:
        return bayesian_costs(stats, r)
    return nonbayesian_costs(stats, r, beta, t_val, f_val)


def recklessness_weight(
    model: Model, agent_type: AgentType, strategy: Strategy, stats: SignalStats
) -> float:
    """Share of this strategy's mass that drives recklessly.

    Reckless weighs 1, Careful 0, Trust the no-warning probability (a
    truster drives carefully exactly on warning days).  Illegal pairs raise
    IllegalStrategyError.
    """
    check_legal(model, agent_type, strategy)
    if strategy is Strategy.RECKLESS:
        return 1.0
    if strategy is Strategy.CAREFUL:
        return 0.0
    return 1.0 - stats.p_signal


def type_masses(model: Model, y: float, stats: SignalStats) -> dict[AgentType, float]:
    """Population mass of each driver type under a model.

    Equipped drivers split by displayed state in the belief-updating model;
    the advisory model keeps them merged.
    """
    if model is Model.BAYESIAN:
        return {
            AgentType.NON_V2V: 1.0 - y,
            AgentType.V2V_UNSIGNALED: (1.0 - stats.p_signal) * y,
            AgentType.V2V_SIGNALED: stats.p_signal * y,
        }
    return {AgentType.NON_V2V: 1.0 - y, AgentType.V2V: y}


__all__ = [
    "CostTable",
    "bayesian_costs",
    "nonbayesian_costs",
    "cost_table",
    "recklessness_weight",
    "type_masses",
    "model_types",
]
