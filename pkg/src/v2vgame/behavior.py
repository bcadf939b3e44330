"""Strategy profiles, equilibrium results, and social-cost aggregation."""

from __future__ import annotations

from dataclasses import dataclass
from types import MappingProxyType
from typing import Mapping, TYPE_CHECKING

from .costs import CostTable, recklessness_weight, type_masses
from .errors import ConditioningError, ModelMismatchError, ValidationError
from .game import (
    AgentType,
    GameInstance,
    Model,
    SignalStats,
    Strategy,
    check_legal,
    model_types,
)

if TYPE_CHECKING:
    from .endogenous import FamilyLabel


@dataclass(frozen=True)
class BehaviorProfile:
    """Strategy masses per driver type under one model.

    Masses are absolute population shares (a type's strategies sum to the
    type's mass, all types together to 1).  Construction validates pair
    legality and nonnegativity; totals are whatever the masses imply, so
    displayed-state type splits are checked where the profile is built.
    """

    model: Model
    masses: Mapping[AgentType, Mapping[Strategy, float]]

    def __post_init__(self):
        frozen: dict[AgentType, Mapping[Strategy, float]] = {}
        for agent_type, per_strategy in self.masses.items():
            inner: dict[Strategy, float] = {}
            for strategy, mass in per_strategy.items():
                check_legal(self.model, agent_type, strategy)
                mass = float(mass)
                if mass < 0.0:
                    raise ValidationError(
                        "negative mass %r on (%s, %s)" % (mass, agent_type, strategy)
                    )
                inner[strategy] = mass
            frozen[agent_type] = MappingProxyType(inner)
        object.__setattr__(self, "masses", MappingProxyType(frozen))

    def mass(self, agent_type: AgentType, strategy: Strategy) -> float:
        check_legal(self.model, agent_type, strategy)
        return self.masses.get(agent_type, {}).get(strategy, 0.0)

    def type_total(self, agent_type: AgentType) -> float:
        return sum(self.masses.get(agent_type, {}).values())

    def total(self) -> float:
        return sum(self.type_total(t) for t in model_types(self.model))

    def reckless_weight(self, stats: SignalStats) -> float:
        """Population share driving recklessly, weighting Trust mass by the
        no-warning probability."""
        acc = 0.0
        for agent_type, per_strategy in self.masses.items():
            for strategy, mass in per_strategy.items():
                if mass != 0.0:
                    acc += mass * recklessness_weight(
                        self.model, agent_type, strategy, stats
                    )
        return acc

    def moved(
        self, agent_type: AgentType, source: Strategy, target: Strategy, delta: float
    ) -> "BehaviorProfile":
        """Copy with ``delta`` mass moved between two strategies of a type.

        Used to probe indifference: redistribution among exactly-tied
        strategies must leave aggregates unchanged.
        """
        if delta < 0.0:
            raise ValidationError("moved() needs a nonnegative delta")
        current = self.mass(agent_type, source)
        if delta > current + 1e-15:
            raise ValidationError(
                "cannot move %r mass from (%s, %s) holding only %r"
                % (delta, agent_type, source, current)
            )
        outer = {t: dict(per) for t, per in self.masses.items()}
        inner = outer.setdefault(agent_type, {})
        inner[source] = max(0.0, inner.get(source, 0.0) - delta)
        inner[target] = inner.get(target, 0.0) + delta
        return BehaviorProfile(self.model, outer)


def social_cost(profile: BehaviorProfile, table: CostTable) -> float:
    """Mass-weighted expected cost of a profile under a cost table.

    Raises ModelMismatchError when the profile and table come from
    different models, and ConditioningError when positive mass sits on a
    strategy whose cost is undefined (zero-probability displayed state).
    """
    if profile.model is not table.model:
        raise ModelMismatchError(
            "profile model %s does not match cost table model %s"
            % (profile.model.value, table.model.value)
        )
    acc = 0.0
    for agent_type, per_strategy in profile.masses.items():
        for strategy, mass in per_strategy.items():
            if mass == 0.0:
                continue
            cost = table.cost(agent_type, strategy)
            if cost is None:
                raise ConditioningError(
                    "positive mass %r on (%s, %s) whose cost is undefined"
                    % (mass, agent_type, strategy)
                )
            acc += mass * cost
    return acc


def nash_gap(profile: BehaviorProfile, table: CostTable, mass_tol: float = 1e-12) -> float:
    """Worst excess of a played strategy's cost over its type's best reply.

    Zero (up to float noise) certifies the profile as an equilibrium of the
    table.  Strategies and types with mass at or below ``mass_tol`` are
    ignored, matching the zero-mass convention for undefined entries.
    """
    if profile.model is not table.model:
        raise ModelMismatchError(
            "profile model %s does not match cost table model %s"
            % (profile.model.value, table.model.value)
        )
    worst = 0.0
    for agent_type in model_types(profile.model):
        if profile.type_total(agent_type) <= mass_tol:
            continue
        low, _ = table.best(agent_type)
        for strategy, mass in profile.masses.get(agent_type, {}).items():
            if mass <= mass_tol:
                continue
            cost = table.cost(agent_type, strategy)
            if cost is None:
                raise ConditioningError(
                    "positive mass %r on (%s, %s) whose cost is undefined"
                    % (mass, agent_type, strategy)
                )
            gap = cost - low
            if gap > worst:
                worst = gap
    return worst


@dataclass(frozen=True)
class EquilibriumResult:
    """Everything one solve produces.

    ``family`` is None in exogenous mode.  ``residual`` re-checks the
    accident-probability recursion at the returned profile (always 0 by
    construction in exogenous mode).  ``indifferent`` lists driver types
    sitting exactly on their threshold, whose strategy mix is therefore not
    unique even though the accident probability and social cost are.
    """

    instance: GameInstance
    model: Model
    mode: str
    family: "FamilyLabel | None"
    p_accident: float
    p_signal: float
    profile: BehaviorProfile
    costs: CostTable
    social_cost: float
    residual: float
    iterations: int
    indifferent: tuple[AgentType, ...]

    def to_row(self) -> dict:
        """Flat mapping used by the CLI writers."""
        return {
            "mode": self.mode,
            "model": self.model.value,
            "family": None if self.family is None else self.family.value,
            "beta": self.instance.beta,
            "y": self.instance.y,
            "r": self.instance.r,
            "exo_p": self.instance.exo_p,
            "p_accident": self.p_accident,
            "p_signal": self.p_signal,
            "social_cost": self.social_cost,
            "residual": self.residual,
            "iterations": self.iterations,
            "indifferent": "|".join(t.value for t in self.indifferent),
        }


def profile_from_masses(
    model: Model, y: float, stats: SignalStats, flat: tuple[float, ...]
) -> BehaviorProfile:
    """Build a profile from the kernel's fixed mass layout.

    Belief updating: (n_C, n_R, vu_C, vu_R, vs_C, vs_R); advisory:
    (n_C, n_R, v_C, v_R, v_T).  Tiny negative dust from float clamping is
    not expected; construction would reject it.
    """
    if model is Model.BAYESIAN:
        masses = {
            AgentType.NON_V2V: {Strategy.CAREFUL: flat[0], Strategy.RECKLESS: flat[1]},
            AgentType.V2V_UNSIGNALED: {
                Strategy.CAREFUL: flat[2],
                Strategy.RECKLESS: flat[3],
            },
            AgentType.V2V_SIGNALED: {
                Strategy.CAREFUL: flat[4],
                Strategy.RECKLESS: flat[5],
            },
        }
    else:
        masses = {
            AgentType.NON_V2V: {Strategy.CAREFUL: flat[0], Strategy.RECKLESS: flat[1]},
            AgentType.V2V: {
                Strategy.CAREFUL: flat[2],
                Strategy.RECKLESS: flat[3],
                Strategy.TRUST: flat[4],
            },
        }
    return BehaviorProfile(model, masses)


def expected_type_masses(model: Model, y: float, stats: SignalStats) -> dict[AgentType, float]:
    return type_masses(model, y, stats)
