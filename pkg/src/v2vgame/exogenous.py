"""Equilibrium behavior when the accident probability is fixed.

With the accident probability pinned, each driver type simply compares it
to the type's critical threshold: below means reckless is the best reply,
above means careful, and within a small window of the threshold the type
is indifferent (between the strategies meeting at that threshold) and any
mix is an equilibrium.  The solver then assigns tied mass to a canonical
end of the indifference set, records the tie, and aggregates cost.
"""

from __future__ import annotations

from .behavior import BehaviorProfile, EquilibriumResult, social_cost
from .costs import cost_table, type_masses
from .errors import ValidationError
from .game import (
    AgentType,
    GameInstance,
    Model,
    Strategy,
    validate_instance,
)

# half-width of the exact-threshold window for three-way comparisons
TIE_EPS = 1e-9

# canonical resolution orders over an indifference set
_PREFER_CAREFUL = (Strategy.CAREFUL, Strategy.TRUST, Strategy.RECKLESS)
_PREFER_RECKLESS = (Strategy.RECKLESS, Strategy.TRUST, Strategy.CAREFUL)

TIE_BREAKS = ("most-careful", "least-careful")


def _compare(value: float, threshold: float, eps: float = TIE_EPS) -> int:
    """-1 below, 0 within eps of, +1 above the threshold."""
    if value < threshold - eps:
        return -1
    if value > threshold + eps:
        return 1
    return 0


def _pick(candidates: tuple[Strategy, ...], tie_break: str) -> Strategy:
    order = _PREFER_CAREFUL if tie_break == "most-careful" else _PREFER_RECKLESS
    for strategy in order:
        if strategy in candidates:
            return strategy
    raise AssertionError("empty candidate set")  # unreachable


def _binary_candidates(cmp: int) -> tuple[Strategy, ...]:
    """Best replies of a type choosing only between careful and reckless."""
    if cmp < 0:
        return (Strategy.RECKLESS,)
    if cmp > 0:
        return (Strategy.CAREFUL,)
    return (Strategy.CAREFUL, Strategy.RECKLESS)


def _advisory_candidates(cmp_vs: int, cmp_vu: int) -> tuple[Strategy, ...]:
    """Best replies of the equipped advisory type.

    Below the signaled threshold reckless wins, above the unsignaled
    threshold careful wins, and Trust rules the band between; threshold
    hits produce the two (or, when the band itself degenerates, three)
    strategies meeting there.
    """
    if cmp_vs < 0:
        return (Strategy.RECKLESS,)
    if cmp_vs == 0:
        if cmp_vu == 0:
            return (Strategy.RECKLESS, Strategy.TRUST, Strategy.CAREFUL)
        return (Strategy.RECKLESS, Strategy.TRUST)
    if cmp_vu < 0:
        return (Strategy.TRUST,)
    if cmp_vu == 0:
        return (Strategy.TRUST, Strategy.CAREFUL)
    return (Strategy.CAREFUL,)


def solve_exogenous(
    instance: GameInstance, model: Model, tie_break: str = "most-careful"
) -> EquilibriumResult:
    """Equilibrium of an instance with a fixed accident probability.

    ``tie_break`` selects which end of an indifference set receives the
    tied mass; either choice yields the same accident probability and
    social cost, which is what the essential-uniqueness checks exercise.
    """
    if tie_break not in TIE_BREAKS:
        raise ValidationError(
            "tie_break must be one of %s, got %r" % (TIE_BREAKS, tie_break)
        )
    validate_instance(instance)
    if instance.exo_p is None:
        raise ValidationError(
            "instance fixes no accident probability; use the endogenous solver"
        )

    p = instance.exo_p
    thresholds = instance.thresholds()
    stats = instance.stats_at(p)
    table = cost_table(
        model, stats, instance.r, instance.beta, instance.t_val, instance.f_val
    )
    totals = type_masses(model, instance.y, stats)

    candidates: dict[AgentType, tuple[Strategy, ...]] = {}
    if model is Model.BAYESIAN:
        candidates[AgentType.NON_V2V] = _binary_candidates(
            _compare(p, thresholds.p_n)
        )
        candidates[AgentType.V2V_UNSIGNALED] = _binary_candidates(
            _compare(p, thresholds.p_vu)
        )
        candidates[AgentType.V2V_SIGNALED] = _binary_candidates(
            _compare(p, thresholds.p_vs)
        )
    else:
        candidates[AgentType.NON_V2V] = _binary_candidates(
            _compare(p, thresholds.p_n)
        )
        candidates[AgentType.V2V] = _advisory_candidates(
            _compare(p, thresholds.p_vs), _compare(p, thresholds.p_vu)
        )

    masses = {
        agent_type: {_pick(cands, tie_break): totals[agent_type]}
        for agent_type, cands in candidates.items()
    }
    profile = BehaviorProfile(model, masses)
    indifferent = tuple(
        agent_type for agent_type, cands in candidates.items() if len(cands) > 1
    )

    return EquilibriumResult(
        instance=instance,
        model=model,
        mode="exogenous",
        family=None,
        p_accident=p,
        p_signal=stats.p_signal,
        profile=profile,
        costs=table,
        social_cost=social_cost(profile, table),
        residual=0.0,
        iterations=0,
        indifferent=indifferent,
    )
