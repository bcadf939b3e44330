"""Endogenous equilibrium: the accident probability feeds back through the
crash curve into behavior, and behavior back into the accident probability.

Every instance falls into exactly one of seven outcome families, found by
a first-match classification over the crash curve's interaction with the
three critical thresholds.  Corner families pin everyone to one strategy;
threshold families pin the accident probability to a threshold and let the
indifferent type's mix absorb the recursion; interior families solve a
scalar fixed point by bisection.  The hot arithmetic lives in the selected
kernel backend; this module wraps it into validated, inspectable results.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Callable

from ._backend import kernel
from .behavior import (
    EquilibriumResult,
    profile_from_masses,
    social_cost,
)
from .costs import cost_table
from .errors import BracketError, NonConvergenceError, RangeError, ValidationError
from .exogenous import TIE_EPS
from .game import AgentType, GameInstance, Model, validate_instance


class FamilyLabel(Enum):
    """The seven mutually exclusive endogenous outcome families.

    E1/E7 are the all-careful and all-reckless corners, E2/E4/E6 pin the
    accident probability to a threshold (equipped-unsignaled, unequipped,
    equipped-signaled respectively), and E3/E5 are the interiors between
    them where a genuine fixed point is solved.
    """

    E1 = "E1"
    E2 = "E2"
    E3 = "E3"
    E4 = "E4"
    E5 = "E5"
    E6 = "E6"
    E7 = "E7"

    @property
    def code(self) -> int:
        return int(self.value[1])

    @classmethod
    def from_code(cls, code: int) -> "FamilyLabel":
        return cls("E%d" % code)


@dataclass(frozen=True)
class FixedPointReport:
    """Outcome of a bisection fixed-point solve."""

    root: float
    residual: float
    iterations: int
    bracket: tuple[float, float]


def fixed_point_bisect(
    fn: Callable[[float], float],
    lo: float,
    hi: float,
    tol: float = 1e-10,
    max_iter: int = 200,
) -> FixedPointReport:
    """Solve x = fn(x) on [lo, hi] by bisection.

    Same algorithm as the kernels' interior solve, exposed for arbitrary
    callables: endpoints already within tolerance return immediately with
    zero iterations; otherwise fn(x) - x must change sign across the
    bracket (BracketError if not), and the midpoint sequence runs until the
    residual |fn(x) - x| meets ``tol`` (NonConvergenceError at the cap).
    """
    if not lo <= hi:
        raise RangeError("bracket must satisfy lo <= hi, got [%r, %r]" % (lo, hi))
    if tol <= 0.0:
        raise RangeError("tolerance must be positive, got %r" % tol)
    if max_iter < 1:
        raise RangeError("iteration cap must be at least 1, got %r" % max_iter)
    bracket = (lo, hi)
    glo = fn(lo) - lo
    if abs(glo) <= tol:
        return FixedPointReport(lo, abs(glo), 0, bracket)
    ghi = fn(hi) - hi
    if abs(ghi) <= tol:
        return FixedPointReport(hi, abs(ghi), 0, bracket)
    if (glo > 0.0) == (ghi > 0.0):
        raise BracketError(
            "fixed-point bracket [%r, %r] has no sign change" % (lo, hi)
        )
    it = 0
    while it < max_iter:
        it += 1
        mid = 0.5 * (lo + hi)
        gm = fn(mid) - mid
        if abs(gm) <= tol:
            return FixedPointReport(mid, abs(gm), it, bracket)
        if (gm > 0.0) == (glo > 0.0):
            lo, glo = mid, gm
        else:
            hi, ghi = mid, gm
    raise NonConvergenceError(
        "fixed-point bisection did not reach tolerance %r in %d iterations"
        % (tol, max_iter)
    )


def _require_endogenous(instance: GameInstance) -> GameInstance:
    validate_instance(instance)
    if instance.exo_p is not None:
        raise ValidationError(
            "instance fixes the accident probability; drop exo_p (see "
            "GameInstance.without_exo) for the endogenous solve"
        )
    return instance


def classify_family(instance: GameInstance) -> FamilyLabel:
    """Outcome family of an endogenous instance (first match of seven)."""
    _require_endogenous(instance)
    ck, cp = instance.curves.crash.kernel_args
    code = kernel.classify(
        instance.beta,
        instance.y,
        instance.r,
        instance.t_val,
        instance.f_val,
        ck,
        cp,
    )
    return FamilyLabel.from_code(code)


def solve_endogenous(instance: GameInstance, model: Model) -> EquilibriumResult:
    """Equilibrium of an endogenous instance under one agent model.

    The kernel returns the family, the equilibrium accident probability,
    and the canonical strategy masses for the requested model; this wrapper
    rebuilds the profile and cost table, recomputes the recursion residual
    through the profile's own recklessness weight, and aggregates the
    social cost through the model's cost entries.
    """
    _require_endogenous(instance)
    ck, cp = instance.curves.crash.kernel_args
    fam_code, p, _, iterations, flat = kernel.solve_full(
        model.code,
        instance.beta,
        instance.y,
        instance.r,
        instance.t_val,
        instance.f_val,
        ck,
        cp,
    )
    family = FamilyLabel.from_code(fam_code)
    stats = instance.stats_at(p)
    profile = profile_from_masses(model, instance.y, stats, flat)
    table = cost_table(
        model, stats, instance.r, instance.beta, instance.t_val, instance.f_val
    )
    residual = abs(p - instance.curves.crash(profile.reckless_weight(stats)))

    thresholds = instance.thresholds()
    indifferent: list[AgentType] = []
    if abs(p - thresholds.p_n) <= TIE_EPS:
        indifferent.append(AgentType.NON_V2V)
    if model is Model.BAYESIAN:
        if abs(p - thresholds.p_vu) <= TIE_EPS:
            indifferent.append(AgentType.V2V_UNSIGNALED)
        if abs(p - thresholds.p_vs) <= TIE_EPS:
            indifferent.append(AgentType.V2V_SIGNALED)
    else:
        if (
            abs(p - thresholds.p_vu) <= TIE_EPS
            or abs(p - thresholds.p_vs) <= TIE_EPS
        ):
            indifferent.append(AgentType.V2V)

    return EquilibriumResult(
        instance=instance,
        model=model,
        mode="endogenous",
        family=family,
        p_accident=p,
        p_signal=stats.p_signal,
        profile=profile,
        costs=table,
        social_cost=social_cost(profile, table),
        residual=residual,
        iterations=iterations,
        indifferent=tuple(indifferent),
    )


def solve_fast(instance: GameInstance, model: Model) -> tuple[FamilyLabel, float, float]:
    """(family, accident probability, social cost) without profile assembly.

    Same kernel arithmetic as ``solve_endogenous``; used by the analysis
    sweeps and searches where only the aggregates matter.  Skips instance
    validation, so callers must hold a validated template.
    """
    ck, cp = instance.curves.crash.kernel_args
    fam_code, p, cost = kernel.solve_fast(
        model.code,
        instance.beta,
        instance.y,
        instance.r,
        instance.t_val,
        instance.f_val,
        ck,
        cp,
    )
    return FamilyLabel.from_code(fam_code), p, cost
