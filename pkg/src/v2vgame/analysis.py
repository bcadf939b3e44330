"""Batch analyses over the solvers: information-quality sweeps, exogenous
monotonicity certification, cross-model equivalence certification, the
endogenous cost-paradox search, and Monte-Carlo validation of the analytic
cost tables.

Everything here is deterministic given its arguments: sweeps and searches
iterate fixed grids in a fixed order, and sampling is driven entirely by a
caller-supplied seed through per-chunk substreams.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .behavior import EquilibriumResult
from .curves import ModelCurves, affine, constant, piecewise, power
from .endogenous import FamilyLabel, solve_endogenous, solve_fast
from .errors import (
    ModeError,
    RangeError,
    SolverError,
    StatisticalFailure,
    ValidationError,
)
from .exogenous import solve_exogenous
from .game import AgentType, GameInstance, Model, Strategy, validate_instance

MODES = ("exogenous", "endogenous")

BOTH_MODELS = (Model.BAYESIAN, Model.NON_BAYESIAN)


def solve_instance(instance: GameInstance, model: Model) -> EquilibriumResult:
    """Dispatch to the solver matching the instance's mode."""
    if instance.exo_p is None:
        return solve_endogenous(instance, model)
    return solve_exogenous(instance, model)


# ---------------------------------------------------------------------------
# information-quality sweeps
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SweepPoint:
    beta: float
    model: Model
    mode: str
    result: EquilibriumResult


@dataclass(frozen=True)
class SweepResult:
    template: GameInstance
    grid: tuple[float, ...]
    points: tuple[SweepPoint, ...]

    def series(self, model: Model, mode: str) -> tuple[EquilibriumResult, ...]:
        """Results for one (model, mode), ordered by the grid."""
        picked = {
            pt.beta: pt.result
            for pt in self.points
            if pt.model is model and pt.mode == mode
        }
        return tuple(picked[b] for b in self.grid if b in picked)


def normalize_grid(grid: Iterable[float]) -> tuple[float, ...]:
    values = tuple(float(v) for v in grid)
    if not values:
        raise RangeError("beta grid must not be empty")
    for v in values:
        if not math.isfinite(v) or not 0.0 <= v <= 1.0:
            raise RangeError("beta grid values must lie in [0, 1], got %r" % v)
    if any(b <= a for a, b in zip(values, values[1:])):
        raise RangeError("beta grid must be strictly increasing")
    return values


def sweep_beta(
    template: GameInstance,
    grid: Iterable[float],
    models: Sequence[Model] = BOTH_MODELS,
    modes: Sequence[str] = ("endogenous",),
) -> SweepResult:
    """Solve the template across an information-quality grid.

    ``modes`` may name either or both of "exogenous"/"endogenous"; the
    exogenous mode requires the template to carry a fixed accident
    probability (ModeError otherwise), and the endogenous mode strips it.
    """
    validate_instance(template)
    values = normalize_grid(grid)
    for mode in modes:
        if mode not in MODES:
            raise ModeError("unknown sweep mode %r" % mode)
    if "exogenous" in modes and template.exo_p is None:
        raise ModeError(
            "exogenous sweep requested but the template fixes no accident probability"
        )
    points: list[SweepPoint] = []
    endo_template = template.without_exo() if "endogenous" in modes else None
    for beta in values:
        for mode in modes:
            base = template if mode == "exogenous" else endo_template
            inst = base.with_beta(beta)
            for model in models:
                result = solve_instance(inst, model)
                points.append(SweepPoint(beta, model, mode, result))
    return SweepResult(template, values, tuple(points))


# ---------------------------------------------------------------------------
# monotonicity certification (exogenous mode)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MonotonicityReport:
    """Largest social-cost increase along each model's sweep series."""

    passed: bool
    worst_increase: float
    by_model: Mapping[Model, float]
    tol: float


def certify_monotonicity(sweep: SweepResult, tol: float = 1e-12) -> MonotonicityReport:
    """Certify that exogenous social cost never rises with information quality.

    Only meaningful with the accident probability held fixed; any
    endogenous point in the sweep raises ModeError.
    """
    if any(pt.mode != "exogenous" for pt in sweep.points):
        raise ModeError(
            "monotonicity certification applies to exogenous sweeps only"
        )
    by_model: dict[Model, float] = {}
    for model in BOTH_MODELS:
        series = sweep.series(model, "exogenous")
        worst = 0.0
        for prev, nxt in zip(series, series[1:]):
            step = nxt.social_cost - prev.social_cost
            if step > worst:
                worst = step
        if series:
            by_model[model] = worst
    worst_all = max(by_model.values(), default=0.0)
    return MonotonicityReport(worst_all <= tol, worst_all, by_model, tol)


# ---------------------------------------------------------------------------
# cross-model equivalence certification
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EquivalenceReport:
    """Agreement of the two agent models across an endogenous batch."""

    passed: bool
    count: int
    max_prob_gap: float
    max_cost_gap: float
    family_counts: Mapping[FamilyLabel, int]
    failures: tuple[tuple[GameInstance, float, float], ...]
    tol: float


def certify_equivalence(
    instances: Iterable[GameInstance], tol: float = 1e-9
) -> EquivalenceReport:
    """Solve each endogenous instance under both models and compare.

    The two solve paths share only the parameter-level family
    classification; masses, recursion checks, and cost aggregation are
    separate per model, so agreement here is evidence, not tautology.
    """
    count = 0
    max_dp = 0.0
    max_dj = 0.0
    family_counts: dict[FamilyLabel, int] = {fam: 0 for fam in FamilyLabel}
    failures: list[tuple[GameInstance, float, float]] = []
    for instance in instances:
        updating = solve_endogenous(instance, Model.BAYESIAN)
        advisory = solve_endogenous(instance, Model.NON_BAYESIAN)
        dp = abs(updating.p_accident - advisory.p_accident)
        dj = abs(updating.social_cost - advisory.social_cost)
        max_dp = max(max_dp, dp)
        max_dj = max(max_dj, dj)
        family_counts[advisory.family] += 1
        if dp > tol or dj > tol:
            failures.append((instance, dp, dj))
        count += 1
    return EquivalenceReport(
        not failures, count, max_dp, max_dj, family_counts, tuple(failures), tol
    )


# ---------------------------------------------------------------------------
# endogenous cost-paradox search
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ParadoxSearchSpace:
    """Grid over which the endogenous paradox search scans.

    Technologies are (true, false) detection-rate constants.  The default
    pairs span a clean and a noisy technology; with a very clean signal the
    equipped band is narrow and the default crash grid yields no paradox,
    so the noisy pair is what typically produces certificates.  Crash
    curves are affine ``intercept + slope*d``; combinations leaving [0, 1]
    are skipped.
    """

    y_values: tuple[float, ...] = (0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9)
    r_values: tuple[float, ...] = (
        1.5, 2.0, 2.5, 3.0, 3.5, 4.0, 4.5, 5.0, 5.5, 6.0, 6.5, 7.0, 7.5, 8.0,
    )
    intercepts: tuple[float, ...] = (0.0, 0.1, 0.2, 0.3)
    slopes: tuple[float, ...] = (0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9)
    technologies: tuple[tuple[float, float], ...] = ((0.5, 0.1), (0.9, 0.6))
    beta_count: int = 51
    margin: float = 1e-6


@dataclass(frozen=True)
class ParadoxCertificate:
    """One template where better information raises endogenous social cost.

    ``margin`` is cost_high - cost_low from full solves of both grid
    points; both ends also record the accident probability (which falls
    while the cost rises) and the outcome family.
    """

    curves: ModelCurves
    y: float
    r: float
    beta_low: float
    beta_high: float
    cost_low: float
    cost_high: float
    p_low: float
    p_high: float
    family_low: FamilyLabel
    family_high: FamilyLabel
    margin: float

    def instance(self, beta: float) -> GameInstance:
        return GameInstance(beta=beta, y=self.y, r=self.r, curves=self.curves)

    def to_row(self) -> dict:
        return {
            "y": self.y,
            "r": self.r,
            "true_positive": self.curves.true_positive.spec(),
            "false_positive": self.curves.false_positive.spec(),
            "crash": self.curves.crash.spec(),
            "beta_low": self.beta_low,
            "beta_high": self.beta_high,
            "cost_low": self.cost_low,
            "cost_high": self.cost_high,
            "p_low": self.p_low,
            "p_high": self.p_high,
            "family_low": self.family_low.value,
            "family_high": self.family_high.value,
            "margin": self.margin,
        }


def search_paradox(
    space: ParadoxSearchSpace | None = None, mode: str = "endogenous"
) -> tuple[ParadoxCertificate, ...]:
    """Scan the space for templates whose social cost rises in beta.

    For each template the advisory-model fast path traces cost over the
    beta grid and the best (low, high) pair is kept; candidates beating the
    margin are re-verified with full solves of both agent models at both
    ends before a certificate is issued.  With the probability held fixed
    no paradox exists, so requesting exogenous mode raises ModeError.
    """
    if mode != "endogenous":
        raise ModeError("the cost paradox is an endogenous phenomenon; got mode %r" % mode)
    if space is None:
        space = ParadoxSearchSpace()
    if space.beta_count < 2:
        raise RangeError("beta_count must be at least 2")
    betas = np.linspace(0.0, 1.0, space.beta_count)
    certificates: list[ParadoxCertificate] = []
    for true_rate, false_rate in space.technologies:
        tech_true = constant(true_rate)
        tech_false = constant(false_rate)
        for intercept in space.intercepts:
            for slope in space.slopes:
                if slope <= 0.0 or intercept < 0.0 or intercept + slope > 1.0:
                    continue
                curves = ModelCurves(tech_true, tech_false, affine(intercept, slope))
                curves.validate()
                for y in space.y_values:
                    for r in space.r_values:
                        base = GameInstance(beta=0.0, y=y, r=r, curves=curves)
                        best_gain = 0.0
                        best_pair = None
                        min_cost = math.inf
                        min_beta = 0.0
                        for beta in betas:
                            _, _, cost = solve_fast(
                                base.with_beta(beta), Model.NON_BAYESIAN
                            )
                            if cost - min_cost > best_gain:
                                best_gain = cost - min_cost
                                best_pair = (min_beta, beta)
                            if cost < min_cost:
                                min_cost = cost
                                min_beta = beta
                        if best_pair is None or best_gain <= space.margin:
                            continue
                        cert = _verify_paradox(base, best_pair, space.margin)
                        if cert is not None:
                            certificates.append(cert)
    return tuple(certificates)


def _verify_paradox(
    base: GameInstance, pair: tuple[float, float], margin: float
) -> ParadoxCertificate | None:
    """Re-solve both ends of a candidate pair with both models in full."""
    beta_low, beta_high = pair
    low_adv = solve_endogenous(base.with_beta(beta_low), Model.NON_BAYESIAN)
    low_upd = solve_endogenous(base.with_beta(beta_low), Model.BAYESIAN)
    high_adv = solve_endogenous(base.with_beta(beta_high), Model.NON_BAYESIAN)
    high_upd = solve_endogenous(base.with_beta(beta_high), Model.BAYESIAN)
    for adv, upd in ((low_adv, low_upd), (high_adv, high_upd)):
        if (
            abs(adv.social_cost - upd.social_cost) > 1e-9
            or abs(adv.p_accident - upd.p_accident) > 1e-9
        ):
            raise SolverError(
                "agent models disagree while verifying a paradox candidate at "
                "beta=%r" % adv.instance.beta
            )
    gain = high_adv.social_cost - low_adv.social_cost
    if gain <= margin:
        return None
    return ParadoxCertificate(
        curves=base.curves,
        y=base.y,
        r=base.r,
        beta_low=beta_low,
        beta_high=beta_high,
        cost_low=low_adv.social_cost,
        cost_high=high_adv.social_cost,
        p_low=low_adv.p_accident,
        p_high=high_adv.p_accident,
        family_low=low_adv.family,
        family_high=high_adv.family,
        margin=gain,
    )


# ---------------------------------------------------------------------------
# Monte-Carlo validation of the cost tables
# ---------------------------------------------------------------------------

_MC_CHUNK = 1 << 18


@dataclass(frozen=True)
class MonteCarloEntry:
    agent_type: AgentType
    strategy: Strategy
    analytic: float
    empirical: float
    std_err: float
    z: float
    samples: int


@dataclass(frozen=True)
class MonteCarloReport:
    model: Model
    p_accident: float
    samples: int
    seed: int
    entries: tuple[MonteCarloEntry, ...]
    worst_z: float
    passed: bool


def monte_carlo_validate(
    result: EquilibriumResult,
    samples: int,
    seed: int,
    z_threshold: float = 4.0,
    check: bool = True,
) -> MonteCarloReport:
    """Validate the analytic per-strategy costs of a solved instance by
    simulation.

    Draws (accident, warning) days and scores every legal strategy of every
    driver type against its cost-table entry, flagging any |z| beyond
    ``z_threshold`` standard errors (StatisticalFailure when ``check``).
    Sampling is split into fixed-size chunks with independent substreams
    spawned from the seed, and chunk statistics are combined by summation,
    so the aggregate does not depend on how chunks would be scheduled.
    Equilibrium masses play no role here; only the cost model is tested.
    """
    if samples < 2:
        raise RangeError("need at least 2 samples, got %r" % samples)
    instance = result.instance
    model = result.model
    p = result.p_accident
    beta = instance.beta
    t_val = instance.t_val
    f_val = instance.f_val
    r = instance.r

    if model is Model.BAYESIAN:
        keys = [
            (AgentType.NON_V2V, Strategy.CAREFUL),
            (AgentType.NON_V2V, Strategy.RECKLESS),
            (AgentType.V2V_UNSIGNALED, Strategy.CAREFUL),
            (AgentType.V2V_UNSIGNALED, Strategy.RECKLESS),
            (AgentType.V2V_SIGNALED, Strategy.CAREFUL),
            (AgentType.V2V_SIGNALED, Strategy.RECKLESS),
        ]
    else:
        keys = [
            (AgentType.NON_V2V, Strategy.CAREFUL),
            (AgentType.NON_V2V, Strategy.RECKLESS),
            (AgentType.V2V, Strategy.CAREFUL),
            (AgentType.V2V, Strategy.RECKLESS),
            (AgentType.V2V, Strategy.TRUST),
        ]
    acc = {key: [0, 0.0, 0.0] for key in keys}  # count, sum, sum of squares

    n_chunks = (samples + _MC_CHUNK - 1) // _MC_CHUNK
    children = np.random.SeedSequence(seed).spawn(n_chunks)
    remaining = samples
    for child in children:
        size = min(_MC_CHUNK, remaining)
        remaining -= size
        rng = np.random.default_rng(child)
        accident = rng.random(size) < p
        display_draw = rng.random(size)
        warn = np.where(
            accident, display_draw < beta * t_val, display_draw < beta * f_val
        )
        careful_cost = 1.0 - accident.astype(np.float64)
        reckless_cost = r * accident.astype(np.float64)

        def tally(key, costs):
            entry = acc[key]
            entry[0] += costs.size
            entry[1] += float(costs.sum())
            entry[2] += float(np.square(costs).sum())

        tally((AgentType.NON_V2V, Strategy.CAREFUL), careful_cost)
        tally((AgentType.NON_V2V, Strategy.RECKLESS), reckless_cost)
        if model is Model.BAYESIAN:
            quiet = ~warn
            tally((AgentType.V2V_UNSIGNALED, Strategy.CAREFUL), careful_cost[quiet])
            tally((AgentType.V2V_UNSIGNALED, Strategy.RECKLESS), reckless_cost[quiet])
            tally((AgentType.V2V_SIGNALED, Strategy.CAREFUL), careful_cost[warn])
            tally((AgentType.V2V_SIGNALED, Strategy.RECKLESS), reckless_cost[warn])
        else:
            tally((AgentType.V2V, Strategy.CAREFUL), careful_cost)
            tally((AgentType.V2V, Strategy.RECKLESS), reckless_cost)
            trust_cost = np.where(warn, careful_cost, reckless_cost)
            tally((AgentType.V2V, Strategy.TRUST), trust_cost)

    entries: list[MonteCarloEntry] = []
    worst = 0.0
    for key in keys:
        analytic = result.costs.cost(*key)
        n, total, total_sq = acc[key]
        if analytic is None or n < 2:
            # zero-probability displayed state: no mass, nothing to test
            continue
        mean = total / n
        var = max(0.0, (total_sq - n * mean * mean) / (n - 1))
        std_err = math.sqrt(var / n)
        diff = mean - analytic
        if std_err == 0.0:
            z = 0.0 if abs(diff) <= 1e-12 else math.inf
        else:
            z = diff / std_err
        worst = max(worst, abs(z))
        entries.append(MonteCarloEntry(key[0], key[1], analytic, mean, std_err, z, n))

    passed = worst <= z_threshold
    report = MonteCarloReport(model, p, samples, seed, tuple(entries), worst, passed)
    if check and not passed:
        offenders = ", ".join(
            "(%s,%s) z=%.2f" % (e.agent_type.value, e.strategy.value, e.z)
            for e in entries
            if abs(e.z) > z_threshold
        )
        raise StatisticalFailure(
            "empirical costs deviate beyond %.1f standard errors: %s"
            % (z_threshold, offenders)
        )
    return report


# ---------------------------------------------------------------------------
# random instance batches
# ---------------------------------------------------------------------------


def _random_technology(rng: np.random.Generator) -> tuple:
    """Technology pair with the false curve strictly below the true one."""
    kind = rng.random()
    if kind < 0.70:
        true_level = rng.uniform(0.15, 1.0)
        false_level = rng.uniform(0.0, 0.9 * true_level)
        return constant(true_level), constant(false_level)
    if kind < 0.90:
        t0 = rng.uniform(0.2, 0.8)
        ts = rng.uniform(0.0, 1.0 - t0)
        f0 = rng.uniform(0.0, 0.9 * t0)
        fs = rng.uniform(0.0, ts) if ts > 0 else 0.0
        return affine(t0, ts), affine(f0, fs)
    a = rng.uniform(0.2, 0.6)
    b = rng.uniform(0.0, 1.0 - a)
    k = rng.uniform(0.5, 2.0)
    shrink_a = rng.uniform(0.1, 0.9)
    shrink_b = rng.uniform(0.0, 0.95)
    return power(a, b, k), power(a * shrink_a, b * shrink_b, k)


def _random_crash(rng: np.random.Generator):
    """Crash curve; intercept and span mixed so all seven outcome families
    stay reachable with workable frequency."""
    intercept = rng.uniform(0.0, 0.3)
    if rng.random() < 0.25:
        span = rng.uniform(0.03, min(0.2, 1.0 - intercept))
    else:
        span = rng.uniform(0.05, 1.0 - intercept)
    kind = rng.random()
    if kind < 0.50:
        return affine(intercept, span)
    if kind < 0.75:
        k = rng.uniform(0.4, 3.0)
        return power(intercept, span, k)
    m = int(rng.integers(3, 6))
    xs = np.linspace(0.0, 1.0, m)
    xs[1:-1] += rng.uniform(-0.3 / m, 0.3 / m, size=m - 2)
    gamma = rng.uniform(0.5, 2.0)
    vs = intercept + span * np.linspace(0.0, 1.0, m) ** gamma
    return piecewise(zip(xs, vs))


def _random_scalars(rng: np.random.Generator) -> tuple[float, float, float]:
    u = rng.random()
    if u < 0.08:
        beta = 0.0
    elif u < 0.16:
        beta = 1.0
    else:
        beta = rng.uniform(0.0, 1.0)
    v = rng.random()
    if v < 0.04:
        y = 0.0
    elif v < 0.08:
        y = 1.0
    else:
        y = rng.uniform(0.02, 0.98)
    r = rng.uniform(1.05, 9.0)
    return beta, y, r


def random_endogenous_instances(count: int, seed: int) -> list[GameInstance]:
    """Deterministic batch of validated endogenous instances.

    The parameter mixture is tuned so all seven outcome families occur with
    workable frequency in batches of a few thousand.
    """
    rng = np.random.default_rng(seed)
    out: list[GameInstance] = []
    while len(out) < count:
        beta, y, r = _random_scalars(rng)
        tech_true, tech_false = _random_technology(rng)
        crash = _random_crash(rng)
        instance = GameInstance(
            beta=beta, y=y, r=r, curves=ModelCurves(tech_true, tech_false, crash)
        )
        try:
            validate_instance(instance)
        except ValidationError:  # pragma: no cover - generator keeps curves legal
            continue
        out.append(instance)
    return out


def random_exogenous_instances(count: int, seed: int) -> list[GameInstance]:
    """Like the endogenous batch, plus a fixed accident probability drawn
    uniformly from the crash curve's value range."""
    rng = np.random.default_rng(seed)
    base = random_endogenous_instances(count, seed + 1)
    out = []
    for instance in base:
        lo, hi = instance.curves.crash.value_range()
        out.append(
            GameInstance(
                beta=instance.beta,
                y=instance.y,
                r=instance.r,
                curves=instance.curves,
                exo_p=float(rng.uniform(lo, hi)),
            )
        )
    return out
