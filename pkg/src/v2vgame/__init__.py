"""Equilibrium and social-cost solver for a road-hazard broadcast game.

A unit mass of drivers chooses between careful and reckless driving; a
fraction carries broadcast receivers that may display a hazard warning.
The package solves for equilibrium behavior, the accident probability, and
social cost under two agent models (belief-updating and advisory-following)
and two closure modes (accident probability fixed, or determined in
equilibrium through a crash curve), certifies that the two agent models are
behaviorally equivalent, and searches for parameter regions where better
warning quality raises endogenous social cost.
"""

from ._backend import BACKEND_NAME
from .analysis import (
    EquivalenceReport,
    MonotonicityReport,
    MonteCarloEntry,
    MonteCarloReport,
    ParadoxCertificate,
    ParadoxSearchSpace,
    SweepPoint,
    SweepResult,
    certify_equivalence,
    certify_monotonicity,
    monte_carlo_validate,
    random_endogenous_instances,
    random_exogenous_instances,
    search_paradox,
    solve_instance,
    sweep_beta,
)
from .behavior import (
    BehaviorProfile,
    EquilibriumResult,
    nash_gap,
    profile_from_masses,
    social_cost,
)
from .costs import (
    CostTable,
    bayesian_costs,
    cost_table,
    nonbayesian_costs,
    recklessness_weight,
    type_masses,
)
from .curves import Curve, ModelCurves, affine, constant, piecewise, power
from .endogenous import (
    FamilyLabel,
    FixedPointReport,
    classify_family,
    fixed_point_bisect,
    solve_endogenous,
)
from .errors import (
    BracketError,
    ConditioningError,
    CurveError,
    DegenerateError,
    ExhaustivenessError,
    ExoRangeError,
    GameError,
    IllegalStrategyError,
    ModeError,
    ModelMismatchError,
    NonConvergenceError,
    RangeError,
    SolverError,
    StatisticalFailure,
    ValidationError,
)
from .exogenous import TIE_EPS, solve_exogenous
from .game import (
    AgentType,
    GameInstance,
    Model,
    SignalStats,
    Strategy,
    Thresholds,
    compute_thresholds,
    legal_strategies,
    model_types,
    posterior_signaled,
    posterior_unsignaled,
    signal_prob,
    signal_stats,
    validate_instance,
)

__version__ = "0.1.0"
