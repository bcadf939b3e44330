"""Shared instance factories for the test suite."""

from __future__ import annotations

from v2vgame import GameInstance, Model
from v2vgame.curves import ModelCurves, affine, constant

BOTH_MODELS = (Model.BAYESIAN, Model.NON_BAYESIAN)


def make_instance(
    beta: float = 1.0,
    y: float = 0.5,
    r: float = 3.0,
    t: float = 0.5,
    f: float = 0.1,
    crash=(0.1, 0.4),
    exo_p: float | None = None,
) -> GameInstance:
    curves = ModelCurves(constant(t), constant(f), affine(*crash))
    return GameInstance(beta=beta, y=y, r=r, curves=curves, exo_p=exo_p)


def worked_instance(exo_p: float | None = None) -> GameInstance:
    """The hand-checked reference parameterization used across the suite."""
    return make_instance(exo_p=exo_p)


def paradox_template() -> GameInstance:
    """Template whose beta sweep is known to raise equilibrium social cost."""
    return make_instance(beta=1.0, y=0.2, r=2.0, t=0.9, f=0.6, crash=(0.3, 0.7))


# Crash intercept/slope pairs that land the reference detection rates in
# each equilibrium family.  Verified against the brute-force oracle.
FAMILY_CRASHES = {
    "E1": (0.4, 0.5),
    "E2": (0.2, 0.5),
    "E3": (0.1, 0.4),
    "E4": (0.05, 0.4),
    "E5": (0.02, 0.2),
    "E6": (0.01, 0.055),
    "E7": (0.001, 0.01),
}


def family_instance(label: str) -> GameInstance:
    return make_instance(crash=FAMILY_CRASHES[label])


def family_instances() -> dict[str, GameInstance]:
    return {label: family_instance(label) for label in FAMILY_CRASHES}
