"""Top-level acceptance checks.

Each test covers one numbered criterion, measures its own runtime against
the stated budget, and gets a one-line PASS/FAIL verdict emitted by the
conftest hook.  Tolerances are part of the criteria and must not be
loosened here.
"""

import dataclasses
import itertools
import time

import numpy as np
import pytest

from helpers import (
    BOTH_MODELS,
    family_instance,
    family_instances,
    paradox_template,
    worked_instance,
)
from v2vgame import (
    FamilyLabel,
    Model,
    certify_equivalence,
    certify_monotonicity,
    classify_family,
    compute_thresholds,
    monte_carlo_validate,
    random_endogenous_instances,
    random_exogenous_instances,
    search_paradox,
    solve_endogenous,
    solve_exogenous,
    solve_instance,
    sweep_beta,
)
from v2vgame.behavior import nash_gap, social_cost
from v2vgame.game import AgentType, Strategy

# (type, tied strategy pair) per threshold family and model
TIED_PAIRS = {
    (FamilyLabel.E2, Model.BAYESIAN): (
        AgentType.V2V_UNSIGNALED,
        (Strategy.CAREFUL, Strategy.RECKLESS),
    ),
    (FamilyLabel.E2, Model.NON_BAYESIAN): (
        AgentType.V2V,
        (Strategy.CAREFUL, Strategy.TRUST),
    ),
    (FamilyLabel.E4, Model.BAYESIAN): (
        AgentType.NON_V2V,
        (Strategy.CAREFUL, Strategy.RECKLESS),
    ),
    (FamilyLabel.E4, Model.NON_BAYESIAN): (
        AgentType.NON_V2V,
        (Strategy.CAREFUL, Strategy.RECKLESS),
    ),
    (FamilyLabel.E6, Model.BAYESIAN): (
        AgentType.V2V_SIGNALED,
        (Strategy.CAREFUL, Strategy.RECKLESS),
    ),
    (FamilyLabel.E6, Model.NON_BAYESIAN): (
        AgentType.V2V,
        (Strategy.TRUST, Strategy.RECKLESS),
    ),
}


def test_criterion_1_thresholds():
    """Reference thresholds to 1e-12 and the strict/degenerate ordering law
    on 1e5 random draws, within 1 second."""
    start = time.perf_counter()

    th = compute_thresholds(1.0, 3.0, 0.5, 0.1)
    assert th.p_vs == pytest.approx(0.0625, abs=1e-12)
    assert th.p_n == pytest.approx(0.25, abs=1e-12)
    assert th.p_vu == pytest.approx(0.375, abs=1e-12)

    rng = np.random.default_rng(1001)
    n = 100_000
    betas = rng.uniform(0.0, 1.0, n)
    rs = rng.uniform(1.05, 9.0, n)
    ts = rng.uniform(0.01, 1.0, n)
    fs = ts * rng.uniform(0.0, 0.99, n)   # false rate strictly below true rate
    betas[rng.random(n) < 0.05] = 0.0     # no information at all

    for i in range(n):
        th = compute_thresholds(betas[i], rs[i], ts[i], fs[i])
        assert th.p_vs < th.p_n
        if betas[i] == 0.0:
            assert th.p_vu == th.p_n
        else:
            assert th.p_n < th.p_vu

    elapsed = time.perf_counter() - start
    assert elapsed < 1.0, "threshold batch took %.2fs" % elapsed


def test_criterion_2_model_equivalence():
    """The two agent models produce the same accident probability and social
    cost (within 1e-9) on 1e4 mixed instances covering all seven outcome
    families, within 30 seconds."""
    start = time.perf_counter()

    instances = random_endogenous_instances(10_000, 4242)
    report = certify_equivalence(instances, tol=1e-9)

    assert report.passed, "gaps: p=%.3g cost=%.3g" % (
        report.max_prob_gap,
        report.max_cost_gap,
    )
    assert report.count == 10_000
    assert report.max_prob_gap <= 1e-9
    assert report.max_cost_gap <= 1e-9
    for family in FamilyLabel:
        assert report.family_counts[family] > 0, "family %s unseen" % family.value

    elapsed = time.perf_counter() - start
    assert elapsed < 30.0, "equivalence batch took %.2fs" % elapsed


def test_criterion_3_exogenous_monotonicity():
    """With the accident probability held fixed, social cost is
    non-increasing in information quality (within 1e-12) for both models on
    1e3 random templates over a 101-point grid, within 60 seconds."""
    start = time.perf_counter()

    grid = tuple(np.linspace(0.0, 1.0, 101))
    templates = random_exogenous_instances(1000, 3131)
    worst = 0.0
    for template in templates:
        sweep = sweep_beta(template, grid, modes=("exogenous",))
        report = certify_monotonicity(sweep, tol=1e-12)
        assert report.passed, "cost rose by %.3g on %r" % (
            report.worst_increase,
            template,
        )
        worst = max(worst, report.worst_increase)
    assert worst <= 1e-12

    elapsed = time.perf_counter() - start
    assert elapsed < 60.0, "monotonicity batch took %.2fs" % elapsed


def test_criterion_4_paradox_search():
    """The documented default search space yields endogenous-cost-paradox
    certificates with margin above 1e-6, including the pinned reference
    certificate, within 5 minutes."""
    start = time.perf_counter()

    certificates = search_paradox()
    assert len(certificates) >= 1
    assert all(c.margin > 1e-6 for c in certificates)

    pinned = [
        c
        for c in certificates
        if c.y == 0.2
        and c.r == 2.0
        and c.curves.crash.params == (0.3, 0.7)
        and c.curves.true_positive.params == (0.9, 0.0)
        and c.curves.false_positive.params == (0.6, 0.0)
    ]
    assert len(pinned) == 1
    cert = pinned[0]
    assert cert.beta_low == pytest.approx(0.54, abs=1e-12)
    assert cert.beta_high == 1.0
    assert cert.margin == pytest.approx(0.008924817240399, abs=5e-9)
    assert cert.family_low is FamilyLabel.E3
    assert cert.family_high is FamilyLabel.E3
    assert cert.p_high < cert.p_low  # fewer accidents, higher social cost

    # the certificate must reproduce through fresh full solves of both models
    for model in BOTH_MODELS:
        low = solve_instance(cert.instance(cert.beta_low), model)
        high = solve_instance(cert.instance(cert.beta_high), model)
        assert high.social_cost - low.social_cost == pytest.approx(cert.margin, abs=5e-9)

    elapsed = time.perf_counter() - start
    assert elapsed < 300.0, "paradox search took %.2fs" % elapsed


def test_criterion_5_worked_instance_and_residuals():
    """The worked interior instance solves to P=0.259259259 and
    J=0.601851852 within 1e-9 under both models, and the recursion residual
    stays at or below 1e-10 across a 1e3-instance random batch."""
    for model in BOTH_MODELS:
        res = solve_endogenous(worked_instance(), model)
        assert res.family is FamilyLabel.E3
        assert res.p_accident == pytest.approx(0.259259259, abs=1e-9)
        assert res.social_cost == pytest.approx(0.601851852, abs=1e-9)
        assert res.residual <= 1e-10

    for inst in family_instances().values():
        for model in BOTH_MODELS:
            assert solve_endogenous(inst, model).residual <= 1e-10

    for inst in random_endogenous_instances(1000, 5151):
        for model in BOTH_MODELS:
            assert solve_endogenous(inst, model).residual <= 1e-10


def test_criterion_6_nash_soundness():
    """Every strategy carrying more than 1e-12 mass in a solver equilibrium
    costs at most its type's best reply plus 1e-9, across endogenous and
    exogenous batches."""
    for inst in random_endogenous_instances(1500, 6161):
        for model in BOTH_MODELS:
            res = solve_endogenous(inst, model)
            assert nash_gap(res.profile, res.costs, mass_tol=1e-12) <= 1e-9

    for inst in random_exogenous_instances(500, 6262):
        for model in BOTH_MODELS:
            for tie_break in ("most-careful", "least-careful"):
                res = solve_exogenous(inst, model, tie_break=tie_break)
                assert nash_gap(res.profile, res.costs, mass_tol=1e-12) <= 1e-9

    for inst in family_instances().values():
        for model in BOTH_MODELS:
            res = solve_endogenous(inst, model)
            assert nash_gap(res.profile, res.costs, mass_tol=1e-12) <= 1e-9


def test_criterion_7_essential_uniqueness():
    """On 1e3 boundary instances (threshold-pinned endogenous families plus
    exogenous threshold ties), redistributing the indifferent type's mix
    leaves the accident probability and social cost within 1e-9."""
    scan = random_endogenous_instances(12_000, 1515)
    by_family = {FamilyLabel.E2: [], FamilyLabel.E4: [], FamilyLabel.E6: []}
    for inst in scan:
        family = classify_family(inst)
        if family in by_family:
            by_family[family].append(inst)
    picked = (
        by_family[FamilyLabel.E6]
        + by_family[FamilyLabel.E2][:350]
        + by_family[FamilyLabel.E4][: 700 - 350 - len(by_family[FamilyLabel.E6])]
    )
    assert len(picked) == 700
    assert len(by_family[FamilyLabel.E6]) >= 20

    models = itertools.cycle(BOTH_MODELS)
    for inst, model in zip(picked, models):
        res = solve_endogenous(inst, model)
        agent_type, (s_a, s_b) = TIED_PAIRS[(res.family, model)]
        assert agent_type in res.indifferent
        mass_a = res.profile.mass(agent_type, s_a)
        mass_b = res.profile.mass(agent_type, s_b)
        if mass_a >= mass_b:
            source, target, room = s_a, s_b, mass_a
        else:
            source, target, room = s_b, s_a, mass_b
        delta = 0.5 * room
        if delta == 0.0:
            continue  # zero-mass type (e.g. no equipped drivers at all)
        perturbed = res.profile.moved(agent_type, source, target, delta)
        assert abs(social_cost(perturbed, res.costs) - res.social_cost) <= 1e-9
        assert nash_gap(perturbed, res.costs, mass_tol=1e-12) <= 1e-9
        again = solve_endogenous(inst, model)
        assert again.p_accident == res.p_accident

    # exogenous side: pin the fixed probability exactly onto a threshold
    # and check both canonical tie resolutions agree on the aggregates
    checked = 0
    for inst in random_exogenous_instances(1200, 808):
        th = inst.thresholds()
        lo, hi = inst.curves.crash.value_range()
        pinned_p = next(
            (p for p in (th.p_n, th.p_vu, th.p_vs) if lo <= p <= hi), None
        )
        if pinned_p is None:
            continue
        pinned = dataclasses.replace(inst, exo_p=pinned_p)
        for model in BOTH_MODELS:
            careful = solve_exogenous(pinned, model, tie_break="most-careful")
            reckless = solve_exogenous(pinned, model, tie_break="least-careful")
            assert careful.indifferent
            assert careful.p_accident == reckless.p_accident
            assert abs(careful.social_cost - reckless.social_cost) <= 1e-9
        checked += 1
        if checked == 300:
            break
    assert checked == 300


def test_criterion_8_monte_carlo():
    """Analytic strategy costs agree with 1e6-sample simulations within 4
    standard errors on 20 representative instances, within 60 seconds."""
    start = time.perf_counter()

    reps = [
        (worked_instance(), Model.BAYESIAN),
        (worked_instance(), Model.NON_BAYESIAN),
        (worked_instance(exo_p=0.3), Model.BAYESIAN),
        (worked_instance(exo_p=0.3), Model.NON_BAYESIAN),
    ]
    cycle = itertools.cycle(BOTH_MODELS)
    for label in ("E1", "E2", "E4", "E5", "E6", "E7"):
        reps.append((family_instance(label), next(cycle)))
    reps.append((dataclasses.replace(paradox_template(), beta=0.54), Model.NON_BAYESIAN))
    reps.append((paradox_template(), Model.BAYESIAN))
    reps.append((dataclasses.replace(worked_instance(), beta=0.0), Model.NON_BAYESIAN))
    for inst, model in zip(
        random_endogenous_instances(4, 2025), itertools.cycle(BOTH_MODELS)
    ):
        reps.append((inst, model))
    for inst, model in zip(
        random_exogenous_instances(3, 2026),
        itertools.cycle((Model.NON_BAYESIAN, Model.BAYESIAN)),
    ):
        reps.append((inst, model))
    assert len(reps) == 20

    for k, (inst, model) in enumerate(reps):
        res = solve_instance(inst, model)
        report = monte_carlo_validate(res, samples=1_000_000, seed=9000 + k)
        assert report.passed
        assert report.worst_z <= 4.0
        for entry in report.entries:
            assert abs(entry.empirical - entry.analytic) <= 4.0 * entry.std_err + 1e-12

    elapsed = time.perf_counter() - start
    assert elapsed < 60.0, "Monte-Carlo batch took %.2fs" % elapsed
