"""Pure-Python scalar kernels: curve evaluation, thresholds, outcome-family
classification, and the endogenous fixed-point solve.

This module is the reference implementation; ``_kernel.pyx`` is a compiled
twin with identical semantics, and the active one is chosen at import time
by ``_backend``.  Keep the two in lockstep: every arithmetic expression here
is written exactly as in the compiled version so that both backends produce
the same floats on the same inputs.

Curves are passed as ``(kind, params)`` pairs so the hot path never touches
Python objects beyond a flat float sequence:

* kind 0 (affine):    params ``[a, b]``,      value ``a + b*x``
* kind 1 (power):     params ``[a, b, k]``,   value ``a + b*x**k``
* kind 2 (piecewise): params ``[x0, v0, x1, v1, ...]`` interleaved knots,
  linear between knots, clamped outside the knot span

Agent models are integer-coded: 0 = belief-updating (three driver types,
strategies Careful/Reckless), 1 = advisory-following (two driver types,
strategies Trust/Careful/Reckless).  ``solve_full`` keeps the two models'
mass bookkeeping and consistency checks on separate branches; only the
scalar fixed-point map of the interior families is shared, because both
models' reckless-weight recursions reduce to the same expression there.
"""

from __future__ import annotations

from .errors import (
    BracketError,
    DegenerateError,
    ExhaustivenessError,
    NonConvergenceError,
)

AFFINE = 0
POWER = 1
PIECEWISE = 2

BAYESIAN = 0
NON_BAYESIAN = 1

FP_TOL = 1e-10
FP_MAX_ITER = 200
INV_TOL = 1e-12
INV_MAX_ITER = 200
MASS_EPS = 1e-15

COMPILED = False


def curve_eval(kind, params, x):
    """Evaluate a monotone curve at x."""
    if kind == AFFINE:
        return params[0] + params[1] * x
    if kind == POWER:
        return params[0] + params[1] * x ** params[2]
    n = len(params) // 2
    if x <= params[0]:
        return params[1]
    last = 2 * (n - 1)
    if x >= params[last]:
        return params[last + 1]
    i = 0
    while params[2 * i + 2] < x:
        i += 1
    x0 = params[2 * i]
    v0 = params[2 * i + 1]
    x1 = params[2 * i + 2]
    v1 = params[2 * i + 3]
    return v0 + (v1 - v0) * (x - x0) / (x1 - x0)


def curve_inv(kind, params, v):
    """Invert a strictly increasing curve; result clamped to [0, 1].

    Affine and power kinds invert in closed form.  Piecewise curves are
    inverted by bisection on the argument until the residual |eval - v|
    drops to 1e-12 (or the iteration cap, for pathologically steep data).
    """
    if kind == AFFINE:
        x = (v - params[0]) / params[1]
    elif kind == POWER:
        base = (v - params[0]) / params[1]
        if base <= 0.0:
            x = 0.0
        else:
            x = base ** (1.0 / params[2])
    else:
        n = len(params) // 2
        lo = params[0]
        hi = params[2 * (n - 1)]
        if v <= params[1]:
            x = lo
        elif v >= params[2 * (n - 1) + 1]:
            x = hi
        else:
            x = 0.5 * (lo + hi)
            for _ in range(INV_MAX_ITER):
                g = curve_eval(kind, params, x) - v
                if abs(g) <= INV_TOL:
                    break
                if g < 0.0:
                    lo = x
                else:
                    hi = x
                x = 0.5 * (lo + hi)
    if x < 0.0:
        return 0.0
    if x > 1.0:
        return 1.0
    return x


def thresholds(beta, r, t, f):
    """Return the three critical accident probabilities (vs, plain, vu).

    Raises DegenerateError when the technology parameters make a threshold
    denominator vanish (no usable signal content).
    """
    den_vs = r * t + f
    if den_vs <= 0.0:
        raise DegenerateError("thresholds undefined: r*t + f is zero")
    den_vu = 1.0 + r * (1.0 - beta * t) - beta * f
    if den_vu <= 0.0:
        raise DegenerateError("thresholds undefined: unsignaled denominator is zero")
    p_vs = f / den_vs
    p_n = 1.0 / (1.0 + r)
    p_vu = (1.0 - beta * f) / den_vu
    return p_vs, p_n, p_vu


def _sig(beta, tf, f, q):
    """Probability of a displayed warning when the accident probability is q."""
    return beta * (q * tf + f)


def classify(beta, y, r, t, f, kind, params):
    """First matching outcome family (1..7) for an endogenous instance.

    The chain tests the families in order; each branch condition below is
    the printed predicate minus conjuncts already implied by the failure of
    the earlier branches (pure logic, no arithmetic change), so first-match
    semantics are preserved exactly in floating point.
    """
    p_vs, p_n, p_vu = thresholds(beta, r, t, f)
    tf = t - f
    p0 = curve_eval(kind, params, 0.0)
    if p_vu < p0:
        return 1
    if p_vu <= curve_eval(kind, params, y * (1.0 - _sig(beta, tf, f, p_vu))):
        return 2
    if p_n < curve_eval(kind, params, y * (1.0 - _sig(beta, tf, f, p_n))):
        return 3
    if p_n <= curve_eval(kind, params, 1.0 - y * _sig(beta, tf, f, p_n)):
        return 4
    if p_vs < curve_eval(kind, params, 1.0 - y * _sig(beta, tf, f, p_vs)):
        return 5
    p1 = curve_eval(kind, params, 1.0)
    if p_vs <= p1:
        return 6
    if p1 < p_vs:
        return 7
    raise ExhaustivenessError("no outcome family matched; inputs may be NaN")


def _bisect_interior(kind, params, beta, y, tf, f, which, lo, hi):
    """Solve P = crash(reckless weight at P) on [lo, hi] by bisection.

    which 0: reckless weight y*(1 - sig(P))   (interior between plain and vu)
    which 1: reckless weight 1 - y*sig(P)     (interior between vs and plain)

    Returns (P, residual, iterations).  Residual is |map(P) - P| at the
    returned point and is at most FP_TOL unless an endpoint already met the
    tolerance.  Raises BracketError when no sign change straddles, and
    NonConvergenceError at the iteration cap.
    """
    if which == 0:
        glo = curve_eval(kind, params, y * (1.0 - _sig(beta, tf, f, lo))) - lo
    else:
        glo = curve_eval(kind, params, 1.0 - y * _sig(beta, tf, f, lo)) - lo
    if abs(glo) <= FP_TOL:
        return lo, abs(glo), 0
    if which == 0:
        ghi = curve_eval(kind, params, y * (1.0 - _sig(beta, tf, f, hi))) - hi
    else:
        ghi = curve_eval(kind, params, 1.0 - y * _sig(beta, tf, f, hi)) - hi
    if abs(ghi) <= FP_TOL:
        return hi, abs(ghi), 0
    if (glo > 0.0) == (ghi > 0.0):
        raise BracketError(
            "fixed-point bracket [%r, %r] has no sign change" % (lo, hi)
        )
    it = 0
    while it < FP_MAX_ITER:
        it += 1
        mid = 0.5 * (lo + hi)
        if which == 0:
            gm = curve_eval(kind, params, y * (1.0 - _sig(beta, tf, f, mid))) - mid
        else:
            gm = curve_eval(kind, params, 1.0 - y * _sig(beta, tf, f, mid)) - mid
        if abs(gm) <= FP_TOL:
            return mid, abs(gm), it
        if (gm > 0.0) == (glo > 0.0):
            lo = mid
            glo = gm
        else:
            hi = mid
            ghi = gm
    raise NonConvergenceError(
        "fixed-point bisection did not reach tolerance in %d iterations" % FP_MAX_ITER
    )


def solve_full(model, beta, y, r, t, f, kind, params):
    """Solve the endogenous game for one model.

    Returns ``(family, p_accident, residual, iterations, masses)`` where
    ``masses`` is a 6-tuple of strategy masses:

    * model 0: (n_careful, n_reckless, vu_careful, vu_reckless,
      vs_careful, vs_reckless)
    * model 1: (n_careful, n_reckless, v_careful, v_reckless, v_trust, 0)

    The residual re-checks the model's own reckless-weight recursion at the
    returned masses, so each model's consistency is verified against its own
    accounting even where the scalar fixed-point map coincides.
    """
    p_vs, p_n, p_vu = thresholds(beta, r, t, f)
    fam = classify(beta, y, r, t, f, kind, params)
    tf = t - f
    iters = 0

    if fam == 1:
        p = curve_eval(kind, params, 0.0)
    elif fam == 2:
        p = p_vu
    elif fam == 3:
        p, _, iters = _bisect_interior(kind, params, beta, y, tf, f, 0, p_n, p_vu)
    elif fam == 4:
        p = p_n
    elif fam == 5:
        p, _, iters = _bisect_interior(kind, params, beta, y, tf, f, 1, p_vs, p_n)
    elif fam == 6:
        p = p_vs
    else:
        p = curve_eval(kind, params, 1.0)

    ps = _sig(beta, tf, f, p)
    pns = 1.0 - ps
    unsig = pns * y
    sig_mass = ps * y

    m0 = m1 = m2 = m3 = m4 = m5 = 0.0
    if model == BAYESIAN:
        # layout: n_C, n_R, vu_C, vu_R, vs_C, vs_R
        if fam == 1:
            m0 = 1.0 - y
            m2 = unsig
            m4 = sig_mass
        elif fam == 2:
            need = curve_inv(kind, params, p)
            if need > unsig:
                need = unsig
            m0 = 1.0 - y
            m3 = need
            m2 = unsig - need
            m4 = sig_mass
        elif fam == 3:
            m0 = 1.0 - y
            m3 = unsig
            m4 = sig_mass
        elif fam == 4:
            need = curve_inv(kind, params, p) - unsig
            if need < 0.0:
                need = 0.0
            elif need > 1.0 - y:
                need = 1.0 - y
            m1 = need
            m0 = (1.0 - y) - need
            m3 = unsig
            m4 = sig_mass
        elif fam == 5:
            m1 = 1.0 - y
            m3 = unsig
            m4 = sig_mass
        elif fam == 6:
            need = curve_inv(kind, params, p) - ((1.0 - y) + unsig)
            if need < 0.0:
                need = 0.0
            elif need > sig_mass:
                need = sig_mass
            m1 = 1.0 - y
            m3 = unsig
            m5 = need
            m4 = sig_mass - need
        else:
            m1 = 1.0 - y
            m3 = unsig
            m5 = sig_mass
        reck = m1 + m3 + m5
    else:
        # layout: n_C, n_R, v_C, v_R, v_T
        if fam == 1:
            m0 = 1.0 - y
            m2 = y
        elif fam == 2:
            need = curve_inv(kind, params, p)
            if pns > MASS_EPS:
                trust = need / pns
            else:
                trust = 0.0
            if trust > y:
                trust = y
            m0 = 1.0 - y
            m4 = trust
            m2 = y - trust
        elif fam == 3:
            m0 = 1.0 - y
            m4 = y
        elif fam == 4:
            need = curve_inv(kind, params, p) - unsig
            if need < 0.0:
                need = 0.0
            elif need > 1.0 - y:
                need = 1.0 - y
            m1 = need
            m0 = (1.0 - y) - need
            m4 = y
        elif fam == 5:
            m1 = 1.0 - y
            m4 = y
        elif fam == 6:
            base = (1.0 - y) + unsig
            need = curve_inv(kind, params, p) - base
            if ps > MASS_EPS:
                reckless = need / ps
            else:
                reckless = 0.0
            if reckless < 0.0:
                reckless = 0.0
            elif reckless > y:
                reckless = y
            m1 = 1.0 - y
            m3 = reckless
            m4 = y - reckless
        else:
            m1 = 1.0 - y
            m3 = y
        reck = m1 + m3 + pns * m4

    residual = abs(p - curve_eval(kind, params, reck))
    return fam, p, residual, iters, (m0, m1, m2, m3, m4, m5)


def solve_fast(model, beta, y, r, t, f, kind, params):
    """Solve and aggregate the social cost; returns (family, p, cost).

    Aggregation follows the model's own cost table: belief-updating types
    price strategies through their displayed-state posterior, advisory
    followers through the blended trust cost.  Strategy entries conditioned
    on probability-zero displayed states carry zero mass and are skipped.
    """
    fam, p, _, _, m = solve_full(model, beta, y, r, t, f, kind, params)
    if model == BAYESIAN:
        cost = m[0] * (1.0 - p) + m[1] * r * p
        if m[2] != 0.0 or m[3] != 0.0:
            ps = _sig(beta, t - f, f, p)
            post = p * (1.0 - beta * t) / (1.0 - ps)
            cost += m[2] * (1.0 - post) + m[3] * r * post
        if m[4] != 0.0 or m[5] != 0.0:
            den = p * t + (1.0 - p) * f
            post = p * t / den
            cost += m[4] * (1.0 - post) + m[5] * r * post
    else:
        trust_cost = (1.0 - p) * beta * f + r * p * (1.0 - beta * t)
        cost = (
            (m[0] + m[2]) * (1.0 - p)
            + (m[1] + m[3]) * r * p
            + m[4] * trust_cost
        )
    return fam, p, cost
