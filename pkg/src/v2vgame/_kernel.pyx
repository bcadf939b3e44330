# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled scalar kernels; semantic twin of ``_kernel_py``.

Every expression mirrors the pure-Python module line for line so both
backends emit identical floats.  See ``_kernel_py`` for the curve encoding
and model coding conventions.  Division guards from the reference module
are preserved even though cdivision is enabled (the guards raise before
any divide-by-zero can happen).
"""

from libc.math cimport pow as c_pow

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

COMPILED = True

cdef double _FP_TOL = 1e-10
cdef int _FP_MAX_ITER = 200
cdef double _INV_TOL = 1e-12
cdef int _INV_MAX_ITER = 200
cdef double _MASS_EPS = 1e-15


cdef inline double _fabs(double x):
    return -x if x < 0.0 else x


cdef double _ceval(int kind, double[:] params, double x):
    cdef int n, i, last
    cdef double x0, v0, x1, v1
    if kind == 0:
        return params[0] + params[1] * x
    if kind == 1:
        # libc pow keeps rounding identical to CPython's float power
        return params[0] + params[1] * c_pow(x, params[2])
    n = params.shape[0] // 2
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


cdef double _cinv(int kind, double[:] params, double v):
    cdef int n, it
    cdef double lo, hi, x, base, g
    if kind == 0:
        x = (v - params[0]) / params[1]
    elif kind == 1:
        base = (v - params[0]) / params[1]
        if base <= 0.0:
            x = 0.0
        else:
            x = c_pow(base, 1.0 / params[2])
    else:
        n = params.shape[0] // 2
        lo = params[0]
        hi = params[2 * (n - 1)]
        if v <= params[1]:
            x = lo
        elif v >= params[2 * (n - 1) + 1]:
            x = hi
        else:
            x = 0.5 * (lo + hi)
            for it in range(_INV_MAX_ITER):
                g = _ceval(kind, params, x) - v
                if _fabs(g) <= _INV_TOL:
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


cdef inline double _sigc(double beta, double tf, double f, double q):
    return beta * (q * tf + f)


def curve_eval(int kind, double[:] params, double x):
    """Evaluate a monotone curve at x."""
    return _ceval(kind, params, x)


def curve_inv(int kind, double[:] params, double v):
    """Invert a strictly increasing curve; result clamped to [0, 1]."""
    return _cinv(kind, params, v)


def thresholds(double beta, double r, double t, double f):
    """Return the three critical accident probabilities (vs, plain, vu)."""
    cdef double den_vs, den_vu
    den_vs = r * t + f
    if den_vs <= 0.0:
        raise DegenerateError("thresholds undefined: r*t + f is zero")
    den_vu = 1.0 + r * (1.0 - beta * t) - beta * f
    if den_vu <= 0.0:
        raise DegenerateError("thresholds undefined: unsignaled denominator is zero")
    return f / den_vs, 1.0 / (1.0 + r), (1.0 - beta * f) / den_vu


cdef int _classify(double beta, double y, double r, double t, double f,
                   int kind, double[:] params, double p_vs, double p_n,
                   double p_vu) except -1:
    cdef double tf = t - f
    cdef double p0 = _ceval(kind, params, 0.0)
    cdef double p1
    if p_vu < p0:
        return 1
    if p_vu <= _ceval(kind, params, y * (1.0 - _sigc(beta, tf, f, p_vu))):
        return 2
    if p_n < _ceval(kind, params, y * (1.0 - _sigc(beta, tf, f, p_n))):
        return 3
    if p_n <= _ceval(kind, params, 1.0 - y * _sigc(beta, tf, f, p_n)):
        return 4
    if p_vs < _ceval(kind, params, 1.0 - y * _sigc(beta, tf, f, p_vs)):
        return 5
    p1 = _ceval(kind, params, 1.0)
    if p_vs <= p1:
        return 6
    if p1 < p_vs:
        return 7
    raise ExhaustivenessError("no outcome family matched; inputs may be NaN")


def classify(double beta, double y, double r, double t, double f,
             int kind, double[:] params):
    """First matching outcome family (1..7) for an endogenous instance."""
    cdef double p_vs, p_n, p_vu
    p_vs, p_n, p_vu = thresholds(beta, r, t, f)
    return _classify(beta, y, r, t, f, kind, params, p_vs, p_n, p_vu)


cdef int _bisect_interior(int kind, double[:] params, double beta, double y,
                          double tf, double f, int which, double lo,
                          double hi, double* out_p, double* out_res,
                          int* out_it) except -1:
    cdef double glo, ghi, gm, mid
    cdef int it
    if which == 0:
        glo = _ceval(kind, params, y * (1.0 - _sigc(beta, tf, f, lo))) - lo
    else:
        glo = _ceval(kind, params, 1.0 - y * _sigc(beta, tf, f, lo)) - lo
    if _fabs(glo) <= _FP_TOL:
        out_p[0] = lo
        out_res[0] = _fabs(glo)
        out_it[0] = 0
        return 0
    if which == 0:
        ghi = _ceval(kind, params, y * (1.0 - _sigc(beta, tf, f, hi))) - hi
    else:
        ghi = _ceval(kind, params, 1.0 - y * _sigc(beta, tf, f, hi)) - hi
    if _fabs(ghi) <= _FP_TOL:
        out_p[0] = hi
        out_res[0] = _fabs(ghi)
        out_it[0] = 0
        return 0
    if (glo > 0.0) == (ghi > 0.0):
        raise BracketError(
            "fixed-point bracket [%r, %r] has no sign change" % (lo, hi)
        )
    it = 0
    while it < _FP_MAX_ITER:
        it += 1
        mid = 0.5 * (lo + hi)
        if which == 0:
            gm = _ceval(kind, params, y * (1.0 - _sigc(beta, tf, f, mid))) - mid
        else:
            gm = _ceval(kind, params, 1.0 - y * _sigc(beta, tf, f, mid)) - mid
        if _fabs(gm) <= _FP_TOL:
            out_p[0] = mid
            out_res[0] = _fabs(gm)
            out_it[0] = it
            return 0
        if (gm > 0.0) == (glo > 0.0):
            lo = mid
            glo = gm
        else:
            hi = mid
            ghi = gm
    raise NonConvergenceError(
        "fixed-point bisection did not reach tolerance in %d iterations"
        % _FP_MAX_ITER
    )


def solve_full(int model, double beta, double y, double r, double t, double f,
               int kind, double[:] params):
    """Solve the endogenous game for one model; see the reference kernel."""
    cdef double p_vs, p_n, p_vu, tf, p, res_unused, ps, pns, unsig, sig_mass
    cdef double m0, m1, m2, m3, m4, m5, need, trust, reckless, base, reck
    cdef int fam, iters
    p_vs, p_n, p_vu = thresholds(beta, r, t, f)
    fam = _classify(beta, y, r, t, f, kind, params, p_vs, p_n, p_vu)
    tf = t - f
    iters = 0
    res_unused = 0.0

    if fam == 1:
        p = _ceval(kind, params, 0.0)
    elif fam == 2:
        p = p_vu
    elif fam == 3:
        _bisect_interior(kind, params, beta, y, tf, f, 0, p_n, p_vu,
                         &p, &res_unused, &iters)
    elif fam == 4:
        p = p_n
    elif fam == 5:
        _bisect_interior(kind, params, beta, y, tf, f, 1, p_vs, p_n,
                         &p, &res_unused, &iters)
    elif fam == 6:
        p = p_vs
    else:
        p = _ceval(kind, params, 1.0)

    ps = _sigc(beta, tf, f, p)
    pns = 1.0 - ps
    unsig = pns * y
    sig_mass = ps * y

    m0 = m1 = m2 = m3 = m4 = m5 = 0.0
    if model == 0:
        if fam == 1:
            m0 = 1.0 - y
            m2 = unsig
            m4 = sig_mass
        elif fam == 2:
            need = _cinv(kind, params, p)
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
            need = _cinv(kind, params, p) - unsig
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
            need = _cinv(kind, params, p) - ((1.0 - y) + unsig)
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
        if fam == 1:
            m0 = 1.0 - y
            m2 = y
        elif fam == 2:
            need = _cinv(kind, params, p)
            if pns > _MASS_EPS:
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
            need = _cinv(kind, params, p) - unsig
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
            need = _cinv(kind, params, p) - base
            if ps > _MASS_EPS:
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

    cdef double residual = p - _ceval(kind, params, reck)
    if residual < 0.0:
        residual = -residual
    return fam, p, residual, iters, (m0, m1, m2, m3, m4, m5)


def solve_fast(int model, double beta, double y, double r, double t, double f,
               int kind, double[:] params):
    """Solve and aggregate the social cost; returns (family, p, cost)."""
    cdef int fam
    cdef double p, cost, ps, post, den, trust_cost
    fam, p, _, _, m = solve_full(model, beta, y, r, t, f, kind, params)
    cdef double m0 = m[0]
    cdef double m1 = m[1]
    cdef double m2 = m[2]
    cdef double m3 = m[3]
    cdef double m4 = m[4]
    cdef double m5 = m[5]
    if model == 0:
        cost = m0 * (1.0 - p) + m1 * r * p
        if m2 != 0.0 or m3 != 0.0:
            ps = _sigc(beta, t - f, f, p)
            post = p * (1.0 - beta * t) / (1.0 - ps)
            cost += m2 * (1.0 - post) + m3 * r * post
        if m4 != 0.0 or m5 != 0.0:
            den = p * t + (1.0 - p) * f
            post = p * t / den
            cost += m4 * (1.0 - post) + m5 * r * post
    else:
        trust_cost = (1.0 - p) * beta * f + r * p * (1.0 - beta * t)
        cost = (
            (m0 + m2) * (1.0 - p)
            + (m1 + m3) * r * p
            + m4 * trust_cost
        )
    return fam, p, cost
