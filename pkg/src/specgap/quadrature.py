"""Quadrature utilities.

Three layers are used throughout the package:

* adaptive quadrature (QUADPACK via scipy) for normalizations, moments and
  tail masses; integrals over (a, infinity) are carried out in the variable
  u = log(1+r), where the r^{n-1} vanishing at the origin stays polynomial
  and every integrable tail (power law or faster) becomes an exponential
  decay, and the integrand is assembled as sign * exp(log-magnitude - peak)
  so that partial under/overflow of its factors cannot corrupt it;
* fixed-order Gauss-Legendre panels over the cells of a prescribed grid
  (cumulative distribution tables);
* variation-adaptive Gauss-Legendre panels for integrands of the form
  exp(g) with g of large dynamic range (finite-volume assembly), carried
  out entirely on the log scale.
"""

import math

import numpy as np
from scipy.integrate import quad

from .errors import ConvergenceError, NonIntegrable

_GL_CACHE = {}


def gl_rule(order):
    """Gauss-Legendre nodes/weights on [0, 1], cached per order."""
    rule = _GL_CACHE.get(order)
    if rule is None:
        x, w = np.polynomial.legendre.leggauss(order)
        rule = ((x + 1.0) / 2.0, w / 2.0)
        _GL_CACHE[order] = rule
    return rule


def _checked_quad(fn, a, b, rel_tol, abs_tol, accept_rel, points=None):
    # full_output suppresses QUADPACK's warning chatter; the roundoff
    # plateau of the epsilon extrapolation is expected at tight tolerances
    # near algebraic endpoint singularities, so acceptance is judged
    # against the caller's contract (accept_rel), not the request.
    out = quad(fn, a, b, epsabs=abs_tol, epsrel=rel_tol, limit=400,
               points=points, full_output=1)
    val, err = out[0], out[1]
    if not math.isfinite(val):
        raise ConvergenceError(f"integral over [{a}, {b}] is not finite")
    if err > max(abs_tol, accept_rel * abs(val)) + 1e-300:
        raise ConvergenceError(
            f"quadrature error {err:.3e} exceeds tolerance for value {val:.6e}")
    return val, err


def quad_finite(fn, a, b, rel_tol=1e-12, abs_tol=0.0, accept_rel=None,
                points=None):
    """Adaptive integral of ``fn`` over the finite interval [a, b].

    Returns (value, error_estimate); raises ConvergenceError when the
    reported error estimate violates ``accept_rel`` (default 100x the
    requested relative tolerance -- QUADPACK's estimate is conservative).
    """
    if accept_rel is None:
        accept_rel = 100.0 * rel_tol
    return _checked_quad(fn, a, b, rel_tol, abs_tol, accept_rel, points)


# log(1+r) beyond which r itself leaves double range; integration windows
# never extend past it and the remainder is handled analytically
_U_CAP = 708.0
# e-folds below the peak past which the integrand is considered dead
_DROP = 320.0
# u-slopes above this are treated as "no integrable decay established";
# in terms of the log-log slope p of the r-space integrand this is the
# usual p >= -1.005 margin (the u-integrand carries slope p + 1)
_LIVE_SLOPE = -5e-3
# density peaks of interest all sit at moderate radii; a global maximum
# beyond this u with no decay behind it signals overflow corruption of a
# genuinely divergent integrand, not a real concentration of mass
_U_PEAK_SANE = 30.0


def tail_integral(log_abs_fn, r_lo=0.0, *, sign_fn=None, rel_tol=1e-12,
                  accept_rel=None, abs_floor=0.0, points=8193):
    """integral_{r_lo}^inf s(r) exp(L(r)) dr with L = log_abs_fn, s = sign_fn.

    Carried out in u = log(1+r).  Returns (value, error, log_scale): the
    integral is value * exp(log_scale) and the error bound scales the same
    way.  ``log_abs_fn`` must be vectorized and may return -inf where the
    integrand vanishes (isolated zeros of a signed integrand included);
    ``sign_fn`` (scalar -> +-1) defaults to a positive integrand.

    The u-axis is probed on a fine grid up to the float-representability
    cap.  The quadrature window ends where the integrand has permanently
    dropped ``_DROP`` e-folds below its peak; mass beyond the window (or
    beyond the cap) is estimated from the fitted log-linear tail slope and
    the estimate is charged to the error bound, so near-threshold tails
    fail the acceptance check honestly instead of being silently dropped.

    Raises NonIntegrable when no integrable decay is established while the
    integrand is still live (slope above ``_LIVE_SLOPE``, a peak at the
    representability cap, or a float-range overflow), and ConvergenceError
    when the final error violates max(abs_floor, accept_rel * |value|).
    """
    if accept_rel is None:
        accept_rel = 100.0 * rel_tol
    u0 = math.log1p(r_lo)
    if u0 >= _U_CAP:
        return 0.0, 0.0, 0.0
    us = np.linspace(u0, _U_CAP, points)
    with np.errstate(all="ignore"):
        la = np.asarray(log_abs_fn(np.expm1(us)), dtype=float)
    li = np.where(np.isnan(la), -np.inf, la) + us
    shift = float(np.max(li))
    if shift == -np.inf:
        return 0.0, 0.0, 0.0
    if math.isinf(shift):
        raise NonIntegrable(
            "integrand log-magnitude reaches +inf: the integral diverges, "
            "or overflows float range and needs a log-form integrand")
    rel_li = li - shift
    i_pk = int(np.argmax(li))

    # window end: first index past the peak from which on everything is dead
    suffix_max = np.maximum.accumulate(rel_li[::-1])[::-1]
    dead = np.nonzero(suffix_max[i_pk + 1:] < -_DROP)[0]
    cut = (i_pk + 1 + dead[0]) if dead.size else None

    # decay slope on the (post-peak) approach to the window end
    stop = cut if cut is not None else points
    approach = np.arange(i_pk + 1, stop)
    approach = approach[np.isfinite(rel_li[approach])][-32:]
    slope = None
    if approach.size >= 4:
        slope = float(np.polyfit(us[approach], rel_li[approach], 1)[0])

    live = cut is None
    corr = 0.0
    r_last = float(np.expm1(us[approach[-1]])) if approach.size else None
    if live:
        if slope is None or slope >= _LIVE_SLOPE:
            raise NonIntegrable(
                "integrand tail is still live at the representability cap "
                + (f"with log slope {slope:.3e}" if slope is not None
                   else "with no decay established"))
        corr = math.exp(float(rel_li[approach[-1]])) / (-slope)
        u_hi = _U_CAP
    else:
        u_hi = float(us[cut])
        if us[i_pk] > _U_PEAK_SANE and (slope is None or slope >= _LIVE_SLOPE):
            raise NonIntegrable(
                "integrand rises out to extreme radii and then vanishes "
                "abruptly; this is float-range corruption of a divergent "
                "integral, not decay")
        if slope is not None and slope < _LIVE_SLOPE and approach.size:
            tail_top = float(rel_li[approach[-1]])
            if tail_top > -340.0:
                corr = math.exp(tail_top) / (-slope)
    sg_corr = 1.0
    if sign_fn is not None and corr > 0.0 and r_last is not None:
        sg_corr = float(sign_fn(r_last))

    def integrand(u):
        r = math.expm1(u)
        with np.errstate(all="ignore"):
            lv = float(log_abs_fn(r))
        v = lv + u - shift
        if not (v > -745.0):           # nan and dead values alike
            return 0.0
        val = math.exp(min(v, 705.0))
        if sign_fn is not None:
            val *= float(sign_fn(r))
        return val

    pts = [float(us[i_pk])] if u0 < us[i_pk] < u_hi else None
    abs_floor_scaled = 0.0
    if abs_floor > 0.0:
        abs_floor_scaled = min(abs_floor * math.exp(min(-shift, 690.0)), 1e280)
    out = quad(integrand, u0, u_hi, epsabs=abs_floor_scaled, epsrel=rel_tol,
               limit=400, points=pts, full_output=1)
    val, qerr = out[0], out[1]
    total = val + sg_corr * corr
    err = qerr + 0.6 * corr
    if not math.isfinite(total):
        raise ConvergenceError("tail integral did not converge")
    if err > max(abs_floor_scaled, accept_rel * abs(total)) + 1e-300:
        raise ConvergenceError(
            f"tail-integral error {err:.3e} exceeds tolerance for value "
            f"{total:.6e} (log scale {shift:.3f})")
    return total, err, shift


def cell_integrals(fn, edges, order=16):
    """Per-cell Gauss-Legendre integrals of a vectorized integrand.

    edges is an increasing array of m+1 cell boundaries; the return value
    has m entries, one integral per cell.  Intended for smooth, already
    normalized integrands (no overflow protection).
    """
    edges = np.asarray(edges, dtype=float)
    x, w = gl_rule(order)
    widths = np.diff(edges)
    nodes = edges[:-1, None] + widths[:, None] * x[None, :]
    vals = fn(nodes.ravel()).reshape(nodes.shape)
    return widths * (vals @ w)


def log_integrals_exp(log_f, lo, hi, order=8, var_target=2.0, max_panels=64):
    """log of integral_{lo_i}^{hi_i} exp(log_f(t)) dt for many intervals.

    ``log_f`` is a vectorized callable.  Each interval is probed at five
    points and split into enough equal panels that the variation of log_f
    per panel is about ``var_target``; a fixed Gauss-Legendre rule is then
    applied per panel.  All arithmetic on the integrand happens relative
    to the per-interval maximum of log_f, so the dynamic range of exp(log_f)
    never matters; only the *log* of each integral is returned.
    """
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    m = lo.size
    if m == 0:
        return np.empty(0)

    # probe the variation of log_f on every interval
    probe_x = np.linspace(0.0, 1.0, 5)
    probe_t = lo[:, None] + (hi - lo)[:, None] * probe_x[None, :]
    probe_g = log_f(probe_t.ravel()).reshape(m, 5)
    variation = np.sum(np.abs(np.diff(probe_g, axis=1)), axis=1)
    variation = np.where(np.isfinite(variation), variation, float(max_panels) * var_target)
    panels = np.clip(np.ceil(variation / var_target).astype(int), 1, max_panels)

    # flatten all panels of all intervals into one node array
    x, w = gl_rule(order)
    total = int(panels.sum())
    interval_of_panel = np.repeat(np.arange(m), panels)
    # index of each panel within its interval
    starts = np.concatenate(([0], np.cumsum(panels)))[:-1]
    within = np.arange(total) - np.repeat(starts, panels)
    pw = ((hi - lo) / panels)[interval_of_panel]          # panel widths
    p_lo = lo[interval_of_panel] + within * pw            # panel left edges
    nodes = p_lo[:, None] + pw[:, None] * x[None, :]
    g = log_f(nodes.ravel()).reshape(total, order)

    shift = np.max(probe_g, axis=1)                        # per-interval scale
    g_shifted = g - shift[interval_of_panel, None]
    panel_vals = pw * (np.exp(g_shifted) @ w)
    interval_vals = np.zeros(m)
    np.add.at(interval_vals, interval_of_panel, panel_vals)
    with np.errstate(divide="ignore"):
        return shift + np.log(interval_vals)
