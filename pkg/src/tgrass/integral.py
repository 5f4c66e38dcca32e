"""Vertical-line Mellin-Barnes integrals for the solution vectors.

The contour puts Re t_i = Re(z_i + h/2); each t_i is parametrized as
z_i + h/2 + i*y_i with real y_i.  The integrand decays exponentially in |y|
(rate governed by arg p), so the line is covered by dyadic segments marching
outward, each segment integrated by adaptive Gauss-Kronrod (G7, K15)
bisection.  Marching stops once segment contributions and the integrand
magnitude fall below a fraction of the requested tolerance relative to the
on-contour peak.  One- and two-fold integrals are supported; the two-fold
case nests an outer adaptive pass over an inner vectorized integral.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .analytic import (
    BranchedP,
    DomainError,
    NoConvergence,
    coh_weight_value,
    log_gamma_array,
)
from .indexing import complement, subsets

# Gauss-Kronrod 7-15 nodes and weights on [-1, 1].
_XK = np.array(
    [
        -0.991455371120813,
        -0.949107912342759,
        -0.864864423359769,
        -0.741531185599394,
        -0.586087235467691,
        -0.405845151377397,
        -0.207784955007898,
        0.0,
        0.207784955007898,
        0.405845151377397,
        0.586087235467691,
        0.741531185599394,
        0.864864423359769,
        0.949107912342759,
        0.991455371120813,
    ]
)
_WK = np.array(
    [
        0.022935322010529,
        0.063092092629979,
        0.104790010322250,
        0.140653259715525,
        0.169004726639267,
        0.190350578064785,
        0.204432940075298,
        0.209482141084728,
        0.204432940075298,
        0.190350578064785,
        0.169004726639267,
        0.140653259715525,
        0.104790010322250,
        0.063092092629979,
        0.022935322010529,
    ]
)
# Gauss-7 weights sit on every other Kronrod node (indices 1,3,...,13).
_WG = np.array(
    [
        0.129484966168870,
        0.279705391489277,
        0.381830050505119,
        0.417959183673469,
        0.381830050505119,
        0.279705391489277,
        0.129484966168870,
    ]
)
_GIDX = np.array([1, 3, 5, 7, 9, 11, 13])


@dataclass
class IntegralResult:
    values: dict
    abs_err: float
    evals: int
    cutoff: float


class _Budget:
    def __init__(self, max_evals):
        self.evals = 0
        self.max_evals = max_evals

    def spend(self, n):
        self.evals += n
        if self.evals > self.max_evals:
            raise NoConvergence("quadrature evaluation budget exhausted")


def _gk_segment(f, a, b, budget):
    mid, half = 0.5 * (a + b), 0.5 * (b - a)
    xs = mid + half * _XK
    vals = np.asarray(f(xs))
    budget.spend(xs.size)
    if vals.ndim == 1:
        vals = vals[:, None]
    if not np.all(np.isfinite(vals)):
        raise NoConvergence("integrand overflowed on the contour")
    k15 = half * np.tensordot(_WK, vals, axes=(0, 0))
    g7 = half * np.tensordot(_WG, vals[_GIDX], axes=(0, 0))
    err = float(np.max(np.abs(k15 - g7)))
    peak = float(np.max(np.abs(vals)))
    return k15, err, peak


def _adaptive_segment(f, a, b, tol, budget, depth=0, floor=0.0):
    """Adaptive bisection; ``floor`` stops refinement at a noise level
    (used when the integrand itself is computed by an inner quadrature)."""
    val, err, peak = _gk_segment(f, a, b, budget)
    if err <= max(tol, floor) or depth >= 20:
        if err > max(tol, floor) and depth >= 20:
            raise NoConvergence("segment refinement limit reached")
        return val, err, peak
    mid = 0.5 * (a + b)
    half_tol = max(0.5 * tol, floor)
    v1, e1, p1 = _adaptive_segment(f, a, mid, half_tol, budget, depth + 1, floor)
    v2, e2, p2 = _adaptive_segment(f, mid, b, half_tol, budget, depth + 1, floor)
    return v1 + v2, e1 + e2, max(p1, p2)


def integrate_line(f, tol, budget, max_cutoff=48.0, force_cutoff=None, floor=0.0):
    """Integrate a vector-valued integrand over the whole real line.

    Marches outward over dyadic segments; each side stops when two
    consecutive segments contribute less than tol/10 and the integrand
    there has decayed below tol/10 of the running on-contour peak.  When
    ``force_cutoff`` is set the march continues at least that far (used by
    the cutoff-doubling stability check).
    """
    total = None
    err = 0.0
    peak = 0.0
    cutoff = 0.0
    for sign in (1.0, -1.0):
        lo, hi = 0.0, 1.0
        quiet = 0
        while True:
            a, b = (lo, hi) if sign > 0 else (-hi, -lo)
            val, e, p = _adaptive_segment(f, a, b, tol / 16.0, budget, floor=floor)
            total = val if total is None else total + val
            err += e
            peak = max(peak, p)
            cutoff = max(cutoff, hi)
            contrib = float(np.max(np.abs(val)))
            decayed = contrib < tol / 10.0 and p < peak * tol / 10.0
            if decayed and (force_cutoff is None or hi >= force_cutoff):
                quiet += 1
                if quiet >= 2:
                    break
            else:
                quiet = 0
            lo, hi = hi, min(2.0 * hi, hi + 16.0)
            if lo >= max_cutoff:
                raise NoConvergence(
                    f"integrand not decayed by |y| = {max_cutoff}"
                )
    return total, err, peak, cutoff


def _integrand_factory(k, params, p, restrict_params=None):
    """Build f(t-columns) -> array (npts, #fixed points) for the integral.

    ``params`` drives the master function and the contour; fixed-point
    restrictions of the weight polynomial use ``restrict_params`` (defaults
    to ``params``).
    """
    z = np.array(params.z, dtype=complex)
    h = complex(params.h)
    n = params.n
    rz = params.z if restrict_params is None else restrict_params.z
    log_p = p.log_branch
    h_exp = cmath.exp(2j * math.pi * h)
    z_exp = np.exp(2j * math.pi * z)
    order = subsets(k, n)
    restr = [
        (
            [rz[i - 1] for i in J.elements],
            [rz[i - 1] for i in complement(J).elements],
        )
        for J in order
    ]

    def f(ts):
        # ts: list of k arrays (same shape), the complex t values.  The
        # whole scalar part is accumulated in log space: every individual
        # factor is representable on the truncated contour, but products of
        # growing factors are not.
        tsum = sum(ts)
        log_core = log_p * tsum + 1j * math.pi * n * tsum
        for i in range(k):
            for a in range(n):
                log_core = log_core + log_gamma_array(z[a] - ts[i])
                log_core = log_core + log_gamma_array(ts[i] - z[a] - h)
            for j in range(k):
                if j != i:
                    log_core = log_core - log_gamma_array(ts[j] - ts[i])
                    log_core = log_core - log_gamma_array(1.0 + ts[i] - ts[j] - h)
        t_exp = [np.exp(2j * math.pi * t) for t in ts]
        for i in range(k):
            for a in range(i):
                log_core = log_core + np.log(1.0 - h_exp * z_exp[a] / t_exp[i])
            for b in range(i + 1, k):
                log_core = log_core + np.log(1.0 - z_exp[b] / t_exp[i])
            for j in range(i + 1, k):
                log_core = log_core + np.log(1.0 - h_exp * t_exp[j] / t_exp[i])
                log_core = log_core - np.log(1.0 - t_exp[j] / t_exp[i])
            for a in range(k, n):
                log_core = log_core + np.log(1.0 - z_exp[a] / t_exp[i])
        for i in range(k):
            for j in range(k):
                if j != i:
                    log_core = log_core - np.log(1.0 - h_exp * t_exp[i] / t_exp[j])
        with np.errstate(under="ignore"):
            core = np.exp(log_core)
        cols = []
        for gj, gbj in restr:
            w = coh_weight_value(ts, gj, gbj, h)
            cols.append(core * w)
        return np.stack(cols, axis=-1)

    return f, order


def mellin_barnes(k, params, p, tol=1e-8, restrict_params=None, max_evals=2_000_000):
    """The k-fold vertical-line integral, one value per fixed point.

    Requires parameters in the integral domain and a branched base point off
    the nonnegative real axis; k <= 2.
    """
    if k > 2:
        raise DomainError("only k <= 2 contours are supported")
    if not params.in_L_int:
        raise DomainError("parameters outside the integral domain")
    if not isinstance(p, BranchedP):
        p = BranchedP(p)
    n = params.n
    f, order = _integrand_factory(k, params, p, restrict_params)
    budget = _Budget(max_evals)
    anchors = [params.z[i] + params.h / 2.0 for i in range(k)]
    if k == 1:

        def g(ys):
            return f([anchors[0] + 1j * ys])

        total, err, _, cutoff = integrate_line(g, tol * 2.0 * math.pi, budget)
        scale = 1.0 / (2.0 * math.pi)
        values = {J: scale * total[m] for m, J in enumerate(order)}
        return IntegralResult(values, scale * err, budget.evals, cutoff)

    # k == 2: outer adaptive over y1, inner vectorized integral over y2.
    # The inner tolerance sits far below the outer segment tolerance, and
    # outer refinement is floored at the inner noise level so the outer
    # error estimate cannot chase inner quadrature noise.
    outer_tol = tol * (2.0 * math.pi) ** 2
    inner_tol = outer_tol / 2000.0

    def outer(ys1):
        rows = []
        for y1 in np.atleast_1d(ys1):
            t1 = anchors[0] + 1j * complex(y1)

            def g(ys2):
                t2 = anchors[1] + 1j * ys2
                return f([np.full_like(t2, t1), t2])

            val, _, _, _ = integrate_line(g, inner_tol, budget)
            rows.append(val)
        return np.stack(rows, axis=0)

    total, err, _, cutoff = integrate_line(
        outer, outer_tol, budget, floor=4.0 * inner_tol
    )
    scale = 1.0 / (2.0 * math.pi) ** 2
    values = {J: scale * total[m] for m, J in enumerate(order)}
    return IntegralResult(values, scale * err, budget.evals, cutoff)
