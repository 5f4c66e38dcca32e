"""Numerical solutions built from residue series of the master function.

The master-function residues have closed forms: each residue extracts, for
every series variable, the factor of the Gamma product whose argument hits a
nonpositive integer; the remaining Gamma factors and the cohomological weight
polynomial are evaluated at the shifted point.  Cohomology-valued quantities
are carried as value vectors over the fixed points (Chern roots specialized
to the corresponding equivariant parameters).

Branches: base points p live on the sheet -2*pi < arg p < 0 of the universal
cover punctured at 0; an integer winding index selects the sheet.  Fractional
powers are always exp(s * (log|p| + i(arg p + 2*pi*winding))).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from itertools import permutations

import numpy as np

from .indexing import FixedPointIndex, complement, subsets


class PoleError(ArithmeticError):
    """Gamma evaluated at (numerically) a nonpositive integer."""


class DomainError(ValueError):
    """Parameters outside the required analytic domain."""


class NoConvergence(RuntimeError):
    """Series or quadrature failed to reach the requested tolerance."""


# Lanczos approximation, g = 7, 9 coefficients; relative accuracy ~1e-13
# on the right half plane, extended by reflection.
_LANCZOS_G = 7.0
_LANCZOS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)


def _lanczos_right(w):
    """Lanczos core for scalars with Re w >= 0.5."""
    z = w - 1.0
    x = _LANCZOS[0]
    for i in range(1, len(_LANCZOS)):
        x += _LANCZOS[i] / (z + i)
    t = z + _LANCZOS_G + 0.5
    return math.sqrt(2.0 * math.pi) * t ** (z + 0.5) * cmath.exp(-t) * x


def gamma_c(w):
    """Complex Gamma function (Lanczos with reflection).

    Raises PoleError within 1e-12 of a nonpositive integer.
    """
    w = complex(w)
    if w.real < 0.5:
        nearest = round(w.real)
        if nearest <= 0 and abs(w - nearest) <= 1e-12:
            raise PoleError(f"Gamma pole at {w}")
        s = cmath.sin(cmath.pi * w)
        if s == 0:
            raise PoleError(f"Gamma pole at {w}")
        return cmath.pi / (s * _lanczos_right(1.0 - w))
    return _lanczos_right(w)


def gamma_array(w):
    """Vectorized complex Gamma over numpy arrays (no pole checks)."""
    w = np.asarray(w, dtype=complex)
    refl = w.real < 0.5
    safe = np.where(refl, 1.0 - w, w)
    z = safe - 1.0
    x = np.full_like(z, _LANCZOS[0])
    for i in range(1, len(_LANCZOS)):
        x = x + _LANCZOS[i] / (z + i)
    t = z + _LANCZOS_G + 0.5
    core = math.sqrt(2.0 * math.pi) * t ** (z + 0.5) * np.exp(-t) * x
    with np.errstate(divide="ignore", invalid="ignore"):
        reflected = np.pi / (np.sin(np.pi * w) * core)
    return np.where(refl, reflected, core)


def log_gamma_array(w):
    """Vectorized log of complex Gamma, correct up to multiples of 2*pi*i.

    Summing such logs and exponentiating once reproduces products of Gamma
    values without intermediate overflow; the ambiguous imaginary part
    cancels under a single final exp.
    """
    w = np.asarray(w, dtype=complex)
    refl = w.real < 0.5
    safe = np.where(refl, 1.0 - w, w)
    z = safe - 1.0
    x = np.full_like(z, _LANCZOS[0])
    for i in range(1, len(_LANCZOS)):
        x = x + _LANCZOS[i] / (z + i)
    t = z + _LANCZOS_G + 0.5
    lg = 0.5 * math.log(2.0 * math.pi) + (z + 0.5) * np.log(t) - t + np.log(x)
    with np.errstate(divide="ignore", invalid="ignore"):
        reflected = math.log(math.pi) - np.log(np.sin(np.pi * w)) - lg
    return np.where(refl, reflected, lg)


def _dist_to_int(w):
    w = complex(w)
    return abs(w - round(w.real))


def _dist_to_nonpos_int(w):
    w = complex(w)
    m = min(round(w.real), 0)
    return abs(w - m)


EPS_DOM = 1e-6


@dataclass(frozen=True)
class ParameterPoint:
    """Equivariant parameters (z_1..z_n, h) with domain flags.

    Flags are computed with an exclusion margin around the excluded
    hyperplanes; points within the margin are rejected.
    """

    z: tuple
    h: complex
    margin: float = EPS_DOM
    in_L: bool = field(init=False)
    in_L_plus: bool = field(init=False)
    in_L_int: bool = field(init=False)

    def __post_init__(self):
        z = tuple(complex(v) for v in self.z)
        object.__setattr__(self, "z", z)
        object.__setattr__(self, "h", complex(self.h))
        n = len(z)
        ok_int_diff = True
        ok_shift = True
        for a in range(n):
            for b in range(n):
                if a == b:
                    continue
                if _dist_to_int(z[a] - z[b]) <= self.margin:
                    ok_int_diff = False
                if _dist_to_nonpos_int(z[a] - z[b] - self.h) <= self.margin:
                    ok_shift = False
        object.__setattr__(self, "in_L", ok_int_diff and ok_shift)
        object.__setattr__(self, "in_L_plus", ok_shift)
        ok_int = self.h.real < -self.margin
        for i in range(n - 1):
            if (z[i] - z[i + 1] + self.h).real <= self.margin:
                ok_int = False
        object.__setattr__(self, "in_L_int", ok_int)

    @property
    def n(self):
        return len(self.z)

    def permuted(self, perm):
        """The point (z_perm(1), ..., z_perm(n); h)."""
        return ParameterPoint(
            tuple(self.z[perm[i] - 1] for i in range(len(self.z))),
            self.h,
            self.margin,
        )


@dataclass(frozen=True)
class BranchedP:
    """A point on the universal cover over C \\ {0}: principal-sheet value
    with -2*pi < arg p < 0, plus an integer winding index around 0."""

    p: complex
    winding: int = 0

    def __post_init__(self):
        p = complex(self.p)
        object.__setattr__(self, "p", p)
        if p == 0 or (p.imag == 0 and p.real > 0):
            raise DomainError("base point must avoid the nonnegative real axis")

    @property
    def arg(self):
        ph = cmath.phase(self.p)
        return ph if ph < 0 else ph - 2.0 * math.pi

    @property
    def log_branch(self):
        return complex(
            math.log(abs(self.p)), self.arg + 2.0 * math.pi * self.winding
        )

    def power(self, s):
        """p**s on the selected sheet."""
        return cmath.exp(complex(s) * self.log_branch)

    def shifted(self, dw):
        return BranchedP(self.p, self.winding + dw)

    def __abs__(self):
        return abs(self.p)


@dataclass
class SolutionEvaluation:
    """Value vector of a solution over fixed points, with truncation data."""

    values: dict
    side: str
    truncation_order: int
    tail_estimate: float

    def as_array(self, order):
        return np.array([self.values[i] for i in order])


def coh_weight_value(t, gam, gambar, h):
    """Direct numeric evaluation of the reduced cohomological weight function."""
    k = len(t)
    total = 0j
    for perm in permutations(range(k)):
        ts = [t[i] for i in perm]
        v = 1 + 0j
        for i in range(k):
            for l in range(i):
                v *= ts[i] - gam[l] - h
            for m in range(i + 1, k):
                v *= ts[i] - gam[m]
            for j in range(i + 1, k):
                v *= (ts[i] - ts[j] - h) / (ts[i] - ts[j])
        total += v
    for ti in t:
        for gb in gambar:
            total *= ti - gb
    return total


def q_value(params, index):
    """The Q factor at a fixed point: prod (z_a - z_b - h), a in J, b not."""
    z, h = params.z, params.h
    out = 1 + 0j
    for a in index.elements:
        for b in complement(index).elements:
            out *= z[a - 1] - z[b - 1] - h
    return out


def _gamma_or_raise(w):
    return gamma_c(w)


def residue_values(index, l, params, side):
    """Closed-form iterated residue of (master function * weight polynomial).

    Returns one complex value per fixed point J (the weight polynomial's
    Chern roots specialized to z_J, z_Jbar).
    """
    if not params.in_L:
        raise DomainError("parameters must avoid the excluded hyperplanes")
    z, h = params.z, params.h
    n = params.n
    elems = index.elements
    k = len(elems)
    if side == "zero":
        t_star = [z[i - 1] + li for i, li in zip(elems, l)]
        fact = 1.0
        for li in l:
            fact *= -((-1.0) ** li) / math.factorial(li)
    else:
        t_star = [z[i - 1] + h - li for i, li in zip(elems, l)]
        fact = 1.0
        for li in l:
            fact *= ((-1.0) ** li) / math.factorial(li)
    base = cmath.exp(1j * math.pi * n * sum(t_star))
    gam = complex(fact)
    for a in range(k):
        gam *= _gamma_or_raise(l[a] - h)
        ia = elems[a]
        for c in range(1, n + 1):
            if c == ia:
                continue
            gam *= _gamma_or_raise(z[c - 1] - t_star[a])
            gam *= _gamma_or_raise(t_star[a] - z[c - 1] - h)
    for a in range(k):
        for b in range(k):
            if a == b:
                continue
            gam /= _gamma_or_raise(t_star[b] - t_star[a])
            gam /= _gamma_or_raise(1 + t_star[a] - t_star[b] - h)
    core = base * gam
    out = {}
    for J in subsets(k, n):
        gj = [z[i - 1] for i in J.elements]
        gbj = [z[i - 1] for i in complement(J).elements]
        out[J] = core * coh_weight_value(t_star, gj, gbj, h)
    return out


def _compositions(total, parts):
    if parts == 1:
        yield (total,)
        return
    for head in range(total + 1):
        for rest in _compositions(total - head, parts - 1):
            yield (head,) + rest


def f_series(index, params, p, side, tol=1e-10, max_order=200):
    """Adaptive partial sum of the residue series over total-degree shells.

    The tail is estimated geometrically from the last shell, inflated by the
    polynomial growth factor of the residue magnitudes.
    """
    if side not in ("zero", "inf"):
        raise ValueError("side must be 'zero' or 'inf'")
    k, n = index.k, params.n
    mod = abs(p)
    if abs(mod - 1.0) < 0.05:
        raise NoConvergence("|p| too close to 1 for the residue series")
    if side == "zero":
        if mod >= 1.0:
            raise NoConvergence("zero-side series requires |p| < 1")
        q = mod
    else:
        if mod <= 1.0:
            raise NoConvergence("inf-side series requires |p| > 1")
        q = 1.0 / mod
    growth = k - 1 - k * params.h.real * (n + 1 - k)
    order = subsets(k, n)
    totals = {J: 0j for J in order}
    tail = math.inf
    s = 0
    prev_norm = None
    pc = complex(p.p)
    while s <= max_order:
        shell = {J: 0j for J in order}
        for l in _compositions(s, k):
            res = residue_values(index, l, params, side)
            for J in order:
                shell[J] += res[J]
        scale = pc**s if side == "zero" else pc ** (-s)
        for J in order:
            totals[J] += shell[J] * scale
        norm = max(abs(shell[J]) for J in order) * (q**s)
        ref = norm if prev_norm is None else max(norm, prev_norm * q)
        qeff = q * ((k + s + 1) / (k + s)) ** max(growth, 0.0)
        if qeff < 1.0:
            tail = ref * qeff / (1.0 - qeff)
            if s >= 1 and tail < tol:
                break
        prev_norm = norm
        s += 1
    else:
        raise NoConvergence(f"series did not reach tol={tol} by order {max_order}")
    pref = (-gamma_c(-params.h)) ** (-k) if side == "zero" else gamma_c(-params.h) ** (-k)
    values = {J: pref * totals[J] for J in order}
    return SolutionEvaluation(
        values=values,
        side=side,
        truncation_order=s,
        tail_estimate=abs(pref) * tail,
    )


def _p_power_exponent(index, params, side):
    s = sum(params.z[i - 1] for i in index.elements)
    if side == "inf":
        s = s + index.k * params.h
    return s


def psi_point(index, params, p, side, tol=1e-10, max_order=200):
    """Fixed-point solution: branch-tracked power times series times Q."""
    fs = f_series(index, params, p, side, tol=tol, max_order=max_order)
    power = p.power(_p_power_exponent(index, params, side))
    values = {}
    qmax = 0.0
    for J, v in fs.values.items():
        qj = q_value(params, J)
        qmax = max(qmax, abs(qj))
        values[J] = power * v * qj
    return SolutionEvaluation(
        values=values,
        side=side,
        truncation_order=fs.truncation_order,
        tail_estimate=fs.tail_estimate * abs(power) * qmax,
    )


def exp_restriction(x, index, params):
    """Restriction of a K-class at a fixed point, evaluated at exponentiated
    parameters Z_a = exp(2*pi*i*z_a), H = exp(2*pi*i*h)."""
    values = {f"Z{a}": cmath.exp(2j * math.pi * params.z[a - 1]) for a in range(1, params.n + 1)}
    values["H"] = cmath.exp(2j * math.pi * params.h)
    return x.restrictions[index].evaluate(values)


def psi_of_class(x, params, p, side, tol=1e-10, max_order=200):
    """Solution attached to a K-theory class: exponentiated-restriction
    linear combination of the fixed-point solutions."""
    k, n = x.k, x.n
    order = subsets(k, n)
    totals = {J: 0j for J in order}
    max_order_used = 0
    tail = 0.0
    for index in order:
        coeff = exp_restriction(x, index, params)
        if coeff == 0:
            continue
        pp = psi_point(index, params, p, side, tol=tol, max_order=max_order)
        for J in order:
            totals[J] += coeff * pp.values[J]
        max_order_used = max(max_order_used, pp.truncation_order)
        tail += abs(coeff) * pp.tail_estimate
    return SolutionEvaluation(
        values=totals,
        side=side,
        truncation_order=max_order_used,
        tail_estimate=tail,
    )
