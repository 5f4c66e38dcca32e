"""Localized equivariant K-theory of the cotangent bundle of Gr(k,n).

A class is carried by its tuple of fixed-point restrictions, one Laurent
polynomial in (Z1..Zn, H) per k-subset of {1..n}, subject to the divisibility
admissibility condition: restrictions at subsets related by a transposition
of the ambient letters i, j differ by a multiple of Zi - Zj.

The transition map is implemented directly from its localized matrix: the
entry at (I, J) is the zero-side weight function with shifted first argument
H*Z_I and Z arguments permuted by the minimal permutation of J, divided by
E(Z_I; H) R(Z_sigma_J).  Exactness of every division is asserted, which is
this module's computational proxy for the statement that the map preserves
the localized module.
"""

from __future__ import annotations

from math import comb

from .indexing import FixedPointIndex, complement, ell, sigma, subsets, transpose
from .laurent import (
    LaurentError,
    LaurentPolynomial,
    NotDivisible,
    VarContext,
    poly_matrix_det,
)
from .weights import (
    e_at_subset,
    eval_at_fixed_point,
    membership_P,
    r_at_subset,
    trig_context,
    trig_weight,
    zh_context,
)

_CTX_CACHE = {}
_MATRIX_CACHE = {}


class NotAdmissible(LaurentError):
    """Restriction tuple violates the divisibility condition."""


class NotSymmetric(LaurentError):
    """Input polynomial is not symmetric in the Chern-root variables."""


class NotInP(LaurentError):
    """Polynomial fails the admissible-space membership test."""


def kclass_context(k, n):
    """Context Z1..Zn, H, G1..Gk, GB1..GB_{n-k} for symmetric inputs."""
    key = (k, n)
    if key not in _CTX_CACHE:
        names = [f"Z{a}" for a in range(1, n + 1)] + ["H"]
        names += [f"G{i}" for i in range(1, k + 1)]
        names += [f"GB{s}" for s in range(1, n - k + 1)]
        _CTX_CACHE[key] = VarContext(names)
    return _CTX_CACHE[key]


class KTheoryClass:
    """A localized K-theory class: one Laurent polynomial per fixed point."""

    __slots__ = ("k", "n", "restrictions")

    def __init__(self, k, n, restrictions, check=False):
        self.k = k
        self.n = n
        self.restrictions = dict(restrictions)
        expected = subsets(k, n)
        if set(self.restrictions) != set(expected):
            raise ValueError("restrictions must cover every fixed point exactly")
        if check and not is_admissible(self):
            raise NotAdmissible("restriction tuple fails divisibility")

    @classmethod
    def unit(cls, k, n):
        one = zh_context(n).one()
        return cls(k, n, {index: one for index in subsets(k, n)})

    @classmethod
    def zero(cls, k, n):
        z = zh_context(n).zero()
        return cls(k, n, {index: z for index in subsets(k, n)})

    def __add__(self, other):
        assert (self.k, self.n) == (other.k, other.n)
        return KTheoryClass(
            self.k,
            self.n,
            {i: r + other.restrictions[i] for i, r in self.restrictions.items()},
        )

    def __sub__(self, other):
        assert (self.k, self.n) == (other.k, other.n)
        return KTheoryClass(
            self.k,
            self.n,
            {i: r - other.restrictions[i] for i, r in self.restrictions.items()},
        )

    def __mul__(self, other):
        """Multiply by a scalar or by a Laurent polynomial in (Z, H)."""
        return KTheoryClass(
            self.k, self.n, {i: r * other for i, r in self.restrictions.items()}
        )

    __rmul__ = __mul__

    def __eq__(self, other):
        return (
            isinstance(other, KTheoryClass)
            and (self.k, self.n) == (other.k, other.n)
            and self.restrictions == other.restrictions
        )

    __hash__ = None

    def multiply_by_gamma_top(self):
        """The class of (product of all Chern roots of the tautological
        bundle) times self: restriction at I picks up prod_{i in I} Zi."""
        ctx = zh_context(self.n)
        out = {}
        for index, r in self.restrictions.items():
            mono = ctx.monomial(1, {f"Z{i}": 1 for i in index.elements})
            out[index] = r * mono
        return KTheoryClass(self.k, self.n, out)


def is_admissible(x):
    """Divisibility test over every transposition of ambient letters."""
    ctx = zh_context(x.n)
    for index in subsets(x.k, x.n):
        for i in range(1, x.n + 1):
            for j in range(i + 1, x.n + 1):
                other = transpose(index, i, j)
                if other == index:
                    continue
                diff = x.restrictions[index] - x.restrictions[other]
                if diff.is_zero():
                    continue
                if not diff.divisible_by(ctx.var(f"Z{i}") - ctx.var(f"Z{j}")):
                    return False
    return True


def restrict(sym_poly, k, n):
    """Restrict a polynomial in the Chern-root variables to all fixed points.

    The input lives in ``kclass_context(k, n)`` and must be symmetric in the
    G variables and in the GB variables separately.
    """
    ctx = sym_poly.ctx
    for i in range(1, k):
        swap = {f"G{i}": ctx.var(f"G{i + 1}"), f"G{i + 1}": ctx.var(f"G{i}")}
        if sym_poly.substitute(swap) != sym_poly:
            raise NotSymmetric("input is not symmetric in the G variables")
    for s in range(1, n - k):
        swap = {f"GB{s}": ctx.var(f"GB{s + 1}"), f"GB{s + 1}": ctx.var(f"GB{s}")}
        if sym_poly.substitute(swap) != sym_poly:
            raise NotSymmetric("input is not symmetric in the GB variables")
    zh = zh_context(n)
    out = {}
    for index in subsets(k, n):
        mapping = {}
        for a, i in enumerate(index.elements, start=1):
            mapping[f"G{a}"] = ctx.var(f"Z{i}")
        for s, j in enumerate(complement(index).elements, start=1):
            mapping[f"GB{s}"] = ctx.var(f"Z{j}")
        out[index] = sym_poly.substitute(mapping).embed(zh)
    return KTheoryClass(k, n, out)


def pi_zero(p, k, n):
    """Unique class whose restrictions are p(Z_I)/E(Z_I; H)."""
    return _pi(p, k, n, shift=False)


def pi_inf(p, k, n):
    """Unique class whose restrictions are p(H Z_I)/E(Z_I; H)."""
    return _pi(p, k, n, shift=True)


def _pi(p, k, n, shift):
    if not membership_P(p, k, n):
        raise NotInP("input fails the admissible-space membership test")
    out = {}
    for index in subsets(k, n):
        value = eval_at_fixed_point(p, index, shift=shift)
        out[index] = value.exact_div(e_at_subset(index))
    return KTheoryClass(k, n, out)


def _tau_numerators(k, n, inverse):
    """Matrix N[I][J]: weight numerators of the transition map, with the
    row divisor E(Z_I; H) already divided out (exactly)."""
    key = (k, n, inverse)
    if key not in _MATRIX_CACHE:
        idx = subsets(k, n)
        mat = {}
        for index in idx:
            e_i = e_at_subset(index)
            row = {}
            for col in idx:
                if inverse:
                    w = trig_weight("inf", k, n, sigma(col))
                    val = eval_at_fixed_point(w, index, shift=False)
                else:
                    w = trig_weight("zero", k, n, sigma(col))
                    val = eval_at_fixed_point(w, index, shift=True)
                row[col] = val.exact_div(e_i)
            mat[index] = row
        _MATRIX_CACHE[key] = mat
    return _MATRIX_CACHE[key]


def _sum_over_r_denominators(k, n, coeff_of):
    """Exact evaluation of sum_K coeff_of(K) / R(Z_sigma_K).

    Terms are cleared over the common denominator prod_{u<v} (Zu - Zv) using
    1/R(Z_sigma_K) = (-1)^ell(K) prod_{a in K} Za^(n-k)
                     * prod_{u<v not split by K} (Zu - Zv) / prod_{u<v} (Zu - Zv),
    then divided out factor by factor.
    """
    ctx = zh_context(n)
    pairs = [(u, v) for u in range(1, n + 1) for v in range(u + 1, n + 1)]
    num = ctx.zero()
    for index in subsets(k, n):
        c = coeff_of(index)
        if c.is_zero():
            continue
        inside = set(index.elements)
        mono = {f"Z{a}": (n - k) for a in index.elements}
        term = c * ctx.monomial(1 if ell(index) % 2 == 0 else -1, mono)
        for u, v in pairs:
            if (u in inside) == (v in inside):
                term = term * (ctx.var(f"Z{u}") - ctx.var(f"Z{v}"))
        num = num + term
    out = num
    for u, v in pairs:
        out = out.exact_div(ctx.var(f"Z{u}") - ctx.var(f"Z{v}"))
    return out


def tau_apply(x):
    """Transition map on a localized class; output restrictions stay Laurent."""
    return _tau(x, inverse=False)


def tau_inv_apply(x):
    """Inverse transition map on a localized class."""
    return _tau(x, inverse=True)


def _tau(x, inverse):
    k, n = x.k, x.n
    mat = _tau_numerators(k, n, inverse)
    out = {}
    for index in subsets(k, n):
        row = mat[index]
        value = _sum_over_r_denominators(
            k, n, lambda col: row[col] * x.restrictions[col]
        )
        out[index] = value
    return KTheoryClass(k, n, out)


_DET_CACHE = {}


def _g_matrix_det(k, n, inverse):
    key = (k, n, inverse)
    if key not in _DET_CACHE:
        idx = subsets(k, n)
        mat = _tau_numerators(k, n, inverse)
        _DET_CACHE[key] = poly_matrix_det([[mat[i][j] for j in idx] for i in idx])
    return _DET_CACHE[key]


def tau_det(k, n):
    """Exact determinant of the transition-map matrix in the localized basis."""
    det = _g_matrix_det(k, n, inverse=False)
    for j in subsets(k, n):
        det = det.exact_div(r_at_subset(j))
    return det


def tau_det_reference(k, n):
    """The closed-form value: H to the power -(n(n-1)/2) C(n-1, k-1)."""
    ctx = zh_context(n)
    return ctx.monomial(1, {"H": -(n * (n - 1) // 2) * comb(n - 1, k - 1)})


def orthogonality_check(k, n):
    """Both bilinear orthogonality identities between the two weight families.

    For all I, J:
      sum_K Winf(Z_I; Z_sigma_K; H) W0(H Z_K; Z_sigma_J; H) / (E_K R_K)
        = delta_{I,J} E(Z_I; H) R(Z_sigma_I),
    and the same with the roles of the two families swapped.
    """
    idx = subsets(k, n)
    g_zero = _tau_numerators(k, n, inverse=False)   # W0(H Z_K; Z_sigma_J)/E_K
    g_inf = _tau_numerators(k, n, inverse=True)     # Winf(Z_K; Z_sigma_J)/E_K
    w_inf_rows = {
        i: {
            kk: eval_at_fixed_point(trig_weight("inf", k, n, sigma(kk)), i, False)
            for kk in idx
        }
        for i in idx
    }
    w_zero_rows = {
        i: {
            kk: eval_at_fixed_point(trig_weight("zero", k, n, sigma(kk)), i, True)
            for kk in idx
        }
        for i in idx
    }
    for i in idx:
        for j in idx:
            rhs = (
                e_at_subset(i) * r_at_subset(i)
                if i == j
                else zh_context(n).zero()
            )
            lhs1 = _sum_over_r_denominators(
                k, n, lambda kk: w_inf_rows[i][kk] * g_zero[kk][j]
            )
            if lhs1 != rhs:
                return False
            lhs2 = _sum_over_r_denominators(
                k, n, lambda kk: w_zero_rows[i][kk] * g_inf[kk][j]
            )
            if lhs2 != rhs:
                return False
    return True


def _d_plain(k, n):
    """D(Z) D(Z^{-1}): prod over unordered pairs of both one-minus-ratio
    factors, each to the power C(n-2, k-1)."""
    ctx = zh_context(n)
    out = ctx.one()
    e = comb(n - 2, k - 1) if n >= 2 else 0
    for a in range(1, n + 1):
        for b in range(1, n + 1):
            if a == b:
                continue
            f = ctx.one() - ctx.monomial(1, {f"Z{a}": 1, f"Z{b}": -1})
            out = out * f**e
    return out


def _d_tilde(k, n):
    ctx = zh_context(n)
    out = ctx.one()
    e = comb(n - 2, k - 2) if k >= 2 else 0
    if e == 0:
        return out
    for a in range(1, n + 1):
        for b in range(1, n + 1):
            if a == b:
                continue
            f = ctx.one() - ctx.monomial(1, {"H": 1, f"Z{a}": 1, f"Z{b}": -1})
            out = out * f**e
    return out


def weight_det_check(k, n, full=None):
    """Determinant formulas for the two weight-function matrices.

    Verifies, exactly:
      (a) det(W0(H Z_I; Z_sigma_J)/E_I) = H^{-d} prod_J R(Z_sigma_J),
      (b) det(Winf(Z_I; Z_sigma_J)/E_I) = H^{+d} prod_J R(Z_sigma_J),
      (c) prod_I E(Z_I; H) equals the H-dependent pair product,
      (e) prod_J R(Z_sigma_J) equals the H-free pair product,
    with d = (n(n-1)/2) C(n-1,k-1).  (a)-(e) combined are equivalent to the
    two raw determinant formulas and their E*R-normalized corollaries.  When
    ``full`` is true the raw determinants are also expanded and compared
    directly (affordable for n <= 3).
    """
    if full is None:
        full = n <= 3
    ctx = zh_context(n)
    idx = subsets(k, n)
    d = (n * (n - 1) // 2) * comb(n - 1, k - 1)
    r_prod = ctx.one()
    for j in idx:
        r_prod = r_prod * r_at_subset(j)

    det_zero = _g_matrix_det(k, n, inverse=False)
    det_inf = _g_matrix_det(k, n, inverse=True)
    if det_zero != ctx.monomial(1, {"H": -d}) * r_prod:
        return False
    if det_inf != ctx.monomial(1, {"H": d}) * r_prod:
        return False

    e_prod = ctx.one()
    for i in idx:
        e_prod = e_prod * e_at_subset(i)
    if e_prod != _d_tilde(k, n):
        return False
    if r_prod != _d_plain(k, n):
        return False

    if full:
        d_hat = _d_plain(k, n) * _d_tilde(k, n)
        raw_zero = poly_matrix_det(
            [
                [
                    eval_at_fixed_point(trig_weight("zero", k, n, sigma(j)), i, True)
                    for j in idx
                ]
                for i in idx
            ]
        )
        raw_inf = poly_matrix_det(
            [
                [
                    eval_at_fixed_point(trig_weight("inf", k, n, sigma(j)), i, False)
                    for j in idx
                ]
                for i in idx
            ]
        )
        if raw_zero != ctx.monomial(1, {"H": -d}) * d_hat:
            return False
        if raw_inf != ctx.monomial(1, {"H": d}) * d_hat:
            return False
    return True
