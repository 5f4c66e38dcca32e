"""Schur polynomials indexed by subsets, basis expansion, and the
multiplication/transition matrices in the Schur basis.

V_I is the ratio of the alternant with exponents I by the alternant with
exponents (1..m); it is symmetric and homogeneous of degree ell(I).  The
restrictions of V_I at the fixed points form a basis of the localized
K-theory, and expansion coefficients are computed by a Laplace-type formula
with denominators cleared by the product of all pairwise differences.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction
from itertools import permutations

from .indexing import FixedPointIndex, complement, ell, subsets
from .ktheory import KTheoryClass, tau_apply, tau_inv_apply
from .laurent import (
    LaurentError,
    LaurentPolynomial,
    NotDivisible,
    VarContext,
    poly_matrix_det,
)
from .weights import zh_context

_CTX_CACHE = {}
_V_CACHE = {}


class IntegralityViolation(LaurentError):
    """A Schur-basis matrix entry has a non-integer coefficient."""


def x_context(m):
    key = m
    if key not in _CTX_CACHE:
        _CTX_CACHE[key] = VarContext([f"x{i}" for i in range(1, m + 1)])
    return _CTX_CACHE[key]


def _alternant(ctx, m, exponents):
    """det(x_a ** e_b) expanded over permutations (m <= 6)."""
    out = ctx.zero()
    for perm in permutations(range(m)):
        sign = _perm_sign(perm)
        exps = {f"x{a + 1}": exponents[perm[a]] for a in range(m)}
        out = out + ctx.monomial(sign, exps)
    return out


def _perm_sign(perm):
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, cycle = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            cycle += 1
        if cycle % 2 == 0:
            sign = -sign
    return sign


def schur_V(elements, m):
    """The subset-indexed Schur polynomial in x1..xm.

    ``elements`` is the increasing exponent subset; the result is the
    alternant ratio det(x_a^{i_b}) / det(x_a^{b}).
    """
    elements = tuple(elements)
    key = (elements, m)
    if key not in _V_CACHE:
        if len(elements) != m:
            raise ValueError("subset size must match the number of variables")
        ctx = x_context(m)
        if m == 0:
            _V_CACHE[key] = ctx.one()
        else:
            num = _alternant(ctx, m, elements)
            den = _alternant(ctx, m, tuple(range(1, m + 1)))
            _V_CACHE[key] = num.exact_div(den)
    return _V_CACHE[key]


def schur_value_at(elements, target_names, ctx):
    """V_{elements} with x_a renamed to target_names[a-1], embedded in ctx."""
    m = len(elements)
    v = schur_V(elements, m)
    rename = {f"x{a}": target_names[a - 1] for a in range(1, m + 1)}
    return v.embed(ctx, rename=rename)


def schur_class(index, k, n):
    """The K-theory class whose restriction at J is V_index(Z_J)."""
    zh = zh_context(n)
    out = {}
    for J in subsets(k, n):
        names = [f"Z{j}" for j in J.elements]
        out[J] = schur_value_at(index.elements, names, zh)
    return KTheoryClass(k, n, out)


def schur_numeric(elements, values):
    """V_{elements} evaluated at a list of complex numbers."""
    m = len(elements)
    v = schur_V(elements, m)
    return v.evaluate({f"x{a}": values[a - 1] for a in range(1, m + 1)})


def schur_basis_det(k, n):
    """det(V_I(x_J)) over all k-subsets I (rows) and J (columns)."""
    ctx = x_context(n)
    idx = subsets(k, n)
    rows = []
    for I in idx:
        row = []
        for J in idx:
            names = [f"x{j}" for j in J.elements]
            row.append(schur_value_at(I.elements, names, ctx))
        rows.append(row)
    return poly_matrix_det(rows)


def schur_basis_det_reference(k, n):
    """Closed form: product of (x_b - x_a), a < b, to the power C(n-2, k-1)."""
    ctx = x_context(n)
    e = math.comb(n - 2, k - 1) if n >= 2 else 0
    out = ctx.one()
    for a in range(1, n + 1):
        for b in range(a + 1, n + 1):
            out = out * (ctx.var(f"x{b}") - ctx.var(f"x{a}")) ** e
    return out


def laplace_sum_check(k, n):
    """Alternating Laplace identity: sum over I of (-1)^ell(I)
    V_I(x_1..x_k) V_Ibar(x_{k+1}..x_n) equals prod (x_b - x_a), a<=k<b."""
    ctx = x_context(n)
    total = ctx.zero()
    for I in subsets(k, n):
        vi = schur_value_at(I.elements, [f"x{a}" for a in range(1, k + 1)], ctx)
        vc = schur_value_at(
            complement(I).elements, [f"x{b}" for b in range(k + 1, n + 1)], ctx
        )
        term = vi * vc
        if ell(I) % 2:
            term = -term
        total = total + term
    rhs = ctx.one()
    for a in range(1, k + 1):
        for b in range(k + 1, n + 1):
            rhs = rhs * (ctx.var(f"x{b}") - ctx.var(f"x{a}"))
    return total == rhs


def _cleared_sum_over_subsets(ctx, k, n, names, coeff_of):
    """sum_J coeff_of(J) / R(x_J; x_Jbar) with denominators cleared by
    D = prod_{u<v} (x_u - x_v) and divided out exactly.

    Uses R(x_J; x_Jbar) = (-1)^(k(n-k) - ell(J)) * prod over split pairs
    (x_u - x_v), u < v.
    """
    pairs = [(u, v) for u in range(1, n + 1) for v in range(u + 1, n + 1)]
    var = {a: ctx.var(names[a - 1]) for a in range(1, n + 1)}
    num = ctx.zero()
    for J in subsets(k, n):
        c = coeff_of(J)
        if c.is_zero():
            continue
        inside = set(J.elements)
        sign = (-1) ** (k * (n - k) - ell(J))
        term = c * sign
        for u, v in pairs:
            if (u in inside) == (v in inside):
                term = term * (var[u] - var[v])
        num = num + term
    out = num
    for u, v in pairs:
        out = out.exact_div(var[u] - var[v])
    return out


def laplace_orthogonality_check(k, n):
    """Dual Laplace identity: for all J, K,
    sum_I V_J(x_I) V_Kbar(x_Ibar) / R(x_I; x_Ibar) = (-1)^ell(J) delta_{J,K}."""
    ctx = x_context(n)
    names = [f"x{a}" for a in range(1, n + 1)]
    for J in subsets(k, n):
        for K in subsets(k, n):
            def coeff(I):
                vj = schur_value_at(J.elements, [names[i - 1] for i in I.elements], ctx)
                vk = schur_value_at(
                    complement(K).elements,
                    [names[i - 1] for i in complement(I).elements],
                    ctx,
                )
                return vj * vk

            got = _cleared_sum_over_subsets(ctx, k, n, names, coeff)
            want = ctx.const((-1) ** ell(J)) if J == K else ctx.zero()
            if got != want:
                return False
    return True


def expand_in_schur(x):
    """Coefficients of a localized class in the Schur restriction basis.

    Returns the list of coefficients (Laurent polynomials in Z, H) in the
    lexicographic subset order; the expansion is exact and is asserted to
    reconstruct the class.
    """
    k, n = x.k, x.n
    ctx = zh_context(n)
    names = [f"Z{a}" for a in range(1, n + 1)]
    coeffs = []
    for I in subsets(k, n):
        comp_elems = complement(I).elements

        def coeff(J):
            vbar = schur_value_at(
                comp_elems, [names[j - 1] for j in complement(J).elements], ctx
            )
            return x.restrictions[J] * vbar

        c = _cleared_sum_over_subsets(ctx, k, n, names, coeff)
        if ell(I) % 2:
            c = -c
        coeffs.append(c)
    return coeffs


def reconstruct_from_schur(coeffs, k, n):
    out = KTheoryClass.zero(k, n)
    for c, I in zip(coeffs, subsets(k, n)):
        out = out + schur_class(I, k, n) * c
    return out


def _assert_integer_entries(rows, what):
    for row in rows:
        for entry in row:
            for coeff in entry.terms.values():
                if isinstance(coeff, Fraction) and coeff.denominator != 1:
                    raise IntegralityViolation(
                        f"{what} entry has non-integer coefficient {coeff}"
                    )


def m_matrix(k, n):
    """Multiplication by the top Chern-root product in the Schur basis.

    Row I holds the expansion coefficients of (Gamma_1...Gamma_k) V_I;
    entries are Laurent polynomials in Z with integer coefficients.
    """
    rows = []
    for I in subsets(k, n):
        cls = schur_class(I, k, n).multiply_by_gamma_top()
        rows.append(expand_in_schur(cls))
    _assert_integer_entries(rows, "multiplication-matrix")
    for row in rows:
        for entry in row:
            lo, hi = entry.exp_range("H")
            if lo != 0 or hi != 0:
                raise IntegralityViolation("multiplication matrix must be H-free")
    return rows


def t_matrix(k, n):
    """Transition-map matrix and its inverse in the Schur basis.

    Both have integer Laurent-polynomial entries, and their product is the
    identity (asserted)."""
    t_rows, tinv_rows = [], []
    for I in subsets(k, n):
        t_rows.append(expand_in_schur(tau_apply(schur_class(I, k, n))))
        tinv_rows.append(expand_in_schur(tau_inv_apply(schur_class(I, k, n))))
    _assert_integer_entries(t_rows, "transition-matrix")
    _assert_integer_entries(tinv_rows, "inverse-transition-matrix")
    prod = mat_mul(t_rows, tinv_rows)
    if not mat_is_identity(prod):
        raise LaurentError("transition matrix times inverse is not the identity")
    return t_rows, tinv_rows


def mat_mul(a, b):
    n = len(a)
    ctx = a[0][0].ctx
    out = [[ctx.zero() for _ in range(n)] for _ in range(n)]
    for i in range(n):
        for j in range(n):
            acc = ctx.zero()
            for l in range(n):
                acc = acc + a[i][l] * b[l][j]
            out[i][j] = acc
    return out


def mat_is_identity(rows):
    for i, row in enumerate(rows):
        for j, entry in enumerate(row):
            if i == j:
                if not entry.is_one():
                    return False
            elif not entry.is_zero():
                return False
    return True


def monodromy_matrices(k, n):
    """The four monodromy matrices in the two solution bases.

    In exponentiated variables the loop around 0 acts on the zero-side basis
    by the multiplication matrix M, and around infinity by the conjugate
    T M T^{-1} times the scalar marker; on the infinity-side basis the roles
    swap.  The scalar is returned symbolically as "H^k" and is not folded
    into the matrices, which keeps every entry an integer Laurent polynomial.
    """
    m = m_matrix(k, n)
    t, tinv = t_matrix(k, n)
    return {
        "mu0_on_zero_basis": m,
        "muinf_on_zero_basis": mat_mul(mat_mul(t, m), tinv),
        "mu0_on_inf_basis": mat_mul(mat_mul(tinv, m), t),
        "muinf_on_inf_basis": m,
        "scalar_mu_inf": f"H^{k}",
    }


def char_poly(rows):
    """Characteristic polynomial det(LAM * 1 - M) in an extended context."""
    ctx = rows[0][0].ctx
    ext = VarContext(ctx.names + ("LAM",))
    n = len(rows)
    lifted = [[entry.embed(ext) for entry in row] for row in rows]
    lam = ext.var("LAM")
    mat = [
        [
            (lam - lifted[i][j]) if i == j else -lifted[i][j]
            for j in range(n)
        ]
        for i in range(n)
    ]
    return poly_matrix_det(mat)


def m_numeric(rows, params):
    """Evaluate an integer Laurent matrix at exponentiated parameters."""
    values = {
        f"Z{a}": cmath.exp(2j * math.pi * params.z[a - 1])
        for a in range(1, params.n + 1)
    }
    values["H"] = cmath.exp(2j * math.pi * params.h)
    return [
        [entry.evaluate(values) for entry in row]
        for row in rows
    ]
