"""Weight functions: trigonometric (multiplicative) and cohomological (additive).

Trigonometric weight functions live in the context (Z1..Zn, H, T1..Tk) and are
Laurent polynomials in the inverses of the T variables.  Cohomological weight
functions live in the additive context (z1..zn, h, t1..tk, g1..gk, gb1..gb_m)
and are honest polynomials.

All symmetrizations are performed over explicit permutations with
factored-denominator rational arithmetic and then asserted polynomial; no
pre-cancellation heuristics.  Weight functions are cached per (k, n) and per
permutation of the Z arguments, since the transition-map machinery reuses them
quadratically often.
"""

from __future__ import annotations

from .indexing import FixedPointIndex, complement, ell, sigma, subsets
from .laurent import (
    LaurentPolynomial,
    NotDivisible,
    NotPolynomial,
    RationalFunction,
    VarContext,
    symmetrize,
)

_CTX_CACHE = {}


def trig_context(k, n):
    """Multiplicative context Z1..Zn < H < T1..Tk."""
    key = ("trig", k, n)
    if key not in _CTX_CACHE:
        names = [f"Z{a}" for a in range(1, n + 1)] + ["H"]
        names += [f"T{i}" for i in range(1, k + 1)]
        _CTX_CACHE[key] = VarContext(names)
    return _CTX_CACHE[key]


def zh_context(n):
    """Multiplicative context of the equivariant parameters Z1..Zn, H."""
    key = ("zh", n)
    if key not in _CTX_CACHE:
        _CTX_CACHE[key] = VarContext([f"Z{a}" for a in range(1, n + 1)] + ["H"])
    return _CTX_CACHE[key]


def coh_context(k, n):
    """Additive context z1..zn, h, t1..tk, g1..gk, gb1..gb_{n-k}."""
    key = ("coh", k, n)
    if key not in _CTX_CACHE:
        names = [f"z{a}" for a in range(1, n + 1)] + ["h"]
        names += [f"t{i}" for i in range(1, k + 1)]
        names += [f"g{i}" for i in range(1, k + 1)]
        names += [f"gb{s}" for s in range(1, n - k + 1)]
        _CTX_CACHE[key] = VarContext(names)
    return _CTX_CACHE[key]


def _one_minus(ctx, num, den):
    """The factor 1 - num/den for monomial name lists num, den."""
    exps = {}
    for name in num:
        exps[name] = exps.get(name, 0) + 1
    for name in den:
        exps[name] = exps.get(name, 0) - 1
    return ctx.one() - ctx.monomial(1, exps)


def u_factor(k, n):
    """The unsymmetrized building block of the trigonometric weight functions.

    Product over i = 1..k of
      prod_{a<i} (1 - H Za/Ti) * prod_{i<b<=k} (1 - Zb/Ti)
      * prod_{j>i} (1 - H Tj/Ti) / (1 - Tj/Ti).
    """
    ctx = trig_context(k, n)
    num = ctx.one()
    den = []
    for i in range(1, k + 1):
        for a in range(1, i):
            num = num * _one_minus(ctx, [f"Z{a}", "H"], [f"T{i}"])
        for b in range(i + 1, k + 1):
            num = num * _one_minus(ctx, [f"Z{b}"], [f"T{i}"])
        for j in range(i + 1, k + 1):
            num = num * _one_minus(ctx, [f"T{j}", "H"], [f"T{i}"])
            den.append((_one_minus(ctx, [f"T{j}"], [f"T{i}"]), 1))
    return RationalFunction(num, tuple(den))


_WEIGHT_CACHE = {}


def trig_weight_reduced(k, n):
    """Symmetrization of the building block over the T variables."""
    key = ("reduced", k, n)
    if key not in _WEIGHT_CACHE:
        w = symmetrize(u_factor(k, n), [f"T{i}" for i in range(1, k + 1)])
        if isinstance(w, RationalFunction):
            raise NotPolynomial("symmetrized weight function is not polynomial")
        _WEIGHT_CACHE[key] = w
    return _WEIGHT_CACHE[key]


def trig_weight_zero(k, n):
    """Reduced weight times prod_{i<=k, a>k} (1 - Za/Ti)."""
    key = ("zero", k, n)
    if key not in _WEIGHT_CACHE:
        ctx = trig_context(k, n)
        w = trig_weight_reduced(k, n)
        for i in range(1, k + 1):
            for a in range(k + 1, n + 1):
                w = w * _one_minus(ctx, [f"Z{a}"], [f"T{i}"])
        _WEIGHT_CACHE[key] = w
    return _WEIGHT_CACHE[key]


def trig_weight_inf(k, n):
    """H^(k(k-1)/2) times reduced weight times prod (1 - H Za/Ti), a > k."""
    key = ("inf", k, n)
    if key not in _WEIGHT_CACHE:
        ctx = trig_context(k, n)
        w = trig_weight_reduced(k, n) * ctx.monomial(1, {"H": k * (k - 1) // 2})
        for i in range(1, k + 1):
            for a in range(k + 1, n + 1):
                w = w * _one_minus(ctx, [f"Z{a}", "H"], [f"T{i}"])
        _WEIGHT_CACHE[key] = w
    return _WEIGHT_CACHE[key]


def trig_weight(kind, k, n, perm=None):
    """Weight function of the given kind with Z arguments permuted by ``perm``.

    ``perm`` is an image tuple (perm[a-1] is where letter a goes); the Z
    arguments of the weight function become (Z_perm(1), ..., Z_perm(n)).
    """
    base = {
        "reduced": trig_weight_reduced,
        "zero": trig_weight_zero,
        "inf": trig_weight_inf,
    }[kind](k, n)
    if perm is None or tuple(perm) == tuple(range(1, n + 1)):
        return base
    key = (kind, k, n, tuple(perm))
    if key not in _WEIGHT_CACHE:
        ctx = trig_context(k, n)
        mapping = {f"Z{a}": ctx.var(f"Z{perm[a - 1]}") for a in range(1, n + 1)}
        _WEIGHT_CACHE[key] = base.substitute(mapping)
    return _WEIGHT_CACHE[key]


def e_poly(k, n):
    """E(T;H) = prod_{i != j} (1 - H Ti/Tj) in the trig context."""
    ctx = trig_context(k, n)
    out = ctx.one()
    for i in range(1, k + 1):
        for j in range(1, k + 1):
            if i != j:
                out = out * _one_minus(ctx, ["H", f"T{i}"], [f"T{j}"])
    return out


def r_mult(k, n):
    """R(Z) = prod_{a<=k < b} (1 - Zb/Za) in the zh context."""
    ctx = zh_context(n)
    out = ctx.one()
    for a in range(1, k + 1):
        for b in range(k + 1, n + 1):
            out = out * _one_minus(ctx, [f"Z{b}"], [f"Z{a}"])
    return out


def e_at_subset(index):
    """E evaluated at the Z values of a fixed point: prod over ordered pairs
    in I of (1 - H Zi/Zj), as a Laurent polynomial in (Z, H)."""
    ctx = zh_context(index.n)
    out = ctx.one()
    for i in index.elements:
        for j in index.elements:
            if i != j:
                out = out * _one_minus(ctx, ["H", f"Z{i}"], [f"Z{j}"])
    return out


def r_at_subset(index):
    """R at the minimal permutation of I: prod_{i in I, j not in I} (1 - Zj/Zi)."""
    ctx = zh_context(index.n)
    out = ctx.one()
    for i in index.elements:
        for j in complement(index).elements:
            out = out * _one_minus(ctx, [f"Z{j}"], [f"Z{i}"])
    return out


def eval_at_fixed_point(w, index, shift=False):
    """Substitute T_a -> Z_{i_a} (or H Z_{i_a} under the shift) and project
    to the (Z, H) context."""
    k = index.k
    trig = w.ctx
    mapping = {}
    for a, i in enumerate(index.elements, start=1):
        exps = {f"Z{i}": 1, "H": 1} if shift else {f"Z{i}": 1}
        mapping[f"T{a}"] = trig.monomial(1, exps)
    return w.substitute(mapping).embed(zh_context(index.n))


def membership_P(p, k, n):
    """Membership test for the space of admissible symmetric Laurent polynomials.

    (i) only nonpositive T exponents, each >= -(n-1); (ii) symmetric under
    permutations of the T variables; (iii) for k >= 2, substituting
    T1 = Za, T2 = H Za annihilates the polynomial for every a.  Condition
    (iii) is vacuous for k <= 1.
    """
    ctx = p.ctx
    for i in range(1, k + 1):
        lo, hi = p.exp_range(f"T{i}")
        if hi > 0 or lo < -(n - 1):
            return False
    for i in range(1, k):
        swap = {
            f"T{i}": ctx.var(f"T{i + 1}"),
            f"T{i + 1}": ctx.var(f"T{i}"),
        }
        if p.substitute(swap) != p:
            return False
    if k >= 2:
        for a in range(1, n + 1):
            hit = p.substitute(
                {
                    "T1": ctx.var(f"Z{a}"),
                    "T2": ctx.monomial(1, {"H": 1, f"Z{a}": 1}),
                }
            )
            if not hit.is_zero():
                return False
    return True


def coh_weight(k, n):
    """Reduced cohomological weight function, a polynomial in the t variables.

    Symmetrization over t of
      prod_i ( prod_{l<i} (ti-gl-h) * prod_{m>i} (ti-gm)
               * prod_{j>i} (ti-tj-h)/(ti-tj) ),
    multiplied by the t-symmetric factor prod_{i,s} (ti - gb_s).
    """
    key = ("cohW", k, n)
    if key not in _WEIGHT_CACHE:
        ctx = coh_context(k, n)
        t = [ctx.var(f"t{i}") for i in range(1, k + 1)]
        g = [ctx.var(f"g{i}") for i in range(1, k + 1)]
        h = ctx.var("h")
        num = ctx.one()
        den = []
        for i in range(k):
            for l in range(i):
                num = num * (t[i] - g[l] - h)
            for m in range(i + 1, k):
                num = num * (t[i] - g[m])
            for j in range(i + 1, k):
                num = num * (t[i] - t[j] - h)
                den.append((t[i] - t[j], 1))
        core = symmetrize(
            RationalFunction(num, tuple(den)), [f"t{i}" for i in range(1, k + 1)]
        )
        if isinstance(core, RationalFunction):
            raise NotPolynomial("cohomological symmetrization is not polynomial")
        for i in range(1, k + 1):
            for s in range(1, n - k + 1):
                core = core * (ctx.var(f"t{i}") - ctx.var(f"gb{s}"))
        _WEIGHT_CACHE[key] = core
    return _WEIGHT_CACHE[key]


def q_class(k, n):
    """The polynomial prod_{i,j} (g_i - gb_j - h) in the additive context."""
    ctx = coh_context(k, n)
    out = ctx.one()
    h = ctx.var("h")
    for i in range(1, k + 1):
        for j in range(1, n - k + 1):
            out = out * (ctx.var(f"g{i}") - ctx.var(f"gb{j}") - h)
    return out


def restrict_coh(p, index):
    """Substitute g -> z_I, gb -> z_complement into an additive polynomial."""
    ctx = p.ctx
    mapping = {}
    for a, i in enumerate(index.elements, start=1):
        mapping[f"g{a}"] = ctx.var(f"z{i}")
    for s, j in enumerate(complement(index).elements, start=1):
        mapping[f"gb{s}"] = ctx.var(f"z{j}")
    return p.substitute(mapping)


def _z_diff(ctx, u, v):
    # canonical additive-difference factor Z_u - Z_v for u < v
    return ctx.var(f"Z{u}") - ctx.var(f"Z{v}")


def weight_of_class(x, side):
    """Weight-function lift of a localized K-theory class.

    Returns the Laurent polynomial sum over fixed points I of
    W_side(T; Z_sigma_I; H) / R(Z_sigma_I) * x|_I, cleared over the common
    denominator prod_{u<v} (Zu - Zv) and divided out exactly.
    """
    k, n = x.k, x.n
    ctx = trig_context(k, n)
    kind = "zero" if side == "zero" else "inf"
    pairs = [(u, v) for u in range(1, n + 1) for v in range(u + 1, n + 1)]
    num = ctx.zero()
    for index in subsets(k, n):
        w = trig_weight(kind, k, n, sigma(index))
        rest = x.restrictions[index].embed(ctx)
        inside = set(index.elements)
        term = w * rest
        # 1/R(Z_sigma_I) = (-1)^ell * prod_{a in I} Za^(n-k)
        #                  * prod_{nonsplit u<v} (Zu - Zv) / prod_{u<v} (Zu - Zv)
        mono = {f"Z{a}": (n - k) for a in index.elements}
        term = term * ctx.monomial(1 if ell(index) % 2 == 0 else -1, mono)
        for u, v in pairs:
            if (u in inside) == (v in inside):
                term = term * _z_diff(ctx, u, v)
        num = num + term
    out = num
    try:
        for u, v in pairs:
            out = out.exact_div(_z_diff(ctx, u, v))
    except NotDivisible as exc:
        raise NotPolynomial("weight lift is not polynomial") from exc
    if not membership_P(out, k, n):
        raise NotPolynomial("weight lift left the admissible space")
    return out
