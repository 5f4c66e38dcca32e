"""Sparse exact multivariate Laurent-polynomial arithmetic over the rationals.

A Laurent polynomial is stored as a map from packed exponent keys to nonzero
exact rational coefficients.  Exponent vectors (tuples of ints, possibly
negative, one slot per context variable) are packed into a single integer
with one extra leading field holding the total degree, so that

  * numeric comparison of keys is exactly graded-lexicographic comparison
    of exponent vectors over the fixed variable order, and
  * addition/subtraction of exponent vectors is a single integer add/sub.

Coefficients are plain ``int`` whenever integral and ``fractions.Fraction``
otherwise; the two interoperate transparently.  Canonical serialization
prints terms leading-first in graded-lex order.

Rational functions keep their denominator as a *multiset of factors* rather
than an expanded product.  Every denominator occurring in this package is a
known product of binomial factors, so least common denominators are multiset
unions and no multivariate gcd is ever required.  A rational function that
is asserted to be polynomial is divided out factor by factor with exact
division.
"""

from __future__ import annotations

import heapq
from fractions import Fraction
from itertools import permutations

_FIELD_BITS = 24
_OFFSET = 1 << (_FIELD_BITS - 1)
_MASK = (1 << _FIELD_BITS) - 1


class LaurentError(Exception):
    """Base class for errors raised by the exact-arithmetic kernel."""


class NotDivisible(LaurentError):
    """Exact division failed; ``remainder`` holds the offending residue."""

    def __init__(self, message, remainder=None):
        super().__init__(message)
        self.remainder = remainder


class NotPolynomial(LaurentError):
    """A rational function asserted to be polynomial was not."""


class ZeroImage(LaurentError):
    """A substitution mapped a variable to zero."""


class ZeroValue(LaurentError):
    """Numeric evaluation hit 0**negative."""


class TooManyVariables(LaurentError):
    """Symmetrization requested over more variables than the configured cap."""


def _norm_coeff(c):
    """Normalize a rational coefficient: Fractions with denominator 1 become ints."""
    if isinstance(c, Fraction):
        if c.denominator == 1:
            return c.numerator
        return c
    return c


class VarContext:
    """An ordered tuple of variable names, fixed for a whole computation.

    Also owns the exponent-packing layout: key = (total degree + B, e_1 + B,
    ..., e_m + B) as consecutive bit fields, most significant first.
    """

    __slots__ = ("names", "index", "zero_key")

    def __init__(self, names):
        self.names = tuple(names)
        if len(set(self.names)) != len(self.names):
            raise ValueError("duplicate variable names")
        self.index = {name: i for i, name in enumerate(self.names)}
        key = _OFFSET
        for _ in self.names:
            key = (key << _FIELD_BITS) | _OFFSET
        self.zero_key = key

    def pack(self, exps):
        key = sum(exps) + _OFFSET
        for e in exps:
            key = (key << _FIELD_BITS) | (e + _OFFSET)
        return key

    def unpack(self, key):
        m = len(self.names)
        out = [0] * m
        for i in range(m - 1, -1, -1):
            out[i] = (key & _MASK) - _OFFSET
            key >>= _FIELD_BITS
        return tuple(out)

    def __len__(self):
        return len(self.names)

    def __eq__(self, other):
        return isinstance(other, VarContext) and self.names == other.names

    def __hash__(self):
        return hash(self.names)

    def __repr__(self):
        return f"VarContext{self.names}"

    def zero(self):
        return LaurentPolynomial(self, {})

    def one(self):
        return self.const(1)

    def const(self, c):
        c = _norm_coeff(c if isinstance(c, (int, Fraction)) else Fraction(c))
        if c == 0:
            return self.zero()
        return LaurentPolynomial(self, {self.zero_key: c})

    def var(self, name, exp=1):
        return self.monomial(1, {name: exp})

    def monomial(self, coeff, exps):
        """Build ``coeff * prod(var**e)`` from a name->exponent map."""
        coeff = _norm_coeff(coeff)
        if coeff == 0:
            return self.zero()
        vec = [0] * len(self.names)
        for name, e in exps.items():
            vec[self.index[name]] = e
        return LaurentPolynomial(self, {self.pack(vec): coeff})


class LaurentPolynomial:
    """Immutable sparse Laurent polynomial over exact rationals."""

    __slots__ = ("ctx", "terms")

    def __init__(self, ctx, terms):
        self.ctx = ctx
        self.terms = terms  # dict packed-exponent-key -> nonzero coefficient

    # -- basic predicates -------------------------------------------------

    def is_zero(self):
        return not self.terms

    def is_one(self):
        if len(self.terms) != 1:
            return False
        ((e, c),) = self.terms.items()
        return c == 1 and e == self.ctx.zero_key

    def is_monomial(self):
        return len(self.terms) == 1

    def __bool__(self):
        return bool(self.terms)

    # -- ring operations ---------------------------------------------------

    def _check(self, other):
        if self.ctx.names != other.ctx.names:
            raise ValueError("incompatible variable contexts")

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ctx.const(other)
        self._check(other)
        terms = dict(self.terms)
        get = terms.get
        for e, c in other.terms.items():
            s = get(e, 0) + c
            if s:
                terms[e] = _norm_coeff(s)
            else:
                del terms[e]
        return LaurentPolynomial(self.ctx, terms)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPolynomial(self.ctx, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ctx.const(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            other = _norm_coeff(other)
            if other == 0:
                return self.ctx.zero()
            return LaurentPolynomial(
                self.ctx, {e: _norm_coeff(c * other) for e, c in self.terms.items()}
            )
        if isinstance(other, RationalFunction):
            return NotImplemented
        self._check(other)
        a, b = self.terms, other.terms
        if len(a) < len(b):
            a, b = b, a
        z0 = self.ctx.zero_key
        out = {}
        get = out.get
        for eb, cb in b.items():
            shift = eb - z0
            for ea, ca in a.items():
                e = ea + shift
                s = get(e, 0) + ca * cb
                if s:
                    out[e] = s
                else:
                    del out[e]
        for e, c in out.items():
            if isinstance(c, Fraction) and c.denominator == 1:
                out[e] = c.numerator
        return LaurentPolynomial(self.ctx, out)

    __rmul__ = __mul__

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise ValueError("only nonnegative integer powers")
        result = self.ctx.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ctx.const(other)
        if not isinstance(other, LaurentPolynomial):
            return NotImplemented
        return self.ctx.names == other.ctx.names and self.terms == other.terms

    def __ne__(self, other):
        eq = self.__eq__(other)
        return NotImplemented if eq is NotImplemented else not eq

    __hash__ = None

    def key(self):
        """Hashable canonical form (used for denominator-factor multisets)."""
        return (self.ctx.names, tuple(sorted(self.terms.items())))

    # -- structure queries --------------------------------------------------

    def leading(self):
        """Leading (graded-lex maximal) term as (exponent tuple, coefficient)."""
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        e = max(self.terms)
        return self.ctx.unpack(e), self.terms[e]

    def exp_range(self, name):
        """(min, max) exponent of one variable over all terms; (0, 0) if absent."""
        if not self.terms:
            return (0, 0)
        i = self.ctx.index[name]
        shift = _FIELD_BITS * (len(self.ctx.names) - 1 - i)
        exps = [((e >> shift) & _MASK) - _OFFSET for e in self.terms]
        return (min(exps), max(exps))

    def sorted_terms(self):
        """(exponent tuple, coefficient) pairs in canonical order, leading first."""
        unpack = self.ctx.unpack
        return [
            (unpack(e), c) for e, c in sorted(self.terms.items(), reverse=True)
        ]

    # -- exact division ------------------------------------------------------

    def exact_div(self, other):
        """Exact quotient self/other in the Laurent ring, or NotDivisible."""
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return self * Fraction(1, other)
        self._check(other)
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        if self.is_zero():
            return self
        ctx = self.ctx
        z0 = ctx.zero_key
        if other.is_monomial():
            ((eb, cb),) = other.terms.items()
            shift = z0 - eb
            inv = Fraction(1, cb) if not isinstance(cb, Fraction) else 1 / cb
            return LaurentPolynomial(
                ctx,
                {ea + shift: _norm_coeff(ca * inv) for ea, ca in self.terms.items()},
            )
        m = len(ctx.names)
        # per-variable minimum exponents give the Laurent normalization: the
        # quotient's exponents are bounded below by min(a) - min(b)
        mins_a = [min(v) for v in zip(*map(ctx.unpack, self.terms))]
        mins_b = [min(v) for v in zip(*map(ctx.unpack, other.terms))]
        floor_key = ctx.pack([x - y for x, y in zip(mins_a, mins_b)])
        b_items = list(other.terms.items())
        eb = max(other.terms)
        cb = other.terms[eb]
        cb_frac = Fraction(cb) if not isinstance(cb, Fraction) else cb

        r = dict(self.terms)
        heap = [-e for e in r]
        heapq.heapify(heap)
        quotient = {}
        floor_vec = ctx.unpack(floor_key)
        while r:
            while True:
                e = -heap[0]
                if e in r:
                    break
                heapq.heappop(heap)
            d = e - eb + z0
            # divisibility guard: minimal achievable quotient exponents
            dv = ctx.unpack(d)
            if any(x < y for x, y in zip(dv, floor_vec)):
                rem = LaurentPolynomial(ctx, dict(r))
                raise NotDivisible("exact division failed", remainder=rem)
            q = _norm_coeff(Fraction(r[e]) / cb_frac)
            quotient[d] = q
            dshift = d - z0
            for ee, cc in b_items:
                tgt = ee + dshift
                s = r.get(tgt, 0) - q * cc
                if s:
                    r[tgt] = _norm_coeff(s)
                    heapq.heappush(heap, -tgt)
                else:
                    r.pop(tgt, None)
        return LaurentPolynomial(ctx, quotient)

    def divisible_by(self, other):
        try:
            self.exact_div(other)
            return True
        except NotDivisible:
            return False

    # -- substitution ---------------------------------------------------------

    def substitute(self, mapping):
        """Simultaneous substitution of variables by nonzero monomials.

        ``mapping`` sends variable names to LaurentPolynomials that must be
        single nonzero terms (so negative source exponents stay representable).
        Unmapped variables are left alone.
        """
        if not mapping:
            return self
        ctx = self.ctx
        images = {}
        for name, img in mapping.items():
            i = ctx.index[name]
            if isinstance(img, (int, Fraction)):
                img = ctx.const(img)
            if img.is_zero():
                raise ZeroImage(f"variable {name} mapped to zero")
            if not img.is_monomial():
                raise ValueError(f"image of {name} is not a monomial")
            ((e, c),) = img.terms.items()
            images[i] = (ctx.unpack(e), c)
        out = {}
        for e, c in self.terms.items():
            src = ctx.unpack(e)
            vec = list(src)
            coeff = c
            for i, (ie, ic) in images.items():
                k = src[i]
                if k == 0:
                    continue
                vec[i] -= k
                for j, x in enumerate(ie):
                    if x:
                        vec[j] += k * x
                if ic != 1:
                    coeff = coeff * (Fraction(ic) ** k)
            key = ctx.pack(vec)
            s = out.get(key, 0) + coeff
            if s:
                out[key] = _norm_coeff(s)
            else:
                del out[key]
        return LaurentPolynomial(ctx, out)

    def substitute_poly(self, mapping):
        """Substitute general polynomial images; mapped variables must occur
        with nonnegative exponents only."""
        ctx = self.ctx
        out = ctx.zero()
        idxs = {ctx.index[name]: img for name, img in mapping.items()}
        powers = {i: {} for i in idxs}
        for e, c in self.terms.items():
            vec = list(ctx.unpack(e))
            term = ctx.const(c)
            for i, img in idxs.items():
                k = vec[i]
                if k < 0:
                    raise ValueError("negative exponent under polynomial substitution")
                vec[i] = 0
                if k:
                    cache = powers[i]
                    if k not in cache:
                        cache[k] = img**k
                    term = term * cache[k]
            term = term * LaurentPolynomial(ctx, {ctx.pack(vec): 1})
            out = out + term
        return out

    def embed(self, ctx, rename=None):
        """Re-express in another context; variables map by name (or ``rename``).

        Unmapped source variables must carry exponent 0 in every term.
        """
        rename = rename or {}
        where = []
        for name in self.ctx.names:
            target = rename.get(name, name)
            where.append(ctx.index.get(target))
        out = {}
        for e, c in self.terms.items():
            src = self.ctx.unpack(e)
            vec = [0] * len(ctx.names)
            for i, x in enumerate(src):
                if x == 0:
                    continue
                j = where[i]
                if j is None:
                    raise ValueError(
                        f"variable {self.ctx.names[i]} survives with nonzero exponent"
                    )
                vec[j] += x
            key = ctx.pack(vec)
            s = out.get(key, 0) + c
            if s:
                out[key] = _norm_coeff(s)
            else:
                del out[key]
        return LaurentPolynomial(ctx, out)

    # -- numeric evaluation ----------------------------------------------------

    def evaluate(self, values):
        """Evaluate at complex values (pairwise summation, canonical order)."""
        vals = [complex(values[name]) for name in self.ctx.names]
        parts = []
        for e, c in self.sorted_terms():
            x = complex(c)
            for i, k in enumerate(e):
                if k == 0:
                    continue
                v = vals[i]
                if v == 0 and k < 0:
                    raise ZeroValue(
                        f"variable {self.ctx.names[i]} = 0 with negative exponent"
                    )
                x *= v**k
            parts.append(x)
        return _pairwise_sum(parts)

    # -- printing ----------------------------------------------------------------

    def __str__(self):
        if not self.terms:
            return "0"
        pieces = []
        for e, c in self.sorted_terms():
            factors = [str(c)]
            for name, k in zip(self.ctx.names, e):
                if k:
                    factors.append(f"{name}^{k}")
            pieces.append(" * ".join(factors))
        return " + ".join(pieces)

    def __repr__(self):
        return f"<LaurentPolynomial {self}>"


def _pairwise_sum(parts):
    """Deterministic pairwise summation of a list of complex numbers."""
    n = len(parts)
    if n == 0:
        return 0j
    work = list(parts)
    while len(work) > 1:
        nxt = []
        for i in range(0, len(work) - 1, 2):
            nxt.append(work[i] + work[i + 1])
        if len(work) % 2:
            nxt.append(work[-1])
        work = nxt
    return work[0]


class RationalFunction:
    """Quotient of a Laurent polynomial by a multiset of factor polynomials."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=()):
        self.num = num
        # den: tuple of (factor, multiplicity), canonically sorted, no zeros
        clean = [(f, m) for f, m in den if m]
        if any(f.is_zero() for f, _ in clean):
            raise ZeroDivisionError("zero denominator factor")
        self.den = tuple(sorted(clean, key=lambda fm: fm[0].key()))

    @classmethod
    def from_poly(cls, p):
        return cls(p, ())

    @property
    def ctx(self):
        return self.num.ctx

    def is_polynomial_form(self):
        return not self.den

    def den_expanded(self):
        out = self.num.ctx.one()
        for f, m in self.den:
            for _ in range(m):
                out = out * f
        return out

    def _den_map(self):
        return {f.key(): (f, m) for f, m in self.den}

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, LaurentPolynomial)):
            return RationalFunction(self.num * other, self.den)
        a, b = self._den_map(), other._den_map()
        merged = dict(a)
        for k, (f, m) in b.items():
            if k in merged:
                merged[k] = (f, merged[k][1] + m)
            else:
                merged[k] = (f, m)
        return RationalFunction(self.num * other.num, tuple(merged.values()))

    __rmul__ = __mul__

    def __neg__(self):
        return RationalFunction(-self.num, self.den)

    def _coerce(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ctx.const(other)
        if isinstance(other, LaurentPolynomial):
            other = RationalFunction(other)
        return other

    def __add__(self, other):
        other = self._coerce(other)
        a, b = self._den_map(), other._den_map()
        lcm = dict(a)
        for k, (f, m) in b.items():
            if k in lcm:
                lcm[k] = (f, max(lcm[k][1], m))
            else:
                lcm[k] = (f, m)
        num_a = self.num
        for k, (f, m) in lcm.items():
            need = m - (a[k][1] if k in a else 0)
            for _ in range(need):
                num_a = num_a * f
        num_b = other.num
        for k, (f, m) in lcm.items():
            need = m - (b[k][1] if k in b else 0)
            for _ in range(need):
                num_b = num_b * f
        return RationalFunction(num_a + num_b, tuple(lcm.values()))

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def substitute(self, mapping):
        return RationalFunction(
            self.num.substitute(mapping),
            tuple((f.substitute(mapping), m) for f, m in self.den),
        )

    def as_polynomial(self):
        """Divide out every denominator factor exactly or raise NotPolynomial."""
        out = self.num
        for f, m in self.den:
            for _ in range(m):
                try:
                    out = out.exact_div(f)
                except NotDivisible as exc:
                    raise NotPolynomial(
                        f"nonzero remainder against factor {f}"
                    ) from exc
        return out

    def equals(self, other):
        other = self._coerce(other)
        return self.num * other.den_expanded() == other.num * self.den_expanded()

    def evaluate(self, values):
        den = complex(1)
        for f, m in self.den:
            den *= f.evaluate(values) ** m
        if den == 0:
            raise ZeroDivisionError("denominator vanishes at the evaluation point")
        return self.num.evaluate(values) / den

    def __str__(self):
        if not self.den:
            return str(self.num)
        dens = " * ".join(
            f"({f})" + (f"^{m}" if m > 1 else "") for f, m in self.den
        )
        return f"({self.num}) / ({dens})"

    def __repr__(self):
        return f"<RationalFunction {self}>"


SYMMETRIZE_CAP = 6


def symmetrize(f, var_names, cap=SYMMETRIZE_CAP):
    """Sum of f over all permutations of the listed variables.

    Accepts a LaurentPolynomial or a RationalFunction; returns the symmetrized
    result in polynomial form whenever the sum is polynomial, otherwise as a
    RationalFunction with factored denominator.
    """
    k = len(var_names)
    if k > cap:
        raise TooManyVariables(f"symmetrization over {k} > {cap} variables")
    if isinstance(f, LaurentPolynomial):
        f = RationalFunction.from_poly(f)
    total = None
    for perm in permutations(range(k)):
        mapping = {
            var_names[i]: f.ctx.var(var_names[perm[i]]) for i in range(k)
        }
        g = f.substitute(mapping)
        total = g if total is None else total + g
    if total.is_polynomial_form():
        return total.num
    try:
        return total.as_polynomial()
    except NotPolynomial:
        return total


def poly_matrix_det(rows, size_cap=10):
    """Exact determinant of a square matrix of Laurent polynomials.

    Fraction-free Bareiss elimination; divisions are exact in the ring.
    """
    n = len(rows)
    if n == 0:
        raise ValueError("empty matrix")
    if any(len(r) != n for r in rows):
        raise ValueError("matrix is not square")
    if n > size_cap:
        raise ValueError(f"matrix size {n} exceeds cap {size_cap}")
    ctx = rows[0][0].ctx
    if n == 1:
        return rows[0][0]
    m = [list(r) for r in rows]
    sign = 1
    prev = ctx.one()
    for step in range(n - 1):
        # pivot search: any nonzero entry in the column, smallest first
        pivot_row = None
        best = None
        for r in range(step, n):
            if not m[r][step].is_zero():
                size = len(m[r][step].terms)
                if best is None or size < best:
                    best, pivot_row = size, r
        if pivot_row is None:
            return ctx.zero()
        if pivot_row != step:
            m[step], m[pivot_row] = m[pivot_row], m[step]
            sign = -sign
        piv = m[step][step]
        for r in range(step + 1, n):
            for c in range(step + 1, n):
                t = m[r][c] * piv - m[r][step] * m[step][c]
                m[r][c] = t.exact_div(prev)
            m[r][step] = ctx.zero()
        prev = piv
    det = m[n - 1][n - 1]
    return det if sign == 1 else -det


def rational_matrix_det(rows, size_cap=10):
    """Determinant of a matrix of RationalFunctions.

    Denominators are cleared row by row (multiset product of the row's
    factors), the polynomial determinant is taken fraction-free, and the
    collected row denominators are reattached.
    """
    n = len(rows)
    if n == 0:
        raise ValueError("empty matrix")
    cleared = []
    den_all = {}
    for row in rows:
        lcm = {}
        for entry in row:
            for f, m in entry.den:
                k = f.key()
                if k in lcm:
                    lcm[k] = (f, max(lcm[k][1], m))
                else:
                    lcm[k] = (f, m)
        new_row = []
        for entry in row:
            have = {f.key(): m for f, m in entry.den}
            num = entry.num
            for k, (f, m) in lcm.items():
                for _ in range(m - have.get(k, 0)):
                    num = num * f
            new_row.append(num)
        cleared.append(new_row)
        for k, (f, m) in lcm.items():
            if k in den_all:
                den_all[k] = (f, den_all[k][1] + m)
            else:
                den_all[k] = (f, m)
    det = poly_matrix_det(cleared, size_cap=size_cap)
    return RationalFunction(det, tuple(den_all.values()))


def cofactor_det(rows):
    """Plain cofactor-expansion determinant (independent oracle for tests)."""
    n = len(rows)
    if n == 1:
        return rows[0][0]
    total = None
    for j in range(n):
        minor = [r[:j] + r[j + 1 :] for r in rows[1:]]
        term = rows[0][j] * cofactor_det(minor)
        if j % 2:
            term = -term
        total = term if total is None else total + term
    return total
