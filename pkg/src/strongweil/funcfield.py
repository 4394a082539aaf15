"""Polynomials and rational functions over F_q in the variable T.

Coefficients are stored as integer codes of the field context (lowest degree
first) so inner loops avoid wrapping every intermediate in a ``FieldElem``.
Places are the q+1 degree-one places of F_q(T): ``T - a`` for a in F_q and
the place at infinity.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional

from .errors import DivisionByZero, PoleAtPlace, WrongDegree
from .gf import FieldCtx, FieldElem

INF = float("inf")


def _strip(c):
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


class Poly:
    __slots__ = ("ctx", "c")

    def __init__(self, ctx: FieldCtx, coeffs=()):
        self.ctx = ctx
        codes = []
        for x in coeffs:
            if isinstance(x, FieldElem):
                codes.append(x.code)
            else:
                codes.append(ctx.from_int(x))
        self.c = _strip(codes)

    @classmethod
    def _raw(cls, ctx, codes):
        obj = cls.__new__(cls)
        obj.ctx = ctx
        obj.c = _strip(codes)
        return obj

    @classmethod
    def constant(cls, ctx, value):
        if isinstance(value, FieldElem):
            return cls._raw(ctx, (value.code,))
        return cls._raw(ctx, (ctx.from_int(value),))

    @classmethod
    def T(cls, ctx):
        return cls._raw(ctx, (0, 1))

    @classmethod
    def linear(cls, a: FieldElem):
        """The polynomial T - a."""
        ctx = a.ctx
        return cls._raw(ctx, (ctx.neg(a.code), 1))

    @property
    def coefficients(self):
        return tuple(FieldElem(self.ctx, x) for x in self.c)

    def degree(self):
        return len(self.c) - 1 if self.c else -1

    def is_zero(self):
        return not self.c

    def is_constant(self):
        return len(self.c) <= 1

    def lc(self):
        return FieldElem(self.ctx, self.c[-1]) if self.c else self.ctx.zero

    def __getitem__(self, i):
        return FieldElem(self.ctx, self.c[i] if 0 <= i < len(self.c) else 0)

    def _lift(self, other):
        if isinstance(other, Poly):
            return other
        if isinstance(other, (int, FieldElem)):
            return Poly.constant(self.ctx, other)
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        add = self.ctx.add
        a, b = self.c, o.c
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, x in enumerate(b):
            out[i] = add(out[i], x)
        return Poly._raw(self.ctx, out)

    __radd__ = __add__

    def __neg__(self):
        neg = self.ctx.neg
        return Poly._raw(self.ctx, [neg(x) for x in self.c])

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        if not self.c or not o.c:
            return Poly._raw(self.ctx, ())
        ctx = self.ctx
        add, mul = ctx.add, ctx.mul
        out = [0] * (len(self.c) + len(o.c) - 1)
        for i, x in enumerate(self.c):
            if x:
                for j, y in enumerate(o.c):
                    if y:
                        out[i + j] = add(out[i + j], mul(x, y))
        return Poly._raw(ctx, out)

    __rmul__ = __mul__

    def scale(self, k: FieldElem):
        mul = self.ctx.mul
        return Poly._raw(self.ctx, [mul(x, k.code) for x in self.c])

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative exponent for a polynomial")
        result = Poly.constant(self.ctx, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __divmod__(self, other):
        if other.is_zero():
            raise DivisionByZero("polynomial division by zero")
        ctx = self.ctx
        add, mul, neg = ctx.add, ctx.mul, ctx.neg
        r = list(self.c)
        d = other.c
        inv_lead = ctx.inv(d[-1])
        qlen = len(r) - len(d) + 1
        if qlen <= 0:
            return Poly._raw(ctx, ()), self
        quo = [0] * qlen
        for k in reversed(range(qlen)):
            f = mul(r[k + len(d) - 1], inv_lead)
            quo[k] = f
            if f:
                nf = neg(f)
                for i, y in enumerate(d):
                    r[k + i] = add(r[k + i], mul(nf, y))
        return Poly._raw(ctx, quo), Poly._raw(ctx, r[:len(d) - 1])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def monic(self):
        if not self.c:
            return self
        return self.scale(self.lc().inverse())

    def derivative(self):
        ctx = self.ctx
        return Poly._raw(ctx, [ctx.mul(ctx.from_int(i), x) for i, x in enumerate(self.c)][1:])

    def __call__(self, a):
        """Evaluate at a field element (Horner)."""
        ctx = self.ctx
        code = a.code if isinstance(a, FieldElem) else ctx.from_int(a)
        acc = 0
        for x in reversed(self.c):
            acc = ctx.add(ctx.mul(acc, code), x)
        return FieldElem(ctx, acc)

    def shift(self, a: FieldElem):
        """The polynomial f(T + a)."""
        ctx = self.ctx
        out = []
        for x in reversed(self.c):
            # out = out * (T + a) + x
            new = [0] * (len(out) + 1)
            for i, y in enumerate(out):
                new[i + 1] = ctx.add(new[i + 1], y)
                new[i] = ctx.add(new[i], ctx.mul(y, a.code))
            new[0] = ctx.add(new[0], x)
            out = new
        return Poly._raw(ctx, out)

    def reverse(self, n=None):
        """T^n f(1/T) with n = deg f by default."""
        n = self.degree() if n is None else n
        c = list(self.c) + [0] * (n + 1 - len(self.c))
        return Poly._raw(self.ctx, c[::-1])

    def multiplicity(self, a: FieldElem):
        """Order of vanishing at T = a."""
        if self.is_zero():
            return INF
        m = 0
        f = self
        lin = Poly.linear(a)
        while True:
            quo, rem = divmod(f, lin)
            if not rem.is_zero():
                return m
            f = quo
            m += 1

    def valuation_at_zero(self):
        if not self.c:
            return INF
        for i, x in enumerate(self.c):
            if x:
                return i

    def frobenius(self, k=1):
        """f^(p^k) computed coefficientwise."""
        ctx = self.ctx
        e = ctx.p ** k
        out = [0] * (e * (len(self.c) - 1) + 1) if self.c else []
        for i, x in enumerate(self.c):
            out[i * e] = ctx.pow(x, e)
        return Poly._raw(ctx, out)

    def __eq__(self, other):
        o = self._lift(other) if not isinstance(other, Poly) else other
        if o is None:
            return NotImplemented
        return self.ctx == o.ctx and self.c == o.c

    def __hash__(self):
        return hash(self.c)

    def to_expr(self):
        if not self.c:
            return "0"
        terms = []
        for i in reversed(range(len(self.c))):
            x = self.c[i]
            if not x:
                continue
            coef = FieldElem(self.ctx, x).to_expr()
            coef_s = f"({coef})" if "+" in coef else coef
            mono = "" if i == 0 else ("T" if i == 1 else f"T^{i}")
            if not mono:
                terms.append(coef_s)
            elif coef == "1":
                terms.append(mono)
            else:
                terms.append(f"{coef_s}*{mono}")
        return "+".join(terms)

    def __repr__(self):
        return f"Poly({self.to_expr()})"


def poly_gcd(a: Poly, b: Poly) -> Poly:
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


class RatFunc:
    """A reduced quotient num/den with monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Optional[Poly] = None, *, reduced=False):
        ctx = num.ctx
        if den is None:
            den = Poly.constant(ctx, 1)
        if den.is_zero():
            raise DivisionByZero("zero denominator")
        if not reduced:
            if num.is_zero():
                den = Poly.constant(ctx, 1)
            else:
                g = poly_gcd(num, den)
                if g.degree() > 0:
                    num = num // g
                    den = den // g
                lead = den.lc()
                if lead != 1:
                    inv = lead.inverse()
                    num = num.scale(inv)
                    den = den.scale(inv)
        self.num = num
        self.den = den

    @property
    def ctx(self):
        return self.num.ctx

    @classmethod
    def constant(cls, ctx, value):
        return cls(Poly.constant(ctx, value), reduced=True)

    @classmethod
    def T(cls, ctx):
        return cls(Poly.T(ctx), reduced=True)

    def is_zero(self):
        return self.num.is_zero()

    def is_constant(self):
        return self.num.is_constant() and self.den.is_constant()

    def is_polynomial(self):
        return self.den.degree() == 0

    def constant_value(self):
        if not self.is_constant():
            raise ValueError("not a constant")
        return self.num[0]

    def _lift(self, other):
        if isinstance(other, RatFunc):
            return other
        if isinstance(other, Poly):
            return RatFunc(other, reduced=True)
        if isinstance(other, (int, FieldElem)):
            return RatFunc.constant(self.ctx, other)
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        if self.den == o.den:
            return RatFunc(self.num + o.num, self.den)
        return RatFunc(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den, reduced=True)

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        if o.is_constant():
            k = o.constant_value()
            if k == 0:
                return RatFunc.constant(self.ctx, 0)
            return RatFunc(self.num.scale(k), self.den, reduced=True)
        if self.is_constant():
            return o * self
        # cross-cancel before multiplying to keep degrees small
        g1 = poly_gcd(self.num, o.den)
        g2 = poly_gcd(o.num, self.den)
        num = (self.num // g1) * (o.num // g2)
        den = (self.den // g2) * (o.den // g1)
        return RatFunc(num, den, reduced=den.degree() >= 0 and den.lc() == 1)

    __rmul__ = __mul__

    def inverse(self):
        if self.is_zero():
            raise DivisionByZero("inverse of zero rational function")
        return RatFunc(self.den, self.num)

    def __truediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        return RatFunc(self.num ** n, self.den ** n, reduced=True)

    def frobenius(self, k=1):
        return RatFunc(self.num.frobenius(k), self.den.frobenius(k), reduced=True)

    def __eq__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        return hash((self.num, self.den))

    def to_expr(self):
        n = self.num.to_expr()
        if self.den.degree() == 0:
            return n
        d = self.den.to_expr()
        if "+" in d or "*" in d:
            d = f"({d})"
        n_s = n if (self.num.degree() <= 0 or "+" not in n) and "*" not in n else f"({n})"
        return f"{n_s}/{d}"

    def __repr__(self):
        return f"RatFunc({self.to_expr()})"


# ---- places and valuations ------------------------------------------------

@dataclass(frozen=True)
class Place:
    """T - a for ``a`` a field element, or the place at infinity (a is None)."""

    a: Optional[FieldElem] = None

    @property
    def is_infinite(self):
        return self.a is None

    def label(self):
        return "inf" if self.a is None else self.a.to_machine()

    def __str__(self):
        return "inf" if self.a is None else f"T-({self.a.to_expr()})"


def places(ctx) -> list:
    """P^1(F_q) in canonical order: field enumeration, then infinity."""
    return [Place(a) for a in ctx.elements()] + [Place(None)]


def valuation(f, v: Place):
    if isinstance(f, Poly):
        f = RatFunc(f, reduced=True)
    if f.is_zero():
        return INF
    if v.is_infinite:
        return f.den.degree() - f.num.degree()
    return f.num.multiplicity(v.a) - f.den.multiplicity(v.a)


def leading_coefficient_at(f: RatFunc, v: Place) -> FieldElem:
    """First nonzero coefficient of the local expansion of f at v."""
    if v.is_infinite:
        return f.num.lc() / f.den.lc()
    n, d = f.num, f.den
    lin = Poly.linear(v.a)
    for _ in range(n.multiplicity(v.a)):
        n = n // lin
    for _ in range(d.multiplicity(v.a)):
        d = d // lin
    return n(v.a) / d(v.a)


def evaluate(f, a: FieldElem) -> FieldElem:
    if isinstance(f, Poly):
        return f(a)
    d = f.den(a)
    if d == 0:
        raise PoleAtPlace(f"{f.to_expr()} has a pole at T = {a.to_expr()}")
    return f.num(a) / d


def is_pth_power(f):
    """Return (True, g) with g^p == f, or (False, None)."""
    if isinstance(f, Poly):
        f = RatFunc(f, reduced=True)
    if not f.num.derivative().is_zero() or not f.den.derivative().is_zero():
        return False, None
    p = f.ctx.p

    def root(poly):
        coeffs = [poly[i].pth_root() for i in range(0, len(poly.c), p)]
        return Poly(poly.ctx, coeffs)

    return True, RatFunc(root(f.num), root(f.den), reduced=True)


def substitute_inverse(f):
    """f(1/S) as a reduced rational function in S."""
    if isinstance(f, Poly):
        f = RatFunc(f, reduced=True)
    if f.is_zero():
        return f
    dn, dd = f.num.degree(), f.den.degree()
    num = f.num.reverse()
    den = f.den.reverse()
    S = Poly.T(f.ctx)
    if dd > dn:
        num = num * S ** (dd - dn)
    elif dn > dd:
        den = den * S ** (dn - dd)
    return RatFunc(num, den)


def shift(f: RatFunc, a: FieldElem) -> RatFunc:
    """f(T + a)."""
    return RatFunc(f.num.shift(a), f.den.shift(a), reduced=f.den.degree() == 0)


def localize(f: RatFunc, v: Place) -> RatFunc:
    """Move the place v to T = 0."""
    if v.is_infinite:
        return substitute_inverse(f)
    return RatFunc(f.num.shift(v.a), f.den.shift(v.a))


def power_series_at_zero(f: RatFunc, prec: int):
    """Coefficient codes of f as a power series in T, mod T^prec.

    Requires T not dividing the denominator.
    """
    ctx = f.ctx
    den = f.den.c
    if not den or den[0] == 0:
        raise PoleAtPlace("denominator vanishes at 0")
    inv0 = ctx.inv(den[0])
    num = list(f.num.c[:prec]) + [0] * max(0, prec - len(f.num.c))
    out = [0] * prec
    for k in range(prec):
        acc = num[k]
        for i in range(1, min(k, len(den) - 1) + 1):
            acc = ctx.sub(acc, ctx.mul(den[i], out[k - i]))
        out[k] = ctx.mul(acc, inv0)
    return out


def is_square_ratfunc(f: RatFunc):
    """Return (True, g) with g^2 == f, or (False, None). Odd characteristic."""
    ctx = f.ctx
    if ctx.p == 2:
        raise ValueError("use characteristic-2 arithmetic")
    if f.is_zero():
        return True, f
    from .gf import is_square, sqrt
    lead = f.num.lc()
    if not is_square(lead):
        return False, None
    rn = _monic_sqrt(f.num.monic())
    rd = _monic_sqrt(f.den)
    if rn is None or rd is None:
        return False, None
    return True, RatFunc(rn.scale(sqrt(lead)), rd, reduced=True)


def _monic_sqrt(f: Poly):
    d = f.degree()
    if d % 2:
        return None
    n = d // 2
    ctx = f.ctx
    s = [0] * (n + 1)
    s[n] = 1
    inv2 = ctx.inv(ctx.from_int(2))
    for k in range(1, n + 1):
        # coefficient of T^(2n-k) in s^2
        acc = f.c[2 * n - k]
        for i in range(n - k + 1, n):
            j = 2 * n - k - i
            if n - k < j <= n:
                acc = ctx.sub(acc, ctx.mul(s[i], s[j]))
        s[n - k] = ctx.mul(acc, inv2)
    cand = Poly._raw(ctx, s)
    return cand if cand * cand == f else None


def artin_schreier_solve(c: RatFunc):
    """Some b in F_q(T) with b^2 + b == c (characteristic 2), or None."""
    ctx = c.ctx
    if ctx.p != 2:
        raise ValueError("characteristic 2 only")
    if c.is_zero():
        return c
    # b = P/Q reduced forces den(c) = Q^2 and num(c) = P^2 + P*Q.
    D = c.den
    if any(D.c[i] for i in range(1, len(D.c), 2)):
        return None
    Q = Poly(ctx, [FieldElem(ctx, D.c[i]).pth_root() for i in range(0, len(D.c), 2)])
    N = c.num
    d = max(Q.degree(), (N.degree() + 1) // 2)
    e = ctx.e
    basis = [FieldElem(ctx, 1 << j) for j in range(e)]  # F_2-basis of F_q
    out_len = 2 * d + 1 + Q.degree() + 1

    def vec(poly):
        bits = 0
        for i in range(out_len):
            code = poly.c[i] if i < len(poly.c) else 0
            bits |= code << (i * e)
        return bits

    columns = []
    for i in range(d + 1):
        for j, b in enumerate(basis):
            P = Poly(ctx, [0] * i + [b])
            columns.append(vec(P * P + P * Q))
    target = vec(N)
    # Gaussian elimination over F_2 on the augmented system.
    n_unknowns = len(columns)
    rows = {}
    for idx, col in enumerate(columns):
        cur, mask = col, 1 << idx
        while cur:
            top = cur.bit_length() - 1
            if top in rows:
                pc, pm = rows[top]
                cur ^= pc
                mask ^= pm
            else:
                rows[top] = (cur, mask)
                break
    cur, mask = target, 0
    while cur:
        top = cur.bit_length() - 1
        if top not in rows:
            return None
        pc, pm = rows[top]
        cur ^= pc
        mask ^= pm
    coeffs = [0] * (d + 1)
    for idx in range(n_unknowns):
        if mask >> idx & 1:
            i, j = divmod(idx, e)
            coeffs[i] ^= 1 << j
    P = Poly._raw(ctx, coeffs)
    b = RatFunc(P, Q)
    assert b * b + b == c
    return b


# ---- conductors -----------------------------------------------------------

class Splitting(enum.Enum):
    CUBE = "Cube"
    SQUARE_TIMES_LINEAR = "SquareTimesLinear"
    THREE_DISTINCT_LINEAR = "ThreeDistinctLinear"
    LINEAR_TIMES_QUADRATIC = "LinearTimesQuadratic"
    IRREDUCIBLE_CUBIC = "IrreducibleCubic"


@dataclass(frozen=True)
class ConductorShape:
    finite_part: Optional[Poly]
    splitting: Splitting
    simple_linear_roots: frozenset
    multiple_root: Optional[FieldElem]
    q: int

    @property
    def square_free(self):
        return self.multiple_root is None

    def divides(self, a: FieldElem):
        return a in self.simple_linear_roots or a == self.multiple_root

    def bad_places(self):
        """Degree-one places dividing the conductor, infinity included."""
        out = [a for a in self.simple_linear_roots]
        if self.multiple_root is not None:
            out.append(self.multiple_root)
        return out

    def describe(self):
        if self.finite_part is not None:
            return self.finite_part.to_expr()
        factors = []
        if self.multiple_root is not None:
            e = 3 if self.splitting is Splitting.CUBE else 2
            factors.append(f"(T-({self.multiple_root.to_expr()}))^{e}")
        for a in sorted(self.simple_linear_roots, key=lambda x: x.code):
            factors.append(f"(T-({a.to_expr()}))")
        if self.splitting is Splitting.LINEAR_TIMES_QUADRATIC:
            factors.append("p2")
        if self.splitting is Splitting.IRREDUCIBLE_CUBIC:
            factors.append("p3")
        return "*".join(factors)


def classify_conductor(n: Poly) -> ConductorShape:
    if n.degree() != 3:
        raise WrongDegree(f"conductor must have degree 3, got {n.degree()}")
    ctx = n.ctx
    roots = {a: n.multiplicity(a) for a in ctx.elements() if n(a) == 0}
    mults = sorted(roots.values(), reverse=True)
    simple = frozenset(a for a, m in roots.items() if m == 1)
    multiple = next((a for a, m in roots.items() if m > 1), None)
    if mults == [3]:
        split = Splitting.CUBE
    elif mults == [2, 1]:
        split = Splitting.SQUARE_TIMES_LINEAR
    elif mults == [1, 1, 1]:
        split = Splitting.THREE_DISTINCT_LINEAR
    elif mults == [1]:
        split = Splitting.LINEAR_TIMES_QUADRATIC
    elif not mults:
        split = Splitting.IRREDUCIBLE_CUBIC
    else:
        raise AssertionError(f"impossible root pattern {mults}")
    # cross-check against gcd(n, n'): a nonconstant gcd iff a repeated factor
    g = poly_gcd(n, n.derivative()) if not n.derivative().is_zero() else n
    assert (g.degree() > 0) == (multiple is not None)
    return ConductorShape(n.monic(), split, simple, multiple, ctx.q)


def shape_from_places(ctx, multiplicative, additive) -> ConductorShape:
    """Infer the conductor shape from the bad linear places of a curve.

    A degree-3 conductor has at most one multiple root; whatever degree is
    not accounted for by linear places belongs to one irreducible factor.
    """
    from .errors import ProfileInconsistent

    mult = frozenset(multiplicative)
    add = list(additive)
    if len(add) > 1:
        raise ProfileInconsistent("more than one additive linear place")
    if add:
        if len(mult) == 1:
            split = Splitting.SQUARE_TIMES_LINEAR
            n = Poly.linear(add[0]) ** 2 * Poly.linear(next(iter(mult)))
        elif not mult:
            split = Splitting.CUBE
            n = Poly.linear(add[0]) ** 3
        else:
            raise ProfileInconsistent("additive place with two multiplicative linear places")
        return ConductorShape(n, split, mult, add[0], ctx.q)
    if len(mult) == 3:
        n = Poly.constant(ctx, 1)
        for a in mult:
            n = n * Poly.linear(a)
        return ConductorShape(n, Splitting.THREE_DISTINCT_LINEAR, mult, None, ctx.q)
    if len(mult) == 1:
        return ConductorShape(None, Splitting.LINEAR_TIMES_QUADRATIC, mult, None, ctx.q)
    if not mult:
        return ConductorShape(None, Splitting.IRREDUCIBLE_CUBIC, mult, None, ctx.q)
    raise ProfileInconsistent(f"{len(mult)} multiplicative linear places cannot give degree 3")
