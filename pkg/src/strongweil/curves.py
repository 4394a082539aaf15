"""Weierstrass curves over F_q and over F_q(T).

A ``Curve`` carries the long-Weierstrass coefficients a1, a2, a3, a4, a6 of

    Y^2 + a1 X Y + a3 Y = X^3 + a2 X^2 + a4 X + a6

either as ``FieldElem`` values (a curve over F_q) or as ``RatFunc`` values (a
curve over F_q(T)).  Reduction at a degree-one place moves the place to T = 0,
rescales to an integral model, minimizes while the discriminant valuation
allows it, and classifies the fibre by counting smooth points.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional

from .errors import (
    ConstantJInvariant,
    DenominatorVanishes,
    NotIntegral,
    NotSplitAtInfinity,
    SingularCurve,
    WrongCharacteristic,
)
from .expr import format_equation, parse_equation
from .funcfield import (
    Place,
    Poly,
    RatFunc,
    artin_schreier_solve,
    is_pth_power,
    is_square_ratfunc,
    localize,
    places,
    power_series_at_zero,
    valuation,
)
from .gf import FieldCtx, FieldElem, abs_trace, is_square, nonsquare, trace_one


def _factorize(n):
    out = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


@dataclass(frozen=True)
class Curve:
    ctx: FieldCtx
    a1: object
    a2: object
    a3: object
    a4: object
    a6: object

    def __post_init__(self):
        conv = self._to_ratfunc if self.over_function_field else self._to_elem
        for name in ("a1", "a2", "a3", "a4", "a6"):
            object.__setattr__(self, name, conv(getattr(self, name)))

    @property
    def over_function_field(self):
        return any(isinstance(getattr(self, n), (RatFunc, Poly)) for n in ("a1", "a2", "a3", "a4", "a6"))

    def _to_ratfunc(self, x):
        if isinstance(x, RatFunc):
            return x
        if isinstance(x, Poly):
            return RatFunc(x, reduced=True)
        return RatFunc.constant(self.ctx, x)

    def _to_elem(self, x):
        return x if isinstance(x, FieldElem) else self.ctx(x)

    @classmethod
    def over_fq(cls, ctx, a1=0, a2=0, a3=0, a4=0, a6=0):
        return cls(ctx, ctx(a1), ctx(a2), ctx(a3), ctx(a4), ctx(a6))

    @classmethod
    def over_fqt(cls, ctx, a1=0, a2=0, a3=0, a4=0, a6=0):
        def lift(x):
            if isinstance(x, RatFunc):
                return x
            if isinstance(x, Poly):
                return RatFunc(x, reduced=True)
            return RatFunc.constant(ctx, x)
        return cls(ctx, *(lift(x) for x in (a1, a2, a3, a4, a6)))

    @classmethod
    def from_equation(cls, text, ctx, bindings=None):
        w = parse_equation(text, ctx, bindings)
        return cls.over_fqt(ctx, *w.as_tuple())

    @property
    def coefficients(self):
        return (self.a1, self.a2, self.a3, self.a4, self.a6)

    @property
    def p(self):
        return self.ctx.p

    def to_expr(self):
        if self.over_function_field:
            return format_equation(*self.coefficients)
        return format_equation(*(RatFunc.constant(self.ctx, c) for c in self.coefficients))

    def __str__(self):
        return self.to_expr()

    def invariants(self, require_nonsingular=False):
        return invariants(self, require_nonsingular)

    @property
    def discriminant(self):
        return invariants(self).delta

    @property
    def j_invariant(self):
        inv = invariants(self, require_nonsingular=True)
        return inv.j


@dataclass(frozen=True)
class CurveInvariants:
    b2: object
    b4: object
    b6: object
    b8: object
    c4: object
    c6: object
    delta: object
    j: object  # None when delta == 0


def invariants(E: Curve, require_nonsingular=False) -> CurveInvariants:
    a1, a2, a3, a4, a6 = E.coefficients
    b2 = a1 * a1 + 4 * a2
    b4 = 2 * a4 + a1 * a3
    b6 = a3 * a3 + 4 * a6
    b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
    c4 = b2 * b2 - 24 * b4
    c6 = -(b2 * b2 * b2) + 36 * b2 * b4 - 216 * b6
    delta = -(b2 * b2 * b8) - 8 * (b4 * b4 * b4) - 27 * (b6 * b6) + 9 * b2 * b4 * b6
    if delta == 0:
        if require_nonsingular:
            raise SingularCurve(f"discriminant vanishes for {E.to_expr()}")
        j = None
    else:
        j = c4 * c4 * c4 / delta
    return CurveInvariants(b2, b4, b6, b8, c4, c6, delta, j)


# ---- curves over F_q ----------------------------------------------------

def _require_fq(E):
    if E.over_function_field:
        raise TypeError("expected a curve over F_q")


def affine_count(E: Curve) -> int:
    """Number of affine solutions of the Weierstrass equation over F_q.

    For a singular cubic this equals the number of smooth points, the
    singular point being rational and the point at infinity smooth.
    """
    _require_fq(E)
    ctx = E.ctx
    a1, a2, a3, a4, a6 = (c.code for c in E.coefficients)
    add, mul = ctx.add, ctx.mul
    total = 0
    if ctx.p == 2:
        tr = ctx.trace_code
        for x in range(ctx.q):
            B = add(mul(a1, x), a3)
            f = add(mul(add(mul(add(x, a2), x), a4), x), a6)
            if B == 0:
                total += 1
            elif tr(mul(f, ctx.inv(mul(B, B)))) == 0:
                total += 2
        return total
    four = ctx.from_int(4)
    sq = ctx.sqrt_code
    for x in range(ctx.q):
        B = add(mul(a1, x), a3)
        f = add(mul(add(mul(add(x, a2), x), a4), x), a6)
        d = add(mul(B, B), mul(four, f))
        if d == 0:
            total += 1
        elif sq(d) is not None:
            total += 2
    return total


def count_points(E: Curve) -> int:
    """#E(F_q) including the point at infinity."""
    _require_fq(E)
    if invariants(E).delta == 0:
        raise SingularCurve(f"{E.to_expr()} is singular")
    return affine_count(E) + 1


def rational_points(E: Curve) -> list:
    """All F_q-points; the point at infinity is ``None`` and comes first."""
    _require_fq(E)
    ctx = E.ctx
    a1, a2, a3, a4, a6 = E.coefficients
    pts = [None]
    elems = ctx.elements()
    for x in elems:
        B = a1 * x + a3
        f = ((x + a2) * x + a4) * x + a6
        for y in elems:
            if y * y + B * y == f:
                pts.append((x, y))
    return pts


def negate_point(E, P):
    if P is None:
        return None
    x, y = P
    return (x, -y - E.a1 * x - E.a3)


def add_points(E: Curve, P, Q):
    if P is None:
        return Q
    if Q is None:
        return P
    a1, a2, a3, a4, a6 = E.coefficients
    x1, y1 = P
    x2, y2 = Q
    if x1 == x2 and y1 + y2 + a1 * x2 + a3 == 0:
        return None
    if x1 == x2:
        den = 2 * y1 + a1 * x1 + a3
        lam = (3 * x1 * x1 + 2 * a2 * x1 + a4 - a1 * y1) / den
        nu = (-(x1 * x1 * x1) + a4 * x1 + 2 * a6 - a3 * y1) / den
    else:
        lam = (y2 - y1) / (x2 - x1)
        nu = (y1 * x2 - y2 * x1) / (x2 - x1)
    x3 = lam * lam + a1 * lam - a2 - x1 - x2
    y3 = -(lam + a1) * x3 - nu - a3
    return (x3, y3)


def multiply_point(E, n, P):
    if n < 0:
        return multiply_point(E, -n, negate_point(E, P))
    result = None
    while n:
        if n & 1:
            result = add_points(E, result, P)
        n >>= 1
        if n:
            P = add_points(E, P, P)
    return result


def point_order(E, P, group_order):
    d = group_order
    for ell in _factorize(group_order):
        while d % ell == 0 and multiply_point(E, d // ell, P) is None:
            d //= ell
    return d


@dataclass(frozen=True)
class GroupStructure:
    order: int
    m: int
    n: int

    @property
    def invariant_factors(self):
        return (self.m, self.n)


def group_structure(E: Curve) -> GroupStructure:
    """E(F_q) = Z/m x Z/n with m | n, from the maximal point order."""
    _require_fq(E)
    if invariants(E).delta == 0:
        raise SingularCurve(f"{E.to_expr()} is singular")
    pts = rational_points(E)
    order = len(pts)
    assert order == count_points(E)
    exponent = 1
    for P in pts:
        exponent = max(exponent, point_order(E, P, order))
        if exponent == order:
            break
    m = order // exponent
    assert exponent % m == 0 and (E.ctx.q - 1) % m == 0
    return GroupStructure(order, m, exponent)


def quadratic_twist(E: Curve) -> Curve:
    """The quadratic twist by the canonical non-square (odd p) or trace-one element (p = 2)."""
    ctx = E.ctx
    a1, a2, a3, a4, a6 = E.coefficients
    if ctx.p == 2:
        eps = trace_one(ctx)
        if E.over_function_field:
            eps = RatFunc.constant(ctx, eps)
        return Curve(ctx, a1, a2 + eps * a1 * a1, a3, a4, a6 + eps * a3 * a3)
    d = nonsquare(ctx)
    if E.over_function_field:
        d = RatFunc.constant(ctx, d)
    A, B, C = _square_completed(E)
    zero = a1 * 0
    return Curve(ctx, zero, d * A, zero, d * d * B, d * d * d * C)


def _square_completed(E):
    """(A, B, C) with E isomorphic to Y^2 = X^3 + A X^2 + B X + C (odd p)."""
    inv = invariants(E)
    ctx = E.ctx
    half = ctx(2).inverse()
    quarter = half * half
    if E.over_function_field:
        half = RatFunc.constant(ctx, half)
        quarter = RatFunc.constant(ctx, quarter)
    return inv.b2 * quarter, inv.b4 * half, inv.b6 * quarter


# ---- coordinate changes and normal forms --------------------------------

def change_coordinates(E: Curve, u, r, s, t) -> Curve:
    """Model for X = u^2 X' + r, Y = u^3 Y' + u^2 s X' + t."""
    a1, a2, a3, a4, a6 = E.coefficients
    n1 = a1 + 2 * s
    n2 = a2 - s * a1 + 3 * r - s * s
    n3 = a3 + r * a1 + 2 * t
    n4 = a4 - s * a3 + 2 * r * a2 - (t + r * s) * a1 + 3 * r * r - 2 * s * t
    n6 = a6 + r * a4 + r * r * a2 + r * r * r - t * a3 - t * t - r * t * a1
    u2 = u * u
    u3 = u2 * u
    return Curve(E.ctx, n1 / u, n2 / u2, n3 / u3, n4 / (u2 * u2), n6 / (u3 * u3))


def _const(E, value):
    if E.over_function_field:
        return RatFunc.constant(E.ctx, value)
    return E.ctx(value)


def char2_normal_form(E: Curve) -> Curve:
    """Y^2 + XY = X^3 + a2 X^2 + a6 (characteristic 2, j != 0)."""
    if E.p != 2:
        raise WrongCharacteristic("characteristic 2 only")
    if E.a1 == 0:
        raise ConstantJInvariant("a1 = 0 gives j = 0 in characteristic 2")
    zero, one = _const(E, 0), _const(E, 1)
    F = change_coordinates(E, E.a1, zero, zero, zero)
    F = change_coordinates(F, one, F.a3, zero, zero)
    F = change_coordinates(F, one, zero, zero, F.a4)
    assert F.a1 == 1 and F.a3 == 0 and F.a4 == 0
    return F


def char3_normal_form(E: Curve) -> Curve:
    """Y^2 = X^3 + a2 X^2 + a6 (characteristic 3, j != 0)."""
    if E.p != 3:
        raise WrongCharacteristic("characteristic 3 only")
    A, B, C = _square_completed(E)
    if A == 0:
        raise ConstantJInvariant("b2 = 0 gives j = 0 in characteristic 3")
    zero, one = _const(E, 0), _const(E, 1)
    F = Curve(E.ctx, zero, A, zero, B, C)
    # 3r^2 = 0 here, so the shift r = -B/(2A) removes the X term.
    r = -B / (2 * A)
    F = change_coordinates(F, one, r, zero, zero)
    assert F.a4 == 0
    return F


def short_form(E: Curve) -> Curve:
    """Y^2 = X^3 - 27 c4 X - 54 c6 (p >= 5)."""
    if E.p < 5:
        raise WrongCharacteristic("short form needs p >= 5")
    inv = invariants(E)
    zero = _const(E, 0)
    return Curve(E.ctx, zero, zero, zero, -27 * inv.c4, -54 * inv.c6)


# ---- torsion ------------------------------------------------------------

@dataclass(frozen=True)
class TorsionFlags:
    has2: Optional[bool] = None
    has4: Optional[bool] = None
    has3: Optional[bool] = None
    has9: Optional[bool] = None
    has5: Optional[bool] = None


def _cubic_has_root(A, B, C, ctx):
    return any(((x + A) * x + B) * x + C == 0 for x in ctx.elements())


def torsion_by_model(E: Curve) -> TorsionFlags:
    """Rational torsion read off the characteristic-specific normal forms."""
    _require_fq(E)
    ctx = E.ctx
    p = ctx.p
    if p == 2:
        if E.a1 == 0:
            return TorsionFlags(has2=False, has4=False)
        F = char2_normal_form(E)
        return TorsionFlags(has2=True, has4=abs_trace(F.a2) == 0)
    A, B, C = _square_completed(E)
    has2 = _cubic_has_root(A, B, C, ctx)
    if p == 3:
        if A == 0:
            return TorsionFlags(has2=has2, has3=False, has9=False)
        F = char3_normal_form(E)
        if not is_square(F.a2):
            return TorsionFlags(has2=has2, has3=False, has9=False)
        # after scaling to a2 = 1, a 9-torsion point exists iff a6 = u^3 - u
        return TorsionFlags(has2=has2, has3=True, has9=abs_trace(F.a6 / F.a2 ** 3) == 0)
    if p == 5:
        S = short_form(E)
        hasse = 2 * S.a4
        fourth = hasse != 0 and hasse ** ((ctx.q - 1) // 4) == 1
        return TorsionFlags(has2=has2, has5=fourth)
    raise WrongCharacteristic(f"torsion criteria cover characteristics 2, 3, 5; got {p}")


def torsion_by_group(E: Curve) -> TorsionFlags:
    G = group_structure(E)
    p = E.p
    has2 = G.order % 2 == 0
    if p == 2:
        return TorsionFlags(has2=has2, has4=G.n % 4 == 0)
    if p == 3:
        return TorsionFlags(has2=has2, has3=G.order % 3 == 0, has9=G.n % 9 == 0)
    if p == 5:
        return TorsionFlags(has2=has2, has5=G.order % 5 == 0)
    raise WrongCharacteristic(f"torsion criteria cover characteristics 2, 3, 5; got {p}")


def torsion_predicates(E: Curve) -> TorsionFlags:
    """Torsion flags, computed from the normal form and cross-checked on the group."""
    if E.p not in (2, 3, 5):
        raise WrongCharacteristic(f"torsion criteria cover characteristics 2, 3, 5; got {E.p}")
    if invariants(E).delta == 0:
        raise SingularCurve(f"{E.to_expr()} is singular")
    by_model = torsion_by_model(E)
    by_group = torsion_by_group(E)
    if by_model != by_group:
        raise AssertionError(f"torsion routes disagree on {E.to_expr()}: {by_model} vs {by_group}")
    return by_model


def triple_x(E: Curve, x: FieldElem) -> FieldElem:
    """X-coordinate of [3]P on Y^2 = X^3 + X^2 + a6 in characteristic 3."""
    if E.p != 3:
        raise WrongCharacteristic("tripling formula is for characteristic 3")
    if not (E.a1 == 0 and E.a3 == 0 and E.a4 == 0 and E.a2 == 1):
        raise ValueError("curve must have the form Y^2 = X^3 + X^2 + a6")
    a6 = E.a6
    den = x ** 3 + a6
    if den == 0:
        raise DenominatorVanishes("x^3 + a6 = 0: the point has order 3")
    return (x ** 9 - a6 * x ** 3 + a6 ** 3) / (den * den)


# ---- Frobenius and isomorphism over F_q(T) ------------------------------

def frobenius_image(E: Curve, k: int = 1) -> Curve:
    """Raise every coefficient to the p^k-th power."""
    out = Curve(E.ctx, *(c.frobenius(k) for c in E.coefficients))
    j0 = invariants(E).j
    if j0 is not None:
        assert invariants(out).j == j0.frobenius(k)
    return out


def _require_nonconstant_j(E):
    j = invariants(E, require_nonsingular=True).j
    if not E.over_function_field or j.is_constant():
        raise ConstantJInvariant("j-invariant is constant")
    return j


def is_frobenius_minimal(E: Curve) -> bool:
    j = _require_nonconstant_j(E)
    return not is_pth_power(j)[0]


def frobenius_preimage(E: Curve) -> Curve:
    """A curve whose Frobenius image is isomorphic to E (j must be a p-th power)."""
    j = _require_nonconstant_j(E)
    ok, _ = is_pth_power(j)
    if not ok:
        raise ValueError("j-invariant is not a p-th power")
    ctx = E.ctx
    p = ctx.p

    def root(f):
        good, w = is_pth_power(f)
        assert good
        return w

    # literal Frobenius images invert exactly
    roots = [is_pth_power(c) for c in E.coefficients]
    if all(ok for ok, _ in roots):
        return Curve(ctx, *(w for _, w in roots))

    zero = _const(E, 0)
    one = _const(E, 1)
    if p == 2:
        F = char2_normal_form(E)
        return Curve(ctx, one, F.a2, zero, zero, root(F.a6))
    if p == 3:
        F = char3_normal_form(E)
        a2 = F.a2
        return Curve(ctx, zero, a2, zero, zero, root(F.a6 * a2 ** 6))
    S = short_form(E)
    A, B = S.a4, S.a6
    k = pow(4, -1, p)
    if k > p // 2:
        k -= p
    u = A ** k
    return Curve(ctx, zero, zero, zero, root(A / u ** 4), root(B / u ** 6))


def frobenius_minimal_form(E: Curve):
    """(E_min, k): E is isomorphic to the k-fold Frobenius image of E_min."""
    k = 0
    cur = E
    while not is_frobenius_minimal(cur):
        cur = frobenius_preimage(cur)
        k += 1
    return cur, k


def is_isomorphic(E1: Curve, E2: Curve) -> bool:
    """Isomorphism over F_q(T) for curves with equal non-constant j."""
    j1 = _require_nonconstant_j(E1)
    j2 = _require_nonconstant_j(E2)
    if j1 != j2:
        return False
    p = E1.p
    if p == 2:
        F1, F2 = char2_normal_form(E1), char2_normal_form(E2)
        return F1.a6 == F2.a6 and artin_schreier_solve(F1.a2 + F2.a2) is not None
    if p == 3:
        F1, F2 = char3_normal_form(E1), char3_normal_form(E2)
        return is_square_ratfunc(F1.a2 / F2.a2)[0]
    S1, S2 = short_form(E1), short_form(E2)
    A1, B1, A2, B2 = S1.a4, S1.a6, S2.a4, S2.a6
    if A1.is_zero() or B1.is_zero():
        raise ConstantJInvariant("j is 0 or 1728")
    return is_square_ratfunc((B2 * A1) / (B1 * A2))[0]


# ---- Hasse invariant ----------------------------------------------------

def hasse_invariant(E: Curve) -> Poly:
    """Coefficient of X^(p-1) in f^((p-1)/2) for Y^2 = f(X), f = X^3 + a2 X^2 + a4 X + a6."""
    if E.p < 5:
        raise WrongCharacteristic("Hasse invariant helper needs p >= 5")
    if E.a1 == 0 and E.a3 == 0:
        A, B, C = E.a2, E.a4, E.a6
    else:
        A, B, C = _square_completed(E)
    for c in (A, B, C):
        if not c.is_polynomial():
            raise NotIntegral("coefficients must be polynomials in T")
    ctx = E.ctx
    p = ctx.p
    f = [C.num, B.num, A.num, Poly.constant(ctx, 1)]  # coefficients in X
    power = [Poly.constant(ctx, 1)]
    for _ in range((p - 1) // 2):
        nxt = [Poly(ctx) for _ in range(len(power) + 3)]
        for i, x in enumerate(power):
            for j, y in enumerate(f):
                nxt[i + j] = nxt[i + j] + x * y
        power = nxt
    return power[p - 1] if p - 1 < len(power) else Poly(ctx)


def check_congruence(E: Curve, a: FieldElem) -> bool:
    """#E_a(F_q) == 1 - N(A_p(a)) mod p at a place where the model reduces well."""
    from .funcfield import evaluate

    ctx = E.ctx
    p, q = ctx.p, ctx.q
    Ap = hasse_invariant(E)
    red = Curve(ctx, *(evaluate(c, a) for c in E.coefficients))
    if invariants(red).delta == 0:
        raise ValueError(f"model does not reduce to a smooth curve at T = {a.to_expr()}")
    norm = Ap(a) ** ((q - 1) // (p - 1))
    assert norm.in_prime_field()
    return (count_points(red) - (1 - norm.code)) % p == 0


# ---- reduction ----------------------------------------------------------

class ReductionType(enum.Enum):
    GOOD = "Good"
    SPLIT = "SplitMult"
    NONSPLIT = "NonSplitMult"
    ADDITIVE = "Additive"

    @property
    def multiplicative(self):
        return self in (ReductionType.SPLIT, ReductionType.NONSPLIT)


@dataclass(frozen=True)
class LocalReduction:
    place: Place
    reduced: Curve
    type: ReductionType
    count: int
    disc_valuation: int  # of the minimal model found

    @property
    def lam(self):
        return self.reduced.ctx.q + 1 - self.count if self.type is ReductionType.GOOD else None


def _v0(f: RatFunc):
    if f.is_zero():
        return math.inf
    return f.num.valuation_at_zero() - f.den.valuation_at_zero()


def _series(ctx, prec, *fs):
    return [power_series_at_zero(f, prec) for f in fs]


class _Series:
    """Truncated power series arithmetic on coefficient codes."""

    def __init__(self, ctx, prec):
        self.ctx, self.prec = ctx, prec

    def add(self, *xs):
        add = self.ctx.add
        out = [0] * self.prec
        for x in xs:
            for i, c in enumerate(x):
                if c:
                    out[i] = add(out[i], c)
        return out

    def neg(self, x):
        return [self.ctx.neg(c) for c in x]

    def mul(self, x, y):
        ctx, prec = self.ctx, self.prec
        out = [0] * prec
        for i, c in enumerate(x):
            if c:
                for j in range(prec - i):
                    d = y[j]
                    if d:
                        out[i + j] = ctx.add(out[i + j], ctx.mul(c, d))
        return out

    def scal(self, k, x):
        kc = self.ctx.from_int(k)
        return [self.ctx.mul(kc, c) for c in x]


def _numerators(S, a, r, s, t):
    """The integrality numerators N1..N6 of the substitution (u, r, s, t)."""
    a1, a2, a3, a4, a6 = a
    m = S.mul
    rs, st, rr = m(r, s), m(s, t), m(r, r)
    n1 = S.add(a1, S.scal(2, s))
    n2 = S.add(a2, S.neg(m(s, a1)), S.scal(3, r), S.neg(m(s, s)))
    n3 = S.add(a3, m(r, a1), S.scal(2, t))
    n4 = S.add(a4, S.neg(m(s, a3)), S.scal(2, m(r, a2)), S.neg(m(S.add(t, rs), a1)),
               S.scal(3, rr), S.scal(-2, st))
    n6 = S.add(a6, m(r, a4), m(rr, a2), m(rr, r), S.neg(m(t, a3)), S.neg(m(t, t)),
               S.neg(m(m(r, t), a1)))
    return n1, n2, n3, n4, n6


_WEIGHTS = (1, 2, 3, 4, 6)


def _find_minimizing_step(ctx, coeffs):
    """(r, s, t) polynomials making (u = T, r, s, t) integral, or None.

    Reducing s mod T, r mod T^2, t mod T^3 loses nothing: composing with an
    integral change (1, r', s', t') preserves integrality in both directions.
    """
    prec = 7
    S = _Series(ctx, prec)
    a = _series(ctx, prec, *coeffs)
    q = ctx.q
    zero = [0] * prec

    def poly(*digits):
        v = list(digits) + [0] * (prec - len(digits))
        return v

    def ok(n, depth):
        # v(N_i) >= min(i, depth) for each numerator
        for w, ni in zip(_WEIGHTS, n):
            for k in range(min(w, depth)):
                if ni[k]:
                    return False
        return True

    for s0 in range(q):
        s = poly(s0)
        if _numerators(S, a, zero, s, zero)[0][0]:
            continue
        for r0 in range(q):
            n = _numerators(S, a, poly(r0), s, zero)
            if n[1][0]:
                continue
            for r1 in range(q):
                r = poly(r0, r1)
                n = _numerators(S, a, r, s, zero)
                if n[1][0] or n[1][1]:
                    continue
                for t0 in range(q):
                    if not ok(_numerators(S, a, r, s, poly(t0)), 1):
                        continue
                    for t1 in range(q):
                        if not ok(_numerators(S, a, r, s, poly(t0, t1)), 2):
                            continue
                        for t2 in range(q):
                            if ok(_numerators(S, a, r, s, poly(t0, t1, t2)), 6):
                                mk = lambda *d: Poly._raw(ctx, d)
                                return mk(r0, r1), mk(s0), mk(t0, t1, t2)
    return None


def _classify_singular(q, count):
    if count == q - 1:
        return ReductionType.SPLIT
    if count == q + 1:
        return ReductionType.NONSPLIT
    if count == q:
        return ReductionType.ADDITIVE
    raise AssertionError(f"singular fibre with {count} smooth points over F_{q}")


def _local_integral_model(E: Curve, v: Place):
    """Coefficients with v moved to T = 0, scaled to be integral there."""
    local = [localize(c, v) for c in E.coefficients]
    m = 0
    for w, c in zip(_WEIGHTS, local):
        val = _v0(c)
        if val != math.inf and val < 0:
            m = max(m, -(-(-val) // w))
    if m:
        T = RatFunc.T(E.ctx)
        local = [c * T ** (w * m) for w, c in zip(_WEIGHTS, local)]
    return Curve(E.ctx, *local)


def minimal_local_model(E: Curve, v: Place):
    """(model, v(Delta)) of a model minimal at v, with v placed at T = 0."""
    F = _local_integral_model(E, v)
    vd = _v0(invariants(F).delta)
    T = RatFunc.T(E.ctx)
    while vd >= 12:
        step = _find_minimizing_step(E.ctx, F.coefficients)
        if step is None:
            break
        r, s, t = (RatFunc(x, reduced=True) for x in step)
        F = change_coordinates(F, T, r, s, t)
        new_vd = _v0(invariants(F).delta)
        assert new_vd == vd - 12 and all(_v0(c) >= 0 for c in F.coefficients)
        vd = new_vd
    return F, vd


def _finish(E, v, coeffs_at_zero, vd):
    ctx = E.ctx
    red = Curve(ctx, *coeffs_at_zero)
    if vd == 0:
        return LocalReduction(v, red, ReductionType.GOOD, count_points(red), 0)
    count = affine_count(red)
    return LocalReduction(v, red, _classify_singular(ctx.q, count), count, vd)


def reduce_at(E: Curve, v: Place, _delta: Optional[RatFunc] = None) -> LocalReduction:
    """Reduction type and smooth-point count of E at the place v."""
    if not E.over_function_field:
        raise TypeError("expected a curve over F_q(T)")
    ctx = E.ctx
    if not v.is_infinite:
        a = v.a
        delta = _delta if _delta is not None else invariants(E).delta
        # fast path: the given model is already integral and smooth at T = a
        if all(c.den(a) != 0 for c in E.coefficients) and delta.num(a) != 0:
            vals = [c.num(a) / c.den(a) for c in E.coefficients]
            return _finish(E, v, vals, 0)
    F, vd = minimal_local_model(E, v)
    vals = [FieldElem(ctx, power_series_at_zero(c, 1)[0]) for c in F.coefficients]
    return _finish(E, v, vals, vd)


@dataclass(frozen=True)
class ReductionProfile:
    ctx: FieldCtx
    entries: tuple  # LocalReduction per place in canonical order

    @property
    def q(self):
        return self.ctx.q

    def at(self, v: Place) -> LocalReduction:
        for e in self.entries:
            if e.place == v:
                return e
        raise KeyError(v)

    @property
    def infinity(self):
        return self.entries[-1]

    @property
    def split_at_infinity(self):
        return self.infinity.type is ReductionType.SPLIT

    modular_eligible = split_at_infinity

    def require_split_at_infinity(self):
        if not self.split_at_infinity:
            raise NotSplitAtInfinity(f"reduction at infinity is {self.infinity.type.value}")

    def finite(self):
        return self.entries[:-1]

    def places_of(self, *types):
        return [e.place.a for e in self.finite() if e.type in types]

    def good_counts(self):
        return [e.count for e in self.finite() if e.type is ReductionType.GOOD]


def reduction_profile(E: Curve) -> ReductionProfile:
    delta = invariants(E, require_nonsingular=True).delta
    return ReductionProfile(E.ctx, tuple(reduce_at(E, v, delta) for v in places(E.ctx)))


def pole_orders(E: Curve) -> dict:
    """Place -> -v(j) at every degree-one place where j has a pole."""
    j = invariants(E, require_nonsingular=True).j
    out = {}
    for v in places(E.ctx):
        val = valuation(j, v)
        if val < 0:
            out[v] = -val
    return out


def substitute_affine(E: Curve, alpha: FieldElem, beta: FieldElem) -> Curve:
    """The curve with T replaced by alpha*T + beta (alpha != 0); fixes infinity."""
    ctx = E.ctx
    lin = Poly(ctx, [beta, alpha])

    def sub(f: RatFunc):
        def compose(poly):
            out = Poly(ctx)
            for c in reversed(poly.coefficients):
                out = out * lin + Poly.constant(ctx, c)
            return out
        return RatFunc(compose(f.num), compose(f.den))

    return Curve(ctx, *(sub(c) for c in E.coefficients))


def simplify_model(E: Curve) -> Curve:
    """Strip every linear u = T - a with u^i | a_i for all i from a polynomial model."""
    if not E.over_function_field or not all(c.is_polynomial() for c in E.coefficients):
        return E
    weights = (1, 2, 3, 4, 6)
    polys = [c.num for c in E.coefficients]
    for a in E.ctx.elements():
        lin = Poly.linear(a)
        while True:
            split = [divmod(f, lin ** w) for f, w in zip(polys, weights)]
            if any(not r.is_zero() for _, r in split):
                break
            polys = [qq for qq, _ in split]
    return Curve(E.ctx, *(RatFunc(f, reduced=True) for f in polys))
