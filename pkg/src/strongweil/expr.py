"""Recursive-descent parser for conductor and curve expressions.

Grammar (whitespace ignored)::

    equation := sum '=' sum
    sum      := ['-'] term (('+' | '-') term)*
    term     := unary (('*' | '/') unary)*
    unary    := '-' unary | power
    power    := atom ['^' unary]          (right associative)
    atom     := INT | NAME | '(' sum ')'

Names are ``T``, ``X``, ``Y``, ``g`` (the field generator, extension fields
only) and any caller-bound names.  Values are polynomials in X and Y whose
coefficients are rational functions in T.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import DivisionByZero, ExprSyntaxError, NotAWeierstrassEquation, UnboundName
from .funcfield import Poly, RatFunc
from .gf import FieldCtx, FieldElem

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\S))")


def _tokenize(text):
    pos = 0
    out = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:  # trailing whitespace
            break
        if m.group(1) is not None:
            out.append(("int", m.group(1), m.start(1)))
        elif m.group(2) is not None:
            out.append(("name", m.group(2), m.start(2)))
        elif m.group(3) is not None:
            ch = m.group(3)
            if ch not in "+-*/^()=":
                raise ExprSyntaxError(f"unexpected character {ch!r}", m.start(3))
            out.append(("op", ch, m.start(3)))
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


class XYPoly:
    """Sparse polynomial in X, Y with RatFunc coefficients: {(i, j): coeff}."""

    __slots__ = ("ctx", "terms")

    def __init__(self, ctx, terms):
        self.ctx = ctx
        self.terms = {k: v for k, v in terms.items() if not v.is_zero()}

    @classmethod
    def scalar(cls, value: RatFunc):
        return cls(value.ctx, {(0, 0): value})

    def is_scalar(self):
        return all(k == (0, 0) for k in self.terms)

    def scalar_value(self) -> RatFunc:
        return self.terms.get((0, 0), RatFunc.constant(self.ctx, 0))

    def __add__(self, other):
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out[k] + v if k in out else v
        return XYPoly(self.ctx, out)

    def __neg__(self):
        return XYPoly(self.ctx, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        out = {}
        for (i1, j1), v1 in self.terms.items():
            for (i2, j2), v2 in other.terms.items():
                k = (i1 + i2, j1 + j2)
                prod = v1 * v2
                out[k] = out[k] + prod if k in out else prod
        return XYPoly(self.ctx, out)

    def __pow__(self, n):
        if self.is_scalar():
            return XYPoly.scalar(self.scalar_value() ** n)
        if n < 0:
            raise ValueError("negative power of an expression in X or Y")
        result = XYPoly.scalar(RatFunc.constant(self.ctx, 1))
        for _ in range(n):
            result = result * self
        return result


class _Parser:
    def __init__(self, text, ctx: FieldCtx, bindings):
        self.text = text
        self.ctx = ctx
        self.bindings = dict(bindings or {})
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect(self, value):
        tok = self.take()
        if tok[1] != value or tok[0] not in ("op",):
            what = "end of input" if tok[0] == "end" else repr(tok[1])
            raise ExprSyntaxError(f"expected {value!r}, found {what}", tok[2])

    def _const(self, value):
        return XYPoly.scalar(RatFunc.constant(self.ctx, value))

    def top(self, allow_equation):
        lhs = self.sum()
        tok = self.peek()
        if tok[0] == "op" and tok[1] == "=":
            if not allow_equation:
                raise ExprSyntaxError("unexpected '='", tok[2])
            self.take()
            rhs = self.sum()
            self._finish()
            return lhs, rhs
        self._finish()
        return lhs, None

    def _finish(self):
        tok = self.peek()
        if tok[0] != "end":
            raise ExprSyntaxError(f"unexpected {tok[1]!r}", tok[2])

    def sum(self):
        acc = self.term()
        while True:
            tok = self.peek()
            if tok[0] == "op" and tok[1] in "+-":
                self.take()
                rhs = self.term()
                acc = acc + rhs if tok[1] == "+" else acc - rhs
            else:
                return acc

    def term(self):
        acc = self.unary()
        while True:
            tok = self.peek()
            if tok[0] == "op" and tok[1] in "*/":
                self.take()
                rhs = self.unary()
                if tok[1] == "*":
                    acc = acc * rhs
                else:
                    if not rhs.is_scalar():
                        raise NotAWeierstrassEquation("division by an expression in X or Y")
                    d = rhs.scalar_value()
                    if d.is_zero():
                        raise DivisionByZero(f"division by zero at position {tok[2]}")
                    acc = acc * XYPoly.scalar(d.inverse())
            else:
                return acc

    def unary(self):
        tok = self.peek()
        if tok[0] == "op" and tok[1] == "-":
            self.take()
            return -self.unary()
        if tok[0] == "op" and tok[1] == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        tok = self.peek()
        if tok[0] == "op" and tok[1] == "^":
            self.take()
            sign = 1
            while self.peek()[0] == "op" and self.peek()[1] == "-":
                self.take()
                sign = -sign
            etok = self.peek()
            if etok[0] != "int":
                # right-associative towers must still reduce to an integer
                if etok[0] == "op" and etok[1] == "(":
                    raise ExprSyntaxError("exponent must be an integer literal", etok[2])
                what = "end of input" if etok[0] == "end" else repr(etok[1])
                raise ExprSyntaxError(f"expected integer exponent, found {what}", etok[2])
            self.take()
            n = int(etok[1])
            if self.peek()[0] == "op" and self.peek()[1] == "^":
                self.take()
                inner = self.peek()
                if inner[0] != "int":
                    raise ExprSyntaxError("exponent must be an integer literal", inner[2])
                self.take()
                n = n ** int(inner[1])
            n *= sign
            if n < 0 and base.is_scalar() and base.scalar_value().is_zero():
                raise DivisionByZero(f"zero raised to a negative power at position {etok[2]}")
            try:
                return base ** n
            except ValueError as exc:
                raise NotAWeierstrassEquation(str(exc)) from None
        return base

    def atom(self):
        tok = self.take()
        kind, val, pos = tok
        if kind == "int":
            return self._const(int(val))
        if kind == "name":
            if val in self.bindings:
                b = self.bindings[val]
                if isinstance(b, FieldElem):
                    return XYPoly.scalar(RatFunc.constant(self.ctx, b))
                if isinstance(b, Poly):
                    return XYPoly.scalar(RatFunc(b, reduced=True))
                if isinstance(b, RatFunc):
                    return XYPoly.scalar(b)
                return self._const(b)
            if val == "T":
                return XYPoly.scalar(RatFunc.T(self.ctx))
            if val == "X":
                return XYPoly(self.ctx, {(1, 0): RatFunc.constant(self.ctx, 1)})
            if val == "Y":
                return XYPoly(self.ctx, {(0, 1): RatFunc.constant(self.ctx, 1)})
            if val == "g":
                if self.ctx.e == 1:
                    raise UnboundName("g names the generator of an extension field; F_q here is prime")
                return XYPoly.scalar(RatFunc.constant(self.ctx, self.ctx.gen))
            raise UnboundName(f"unbound name {val!r} at position {pos}")
        if kind == "op" and val == "(":
            inner = self.sum()
            self.expect(")")
            return inner
        what = "end of input" if kind == "end" else repr(val)
        raise ExprSyntaxError(f"unexpected {what}", pos)


@dataclass(frozen=True)
class WeierstrassCoefficients:
    a1: RatFunc
    a2: RatFunc
    a3: RatFunc
    a4: RatFunc
    a6: RatFunc

    def as_tuple(self):
        return (self.a1, self.a2, self.a3, self.a4, self.a6)


_ALLOWED = {(0, 2), (1, 1), (0, 1), (3, 0), (2, 0), (1, 0), (0, 0)}


def _read_weierstrass(poly: XYPoly) -> WeierstrassCoefficients:
    bad = set(poly.terms) - _ALLOWED
    if bad:
        mono = ", ".join(f"X^{i}*Y^{j}" for i, j in sorted(bad))
        raise NotAWeierstrassEquation(f"unsupported terms {mono}")
    ctx = poly.ctx
    zero = RatFunc.constant(ctx, 0)
    y2 = poly.terms.get((0, 2), zero)
    x3 = poly.terms.get((3, 0), zero)
    if y2.is_zero() or not (y2 + x3).is_zero():
        raise NotAWeierstrassEquation("need matching Y^2 and X^3 terms on opposite sides")
    norm = y2.inverse()
    t = {k: v * norm for k, v in poly.terms.items()}
    g = lambda k: t.get(k, zero)
    return WeierstrassCoefficients(g((1, 1)), -g((2, 0)), g((0, 1)), -g((1, 0)), -g((0, 0)))


def parse_expression(text: str, ctx: FieldCtx, bindings=None):
    """Parse a conductor/coefficient expression or a curve equation.

    Returns a ``Poly`` for polynomial expressions in T, a ``RatFunc`` for
    other expressions in T, and ``WeierstrassCoefficients`` for equations.
    """
    p = _Parser(text, ctx, bindings)
    lhs, rhs = p.top(allow_equation=True)
    if rhs is not None:
        return _read_weierstrass(lhs - rhs)
    if not lhs.is_scalar():
        raise NotAWeierstrassEquation("expression in X or Y without '='")
    value = lhs.scalar_value()
    return value.num if value.is_polynomial() and value.den == 1 else value


def parse_ratfunc(text, ctx, bindings=None) -> RatFunc:
    v = parse_expression(text, ctx, bindings)
    if isinstance(v, WeierstrassCoefficients):
        raise NotAWeierstrassEquation("expected an expression, got an equation")
    return v if isinstance(v, RatFunc) else RatFunc(v, reduced=True)


def parse_poly(text, ctx, bindings=None) -> Poly:
    v = parse_ratfunc(text, ctx, bindings)
    if not v.is_polynomial():
        raise NotAWeierstrassEquation(f"{text!r} is not a polynomial")
    return v.num.scale(v.den.lc().inverse())


def parse_equation(text, ctx, bindings=None) -> WeierstrassCoefficients:
    v = parse_expression(text, ctx, bindings)
    if not isinstance(v, WeierstrassCoefficients):
        raise NotAWeierstrassEquation("expected an equation 'lhs=rhs'")
    return v


def _wrap(s):
    return s if re.fullmatch(r"[A-Za-z0-9^]+", s) else f"({s})"


def format_equation(a1, a2, a3, a4, a6) -> str:
    """Print coefficients back in the input grammar (round-trips through the parser)."""

    def part(coeff, mono):
        if coeff.is_zero():
            return None
        s = coeff.to_expr()
        if not mono:
            return _wrap(s)
        if s == "1":
            return mono
        return f"{_wrap(s)}*{mono}"

    lhs = ["Y^2"] + [x for x in (part(a1, "X*Y"), part(a3, "Y")) if x]
    rhs = ["X^3"] + [x for x in (part(a2, "X^2"), part(a4, "X"), part(a6, "")) if x]
    return "+".join(lhs) + "=" + "+".join(rhs)
