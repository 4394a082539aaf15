"""Finite fields F_q = F_p[x]/(f) with exact arithmetic.

Elements are encoded by the integer value of their digit vector read in base
p, so ``code = c0 + c1*p + ... + c_{e-1}*p^(e-1)``.  Multiplication goes
through discrete-log tables, addition in odd extension fields through a Zech
logarithm table; all tables are built once when the context is created and
are never mutated afterwards.
"""

from __future__ import annotations

import functools
import itertools

from .errors import DivisionByZero, FieldTooLarge, NotPrime

MAX_Q = 4096


def _is_prime(n):
    if n < 2:
        return False
    return all(n % d for d in range(2, int(n ** 0.5) + 1))


# -- polynomials over F_p as coefficient lists, lowest degree first ---------
# Only used while constructing a context.

def _trim(c):
    while c and c[-1] == 0:
        c.pop()
    return c


def _pmod(a, m, p):
    a = list(a)
    inv_lead = pow(m[-1], p - 2, p)
    while len(_trim(a)) >= len(m):
        shift = len(a) - len(m)
        f = a[-1] * inv_lead % p
        for i, mi in enumerate(m):
            a[shift + i] = (a[shift + i] - f * mi) % p
    return a


def _pmulmod(a, b, m, p):
    out = [0] * (len(a) + len(b))
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _pmod(out, m, p)


def _is_irreducible(m, p):
    e = len(m) - 1
    for d in range(1, e // 2 + 1):
        for tail in itertools.product(range(p), repeat=d):
            if not _pmod(m, list(tail) + [1], p):
                return False
    return True


def canonical_modulus(p, e):
    """Lexicographically least monic irreducible of degree e over F_p."""
    for tail in itertools.product(range(p), repeat=e):
        m = list(tail) + [1]
        if _is_irreducible(m, p):
            return tuple(m)
    raise AssertionError("no irreducible polynomial found")


class FieldCtx:
    """The field F_q, q = p^e, with its canonical modulus."""

    __slots__ = ("p", "e", "q", "modulus", "_exp", "_log", "_zech", "_neg",
                 "_sqrt", "_trace", "_as_root", "_elems")

    def __init__(self, p, e):
        self.p = p
        self.e = e
        self.q = q = p ** e
        self.modulus = canonical_modulus(p, e)
        m = list(self.modulus)

        def to_digits(code):
            return [(code // p ** i) % p for i in range(e)]

        def to_code(digits):
            return sum(d * p ** i for i, d in enumerate(digits))

        # Find the least primitive element and build exp/log tables.
        for cand in range(1, q):
            g = to_digits(cand)
            x = [1]
            powers = []
            for _ in range(q - 1):
                powers.append(to_code(x + [0] * (e - len(x))) if x else 0)
                x = _pmulmod(x, g, m, p)
            if len(set(powers)) == q - 1:
                break
        else:  # q == 2 has no candidates beyond 1
            powers = [1]
        exp = powers * 2
        log = [None] * q
        for k, c in enumerate(powers):
            log[c] = k
        self._exp = tuple(exp)
        self._log = tuple(log)

        neg = [to_code([(-d) % p for d in to_digits(c)]) for c in range(q)]
        self._neg = tuple(neg)

        if e > 1 and p > 2:
            zech = [None] * (q - 1)
            for k in range(q - 1):
                c = powers[k]
                d0 = c % p
                one_plus = c - d0 + (d0 + 1) % p
                zech[k] = log[one_plus]
            self._zech = tuple(zech)
        else:
            self._zech = None

        sqrt = [None] * q
        sqrt[0] = 0
        if p == 2:
            for c in range(1, q):
                sqrt[c] = exp[(log[c] * (q // 2)) % (q - 1)]
        else:
            for c in range(1, q):
                if log[c] % 2 == 0:
                    sqrt[c] = exp[log[c] // 2]
        self._sqrt = tuple(sqrt)

        trace = []
        for c in range(q):
            t = 0
            for i in range(e):
                if c:
                    t = self.add(t, exp[(log[c] * p ** i) % (q - 1)])
            assert t < p
            trace.append(t)
        self._trace = tuple(trace)

        if p == 2:
            roots = [None] * q
            for z in range(q):
                c = self.add(self.mul(z, z), z)
                if roots[c] is None:
                    roots[c] = z
            self._as_root = tuple(roots)
        else:
            self._as_root = None
        self._elems = tuple(FieldElem(self, c) for c in range(q))

    # ---- integer-code arithmetic ------------------------------------------

    def add(self, a, b):
        if self.e == 1:
            return (a + b) % self.p
        if self.p == 2:
            return a ^ b
        if a == 0:
            return b
        if b == 0:
            return a
        la = self._log[a]
        z = self._zech[(self._log[b] - la) % (self.q - 1)]
        if z is None:
            return 0
        return self._exp[la + z]

    def neg(self, a):
        return self._neg[a]

    def sub(self, a, b):
        return self.add(a, self._neg[b])

    def mul(self, a, b):
        if a == 0 or b == 0:
            return 0
        return self._exp[self._log[a] + self._log[b]]

    def inv(self, a):
        if a == 0:
            raise DivisionByZero("inverse of zero")
        return self._exp[(self.q - 1 - self._log[a]) % (self.q - 1)]

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, n):
        if n == 0:
            return 1
        if a == 0:
            if n < 0:
                raise DivisionByZero("negative power of zero")
            return 0
        return self._exp[(self._log[a] * n) % (self.q - 1)]

    def from_int(self, n):
        return n % self.p

    def digits(self, code):
        p = self.p
        return tuple((code // p ** i) % p for i in range(self.e))

    def from_digits(self, digits):
        if len(digits) != self.e:
            raise ValueError(f"expected {self.e} digits")
        return sum((d % self.p) * self.p ** i for i, d in enumerate(digits))

    def sqrt_code(self, a):
        return self._sqrt[a]

    def trace_code(self, a):
        return self._trace[a]

    def as_root_code(self, c):
        """Some z with z^2 + z = c (characteristic 2), or None."""
        return self._as_root[c]

    # ---- element-level API ------------------------------------------------

    def __call__(self, value):
        if isinstance(value, FieldElem):
            if value.ctx != self:
                raise ValueError("element of a different field")
            return value
        if isinstance(value, (tuple, list)):
            return FieldElem(self, self.from_digits(value))
        return FieldElem(self, self.from_int(value))

    @property
    def zero(self):
        return FieldElem(self, 0)

    @property
    def one(self):
        return FieldElem(self, 1)

    @property
    def gen(self):
        """The class g of x (for e == 1 this is the residue of the modulus root)."""
        if self.e == 1:
            return FieldElem(self, (-self.modulus[0]) % self.p)
        return FieldElem(self, self.p)

    def elements(self):
        return self._elems

    def __eq__(self, other):
        return isinstance(other, FieldCtx) and (self.p, self.e) == (other.p, other.e)

    def __hash__(self):
        return hash((self.p, self.e))

    def __repr__(self):
        return f"FieldCtx(p={self.p}, e={self.e})"

    def __reduce__(self):
        return (field_create, (self.p, self.e))


class FieldElem:
    __slots__ = ("ctx", "code")

    def __init__(self, ctx, code):
        self.ctx = ctx
        self.code = code

    @property
    def digits(self):
        return self.ctx.digits(self.code)

    def _coerce(self, other):
        if isinstance(other, FieldElem):
            if other.ctx is not self.ctx and other.ctx != self.ctx:
                raise ValueError("elements of different fields")
            return other.code
        if isinstance(other, int):
            return other % self.ctx.p
        return None

    def __add__(self, other):
        b = self._coerce(other)
        if b is None:
            return NotImplemented
        return FieldElem(self.ctx, self.ctx.add(self.code, b))

    __radd__ = __add__

    def __sub__(self, other):
        b = self._coerce(other)
        if b is None:
            return NotImplemented
        return FieldElem(self.ctx, self.ctx.sub(self.code, b))

    def __rsub__(self, other):
        b = self._coerce(other)
        if b is None:
            return NotImplemented
        return FieldElem(self.ctx, self.ctx.sub(b, self.code))

    def __mul__(self, other):
        b = self._coerce(other)
        if b is None:
            return NotImplemented
        return FieldElem(self.ctx, self.ctx.mul(self.code, b))

    __rmul__ = __mul__

    def __truediv__(self, other):
        b = self._coerce(other)
        if b is None:
            return NotImplemented
        return FieldElem(self.ctx, self.ctx.div(self.code, b))

    def __rtruediv__(self, other):
        b = self._coerce(other)
        if b is None:
            return NotImplemented
        return FieldElem(self.ctx, self.ctx.div(b, self.code))

    def __neg__(self):
        return FieldElem(self.ctx, self.ctx.neg(self.code))

    def __pow__(self, n):
        return FieldElem(self.ctx, self.ctx.pow(self.code, n))

    def inverse(self):
        return FieldElem(self.ctx, self.ctx.inv(self.code))

    def __eq__(self, other):
        b = self._coerce(other)
        if b is None:
            return NotImplemented
        return self.code == b

    def __hash__(self):
        return hash(self.code)

    def __bool__(self):
        return self.code != 0

    def is_zero(self):
        return self.code == 0

    def in_prime_field(self):
        return self.code < self.ctx.p

    def frobenius(self, k=1):
        return self ** (self.ctx.p ** k)

    def pth_root(self):
        """The unique y with y^p == self."""
        ctx = self.ctx
        return self ** (ctx.q // ctx.p)

    def to_expr(self):
        """Human-readable form as a polynomial in g, e.g. ``2*g^2+1``."""
        ctx = self.ctx
        if ctx.e == 1:
            return str(self.code)
        terms = []
        for i in reversed(range(ctx.e)):
            d = self.digits[i]
            if d == 0:
                continue
            mono = "" if i == 0 else ("g" if i == 1 else f"g^{i}")
            if not mono:
                terms.append(str(d))
            elif d == 1:
                terms.append(mono)
            else:
                terms.append(f"{d}*{mono}")
        return "+".join(terms) if terms else "0"

    def to_machine(self):
        """Integer for prime fields, digit vector ``[c0,c1,...]`` otherwise."""
        if self.ctx.e == 1:
            return str(self.code)
        return "[" + ",".join(str(d) for d in self.digits) + "]"

    def __str__(self):
        return self.to_expr()

    def __repr__(self):
        return f"FieldElem({self.to_machine()} in F_{self.ctx.q})"


def prime_power(q):
    """Return (p, e) with q == p**e, or None when q is not a prime power."""
    if q < 2:
        return None
    for p in range(2, q + 1):
        if q % p == 0:
            e = 0
            while q % p == 0:
                q //= p
                e += 1
            return (p, e) if q == 1 else None
    return None


@functools.lru_cache(maxsize=None)
def field_create(p, e=1):
    """Build F_{p^e} with its canonical modulus."""
    if not _is_prime(p):
        raise NotPrime(f"{p} is not prime")
    if e < 1:
        raise ValueError("extension degree must be at least 1")
    if p > 97 or p ** e > MAX_Q:
        raise FieldTooLarge(f"p={p}, e={e} exceeds the supported field size")
    return FieldCtx(p, e)


def field_for_q(q):
    pe = prime_power(q)
    if pe is None:
        raise NotPrime("q must be a prime power")
    return field_create(*pe)


def is_square(a):
    """True iff a == y^2 for some y in the field."""
    return a.ctx.sqrt_code(a.code) is not None


def sqrt(a):
    r = a.ctx.sqrt_code(a.code)
    if r is None:
        raise ValueError(f"{a} is not a square")
    return FieldElem(a.ctx, r)


def abs_trace(a):
    """Absolute trace Tr_{F_q/F_p}(a) as an integer in [0, p)."""
    return a.ctx.trace_code(a.code)


def enumerate_field(ctx):
    """All elements in ascending base-p digit order."""
    return list(ctx.elements())


def nonsquare(ctx):
    """Least non-square in enumeration order (odd characteristic)."""
    for x in ctx.elements():
        if not is_square(x):
            return x
    raise ValueError("every element is a square in characteristic 2")


def trace_one(ctx):
    """Least element of absolute trace 1."""
    for x in ctx.elements():
        if abs_trace(x) == 1:
            return x
    raise AssertionError("trace is surjective")


def cube_root_of_unity(ctx):
    """The primitive cube root of unity with the smaller digit vector."""
    roots = [x for x in ctx.elements() if x * x + x + 1 == 0]
    if not roots:
        raise ValueError(f"F_{ctx.q} has no primitive cube root of unity")
    return min(roots, key=lambda x: x.digits)
