"""Dense polynomials in X over exact coefficient rings, and resultants.

Coefficient rings are small adapter objects: ARing (coefficients in
A = F_q[T]), KRing (coefficients in k, a field), and PolyRing (coefficients
that are themselves UPoly values, which is what the bivariate Sylvester
elimination works over).  Resultants use the Sylvester matrix with
fraction-free Bareiss elimination, so everything stays in the coefficient
domain; exact divisions that fail indicate a corrupted matrix and raise.
"""

from __future__ import annotations

from .errors import ContractViolationError, PreconditionError, ResourceCeilingError
from .fqarith import (
    NEG_INF,
    APoly,
    RationalFn,
    many_gcd,
)


class ARing:
    """A = F_q[T] as a coefficient domain (no division, exact_div only)."""

    def __init__(self, field):
        self.field = field

    @property
    def zero(self):
        return APoly.zero(self.field)

    @property
    def one(self):
        return APoly.one(self.field)

    def is_zero(self, c):
        return c.is_zero

    def scalar_mul(self, c, n):
        return c.scale(self.field.scalar(n))

    def exact_div(self, a, b):
        q, r = divmod(a, b)
        if not r.is_zero:
            raise ContractViolationError("inexact division in A")
        return q

    def __eq__(self, other):
        return isinstance(other, ARing) and other.field == self.field

    def __hash__(self):
        return hash(("ARing", self.field))


class KRing:
    """k = F_q(T) as a coefficient field."""

    def __init__(self, field):
        self.field = field

    @property
    def zero(self):
        return RationalFn.zero(self.field)

    @property
    def one(self):
        return RationalFn.one(self.field)

    def is_zero(self, c):
        return c.is_zero

    def scalar_mul(self, c, n):
        return c * RationalFn(APoly.constant(self.field, self.field.scalar(n)))

    def inv(self, c):
        return c.inv()

    def exact_div(self, a, b):
        return a / b

    def __eq__(self, other):
        return isinstance(other, KRing) and other.field == self.field

    def __hash__(self):
        return hash(("KRing", self.field))


class PolyRing:
    """UPoly over a base ring, itself used as a coefficient domain."""

    def __init__(self, base_ring):
        self.base = base_ring

    @property
    def zero(self):
        return UPoly(self.base, ())

    @property
    def one(self):
        return UPoly(self.base, (self.base.one,))

    def is_zero(self, c):
        return c.is_zero

    def scalar_mul(self, c, n):
        return UPoly(self.base, tuple(self.base.scalar_mul(x, n) for x in c.coeffs))

    def exact_div(self, a, b):
        return a.exact_div(b)

    def __eq__(self, other):
        return isinstance(other, PolyRing) and other.base == self.base

    def __hash__(self):
        return hash(("PolyRing", self.base))


class UPoly:
    """A dense polynomial in X, low-to-high coefficients over ``ring``."""

    __slots__ = ("ring", "coeffs")

    def __init__(self, ring, coeffs):
        cs = list(coeffs)
        while cs and ring.is_zero(cs[-1]):
            cs.pop()
        self.ring = ring
        self.coeffs = tuple(cs)

    @classmethod
    def zero(cls, ring):
        return cls(ring, ())

    @classmethod
    def one(cls, ring):
        return cls(ring, (ring.one,))

    @classmethod
    def gen(cls, ring):
        return cls(ring, (ring.zero, ring.one))

    @classmethod
    def constant(cls, ring, c):
        return cls(ring, (c,))

    @classmethod
    def monomial(cls, ring, c, n):
        return cls(ring, (ring.zero,) * n + (c,))

    @property
    def deg(self):
        return len(self.coeffs) - 1 if self.coeffs else NEG_INF

    @property
    def is_zero(self):
        return not self.coeffs

    @property
    def lc(self):
        if not self.coeffs:
            raise PreconditionError("leading coefficient of 0")
        return self.coeffs[-1]

    def coeff(self, i):
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else self.ring.zero

    def _check(self, other):
        if not isinstance(other, UPoly) or other.ring != self.ring:
            raise PreconditionError("mixed coefficient rings")

    def __add__(self, other):
        self._check(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return UPoly(self.ring, out)

    def __sub__(self, other):
        self._check(other)
        out = list(self.coeffs)
        out += [self.ring.zero] * max(0, len(other.coeffs) - len(out))
        for i, c in enumerate(other.coeffs):
            out[i] = out[i] - c
        return UPoly(self.ring, out)

    def __neg__(self):
        return UPoly(self.ring, tuple(self.ring.zero - c for c in self.coeffs))

    def __mul__(self, other):
        self._check(other)
        ring = self.ring
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return UPoly.zero(ring)
        out = [ring.zero] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ring.is_zero(ai):
                continue
            for j, bj in enumerate(b):
                out[i + j] = out[i + j] + ai * bj
        return UPoly(ring, out)

    def scale(self, c):
        return UPoly(self.ring, tuple(c * x for x in self.coeffs))

    def __pow__(self, n):
        if n < 0:
            raise PreconditionError("negative power")
        acc, base = UPoly.one(self.ring), self
        while n:
            if n & 1:
                acc = acc * base
            base = base * base
            n >>= 1
        return acc

    def __eq__(self, other):
        return (isinstance(other, UPoly) and self.ring == other.ring
                and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((self.ring, self.coeffs))

    def __bool__(self):
        return bool(self.coeffs)

    def __divmod__(self, other):
        """Division requiring an invertible leading coefficient (field ring
        or monic divisor over a domain)."""
        self._check(other)
        ring = self.ring
        if other.is_zero:
            raise ZeroDivisionError("division by the zero polynomial")
        n = other.deg
        if hasattr(ring, "inv"):
            inv_lc = ring.inv(other.lc)
        else:
            if other.lc != ring.one:
                raise PreconditionError("divisor must be monic over a domain")
            inv_lc = ring.one
        rem = list(self.coeffs)
        if len(rem) <= n:
            return UPoly.zero(ring), self
        quo = [ring.zero] * (len(rem) - n)
        for i in range(len(rem) - n - 1, -1, -1):
            c = rem[i + n] * inv_lc
            quo[i] = c
            if not ring.is_zero(c):
                for j, bj in enumerate(other.coeffs):
                    rem[i + j] = rem[i + j] - c * bj
        return UPoly(ring, quo), UPoly(ring, rem[:n])

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def exact_div(self, other):
        """Exact division in a domain ring; raises if not divisible."""
        self._check(other)
        ring = self.ring
        if other.is_zero:
            raise ZeroDivisionError("division by the zero polynomial")
        if self.is_zero:
            return self
        n = other.deg
        if self.deg < n:
            raise ContractViolationError("inexact polynomial division")
        rem = list(self.coeffs)
        quo = [ring.zero] * (len(rem) - n)
        for i in range(len(rem) - n - 1, -1, -1):
            c = ring.exact_div(rem[i + n], other.lc)
            quo[i] = c
            if not ring.is_zero(c):
                for j, bj in enumerate(other.coeffs):
                    rem[i + j] = rem[i + j] - c * bj
        if any(not ring.is_zero(c) for c in rem[:n]):
            raise ContractViolationError("inexact polynomial division")
        return UPoly(ring, quo)

    def map_coeffs(self, fn, new_ring):
        return UPoly(new_ring, tuple(fn(c) for c in self.coeffs))

    def evaluate(self, xi, zero, embed=lambda c: c):
        """Horner evaluation at xi; `zero` is the target algebra's zero."""
        acc = zero
        for c in reversed(self.coeffs):
            acc = acc * xi + embed(c)
        return acc

    def compose(self, other):
        """self(other(X)) by Horner."""
        self._check(other)
        acc = UPoly.zero(self.ring)
        for c in reversed(self.coeffs):
            acc = acc * other + UPoly.constant(self.ring, c)
        return acc

    def derivative(self):
        ring = self.ring
        out = [ring.scalar_mul(c, i) for i, c in enumerate(self.coeffs)][1:]
        return UPoly(ring, out)

    def deflate(self, p):
        """Write self = Q(X^p); returns Q, or None if not of that shape."""
        for i, c in enumerate(self.coeffs):
            if i % p and not self.ring.is_zero(c):
                return None
        return UPoly(self.ring, tuple(self.coeffs[::p]))

    def __repr__(self):
        if self.is_zero:
            return "UPoly(0)"
        parts = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if self.ring.is_zero(c):
                continue
            xs = "" if i == 0 else ("X" if i == 1 else f"X^{i}")
            parts.append(f"({c}){xs}" if xs else f"({c})")
        return "UPoly(" + " + ".join(parts) + ")"


def upoly_gcd(a, b):
    """Monic gcd over a field coefficient ring."""
    ring = a.ring
    while not b.is_zero:
        a, b = b, a % b
    if a.is_zero:
        return a
    return a.scale(ring.inv(a.lc))


def upoly_xgcd(a, b):
    ring = a.ring
    r0, r1 = a, b
    s0, s1 = UPoly.one(ring), UPoly.zero(ring)
    t0, t1 = UPoly.zero(ring), UPoly.one(ring)
    while not r1.is_zero:
        q, r = divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if r0.is_zero:
        return r0, s0, t0
    c = ring.inv(r0.lc)
    return r0.scale(c), s0.scale(c), t0.scale(c)


def upoly_pow_mod(a, n, m):
    acc = UPoly.one(a.ring)
    base = a % m
    while n:
        if n & 1:
            acc = (acc * base) % m
        base = (base * base) % m
        n >>= 1
    return acc


# -- A[X] specifics ----------------------------------------------------------

def content(f):
    """Monic gcd in A of the coefficients of f in A[X]."""
    if f.is_zero:
        return APoly.zero(f.ring.field)
    return many_gcd([c for c in f.coeffs if not c.is_zero])

def primitive_part(f):
    """Divide out the content and force the leading coefficient of the
    leading coefficient to 1 (resolves the F_q* unit ambiguity)."""
    if f.is_zero:
        return f
    cont = content(f)
    ring = f.ring
    if cont.deg > 0:
        f = UPoly(ring, tuple(ring.exact_div(c, cont) for c in f.coeffs))
    unit = f.lc.lc
    if unit != ring.field.one:
        inv = ring.field.inv(unit)
        f = UPoly(ring, tuple(c.scale(inv) for c in f.coeffs))
    return f


def a_to_k(f, kring=None):
    """Map A[X] -> k[X]."""
    kr = kring or KRing(f.ring.field)
    return f.map_coeffs(RationalFn, kr)


def k_to_a(f, aring=None):
    """Clear denominators: returns (g in A[X], mu in A) with g = mu * f."""
    from .fqarith import lcm as a_lcm
    field = f.ring.field
    ar = aring or ARing(field)
    mu = APoly.one(field)
    for c in f.coeffs:
        if not c.is_zero:
            mu = a_lcm(mu, c.den)
    out = []
    for c in f.coeffs:
        scaled = c.num * (mu // c.den) if not c.is_zero else APoly.zero(field)
        out.append(scaled)
    return UPoly(ar, out), mu


def x_upoly(field, text):
    """Parse the X-extended grammar into a UPoly over ARing."""
    from .fqarith import parse_x_coeffs
    return UPoly(ARing(field), parse_x_coeffs(field, text))


# -- Sylvester / Bareiss -----------------------------------------------------

def bareiss_det(rows, ring):
    """Fraction-free determinant over an integral domain.

    Pivoting is deterministic (first nonzero entry scanning down), so
    repeated runs produce identical output.
    """
    m = len(rows)
    if m == 0:
        return ring.one
    mat = [list(r) for r in rows]
    sign = 1
    prev = ring.one
    for k in range(m - 1):
        pivot_row = None
        for i in range(k, m):
            if not ring.is_zero(mat[i][k]):
                pivot_row = i
                break
        if pivot_row is None:
            return ring.zero
        if pivot_row != k:
            mat[k], mat[pivot_row] = mat[pivot_row], mat[k]
            sign = -sign
        pk = mat[k][k]
        for i in range(k + 1, m):
            for j in range(k + 1, m):
                num = pk * mat[i][j] - mat[i][k] * mat[k][j]
                mat[i][j] = ring.exact_div(num, prev)
            mat[i][k] = ring.zero
        prev = pk
    det = mat[m - 1][m - 1]
    if sign < 0:
        det = ring.zero - det
    return det


def sylvester_resultant(f, g, ceiling=4096):
    """Res_X(f, g) over the shared coefficient ring, by Bareiss.

    The Sylvester dimension deg f + deg g must not exceed the ceiling.
    """
    ring = f.ring
    if f.ring != g.ring:
        raise PreconditionError("mixed rings in resultant")
    if f.is_zero or g.is_zero:
        return ring.zero
    m, n = f.deg, g.deg
    if m == 0:
        return _ring_pow(ring, f.coeffs[0], n)
    if n == 0:
        return _ring_pow(ring, g.coeffs[0], m)
    if m + n > ceiling:
        raise ResourceCeilingError(
            f"Sylvester dimension {m + n} exceeds ceiling {ceiling}")
    size = m + n
    rows = []
    fc = list(reversed(f.coeffs))  # high-to-low
    gc = list(reversed(g.coeffs))
    for i in range(n):
        rows.append([ring.zero] * i + fc + [ring.zero] * (size - m - 1 - i))
    for i in range(m):
        rows.append([ring.zero] * i + gc + [ring.zero] * (size - n - 1 - i))
    return bareiss_det(rows, ring)


def _ring_pow(ring, c, n):
    acc = ring.one
    for _ in range(n):
        acc = acc * c
    return acc


# -- quotient algebra k[X]/(P) ------------------------------------------------

class QuotientAlgebra:
    """k[X]/(P) for a monic P over k; an F_q-algebra with the q-power map.

    Usable both as an Ore coefficient algebra and as a phi_apply target.
    """

    def __init__(self, p_monic):
        if not isinstance(p_monic.ring, KRing):
            raise PreconditionError("quotient modulus must live over k")
        if p_monic.deg < 1 or p_monic.lc != p_monic.ring.one:
            raise PreconditionError("quotient modulus must be monic nonconstant")
        self.modulus = p_monic
        self.kring = p_monic.ring
        self.field = p_monic.ring.field
        self.q = self.field.q

    def __eq__(self, other):
        return isinstance(other, QuotientAlgebra) and other.modulus == self.modulus

    def __hash__(self):
        return hash(("quot", self.modulus))

    @property
    def zero(self):
        return QuotientElem(self, UPoly.zero(self.kring))

    @property
    def one(self):
        return QuotientElem(self, UPoly.one(self.kring))

    def generator(self):
        """The class of X."""
        return QuotientElem(self, UPoly.gen(self.kring) % self.modulus)

    def embed(self, upoly_over_k):
        return QuotientElem(self, upoly_over_k % self.modulus)

    def embed_rational(self, r):
        return QuotientElem(self, UPoly.constant(self.kring, r))

    def embed_scalar(self, c):
        return self.embed_rational(
            RationalFn(APoly.constant(self.field, c)))

    def qpow(self, x):
        return x ** self.q

    def is_zero(self, x):
        return x.value.is_zero


class QuotientElem:
    __slots__ = ("parent", "value")

    def __init__(self, parent, value):
        self.parent = parent
        self.value = value

    @property
    def is_zero(self):
        return self.value.is_zero

    def _check(self, other):
        if not isinstance(other, QuotientElem) or other.parent != self.parent:
            raise PreconditionError("mixed quotient algebras")

    def __add__(self, other):
        self._check(other)
        return QuotientElem(self.parent, self.value + other.value)

    def __sub__(self, other):
        self._check(other)
        return QuotientElem(self.parent, self.value - other.value)

    def __neg__(self):
        return QuotientElem(self.parent, -self.value)

    def __mul__(self, other):
        self._check(other)
        return QuotientElem(self.parent,
                            (self.value * other.value) % self.parent.modulus)

    def __pow__(self, n):
        if n < 0:
            raise PreconditionError("negative power in quotient algebra")
        return QuotientElem(self.parent,
                            upoly_pow_mod(self.value, n, self.parent.modulus))

    def inv(self):
        g, s, _ = upoly_xgcd(self.value, self.parent.modulus)
        if g.deg != 0:
            raise ZeroDivisionError("non-invertible element of k[X]/(P)")
        return QuotientElem(self.parent,
                            (s.scale(g.coeffs[0].inv())) % self.parent.modulus)

    def coordinates(self, d):
        """Coefficients in the power basis 1, x, ..., x^(d-1)."""
        return [self.value.coeff(i) for i in range(d)]

    def __eq__(self, other):
        return (isinstance(other, QuotientElem) and self.parent == other.parent
                and self.value == other.value)

    def __hash__(self):
        return hash((self.parent, self.value))

    def __repr__(self):
        return f"QuotientElem({self.value!r})"
