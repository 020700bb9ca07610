"""Exact arithmetic in F_q, the polynomial ring A = F_q[T], and k = F_q(T).

Field elements are plain ints in {0, ..., p-1} when q is prime, and tuples
of e such ints (coefficients of 1, u, ..., u^(e-1)) when q = p^e with e > 1.
Polynomials in T are dense coefficient tuples, low-to-high, with no trailing
zero; the zero polynomial has the empty tuple and its degree is the NEG_INF
sentinel, never an integer, so max-of-degrees formulas stay total.

All values are immutable after construction and safe to share across
workers.  Text parsing follows the grammar: terms ``c*T^k``, ``T^k``, ``T``,
``c`` joined by ``+``, with ``c`` a decimal in [0, p), plus parenthesised
u-polynomials such as ``(u+1)*T^2`` when e > 1.  Malformed input is rejected
with the offending position.
"""

from __future__ import annotations

import functools
from fractions import Fraction

from .errors import ParseError, PreconditionError


class _NegInf:
    """Degree of the zero polynomial; compares below every integer."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __lt__(self, other):
        return self is not other

    def __le__(self, other):
        return True

    def __gt__(self, other):
        return False

    def __ge__(self, other):
        return self is other

    def __eq__(self, other):
        return self is other

    def __hash__(self):
        return hash("NEG_INF")

    def __add__(self, other):
        return self

    __radd__ = __add__

    def __repr__(self):
        return "-inf"


NEG_INF = _NegInf()


def _is_prime(n):
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def _fp_trim(c):
    while c and c[-1] == 0:
        c.pop()
    return c


def _fp_mul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _fp_trim(out)


def _fp_mod(a, m, p):
    # m monic
    a = list(a)
    n = len(m) - 1
    while len(a) > n:
        c = a[-1]
        if c:
            for j in range(n):
                a[len(a) - 1 - n + j] = (a[len(a) - 1 - n + j] - c * m[j]) % p
        a.pop()
    return _fp_trim(a)


def _fp_gcd(a, b, p):
    a, b = list(a), list(b)
    while b:
        # reduce a mod b after forcing b monic
        inv = pow(b[-1], p - 2, p)
        bm = [(x * inv) % p for x in b]
        a = _fp_mod(a, bm, p)
        a, b = b, a
    return a


def _fp_is_irreducible(m, p):
    """Rabin test for a monic polynomial over F_p (used for field moduli)."""
    n = len(m) - 1
    if n < 1:
        return False
    x = [0, 1]
    # frob[i] = T^(p^i) mod m
    frob = [x]
    cur = x
    for _ in range(n):
        nxt = cur
        acc = [1]
        base = cur
        k = p
        while k:
            if k & 1:
                acc = _fp_mod(_fp_mul(acc, base, p), m, p)
            base = _fp_mod(_fp_mul(base, base, p), m, p)
            k >>= 1
        cur = acc
        frob.append(cur)
    if _fp_trim([(a - b) % p for a, b in
                 zip(frob[n] + [0] * 2, x + [0] * len(frob[n]))]):
        return False
    for d in _prime_divisors(n):
        g = [(a - b) % p for a, b in
             zip(frob[n // d] + [0] * 2, x + [0] * len(frob[n // d]))]
        if len(_fp_gcd(m, _fp_trim(g), p)) != 1:
            return False
    return True


def _prime_divisors(n):
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def mobius(n):
    mu = 1
    d = 2
    while d * d <= n:
        if n % d == 0:
            n //= d
            if n % d == 0:
                return 0
            mu = -mu
        d += 1
    if n > 1:
        mu = -mu
    return mu


class FiniteField:
    """The coefficient field F_q with q = p^e.

    For e > 1 a monic irreducible modulus over F_p must be supplied as a
    low-to-high int tuple of length e + 1; elements are then tuples of e
    ints.  Prime fields use bare ints.
    """

    def __init__(self, p, e=1, modulus=None):
        if not _is_prime(p):
            raise PreconditionError(f"p = {p} is not prime")
        if e < 1:
            raise PreconditionError("e must be >= 1")
        if e == 1:
            if modulus is not None:
                raise PreconditionError("modulus only applies when e > 1")
        else:
            if modulus is None:
                raise PreconditionError("modulus required when e > 1")
            modulus = tuple(int(c) % p for c in modulus)
            if len(modulus) != e + 1 or modulus[-1] != 1:
                raise PreconditionError("modulus must be monic of degree e")
            if not _fp_is_irreducible(list(modulus), p):
                raise PreconditionError("modulus is not irreducible over F_p")
        self.p = p
        self.e = e
        self.q = p ** e
        self.modulus = modulus

    def __eq__(self, other):
        return (isinstance(other, FiniteField)
                and (self.p, self.e, self.modulus)
                == (other.p, other.e, other.modulus))

    def __hash__(self):
        return hash((self.p, self.e, self.modulus))

    def __repr__(self):
        return f"FiniteField({self.p})" if self.e == 1 else \
            f"FiniteField({self.p}, {self.e})"

    # -- element operations ------------------------------------------------

    @property
    def zero(self):
        return 0 if self.e == 1 else (0,) * self.e

    @property
    def one(self):
        return 1 if self.e == 1 else (1,) + (0,) * (self.e - 1)

    def scalar(self, n):
        """Image of the integer n under the prime-field embedding."""
        v = n % self.p
        return v if self.e == 1 else (v,) + (0,) * (self.e - 1)

    def add(self, a, b):
        if self.e == 1:
            return (a + b) % self.p
        return tuple((x + y) % self.p for x, y in zip(a, b))

    def sub(self, a, b):
        if self.e == 1:
            return (a - b) % self.p
        return tuple((x - y) % self.p for x, y in zip(a, b))

    def neg(self, a):
        if self.e == 1:
            return (-a) % self.p
        return tuple((-x) % self.p for x in a)

    def mul(self, a, b):
        if self.e == 1:
            return (a * b) % self.p
        prod = _fp_mod(_fp_mul(list(a), list(b), self.p),
                       list(self.modulus), self.p)
        return tuple(prod + [0] * (self.e - len(prod)))

    def inv(self, a):
        if self.is_zero(a):
            raise ZeroDivisionError("inverse of 0 in F_q")
        if self.e == 1:
            return pow(a, self.p - 2, self.p)
        return self.pow(a, self.q - 2)

    def pow(self, a, n):
        if n < 0:
            return self.pow(self.inv(a), -n)
        acc, base = self.one, a
        while n:
            if n & 1:
                acc = self.mul(acc, base)
            base = self.mul(base, base)
            n >>= 1
        return acc

    def is_zero(self, a):
        return a == self.zero

    def elements(self):
        """All field elements in index order (deterministic)."""
        return [self.element_from_index(i) for i in range(self.q)]

    def element_from_index(self, i):
        if self.e == 1:
            return i
        digits = []
        for _ in range(self.e):
            i, r = divmod(i, self.p)
            digits.append(r)
        return tuple(digits)

    def element_index(self, a):
        if self.e == 1:
            return a
        i = 0
        for d in reversed(a):
            i = i * self.p + d
        return i

    def element_str(self, a):
        if self.e == 1:
            return str(a)
        terms = []
        for i in range(self.e - 1, -1, -1):
            c = a[i]
            if c == 0:
                continue
            if i == 0:
                terms.append(str(c))
            elif i == 1:
                terms.append("u" if c == 1 else f"{c}*u")
            else:
                terms.append(f"u^{i}" if c == 1 else f"{c}*u^{i}")
        return "+".join(terms) if terms else "0"


class APoly:
    """An element of A = F_q[T]: dense coefficients, low-to-high."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field, coeffs):
        cs = list(coeffs)
        while cs and field.is_zero(cs[-1]):
            cs.pop()
        self.field = field
        self.coeffs = tuple(cs)

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, field):
        return cls(field, ())

    @classmethod
    def one(cls, field):
        return cls(field, (field.one,))

    @classmethod
    def gen(cls, field):
        """The generator T."""
        return cls(field, (field.zero, field.one))

    @classmethod
    def constant(cls, field, c):
        return cls(field, (c,))

    @classmethod
    def from_int_coeffs(cls, field, ints):
        return cls(field, tuple(field.scalar(n) for n in ints))

    # -- structure ---------------------------------------------------------

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

    @property
    def is_monic(self):
        return bool(self.coeffs) and self.coeffs[-1] == self.field.one

    @property
    def is_constant(self):
        return len(self.coeffs) <= 1

    def coeff(self, i):
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else self.field.zero

    def sort_key(self):
        """Lexicographic key on the coefficient vector (degree first)."""
        f = self.field
        return (len(self.coeffs),) + tuple(f.element_index(c) for c in self.coeffs)

    # -- ring operations ---------------------------------------------------

    def _check(self, other):
        if not isinstance(other, APoly) or other.field != self.field:
            raise PreconditionError("mixed coefficient fields")

    def __add__(self, other):
        self._check(other)
        f = self.field
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = f.add(out[i], c)
        return APoly(f, out)

    def __sub__(self, other):
        self._check(other)
        f = self.field
        out = list(self.coeffs) + [f.zero] * max(0, len(other.coeffs) - len(self.coeffs))
        for i, c in enumerate(other.coeffs):
            out[i] = f.sub(out[i], c)
        return APoly(f, out)

    def __neg__(self):
        f = self.field
        return APoly(f, tuple(f.neg(c) for c in self.coeffs))

    def __mul__(self, other):
        self._check(other)
        f = self.field
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return APoly.zero(f)
        out = [f.zero] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if f.is_zero(ai):
                continue
            for j, bj in enumerate(b):
                out[i + j] = f.add(out[i + j], f.mul(ai, bj))
        return APoly(f, out)

    def scale(self, c):
        """Multiply by a field element."""
        f = self.field
        return APoly(f, tuple(f.mul(c, x) for x in self.coeffs))

    def shift(self, n):
        """Multiply by T^n."""
        if self.is_zero:
            return self
        return APoly(self.field, (self.field.zero,) * n + self.coeffs)

    def __pow__(self, n):
        if n < 0:
            raise PreconditionError("negative power of a polynomial")
        acc, base = APoly.one(self.field), self
        while n:
            if n & 1:
                acc = acc * base
            base = base * base
            n >>= 1
        return acc

    def __divmod__(self, other):
        self._check(other)
        if other.is_zero:
            raise ZeroDivisionError("division by the zero polynomial")
        f = self.field
        n = other.deg
        inv_lc = f.inv(other.lc)
        rem = list(self.coeffs)
        if len(rem) <= n:
            return APoly.zero(f), self
        quo = [f.zero] * (len(rem) - n)
        for i in range(len(rem) - n - 1, -1, -1):
            c = f.mul(rem[i + n], inv_lc)
            quo[i] = c
            if not f.is_zero(c):
                for j, bj in enumerate(other.coeffs):
                    rem[i + j] = f.sub(rem[i + j], f.mul(c, bj))
        return APoly(f, quo), APoly(f, rem[:n])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __eq__(self, other):
        return (isinstance(other, APoly) and self.field == other.field
                and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((self.field, self.coeffs))

    def __bool__(self):
        return bool(self.coeffs)

    def monic(self):
        if self.is_zero or self.is_monic:
            return self
        return self.scale(self.field.inv(self.lc))

    def evaluate(self, x):
        """Evaluate at a field element by Horner."""
        f = self.field
        acc = f.zero
        for c in reversed(self.coeffs):
            acc = f.add(f.mul(acc, x), c)
        return acc

    def __str__(self):
        return render_apoly(self)

    def __repr__(self):
        return f"APoly({render_apoly(self)!r})"


def gcd(a, b):
    """Monic gcd in A."""
    while not b.is_zero:
        a, b = b, a % b
    return a.monic()


def xgcd(a, b):
    """Extended gcd: returns (g, s, t) with g = s*a + t*b, g monic."""
    f = a.field
    r0, r1 = a, b
    s0, s1 = APoly.one(f), APoly.zero(f)
    t0, t1 = APoly.zero(f), APoly.one(f)
    while not r1.is_zero:
        q, r = divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if r0.is_zero:
        return r0, s0, t0
    c = f.inv(r0.lc)
    return r0.scale(c), s0.scale(c), t0.scale(c)


def lcm(a, b):
    if a.is_zero or b.is_zero:
        return APoly.zero(a.field)
    return ((a * b) // gcd(a, b)).monic()


def pow_mod(a, n, m):
    """a^n mod m with n a nonnegative int."""
    acc = APoly.one(a.field)
    base = a % m
    while n:
        if n & 1:
            acc = (acc * base) % m
        base = (base * base) % m
        n >>= 1
    return acc


def many_gcd(polys):
    f = polys[0].field
    g = APoly.zero(f)
    for p in polys:
        g = gcd(g, p) if not g.is_zero else p
        if g.deg == 0:
            break
    return g.monic() if not g.is_zero else g


# -- irreducibility and enumeration ----------------------------------------

def is_irreducible(f):
    """Rabin irreducibility test over F_q; unit factors are ignored."""
    if f.is_zero:
        raise PreconditionError("irreducibility of the zero polynomial")
    f = f.monic()
    n = f.deg
    if n == 0:
        return False
    if n == 1:
        return True
    field = f.field
    q = field.q
    t = APoly.gen(field)
    # frob[i] = T^(q^i) mod f
    cur = t % f
    frob = {0: cur}
    for i in range(1, n + 1):
        cur = pow_mod(cur, q, f)
        frob[i] = cur
    if frob[n] != t % f:
        return False
    for d in _prime_divisors(n):
        if gcd(frob[n // d] - t, f).deg != 0:
            return False
    return True


def count_irreducibles(q, n):
    """Number of monic irreducibles of degree n over F_q (Moebius formula)."""
    if n < 1:
        raise PreconditionError("degree must be >= 1")
    total = 0
    for d in range(1, n + 1):
        if n % d == 0:
            total += mobius(n // d) * q ** d
    assert total % n == 0
    return total // n


def enumerate_irreducibles(field, n):
    """All monic irreducibles of degree n, lexicographic on coefficients."""
    if n < 1:
        raise PreconditionError("degree must be >= 1")
    out = []
    q = field.q
    for idx in range(q ** n):
        coeffs = []
        m = idx
        for _ in range(n):
            m, r = divmod(m, q)
            coeffs.append(field.element_from_index(r))
        coeffs.append(field.one)
        cand = APoly(field, coeffs)
        if is_irreducible(cand):
            out.append(cand)
    out.sort(key=APoly.sort_key)
    assert len(out) == count_irreducibles(q, n)
    return out


def valuation(a, l):
    """v_l(a) for a nonzero a in A and l monic irreducible."""
    if a.is_zero:
        raise PreconditionError("valuation of 0")
    v = 0
    while True:
        quo, rem = divmod(a, l)
        if not rem.is_zero:
            return v
        a = quo
        v += 1


class RationalFn:
    """An element of k = F_q(T): num/den with den monic and gcd(num, den) = 1."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        if den is None:
            den = APoly.one(num.field)
        if den.is_zero:
            raise ZeroDivisionError("zero denominator")
        if num.is_zero:
            den = APoly.one(num.field)
        else:
            g = gcd(num, den)
            if g.deg > 0:
                num, den = num // g, den // g
            if not den.is_monic:
                c = num.field.inv(den.lc)
                num, den = num.scale(c), den.scale(c)
        self.num = num
        self.den = den

    @classmethod
    def zero(cls, field):
        return cls(APoly.zero(field))

    @classmethod
    def one(cls, field):
        return cls(APoly.one(field))

    @classmethod
    def from_apoly(cls, a):
        return cls(a)

    @property
    def field(self):
        return self.num.field

    @property
    def is_zero(self):
        return self.num.is_zero

    @property
    def is_polynomial(self):
        return self.den.deg == 0

    def __add__(self, other):
        return RationalFn(self.num * other.den + other.num * self.den,
                          self.den * other.den)

    def __sub__(self, other):
        return RationalFn(self.num * other.den - other.num * self.den,
                          self.den * other.den)

    def __neg__(self):
        return RationalFn(-self.num, self.den)

    def __mul__(self, other):
        return RationalFn(self.num * other.num, self.den * other.den)

    def __truediv__(self, other):
        if other.is_zero:
            raise ZeroDivisionError("division by zero in k")
        return RationalFn(self.num * other.den, self.den * other.num)

    def inv(self):
        if self.is_zero:
            raise ZeroDivisionError("inverse of 0 in k")
        return RationalFn(self.den, self.num)

    def __pow__(self, n):
        if n < 0:
            return self.inv() ** (-n)
        return RationalFn(self.num ** n, self.den ** n)

    def __eq__(self, other):
        return (isinstance(other, RationalFn)
                and self.num == other.num and self.den == other.den)

    def __hash__(self):
        return hash((self.num, self.den))

    def __bool__(self):
        return not self.is_zero

    def valuation_at(self, l):
        """v_l, weighted by multiplicity only (not by deg l)."""
        if self.is_zero:
            raise PreconditionError("valuation of 0")
        return valuation(self.num, l) - valuation(self.den, l)

    def is_integral_at(self, l):
        return valuation(self.den, l) == 0

    def is_unit_at(self, l):
        return (not self.is_zero and valuation(self.den, l) == 0
                and valuation(self.num, l) == 0)

    def deg_infinity(self):
        """-v_infinity = deg num - deg den (NEG_INF for 0)."""
        if self.is_zero:
            return NEG_INF
        return self.num.deg - self.den.deg

    def __str__(self):
        if self.is_polynomial:
            return render_apoly(self.num)
        return f"({render_apoly(self.num)})/({render_apoly(self.den)})"

    def __repr__(self):
        return f"RationalFn({str(self)!r})"


class ResidueField:
    """The residue field A/(l) for l monic irreducible."""

    def __init__(self, l):
        if not l.is_monic or not is_irreducible(l):
            raise PreconditionError("modulus must be monic irreducible")
        self.l = l
        self.field = l.field
        self.q = self.field.q
        self.size = self.q ** l.deg

    def __eq__(self, other):
        return isinstance(other, ResidueField) and self.l == other.l

    def __hash__(self):
        return hash(("residue", self.l))

    @property
    def zero(self):
        return ResidueElem(self, APoly.zero(self.field))

    @property
    def one(self):
        return ResidueElem(self, APoly.one(self.field))

    def embed(self, a):
        """Reduce an element of A."""
        return ResidueElem(self, a % self.l)

    def embed_rational(self, r):
        """Reduce an element of k; fails on non-l-integral input."""
        from .errors import BadReductionError
        if valuation(r.den, self.l) != 0:
            raise BadReductionError(
                f"bad reduction at {render_apoly(self.l)}", place=self.l)
        den = self.embed(r.den)
        return self.embed(r.num) * den.inv()


class ResidueElem:
    """An element of A/(l), stored as the reduced representative."""

    __slots__ = ("parent", "value")

    def __init__(self, parent, value):
        self.parent = parent
        self.value = value

    def _check(self, other):
        if not isinstance(other, ResidueElem) or other.parent != self.parent:
            raise PreconditionError("mixed residue fields")

    @property
    def is_zero(self):
        return self.value.is_zero

    def __add__(self, other):
        self._check(other)
        return ResidueElem(self.parent, (self.value + other.value) % self.parent.l)

    def __sub__(self, other):
        self._check(other)
        return ResidueElem(self.parent, (self.value - other.value) % self.parent.l)

    def __neg__(self):
        return ResidueElem(self.parent, (-self.value) % self.parent.l)

    def __mul__(self, other):
        self._check(other)
        return ResidueElem(self.parent, (self.value * other.value) % self.parent.l)

    def inv(self):
        if self.is_zero:
            raise ZeroDivisionError("inverse of 0 in A/(l)")
        g, s, _ = xgcd(self.value, self.parent.l)
        assert g.deg == 0
        return ResidueElem(self.parent, s.scale(self.parent.field.inv(g.coeffs[0])) % self.parent.l)

    def __truediv__(self, other):
        return self * other.inv()

    def __pow__(self, n):
        if n < 0:
            return self.inv() ** (-n)
        return ResidueElem(self.parent, pow_mod(self.value, n, self.parent.l))

    def qpow(self):
        """The q-power Frobenius."""
        return self ** self.parent.q

    def __eq__(self, other):
        return (isinstance(other, ResidueElem) and self.parent == other.parent
                and self.value == other.value)

    def __hash__(self):
        return hash((self.parent, self.value))

    def __bool__(self):
        return not self.is_zero

    def __repr__(self):
        return f"ResidueElem({render_apoly(self.value)!r} mod {render_apoly(self.parent.l)!r})"


# -- text rendering and parsing ---------------------------------------------

def render_apoly(a, var="T"):
    if a.is_zero:
        return "0"
    field = a.field
    terms = []
    for i in range(len(a.coeffs) - 1, -1, -1):
        c = a.coeffs[i]
        if field.is_zero(c):
            continue
        cs = field.element_str(c)
        need_parens = field.e > 1 and ("+" in cs or "*" in cs)
        if need_parens:
            cs = f"({cs})"
        if i == 0:
            terms.append(cs)
        else:
            head = "" if c == field.one else f"{cs}*"
            terms.append(f"{head}{var}" if i == 1 else f"{head}{var}^{i}")
    return "+".join(terms)


class _Tokenizer:
    def __init__(self, text):
        self.text = text
        self.pos = 0

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self):
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def take(self):
        c = self.peek()
        self.pos += 1
        return c

    def fail(self, msg):
        raise ParseError(msg, text=self.text, position=self.pos)

    def read_int(self):
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == start:
            self.fail("expected a decimal integer")
        return int(self.text[start:self.pos])

    def read_exponent(self):
        if self.peek() == "^":
            self.take()
            return self.read_int()
        return 1


def _parse_u_poly(tok, field):
    """Parse the inside of a parenthesised u-polynomial; returns an element."""
    if field.e == 1:
        tok.fail("u-coefficients require an extension field (e > 1)")
    coeffs = [0] * field.e
    while True:
        c = 1
        upow = 0
        ch = tok.peek()
        if ch.isdigit():
            c = tok.read_int()
            if not 0 <= c < field.p:
                tok.fail(f"coefficient must lie in [0, {field.p})")
            if tok.peek() == "*":
                tok.take()
                if tok.peek() != "u":
                    tok.fail("expected 'u'")
                tok.take()
                upow = tok.read_exponent()
        elif ch == "u":
            tok.take()
            upow = tok.read_exponent()
        else:
            tok.fail("expected a u-term")
        if upow >= field.e:
            tok.fail("u-exponent exceeds field degree")
        coeffs[upow] = (coeffs[upow] + c) % field.p
        if tok.peek() == "+":
            tok.take()
            continue
        break
    return tuple(coeffs)


def _parse_term(tok, field, allow_x):
    """One monomial: returns (field element, T-exponent, X-exponent)."""
    coef = field.one
    t_exp = None
    x_exp = None
    seen_scalar = False
    while True:
        ch = tok.peek()
        if ch.isdigit():
            if seen_scalar:
                tok.fail("repeated numeric coefficient in a term")
            seen_scalar = True
            c = tok.read_int()
            if not 0 <= c < field.p:
                tok.fail(f"coefficient must lie in [0, {field.p})")
            coef = field.mul(coef, field.scalar(c))
        elif ch == "(":
            if seen_scalar:
                tok.fail("repeated coefficient in a term")
            seen_scalar = True
            tok.take()
            coef = field.mul(coef, _parse_u_poly(tok, field))
            if tok.peek() != ")":
                tok.fail("expected ')'")
            tok.take()
        elif ch == "u":
            if seen_scalar:
                tok.fail("repeated coefficient in a term")
            seen_scalar = True
            tok.take()
            upow = tok.read_exponent()
            if field.e == 1:
                tok.fail("u-coefficients require an extension field (e > 1)")
            if upow >= field.e:
                tok.fail("u-exponent exceeds field degree")
            mono = [0] * field.e
            mono[upow] = 1
            coef = field.mul(coef, tuple(mono))
        elif ch == "T":
            if t_exp is not None:
                tok.fail("repeated T factor in a term")
            tok.take()
            t_exp = tok.read_exponent()
        elif ch == "X":
            if not allow_x:
                tok.fail("variable X not allowed here")
            if x_exp is not None:
                tok.fail("repeated X factor in a term")
            tok.take()
            x_exp = tok.read_exponent()
        else:
            tok.fail("expected a term")
        if tok.peek() == "*":
            tok.take()
            continue
        break
    return coef, (t_exp or 0), (x_exp or 0)


def _parse_terms(field, text, allow_x):
    tok = _Tokenizer(text)
    if tok.peek() == "":
        tok.fail("empty input")
    terms = []
    while True:
        terms.append(_parse_term(tok, field, allow_x))
        if tok.peek() == "+":
            tok.take()
            continue
        break
    tok.skip_ws()
    if tok.pos != len(text):
        tok.fail("unexpected trailing input")
    return terms


def parse_apoly(field, text):
    """Parse an element of A = F_q[T]."""
    terms = _parse_terms(field, text, allow_x=False)
    degree = max(t for _, t, _ in terms)
    coeffs = [field.zero] * (degree + 1)
    for c, t, _ in terms:
        coeffs[t] = field.add(coeffs[t], c)
    return APoly(field, coeffs)


def parse_x_coeffs(field, text):
    """Parse a polynomial in X with A-coefficients; returns a list of APoly,
    low-to-high in X (trailing zero coefficients trimmed)."""
    terms = _parse_terms(field, text, allow_x=True)
    x_deg = max(x for _, _, x in terms)
    buckets = [dict() for _ in range(x_deg + 1)]
    for c, t, x in terms:
        buckets[x][t] = field.add(buckets[x].get(t, field.zero), c)
    out = []
    for bucket in buckets:
        if bucket:
            degree = max(bucket)
            coeffs = [bucket.get(i, field.zero) for i in range(degree + 1)]
            out.append(APoly(field, coeffs))
        else:
            out.append(APoly.zero(field))
    while out and out[-1].is_zero:
        out.pop()
    return out


# -- small conveniences shared by the higher layers -------------------------

@functools.lru_cache(maxsize=None)
def prime_field(p):
    return FiniteField(p)


def height_of_a_vector(vec):
    """max(0, max deg) for a vector of APoly that is already coprime/integral."""
    degs = [a.deg for a in vec if not a.is_zero]
    if not degs:
        raise PreconditionError("height of the zero vector")
    return Fraction(max(0, max(degs)))
