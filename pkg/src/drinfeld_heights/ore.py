"""Twisted polynomials tau^i with tau*c = c^q*tau, and Drinfeld modules.

An OrePoly stores dense tau-coefficients over a *coefficient algebra*: a
small adapter exposing zero/one, the q-power map, and an embedding of k.
The same evaluation code then serves k itself, residue fields A/(l), and
quotient algebras k[X]/(P).  Coefficient elements carry the actual ring
operations through their operators.
"""

from __future__ import annotations

from .errors import BadReductionError, PreconditionError
from .fqarith import (
    APoly,
    RationalFn,
    ResidueField,
    parse_apoly,
    render_apoly,
)


class CoefficientAlgebra:
    """Protocol: a commutative F_q-algebra with a q-power map.

    Concrete algebras provide ``zero``, ``one``, ``q``, ``qpow(x)``,
    ``embed_rational(r)`` (raising BadReductionError where undefined) and
    ``is_zero(x)``.  Elements implement +, -, * among themselves.
    """

    def embed_scalar(self, c):
        """Image of an F_q element (via an APoly constant)."""
        raise NotImplementedError


class KAlgebra(CoefficientAlgebra):
    """k itself, with the q-power map r -> r^q."""

    def __init__(self, field):
        self.field = field
        self.q = field.q

    @property
    def zero(self):
        return RationalFn.zero(self.field)

    @property
    def one(self):
        return RationalFn.one(self.field)

    def qpow(self, x):
        return x ** self.q

    def embed_rational(self, r):
        return r

    def embed_scalar(self, c):
        return RationalFn(APoly.constant(self.field, c))

    def is_zero(self, x):
        return x.is_zero

    def __eq__(self, other):
        return isinstance(other, KAlgebra) and other.field == self.field

    def __hash__(self):
        return hash(("K", self.field))


class ResidueAlgebra(CoefficientAlgebra):
    """A/(l) for a monic irreducible l."""

    def __init__(self, residue_field):
        if not isinstance(residue_field, ResidueField):
            residue_field = ResidueField(residue_field)
        self.rf = residue_field
        self.q = residue_field.q

    @property
    def zero(self):
        return self.rf.zero

    @property
    def one(self):
        return self.rf.one

    def qpow(self, x):
        return x ** self.q

    def embed_rational(self, r):
        return self.rf.embed_rational(r)

    def embed_scalar(self, c):
        return self.rf.embed(APoly.constant(self.rf.field, c))

    def is_zero(self, x):
        return x.is_zero

    def __eq__(self, other):
        return isinstance(other, ResidueAlgebra) and other.rf == self.rf

    def __hash__(self):
        return hash(("residue-algebra", self.rf))


class OrePoly:
    """A twisted polynomial sum(coeffs[i] * tau^i) over a coefficient algebra."""

    __slots__ = ("algebra", "coeffs")

    def __init__(self, algebra, coeffs):
        cs = list(coeffs)
        while cs and algebra.is_zero(cs[-1]):
            cs.pop()
        self.algebra = algebra
        self.coeffs = tuple(cs)

    @classmethod
    def zero(cls, algebra):
        return cls(algebra, ())

    @classmethod
    def one(cls, algebra):
        return cls(algebra, (algebra.one,))

    @classmethod
    def tau(cls, algebra):
        return cls(algebra, (algebra.zero, algebra.one))

    @classmethod
    def constant(cls, algebra, c):
        return cls(algebra, (c,))

    @property
    def deg_tau(self):
        from .fqarith import NEG_INF
        return len(self.coeffs) - 1 if self.coeffs else NEG_INF

    @property
    def is_zero(self):
        return not self.coeffs

    def coeff(self, i):
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else self.algebra.zero

    def _check(self, other):
        if not isinstance(other, OrePoly) or other.algebra != self.algebra:
            raise PreconditionError("mixed coefficient algebras in Ore arithmetic")

    def __add__(self, other):
        self._check(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return OrePoly(self.algebra, out)

    def __sub__(self, other):
        self._check(other)
        alg = self.algebra
        out = list(self.coeffs) + [alg.zero] * max(0, len(other.coeffs) - len(self.coeffs))
        for i, c in enumerate(other.coeffs):
            out[i] = out[i] - c
        return OrePoly(alg, out)

    def __mul__(self, other):
        """Ore product: tau^i * c = c^(q^i) * tau^i."""
        self._check(other)
        alg = self.algebra
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return OrePoly.zero(alg)
        out = [alg.zero] * (len(a) + len(b) - 1)
        twisted = list(b)  # b under q^i, advanced once per i even when a_i = 0
        for i, ai in enumerate(a):
            if i > 0:
                twisted = [alg.qpow(c) for c in twisted]
            if alg.is_zero(ai):
                continue
            for j, bj in enumerate(twisted):
                out[i + j] = out[i + j] + ai * bj
        return OrePoly(alg, out)

    def scale(self, c):
        """Left-multiply by a constant of the algebra."""
        return OrePoly(self.algebra, tuple(c * x for x in self.coeffs))

    def __eq__(self, other):
        return (isinstance(other, OrePoly) and self.algebra == other.algebra
                and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((self.algebra, self.coeffs))

    def __repr__(self):
        if self.is_zero:
            return "OrePoly(0)"
        parts = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if self.algebra.is_zero(c):
                continue
            tau = "" if i == 0 else ("t" if i == 1 else f"t^{i}")
            parts.append(f"({c}){tau}" if tau else f"({c})")
        return "OrePoly(" + " + ".join(parts) + ")"

    def apply(self, xi, qpow=None):
        """Evaluate the additive polynomial: sum coeffs[i] * xi^(q^i).

        ``xi`` lives in any algebra whose elements multiply with the
        coefficients; ``qpow`` overrides the q-power map on xi (defaults
        to the coefficient algebra's own).
        """
        if qpow is None:
            qpow = self.algebra.qpow
        acc = None
        power = xi
        for i, c in enumerate(self.coeffs):
            if i > 0:
                power = qpow(power)
            if self.algebra.is_zero(c):
                continue
            term = c * power
            acc = term if acc is None else acc + term
        if acc is None:
            return self.algebra.zero * xi
        return acc


def ore_mul(f, g):
    return f * g


class DrinfeldModule:
    """A rank-d Drinfeld module: Phi(T) = T + a_1 tau + ... + a_d tau^d.

    Coefficients live in k; a_0 is forced to T and a_d must be nonzero.
    """

    def __init__(self, field, coeffs):
        coeffs = tuple(coeffs)
        if len(coeffs) < 2:
            raise PreconditionError("rank must be >= 1")
        t = RationalFn(APoly.gen(field))
        if coeffs[0] != t:
            raise PreconditionError("a_0 must equal T")
        if coeffs[-1].is_zero:
            raise PreconditionError("a_d must be nonzero")
        self.field = field
        self.coeffs = coeffs
        self.rank = len(coeffs) - 1
        self._k = KAlgebra(field)

    @classmethod
    def carlitz(cls, field):
        """Phi(T) = T + tau."""
        return cls(field, (RationalFn(APoly.gen(field)), RationalFn.one(field)))

    @classmethod
    def from_apoly_coeffs(cls, field, apolys):
        return cls(field, tuple(RationalFn(a) for a in apolys))

    def __eq__(self, other):
        return (isinstance(other, DrinfeldModule) and self.field == other.field
                and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((self.field, self.coeffs))

    def __repr__(self):
        return f"DrinfeldModule(q={self.field.q}, coeffs={[str(c) for c in self.coeffs]})"

    def describe(self):
        return "Phi(T) = " + " + ".join(
            f"({c})" + ("" if i == 0 else ("t" if i == 1 else f"t^{i}"))
            for i, c in enumerate(self.coeffs) if not c.is_zero)

    def phi_t(self, algebra=None):
        """Phi(T) as an OrePoly over the given algebra (default k)."""
        alg = algebra or self._k
        return OrePoly(alg, tuple(alg.embed_rational(c) for c in self.coeffs))

    def phi_image(self, a, algebra=None):
        """The image Phi(a) for a in A, by Horner in the Ore ring."""
        alg = algebra or self._k
        if a.is_zero:
            return OrePoly.zero(alg)
        phi_t = self.phi_t(alg)
        image = OrePoly.zero(alg)
        for c in reversed(a.coeffs):
            image = image * phi_t
            if not a.field.is_zero(c):
                image = image + OrePoly.constant(alg, alg.embed_scalar(c))
        return image

    def phi_apply(self, a, xi, algebra=None, qpow=None):
        """Phi(a)(xi) = sum c_i xi^(q^i) in the target algebra."""
        return self.phi_image(a, algebra).apply(xi, qpow=qpow)


def ore_reduce_mod(f, l):
    """Reduce an OrePoly over k coefficient-wise modulo a monic irreducible l.

    Every coefficient must be l-integral; otherwise BadReductionError.
    """
    if not isinstance(f.algebra, KAlgebra):
        raise PreconditionError("ore_reduce_mod expects an OrePoly over k")
    alg = ResidueAlgebra(ResidueField(l))
    try:
        return OrePoly(alg, tuple(alg.embed_rational(c) for c in f.coeffs))
    except BadReductionError as exc:
        raise BadReductionError(
            f"bad reduction at {render_apoly(l)}", place=l) from exc


# -- module spec files -------------------------------------------------------

def _load_toml(text):
    try:
        import tomllib
    except ModuleNotFoundError:
        import tomli as tomllib
    return tomllib.loads(text)


def parse_rational(field, text):
    """An element of k: either the polynomial grammar or 'num/den'."""
    if "/" in text:
        num_text, den_text = text.split("/", 1)
        return RationalFn(parse_apoly(field, num_text),
                          parse_apoly(field, den_text))
    return RationalFn(parse_apoly(field, text))


def field_from_config(cfg):
    from .fqarith import FiniteField
    q = cfg.get("q")
    if q is None:
        raise PreconditionError("module spec must give q")
    p = cfg.get("p")
    if p is None:
        # q = p^e has a unique prime p
        p = 2
        while p * p <= q and q % p != 0:
            p += 1 if p == 2 else 2
        if q % p != 0:
            p = q
    e = 0
    m = q
    while m > 1:
        if m % p != 0:
            raise PreconditionError(f"q = {q} is not a power of p = {p}")
        m //= p
        e += 1
    if e == 0:
        raise PreconditionError("q must be at least p")
    if e == 1:
        return FiniteField(p)
    modulus_text = cfg.get("field_modulus")
    if modulus_text is None:
        raise PreconditionError("field_modulus required for non-prime q")
    return FiniteField(p, e, modulus=tuple(modulus_text))


def load_module_config(cfg):
    """Build a DrinfeldModule from a parsed key/value mapping."""
    field = field_from_config(cfg)
    coeff_texts = cfg.get("coeffs")
    if not coeff_texts:
        raise PreconditionError("module spec must give coeffs = [a_0, ..., a_d]")
    coeffs = tuple(parse_rational(field, s) for s in coeff_texts)
    if coeffs[0] != RationalFn(APoly.gen(field)):
        raise PreconditionError("a_0 must be the polynomial T")
    return DrinfeldModule(field, coeffs)


def load_module_text(text):
    return load_module_config(_load_toml(text))


def load_module_file(path):
    with open(path, "r", encoding="utf-8") as fh:
        return load_module_text(fh.read())
