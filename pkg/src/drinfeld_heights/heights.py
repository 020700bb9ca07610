"""Exact Weil heights, canonical heights with certified error, torsion
certification, the separable/inseparable degree split, and Northcott
enumeration.

Heights are exact nonnegative Fractions.  A canonical-height estimate at
depth n is the height of the image of the point under T^n, rescaled by
q^(d n); its certified error is the module's height-gap bound divided by
the same factor, so the true canonical height always lies inside the
returned interval and successive intervals shrink by exactly q^d.

Points are taken over the base field k = F_q(T): the minimal polynomial is
a primitive element of A[X], unit-normalized so the leading coefficient of
its leading coefficient is 1.  Irreducibility over k[X] is assumed for
user-supplied minimal polynomials (it is *not* verified); a reducible input
yields the averaged height of its root cycle, which is exactly what the
functional-equation machinery needs for image points, and such derived
points are built through the non-strict path.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .errors import ContractViolationError, PreconditionError
from .fqarith import (
    APoly,
    RationalFn,
    lcm,
    many_gcd,
)
from .xpoly import (
    ARing,
    PolyRing,
    QuotientAlgebra,
    UPoly,
    a_to_k,
    primitive_part,
    sylvester_resultant,
    upoly_gcd,
    x_upoly,
)

DEFAULT_SYLVESTER_CEILING = 4096
DEFAULT_ENUM_CEILING = 1_000_000


# -- heights of vectors and polynomials --------------------------------------

def projective_height(coords):
    """Height of a k-rational projective point.

    Clears denominators to a coprime vector over A and returns the max of
    the T-degrees.  Invariant under scaling by k*.
    """
    coords = list(coords)
    nonzero = [c for c in coords if not c.is_zero]
    if not nonzero:
        raise PreconditionError("height of the zero vector")
    field = nonzero[0].field
    mu = APoly.one(field)
    for c in nonzero:
        mu = lcm(mu, c.den)
    ints = [c.num * (mu // c.den) for c in nonzero]
    g = many_gcd(ints)
    if g.deg > 0:
        ints = [a // g for a in ints]
    return Fraction(max(a.deg for a in ints))


def affine_height(coords):
    """Height of an affine k-rational vector: h([1 : x_1 : ... : x_n])."""
    coords = list(coords)
    field = coords[0].field
    return projective_height([RationalFn.one(field)] + coords)


def poly_height(f):
    """Height of a polynomial given by its primitive A[X] form: the max
    T-degree of the coefficient vector."""
    if f.is_zero:
        raise PreconditionError("height of the zero polynomial")
    return Fraction(max(max(0, c.deg) for c in f.coeffs if not c.is_zero))


def module_height(phi):
    """h(Phi) = h([1 : a_0 : ... : a_d]); always >= 1 since a_0 = T."""
    h = projective_height([RationalFn.one(phi.field)] + list(phi.coeffs))
    assert h >= 1
    return h


def gamma_bound(phi):
    """Upper bound 2(d+1)h(Phi) for sup |h - canonical h| over all points."""
    return Fraction(2 * (phi.rank + 1)) * module_height(phi)


# -- algebraic points ---------------------------------------------------------

class AlgebraicPoint:
    """A point of k-bar given by a primitive minimal polynomial over A.

    ``strict`` points additionally verify that the polynomial is squarefree
    after deflating purely inseparable layers; image points constructed by
    the height machinery skip that check since resultants may repeat roots.
    """

    def __init__(self, minpoly, strict=True):
        if not isinstance(minpoly.ring, ARing):
            raise PreconditionError("minimal polynomial must live in A[X]")
        if minpoly.deg < 1:
            raise PreconditionError("minimal polynomial must be nonconstant")
        minpoly = primitive_part(minpoly)
        self.minpoly = minpoly
        self.field = minpoly.ring.field
        self.degree = minpoly.deg
        self.d_sep, self.d_pi = inseparable_split(minpoly)
        if strict:
            deflated = minpoly
            p = self.field.p
            while deflated.derivative().is_zero:
                deflated = deflated.deflate(p)
            dk = a_to_k(deflated)
            if upoly_gcd(dk, dk.derivative()).deg != 0:
                raise PreconditionError(
                    "minimal polynomial is not squarefree after deflation")
        assert self.degree == self.d_sep * self.d_pi

    @classmethod
    def from_text(cls, field, text, strict=True):
        return cls(x_upoly(field, text), strict=strict)

    @classmethod
    def from_rational(cls, value):
        """The k-rational point x = value, minpoly den*X - num."""
        field = value.field
        ring = ARing(field)
        return cls(UPoly(ring, (-value.num, value.den)))

    def monic_minpoly(self):
        """The monic form over k, for quotient-algebra arithmetic."""
        mk = a_to_k(self.minpoly)
        return mk.scale(mk.lc.inv())

    def quotient_algebra(self):
        return QuotientAlgebra(self.monic_minpoly())

    def height(self):
        return point_height(self)

    def sort_key(self):
        return (self.degree,
                tuple(c.sort_key() for c in self.minpoly.coeffs))

    def __eq__(self, other):
        return (isinstance(other, AlgebraicPoint)
                and self.minpoly == other.minpoly)

    def __hash__(self):
        return hash(self.minpoly)

    def __repr__(self):
        return f"AlgebraicPoint({self.minpoly!r})"


def point_height(x):
    """h(x) = (max T-degree over the primitive coefficient vector) / D."""
    return poly_height(x.minpoly) / x.degree


def inseparable_split(minpoly):
    """(D_sep, D_pi): deflate X -> X^p while the X-derivative vanishes."""
    if minpoly.deg < 1:
        raise PreconditionError("constant polynomial has no degree split")
    p = minpoly.ring.field.p
    e = 0
    q_poly = minpoly
    while q_poly.derivative().is_zero:
        q_poly = q_poly.deflate(p)
        e += 1
    return q_poly.deg, p ** e


# -- image polynomials and canonical heights ----------------------------------

def image_charpoly(x, phi, a, ceiling=DEFAULT_SYLVESTER_CEILING):
    """The primitive polynomial in A[X] whose roots are Phi(a) applied to
    the roots of x's minimal polynomial (with multiplicity): the resultant
    Res_Y(P_x(Y), X - Phi(a)(Y)), normalized.

    Its height divided by deg P_x is the height of the image point.
    """
    if a.is_zero:
        raise PreconditionError("image under Phi(0)")
    field = x.field
    aring = ARing(field)
    xring = PolyRing(aring)
    ore = phi.phi_image(a)
    # clear denominators: mu * (X - Phi(a)(Y)) has A[X] coefficients
    mu = APoly.one(field)
    for c in ore.coeffs:
        if not c.is_zero:
            mu = lcm(mu, c.den)
    q = field.q
    deg_y = q ** ore.deg_tau
    g_coeffs = [xring.zero] * (deg_y + 1)
    g_coeffs[0] = UPoly(aring, (APoly.zero(field), mu))  # mu * X
    for i, c in enumerate(ore.coeffs):
        if c.is_zero:
            continue
        scaled = c.num * (mu // c.den)
        g_coeffs[q ** i] = UPoly.constant(aring, -scaled)
    g = UPoly(xring, g_coeffs)
    p_y = UPoly(xring, tuple(UPoly.constant(aring, c) for c in x.minpoly.coeffs))
    res = sylvester_resultant(p_y, g, ceiling=ceiling)
    if res.deg != x.degree:
        raise ContractViolationError("image characteristic polynomial degenerated")
    return primitive_part(res)


def image_point(x, phi, a, ceiling=DEFAULT_SYLVESTER_CEILING):
    """The point Phi(a)(x) as a (non-strict) AlgebraicPoint."""
    return AlgebraicPoint(image_charpoly(x, phi, a, ceiling=ceiling), strict=False)


@dataclass(frozen=True)
class HeightInterval:
    """A canonical-height estimate with certified error at iteration depth n."""

    estimate: Fraction
    error: Fraction
    depth: int

    @property
    def lower(self):
        return max(Fraction(0), self.estimate - self.error)

    @property
    def upper(self):
        return self.estimate + self.error

    def contains(self, v):
        return self.lower <= v <= self.upper

    def intersects(self, other):
        return self.lower <= other.upper and other.lower <= self.upper

    def scaled(self, factor):
        return HeightInterval(self.estimate * factor, self.error * factor,
                              self.depth)


def canonical_height(x, phi, depth, ceiling=DEFAULT_SYLVESTER_CEILING):
    """Estimate h(Phi(T^depth)(x)) / q^(d*depth) with error gamma/q^(d*depth)."""
    if depth < 0:
        raise PreconditionError("depth must be >= 0")
    field = x.field
    scale = Fraction(field.q ** (phi.rank * depth))
    a = APoly.gen(field) ** depth  # T^depth; T^0 = 1
    img = image_charpoly(x, phi, a, ceiling=ceiling)
    estimate = poly_height(img) / x.degree / scale
    return HeightInterval(estimate, gamma_bound(phi) / scale, depth)


# -- local certificates ---------------------------------------------------------

def supersingular_integrality_floor(x, phi, l, ceiling=DEFAULT_SYLVESTER_CEILING):
    """A certified canonical-height floor from a pole at a supersingular prime.

    For primitive P_x the sum over places above l of max(0, -w(x)) equals
    v_l of the leading coefficient, and at a supersingular l the image under
    Phi(l) multiplies every negative valuation by exactly q^(d deg l), which
    survives the limit: the canonical height is at least
    deg(l) * v_l(lc P_x) / D.  Returns that Fraction, or None when the
    leading coefficient is an l-unit (no pole above l).  The valuation
    multiplication is re-verified on the image characteristic polynomial.
    """
    from .fqarith import valuation
    from .supersingular import is_supersingular
    if not is_supersingular(phi, l):
        raise PreconditionError("l is not supersingular for this module")
    v_lc = valuation(x.minpoly.lc, l)
    if v_lc == 0:
        return None
    img = image_charpoly(x, phi, l, ceiling=ceiling)
    expected = phi.field.q ** (phi.rank * l.deg) * v_lc
    if valuation(img.lc, l) != expected:
        raise ContractViolationError(
            "image valuation did not multiply by q^(d deg l)")
    return Fraction(l.deg * v_lc, x.degree)


# -- torsion ------------------------------------------------------------------

@dataclass(frozen=True)
class TorsionStatus:
    kind: str  # "torsion" | "non-torsion" | "unknown"
    witness: Optional[APoly] = None
    interval: Optional[HeightInterval] = None


def _monic_and_general_candidates(field, degree):
    """All a in A of exact T-degree ``degree`` (nonzero), lexicographically
    by coefficient vector; degree 0 yields the nonzero constants."""
    q = field.q
    lead_range = range(1, q)
    if degree == 0:
        for c in lead_range:
            yield APoly(field, (field.element_from_index(c),))
        return
    for lead in lead_range:
        for idx in range(q ** degree):
            coeffs = []
            m = idx
            for _ in range(degree):
                m, r = divmod(m, q)
                coeffs.append(field.element_from_index(r))
            coeffs.append(field.element_from_index(lead))
            yield APoly(field, coeffs)


def torsion_status(x, phi, search_deg, depth,
                   ceiling=DEFAULT_SYLVESTER_CEILING):
    """Search for a torsion witness of degree <= search_deg; failing that,
    certify non-torsion from the canonical-height interval at ``depth``.

    The witness returned is the smallest-degree, lexicographically-first
    nonzero a with Phi(a)(x) = 0 in k[X]/(P_x).
    """
    if search_deg < 1:
        raise PreconditionError("search bound must be >= 1")
    if depth < 0:
        raise PreconditionError("depth must be >= 0")
    algebra = x.quotient_algebra()
    gen = algebra.generator()
    for degree in range(0, search_deg + 1):
        candidates = sorted(_monic_and_general_candidates(x.field, degree),
                            key=APoly.sort_key)
        for a in candidates:
            if phi.phi_apply(a, gen, algebra=algebra).is_zero:
                return TorsionStatus("torsion", witness=a)
    interval = canonical_height(x, phi, depth, ceiling=ceiling)
    if interval.estimate - interval.error > 0:
        return TorsionStatus("non-torsion", interval=interval)
    return TorsionStatus("unknown", interval=interval)


# -- Northcott enumeration -----------------------------------------------------

def _vectors_of_degree_at_most(field, deg_bound, length):
    """All length-``length`` coefficient vectors over A with entries of
    T-degree <= deg_bound, in lexicographic order."""
    q = field.q
    per = q ** (deg_bound + 1)
    total = per ** length

    def decode(idx):
        out = []
        for _ in range(length):
            idx, cell = divmod(idx, per)
            coeffs = []
            m = cell
            for _ in range(deg_bound + 1):
                m, r = divmod(m, q)
                coeffs.append(field.element_from_index(r))
            out.append(APoly(field, coeffs))
        return out

    for idx in range(total):
        yield decode(idx)


def _divides_in_kx(g, f):
    gk, fk = a_to_k(g), a_to_k(f)
    return (fk % gk).is_zero


def _irreducible_in_akx(f, divisor_pool):
    for g in divisor_pool:
        if g.deg > f.deg // 2:
            break
        if _divides_in_kx(g, f):
            return False
    return True


def northcott_enumerate(field, d_max, chi, ceiling=DEFAULT_ENUM_CEILING):
    """All points of degree <= d_max and height <= chi, deduplicated by
    primitive minimal polynomial, in a deterministic order.

    The count is guaranteed (and asserted) to be at most q^(5 d_max^2 chi).
    """
    from .errors import ResourceCeilingError
    if d_max < 1 or chi < 1:
        raise PreconditionError("d_max and chi must be >= 1")
    q = field.q
    budget = q ** ((d_max * chi + 1) * (d_max + 1))
    if budget > ceiling:
        raise ResourceCeilingError(
            f"enumeration of {budget} candidates exceeds ceiling {ceiling}")
    points = []
    # divisor pool for trial division, shared across target degrees:
    # primitive normalized polynomials of X-degree <= d_max // 2 with
    # coefficient degrees up to the largest bound in play (Gauss's lemma
    # keeps factor coefficient degrees within the dividend's bound)
    pool = []
    max_coeff_deg = d_max * chi
    for fdeg in range(1, d_max // 2 + 1):
        for vec in _vectors_of_degree_at_most(field, max_coeff_deg, fdeg + 1):
            cand = UPoly(ARing(field), vec)
            if cand.deg != fdeg:
                continue
            if cand != primitive_part(cand):
                continue
            pool.append(cand)
    pool.sort(key=lambda g: (g.deg, tuple(c.sort_key() for c in g.coeffs)))

    for deg_x in range(1, d_max + 1):
        coeff_bound = deg_x * chi
        for vec in _vectors_of_degree_at_most(field, coeff_bound, deg_x + 1):
            cand = UPoly(ARing(field), vec)
            if cand.deg != deg_x:
                continue
            if cand != primitive_part(cand):
                continue  # counts each point once: content 1, unit normalized
            if deg_x > 1 and not _irreducible_in_akx(cand, pool):
                continue
            points.append(AlgebraicPoint(cand))
    points.sort(key=AlgebraicPoint.sort_key)
    assert len(points) <= q ** (5 * d_max * d_max * chi)
    return points
