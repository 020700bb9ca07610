"""Divided derivatives, the constructive Siegel solver, the auxiliary
polynomial pipeline, and the supersingular vanishing check.

The Siegel systems built here keep every entry as a coordinate vector over
k in the power basis 1, x, ..., x^(D-1) of k[X]/(P_x).  A row's height is
the affine height of its flattened k-rational coordinate row; writing each
unknown as delta + 1 coefficients over F_q with delta the floor of
D * sigma / (N - M D) then makes the homogeneous F_q-system strictly wider
than tall, so a nonzero kernel vector always exists and realizes the small
solution constructively.  The solver verifies the residual exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .errors import ContractViolationError, PreconditionError
from .fqarith import APoly, RationalFn, gcd as a_gcd, lcm as a_lcm, valuation
from .heights import image_charpoly, module_height, poly_height
from .supersingular import is_supersingular
from .xpoly import (
    ARing,
    KRing,
    UPoly,
    a_to_k,
    k_to_a,
    primitive_part,
    sylvester_resultant,
)


def lucas_binomial(n, h, p):
    """C(n, h) mod p by Lucas's digit product."""
    r = 1
    while n or h:
        n, a = divmod(n, p)
        h, b = divmod(h, p)
        if b > a:
            return 0
        r = r * comb(a, b) % p
    return r


def divided_derivative(f, h):
    """The coefficient of H^h in f(X+H): C(n,h) X^(n-h) on monomials."""
    if h < 0:
        raise PreconditionError("derivative order must be >= 0")
    if h == 0:
        return f
    ring = f.ring
    p = ring.field.p
    out = []
    for n in range(h, len(f.coeffs)):
        out.append(ring.scalar_mul(f.coeffs[n], lucas_binomial(n, h, p)))
    return UPoly(ring, out)


def _as_kx(f):
    return a_to_k(f) if isinstance(f.ring, ARing) else f


def multiplicity_at(f, x):
    """Largest m with P_x^m dividing f in k[X] (the factor multiplicity)."""
    if f.is_zero:
        raise PreconditionError("multiplicity of the zero polynomial")
    fk = _as_kx(f)
    p_monic = x.monic_minpoly()
    m = 0
    while True:
        q, r = divmod(fk, p_monic)
        if not r.is_zero:
            return m
        fk = q
        m += 1


def vanishing_order_at(f, x):
    """Number of consecutive vanishing divided derivatives of f at x,
    i.e. the multiplicity of x as a root of f in k-bar."""
    if f.is_zero:
        raise PreconditionError("vanishing order of the zero polynomial")
    fk = _as_kx(f)
    p_monic = x.monic_minpoly()
    order = 0
    while order <= fk.deg:
        if not (divided_derivative(fk, order) % p_monic).is_zero:
            return order
        order += 1
    raise ContractViolationError("nonzero polynomial vanished beyond its degree")


# -- Siegel systems ------------------------------------------------------------

def _clear_row(flat, field):
    """Clear a flat row of k-entries to a coprime A-row including the affine
    1-slot; returns (cleared entries, affine row height)."""
    mu = APoly.one(field)
    for c in flat:
        if not c.is_zero:
            mu = a_lcm(mu, c.den)
    ints = [c.num * (mu // c.den) if not c.is_zero else APoly.zero(field)
            for c in flat]
    g = mu
    for a in ints:
        if not a.is_zero:
            g = a_gcd(g, a)
        if g.deg == 0:
            break
    if g.deg > 0:
        mu = mu // g
        ints = [a // g if not a.is_zero else a for a in ints]
    height = Fraction(max([mu.deg] + [a.deg for a in ints if not a.is_zero]))
    return ints, height


@dataclass(frozen=True)
class SiegelSystem:
    """M homogeneous equations over k(x) in N_unk unknowns from A.

    Entries are coordinate vectors of length D over k; row heights are the
    affine heights of the flattened coordinate rows and sigma is their sum.
    """

    m_rows: int
    n_unknowns: int
    degree: int
    entries: tuple  # entries[j][i] = tuple of D RationalFn coordinates
    row_heights: tuple
    sigma: Fraction
    field: object

    def __post_init__(self):
        if self.n_unknowns <= self.m_rows * self.degree:
            raise PreconditionError(
                "Siegel hypothesis violated: need N_unk > M * D")

    def degree_bound(self):
        """The small-solution degree bound D * sigma / (N - M D); solver
        output stays within its floor."""
        return Fraction(self.degree) * self.sigma / \
            (self.n_unknowns - self.m_rows * self.degree)


def make_siegel_system(rows, degree, field):
    """Build a SiegelSystem from rows of coordinate-vector entries."""
    heights = []
    for row in rows:
        flat = [c for entry in row for c in entry]
        _, h = _clear_row(flat, field)
        heights.append(h)
    return SiegelSystem(
        m_rows=len(rows),
        n_unknowns=len(rows[0]) if rows else 0,
        degree=degree,
        entries=tuple(tuple(tuple(entry) for entry in row) for row in rows),
        row_heights=tuple(heights),
        sigma=sum(heights, Fraction(0)),
        field=field,
    ) if rows else SiegelSystem(0, 0, degree, (), (), Fraction(0), field)


def _fq_kernel_vector(rows, n_cols, field):
    """First kernel basis vector (by free-column order) of a homogeneous
    F_q-linear system, or None if the kernel is trivial."""
    mat = [list(r) for r in rows]
    pivots = []  # (row, col)
    pivot_row = 0
    for col in range(n_cols):
        found = None
        for r in range(pivot_row, len(mat)):
            if not field.is_zero(mat[r][col]):
                found = r
                break
        if found is None:
            continue
        mat[pivot_row], mat[found] = mat[found], mat[pivot_row]
        inv = field.inv(mat[pivot_row][col])
        mat[pivot_row] = [field.mul(inv, v) for v in mat[pivot_row]]
        for r in range(len(mat)):
            if r != pivot_row and not field.is_zero(mat[r][col]):
                factor = mat[r][col]
                mat[r] = [field.sub(v, field.mul(factor, w))
                          for v, w in zip(mat[r], mat[pivot_row])]
        pivots.append((pivot_row, col))
        pivot_row += 1
        if pivot_row == len(mat):
            break
    pivot_cols = {c for _, c in pivots}
    free = next((c for c in range(n_cols) if c not in pivot_cols), None)
    if free is None:
        return None
    vec = [field.zero] * n_cols
    vec[free] = field.one
    for r, c in pivots:
        vec[c] = field.neg(mat[r][free])
    return vec


def siegel_solve(system):
    """A nonzero solution over A with deg_T(x_i) <= floor(degree bound).

    Each unknown is written as delta + 1 coefficients over F_q; clearing
    row denominators turns every coordinate equation into T-coefficient
    conditions, and the dimension count leaves a nonzero kernel.  An empty
    kernel would falsify the construction and aborts loudly.
    """
    field = system.field
    n_unk = system.n_unknowns
    if n_unk == 0:
        raise PreconditionError("no unknowns to solve for")
    bound = system.degree_bound()
    if bound < 0:
        raise PreconditionError("negative Siegel degree bound")
    delta = int(bound)  # floor: bound >= 0
    width = delta + 1
    cond_rows = []
    for j in range(system.m_rows):
        row = system.entries[j]
        flat = [c for entry in row for c in entry]
        cleared, _ = _clear_row(flat, field)
        # regroup per unknown: cleared coordinates of entry i
        d = system.degree
        max_deg = max([0] + [a.deg for a in cleared if not a.is_zero])
        for m in range(d):
            coords = [cleared[i * d + m] for i in range(n_unk)]
            if all(a.is_zero for a in coords):
                continue
            for w in range(delta + max_deg + 1):
                cond = [field.zero] * (n_unk * width)
                nonzero = False
                for i, a in enumerate(coords):
                    if a.is_zero:
                        continue
                    for s in range(width):
                        c = a.coeff(w - s)
                        if not field.is_zero(c):
                            cond[i * width + s] = c
                            nonzero = True
                if nonzero:
                    cond_rows.append(cond)
    vec = _fq_kernel_vector(cond_rows, n_unk * width, field)
    if vec is None:
        raise ContractViolationError(
            "empty Siegel kernel: the dimension count failed")
    solution = []
    for i in range(n_unk):
        solution.append(APoly(field, vec[i * width:(i + 1) * width]))
    if all(a.is_zero for a in solution):
        raise ContractViolationError("Siegel solver produced the zero vector")
    _verify_siegel(system, solution)
    for a in solution:
        assert a.is_zero or a.deg <= delta
    return tuple(solution)


def _verify_siegel(system, solution):
    field = system.field
    zero = RationalFn.zero(field)
    for j in range(system.m_rows):
        for m in range(system.degree):
            acc = zero
            for i in range(system.n_unknowns):
                coord = system.entries[j][i][m]
                if coord.is_zero or solution[i].is_zero:
                    continue
                acc = acc + RationalFn(solution[i]) * coord
            if not acc.is_zero:
                raise ContractViolationError("Siegel residual is nonzero")


# -- the auxiliary polynomial ---------------------------------------------------

def ilog(base, n):
    """floor(log_base n) for n >= 1 by integer comparisons."""
    if n < 1:
        raise PreconditionError("ilog of a nonpositive number")
    m = 0
    power = base
    while power <= n:
        m += 1
        power *= base
    return m


def phi_n_as_xpoly(phi, n_poly):
    """Phi(N)(X) expanded in k[X]: sum of c_i X^(q^i)."""
    ore = phi.phi_image(n_poly)
    kring = KRing(phi.field)
    q = phi.field.q
    deg = q ** ore.deg_tau if not ore.is_zero else 0
    coeffs = [RationalFn.zero(phi.field)] * (deg + 1)
    for i, c in enumerate(ore.coeffs):
        coeffs[q ** i] = c
    return UPoly(kring, coeffs)


def build_aux_system(phi, x, big_l, t, n_poly, stride=1):
    """The t-row Siegel system imposing d^(h*stride)(X^i Phi(N)(X)^j)(x) = 0.

    Unknown order is (i, j) with i outer, i.e. column index i * L + j.
    """
    d_deg = x.degree
    if big_l < 1 or t < 0 or stride < 1:
        raise PreconditionError("need L >= 1, t >= 0, stride >= 1")
    if big_l * big_l <= t * d_deg:
        raise PreconditionError(
            f"auxiliary hypothesis violated: L^2 = {big_l * big_l} "
            f"<= t*D = {t * d_deg}")
    if n_poly.is_zero:
        raise PreconditionError("N must be nonzero")
    q = phi.field.q
    if q ** (phi.rank * n_poly.deg) <= big_l - 1:
        raise PreconditionError("deg N too small: need q^(d deg N) > L - 1")
    phin = phi_n_as_xpoly(phi, n_poly)
    p_monic = x.monic_minpoly()
    kring = phin.ring
    gen = UPoly.gen(kring)
    # basis polynomials B_ij = X^i * Phi(N)(X)^j, j-powers precomputed
    powers = [UPoly.one(kring)]
    for _ in range(1, big_l):
        powers.append((powers[-1] * phin))
    rows = []
    for h in range(t):
        order = h * stride
        row = []
        for i in range(big_l):
            x_power = gen ** i
            for j in range(big_l):
                b = x_power * powers[j]
                entry = divided_derivative(b, order) % p_monic
                row.append(tuple(entry.coeff(m) for m in range(d_deg)))
        rows.append(row)
    if not rows:
        # t = 0: no conditions, still expose the unknown count
        return SiegelSystem(0, big_l * big_l, d_deg, (), (), Fraction(0),
                            phi.field)
    return make_siegel_system(rows, d_deg, phi.field)


@dataclass(frozen=True)
class AuxPolynomial:
    """The nonzero G(X, Y) with G_N = G(X, Phi(N)(X)) vanishing at x."""

    big_l: int
    t: int
    stride: int
    n_poly: APoly
    p: tuple           # p[i][j] in A
    g_n: UPoly         # expanded G_N in k[X]
    g_n_primitive: UPoly  # primitive cleared form in A[X]
    system: SiegelSystem
    multiplicity: int  # factor multiplicity of P_x in G_N

    @property
    def coefficient_degree(self):
        return max((c.deg for row in self.p for c in row if not c.is_zero),
                   default=0)


def build_aux_polynomial(phi, x, big_l, t, stride=1):
    """Run the full pipeline: choose deg N, solve the Siegel system, expand
    G_N and verify the vanishing order and all degree bounds."""
    if big_l < 1 or t < 0:
        raise PreconditionError("need L >= 1 and t >= 0")
    d = phi.rank
    field = phi.field
    deg_n = ilog(field.q, big_l) // d + 1
    n_poly = APoly.gen(field) ** deg_n
    q = field.q
    assert big_l - 1 < q ** (d * deg_n) <= q ** d * big_l
    system = build_aux_system(phi, x, big_l, t, n_poly, stride=stride)
    if t == 0:
        coeffs = [APoly.one(field)] + [APoly.zero(field)] * (big_l * big_l - 1)
    else:
        coeffs = list(siegel_solve(system))
    p_matrix = tuple(tuple(coeffs[i * big_l + j] for j in range(big_l))
                     for i in range(big_l))
    phin = phi_n_as_xpoly(phi, n_poly)
    kring = phin.ring
    gen = UPoly.gen(kring)
    powers = [UPoly.one(kring)]
    for _ in range(1, big_l):
        powers.append(powers[-1] * phin)
    g_n = UPoly.zero(kring)
    for i in range(big_l):
        for j in range(big_l):
            if p_matrix[i][j].is_zero:
                continue
            term = (gen ** i) * powers[j]
            g_n = g_n + term.scale(RationalFn(p_matrix[i][j]))
    if g_n.is_zero:
        raise ContractViolationError(
            "G_N collapsed to zero despite deg N exceeding the threshold")
    assert g_n.deg <= 2 * (big_l - 1) * q ** (d * deg_n) or big_l == 1
    assert g_n.deg < 2 * q ** d * big_l * big_l
    g_n_a, _ = k_to_a(g_n)
    g_n_primitive = primitive_part(g_n_a)
    if t > 0:
        mult = multiplicity_at(g_n, x)
        # the vanishing conditions give root multiplicity t * stride; the
        # factor multiplicity carries 1/D_pi of it
        if mult * x.d_pi < t * stride:
            raise ContractViolationError(
                f"vanishing order {mult * x.d_pi} below target {t * stride}")
        delta = int(system.degree_bound())
        for row in p_matrix:
            for c in row:
                assert c.is_zero or c.deg <= delta
    else:
        mult = 0
    return AuxPolynomial(
        big_l=big_l, t=t, stride=stride, n_poly=n_poly, p=p_matrix,
        g_n=g_n, g_n_primitive=g_n_primitive, system=system,
        multiplicity=mult)


def row_height_bound(big_l, h_x, h_phi_n_x, deg_n, h_phi, h_order):
    """The predicted row-height bound L[h(x) + h(Phi(N)(x))] + deg(N) h(Phi) h."""
    for v in (big_l, h_x, h_phi_n_x, deg_n, h_phi, h_order):
        if v < 0:
            raise PreconditionError("row-height bound inputs must be >= 0")
    return (Fraction(big_l) * (Fraction(h_x) + Fraction(h_phi_n_x))
            + Fraction(deg_n) * Fraction(h_phi) * Fraction(h_order))


def aux_row_height_bounds(aux, phi, x):
    """Predicted per-row height bounds for the system behind ``aux``."""
    h_x = poly_height(x.minpoly) / x.degree
    img = image_charpoly(x, phi, aux.n_poly)
    h_phi_n_x = poly_height(img) / x.degree
    h_phi = module_height(phi)
    bounds = []
    for h in range(aux.t):
        bounds.append(row_height_bound(aux.big_l, h_x, h_phi_n_x,
                                       aux.n_poly.deg, h_phi,
                                       h * aux.stride))
    return bounds


@dataclass(frozen=True)
class VanishingResult:
    zeta_is_zero: bool
    valuation: int | None
    required: int

    @property
    def claim_holds(self):
        return self.zeta_is_zero or self.required <= 0 or \
            (self.valuation is not None and self.valuation >= self.required)


def supersingular_vanishing_check(aux, h_prime, phi, l, x):
    """The l-adic valuation of the norm of d^(h')G_N at Phi(l)(x).

    Requires l supersingular for phi and x to be l-integral (its primitive
    minimal polynomial must have an l-unit leading coefficient).  When the
    norm is nonzero its valuation must reach t - h'; exact vanishing is
    reported separately.
    """
    if h_prime < 0:
        raise PreconditionError("derivative order must be >= 0")
    if not is_supersingular(phi, l):
        raise PreconditionError("l is not supersingular for this module")
    if valuation(x.minpoly.lc, l) != 0:
        raise PreconditionError(
            "x is not l-integral: leading coefficient vanishes mod l")
    required = aux.t - h_prime
    g = divided_derivative(aux.g_n, h_prime)
    if g.is_zero:
        return VanishingResult(True, None, required)
    phi_l = phi_n_as_xpoly(phi, l)
    w = g.compose(phi_l)
    if w.is_zero:
        return VanishingResult(True, None, required)
    w_a, mu = k_to_a(w)
    zeta = sylvester_resultant(x.minpoly, w_a)
    if zeta.is_zero:
        return VanishingResult(True, None, required)
    v = valuation(zeta, l) - x.degree * valuation(mu, l)
    result = VanishingResult(False, v, required)
    if required > 0 and v < required:
        raise ContractViolationError(
            f"supersingular vanishing failed: v_l = {v} < {required}")
    return result
