"""Independent-route oracles: every check here recomputes a quantity by a
second method that shares no code path with the primary implementation."""

import math
from fractions import Fraction

import pytest

from drinfeld_heights.fqarith import (
    APoly,
    FiniteField,
    RationalFn,
    enumerate_irreducibles,
    parse_apoly,
)
from drinfeld_heights.heights import (
    AlgebraicPoint,
    canonical_height,
    supersingular_integrality_floor,
)
from drinfeld_heights.errors import PreconditionError
from drinfeld_heights.lab import build_aux_system, divided_derivative
from drinfeld_heights.ore import DrinfeldModule, OrePoly, ore_reduce_mod
from drinfeld_heights.supersingular import is_supersingular
from drinfeld_heights.xpoly import UPoly

F2 = FiniteField(2)
F3 = FiniteField(3)


def poly(field, text):
    return parse_apoly(field, text)


def k_elem(field, num, den="1"):
    return RationalFn(parse_apoly(field, num), parse_apoly(field, den))


def rational_point(field, num, den):
    return AlgebraicPoint.from_rational(k_elem(field, num, den))


class TestCanonicalHeightOracle:
    """For k-rational points the image height can be computed directly in k,
    with no resultants: h(n/d) = max(deg n, deg d) for coprime n, d."""

    @staticmethod
    def k_height(value):
        if value.is_zero:
            return Fraction(0)
        return Fraction(max(value.num.deg, value.den.deg, 0))

    @pytest.mark.parametrize("num,den", [
        ("0", "1"), ("1", "1"), ("T", "1"), ("T+1", "1"),
        ("1", "T"), ("1", "T+1"), ("T", "T+1"), ("T+1", "T"),
        ("T^2+1", "T"),
    ])
    def test_degree_one_points_all_depths(self, num, den):
        phi = DrinfeldModule.carlitz(F2)
        x = rational_point(F2, num, den)
        value = k_elem(F2, num, den)
        for depth in range(4):
            iv = canonical_height(x, phi, depth)
            direct = phi.phi_apply(poly(F2, "T") ** depth, value)
            expected = self.k_height(direct) / Fraction(2 ** depth)
            assert iv.estimate == expected

    def test_q3_rank1(self):
        phi = DrinfeldModule.carlitz(F3)
        x = rational_point(F3, "1", "T")
        value = k_elem(F3, "1", "T")
        for depth in range(3):
            iv = canonical_height(x, phi, depth)
            direct = phi.phi_apply(poly(F3, "T") ** depth, value)
            assert iv.estimate == self.k_height(direct) / Fraction(3 ** depth)


class TestSupersingularDualRoute:
    """The residue-field Horner test must agree with reducing the full
    k-expansion coefficient-wise."""

    def modules(self):
        one = RationalFn.one(F2)
        t = RationalFn(APoly.gen(F2))
        yield DrinfeldModule.carlitz(F2)
        yield DrinfeldModule(F2, (t, one, one))
        yield DrinfeldModule(F2, (t, RationalFn.zero(F2), one))
        yield DrinfeldModule(F2, (t, RationalFn.zero(F2),
                                  RationalFn.zero(F2), one))  # rank 3

    def test_agreement_on_small_degrees(self):
        for phi in self.modules():
            for n in (1, 2):
                for l in enumerate_irreducibles(F2, n):
                    reduced = ore_reduce_mod(phi.phi_image(l), l)
                    alg = reduced.algebra
                    m = phi.rank * l.deg
                    expected = OrePoly(alg, (alg.zero,) * m + (alg.one,))
                    assert is_supersingular(phi, l) == (reduced == expected)

    def test_rank3_tau_cubed(self):
        t = RationalFn(APoly.gen(F2))
        zero = RationalFn.zero(F2)
        phi = DrinfeldModule(F2, (t, zero, zero, RationalFn.one(F2)))
        assert is_supersingular(phi, poly(F2, "T"))
        assert is_supersingular(phi, poly(F2, "T+1"))


class TestIndexSetOracle:
    """System entries recomputed through the binomial/multinomial expansion
    of (X+H)^i (Phi(N)(X) + Phi(N)(H))^j, summing over all index tuples
    (a, n_0..n_m) with a + sum n_s q^s = h."""

    @staticmethod
    def _n_vectors(target, weights):
        # all nonnegative integer vectors n with sum n_s * weights[s] = target
        if not weights:
            if target == 0:
                yield ()
            return
        w = weights[-1]
        for count in range(target // w + 1):
            for rest in TestIndexSetOracle._n_vectors(
                    target - count * w, weights[:-1]):
                yield rest + (count,)

    def _entry_by_index_sets(self, phi, x, n_poly, i, j, h):
        field = phi.field
        p = field.p
        algebra = x.quotient_algebra()
        gen = algebra.generator()
        ore = phi.phi_image(n_poly)
        a_tilde = [algebra.embed_rational(c) for c in ore.coeffs]
        m = len(a_tilde) - 1
        weights = [field.q ** s for s in range(m + 1)]
        # u = Phi(N)(x) evaluated in the quotient algebra
        u = algebra.zero
        power = gen
        for s, c in enumerate(a_tilde):
            if s > 0:
                power = power ** field.q
            u = u + c * power
        total = algebra.zero
        for a in range(0, min(i, h) + 1):
            rem = h - a
            for n_vec in self._n_vectors(rem, weights):
                b = sum(n_vec)
                if b > j:
                    continue
                scalar = math.comb(i, a) % p
                multinomial = math.factorial(j) // (
                    math.factorial(j - b)
                    * math.prod(math.factorial(n) for n in n_vec))
                scalar = scalar * (multinomial % p) % p
                if scalar == 0:
                    continue
                term = gen ** (i - a) * u ** (j - b)
                for s, n_s in enumerate(n_vec):
                    if n_s:
                        term = term * a_tilde[s] ** n_s
                term = algebra.embed_rational(RationalFn(
                    APoly.constant(field, field.scalar(scalar)))) * term
                total = total + term
        return total

    @pytest.mark.parametrize("x_text", ["X^2+X+T", "T*X+1"])
    def test_entries_match(self, x_text):
        phi = DrinfeldModule.carlitz(F2)
        x = AlgebraicPoint.from_text(F2, x_text)
        n_poly = poly(F2, "T^2")
        system = build_aux_system(phi, x, 3, 2, n_poly)
        algebra = x.quotient_algebra()
        for h in range(2):
            for i in range(3):
                for j in range(3):
                    got = system.entries[h][i * 3 + j]
                    oracle = self._entry_by_index_sets(phi, x, n_poly, i, j, h)
                    assert tuple(oracle.coordinates(x.degree)) == got, \
                        (x_text, h, i, j)

    def test_entries_match_q3(self):
        phi = DrinfeldModule.carlitz(F3)
        x = AlgebraicPoint.from_text(F3, "X^2+X+T")
        n_poly = poly(F3, "T")
        system = build_aux_system(phi, x, 2, 1, n_poly)
        for i in range(2):
            for j in range(2):
                got = system.entries[0][i * 2 + j]
                oracle = self._entry_by_index_sets(phi, x, n_poly, i, j, 0)
                assert tuple(oracle.coordinates(x.degree)) == got

    def test_higher_order_against_divided_derivative(self):
        # the index-set route must also match a raw divided derivative of
        # the expanded basis polynomial, away from the system builder
        phi = DrinfeldModule.carlitz(F2)
        x = AlgebraicPoint.from_text(F2, "X^2+X+T")
        n_poly = poly(F2, "T^2")
        from drinfeld_heights.lab import phi_n_as_xpoly
        phin = phi_n_as_xpoly(phi, n_poly)
        kring = phin.ring
        gen = UPoly.gen(kring)
        p_monic = x.monic_minpoly()
        for h in range(4):
            b = gen ** 2 * phin ** 2
            entry = divided_derivative(b, h) % p_monic
            oracle = self._entry_by_index_sets(phi, x, n_poly, 2, 2, h)
            assert oracle.value == entry


class TestResultantOracle:
    """Res(f, g) = lc(f)^deg(g) * product of g over the roots of f, checked
    on split polynomials with known roots in A."""

    @pytest.mark.parametrize("field", [F2, F3])
    def test_split_polynomials(self, field):
        import random as random_mod
        from drinfeld_heights.xpoly import ARing, sylvester_resultant
        rng = random_mod.Random(97)
        ring = ARing(field)
        x_gen = UPoly.gen(ring)
        for _ in range(50):
            roots = []
            f = UPoly.one(ring)
            for _ in range(rng.randrange(1, 4)):
                root = APoly(field, [field.element_from_index(
                    rng.randrange(field.q)) for _ in range(2)])
                roots.append(root)
                f = f * (x_gen - UPoly.constant(ring, root))
            g = UPoly(ring, [APoly(field, [field.element_from_index(
                rng.randrange(field.q)) for _ in range(2)])
                for _ in range(rng.randrange(1, 4))])
            if g.is_zero:
                continue
            res = sylvester_resultant(f, g)
            expected = APoly.one(field)
            for root in roots:
                value = APoly.zero(field)
                for c in reversed(g.coeffs):
                    value = value * root + c
                expected = expected * value
            assert res == expected

    def test_swap_antisymmetry_q3(self):
        from drinfeld_heights.xpoly import ARing, sylvester_resultant
        ring = ARing(F3)
        f = x_upoly_f3("X^2+T*X+1")
        g = x_upoly_f3("X^3+2*X+T")
        lhs = sylvester_resultant(f, g)
        rhs = sylvester_resultant(g, f)
        # (-1)^(deg f * deg g) = (-1)^6 = 1
        assert lhs == rhs


def x_upoly_f3(text):
    from drinfeld_heights.xpoly import x_upoly
    return x_upoly(F3, text)


class TestIntegralityFloor:
    def test_inverse_t(self):
        phi = DrinfeldModule.carlitz(F2)
        x = rational_point(F2, "1", "T")
        floor = supersingular_integrality_floor(x, phi, poly(F2, "T"))
        assert floor == 1
        # consistency with the certified interval at depth 4
        iv = canonical_height(x, phi, 4)
        assert floor <= iv.upper

    def test_degree_two_pole(self):
        phi = DrinfeldModule.carlitz(F2)
        x = AlgebraicPoint.from_text(F2, "T*X^2+X+1")
        floor = supersingular_integrality_floor(x, phi, poly(F2, "T"))
        assert floor == Fraction(1, 2)
        iv = canonical_height(x, phi, 3)
        assert floor <= iv.upper

    def test_integral_point_returns_none(self):
        phi = DrinfeldModule.carlitz(F2)
        x = AlgebraicPoint.from_text(F2, "X^2+X+T")
        assert supersingular_integrality_floor(x, phi, poly(F2, "T")) is None

    def test_requires_supersingular(self):
        one = RationalFn.one(F2)
        phi2 = DrinfeldModule(F2, (RationalFn(APoly.gen(F2)), one, one))
        x = rational_point(F2, "1", "T")
        with pytest.raises(PreconditionError):
            supersingular_integrality_floor(x, phi2, poly(F2, "T"))

    def test_double_pole(self):
        phi = DrinfeldModule.carlitz(F2)
        x = rational_point(F2, "1", "T^2")
        floor = supersingular_integrality_floor(x, phi, poly(F2, "T"))
        assert floor == 2

    def test_q3(self):
        phi = DrinfeldModule.carlitz(F3)
        x = rational_point(F3, "1", "T+1")
        floor = supersingular_integrality_floor(x, phi, poly(F3, "T+1"))
        assert floor == 1


class TestExtensionFieldPipeline:
    """F_4 exercises tuple-element linear algebra and the q = p^e paths."""

    def test_siegel_over_f4(self):
        from drinfeld_heights.lab import make_siegel_system, siegel_solve
        f4 = FiniteField(2, 2, modulus=(1, 1, 1))
        u = RationalFn(APoly.constant(f4, (0, 1)))
        t = RationalFn(APoly.gen(f4))
        rows = [[(RationalFn.one(f4),), (u,), (t,)]]
        system = make_siegel_system(rows, 1, f4)
        solution = siegel_solve(system)
        acc = RationalFn.zero(f4)
        for sol, coeff in zip(solution, (RationalFn.one(f4), u, t)):
            acc = acc + RationalFn(sol) * coeff
        assert acc.is_zero
        assert any(not a.is_zero for a in solution)

    def test_aux_polynomial_carlitz_f4(self):
        from drinfeld_heights.lab import build_aux_polynomial
        f4 = FiniteField(2, 2, modulus=(1, 1, 1))
        phi = DrinfeldModule.carlitz(f4)
        x = AlgebraicPoint.from_rational(
            RationalFn(APoly.one(f4), APoly.gen(f4)))
        aux = build_aux_polynomial(phi, x, 2, 1)
        assert not aux.g_n.is_zero
        assert aux.multiplicity >= 1

    def test_supersingular_carlitz_f4(self):
        f4 = FiniteField(2, 2, modulus=(1, 1, 1))
        phi = DrinfeldModule.carlitz(f4)
        for l in enumerate_irreducibles(f4, 1):
            assert is_supersingular(phi, l)


class TestOddCharacteristicPipeline:
    def test_aux_polynomial_q3(self):
        from drinfeld_heights.lab import build_aux_polynomial
        phi = DrinfeldModule.carlitz(F3)
        x = rational_point(F3, "1", "T")
        aux = build_aux_polynomial(phi, x, 2, 1)
        assert aux.n_poly == poly(F3, "T")
        assert not aux.g_n.is_zero
        assert aux.multiplicity >= 1

    def test_inseparable_stride_q3(self):
        from drinfeld_heights.lab import build_aux_polynomial, \
            vanishing_order_at
        phi = DrinfeldModule.carlitz(F3)
        x = AlgebraicPoint.from_text(F3, "X^3+T")  # D_pi = 3
        assert (x.d_sep, x.d_pi) == (1, 3)
        aux = build_aux_polynomial(phi, x, 4, 2, stride=3)
        assert vanishing_order_at(aux.g_n, x) >= 6
