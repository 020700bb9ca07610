import random
from fractions import Fraction

import pytest

from drinfeld_heights.errors import PreconditionError
from drinfeld_heights.fqarith import (
    APoly,
    FiniteField,
    RationalFn,
    parse_apoly,
)
from drinfeld_heights.heights import AlgebraicPoint
from drinfeld_heights.lab import (
    aux_row_height_bounds,
    build_aux_polynomial,
    build_aux_system,
    divided_derivative,
    lucas_binomial,
    multiplicity_at,
    phi_n_as_xpoly,
    row_height_bound,
    siegel_solve,
    make_siegel_system,
    supersingular_vanishing_check,
    vanishing_order_at,
)
from drinfeld_heights.ore import DrinfeldModule
from drinfeld_heights.xpoly import ARing, KRing, UPoly, a_to_k, x_upoly

F2 = FiniteField(2)
F3 = FiniteField(3)


def poly(field, text):
    return parse_apoly(field, text)


def k_elem(field, num, den="1"):
    return RationalFn(parse_apoly(field, num), parse_apoly(field, den))


def point(field, text):
    return AlgebraicPoint.from_text(field, text)


def inverse_t_point():
    return AlgebraicPoint.from_rational(k_elem(F2, "1", "T"))


def carlitz():
    return DrinfeldModule.carlitz(F2)


class TestDividedDerivative:
    def test_char2_first_derivative_of_square(self):
        assert divided_derivative(x_upoly(F2, "X^2"), 1).is_zero

    def test_lucas_example(self):
        assert divided_derivative(x_upoly(F2, "X^3"), 2) == x_upoly(F2, "X")

    def test_diagonal(self):
        for h in range(5):
            f = UPoly.monomial(ARing(F3), APoly.one(F3), h)
            assert divided_derivative(f, h) == UPoly.one(ARing(F3))

    def test_lucas_binomial(self):
        assert lucas_binomial(3, 2, 2) == 1
        assert lucas_binomial(2, 1, 2) == 0
        assert lucas_binomial(7, 3, 2) == 1
        assert lucas_binomial(10, 4, 3) == 0  # C(10,4)=210 = 3*70

    @pytest.mark.parametrize("field", [F2, F3])
    def test_product_rule_random(self, field):
        rng = random.Random(20260810)
        ring = ARing(field)
        for _ in range(100):
            f = UPoly(ring, [APoly(field, [field.element_from_index(
                rng.randrange(field.q)) for _ in range(2)])
                for _ in range(rng.randrange(1, 5))])
            g = UPoly(ring, [APoly(field, [field.element_from_index(
                rng.randrange(field.q)) for _ in range(2)])
                for _ in range(rng.randrange(1, 5))])
            h = rng.randrange(0, 5)
            lhs = divided_derivative(f * g, h)
            rhs = UPoly.zero(ring)
            for i in range(h + 1):
                rhs = rhs + divided_derivative(f, i) * \
                    divided_derivative(g, h - i)
            assert lhs == rhs

    def test_frobenius_composition_on_monomials(self):
        # d^(h)(X^(np)) is zero unless p | h, and equals the p-th power
        # pattern C(n, h/p) X^(np-h) otherwise
        p = 2
        ring = ARing(F2)
        for n in range(1, 6):
            f_p = UPoly.monomial(ring, APoly.one(F2), n * p)
            for h in range(0, n * p + 1):
                got = divided_derivative(f_p, h)
                if h % p:
                    assert got.is_zero
                else:
                    base = UPoly.monomial(ring, APoly.one(F2), n)
                    inner = divided_derivative(base, h // p)
                    expect = UPoly.zero(ring) if inner.is_zero else \
                        UPoly.monomial(ring, inner.lc, (n - h // p) * p)
                    assert got == expect


class TestMultiplicity:
    def test_constructed_cube(self):
        x = point(F2, "X+T")
        b = x_upoly(F2, "X+T") ** 3 * x_upoly(F2, "X+1")
        assert multiplicity_at(b, x) == 3
        assert vanishing_order_at(b, x) == 3

    def test_no_vanishing(self):
        x = point(F2, "X+T")
        assert multiplicity_at(x_upoly(F2, "X+1"), x) == 0

    def test_separable_square(self):
        x = point(F2, "X^2+X+T")
        b = x_upoly(F2, "X^2+X+T") ** 2
        assert multiplicity_at(b, x) == 2
        assert vanishing_order_at(b, x) == 2

    def test_inseparable_alignment(self):
        x = point(F2, "X^2+T")
        b = x_upoly(F2, "X^2+T") ** 3
        assert multiplicity_at(b, x) == 3
        assert vanishing_order_at(b, x) == 6  # root order D_pi * factor order

    def test_zero_rejected(self):
        with pytest.raises(PreconditionError):
            multiplicity_at(UPoly.zero(ARing(F2)), point(F2, "X+T"))

    def test_equivalence_random_products(self):
        rng = random.Random(424242)
        ring = ARing(F2)
        pts = [point(F2, "X+T"), point(F2, "X^2+X+T"), point(F2, "X^2+T")]
        checked = 0
        while checked < 100:
            x = pts[rng.randrange(len(pts))]
            m = rng.randrange(0, 4)
            r_poly = UPoly(ring, [APoly(F2, [rng.randrange(2)
                                             for _ in range(2)])
                                  for _ in range(rng.randrange(1, 4))])
            if r_poly.is_zero:
                continue
            if multiplicity_at(r_poly, x) != 0:
                continue
            b = x.minpoly ** m * r_poly
            assert multiplicity_at(b, x) == m
            assert vanishing_order_at(b, x) == m * x.d_pi
            checked += 1


class TestSiegelSolve:
    def test_single_row_example(self):
        rows = [[(k_elem(F2, "1"),), (k_elem(F2, "T"),)]]
        system = make_siegel_system(rows, 1, F2)
        assert system.row_heights == (Fraction(1),)
        solution = siegel_solve(system)
        assert solution == (poly(F2, "T"), poly(F2, "1"))

    def test_all_zero_system(self):
        rows = [[(RationalFn.zero(F2),)] * 3]
        system = make_siegel_system(rows, 1, F2)
        solution = siegel_solve(system)
        assert solution == (APoly.one(F2), APoly.zero(F2), APoly.zero(F2))

    def test_hypothesis_enforced(self):
        rows = [[(k_elem(F2, "1"),)]]
        with pytest.raises(PreconditionError):
            make_siegel_system(rows, 1, F2)

    @pytest.mark.parametrize("field", [F2, F3])
    def test_seeded_random_systems(self, field):
        rng = random.Random(13 if field is F2 else 31)
        dens = [poly(field, "1"), poly(field, "T"), poly(field, "T+1")]
        for trial in range(50):
            m = rng.randrange(1, 3)
            d = rng.randrange(1, 3)
            n_unk = rng.randrange(m * d + 1, 7)
            rows = []
            for _ in range(m):
                row = []
                for _ in range(n_unk):
                    entry = []
                    for _ in range(d):
                        num = APoly(field, [field.element_from_index(
                            rng.randrange(field.q)) for _ in range(3)])
                        entry.append(RationalFn(num, dens[rng.randrange(3)]))
                    row.append(tuple(entry))
                rows.append(row)
            system = make_siegel_system(rows, d, field)
            solution = siegel_solve(system)
            assert any(not a.is_zero for a in solution)
            bound = system.degree_bound()
            for a in solution:
                assert a.is_zero or a.deg <= int(bound)
            # residual is re-verified here independently of the solver
            for j in range(m):
                for coord in range(d):
                    acc = RationalFn.zero(field)
                    for i in range(n_unk):
                        acc = acc + RationalFn(solution[i]) * rows[j][i][coord]
                    assert acc.is_zero


class TestBuildAuxSystem:
    def test_one_by_four_example(self):
        x = inverse_t_point()
        system = build_aux_system(carlitz(), x, 2, 1, poly(F2, "T^2"))
        assert system.m_rows == 1
        assert system.n_unknowns == 4
        assert system.degree == 1
        u = k_elem(F2, "T^5+T^4+T^3+1", "T^4")
        expected = ((k_elem(F2, "1"),), (u,),
                    (k_elem(F2, "1", "T"),), (k_elem(F2, "1", "T") * u,))
        assert system.entries[0] == expected
        assert system.row_heights == (Fraction(6),)

    def test_t_zero_empty(self):
        x = inverse_t_point()
        system = build_aux_system(carlitz(), x, 2, 0, poly(F2, "T^2"))
        assert system.m_rows == 0
        assert system.n_unknowns == 4

    def test_degree_two_entries(self):
        x = point(F2, "X^2+X+T")
        system = build_aux_system(carlitz(), x, 3, 2, poly(F2, "T^2"))
        assert system.m_rows == 2
        assert system.n_unknowns == 9
        assert all(len(entry) == 2 for row in system.entries for entry in row)

    def test_hypothesis_violation(self):
        x = point(F2, "X^2+X+T")
        with pytest.raises(PreconditionError):
            build_aux_system(carlitz(), x, 2, 2, poly(F2, "T^2"))

    def test_deg_n_threshold(self):
        x = inverse_t_point()
        with pytest.raises(PreconditionError):
            build_aux_system(carlitz(), x, 4, 1, poly(F2, "T"))


class TestAuxPolynomial:
    def test_l2_t1_inverse_t(self):
        x = inverse_t_point()
        aux = build_aux_polynomial(carlitz(), x, 2, 1)
        assert aux.n_poly == poly(F2, "T^2")
        assert not aux.g_n.is_zero
        assert aux.multiplicity >= 1
        # (T X + 1) divides the primitive cleared G_N
        quotient, rem = divmod(a_to_k(aux.g_n_primitive),
                               a_to_k(x.minpoly).scale(
                                   k_elem(F2, "1", "T")))
        assert rem.is_zero
        bound = aux.system.degree_bound()
        assert aux.coefficient_degree <= int(bound)

    def test_t_zero_l_one(self):
        x = inverse_t_point()
        aux = build_aux_polynomial(carlitz(), x, 1, 0)
        assert aux.p == ((APoly.one(F2),),)
        assert aux.g_n == UPoly.one(KRing(F2))

    @pytest.mark.parametrize("l_t", [(2, 1), (3, 2)])
    @pytest.mark.parametrize("x_text", ["1/T", "X^2+X+T"])
    def test_pipeline_instances(self, l_t, x_text):
        big_l, t = l_t
        x = inverse_t_point() if x_text == "1/T" else point(F2, x_text)
        phi = carlitz()
        aux = build_aux_polynomial(phi, x, big_l, t)
        assert not aux.g_n.is_zero
        assert aux.multiplicity >= t
        assert aux.coefficient_degree <= int(aux.system.degree_bound())
        assert aux.g_n.deg < 2 * 2 * big_l * big_l  # 2 q^d L^2
        bounds = aux_row_height_bounds(aux, phi, x)
        for actual, bound in zip(aux.system.row_heights, bounds):
            assert actual <= bound

    def test_inseparable_stride(self):
        x = point(F2, "X^2+T")
        phi = carlitz()
        aux = build_aux_polynomial(phi, x, 3, 2, stride=2)
        # root-order target t * stride = 4 means factor multiplicity >= 2
        assert aux.multiplicity * x.d_pi >= 4
        assert vanishing_order_at(aux.g_n, x) >= 4


class TestRowHeightBound:
    def test_example_twelve(self):
        assert row_height_bound(2, 1, 5, 2, 1, 0) == 12

    def test_x_equals_one(self):
        assert row_height_bound(2, 0, 1, 2, 1, 0) == 2

    def test_degenerate(self):
        assert row_height_bound(0, 0, 0, 0, 0, 0) == 0

    def test_negative_rejected(self):
        with pytest.raises(PreconditionError):
            row_height_bound(2, -1, 0, 0, 0, 0)


class TestVanishingCheck:
    def test_inverse_t_at_t_plus_one(self):
        x = inverse_t_point()
        phi = carlitz()
        aux = build_aux_polynomial(phi, x, 2, 1)
        result = supersingular_vanishing_check(aux, 0, phi, poly(F2, "T+1"), x)
        assert result.claim_holds
        assert result.zeta_is_zero or result.valuation >= 1

    def test_order_at_t_is_vacuous(self):
        x = inverse_t_point()
        phi = carlitz()
        aux = build_aux_polynomial(phi, x, 2, 1)
        result = supersingular_vanishing_check(aux, 1, phi, poly(F2, "T+1"), x)
        assert result.required == 0
        assert result.claim_holds

    def test_integral_point_t(self):
        x = point(F2, "X+T")
        phi = carlitz()
        aux = build_aux_polynomial(phi, x, 2, 1)
        result = supersingular_vanishing_check(aux, 0, phi, poly(F2, "T+1"), x)
        assert result.claim_holds

    def test_non_integral_point_rejected(self):
        x = inverse_t_point()  # leading coefficient T vanishes mod T
        phi = carlitz()
        aux = build_aux_polynomial(phi, x, 2, 1)
        with pytest.raises(PreconditionError):
            supersingular_vanishing_check(aux, 0, phi, poly(F2, "T"), x)

    def test_non_supersingular_prime_rejected(self):
        one = RationalFn.one(F2)
        phi2 = DrinfeldModule(F2, (k_elem(F2, "T"), one, one))
        x = point(F2, "X+T")
        aux = build_aux_polynomial(phi2, x, 2, 1)
        with pytest.raises(PreconditionError):
            supersingular_vanishing_check(aux, 0, phi2, poly(F2, "T"), x)


class TestPhiNExpansion:
    def test_carlitz_t2(self):
        f = phi_n_as_xpoly(carlitz(), poly(F2, "T^2"))
        # T^2 X + (T + T^2) X^2 + X^4
        kr = KRing(F2)
        expected = UPoly(kr, (RationalFn.zero(F2), k_elem(F2, "T^2"),
                              k_elem(F2, "T^2+T"), RationalFn.zero(F2),
                              k_elem(F2, "1")))
        assert f == expected
