"""The acceptance gate: one test per criterion, each printing a PASS/FAIL
line (run with `pytest tests/test_acceptance.py -v -s` to see them)."""

import random
import time
from contextlib import contextmanager
from fractions import Fraction

from drinfeld_heights.fqarith import (
    APoly,
    FiniteField,
    RationalFn,
    count_irreducibles,
    enumerate_irreducibles,
    parse_apoly,
)
from drinfeld_heights.heights import (
    AlgebraicPoint,
    canonical_height,
    gamma_bound,
    image_point,
    northcott_enumerate,
    point_height,
    torsion_status,
)
from drinfeld_heights.lab import (
    aux_row_height_bounds,
    build_aux_polynomial,
    make_siegel_system,
    multiplicity_at,
    siegel_solve,
    supersingular_vanishing_check,
    vanishing_order_at,
)
from drinfeld_heights.bounds import theorem1_constants, theorem2_constants
from drinfeld_heights.ore import DrinfeldModule
from drinfeld_heights.supersingular import is_supersingular, scan_degree
from drinfeld_heights.xpoly import ARing, UPoly

F2 = FiniteField(2)
F3 = FiniteField(3)


@contextmanager
def criterion(number, description):
    try:
        yield
    except BaseException:
        print(f"[acceptance] criterion {number:2d}: FAIL - {description}")
        raise
    print(f"[acceptance] criterion {number:2d}: PASS - {description}")


def poly(field, text):
    return parse_apoly(field, text)


def inverse_t():
    return AlgebraicPoint.from_rational(
        RationalFn(APoly.one(F2), poly(F2, "T")))


def test_criterion_1_hayes_carlitz_supersingularity():
    with criterion(1, "Carlitz supersingular at every prime "
                      "(q=2 deg<=6, q=3 deg<=4)"):
        start = time.monotonic()
        total_q2 = 0
        for n in range(1, 7):
            scan = scan_degree(DrinfeldModule.carlitz(F2), n)
            assert scan.count_ss == scan.count_total
            assert not scan.bad_reduction
            total_q2 += scan.count_total
            if n == 5:
                assert total_q2 == 14  # primes of degree <= 5 over F_2
        total_q3 = 0
        for n in range(1, 5):
            scan = scan_degree(DrinfeldModule.carlitz(F3), n)
            assert scan.count_ss == scan.count_total
            total_q3 += scan.count_total
        assert total_q2 == 23 and total_q3 == 32  # ratio exactly 1 throughout
        assert time.monotonic() - start < 60


def test_criterion_2_irreducible_counts():
    with criterion(2, "Moebius count equals enumeration and obeys "
                      "q^N/2N <= X <= q^N/N"):
        for field, n_max in ((F2, 10), (F3, 6)):
            q = field.q
            for n in range(1, n_max + 1):
                count = count_irreducibles(q, n)
                assert len(enumerate_irreducibles(field, n)) == count
                assert Fraction(q ** n, 2 * n) <= count <= Fraction(q ** n, n)


def test_criterion_3_rank2_discriminating_case():
    with criterion(3, "rank-2 module: T and T+1 fail, T^2+T+1 passes"):
        one = RationalFn.one(F2)
        phi = DrinfeldModule(F2, (RationalFn(APoly.gen(F2)), one, one))
        assert not is_supersingular(phi, poly(F2, "T"))
        assert not is_supersingular(phi, poly(F2, "T+1"))
        assert is_supersingular(phi, poly(F2, "T^2+T+1"))


def test_criterion_4_torsion_suite():
    with criterion(4, "torsion witnesses T and T^2+T; 1/T certified "
                      "non-torsion with lower end 1/4"):
        phi = DrinfeldModule.carlitz(F2)
        st = torsion_status(AlgebraicPoint.from_text(F2, "X+T"), phi, 1, 0)
        assert st.kind == "torsion" and st.witness == poly(F2, "T")
        st = torsion_status(AlgebraicPoint.from_text(F2, "X+1"), phi, 2, 0)
        assert st.kind == "torsion" and st.witness == poly(F2, "T^2+T")
        st = torsion_status(inverse_t(), phi, 3, 2)
        assert st.kind == "non-torsion"
        assert st.interval.estimate - st.interval.error == Fraction(1, 4)


def _sample_points():
    texts = ["X", "X+1", "X+T", "X+T+1", "T*X+1", "T*X+X+1", "T*X+X+T",
             "T*X+T+1", "X^2+X+T", "X^2+T*X+1"]
    return [AlgebraicPoint.from_text(F2, t) for t in texts]


def test_criterion_5_functional_equation():
    with criterion(5, "functional-equation intervals intersect; widths "
                      "shrink by exactly q^d"):
        phi = DrinfeldModule.carlitz(F2)
        samples = _sample_points()
        assert len(samples) == 10
        for x in samples:
            for a_text, scale in (("T", 2), ("T+1", 2), ("T^2", 4)):
                a = poly(F2, a_text)
                y = image_point(x, phi, a)
                iv_y = canonical_height(y, phi, 2)
                iv_x = canonical_height(x, phi, 2).scaled(scale)
                assert iv_y.intersects(iv_x)
            widths = [canonical_height(x, phi, n).error * 2
                      for n in range(3)]
            for wide, narrow in zip(widths, widths[1:]):
                assert wide / narrow == 2  # q^d = 2


def test_criterion_6_height_gap():
    with criterion(6, "|h - canonical estimate| <= 2(d+1)h(Phi) + error"):
        phi = DrinfeldModule.carlitz(F2)
        bound = gamma_bound(phi)
        for x in _sample_points():
            h = point_height(x)
            for depth in range(3):
                iv = canonical_height(x, phi, depth)
                assert abs(h - iv.estimate) <= bound + iv.error


def test_criterion_7_northcott():
    with criterion(7, "Northcott enumeration: exactly 8 points at "
                      "(2,1,1), count <= 2^20 at (2,2,1)"):
        start = time.monotonic()
        pts = northcott_enumerate(F2, 1, 1)
        assert len(pts) == 8 <= 2 ** 5
        pts2 = northcott_enumerate(F2, 2, 1)
        assert len(pts2) <= 2 ** 20
        assert time.monotonic() - start < 60


def test_criterion_8_siegel_random_systems():
    with criterion(8, "50 seeded Siegel systems: nonzero solutions, zero "
                      "residuals, degrees within the bound"):
        rng = random.Random(20260810)
        dens = [poly(F2, "1"), poly(F2, "T"), poly(F2, "T+1")]
        for _ in range(50):
            m = rng.randrange(1, 3)
            d = rng.randrange(1, 3)
            n_unk = rng.randrange(m * d + 1, 7)
            rows = []
            for _ in range(m):
                row = []
                for _ in range(n_unk):
                    entry = []
                    for _ in range(d):
                        num = APoly(F2, [rng.randrange(2) for _ in range(3)])
                        entry.append(RationalFn(num, dens[rng.randrange(3)]))
                    row.append(tuple(entry))
                rows.append(row)
            system = make_siegel_system(rows, d, F2)
            solution = siegel_solve(system)  # verifies the residual exactly
            assert any(not a.is_zero for a in solution)
            delta = int(system.degree_bound())
            assert all(a.is_zero or a.deg <= delta for a in solution)


def test_criterion_9_aux_polynomial_pipeline():
    with criterion(9, "auxiliary polynomial: G nonzero, multiplicity >= t, "
                      "degrees and row heights within bounds"):
        phi = DrinfeldModule.carlitz(F2)
        points = [inverse_t(), AlgebraicPoint.from_text(F2, "X^2+X+T")]
        for big_l, t in ((2, 1), (3, 2)):
            for x in points:
                aux = build_aux_polynomial(phi, x, big_l, t)
                assert not aux.g_n.is_zero
                assert aux.multiplicity >= t
                assert aux.coefficient_degree <= int(aux.system.degree_bound())
                bounds = aux_row_height_bounds(aux, phi, x)
                for actual, predicted in zip(aux.system.row_heights, bounds):
                    assert actual <= predicted


def test_criterion_10_supersingular_vanishing():
    with criterion(10, "vanishing check at l=T+1: v_l(zeta) >= 1 or "
                       "zeta = 0"):
        phi = DrinfeldModule.carlitz(F2)
        x = inverse_t()
        aux = build_aux_polynomial(phi, x, 2, 1)
        result = supersingular_vanishing_check(aux, 0, phi,
                                               poly(F2, "T+1"), x)
        assert result.zeta_is_zero or result.valuation >= 1


def test_criterion_11_theorem_constants():
    with criterion(11, "explicit constants: c0=26000/140000, kappa/mu/"
                       "lambda, C0 first branch log2 = -5625"):
        c1 = theorem1_constants(1, 1, 1, 1, q=2)
        assert c1.c0.exact_value() == 26000
        assert c1.kappa == 3 and c1.mu == 3
        assert c1.C0_branch1_exponent == -5625
        c2 = theorem2_constants(1, 1, 1, 1, q=2)
        assert c2.c0.exact_value() == 140000
        assert c2.kappa == 4 and c2.lam == 3


def test_criterion_12_divided_derivative_multiplicity_equivalence():
    with criterion(12, "divided-derivative count matches exact division "
                       "on 100 seeded instances"):
        rng = random.Random(424242)
        ring = ARing(F2)
        points = [AlgebraicPoint.from_text(F2, t)
                  for t in ("X+T", "T*X+1", "X^2+X+T", "X^2+T")]
        checked = 0
        while checked < 100:
            x = points[rng.randrange(len(points))]
            m = rng.randrange(0, 4)
            rest = UPoly(ring, [APoly(F2, [rng.randrange(2)
                                           for _ in range(2)])
                                for _ in range(rng.randrange(1, 4))])
            if rest.is_zero or multiplicity_at(rest, x) != 0:
                continue
            b = x.minpoly ** m * rest
            assert multiplicity_at(b, x) == m
            assert vanishing_order_at(b, x) == m * x.d_pi
            checked += 1
