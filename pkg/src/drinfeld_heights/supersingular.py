"""Supersingular-reduction testing and the degree-stratified prime census.

A monic irreducible l is supersingular for Phi when the image Phi(l),
reduced coefficient-wise modulo l, collapses to the single Frobenius power
tau^(d deg l).  The census scans every prime of each degree, reports
bad-reduction primes separately (never silently as non-supersingular), and
compares per-degree counts against the density curve c_1 q^(rN)/N and the
reference curve q^N/(2dN).
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Optional

from .errors import BadReductionError, PreconditionError
from .fqarith import (
    count_irreducibles,
    enumerate_irreducibles,
    render_apoly,
)
from .ore import OrePoly, ResidueAlgebra


def good_reduction(phi, l):
    """True iff every coefficient of Phi(T) is l-integral and a_d is an l-unit."""
    for a in phi.coeffs:
        if not a.is_integral_at(l):
            return False
    return phi.coeffs[-1].is_unit_at(l)


def is_supersingular(phi, l):
    """The reduction test: Phi(l) = tau^(d deg l) in the Ore ring over A/(l).

    Requires good reduction at l.  With coefficients in the base field k the
    inertia-degree clause of the definition holds vacuously.
    """
    if not good_reduction(phi, l):
        raise BadReductionError(
            f"bad reduction at {render_apoly(l)}", place=l)
    alg = ResidueAlgebra(l)
    image = phi.phi_image(l, algebra=alg)
    m = phi.rank * l.deg
    expected = OrePoly(alg, (alg.zero,) * m + (alg.one,))
    return image == expected


def _classify(phi, l):
    if not good_reduction(phi, l):
        return "bad"
    return "ss" if is_supersingular(phi, l) else "ordinary"


def _classify_task(args):
    return _classify(*args)


@dataclass(frozen=True)
class DegreeScan:
    """Classification of every monic irreducible of one degree."""

    degree: int
    supersingular: tuple
    ordinary: tuple
    bad_reduction: tuple

    @property
    def count_ss(self):
        return len(self.supersingular)

    @property
    def count_total(self):
        return (len(self.supersingular) + len(self.ordinary)
                + len(self.bad_reduction))


def scan_degree(phi, n, workers=1):
    """Classify all monic irreducibles of degree n for the module phi.

    The output ordering is the lexicographic prime ordering regardless of
    the worker count.
    """
    if n < 1:
        raise PreconditionError("degree must be >= 1")
    primes = enumerate_irreducibles(phi.field, n)
    if workers > 1 and len(primes) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            kinds = list(pool.map(_classify_task,
                                  [(phi, l) for l in primes]))
    else:
        kinds = [_classify(phi, l) for l in primes]
    buckets = {"ss": [], "ordinary": [], "bad": []}
    for l, kind in zip(primes, kinds):
        buckets[kind].append(l)
    return DegreeScan(n, tuple(buckets["ss"]), tuple(buckets["ordinary"]),
                      tuple(buckets["bad"]))


def rv_curve_satisfied(count_ss, q, r, c1, n):
    """Exact decision of count_ss >= c_1 q^(rN)/N for rational r, c_1."""
    r = Fraction(r)
    c1 = Fraction(c1)
    lhs = Fraction(count_ss) * n / c1  # compare lhs >= q^(rN)
    u = (r * n).numerator
    v = (r * n).denominator
    if lhs <= 0:
        return False
    return lhs ** v >= Fraction(q) ** u


def rv_curve_value(q, r, c1, n):
    """c_1 q^(rN)/N as an exact Fraction when rN is integral, else None."""
    rn = Fraction(r) * n
    if rn.denominator == 1:
        return Fraction(c1) * q ** rn.numerator / n
    return None


def rv_curve_decimal(q, r, c1, n, digits=6):
    """Decimal rendering of c_1 q^(rN)/N (exact when rN integral)."""
    exact = rv_curve_value(q, r, c1, n)
    if exact is not None:
        return f"{float(exact):.{digits}g}"
    import math
    val = float(c1) * math.pow(q, float(Fraction(r) * n)) / n
    return f"~{val:.{digits}g}"


@dataclass(frozen=True)
class ScanRow:
    n: int
    count_ss: int
    count_total: int
    ratio: Fraction
    rv_curve: Optional[Fraction]
    rv_curve_str: str
    chebotarev_curve: Fraction
    satisfied: bool
    skipped_by_eta: bool
    bad_reduction: tuple = dc_field(default=())

    def as_record(self):
        rv = (f"{self.rv_curve.numerator}/{self.rv_curve.denominator}"
              if self.rv_curve is not None else self.rv_curve_str)
        return {
            "N": self.n,
            "count_ss": self.count_ss,
            "count_total": self.count_total,
            "ratio": f"{self.ratio.numerator}/{self.ratio.denominator}",
            "rv_curve": rv,
            "chebotarev_curve": (f"{self.chebotarev_curve.numerator}/"
                                 f"{self.chebotarev_curve.denominator}"),
            "satisfied": self.satisfied,
            "skipped_by_eta": self.skipped_by_eta,
            "bad_reduction": [render_apoly(l) for l in self.bad_reduction],
        }


@dataclass(frozen=True)
class ScanReport:
    config: dict
    rows: tuple

    def as_records(self):
        return [row.as_record() for row in self.rows]


def density_report(phi, n_max, r=1, c1=Fraction(1, 2), eta=1, workers=1):
    """Per-degree supersingular counts against the density curves.

    Rows with N not congruent to 1 mod eta are flagged as skipped (the
    census still runs for them); `satisfied` records the exact comparison
    count_ss >= c_1 q^(rN)/N.
    """
    r = Fraction(r)
    c1 = Fraction(c1)
    if n_max < 1:
        raise PreconditionError("n_max must be >= 1")
    if not (0 < r <= 1):
        raise PreconditionError("r must lie in (0, 1]")
    if c1 <= 0:
        raise PreconditionError("c_1 must be positive")
    if eta < 1:
        raise PreconditionError("eta must be >= 1")
    q = phi.field.q
    d = phi.rank
    rows = []
    for n in range(1, n_max + 1):
        scan = scan_degree(phi, n, workers=workers)
        total = scan.count_total
        assert total == count_irreducibles(q, n)
        rows.append(ScanRow(
            n=n,
            count_ss=scan.count_ss,
            count_total=total,
            ratio=Fraction(scan.count_ss, total),
            rv_curve=rv_curve_value(q, r, c1, n),
            rv_curve_str=rv_curve_decimal(q, r, c1, n),
            chebotarev_curve=Fraction(q ** n, 2 * d * n),
            satisfied=rv_curve_satisfied(scan.count_ss, q, r, c1, n),
            skipped_by_eta=(n % eta) != (1 % eta),
            bad_reduction=scan.bad_reduction,
        ))
    config = {
        "module": phi.describe(),
        "q": q,
        "d": d,
        "r": f"{r.numerator}/{r.denominator}",
        "c1": f"{c1.numerator}/{c1.denominator}",
        "eta": eta,
        "n_max": n_max,
    }
    return ScanReport(config=config, rows=tuple(rows))
