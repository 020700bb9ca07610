"""Exact evaluation of the explicit constants and parameter formulas.

Huge quantities are carried in log_q form as LogQValue: an exact rational
exponent when the quantity is a genuine q-power, otherwise a rigorous
rational bracket [lo, hi] refined dyadically on demand.  Logarithms of
integers are bracketed by a directed fixed-point squaring scheme, so every
reported inequality is backed by exact integer comparisons.  Decimal output
happens only at the reporting edge.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

from .errors import PreconditionError, PrecisionError

DEFAULT_BITS = 128
MAX_BITS = 4096


# -- rigorous brackets ---------------------------------------------------------

def _floor_log2(y):
    """floor(log2 y) for a positive Fraction, by integer comparisons."""
    n, d = y.numerator, y.denominator
    if n <= 0:
        raise PreconditionError("log of a nonpositive value")
    m = n.bit_length() - d.bit_length()
    # adjust: want 2^m <= n/d < 2^(m+1)
    while not _ge_pow2(n, d, m):
        m -= 1
    while _ge_pow2(n, d, m + 1):
        m += 1
    return m


def _ge_pow2(n, d, m):
    """n/d >= 2^m by integer comparison."""
    if m >= 0:
        return n >= (d << m)
    return (n << (-m)) >= d


def log2_bracket(y, bits):
    """Fractions (lo, hi) with lo <= log2(y) <= hi, width about 2^-bits."""
    y = Fraction(y)
    m = _floor_log2(y)
    x = y / Fraction(2) ** m
    big_b = bits + 8
    scale = 1 << big_b
    xlo = (x.numerator << big_b) // x.denominator
    xhi = -((-x.numerator << big_b) // x.denominator)
    frac_lo = Fraction(0)
    frac_hi = Fraction(0)
    for i in range(1, bits + 1):
        xlo = (xlo * xlo) >> big_b
        xhi = ((xhi * xhi) + scale - 1) >> big_b
        if xlo >= 2 * scale:
            frac_lo += Fraction(1, 2 ** i)
            frac_hi += Fraction(1, 2 ** i)
            xlo >>= 1
            xhi = (xhi + 1) >> 1
        elif xhi >= 2 * scale:
            # bounds disagree on this binary digit: stop with a wide tail
            return (m + frac_lo, m + frac_hi + Fraction(2, 2 ** i))
    return (m + frac_lo, m + frac_hi + Fraction(2, 2 ** bits))


def _prime_power_split(q):
    p = 2
    while q % p:
        p += 1 if p == 2 else 2
    e = 0
    m = q
    while m > 1:
        if m % p:
            raise PreconditionError(f"q = {q} is not a prime power")
        m //= p
        e += 1
    return p, e


def exact_logq(q, y):
    """log_q(y) as an exact Fraction when y is a p-power (q = p^e), else None."""
    y = Fraction(y)
    if y <= 0:
        raise PreconditionError("log of a nonpositive value")
    p, e = _prime_power_split(q)

    def p_exponent(n):
        if n == 1:
            return 0
        v = 0
        while n % p == 0:
            n //= p
            v += 1
        return v if n == 1 else None

    a = p_exponent(y.numerator)
    b = p_exponent(y.denominator)
    if a is None or b is None:
        return None
    return Fraction(a - b, e)


def logq_bracket(q, y, bits=DEFAULT_BITS):
    """Rigorous (lo, hi) bracket of log_q(y) for a positive Fraction y."""
    exact = exact_logq(q, y)
    if exact is not None:
        return (exact, exact)
    ylo, yhi = log2_bracket(y, bits)
    qexact = exact_logq(2, Fraction(q))
    if qexact is not None:
        return (ylo / qexact, yhi / qexact)
    qlo, qhi = log2_bracket(Fraction(q), bits)
    # q >= 2 so qlo >= 1 > 0; interval division with sign care on y side
    cands_lo = [ylo / qlo, ylo / qhi]
    cands_hi = [yhi / qlo, yhi / qhi]
    return (min(cands_lo), max(cands_hi))


def intnroot(n, k):
    """floor(n^(1/k)) for nonnegative big ints, Newton iteration."""
    if n < 0:
        raise PreconditionError("root of a negative number")
    if n == 0:
        return 0
    if k == 1:
        return n
    x = 1 << (n.bit_length() // k + 1)
    while True:
        t = ((k - 1) * x + n // x ** (k - 1)) // k
        if t >= x:
            break
        x = t
    return x


def qpow_bracket(q, x, bits=DEFAULT_BITS):
    """Rigorous (lo, hi) bracket of q^x for a rational exponent x."""
    x = Fraction(x)
    if x.denominator == 1:
        v = Fraction(q) ** x.numerator
        return (v, v)
    if x < 0:
        lo, hi = qpow_bracket(q, -x, bits)
        return (1 / hi, 1 / lo)
    u, v = x.numerator, x.denominator
    scale = 1 << (bits + 4)
    t = intnroot(q ** u * scale ** v, v)
    return (Fraction(t, scale), Fraction(t + 1, scale))


class RInterval:
    """A closed rational interval used for rigorous bound propagation."""

    __slots__ = ("lo", "hi")

    def __init__(self, lo, hi=None):
        if hi is None:
            hi = lo
        lo, hi = Fraction(lo), Fraction(hi)
        if lo > hi:
            raise PreconditionError("empty interval")
        self.lo = lo
        self.hi = hi

    @property
    def is_exact(self):
        return self.lo == self.hi

    def __add__(self, other):
        other = _as_interval(other)
        return RInterval(self.lo + other.lo, self.hi + other.hi)

    def __sub__(self, other):
        other = _as_interval(other)
        return RInterval(self.lo - other.hi, self.hi - other.lo)

    def __mul__(self, other):
        other = _as_interval(other)
        prods = [self.lo * other.lo, self.lo * other.hi,
                 self.hi * other.lo, self.hi * other.hi]
        return RInterval(min(prods), max(prods))

    def __truediv__(self, other):
        other = _as_interval(other)
        if other.lo <= 0 <= other.hi:
            raise ZeroDivisionError("interval division through zero")
        quots = [self.lo / other.lo, self.lo / other.hi,
                 self.hi / other.lo, self.hi / other.hi]
        return RInterval(min(quots), max(quots))

    def max_with(self, c):
        c = Fraction(c)
        return RInterval(max(self.lo, c), max(self.hi, c))

    def floor(self):
        """The common floor of the interval, or None if it straddles."""
        import math
        flo, fhi = math.floor(self.lo), math.floor(self.hi)
        return flo if flo == fhi else None

    def __repr__(self):
        if self.is_exact:
            return f"RInterval({self.lo})"
        return f"RInterval({self.lo}, {self.hi})"


def _as_interval(v):
    return v if isinstance(v, RInterval) else RInterval(v)


def refine_floor(fn: Callable[[int], RInterval], start=64, max_bits=MAX_BITS):
    """Evaluate fn at growing precision until its floor is determined."""
    bits = start
    while bits <= max_bits:
        floor = fn(bits).floor()
        if floor is not None:
            return floor
        bits *= 2
    raise PrecisionError("bracket refinement exhausted before floor resolved")


# -- log_q carried values ------------------------------------------------------

@dataclass(frozen=True)
class LogQValue:
    """The quantity q^lambda with lambda known exactly or inside [lo, hi]."""

    q: int
    lo: Fraction
    hi: Fraction

    @classmethod
    def exact(cls, q, value):
        value = Fraction(value)
        return cls(q, value, value)

    @classmethod
    def from_interval(cls, q, interval):
        return cls(q, interval.lo, interval.hi)

    @property
    def is_exact(self):
        return self.lo == self.hi

    @property
    def exponent(self):
        if not self.is_exact:
            raise PreconditionError("exponent of a bracketed LogQValue")
        return self.lo

    def interval(self):
        return RInterval(self.lo, self.hi)

    def _check(self, other):
        if other.q != self.q:
            raise PreconditionError("mixed bases in LogQValue arithmetic")

    def __mul__(self, other):
        self._check(other)
        return LogQValue(self.q, self.lo + other.lo, self.hi + other.hi)

    def __truediv__(self, other):
        self._check(other)
        return LogQValue(self.q, self.lo - other.hi, self.hi - other.lo)

    def pow(self, k):
        k = Fraction(k)
        if k >= 0:
            return LogQValue(self.q, self.lo * k, self.hi * k)
        return LogQValue(self.q, self.hi * k, self.lo * k)

    def min_with(self, other):
        self._check(other)
        return LogQValue(self.q, min(self.lo, other.lo),
                         min(self.hi, other.hi))

    def definitely_le(self, other):
        self._check(other)
        return self.hi <= other.lo

    def definitely_lt(self, other):
        self._check(other)
        return self.hi < other.lo

    def le_fraction(self, value, bits=DEFAULT_BITS):
        """Rigorous q^self <= value; None if the brackets cannot decide."""
        vlo, vhi = logq_bracket(self.q, Fraction(value), bits)
        if self.hi <= vlo:
            return True
        if self.lo > vhi:
            return False
        return None

    def ge_fraction(self, value, bits=DEFAULT_BITS):
        vlo, vhi = logq_bracket(self.q, Fraction(value), bits)
        if self.lo >= vhi:
            return True
        if self.hi < vlo:
            return False
        return None

    def render(self):
        if self.is_exact:
            return f"q^({self.lo})"
        return f"q^[{self.lo}, {self.hi}]"

    def approx_log10(self):
        import math
        mid = (self.lo + self.hi) / 2
        return float(mid) * math.log10(self.q)


@dataclass(frozen=True)
class QExp:
    """coeff * q^expo with positive rational coeff and rational expo."""

    q: int
    coeff: Fraction
    expo: Fraction

    def __post_init__(self):
        if self.coeff <= 0:
            raise PreconditionError("QExp coefficient must be positive")

    def pow(self, k):
        if k != int(k):
            raise PreconditionError("QExp.pow takes integer exponents")
        k = int(k)
        return QExp(self.q, self.coeff ** k, self.expo * k)

    def mul_fraction(self, f):
        return QExp(self.q, self.coeff * Fraction(f), self.expo)

    def exact_value(self):
        """The exact Fraction when the q-exponent collapses, else None."""
        if self.expo.denominator == 1:
            return self.coeff * Fraction(self.q) ** self.expo.numerator
        # q^expo may still be rational when q is a perfect power
        p, e_q = _prime_power_split(self.q)
        scaled = self.expo * e_q  # exponent of p
        if scaled.denominator == 1:
            return self.coeff * Fraction(p) ** scaled.numerator
        return None

    def bracket(self, bits=DEFAULT_BITS):
        exact = self.exact_value()
        if exact is not None:
            return RInterval(exact)
        lo, hi = qpow_bracket(self.q, self.expo, bits)
        return RInterval(lo, hi) * RInterval(self.coeff)

    def log_bracket(self, bits=DEFAULT_BITS):
        lo, hi = logq_bracket(self.q, self.coeff, bits)
        return RInterval(lo + self.expo, hi + self.expo)

    def ge_fraction(self, value):
        """Exact comparison self >= value via integer powering."""
        value = Fraction(value)
        if value <= 0:
            return True
        b = self.expo.denominator
        return (self.coeff / value) ** b * \
            Fraction(self.q) ** int(self.expo * b) >= 1

    def render(self):
        exact = self.exact_value()
        if exact is not None:
            if exact.denominator == 1:
                return str(exact.numerator)
            return f"{exact.numerator}/{exact.denominator}"
        return f"{self.coeff} * q^({self.expo})"


# -- explicit constants of the height lower bounds ------------------------------

@dataclass(frozen=True)
class ConstantsSet:
    theorem: int
    q: int
    d: int
    h_phi: Fraction
    c_phi: Fraction
    r: Fraction
    alpha: Fraction
    c0: QExp
    kappa: Fraction
    mu: Fraction
    lam: Optional[Fraction]
    c2: LogQValue
    c3: Fraction
    c4: int
    C0: LogQValue
    C0_branch1_exponent: Fraction
    C0_branch2_log: LogQValue
    n_phi: Optional[int] = None
    rv_star_C: Optional[LogQValue] = None
    rv_star_marker: Optional[str] = None


def _validate_params(d, h_phi, c_phi, r):
    if d < 1:
        raise PreconditionError("rank d must be >= 1")
    if h_phi < 1:
        raise PreconditionError("h(Phi) must be >= 1")
    if c_phi < 1:
        raise PreconditionError("c(Phi) must be >= 1")
    if not 0 < r <= 1:
        raise PreconditionError("r must lie in (0, 1]")


def _constants(theorem, q, d, h_phi, c_phi, r, n_phi, bits=DEFAULT_BITS):
    h_phi, c_phi, r = Fraction(h_phi), Fraction(c_phi), Fraction(r)
    _validate_params(d, h_phi, c_phi, r)
    alpha = h_phi * c_phi
    lead = 6500 if theorem == 1 else 35000
    denom_const = 768 if theorem == 1 else 384
    c0 = QExp(q, Fraction(lead * d) * alpha ** 3, Fraction(d) + r * alpha)
    mu = 2 + Fraction(d, 1) / r * alpha
    if theorem == 1:
        kappa = 1 + 2 * Fraction(d) / r * alpha
        lam = None
    else:
        kappa = 1 + 3 * Fraction(d) / r * alpha
        lam = 1 + 2 * Fraction(d) / r * alpha
    c3 = Fraction(5 * d) * (2 * (d + 1) * h_phi + 1)
    c2 = LogQValue.exact(q, c3 * c_phi ** 2)
    c4 = 24 * q ** d
    branch1_exp = -c3 * ((Fraction(q) ** (q + d + 1) - 1) * c_phi) ** 2
    branch1 = LogQValue.exact(q, branch1_exp)
    # branch 2: h c / (denom_const * r * q^d * c0^(1 + 4 d alpha / r))
    eps = 1 + 4 * Fraction(d) / r * alpha
    b2_log_interval = (RInterval(*logq_bracket(q, alpha / (denom_const * r), bits))
                       - RInterval(Fraction(d))
                       - c0.log_bracket(bits) * RInterval(eps))
    branch2 = LogQValue.from_interval(q, b2_log_interval)
    c_zero = branch1.min_with(branch2)
    rv_star_c = None
    rv_marker = None
    if n_phi is not None:
        if n_phi < 1:
            raise PreconditionError("N_Phi must be >= 1")
        rv1 = LogQValue.exact(q, -c3 * (Fraction(n_phi - 1) * c_phi) ** 2)
        rv_star_c = rv1.min_with(branch2)
    else:
        rv_marker = ("min(q^(-c3*((N_Phi-1)c(Phi))^2), "
                     "h(Phi)c(Phi)/(%drq^d c0^(1+4d h(Phi)c(Phi)/r))) "
                     "with N_Phi unspecified" % denom_const)
    return ConstantsSet(
        theorem=theorem, q=q, d=d, h_phi=h_phi, c_phi=c_phi, r=r,
        alpha=alpha, c0=c0, kappa=kappa, mu=mu, lam=lam, c2=c2, c3=c3,
        c4=c4, C0=c_zero, C0_branch1_exponent=branch1_exp,
        C0_branch2_log=branch2, n_phi=n_phi, rv_star_C=rv_star_c,
        rv_star_marker=rv_marker)


def theorem1_constants(d, h_phi, c_phi, r, q=2, n_phi=None, bits=DEFAULT_BITS):
    """All separable-case constants, with C_0 in log_q form."""
    return _constants(1, q, d, h_phi, c_phi, r, n_phi, bits)


def theorem2_constants(d, h_phi, c_phi, r, q=2, n_phi=None, bits=DEFAULT_BITS):
    """The general-case constants (inseparable degrees allowed)."""
    return _constants(2, q, d, h_phi, c_phi, r, n_phi, bits)


def c0_dominates(consts):
    """The dominance chain: c0 >= max(c_phi, q^d, 384 r q^d, 1536 r q^d, 2q)."""
    q, d, r = consts.q, consts.d, consts.r
    targets = [consts.c_phi, Fraction(q) ** d, 384 * r * q ** d,
               1536 * r * q ** d, Fraction(2 * q)]
    return all(consts.c0.ge_fraction(v) for v in targets)


# -- the lower bound and parameter selection ------------------------------------

def _logq_interval_fn(q, n):
    exact = exact_logq(q, Fraction(n))
    if exact is not None:
        return lambda bits: RInterval(exact)
    return lambda bits: RInterval(*logq_bracket(q, Fraction(n), bits))


def _log_of_interval(q, interval, bits):
    """log_q of a positive interval, via endpoint brackets."""
    lo = logq_bracket(q, interval.lo, bits)[0]
    hi = logq_bracket(q, interval.hi, bits)[1]
    return RInterval(lo, hi)


def lower_bound(big_d, consts, d_pi=1, bits=DEFAULT_BITS):
    """The theorem's canonical-height lower bound as a LogQValue.

    Exact when D (and D_pi for theorem 2) are q-powers; otherwise the
    rational log brackets propagate so the result is a rigorous interval.
    The value never exceeds 1 (log <= 0), asserted.
    """
    if big_d < 1:
        raise PreconditionError("D must be >= 1")
    q = consts.q
    p, e_q = _prime_power_split(q)
    if consts.theorem == 2:
        if d_pi <= 1:
            raise PreconditionError("theorem 2 requires D_pi > 1")
        if big_d % d_pi:
            raise PreconditionError("D_pi must divide D")
        v = d_pi
        while v > 1:
            if v % p:
                raise PreconditionError("D_pi must be a power of p")
            v //= p
    elif d_pi != 1:
        raise PreconditionError("theorem 1 takes no D_pi")
    log_d_fn = _logq_interval_fn(q, big_d)
    log_d = log_d_fn(bits)
    log_plus = log_d.max_with(1)
    loglog_plus = _log_of_interval(q, log_plus, bits).max_with(1)
    # log of C0 (loglog+ D)^mu / (D (log+ D)^kappa)
    result = (consts.C0.interval()
              + _log_of_interval(q, loglog_plus, bits) * RInterval(consts.mu)
              - log_d
              - _log_of_interval(q, log_plus, bits) * RInterval(consts.kappa))
    if consts.theorem == 2:
        log_dpi = exact_logq(q, Fraction(d_pi))
        assert log_dpi is not None  # p-power, q = p^e
        result = result - RInterval(log_dpi * consts.lam)
    value = LogQValue.from_interval(q, result)
    assert value.hi <= 0, "bound exceeded 1"
    return value


@dataclass(frozen=True)
class ParameterSet:
    big_l: int
    t: int
    h_order: int
    deg_l: int
    deg_n: int
    variant: str
    p_insep: int = 1


def parameter_select(big_d, consts, variant="separable", p_insep=1,
                     max_bits=MAX_BITS):
    """The auxiliary-polynomial parameters for degree D, exactly.

    The inseparable variant scales L and t by p^(e'); the standing
    hypothesis D >= q^(q+d+1) is enforced, and the guaranteed inequalities
    L^2 > t D c and L^2 - t D c >= L^2 / 2 and h <= t/2 are asserted.
    """
    q, d = consts.q, consts.d
    if big_d < q ** (q + d + 1):
        raise PreconditionError(
            f"D must be at least q^(q+d+1) = {q ** (q + d + 1)}")
    if variant not in ("separable", "inseparable"):
        raise PreconditionError("variant must be separable or inseparable")
    if variant == "separable":
        if p_insep != 1:
            raise PreconditionError("separable variant has p_insep = 1")
    else:
        if p_insep < 1:
            raise PreconditionError("p_insep must be >= 1")
    if consts.alpha.denominator != 1:
        raise PreconditionError(
            "h(Phi) c(Phi) must be an integer for the degree formulas")

    log_d_fn = _logq_interval_fn(q, big_d)

    def loglog_fn(bits):
        return _log_of_interval(q, log_d_fn(bits), bits)

    scale = RInterval(Fraction(p_insep))

    def l_arg(bits):
        return (consts.c0.pow(2).bracket(bits) * RInterval(Fraction(big_d))
                * log_d_fn(bits) / (loglog_fn(bits) * loglog_fn(bits))
                * scale)

    def t_arg(bits):
        ll = loglog_fn(bits)
        return (consts.c0.pow(3).bracket(bits) * RInterval(Fraction(big_d))
                * log_d_fn(bits) / (ll * ll * ll) * scale)

    def h_arg(bits):
        ll = loglog_fn(bits)
        return (consts.c0.bracket(bits) * RInterval(Fraction(big_d))
                / (ll * ll))

    def deg_l_arg(bits):
        # (1/r) log_q(c0^4 (log D)^2 / loglog D)
        inner = (consts.c0.pow(4).log_bracket(bits)
                 + _log_of_interval(q, log_d_fn(bits), bits) * RInterval(2)
                 - _log_of_interval(q, loglog_fn(bits), bits))
        return inner / RInterval(consts.r)

    big_l = refine_floor(l_arg, max_bits=max_bits) + 1
    t = refine_floor(t_arg, max_bits=max_bits)
    h_order = refine_floor(h_arg, max_bits=max_bits)
    deg_l_floor = refine_floor(deg_l_arg, max_bits=max_bits)
    deg_l = int(consts.alpha) * deg_l_floor
    deg_n = _ilog(q, big_l) // d + 1

    c = consts.c_phi
    assert Fraction(big_l) ** 2 > t * big_d * c
    assert Fraction(big_l) ** 2 - t * big_d * c >= Fraction(big_l) ** 2 / 2
    assert h_order <= Fraction(t, 2)
    return ParameterSet(big_l=big_l, t=t, h_order=h_order, deg_l=deg_l,
                        deg_n=deg_n,
                        variant=variant, p_insep=p_insep)


def _ilog(base, n):
    m = 0
    power = base
    while power <= n:
        m += 1
        power *= base
    return m


# -- counting bounds -------------------------------------------------------------

def northcott_bound(q, big_d, chi):
    """The point-count bound q^(5 D^2 chi) as a LogQValue."""
    if big_d < 1 or chi < 1:
        raise PreconditionError("D and chi must be >= 1")
    return LogQValue.exact(q, Fraction(5 * big_d * big_d) * Fraction(chi))


def c2_constant(q, d, h_phi, c_phi):
    """The constant c2 = q^(5d(2(d+1)h+1)c^2)."""
    h_phi, c_phi = Fraction(h_phi), Fraction(c_phi)
    if d < 1 or h_phi < 1 or c_phi < 1:
        raise PreconditionError("parameter out of range")
    return LogQValue.exact(q, Fraction(5 * d) * (2 * (d + 1) * h_phi + 1)
                           * c_phi ** 2)


def c2_lower_bound(q, big_d, d, h_phi, c_phi):
    """The Northcott-style canonical-height floor 1/c2^(D^2)."""
    if big_d < 1:
        raise PreconditionError("D must be >= 1")
    c2 = c2_constant(q, d, h_phi, c_phi)
    return c2.pow(-big_d * big_d)
