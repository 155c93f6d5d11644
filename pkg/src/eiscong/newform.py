"""q-expansion of the weight-2 newform attached to a semistable curve.

Prime coefficients come from point counts; the rest follow from the Euler
factors: ``a_(l^(k+1)) = a_l a_(l^k) - l a_(l^(k-1))`` at good primes,
``a_(p^k) = a_p^k`` at bad ones, and ``a_(mn) = a_m a_n`` for coprime m, n.
"""

from dataclasses import dataclass

from .arith import factor, primes_upto
from .curves import WeierstrassCurve, conductor_semistable, reduction_data
from .errors import BadPrimeQuery
from .series import RATIONAL, QExpansion


@dataclass(frozen=True)
class NewformExpansion:
    curve: WeierstrassCurve
    level: int
    series: QExpansion

    def __post_init__(self):
        s = self.series
        assert s[0] == 0 and (s.precision < 1 or s[1] == 1)
        assert all(a.denominator == 1 for a in s)

    def __getitem__(self, n):
        return int(self.series[n])

    @property
    def precision(self):
        return self.series.precision


def default_precision(level):
    from .verify import sturm_precision

    return sturm_precision(level) + 1


def prime_power_coeffs(a_p, p, k_max, bad):
    """``[a_1, a_p, a_(p^2), ..., a_(p^k_max)]``."""
    out = [1, a_p]
    for _ in range(2, k_max + 1):
        out.append(a_p * out[-1] if bad else a_p * out[-1] - p * out[-2])
    return out[: k_max + 1]


def af_coeffs(c, prec=None):
    """Newform coefficients ``a_0 .. a_prec`` of the curve ``c``."""
    N = conductor_semistable(c)
    if prec is None:
        prec = default_precision(N)
    a = [0] * (prec + 1)
    if prec >= 1:
        a[1] = 1
    for p in primes_upto(prec):
        k_max = 0
        while p ** (k_max + 1) <= prec:
            k_max += 1
        powers = prime_power_coeffs(reduction_data(c, p).a_p, p, k_max, N % p == 0)
        for k in range(1, k_max + 1):
            a[p**k] = powers[k]
    for n in range(2, prec + 1):
        fac = factor(n)
        if len(fac) > 1:
            p, e = fac[0]
            q = p**e
            a[n] = a[q] * a[n // q]
    return NewformExpansion(c, N, QExpansion(a, RATIONAL))


@dataclass(frozen=True)
class OrdinarityResult:
    r: int
    a_r: int
    ordinary: bool
    congruent_to_one: bool

    def __bool__(self):
        return self.ordinary


def ordinarity_check(c, r):
    """``a_r(f) != 0 mod r``; also records whether ``a_r(f) = 1 mod r``."""
    N = conductor_semistable(c)
    if N % r == 0:
        raise BadPrimeQuery(f"{r} divides the conductor {N}")
    a_r = reduction_data(c, r).a_p
    return OrdinarityResult(r, a_r, a_r % r != 0, a_r % r == 1 % r)
