"""Truncated q-expansions with exact coefficients.

A :class:`QExpansion` holds ``a_0, ..., a_P`` for a declared precision ``P``
and nothing beyond it. Coefficients live either in the rationals (stored as
:class:`fractions.Fraction`) or in ``Z/rZ`` (stored as ints in ``[0, r)``).

The three Hecke-type operators act on indices only::

    B_r:  a_n q^n      ->  a_n q^(nr)
    U_r:  sum a_n q^n  ->  sum a_(nr) q^n
    T_l:  sum a_n q^n  ->  sum a_(nl) q^n + l * sum a_n q^(nl)

and every operator shrinks or grows the precision so that it never reads
past what its input actually knows.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from numbers import Rational

from .arith import factor, is_prime
from .errors import DenominatorClash, DomainMismatch, InsufficientPrecision


@dataclass(frozen=True)
class CoefficientDomain:
    """Either the rationals (``modulus is None``) or ``Z/rZ`` for a prime ``r``."""

    modulus: int | None = None

    def __post_init__(self):
        if self.modulus is not None and not is_prime(self.modulus):
            raise ValueError(f"ModPrime requires a prime modulus, got {self.modulus!r}")

    @classmethod
    def mod(cls, r):
        return cls(int(r))

    @property
    def is_exact_rational(self):
        return self.modulus is None

    def coerce(self, value):
        if self.modulus is None:
            if not isinstance(value, Rational):
                raise TypeError(f"expected an exact rational, got {type(value).__name__}")
            return Fraction(value)
        if isinstance(value, int):
            return value % self.modulus
        if isinstance(value, Fraction):
            if value.denominator % self.modulus == 0:
                raise DenominatorClash(None, value, self.modulus)
            return value.numerator * pow(value.denominator, -1, self.modulus) % self.modulus
        raise TypeError(f"cannot coerce {type(value).__name__} into Z/{self.modulus}Z")

    def __str__(self):
        return "QQ" if self.modulus is None else f"GF({self.modulus})"


RATIONAL = CoefficientDomain()


class QExpansion:
    """Immutable truncated power series ``a_0 + a_1 q + ... + a_P q^P``.

    ``coeffs`` may be longer than ``precision + 1``; the excess is dropped
    unread. It may not be shorter.
    """

    __slots__ = ("_domain", "_coeffs")

    def __init__(self, coeffs, domain=RATIONAL, precision=None):
        coeffs = list(coeffs)
        if precision is None:
            precision = len(coeffs) - 1
        if precision < 0:
            raise ValueError("precision must be non-negative")
        if len(coeffs) < precision + 1:
            raise ValueError(f"need {precision + 1} coefficients for precision {precision}, got {len(coeffs)}")
        object.__setattr__(self, "_domain", domain)
        object.__setattr__(self, "_coeffs", tuple(domain.coerce(c) for c in coeffs[: precision + 1]))

    def __setattr__(self, name, value):
        raise AttributeError("QExpansion is immutable")

    @classmethod
    def zero(cls, precision, domain=RATIONAL):
        return cls([0] * (precision + 1), domain)

    @property
    def domain(self):
        return self._domain

    @property
    def precision(self):
        return len(self._coeffs) - 1

    @property
    def coeffs(self):
        return self._coeffs

    def __getitem__(self, n):
        if not 0 <= n <= self.precision:
            raise IndexError(f"index {n} outside precision {self.precision}")
        return self._coeffs[n]

    def __len__(self):
        return len(self._coeffs)

    def __iter__(self):
        return iter(self._coeffs)

    def __eq__(self, other):
        if not isinstance(other, QExpansion):
            return NotImplemented
        return self._domain == other._domain and self._coeffs == other._coeffs

    def __hash__(self):
        return hash((self._domain, self._coeffs))

    def __repr__(self):
        shown = ", ".join(str(c) for c in self._coeffs[:8])
        more = ", ..." if len(self._coeffs) > 8 else ""
        return f"QExpansion([{shown}{more}], domain={self._domain}, precision={self.precision})"

    def truncate(self, precision):
        if precision > self.precision:
            raise InsufficientPrecision(f"cannot extend precision {self.precision} to {precision}")
        return QExpansion(self._coeffs, self._domain, precision)

    def _check(self, other):
        if not isinstance(other, QExpansion):
            raise TypeError("expected a QExpansion")
        if self._domain != other._domain:
            raise DomainMismatch(f"{self._domain} vs {other._domain}")
        return min(self.precision, other.precision)

    def __add__(self, other):
        P = self._check(other)
        return QExpansion([a + b for a, b in zip(self._coeffs[: P + 1], other._coeffs)], self._domain)

    def __sub__(self, other):
        P = self._check(other)
        return QExpansion([a - b for a, b in zip(self._coeffs[: P + 1], other._coeffs)], self._domain)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, c):
        c = self._domain.coerce(c)
        return QExpansion([c * a for a in self._coeffs], self._domain)

    def __mul__(self, c):
        if isinstance(c, QExpansion):
            return NotImplemented
        return self.scale(c)

    __rmul__ = __mul__


def add(g, h):
    return g + h


def sub(g, h):
    return g - h


def scale(c, g):
    return g.scale(c)


@lru_cache(maxsize=65536)
def sigma(n):
    """Sum of the positive divisors of ``n``."""
    if not isinstance(n, int) or n < 1:
        raise ValueError(f"sigma is defined for positive integers, got {n!r}")
    total = 1
    for p, e in factor(n):
        total *= (p ** (e + 1) - 1) // (p - 1)
    return total


def _require_prime(r, name="r"):
    if not is_prime(r):
        raise ValueError(f"{name} must be prime, got {r!r}")


def b_op(r, g):
    """``g(q) -> g(q^r)``; precision ``P`` becomes ``r*P + r - 1``."""
    _require_prime(r)
    P = g.precision
    out = [0] * (r * P + r)
    for n, a in enumerate(g.coeffs):
        out[n * r] = a
    return QExpansion(out, g.domain)


def u_op(r, g):
    """``sum a_n q^n -> sum a_(nr) q^n``; precision ``P`` becomes ``P // r``."""
    _require_prime(r)
    if g.precision < r:
        raise InsufficientPrecision(f"U_{r} needs precision >= {r}, got {g.precision}")
    return QExpansion(g.coeffs[:: r], g.domain, g.precision // r)


def t_op(ell, g, level):
    """Hecke operator ``T_ell`` at ``level`` (requires ``ell`` coprime to the level)."""
    _require_prime(ell, "ell")
    if level % ell == 0:
        raise ValueError(f"T_{ell} is only defined for {ell} not dividing the level {level}")
    if g.precision < ell:
        raise InsufficientPrecision(f"T_{ell} needs precision >= {ell}, got {g.precision}")
    a = g.coeffs
    out = []
    for n in range(g.precision // ell + 1):
        c = a[n * ell]
        if n % ell == 0:
            c = c + ell * a[n // ell]
        out.append(c)
    return QExpansion(out, g.domain)


def reduce_mod(g, r):
    """Coefficientwise image of a rational series in ``Z/rZ``."""
    if not g.domain.is_exact_rational:
        raise DomainMismatch(f"reduce_mod expects a rational series, got {g.domain}")
    dom = CoefficientDomain.mod(r)
    out = []
    for n, c in enumerate(g.coeffs):
        if c.denominator % r == 0:
            raise DenominatorClash(n, c, r)
        out.append(c.numerator * pow(c.denominator, -1, r) % r)
    return QExpansion(out, dom)
