"""Weight-2 Eisenstein eigenseries built by raising the level of ``e``.

Sign convention: the level-one series is stored as
``e = -1/24 + sum sigma(n) q^n`` so that ``a_1 = 1`` and every eigenvalue is
read off directly as a coefficient.
"""

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from types import MappingProxyType

from .arith import is_squarefree, prime_divisors, primes_upto, split_off
from .errors import InsufficientPrecision, SpecViolation
from .series import RATIONAL, QExpansion, b_op, sigma, t_op, u_op


class EigenRaiseVariant(enum.Enum):
    """Which ``U_r`` eigenvector to keep when raising the level at ``r``."""

    EIGENVALUE_ONE = "one"  # g - r*B_r(g)
    EIGENVALUE_R = "r"  # g - B_r(g)


@dataclass(frozen=True)
class EisensteinSpec:
    """Square-free level ``N`` with ``deltas[p]`` in ``{1, p}`` for each ``p | N``."""

    level: int
    deltas: MappingProxyType = field(default_factory=dict)

    def __post_init__(self):
        N = self.level
        if not isinstance(N, int) or N < 2 or not is_squarefree(N):
            raise SpecViolation(f"level must be a square-free integer > 1, got {N!r}")
        primes = prime_divisors(N)
        deltas = {int(p): int(d) for p, d in dict(self.deltas).items()}
        if sorted(deltas) != primes:
            raise SpecViolation(f"deltas must cover exactly the primes {primes} of {N}, got {sorted(deltas)}")
        for p, d in deltas.items():
            if d not in (1, p):
                raise SpecViolation(f"delta_{p} must be 1 or {p}, got {d}")
        if not any(d == 1 for d in deltas.values()):
            raise SpecViolation("at least one prime p | N must have delta_p = 1 (otherwise no modular form results)")
        object.__setattr__(self, "deltas", MappingProxyType(dict(sorted(deltas.items()))))

    @property
    def primes(self):
        return list(self.deltas)

    def __hash__(self):
        return hash((self.level, tuple(self.deltas.items())))

    def __eq__(self, other):
        if not isinstance(other, EisensteinSpec):
            return NotImplemented
        return self.level == other.level and dict(self.deltas) == dict(other.deltas)


def all_specs(level):
    """Every valid delta assignment at a square-free ``level``."""
    primes = prime_divisors(level)
    out = []
    for mask in range(1 << len(primes)):
        deltas = {p: (p if mask >> i & 1 else 1) for i, p in enumerate(primes)}
        if any(d == 1 for d in deltas.values()):
            out.append(EisensteinSpec(level, deltas))
    return out


def e_series(prec):
    """``-1/24 + sum_{n>=1} sigma(n) q^n`` to precision ``prec``."""
    if prec < 0:
        raise ValueError("precision must be non-negative")
    return QExpansion([Fraction(-1, 24)] + [sigma(n) for n in range(1, prec + 1)], RATIONAL)


def raise_level(g, r, a_r_of_g, variant):
    """Project ``g`` onto a ``U_r``-eigenvector of level ``M*r``.

    With ``a_r(g) = 1 + r`` the result has ``U_r``-eigenvalue 1
    (``EIGENVALUE_ONE``) or ``r`` (``EIGENVALUE_R``); ``a_l`` for primes
    ``l != r`` is unchanged. ``a_r_of_g`` is only checked against ``g``.
    """
    variant = EigenRaiseVariant(variant)
    if g.precision >= 1 and g[1] != 1:
        raise ValueError(f"raise_level needs a normalized series (a_1 = 1), got a_1 = {g[1]}")
    if g.precision >= r and g[r] != g.domain.coerce(a_r_of_g):
        raise ValueError(f"stated a_{r}(g) = {a_r_of_g} but the series has {g[r]}")
    factor = r if variant is EigenRaiseVariant.EIGENVALUE_ONE else 1
    shifted = b_op(r, g).truncate(g.precision)
    return g - shifted.scale(factor)


def build_E(spec, prec, order=None):
    """The Eisenstein eigenseries with ``a_l = l + 1`` off the level and ``a_p = delta_p`` on it.

    The first raise is at the smallest ``p`` with ``delta_p = 1``; the other
    primes follow in ascending order. ``order`` overrides this for testing,
    but its first entry must still have ``delta_p = 1``.
    """
    deltas = spec.deltas
    if order is None:
        first = min(p for p, d in deltas.items() if d == 1)
        order = [first] + [p for p in deltas if p != first]
    else:
        order = list(order)
        if sorted(order) != spec.primes:
            raise SpecViolation(f"raise order {order} is not a permutation of {spec.primes}")
        if deltas[order[0]] != 1:
            raise SpecViolation(f"first raise must be at a prime with delta_p = 1, got {order[0]}")
    g = e_series(prec)
    for p in order:
        variant = EigenRaiseVariant.EIGENVALUE_ONE if deltas[p] == 1 else EigenRaiseVariant.EIGENVALUE_R
        g = raise_level(g, p, p + 1, variant)
    return g


def closed_form_coeff(spec, n):
    """``a_n`` of :func:`build_E` from multiplicativity, without building a series."""
    if n < 0:
        raise ValueError("n must be non-negative")
    if n == 0:
        if any(d != 1 for d in spec.deltas.values()):
            return Fraction(0)
        c = Fraction(-1, 24)
        for p in spec.deltas:
            c *= 1 - p
        return c
    m, exps = split_off(n, spec.primes)
    value = sigma(m)
    for p, e in exps.items():
        value *= spec.deltas[p] ** e
    return Fraction(value)


@dataclass(frozen=True)
class EigenCheck:
    operator: str
    prime: int
    eigenvalue: int
    checked_precision: int
    passed: bool
    first_mismatch: int | None = None


def verify_eigen(E, spec, ell_bound=20):
    """Check ``T_l E = (l+1) E`` for good ``l <= ell_bound`` and ``U_p E = delta_p E`` for ``p | N``.

    Operators whose output window would be empty are skipped; if nothing can
    be compared at all, :class:`InsufficientPrecision` is raised.
    """
    N = spec.level
    checks = []

    def compare(name, prime, eigenvalue, image):
        target = E.truncate(image.precision).scale(eigenvalue)
        bad = next((n for n in range(image.precision + 1) if image[n] != target[n]), None)
        checks.append(EigenCheck(name, prime, eigenvalue, image.precision, bad is None, bad))

    for ell in primes_upto(ell_bound):
        if N % ell == 0 or E.precision < ell:
            continue
        compare("T", ell, ell + 1, t_op(ell, E, N))
    for p, d in spec.deltas.items():
        if E.precision < p:
            continue
        compare("U", p, d, u_op(p, E))
    if not checks:
        raise InsufficientPrecision(f"precision {E.precision} too small for any eigen check at level {N}")
    return checks


def u_matrix_on_pair(g, r):
    """Matrix of ``U_r`` on the span of ``(g, B_r g)``, assembled from operator action.

    Returns ``((a, b), (c, d))`` with ``U_r g = a g + c B_r g`` and
    ``U_r B_r g = b g + d B_r g``; both expansions are re-verified over the
    whole shared window.
    """
    if g[1] != 1:
        raise ValueError("g must be normalized")
    Bg = b_op(r, g)
    Ug = u_op(r, g)
    UBg = u_op(r, Bg)
    if Ug.precision < r:
        raise InsufficientPrecision(f"need precision >= r^2 = {r * r} to resolve the B_r component")

    def coords(v):
        # B_r g vanishes at q^1 and has a_r = 1; g has a_1 = 1.
        x = v[1]
        y = v[r] - x * g[r]
        P = v.precision
        recon = g.truncate(P).scale(x) + Bg.truncate(P).scale(y)
        if recon != v:
            raise ArithmeticError("image does not lie in span(g, B_r g)")
        return x, y

    a, c = coords(Ug)
    b, d = coords(UBg.truncate(g.precision))
    return (a, b), (c, d)


def charpoly_of_u(g, r):
    """``(trace, det)`` of ``U_r`` on span(g, B_r g): char poly ``X^2 - trace X + det``."""
    (a, b), (c, d) = u_matrix_on_pair(g, r)
    return a + d, a * d - b * c
