"""Elliptic curves over Q given by integral Weierstrass models.

All models are assumed globally minimal; conductors, reduction types and
torsion computed here are only meaningful under that contract. A cheap
guard (``p | gcd(c4, disc)`` means "not semistable") catches most
non-minimal input at semistable primes, but nothing more is attempted.
"""

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, reduce

from . import _kernels
from .arith import factor, prime_divisors, primes_upto
from .errors import NotSemistable, OffCurve, SingularCurve, TorsionScreenError

MAZUR_ORDERS = frozenset({1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 12, 16})
MAX_TORSION_ORDER = 16


@dataclass(frozen=True)
class WeierstrassCurve:
    """``y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6``."""

    a1: int
    a2: int
    a3: int
    a4: int
    a6: int
    label: str | None = None
    optimal: bool | None = None

    def __post_init__(self):
        for name in ("a1", "a2", "a3", "a4", "a6"):
            if not isinstance(getattr(self, name), int):
                raise TypeError(f"{name} must be an integer")
        if invariants(self).disc == 0:
            raise SingularCurve(f"curve {self.ainvs} has zero discriminant")

    @classmethod
    def from_ainvs(cls, ainvs, label=None, optimal=None):
        ainvs = [int(a) for a in ainvs]
        if len(ainvs) != 5:
            raise ValueError(f"expected 5 coefficients, got {len(ainvs)}")
        return cls(*ainvs, label=label, optimal=optimal)

    @property
    def ainvs(self):
        return (self.a1, self.a2, self.a3, self.a4, self.a6)

    def __str__(self):
        name = self.label or "curve"
        return f"{name} {list(self.ainvs)}"


@dataclass(frozen=True)
class Invariants:
    b2: int
    b4: int
    b6: int
    b8: int
    c4: int
    c6: int
    disc: int


@lru_cache(maxsize=4096)
def _invariants(a1, a2, a3, a4, a6):
    b2 = a1 * a1 + 4 * a2
    b4 = 2 * a4 + a1 * a3
    b6 = a3 * a3 + 4 * a6
    b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
    c4 = b2 * b2 - 24 * b4
    c6 = -(b2**3) + 36 * b2 * b4 - 216 * b6
    disc = -b2 * b2 * b8 - 8 * b4**3 - 27 * b6 * b6 + 9 * b2 * b4 * b6
    assert 1728 * disc == c4**3 - c6**2
    return Invariants(b2, b4, b6, b8, c4, c6, disc)


def invariants(c):
    """``b2, b4, b6, b8, c4, c6`` and the discriminant of the model."""
    return _invariants(*c.ainvs)


def discriminant(c):
    return invariants(c).disc


def bad_primes(c):
    return prime_divisors(discriminant(c))


@lru_cache(maxsize=4096)
def conductor_semistable(c):
    """Product of the primes of bad reduction, after checking none is additive."""
    inv = invariants(c)
    N = 1
    for p in prime_divisors(inv.disc):
        if inv.c4 % p == 0:
            raise NotSemistable(p)
        N *= p
    return N


def is_semistable(c):
    try:
        conductor_semistable(c)
    except NotSemistable:
        return False
    return True


def short_model(c):
    """``(A, B)`` with ``Y^2 = X^3 + A X + B`` isomorphic to ``c`` via ``X = 36x + 3b2``, ``Y = 108(2y + a1 x + a3)``."""
    inv = invariants(c)
    return -27 * inv.c4, -54 * inv.c6


# -- point counting -------------------------------------------------------


@lru_cache(maxsize=200000)
def count_points(c, p, method=None):
    """Smooth points of the reduction mod ``p`` including infinity.

    Returns ``(total_smooth, is_singular_reduction)``. For good ``p > 3`` the
    count is a character sum over the short model; otherwise every pair
    ``(x, y)`` is tested. ``method`` ("charsum" or "exhaustive") forces one.
    """
    singular_reduction = discriminant(c) % p == 0
    if method is None:
        method = "charsum" if (p > 3 and not singular_reduction) else "exhaustive"
    if method == "charsum":
        if p <= 3 or singular_reduction:
            raise ValueError("character-sum count needs good reduction at p > 3")
        A, B = short_model(c)
        return _kernels.count_affine_short(A, B, p) + 1, False
    if method != "exhaustive":
        raise ValueError(f"unknown counting method {method!r}")
    on_curve, singular = _kernels.count_affine_exhaustive(*c.ainvs, p)
    return on_curve - singular + 1, singular_reduction


class ReductionKind(enum.Enum):
    GOOD = "good"
    SPLIT = "split"
    NONSPLIT = "nonsplit"
    ADDITIVE = "additive"

    @property
    def multiplicative(self):
        return self in (ReductionKind.SPLIT, ReductionKind.NONSPLIT)


@dataclass(frozen=True)
class ReductionData:
    """Local data at ``p``; ``w`` is the Atkin-Lehner sign, set only for multiplicative reduction."""

    p: int
    kind: ReductionKind
    a_p: int
    w: int | None = None

    def __post_init__(self):
        if self.kind is ReductionKind.SPLIT:
            assert self.a_p == 1 and self.w == -1
        elif self.kind is ReductionKind.NONSPLIT:
            assert self.a_p == -1 and self.w == 1
        elif self.kind is ReductionKind.GOOD:
            assert self.a_p * self.a_p <= 4 * self.p, f"Hasse bound violated at {self.p}"


@lru_cache(maxsize=200000)
def reduction_data(c, p):
    inv = invariants(c)
    total, _ = count_points(c, p)
    if inv.disc % p:
        return ReductionData(p, ReductionKind.GOOD, p + 1 - total)
    if inv.c4 % p == 0:
        return ReductionData(p, ReductionKind.ADDITIVE, 0)
    # a node: smooth locus is a torus with p - 1 (split) or p + 1 (non-split) points
    a_p = p - total
    if a_p == 1:
        return ReductionData(p, ReductionKind.SPLIT, 1, -1)
    if a_p == -1:
        return ReductionData(p, ReductionKind.NONSPLIT, -1, 1)
    raise ArithmeticError(f"multiplicative reduction at {p} gave a_p = {a_p}")


def ap(c, p):
    return reduction_data(c, p).a_p


def atkin_lehner_signs(c):
    """``{p: w_p}`` for the primes dividing the conductor."""
    N = conductor_semistable(c)
    return {p: reduction_data(c, p).w for p in prime_divisors(N)}


# -- group law over Q -----------------------------------------------------


def is_on_curve(c, P):
    if P is None:
        return True
    x, y = P
    a1, a2, a3, a4, a6 = c.ainvs
    return y * y + a1 * x * y + a3 * y == x**3 + a2 * x * x + a4 * x + a6


def _point(c, P):
    if P is None:
        return None
    x, y = Fraction(P[0]), Fraction(P[1])
    if not is_on_curve(c, (x, y)):
        raise OffCurve(f"({x}, {y}) is not on {c}")
    return x, y


def point_neg(c, P):
    P = _point(c, P)
    if P is None:
        return None
    x, y = P
    return x, -y - c.a1 * x - c.a3


def point_add(c, P, Q):
    """Chord-and-tangent sum; ``None`` is the point at infinity."""
    P, Q = _point(c, P), _point(c, Q)
    return _add(c, P, Q)


def _add(c, P, Q):
    if P is None:
        return Q
    if Q is None:
        return P
    a1, a2, a3, a4, _ = c.ainvs
    x1, y1 = P
    x2, y2 = Q
    if x1 == x2:
        if y1 + y2 + a1 * x2 + a3 == 0:
            return None
        lam = (3 * x1 * x1 + 2 * a2 * x1 + a4 - a1 * y1) / (2 * y1 + a1 * x1 + a3)
    else:
        lam = (y2 - y1) / (x2 - x1)
    nu = y1 - lam * x1
    x3 = lam * lam + a1 * lam - a2 - x1 - x2
    y3 = -(lam + a1) * x3 - nu - a3
    return x3, y3


def point_order(c, P, cap=MAX_TORSION_ORDER):
    """Order of ``P`` if it is at most ``cap``, else ``None`` (treated as non-torsion)."""
    P = _point(c, P)
    Q = P
    for k in range(1, cap + 1):
        if Q is None:
            return k
        Q = _add(c, Q, P)
    return None


def point_mul(c, n, P):
    P = _point(c, P)
    if n < 0:
        n, P = -n, point_neg(c, P)
    R = None
    while n:
        if n & 1:
            R = _add(c, R, P)
        P = _add(c, P, P)
        n >>= 1
    return R


# -- torsion --------------------------------------------------------------


@dataclass(frozen=True)
class TorsionResult:
    order: int
    prime_divisors: frozenset
    witness_points: tuple  # ((x, y), order) pairs, identity omitted
    gcd_bound: int

    def __post_init__(self):
        if self.order not in MAZUR_ORDERS:
            raise TorsionScreenError(f"torsion order {self.order} is not on Mazur's list")


def point_count_bound(c, lo=3, hi=200, min_primes=10):
    """gcd of ``#E(F_l)`` over good primes ``lo < l <= hi``; torsion injects into each."""
    disc = discriminant(c)
    counts = [count_points(c, ell)[0] for ell in primes_upto(hi, lo + 1) if disc % ell]
    if len(counts) < min_primes:
        raise ValueError(f"only {len(counts)} good primes in ({lo}, {hi}]")
    return reduce(math.gcd, counts)


def _integer_roots_depressed_cubic(A, C):
    """Integer roots of ``X^3 + A X + C``, by exact bisection on monotone pieces."""

    def f(x):
        return x * x * x + A * x + C

    R = 1 + max(abs(A), abs(C))
    if A >= 0:
        pieces = [(-R, R, 1)]
    else:
        # critical points at +-s with s^2 = -A/3
        s_floor = math.isqrt(-A // 3)
        s_ceil = s_floor if 3 * s_floor * s_floor == -A else s_floor + 1
        pieces = [(-R, -s_ceil, 1), (-s_floor, s_floor, -1), (s_ceil, R, 1)]
    roots = set()
    for lo, hi, sign in pieces:
        if lo > hi:
            continue
        while lo < hi:
            mid = (lo + hi) // 2
            if sign * f(mid) < 0:
                lo = mid + 1
            else:
                hi = mid
        if f(lo) == 0:
            roots.add(lo)
    return sorted(roots)


def _squared_divisors(n):
    """All ``y >= 1`` with ``y^2 | n``."""
    ys = [1]
    for p, e in factor(n):
        ys = [y * p**k for y in ys for k in range(e // 2 + 1)]
    return sorted(ys)


def lutz_nagell_candidates(c):
    """Integral points ``(X, Y)`` on the short model with ``Y = 0`` or ``Y^2 | 4A^3 + 27B^2``."""
    A, B = short_model(c)
    D = 4 * A**3 + 27 * B * B
    assert -16 * D == 6**12 * discriminant(c)
    pts = []
    for X in _integer_roots_depressed_cubic(A, B):
        pts.append((X, 0))
    for y in _squared_divisors(D):
        for X in _integer_roots_depressed_cubic(A, B - y * y):
            pts.append((X, y))
            pts.append((X, -y))
    return pts


def _from_short(c, X, Y):
    b2 = invariants(c).b2
    x = Fraction(X - 3 * b2, 36)
    y = (Fraction(Y, 108) - c.a1 * x - c.a3) / 2
    return x, y


@lru_cache(maxsize=4096)
def torsion_order(c):
    """Order of ``E(Q)_tors`` via Lutz-Nagell, cross-checked against :func:`point_count_bound`."""
    bound = point_count_bound(c)
    witnesses = []
    for X, Y in lutz_nagell_candidates(c):
        P = _from_short(c, X, Y)
        n = point_order(c, P)
        if n is not None:
            witnesses.append((P, n))
    witnesses.sort(key=lambda w: (w[1], w[0]))
    order = len(witnesses) + 1
    if bound % order:
        raise TorsionScreenError(f"torsion order {order} does not divide point-count bound {bound}")
    return TorsionResult(order, frozenset(prime_divisors(order)) if order > 1 else frozenset(), tuple(witnesses), bound)


def clear_caches():
    """Drop memoised point counts, local data and torsion (for timing runs)."""
    for fn in (_invariants, conductor_semistable, count_points, reduction_data, torsion_order):
        fn.cache_clear()
