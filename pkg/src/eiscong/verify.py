"""Checkers for the congruences linking rational torsion to Eisenstein series.

Every checker returns a :class:`ClaimResult`. A checker whose hypotheses
do not hold returns ``NOT_APPLICABLE`` (never a vacuous ``PASS``), and a
``FAIL`` always carries a concrete counterwitness under ``detail["witness"]``.

Most checkers accept keyword overrides (``ap=``, ``signs=``, ``f=`` ...)
that replace the data they would otherwise compute from the curve; the
mutation tests use these to inject faults.
"""

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction

from .arith import is_prime, is_squarefree, prime_divisors, primes_upto, split_off
from .curves import (
    WeierstrassCurve,
    atkin_lehner_signs,
    conductor_semistable,
    discriminant,
    reduction_data,
    torsion_order,
)
from .eisenstein import EisensteinSpec, build_E
from .errors import NotSpecial, PrecisionTooSmall, SpecViolation, SupportViolation
from .newform import af_coeffs
from .series import CoefficientDomain, QExpansion, reduce_mod, sigma

EICHLER = "eichler_congruence"
BAD_PRIME_SIGN = "bad_prime_sign"
NEGATIVE_SIGN = "negative_sign_exists"
MAIN = "main_congruence"
ORDINARITY = "ordinarity"
SPECIAL = "special_at_level"
SCREEN = "cuspidal_screen"
SCREEN_CONSISTENCY = "screen_consistency"
ISOGENY = "isogeny_invariance"

CURVE_CLAIMS = (BAD_PRIME_SIGN, EICHLER, MAIN, NEGATIVE_SIGN, ORDINARITY)


class Status(str, enum.Enum):
    PASS = "pass"
    FAIL = "fail"
    NOT_APPLICABLE = "not_applicable"


@dataclass(frozen=True)
class ClaimResult:
    claim_id: str
    status: Status
    curve_label: str | None = None
    r: int | None = None
    detail: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.status is Status.FAIL and "witness" not in self.detail:
            raise ValueError(f"{self.claim_id}: a failing result needs a counterwitness")

    @property
    def passed(self):
        return self.status is Status.PASS


def _result(claim, status, c=None, r=None, **detail):
    label = c.label if isinstance(c, WeierstrassCurve) else c
    return ClaimResult(claim, Status(status), label, r, detail)


def _require_prime(r):
    if not is_prime(r):
        raise ValueError(f"r must be prime, got {r!r}")


def _torsion_gate(c, r, claim, *, odd=False, coprime_6n=False):
    """``NOT_APPLICABLE`` result if a hypothesis on ``r`` fails, else ``None``."""
    order = torsion_order(c).order
    if order % r:
        return _result(claim, Status.NOT_APPLICABLE, c, r, reason=f"{r} does not divide the torsion order {order}")
    if odd and r == 2:
        return _result(claim, Status.NOT_APPLICABLE, c, r, reason="r must be odd")
    if coprime_6n:
        N = conductor_semistable(c)
        if (6 * N) % r == 0:
            return _result(claim, Status.NOT_APPLICABLE, c, r, reason=f"{r} divides 6N = {6 * N}")
    return None


def good_ap_table(c, bound):
    disc = discriminant(c)
    return {ell: reduction_data(c, ell).a_p for ell in primes_upto(bound) if disc % ell}


def check_eichler_congruence(c, r, bound=1000, *, ap=None):
    """``a_l(f) = 1 + l (mod r)`` for every good prime ``l <= bound``."""
    _require_prime(r)
    gate = _torsion_gate(c, r, EICHLER)
    if gate:
        return gate
    table = good_ap_table(c, bound) if ap is None else dict(ap)
    bad = [ell for ell in sorted(table) if (table[ell] - 1 - ell) % r]
    if bad:
        ell = bad[0]
        witness = {"prime": ell, "a_l": table[ell], "residue": table[ell] % r, "expected": (1 + ell) % r}
        return _result(EICHLER, Status.FAIL, c, r, witness=witness, failures=len(bad), bound=bound)
    return _result(EICHLER, Status.PASS, c, r, primes_checked=len(table), bound=bound)


def check_bad_prime_sign(c, r, *, signs=None):
    """For odd ``r``: every ``p | N`` with ``w_p = +1`` has ``r | p + 1``.

    For ``r = 2`` the statement is false in general, so the result is
    ``NOT_APPLICABLE`` and lists the primes that would contradict it.
    """
    _require_prime(r)
    gate = _torsion_gate(c, r, BAD_PRIME_SIGN)
    if gate:
        return gate
    signs = atkin_lehner_signs(c) if signs is None else dict(signs)
    violations = [p for p in sorted(signs) if signs[p] == 1 and (p + 1) % r]
    if r == 2:
        note = [{"p": p, "w_p": 1, "p_plus_1": p + 1} for p in violations]
        return _result(
            BAD_PRIME_SIGN,
            Status.NOT_APPLICABLE,
            c,
            r,
            reason="r must be odd",
            counterexample=note,
            note="w_p = +1 although r does not divide p + 1" if note else "",
        )
    if violations:
        p = violations[0]
        return _result(BAD_PRIME_SIGN, Status.FAIL, c, r, witness={"prime": p, "w_p": 1, "p_plus_1_mod_r": (p + 1) % r})
    checked = [p for p in sorted(signs) if signs[p] == 1]
    return _result(BAD_PRIME_SIGN, Status.PASS, c, r, primes_with_w_plus=checked)


def check_exists_negative_w(c, r, *, signs=None):
    """Some ``p | N`` has ``w_p = -1`` (given ``r`` prime to 6N dividing the torsion)."""
    _require_prime(r)
    gate = _torsion_gate(c, r, NEGATIVE_SIGN, coprime_6n=True)
    if gate:
        return gate
    signs = atkin_lehner_signs(c) if signs is None else dict(signs)
    negative = [p for p in sorted(signs) if signs[p] == -1]
    if not negative:
        return _result(NEGATIVE_SIGN, Status.FAIL, c, r, witness={"primes": sorted(signs), "signs": [signs[p] for p in sorted(signs)]})
    return _result(NEGATIVE_SIGN, Status.PASS, c, r, primes=negative)


def deltas_from_signs(c, *, signs=None):
    """``delta_p = 1`` where ``w_p = -1`` and ``delta_p = p`` where ``w_p = +1``."""
    signs = atkin_lehner_signs(c) if signs is None else dict(signs)
    N = math.prod(signs)
    if all(w == 1 for w in signs.values()):
        raise SpecViolation(f"every w_p is +1 at level {N}: no p with w_p = -1")
    return EisensteinSpec(N, {p: (1 if w == -1 else p) for p, w in signs.items()})


def sturm_precision(N, slack=10):
    """``ceil(mu(N) / 6) + slack`` where ``mu(N) = N * prod(1 + 1/p)`` for square-free ``N``."""
    if not is_squarefree(N):
        raise ValueError(f"level must be square-free, got {N}")
    mu = Fraction(N)
    for p in prime_divisors(N) if N > 1 else []:
        mu *= Fraction(p + 1, p)
    return math.ceil(mu * Fraction(2, 12)) + slack


def _fmt(q):
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def check_main_congruence(c, r, *, slack=10, f=None, E=None, signs=None):
    """``a_n(f) = a_n(E) (mod r)`` for ``1 <= n <= sturm_precision(N)`` and ``a_0(E) = 0 (mod r)``.

    Agreement up to a finite index is evidence, not proof; the precision is
    part of the result.
    """
    _require_prime(r)
    gate = _torsion_gate(c, r, MAIN, coprime_6n=True)
    if gate:
        return gate
    N = conductor_semistable(c)
    try:
        spec = deltas_from_signs(c, signs=signs)
    except SpecViolation as exc:
        return _result(MAIN, Status.FAIL, c, r, witness={"signs": "all +1", "error": str(exc)})
    prec = sturm_precision(N, slack)
    if E is None:
        E = build_E(spec, prec)
    if f is None:
        f = af_coeffs(c, prec).series
    prec = min(prec, E.precision, f.precision)
    E_mod = reduce_mod(E.truncate(prec), r)
    f_mod = reduce_mod(f.truncate(prec), r)
    deltas = {str(p): d for p, d in spec.deltas.items()}
    common = {"precision": prec, "deltas": deltas, "a0_E": _fmt(E[0])}
    for n in range(1, prec + 1):
        if f_mod[n] != E_mod[n]:
            witness = {"index": n, "f_residue": f_mod[n], "E_residue": E_mod[n]}
            return _result(MAIN, Status.FAIL, c, r, witness=witness, **common)
    if E_mod[0] != 0:
        return _result(MAIN, Status.FAIL, c, r, witness={"index": 0, "E_residue": E_mod[0]}, **common)
    return _result(MAIN, Status.PASS, c, r, **common)


def check_ordinarity(c, r, *, a_r=None):
    """``a_r(f) = 1 (mod r)``, so in particular ``f`` is ordinary at ``r``."""
    _require_prime(r)
    gate = _torsion_gate(c, r, ORDINARITY, coprime_6n=True)
    if gate:
        return gate
    if a_r is None:
        a_r = reduction_data(c, r).a_p
    ordinary = a_r % r != 0
    if a_r % r != 1:
        return _result(ORDINARITY, Status.FAIL, c, r, witness={"prime": r, "a_r": a_r, "residue": a_r % r}, ordinary=ordinary)
    return _result(ORDINARITY, Status.PASS, c, r, a_r=a_r, ordinary=ordinary)


def check_isogeny_invariance(c1, c2, bound=100, *, ap1=None, ap2=None):
    """``a_l`` agrees at every prime ``l <= bound`` of good reduction for both curves."""
    t1 = good_ap_table(c1, bound) if ap1 is None else dict(ap1)
    t2 = good_ap_table(c2, bound) if ap2 is None else dict(ap2)
    shared = sorted(set(t1) & set(t2))
    for ell in shared:
        if t1[ell] != t2[ell]:
            return _result(ISOGENY, Status.FAIL, c2, None, witness={"prime": ell, "a_l": [t1[ell], t2[ell]]}, partner=c1.label)
    return _result(ISOGENY, Status.PASS, c2, None, partner=c1.label, primes_checked=len(shared))


# -- special streams and level lowering -----------------------------------


@dataclass(frozen=True)
class SpecialStream:
    """A mod-``r`` coefficient stream meant to be special at ``level``.

    Construction does not enforce the property, so that faulty streams can
    be represented; use :func:`is_special` to test it.
    """

    level: int
    r: int
    series: QExpansion

    def __post_init__(self):
        if self.series.domain != CoefficientDomain.mod(self.r):
            raise ValueError(f"series must live in GF({self.r})")

    @property
    def precision(self):
        return self.series.precision


def special_coefficient(n, M, r):
    """``sigma(m) * (-1)^(sum of ord_p(n) over p | M) mod r``, ``m`` the prime-to-M part of ``n``."""
    primes = prime_divisors(M) if M > 1 else []
    m, exps = split_off(n, primes)
    sign = -1 if sum(exps.values()) % 2 else 1
    return sign * sigma(m) % r


def is_special(g, M):
    """Does every coefficient ``a_n``, ``1 <= n <= precision``, match the special-form formula at level ``M``?"""
    if isinstance(g, SpecialStream):
        g = g.series
    r = g.domain.modulus
    if r is None:
        raise ValueError("is_special expects a mod-r series")
    if not is_squarefree(M):
        raise ValueError(f"level must be square-free, got {M}")
    for n in range(1, g.precision + 1):
        expected = special_coefficient(n, M, r)
        if g[n] != expected:
            return _result(SPECIAL, Status.FAIL, None, r, level=M, witness={"index": n, "residue": g[n], "expected": expected})
    return _result(SPECIAL, Status.PASS, None, r, level=M, precision=g.precision)


def make_special_stream(M, r, prec):
    if not is_squarefree(M):
        raise ValueError(f"level must be square-free, got {M}")
    if r == 2 or not is_prime(r):
        raise ValueError(f"r must be an odd prime, got {r}")
    coeffs = [0] + [special_coefficient(n, M, r) for n in range(1, prec + 1)]
    return SpecialStream(M, r, QExpansion(coeffs, CoefficientDomain.mod(r)))


def check_lowering_preconditions(M, s, r):
    """Every prime of ``M``, including ``s``, must be ``-1 mod r``.

    The support of ``E - g`` only needs this for the primes of ``M/s``; the
    output is special at ``M/s`` only if ``s = -1 mod r`` as well (for
    ``n = s`` the lowered coefficient is ``1 - (-1)^2 = 0`` against
    ``sigma(s) = 1 + s``).
    """
    if r == 2 or not is_prime(r):
        raise SpecViolation(f"r must be an odd prime, got {r}")
    if M % r == 0:
        raise SpecViolation(f"r = {r} divides the level {M}")
    if not is_prime(s) or M % s:
        raise SpecViolation(f"s = {s} must be a prime dividing {M}")
    for p in prime_divisors(M):
        if (p + 1) % r:
            raise SpecViolation(f"{p} divides {M} but {p} is not -1 mod {r}")


def lower_level(g, s):
    """Turn a stream special at level ``M`` into one special at level ``M/s``.

    With ``E`` the Eisenstein series having ``a_s = 1`` and ``a_p = p`` for
    the other ``p | M``, the difference ``E - g`` mod ``r`` is supported on
    multiples of ``s``; writing it as ``h(q^s)``, the result is ``h/2``.
    Constant terms are ignored throughout.
    """
    check_lowering_preconditions(g.level, s, g.r)
    out = lower_level_unchecked(g, s)
    check = is_special(out.series, out.level)
    if not check.passed:
        raise NotSpecial(check)
    return out


def lower_level_unchecked(g, s):
    """The lowering construction without the congruence preconditions or the output check.

    Still enforces the support condition. Useful for showing what goes wrong
    when a precondition is dropped.
    """
    M, r = g.level, g.r
    if r == 2 or M % s or M % r == 0:
        raise SpecViolation(f"need odd r not dividing M and s | M, got M={M}, s={s}, r={r}")
    P = g.precision
    if P // s < 1:
        raise PrecisionTooSmall(f"precision {P} leaves nothing after dividing by {s}")
    spec = EisensteinSpec(M, {p: (1 if p == s else p) for p in prime_divisors(M)})
    E = build_E(spec, P)
    E_tail = QExpansion([0] + list(E.coeffs[1:]))
    diff = reduce_mod(E_tail, r) - g.series
    for n in range(1, P + 1):
        if n % s and diff[n]:
            raise SupportViolation(n, diff[n], s)
    half = pow(2, -1, r)
    h = [0] + [diff[m * s] for m in range(1, P // s + 1)]
    return SpecialStream(M // s, r, QExpansion(h, CoefficientDomain.mod(r)).scale(half))


def lowering_order(M, r):
    """An order of the primes of ``M`` in which repeated lowering is admissible, or ``None``."""
    primes = prime_divisors(M) if M > 1 else []
    if M % r == 0 or any((p + 1) % r for p in primes):
        return None
    return primes


def lower_to_level_one(g):
    """Apply :func:`lower_level` until the level is 1; returns every intermediate stream."""
    order = lowering_order(g.level, g.r)
    if order is None:
        raise SpecViolation(f"no admissible lowering order for level {g.level} mod {g.r}")
    chain = [g]
    for s in order:
        chain.append(lower_level(chain[-1], s))
    return chain


def admissible_triples(max_level=100, max_r=50):
    """All ``(M, s, r)`` with ``M`` square-free and composite, for which :func:`lower_level` applies."""
    out = []
    for M in range(6, max_level + 1):
        if not is_squarefree(M) or is_prime(M):
            continue
        for r in primes_upto(max_r, 3):
            for s in prime_divisors(M):
                try:
                    check_lowering_preconditions(M, s, r)
                except SpecViolation:
                    continue
                out.append((M, s, r))
    return out


# -- cuspidal screening ---------------------------------------------------


def cuspidal_screen(p, q, r):
    """Is odd ``r`` ruled out as a torsion prime for every curve of conductor ``p*q``?

    ``r`` is excluded (``PASS``) when ``r`` divides neither ``6pq`` nor
    ``(p^2 - 1)(q^2 - 1)``; otherwise the result is ``NOT_APPLICABLE`` with
    verdict ``not-excluded``.
    """
    for name, v in (("p", p), ("q", q), ("r", r)):
        if not is_prime(v):
            raise ValueError(f"{name} must be prime, got {v!r}")
    if p == q:
        raise ValueError("p and q must be distinct")
    if r == 2:
        raise ValueError("r must be odd")
    level_part = 6 * p * q % r
    cusp_part = (p * p - 1) * (q * q - 1) % r
    excluded = level_part != 0 and cusp_part != 0
    return ClaimResult(
        SCREEN,
        Status.PASS if excluded else Status.NOT_APPLICABLE,
        None,
        r,
        {
            "verdict": "excluded" if excluded else "not-excluded",
            "p": p,
            "q": q,
            "six_pq_mod_r": level_part,
            "cusp_factor_mod_r": cusp_part,
        },
    )


# -- orchestration --------------------------------------------------------


@dataclass(frozen=True)
class VerifyOptions:
    prime_bound: int = 1000
    precision_slack: int = 10


@dataclass(frozen=True)
class VerificationReport:
    label: str | None
    ainvs: tuple
    conductor: int
    torsion_order: int
    results: tuple
    precision: dict  # r -> truncation index used by the main congruence

    def counts(self):
        tally = {s: 0 for s in Status}
        for res in self.results:
            tally[res.status] += 1
        return tally

    @property
    def ok(self):
        return all(res.status is not Status.FAIL for res in self.results)


def _not_applicable_block(c, r, reason):
    out = []
    for claim in CURVE_CLAIMS:
        if claim == BAD_PRIME_SIGN and r == 2:
            out.append(check_bad_prime_sign(c, r))
        else:
            out.append(_result(claim, Status.NOT_APPLICABLE, c, r, reason=reason))
    return out


def verify_curve(c, options=None):
    """Run every applicable checker for each prime ``r`` dividing the torsion order."""
    options = options or VerifyOptions()
    N = conductor_semistable(c)
    torsion = torsion_order(c)
    results = []
    precision = {}
    for r in sorted(torsion.prime_divisors):
        if r in (2, 3):
            results += _not_applicable_block(c, r, f"r = {r} divides 6")
            continue
        if N % r == 0:
            results += _not_applicable_block(c, r, f"r = {r} divides the conductor {N}")
            continue
        results.append(check_eichler_congruence(c, r, options.prime_bound))
        results.append(check_bad_prime_sign(c, r))
        results.append(check_exists_negative_w(c, r))
        main = check_main_congruence(c, r, slack=options.precision_slack)
        if "precision" in main.detail:
            precision[r] = main.detail["precision"]
        results.append(main)
        results.append(check_ordinarity(c, r))
        primes = prime_divisors(N)
        if len(primes) == 2:
            screen = cuspidal_screen(primes[0], primes[1], r)
            if screen.detail["verdict"] == "not-excluded":
                results.append(_result(SCREEN_CONSISTENCY, Status.PASS, c, r, verdict="not-excluded"))
            else:
                results.append(
                    _result(SCREEN_CONSISTENCY, Status.FAIL, c, r, witness={"p": primes[0], "q": primes[1], "r": r})
                )
    results.sort(key=lambda res: (res.claim_id, res.r if res.r is not None else 0))
    return VerificationReport(c.label, c.ainvs, N, torsion.order, tuple(results), precision)


__all__ = [
    "ClaimResult",
    "SpecialStream",
    "Status",
    "VerificationReport",
    "VerifyOptions",
    "admissible_triples",
    "check_bad_prime_sign",
    "check_eichler_congruence",
    "check_exists_negative_w",
    "check_isogeny_invariance",
    "check_main_congruence",
    "check_ordinarity",
    "cuspidal_screen",
    "deltas_from_signs",
    "is_special",
    "lower_level",
    "lower_level_unchecked",
    "lower_to_level_one",
    "make_special_stream",
    "sturm_precision",
    "verify_curve",
]
