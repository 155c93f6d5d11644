import random
from fractions import Fraction

import pytest

from eiscong.arith import is_squarefree, primes_upto
from eiscong.corpus import builtin_corpus
from eiscong.curves import atkin_lehner_signs, torsion_order
from eiscong.eisenstein import EisensteinSpec, build_E
from eiscong.errors import NotSpecial, PrecisionTooSmall, SpecViolation, SupportViolation
from eiscong.newform import af_coeffs
from eiscong.series import CoefficientDomain, QExpansion, reduce_mod
from eiscong.verify import (
    BAD_PRIME_SIGN,
    EICHLER,
    MAIN,
    NEGATIVE_SIGN,
    ORDINARITY,
    SCREEN_CONSISTENCY,
    ClaimResult,
    SpecialStream,
    Status,
    VerifyOptions,
    admissible_triples,
    check_bad_prime_sign,
    check_eichler_congruence,
    check_exists_negative_w,
    check_isogeny_invariance,
    check_main_congruence,
    check_ordinarity,
    cuspidal_screen,
    deltas_from_signs,
    is_special,
    lower_level,
    lower_level_unchecked,
    lower_to_level_one,
    make_special_stream,
    sturm_precision,
    verify_curve,
)

PASS, FAIL, NA = Status.PASS, Status.FAIL, Status.NOT_APPLICABLE


def sigma_oracle(n):
    return sum(d for d in range(1, n + 1) if n % d == 0)


def special_oracle(n, M, r):
    """Strip every prime of M from n by trial division, counting removals."""
    flips = 0
    for p in range(2, M + 1):
        if M % p == 0 and all(p % d for d in range(2, p)):
            while n % p == 0:
                n //= p
                flips += 1
    return (-1) ** flips * sigma_oracle(n) % r


def flip(series, n, delta=1):
    coeffs = list(series.coeffs)
    coeffs[n] += delta
    return QExpansion(coeffs, series.domain)


# -- individual checkers ------------------------------------------------------


def test_failing_result_needs_witness():
    with pytest.raises(ValueError):
        ClaimResult("x", FAIL)


def test_eichler_11a1(e11a1):
    res = check_eichler_congruence(e11a1, 5)
    assert res.status is PASS and res.detail["primes_checked"] == 167


def test_eichler_26b1(e26b1):
    assert check_eichler_congruence(e26b1, 7).status is PASS


def test_eichler_not_applicable(e11a1):
    res = check_eichler_congruence(e11a1, 7)
    assert res.status is NA and "7 does not divide" in res.detail["reason"]


def test_eichler_mutation(e11a1):
    from eiscong.verify import good_ap_table

    table = good_ap_table(e11a1, 200)
    table[37] += 1
    res = check_eichler_congruence(e11a1, 5, ap=table)
    assert res.status is FAIL and res.detail["witness"]["prime"] == 37


def test_bad_prime_sign_26b1(e26b1):
    signs = atkin_lehner_signs(e26b1)
    assert signs == {2: -1, 13: 1}
    res = check_bad_prime_sign(e26b1, 7)
    assert res.status is PASS and res.detail["primes_with_w_plus"] == [13]


def test_bad_prime_sign_11a1_vacuous(e11a1):
    res = check_bad_prime_sign(e11a1, 5)
    assert res.status is PASS and res.detail["primes_with_w_plus"] == []


def test_bad_prime_sign_14a1_r2(e14a1):
    assert atkin_lehner_signs(e14a1)[2] == 1
    res = check_bad_prime_sign(e14a1, 2)
    assert res.status is NA
    assert res.detail["reason"] == "r must be odd"
    assert res.detail["counterexample"][0] == {"p": 2, "w_p": 1, "p_plus_1": 3}


def test_bad_prime_sign_mutation(e26b1):
    res = check_bad_prime_sign(e26b1, 7, signs={2: 1, 13: 1})
    assert res.status is FAIL and res.detail["witness"]["prime"] == 2


def test_negative_sign(e11a1, e26b1, e14a1):
    assert check_exists_negative_w(e11a1, 5).status is PASS
    assert check_exists_negative_w(e26b1, 7).detail["primes"] == [2]
    assert check_exists_negative_w(e14a1, 5).status is NA
    res = check_exists_negative_w(e26b1, 7, signs={2: 1, 13: 1})
    assert res.status is FAIL and res.detail["witness"]["primes"] == [2, 13]


def test_deltas_from_signs(e11a1, e26b1):
    assert deltas_from_signs(e11a1) == EisensteinSpec(11, {11: 1})
    assert deltas_from_signs(e26b1) == EisensteinSpec(26, {2: 1, 13: 13})
    with pytest.raises(SpecViolation):
        deltas_from_signs(e26b1, signs={2: 1, 13: 1})


@pytest.mark.parametrize("N,expected", [(11, 12), (26, 17), (14, 14), (1, 11), (30, 22)])
def test_sturm_precision(N, expected):
    assert sturm_precision(N) == expected


def test_sturm_precision_rejects_non_squarefree():
    with pytest.raises(ValueError):
        sturm_precision(12)


def test_main_congruence_11a1(e11a1):
    res = check_main_congruence(e11a1, 5)
    assert res.status is PASS
    assert res.detail["precision"] == 12 and res.detail["a0_E"] == "5/12"
    E = reduce_mod(build_E(EisensteinSpec(11, {11: 1}), 12), 5)
    assert (E[0], E[2], E[3]) == (0, 3, 4)


def test_main_congruence_26b1(e26b1):
    res = check_main_congruence(e26b1, 7)
    assert res.status is PASS and res.detail["precision"] == 17


def test_main_congruence_not_applicable(e11a1):
    assert check_main_congruence(e11a1, 7).status is NA


@pytest.mark.parametrize("n", [1, 2, 5, 11, 12])
def test_main_congruence_mutation(e11a1, n):
    f = af_coeffs(e11a1, 12).series
    res = check_main_congruence(e11a1, 5, f=flip(f, n))
    assert res.status is FAIL and res.detail["witness"]["index"] == n


def test_main_congruence_constant_term_mutation(e11a1):
    E = build_E(EisensteinSpec(11, {11: 1}), 12)
    res = check_main_congruence(e11a1, 5, E=flip(E, 0))
    assert res.status is FAIL and res.detail["witness"]["index"] == 0


def test_main_implies_eichler_at_small_primes():
    for entry in builtin_corpus():
        c = entry.curve
        for r in torsion_order(c).prime_divisors:
            main = check_main_congruence(c, r)
            if main.status is PASS:
                bound = main.detail["precision"]
                assert check_eichler_congruence(c, r, bound).status is PASS


def test_ordinarity_claim(e11a1):
    assert check_ordinarity(e11a1, 5).status is PASS
    res = check_ordinarity(e11a1, 5, a_r=2)
    assert res.status is FAIL and res.detail["witness"] == {"prime": 5, "a_r": 2, "residue": 2}


def test_isogeny_invariance():
    by_label = {e.label: e.curve for e in builtin_corpus()}
    assert check_isogeny_invariance(by_label["11a1"], by_label["11a3"]).status is PASS
    res = check_isogeny_invariance(by_label["11a1"], by_label["37a1"])
    assert res.status is FAIL and res.detail["witness"] == {"prime": 3, "a_l": [-1, -3]}


# -- special streams ----------------------------------------------------------


def test_make_special_stream_examples():
    g = make_special_stream(15, 7, 20)
    assert g.series[3] == 6 and g.series[1] == 1 and g.series[2] == 3 and g.series[0] == 0


def test_special_formula_against_oracle():
    for M in (1, 6, 15, 26, 30, 77):
        for r in (5, 7, 13):
            g = make_special_stream(M, r, 200)
            assert all(g.series[n] == special_oracle(n, M, r) for n in range(1, 201))


def test_special_soundness_exhaustive():
    levels = [M for M in range(1, 101) if is_squarefree(M)]
    for M in levels:
        for r in primes_upto(50, 3):
            if M % r == 0:
                continue
            P = 500 if (M + r) % 7 == 0 else 120
            assert is_special(make_special_stream(M, r, P), M).status is PASS


def test_special_stream_requires_mod_r_series():
    with pytest.raises(ValueError):
        SpecialStream(15, 7, QExpansion([0, 1]))


def test_is_special_reports_mutation_index():
    g = make_special_stream(15, 7, 100)
    rng = random.Random(3)
    for n in rng.sample(range(1, 101), 10):
        res = is_special(flip(g.series, n), 15)
        assert res.status is FAIL and res.detail["witness"]["index"] == n


def test_11a1_reduction_is_not_special_at_11(e11a1):
    f = reduce_mod(af_coeffs(e11a1, 60).series, 5)
    res = is_special(f, 11)
    # a_11(f) = 1 but the level-11 formula gives -1
    assert res.status is FAIL and res.detail["witness"]["index"] == 11
    assert res.detail["witness"] == {"index": 11, "residue": 1, "expected": 4}
    assert is_special(f, 1).status is FAIL


# -- level lowering -----------------------------------------------------------


def test_admissible_triples_found():
    triples = admissible_triples()
    assert len(triples) >= 3
    assert (10, 2, 3) in triples and (26, 13, 3) not in triples
    for M, s, r in triples:
        assert all((p + 1) % r == 0 for p in (2, 5, 11, 17, 23, 29, 41, 47) if M % p == 0)


@pytest.mark.parametrize("M,s,r", admissible_triples())
def test_lowering_is_special(M, s, r):
    out = lower_level(make_special_stream(M, r, 500), s)
    assert out.level == M // s and out.precision == 500 // s
    assert is_special(out, M // s).status is PASS
    assert out.series == make_special_stream(M // s, r, 500 // s).series


def test_lowering_to_level_one():
    chain = lower_to_level_one(make_special_stream(55, 3, 600))
    assert [g.level for g in chain] == [55, 11, 1]
    assert chain[-1].series[1] == 1


def test_lowering_precondition_on_s_is_needed():
    g = make_special_stream(26, 3, 500)
    with pytest.raises(SpecViolation):
        lower_level(g, 13)
    out = lower_level_unchecked(g, 13)
    res = is_special(out, 2)
    assert res.status is FAIL and res.detail["witness"]["index"] == 13


def test_lowering_rejects_bad_inputs():
    g = make_special_stream(26, 3, 100)
    with pytest.raises(SpecViolation):
        lower_level(g, 3)
    with pytest.raises(SpecViolation):
        lower_level(make_special_stream(15, 7, 100), 5)


def test_lowering_precision_too_small():
    g = make_special_stream(22, 3, 10)
    with pytest.raises(PrecisionTooSmall):
        lower_level(g, 11)


def test_lowering_support_violation():
    g = make_special_stream(22, 3, 200)
    bad = SpecialStream(22, 3, flip(g.series, 7))
    with pytest.raises(SupportViolation) as exc:
        lower_level(bad, 11)
    assert exc.value.index == 7


def test_lowering_output_check_catches_lattice_mutation():
    g = make_special_stream(22, 3, 200)
    bad = SpecialStream(22, 3, flip(g.series, 33))
    with pytest.raises(NotSpecial) as exc:
        lower_level(bad, 11)
    assert exc.value.result.detail["witness"]["index"] == 3


# -- screening and orchestration ---------------------------------------------------


def test_screen_examples():
    for r in (5, 7):
        res = cuspidal_screen(1013, 10007, r)
        assert res.status is PASS and res.detail["verdict"] == "excluded"
    res = cuspidal_screen(2, 13, 7)
    assert res.status is NA and res.detail["verdict"] == "not-excluded"
    assert res.detail["cusp_factor_mod_r"] == 0


@pytest.mark.parametrize("args", [(4, 13, 5), (2, 2, 5), (2, 13, 2), (2, 13, 9)])
def test_screen_rejects_bad_input(args):
    with pytest.raises(ValueError):
        cuspidal_screen(*args)


def test_screen_consistency_on_corpus():
    for entry in builtin_corpus():
        rep = verify_curve(entry.curve)
        assert all(r.status is PASS for r in rep.results if r.claim_id == SCREEN_CONSISTENCY)


def test_verify_curve_11a1(e11a1):
    rep = verify_curve(e11a1)
    assert {r.claim_id for r in rep.results} == {BAD_PRIME_SIGN, EICHLER, MAIN, NEGATIVE_SIGN, ORDINARITY}
    assert rep.ok and all(r.status is PASS and r.r == 5 for r in rep.results)
    assert rep.precision == {5: 12}


def test_verify_curve_14a1(e14a1):
    rep = verify_curve(e14a1)
    assert rep.torsion_order == 6
    assert all(r.status is NA for r in rep.results)
    assert {r.r for r in rep.results} == {2, 3}


def test_verify_curve_26b1(e26b1):
    rep = verify_curve(e26b1, VerifyOptions(prime_bound=1000))
    assert all(r.status is PASS for r in rep.results)
    assert SCREEN_CONSISTENCY in {r.claim_id for r in rep.results}


def test_verify_curve_torsion_free(e11a1):
    c = next(e.curve for e in builtin_corpus() if e.label == "37a1")
    rep = verify_curve(c)
    assert rep.results == () and rep.ok


def test_results_are_sorted():
    for entry in builtin_corpus():
        keys = [(r.claim_id, r.r) for r in verify_curve(entry.curve).results]
        assert keys == sorted(keys)


def test_a0_string_is_exact(e11a1):
    assert Fraction(check_main_congruence(e11a1, 5).detail["a0_E"]) == Fraction(5, 12)


def test_mod_domain_helper():
    assert make_special_stream(10, 3, 5).series.domain == CoefficientDomain.mod(3)
