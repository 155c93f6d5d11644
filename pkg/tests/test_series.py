from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from eiscong.eisenstein import e_series
from eiscong.errors import DenominatorClash, DomainMismatch, InsufficientPrecision
from eiscong.series import CoefficientDomain, QExpansion, b_op, reduce_mod, sigma, t_op, u_op


def brute_sigma(n):
    return sum(d for d in range(1, n + 1) if n % d == 0)


fractions = st.fractions(max_denominator=50).map(lambda f: Fraction(f).limit_denominator(50))
small_primes = st.sampled_from([2, 3, 5, 7, 11, 13])


@st.composite
def series(draw, min_prec=0, max_prec=40):
    P = draw(st.integers(min_prec, max_prec))
    return QExpansion(draw(st.lists(fractions, min_size=P + 1, max_size=P + 1)))


# -- sigma ----------------------------------------------------------------


@pytest.mark.parametrize("n,expected", [(1, 1), (6, 12), (2, 3), (3, 4), (12, 28), (11, 12)])
def test_sigma_values(n, expected):
    assert sigma(n) == expected


def test_sigma_matches_divisor_enumeration():
    assert all(sigma(n) == brute_sigma(n) for n in range(1, 600))


@pytest.mark.parametrize("p", [2, 3, 5, 97, 1013])
def test_sigma_prime(p):
    assert sigma(p) == p + 1


@pytest.mark.parametrize("bad", [0, -3])
def test_sigma_rejects_nonpositive(bad):
    with pytest.raises(ValueError):
        sigma(bad)


# -- QExpansion basics ----------------------------------------------------


def test_rational_coefficients_are_reduced():
    g = QExpansion([Fraction(2, 4), Fraction(-3, -6), 6])
    assert g[0] == Fraction(1, 2) and g[0].denominator == 2
    assert g[2] == 6 and isinstance(g[2], Fraction)


def test_reading_past_precision_raises():
    g = QExpansion([1, 2, 3])
    with pytest.raises(IndexError):
        g[3]


def test_precision_zero_is_legal_but_operators_reject_it():
    g = QExpansion([Fraction(5)])
    assert g.precision == 0
    assert b_op(2, g).coeffs == (5, 0)
    with pytest.raises(InsufficientPrecision):
        u_op(2, g)
    with pytest.raises(InsufficientPrecision):
        t_op(2, g, 1)


def test_immutable():
    g = QExpansion([1, 2])
    with pytest.raises(AttributeError):
        g.foo = 1


def test_mod_prime_domain_requires_prime():
    with pytest.raises(ValueError):
        CoefficientDomain.mod(9)


# -- B, U, T --------------------------------------------------------------


def test_b_op_small():
    g = QExpansion([1, 5, 7])
    out = b_op(2, g)
    assert out.precision == 5
    assert out.coeffs == (1, 0, 5, 0, 7, 0)


def test_b_op_zero_series():
    assert b_op(3, QExpansion.zero(4)) == QExpansion.zero(14)


def test_b_op_on_e():
    assert b_op(2, e_series(4))[2] == 1


def test_u_op_small():
    out = u_op(2, QExpansion([0, 1, 3, 5, 7]))
    assert out.precision == 2
    assert out.coeffs == (0, 3, 7)


def test_u_op_on_e():
    assert u_op(2, e_series(10))[3] == sigma(6) == 12


def test_t_op_first_coefficient_is_a_ell():
    g = e_series(30)
    for ell in (2, 3, 5, 7):
        assert t_op(ell, g, 1)[1] == g[ell]


def test_t_op_rejects_ell_dividing_level():
    with pytest.raises(ValueError):
        t_op(2, e_series(10), 14)


@pytest.mark.parametrize("ell", [2, 3, 5, 7, 11, 13])
def test_t_op_e_eigen(ell):
    e = e_series(300)
    image = t_op(ell, e, 1)
    assert image == e.truncate(image.precision).scale(ell + 1)


def test_t_op_on_11a1_newform():
    from eiscong.curves import WeierstrassCurve
    from eiscong.newform import af_coeffs

    f = af_coeffs(WeierstrassCurve.from_ainvs([0, -1, 1, -10, -20]), 20).series
    assert t_op(2, f, 11)[1] == -2


# -- reduce_mod -----------------------------------------------------------


def test_reduce_mod_values():
    g = QExpansion([Fraction(5, 12), -2, Fraction(-1, 24)])
    assert reduce_mod(g, 5).coeffs[:2] == (0, 3)
    assert reduce_mod(g, 7)[2] == 2  # 24 * 2 = 48 = -1 mod 7


def test_reduce_mod_denominator_clash():
    with pytest.raises(DenominatorClash) as exc:
        reduce_mod(e_series(3), 3)
    assert exc.value.index == 0


def test_domain_mismatch():
    g = QExpansion([1, 2])
    with pytest.raises(DomainMismatch):
        g + reduce_mod(g, 5)


def test_add_sub_scale():
    g = e_series(10)
    assert (g - g) == QExpansion.zero(10)
    assert g.scale(1) == g
    h = g - b_op(2, g).truncate(10).scale(2)
    assert h[2] == sigma(2) - 2


def test_add_takes_min_precision():
    assert (e_series(5) + e_series(9)).precision == 5


# -- properties -----------------------------------------------------------


@given(series(min_prec=13), small_primes)
def test_u_after_b_is_identity(g, r):
    assert u_op(r, b_op(r, g)) == g


@given(series(min_prec=14), small_primes, fractions, fractions)
def test_operators_are_linear(g, r, x, y):
    h = QExpansion([c * 3 - 1 for c in g.coeffs])
    combo = g.scale(x) + h.scale(y)
    assert b_op(r, combo) == b_op(r, g).scale(x) + b_op(r, h).scale(y)
    assert u_op(r, combo) == u_op(r, g).scale(x) + u_op(r, h).scale(y)
    level = 1 if r != 2 else 3
    assert t_op(r, combo, level) == t_op(r, g, level).scale(x) + t_op(r, h, level).scale(y)


@given(series(min_prec=1), st.lists(fractions, min_size=1, max_size=10), small_primes)
def test_garbage_past_precision_is_never_read(g, garbage, r):
    padded = QExpansion(list(g.coeffs) + garbage, precision=g.precision)
    assert padded == g
    assert b_op(r, padded) == b_op(r, g)
    if g.precision >= r:
        assert u_op(r, padded) == u_op(r, g)
        assert t_op(r, padded, 1) == t_op(r, g, 1)


@settings(max_examples=50)
@given(series(), series(), st.integers(-50, 50), st.sampled_from([5, 7, 11, 13]))
def test_reduce_mod_is_additive_and_homogeneous(g, h, k, r):
    # shift denominators away from r
    g = QExpansion([Fraction(c.numerator, c.denominator) if c.denominator % r else Fraction(c.numerator) for c in g])
    h = QExpansion([Fraction(c.numerator, c.denominator) if c.denominator % r else Fraction(c.numerator) for c in h])
    assert reduce_mod(g + h, r) == reduce_mod(g, r) + reduce_mod(h, r)
    assert reduce_mod(g.scale(k), r) == reduce_mod(g, r).scale(k)


@given(st.integers(20, 120), st.sampled_from([2, 3, 5, 7]))
def test_t_equals_u_plus_r_b_on_eigenforms(P, r):
    """For an eigenform g of level 1: U_r g + r B_r g = a_r(g) g."""
    g = e_series(P)
    U = u_op(r, g)
    B = b_op(r, g).truncate(U.precision)
    assert U + B.scale(r) == g.truncate(U.precision).scale(g[r])
