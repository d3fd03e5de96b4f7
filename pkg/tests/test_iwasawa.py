import pytest
from hypothesis import given, strategies as st

from selmer_euler.iwasawa import (CharPolyData, InsufficientPrecision, LambdaElement, TruncationTooSmall,
                                  akashi_euler_char, akashi_series, are_associate, chi_trivial_equivalence,
                                  frobenius_exponent, imprimitive_charpoly, truncated_euler_char,
                                  twist_euler_factor, vanishing_order, weierstrass_prepare)
from selmer_euler.padic import PadicNumber


def el(coeffs, p=5, D=16, N=30):
    return LambdaElement.from_coefficients(p, coeffs, D, N)


def test_preparation_of_product():
    # (2 + T)(T^2 - 5) = -10 - 5T + 2T^2 + T^3
    prep = weierstrass_prepare(el([-10, -5, 2, 1]))
    assert (prep.mu, prep.lam) == (0, 2)
    assert prep.distinguished.N == 8
    assert prep.distinguished.congruent(el([-5, 0, 1], N=prep.distinguished.N))
    assert prep.unit.congruent(el([2, 1], N=prep.unit.N))


def test_mu_and_lambda_examples():
    assert weierstrass_prepare(el([0, 5, 1]))[:2] == (0, 2)
    assert weierstrass_prepare(el([5]))[:2] == (1, 0)


def test_vanishing_order_and_g0():
    r, g0 = vanishing_order(el([0, 0, 25, 1]))
    assert r == 2 and g0.valuation == 2
    assert truncated_euler_char(el([0, 0, 25, 1])).exponent == 2


def test_chi_trivial_equivalence_example():
    d = CharPolyData.from_element(el([0, 3, 1]))
    assert chi_trivial_equivalence(d) == (True, True)
    d = CharPolyData.from_element(el([0, 5, 1]))
    assert chi_trivial_equivalence(d) == (False, False)


def test_associates():
    f = el([-5, 0, 1])
    assert are_associate(f, f * el([3, 1, 7]))
    assert not are_associate(f, el([-10, 0, 1]))


def test_truncation_errors():
    with pytest.raises(TruncationTooSmall):
        el(list(range(1, 20)), D=16)
    with pytest.raises(TruncationTooSmall):
        weierstrass_prepare(el([5] * 16 + [1], D=16))
    with pytest.raises(InsufficientPrecision):
        weierstrass_prepare(el([0]))


def test_frobenius_exponent_of_generator():
    t = frobenius_exponent(6, 5)
    assert t == PadicNumber.from_rational(1, 5, 20)
    with pytest.raises(ValueError):
        frobenius_exponent(10, 5)


def test_twist_at_zero_is_local_L_inverse():
    # split multiplicative at inert 19: P(X) = 1 - X, Nv = 361
    h = twist_euler_factor([1, -1], 361, 5)
    assert h.at_zero() == PadicNumber.from_rational(PadicNumber.from_rational(360, 5).lift() / 361, 5, h.N)
    assert h.coefficient_valuation(0) == 1


def test_twist_of_generator_power():
    # Nv = 6 = kappa(gamma): P(Nv^{-1}(1+T)^1) with P = 1 - 6X gives -T
    h = twist_euler_factor([1, -6], 6, 5)
    assert h.congruent(el([0, -1], N=h.N))


def test_akashi_shift():
    f = el([10, 1])
    for g in (0, 1, 2):
        ak = akashi_series(f, g)
        assert vanishing_order(ak)[0] == g
        assert akashi_euler_char(ak) == truncated_euler_char(f)
    with pytest.raises(ValueError):
        akashi_series(f, -1)


def test_imprimitive_multiplies():
    f = el([0, 5, 1])
    h = el([3, 2])
    assert imprimitive_charpoly(f, [h]).congruent(f * h)


@given(st.lists(st.integers(-10**6, 10**6), min_size=1, max_size=8),
       st.lists(st.integers(-10**6, 10**6), min_size=1, max_size=8))
def test_ring_laws(a, b):
    x, y = el(a, p=7), el(b, p=7)
    assert (x * y).congruent(y * x)
    assert ((x + y) - y).congruent(x)
