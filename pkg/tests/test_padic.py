from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from selmer_euler.padic import (INF, PadicNumber, PPower, hensel_unit_root, padic_exp, padic_log, principal_unit,
                                teichmuller, valuation)

PRIMES = st.sampled_from([3, 5, 7, 11, 13])


def test_valuation_of_rationals():
    assert valuation(Fraction(361, 360), 5) == -1
    assert valuation(250, 5) == 3
    with pytest.raises(ValueError, match="undefined valuation"):
        valuation(0, 5)


def test_hensel_root_for_ap_1_at_5():
    alpha = hensel_unit_root(1, 5, 10)
    assert alpha.residue(2) == 21
    assert (alpha * alpha - alpha + 5).is_zero()


def test_hensel_rejects_supersingular():
    with pytest.raises(ValueError):
        hensel_unit_root(0, 5)


def test_log_of_six_mod_125():
    assert padic_log(PadicNumber.from_rational(6, 5, 3)).residue(3) == 55


def test_iwasawa_branch_kills_p_and_roots_of_unity():
    assert padic_log(PadicNumber.from_rational(5, 5, 20)).is_zero()
    assert padic_log(teichmuller(2, 5, 20)).is_zero()


def test_teichmuller_of_two():
    w = teichmuller(2, 5, 10)
    assert w.residue(2) == 7
    assert (w**4 - 1).is_zero()


def test_principal_unit_is_one_mod_p():
    u = principal_unit(3, 7, 12)
    assert u.residue(1) == 1


def test_exp_log_six():
    x = PadicNumber.from_rational(6, 5, 20)
    assert padic_exp(padic_log(x)) == x


def test_exp_requires_convergence():
    with pytest.raises(ValueError):
        padic_exp(PadicNumber.from_rational(Fraction(1, 5), 5, 10))


def test_precision_tracks_cancellation():
    a = PadicNumber.from_rational(1, 5, 10)
    b = PadicNumber.from_rational(1 + 5**4, 5, 10)
    d = b - a
    assert d.valuation == 4 and d.absolute_precision == 10


def test_zero_has_no_inverse():
    with pytest.raises(ZeroDivisionError):
        PadicNumber.zero(5).inverse()


def test_ppower_arithmetic():
    assert (PPower(2) * PPower(1)).exponent == 3
    assert PPower(0).is_one() and not PPower(1).is_one()
    assert PPower(INF).value(5) == 0
    assert PPower.of(Fraction(360, 361), 5) == PPower(1)
    assert str(PPower(2)) == "p^2"


@given(PRIMES, st.integers(-10**6, 10**6).filter(bool), st.integers(-10**6, 10**6).filter(bool))
def test_field_operations_against_rationals(p, a, b):
    x, y = PadicNumber.from_rational(a, p, 15), PadicNumber.from_rational(Fraction(b, 7 if p != 7 else 11), p, 15)
    assert x * y == PadicNumber.from_rational(Fraction(a) * y.lift(), p, 15)
    assert (x / y) * y == x


@given(PRIMES, st.integers(1, 10**9))
def test_teichmuller_is_root_of_unity(p, u):
    if u % p == 0:
        u += 1
    w = teichmuller(u, p, 12)
    assert (w ** (p - 1) - 1).is_zero()
    assert w.residue(1) == u % p
