import warnings
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from selmer_euler.euler import (EulerInputs, ExceptionalZeroWarning, Verdict, WrongBranch, akashi_consistency,
                                chi_pm_supersingular, chi_t_bsd, congruence_verdict, epsilon_p, imprimitive_identity,
                                imprimitive_triviality, invariant_transfer_check, j_coefficients, j_of_q,
                                l_invariant, l_invariant_of_curve, local_L_inverse, phi_factor, phi_from_data,
                                rank_bound_check, tate_parameter)
from selmer_euler.iwasawa import LambdaElement
from selmer_euler.local import CurveModel, Kind, LocalData, torsion_p_part_bound
from selmer_euler.local.gaussian import place_data
from selmer_euler.local.tate import Reduction
from selmer_euler.padic import PadicNumber, PPower, padic_log

E66 = CurveModel("66a1", 1, 0, 1, -6, 4)
E462 = CurveModel("462d1", 1, 0, 1, -1676, 5058506)
E38 = CurveModel("38a1", 1, 0, 1, 9, 90, base_field="Qi")


def good(place, Nv, a):
    return LocalData(place, Nv, Nv, "I0", 0, 1, Kind.GOOD, a, 0)


# -- local factors -----------------------------------------------------------

def test_local_values():
    assert local_L_inverse(place_data(E462, "7")) == Fraction(8, 7)
    assert local_L_inverse(place_data(E38, "19")) == Fraction(360, 361)
    assert local_L_inverse(LocalData("3", 3, 3, "IV", 2, 3, Kind.ADDITIVE, 0, 4)) == 1
    assert local_L_inverse(good("7", 7, -2)) == Fraction(10, 7)


def test_phi_examples():
    assert phi_factor(E66, {"7"}, 5).is_one() and phi_factor(E462, {"7"}, 5).is_one()
    assert phi_factor(E38, {"3"}, 5).divisible_by_p()
    assert phi_factor(E38, {"19"}, 5) == PPower(1)
    assert phi_factor(E66, set(), 5).is_one()
    with pytest.raises(ValueError):
        phi_from_data([good("5", 5, 0)], 5)


# -- epsilon, Tate parameter, L-invariant ------------------------------------

def test_epsilon_nonsplit():
    eps, s = epsilon_p(-1, Reduction.NONSPLIT, 5)
    assert s == 1 and eps == PadicNumber.from_rational(2, 5, eps.precision)


def test_epsilon_wrong_branch():
    for kind in (Reduction.SUPERSINGULAR, Reduction.SPLIT):
        with pytest.raises(WrongBranch):
            epsilon_p(0, kind, 5)


def test_epsilon_exceptional_cases_warn():
    with pytest.warns(ExceptionalZeroWarning):
        eps, _ = epsilon_p(6, Reduction.ORDINARY, 5)
    assert eps.is_zero()
    # a_p = 1: alpha = 21 mod 25, so 1 - 1/alpha has valuation 1
    with pytest.warns(ExceptionalZeroWarning):
        eps, s = epsilon_p(1, Reduction.ORDINARY, 5)
    assert s == 2 and eps.valuation == 2


@given(st.sampled_from([5, 7, 11, 13]), st.integers(-50, 50))
def test_epsilon_is_unit_off_the_anomalous_case(p, a):
    if a % p in (0, 1):
        a += 2
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        eps, _ = epsilon_p(a, Reduction.ORDINARY, p)
    assert eps.valuation == 0


def test_j_coefficients():
    assert j_coefficients(4) == (744, 196884, 21493760, 864299970, 20245856256)


@settings(max_examples=60)
@given(st.sampled_from([5, 7, 11]), st.sampled_from([1, 2, 3]), st.integers(1, 10**6))
def test_tate_parameter_round_trip(p, k, u):
    if u % p == 0:
        u += 1
    j = PadicNumber.from_rational(Fraction(u, p**k), p, 20)
    q = tate_parameter(j, 20)
    assert q.valuation == k
    assert (q * j).residue(1) == 1  # q = 1/j to leading order
    back = j_of_q(q)
    assert (back - j).is_zero() or (back - j).valuation >= 20 - k - 2


def test_tate_parameter_needs_negative_valuation():
    with pytest.raises(ValueError, match="not potentially multiplicative"):
        tate_parameter(PadicNumber.from_rational(3, 5, 10))


def test_l_invariant_examples():
    p = 5
    assert l_invariant(PadicNumber.from_rational(5, p, 20)).is_zero()
    q = PadicNumber.from_rational(5 * 6, p, 20)
    assert l_invariant(q) == padic_log(PadicNumber.from_rational(6, p, 20))
    q = PadicNumber.from_rational(5 * 11, p, 20)
    assert l_invariant(q ** 3) == l_invariant(q)
    with pytest.raises(ValueError):
        l_invariant(PadicNumber.from_rational(2, p, 20))


def test_l_invariant_of_tate_curve():
    E = CurveModel("11a1", 0, -1, 1, -10, -20)
    L = l_invariant_of_curve(E, 11, 12)
    assert L.valuation >= 1


# -- Euler characteristics ---------------------------------------------------

def test_chi_all_units_is_one():
    inp = EulerInputs(Reduction.NONSPLIT, -1, 0, 2, sha_p_order=1)
    assert chi_t_bsd(inp, 5).is_one()


def test_chi_tamagawa_divisible_by_p():
    inp = EulerInputs(Reduction.NONSPLIT, -1, 0, 10, sha_p_order=1)
    assert chi_t_bsd(inp, 5).exponent == 1


def test_chi_notes_assumed_sha():
    chi = chi_t_bsd(EulerInputs(Reduction.ORDINARY, 2, 0, 1), 5)
    assert "Sha[p^inf] assumed trivial" in chi.notes


def test_chi_split_uses_l_invariant_over_log_kappa():
    # log_p(1+p) has valuation 1, so the prefactor cancels one power of p
    def chi(vL):
        return chi_t_bsd(EulerInputs(Reduction.SPLIT, 1, 0, 1, sha_p_order=1, l_invariant_valuation=vL), 5)
    assert chi(1).exponent == 0
    assert chi(2).exponent == 1
    with pytest.raises(ValueError):
        chi_t_bsd(EulerInputs(Reduction.SPLIT, 1, 0, 1), 5)


def test_chi_supersingular_branch():
    with pytest.raises(WrongBranch):
        chi_t_bsd(EulerInputs(Reduction.SUPERSINGULAR, 0, 0, 1), 5)
    assert chi_pm_supersingular(1, 6, 5).is_one()
    assert chi_pm_supersingular(1, 16, 5).is_one()
    assert chi_pm_supersingular(25, 1, 5).exponent == 2
    with pytest.raises(ValueError):
        chi_pm_supersingular(6, 1, 5)


def test_torsion_squared_in_denominator():
    inp = EulerInputs(Reduction.NONSPLIT, -1, 0, 25, sha_p_order=1, torsion_p_part=5)
    assert chi_t_bsd(inp, 5).exponent == 0


def test_inputs_validation():
    with pytest.raises(ValueError):
        EulerInputs(Reduction.ORDINARY, 2, 0, 1, r_dag=1)
    with pytest.raises(ValueError):
        EulerInputs(Reduction.ORDINARY, 2, 0, 1, regulator_unit_valuation=1)
    assert EulerInputs(Reduction.ORDINARY, 2, 1, 1, sp_E=1, r_dag=2).r_dag == 2


# -- verdicts ----------------------------------------------------------------

def test_congruence_verdicts():
    assert congruence_verdict(0, 0, PPower(0), PPower(0)).verdict is Verdict.CONSISTENT
    v = congruence_verdict(0, 1, PPower(1), None)
    assert v.verdict is Verdict.CONSISTENT and "divisible" in v.clause
    assert congruence_verdict(0, 0, PPower(0), PPower(1)).verdict is Verdict.VIOLATION
    assert congruence_verdict(0, 1, PPower(0), None).verdict is Verdict.VIOLATION
    assert congruence_verdict(1, 0, PPower(0), PPower(2)).verdict is Verdict.CONSISTENT


def test_invariant_transfer():
    assert invariant_transfer_check(0, 3, 0, 3) is Verdict.CONSISTENT
    assert invariant_transfer_check(0, 3, 0, 5) is Verdict.VIOLATION
    assert invariant_transfer_check(2, 7, 1, 9) is Verdict.CONSISTENT
    assert invariant_transfer_check(0, 1, 1, 1) is Verdict.VIOLATION


def test_rank_bound():
    assert rank_bound_check(0, 0, 0)
    assert rank_bound_check(1, 1, 0)
    assert not rank_bound_check(0, 1, 0)
    assert rank_bound_check(0, 1, 1)


# -- imprimitive identities ---------------------------------------------------

def test_imprimitive_identity_single_twist():
    f = LambdaElement.from_coefficients(5, [0, 1], 16, 30)
    lhs, rhs = imprimitive_identity(f, [place_data(E38, "19")])
    assert lhs == rhs == 1
    assert imprimitive_triviality(f, [place_data(E38, "19")]) == (False, False)


def test_akashi_consistency_example():
    f = LambdaElement.from_coefficients(5, [5, 1], 16, 30)
    ak, direct = akashi_consistency(f, 1)
    assert ak == direct == PPower(1)


# -- torsion bound on a curve with a rational 5-torsion point ----------------

def _add(P, Q, a):
    """Chord-and-tangent on y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6, over Q."""
    a1, a2, a3, a4, a6 = a
    if P is None:
        return Q
    if Q is None:
        return P
    (x1, y1), (x2, y2) = P, Q
    if x1 == x2 and y1 + y2 + a1 * x2 + a3 == 0:
        return None
    if x1 == x2:
        lam = (3 * x1 * x1 + 2 * a2 * x1 + a4 - a1 * y1) / (2 * y1 + a1 * x1 + a3)
    else:
        lam = (y2 - y1) / (x2 - x1)
    nu = y1 - lam * x1
    x3 = lam * lam + a1 * lam - a2 - x1 - x2
    return x3, -(lam + a1) * x3 - nu - a3


def test_rational_five_torsion_detected():
    a = (0, -1, -1, 0, 0)  # y^2 - y = x^3 - x^2
    P = (Fraction(0), Fraction(0))
    Q, multiples = None, []
    for _ in range(5):
        Q = _add(Q, P, a)
        multiples.append(Q)
    assert multiples[-1] is None and all(m is not None for m in multiples[:-1])
    assert torsion_p_part_bound(CurveModel("x1_5", *a), 5) >= 5
    assert torsion_p_part_bound(E66, 5) == 1
