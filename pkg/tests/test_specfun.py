"""Special-function layer: oracle comparisons and closed-form spot values."""

import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import lpmv, roots_legendre

from rscp.specfun import (SignedLogValue, UalpSpec, angular_H,
                          angular_H_derivatives, kummer_terminating,
                          log_gamma, ualp_coefficients)

# ---------------------------------------------------------------- log_gamma


def test_log_gamma_spot_values():
    assert log_gamma(1.0) == 0.0
    assert math.isclose(log_gamma(0.5), 0.5723649429, rel_tol=0, abs_tol=5e-11)
    assert math.isclose(log_gamma(6.0), 4.7874917428, rel_tol=0, abs_tol=5e-11)
    assert math.isclose(log_gamma(0.5), math.log(math.sqrt(math.pi)),
                        rel_tol=1e-13)


def test_log_gamma_rejects_nonpositive():
    with pytest.raises(ValueError):
        log_gamma(0.0)
    with pytest.raises(ValueError):
        log_gamma(-3.0)


# ------------------------------------------------------------------- kummer


def _kummer_rational(n_r: int, beta: Fraction, x: Fraction) -> Fraction:
    """Independent oracle: the defining sum in exact rational arithmetic."""
    total = Fraction(0)
    for j in range(n_r + 1):
        poch_a = Fraction(1)
        poch_b = Fraction(1)
        for i in range(j):
            poch_a *= Fraction(-n_r + i)
            poch_b *= beta + i
        total += poch_a * x ** j / (poch_b * math.factorial(j))
    return total


def test_kummer_examples():
    assert kummer_terminating(0, 4.0, 7.3) == 1.0
    assert math.isclose(kummer_terminating(1, 2.0, 3.0), -0.5, rel_tol=1e-14)
    assert math.isclose(kummer_terminating(2, 3.0, 1.0), 5.0 / 12.0,
                        rel_tol=1e-14)


def test_kummer_against_rational_oracle():
    for n_r in range(7):
        for beta in range(2, 15):
            for x in (Fraction(0), Fraction(1, 2), Fraction(1), Fraction(5)):
                want = float(_kummer_rational(n_r, Fraction(beta), x))
                got = kummer_terminating(n_r, float(beta), float(x))
                assert math.isclose(got, want, rel_tol=1e-12, abs_tol=1e-14), \
                    (n_r, beta, x)


def test_kummer_array_input():
    xs = np.array([0.0, 0.5, 1.0])
    vals = kummer_terminating(1, 2.0, xs)
    assert np.allclose(vals, 1.0 - xs / 2.0, rtol=1e-14)


# ---------------------------------------------------------- SignedLogValue


@settings(max_examples=200)
@given(st.floats(min_value=1e-300, max_value=1e300), st.sampled_from([-1, 1]))
def test_signed_log_roundtrip_full_range(mag, sign):
    # exp(log(x)) carries |ln x| * eps/2 relative error, ~8e-14 at the
    # range edges, so 1e-13 is the honest full-range float64 guarantee
    x = sign * mag
    back = SignedLogValue.encode(x).decode()
    assert math.isclose(back, x, rel_tol=1e-13)


@settings(max_examples=200)
@given(st.floats(min_value=1e-30, max_value=1e30), st.sampled_from([-1, 1]))
def test_signed_log_roundtrip_working_range(mag, sign):
    # decoded values in this package are pre-scaled to modest magnitudes,
    # where the roundtrip meets 1e-14
    x = sign * mag
    back = SignedLogValue.encode(x).decode()
    assert math.isclose(back, x, rel_tol=1e-14)


@settings(max_examples=200)
@given(st.floats(min_value=1e-100, max_value=1e100),
       st.floats(min_value=1e-100, max_value=1e100),
       st.sampled_from([-1, 1]), st.sampled_from([-1, 1]))
def test_signed_log_product(ma, mb, sa, sb):
    a, b = sa * ma, sb * mb
    prod = (SignedLogValue.encode(a) * SignedLogValue.encode(b)).decode()
    assert math.isclose(prod, a * b, rel_tol=1e-12)


def test_signed_log_zero():
    z = SignedLogValue.encode(0.0)
    assert z.sign == 0 and z.decode() == 0.0
    assert (z * SignedLogValue.encode(3.0)).decode() == 0.0


# ------------------------------------------------------------- coefficients


def test_coefficient_hand_value():
    # k=0, gamma1=1, m'=0: single coefficient G(2)G(3)/(2 G(3)G(2)) = 1/2
    coeffs = ualp_coefficients(UalpSpec(0, 1.0, 0.0))
    assert len(coeffs) == 1
    assert coeffs[0].sign == 1
    assert math.isclose(coeffs[0].decode(), 0.5, rel_tol=1e-13)


def test_coefficient_single_term_any_indices():
    coeffs = ualp_coefficients(UalpSpec(0, 3.7015621, 0.7071068))
    assert len(coeffs) == 1 and coeffs[0].sign == 1


def test_coefficient_sign_alternation():
    coeffs = ualp_coefficients(UalpSpec(1, 1.0, 0.0))
    assert [c.sign for c in coeffs] == [1, -1]
    coeffs = ualp_coefficients(UalpSpec(3, 2.5, 1.5))
    assert [c.sign for c in coeffs] == [1, -1, 1, -1]


def test_coefficients_no_overflow_large_k():
    coeffs = ualp_coefficients(UalpSpec(50, 4.0, 2.0))
    assert all(np.isfinite(c.log_magnitude) for c in coeffs)


# ---------------------------------------------------------------- angular_H


def test_angular_hydrogen_p_state():
    spec = UalpSpec(0, 1.0, 0.0)
    assert math.isclose(angular_H(spec, 1.0), math.sqrt(1.5), rel_tol=1e-12)
    assert math.isclose(angular_H(spec, 1.0), 1.2247449, abs_tol=5e-8)


def test_angular_zero_at_equator():
    assert angular_H(UalpSpec(0, 1.3660254, 0.7071068), 0.0) == 0.0
    assert angular_H(UalpSpec(2, 3.7015621, 0.7071068), 0.0) == 0.0


def test_angular_hydrogen_d_state():
    # k=1, gamma1=0, m'=0 reduces to the normalized Legendre P2
    spec = UalpSpec(1, 0.0, 0.0)
    assert math.isclose(angular_H(spec, 1.0), math.sqrt(2.5), rel_tol=1e-12)
    x = 0.3
    want = math.sqrt(2.5) * 0.5 * (3 * x * x - 1)
    assert math.isclose(angular_H(spec, x), want, rel_tol=1e-12)


def test_angular_domain_error():
    with pytest.raises(ValueError):
        angular_H(UalpSpec(0, 1.0, 0.0), 1.0001)


def _classical_norm_alp(l: int, m: int, x: float) -> float:
    return math.sqrt((2 * l + 1) / 2.0 * math.factorial(l - m)
                     / math.factorial(l + m)) * float(lpmv(m, l, x))


def test_angular_hydrogen_limit_matches_classical():
    """gamma1 in {0,1}, integer m': equals the normalized associated
    Legendre function within 1e-12, up to one global sign per (l, m)."""
    xs = np.linspace(-0.95, 0.95, 21)
    for l, m in [(1, 0), (2, 0), (2, 1), (3, 0), (3, 2), (4, 1), (5, 4)]:
        g1 = float((l - m) % 2)
        k = (l - m - int(g1)) // 2
        spec = UalpSpec(k, g1, float(m))
        ours = np.array([angular_H(spec, float(x)) for x in xs])
        ref = np.array([_classical_norm_alp(l, m, float(x)) for x in xs])
        sign = 1.0 if np.dot(ours, ref) >= 0 else -1.0
        assert np.allclose(ours, sign * ref, rtol=0, atol=1e-12), (l, m)


def test_angular_orthonormality():
    x0, w0 = roots_legendre(4096)
    for g1, mp in [(1.0, 0.0), (1.3660254, 0.7071068), (3.7015621, 2.0)]:
        specs = [UalpSpec(k, g1, mp) for k in range(5)]
        half = [angular_H(s, 0.5 * (x0 + 1.0)) for s in specs]
        for i in range(5):
            for j in range(5):
                # H_i H_j is even in x, so integrate [0,1] and double
                val = float(np.sum(w0 * half[i] * half[j]))
                want = 1.0 if i == j else 0.0
                assert abs(val - want) < 1e-8, (g1, mp, i, j)


# ------------------------------------------------------------- derivatives


def test_derivative_example_p_state():
    H, H1, H2 = angular_H_derivatives(UalpSpec(0, 1.0, 0.0), 0.5)
    assert math.isclose(H, 0.6123724, abs_tol=5e-8)
    assert math.isclose(H1, 1.2247449, abs_tol=5e-8)
    assert abs(H2) < 1e-12


def test_derivatives_match_finite_differences():
    step = 1e-5
    for spec in [UalpSpec(0, 1.0, 0.0), UalpSpec(1, 1.3660254, 0.7071068),
                 UalpSpec(2, 3.7015621, 2.0), UalpSpec(1, 0.0, 1.0)]:
        for x in (0.31, 0.64, -0.52):
            H, H1, H2 = angular_H_derivatives(spec, x)
            fd1 = (angular_H(spec, x + step)
                   - angular_H(spec, x - step)) / (2 * step)
            fd2 = (angular_H(spec, x + step) - 2 * angular_H(spec, x)
                   + angular_H(spec, x - step)) / step ** 2
            assert math.isclose(H, angular_H(spec, x), rel_tol=1e-12)
            assert math.isclose(H1, fd1, rel_tol=1e-6, abs_tol=1e-8)
            assert math.isclose(H2, fd2, rel_tol=1e-4, abs_tol=1e-4)


def test_derivative_ode_residual():
    """The closed form satisfies its defining equation,
    (1-x^2)H'' - 2xH' + [l'(l'+1) - m'^2/(1-x^2) - c/x^2] H = 0,
    with c = gamma1(gamma1-1) recovered from gamma1."""
    rng = np.random.default_rng(7)
    for spec in [UalpSpec(0, 1.0, 0.0), UalpSpec(1, 1.3660254, 0.7071068),
                 UalpSpec(2, 3.7015621, 0.7071068), UalpSpec(2, 0.0, 3.0)]:
        c = spec.gamma1 * (spec.gamma1 - 1.0)
        lam = spec.l_prime * (spec.l_prime + 1.0)
        for x in rng.uniform(0.05, 0.95, size=50):
            H, H1, H2 = angular_H_derivatives(spec, float(x))
            terms = [(1 - x * x) * H2, -2 * x * H1, lam * H,
                     -spec.m_prime ** 2 / (1 - x * x) * H]
            if c != 0.0:
                terms.append(-c / (x * x) * H)
            residual = sum(terms)
            scale = sum(abs(t) for t in terms) + 1e-300
            assert abs(residual) / scale < 1e-8, (spec, x)


def test_derivative_parity():
    # integer gamma1: H(-x) = (-1)^gamma1 H(x), so H' flips the other way
    for spec, parity in [(UalpSpec(0, 1.0, 0.0), -1.0),
                         (UalpSpec(1, 0.0, 1.0), 1.0)]:
        H, H1, H2 = angular_H_derivatives(spec, 0.4)
        Hm, H1m, H2m = angular_H_derivatives(spec, -0.4)
        assert math.isclose(Hm, parity * H, rel_tol=1e-12)
        assert math.isclose(H1m, -parity * H1, rel_tol=1e-12)
        assert math.isclose(H2m, parity * H2, rel_tol=1e-12, abs_tol=1e-12)


def test_derivative_excluded_points():
    with pytest.raises(ValueError):
        angular_H_derivatives(UalpSpec(0, 1.3660254, 0.0), 0.0)
    with pytest.raises(ValueError):
        angular_H_derivatives(UalpSpec(0, 1.0, 0.0), 1.0)


def test_ualpspec_invariants():
    spec = UalpSpec(2, 3.7015621, 0.7071068)
    assert spec.l_prime == 2 * 2 + 3.7015621 + 0.7071068
    with pytest.raises(ValueError):
        UalpSpec(-1, 1.0, 0.0)
    with pytest.raises(ValueError):
        UalpSpec(0, -0.5, 0.0)
