from fractions import Fraction

import mpmath
import pytest

from caterpillars.asymptotics import (
    WEDDERBURN_RHO,
    asym_f_minus,
    asym_w_minus,
    expected_gamma_approx,
    factor_b,
    ordered_model,
    prob_gamma_le,
    rho_lambda_unordered,
    rho_ordered,
    u_tilde_coefficient,
)
from caterpillars.counting import catalan, f_minus, w_minus
from caterpillars.errors import KTooLargeForTruncation

import oracles

RHO_ORDERED = {2: 0.3090169, 3: 0.2718445, 4: 0.2593950, 5: 0.2543301, 6: 0.2520691, 7: 0.2510085}

# k: (rho, W', amplitude, ratio at n = 50), truncation m = 10
M10 = {
    2: (0.46745, 1.50024, 0.27892, 1.008),
    3: (0.42291, 1.4938, 0.29910, 1.009),
    4: (0.41001, 1.47331, 0.30895, 1.010),
    5: (0.40550, 1.46232, 0.31394, 1.011),
}

# k: (rho, amplitude), truncation m = 30
M30 = {
    2: ("0.4674554078", "0.2789408958"),
    3: ("0.4229139375", "0.2991123692"),
    4: ("0.4100112389", "0.3089581337"),
    5: ("0.4055024052", "0.3139472095"),
    6: ("0.4038017227", "0.3164492710"),
    7: ("0.4031375239", "0.3176775180"),
    8: ("0.4028738458", "0.3182668950"),
    9: ("0.4027683607", "0.3185438777"),
    10: ("0.4027260095", "0.3186717321"),
}


def polyroot_oracle(k):
    # every root of 1 - 4x + 2^(k+1) x^(k+1) from mpmath's polynomial solver
    coeffs = [mpmath.mpf(2) ** (k + 1)] + [0] * (k - 1) + [-4, 1]
    with mpmath.workdps(40):
        roots = mpmath.polyroots(coeffs, maxsteps=200, extraprec=60)
        real = [mpmath.re(r) for r in roots if abs(mpmath.im(r)) < mpmath.mpf("1e-25") and mpmath.re(r) > 0]
        return min(real)


def test_rho_table():
    # the printed table is truncated after seven decimals, not rounded
    for k, value in RHO_ORDERED.items():
        assert mpmath.floor(rho_ordered(k) * 10**7) == round(value * 10**7)
        assert abs(rho_ordered(k) - value) < 1e-7
    assert abs(rho_ordered(2) - (mpmath.sqrt(5) - 1) / 4) < 1e-12


@pytest.mark.parametrize("k", range(2, 16))
def test_rho_matches_polynomial_solver(k):
    assert abs(rho_ordered(k) - polyroot_oracle(k)) < mpmath.mpf("1e-25")


def test_rho_precision_and_residual():
    with mpmath.workdps(60):
        r = rho_ordered(3, precision=50)
        assert abs(1 - 4 * r + 16 * r**4) < mpmath.mpf("1e-50")
    with pytest.raises(ValueError):
        rho_ordered(1)


@pytest.mark.parametrize("k", list(range(2, 21)) + [30])
def test_bootstrap_bracket(k):
    lo = (1 + mpmath.mpf(2) ** (-k - 1)) / 4
    hi = (1 + (mpmath.mpf(4) / 5) ** (k + 1)) / 4
    assert lo < rho_ordered(k) < hi


@pytest.mark.parametrize("k", range(4, 21))
def test_expansion(k):
    r = rho_ordered(k)
    assert abs(r - mpmath.mpf(1) / 4 - mpmath.mpf(2) ** (-k - 3)) <= k * (mpmath.mpf(2) / 5) ** k


@pytest.mark.parametrize("k", [2, 3, 5, 8])
def test_factorization(k):
    r = rho_ordered(k)
    for j in range(1, 20):
        x = r * j / 20
        lhs = 1 - 4 * x + mpmath.mpf(2) ** (k + 1) * x ** (k + 1)
        assert abs(lhs - (r - x) * factor_b(k, x)) <= 1e-10


def test_pitchfork_amplitude_and_ratio():
    with mpmath.workdps(40):
        r = (mpmath.sqrt(5) - 1) / 4
        closed = mpmath.sqrt((4 * r - 24 * r**3) / mpmath.pi) / 4
        assert abs(ordered_model(2).amplitude - closed) < 1e-20
    assert abs(f_minus(2, 100) / asym_f_minus(2, 100) - 0.9933) <= 1e-4


def test_asym_f_minus_k5():
    assert 0.97 < asym_f_minus(5, 200) / f_minus(5, 200) < 1.03


@pytest.mark.parametrize("k", [2, 3, 5])
def test_ratios_approach_one(k):
    gaps = [abs(f_minus(k, n) / asym_f_minus(k, n) - 1) for n in (50, 100, 200, 400)]
    assert all(a > b for a, b in zip(gaps, gaps[1:]))


def test_u_tilde_against_series_oracle():
    s = oracles.sqrt_one_minus_4x(60)
    log_series = [Fraction(0)] + [Fraction(-(4**m), m) for m in range(1, 61)]
    for n in (1, 2, 5, 10, 33, 60):
        # constants drop out for n >= 1
        log_part = sum(s[i] * log_series[n - i] for i in range(0, n))
        with mpmath.workdps(40):
            sqrt_part = s[n] * (mpmath.mpf(1) / 4 - 1 / mpmath.sqrt(2))
            expected = sqrt_part + mpmath.mpf(log_part.numerator) / log_part.denominator / (2 * mpmath.log(2))
            assert abs(u_tilde_coefficient(n) - expected) < mpmath.mpf("1e-25") * abs(expected)


def test_u_tilde_ratios():
    table = {10: (4.032, 0.001), 20: (5.109, 0.001), 50: (6.47, 0.01), 100: (7.490, 0.001), 1000: (10.825, 0.001)}
    for n, (value, tol) in table.items():
        assert abs(u_tilde_coefficient(n) / catalan(n) - value) <= tol
        with mpmath.workdps(40):
            assert abs(expected_gamma_approx(n) - u_tilde_coefficient(n) / catalan(n)) < 1e-25


def test_expected_gamma_modes():
    assert abs(expected_gamma_approx(1000, mode="log2") - 9.96578) < 1e-5
    assert expected_gamma_approx(4) > 0
    assert expected_gamma_approx(4, mode="log2") == 2
    with pytest.raises(ValueError):
        expected_gamma_approx(10, mode="median")
    with pytest.raises(ValueError):
        expected_gamma_approx(1)


def test_unordered_m10_table():
    for k, (rho, wp, amp, ratio) in M10.items():
        model = rho_lambda_unordered(k, 10)
        assert abs(model.rho - rho) < 5e-5
        assert abs(model.w_prime - wp) < 5e-4
        assert abs(model.amplitude - amp) < 5e-5
        assert abs(w_minus(k, 50) / asym_w_minus(k, 50, 10) - ratio) <= 0.002


def test_unordered_m30_table():
    for k, (rho, amp) in M30.items():
        model = rho_lambda_unordered(k, 30)
        assert abs(model.rho - mpmath.mpf(rho)) < 1e-8
        assert abs(model.amplitude - mpmath.mpf(amp)) < 1e-8
        assert model.m == 30 and model.family == "unordered"


@pytest.mark.parametrize("k", [2, 3, 6, 10])
def test_amplitude_from_numeric_derivative(k):
    # lambda^2 = 2 rho * d/dx [x - x^(k+1) + W_k(x^2)/2] at x = rho
    model = rho_lambda_unordered(k, 30)
    w = [w_minus(k, i) for i in range(1, 31)]

    def phi(x):
        return x - x ** (k + 1) + sum(c * x ** (2 * i) for i, c in enumerate(w, start=1)) / 2

    with mpmath.workdps(40):
        assert abs(phi(model.rho) - mpmath.mpf(1) / 2) < 1e-25
        lam = mpmath.sqrt(2 * model.rho * mpmath.diff(phi, model.rho))
        assert abs(lam / (2 * mpmath.sqrt(mpmath.pi)) - model.amplitude) < 1e-20


def test_unordered_rho_ordering():
    rhos = [rho_lambda_unordered(k, 30).rho for k in range(2, 11)]
    assert all(a > b for a, b in zip(rhos, rhos[1:]))
    assert rhos[-1] > mpmath.mpf(WEDDERBURN_RHO)


def test_asym_w_minus_k3():
    assert 0.99 < w_minus(3, 200) / asym_w_minus(3, 200, 30) < 1.01


def test_truncation_limit():
    with pytest.raises(KTooLargeForTruncation):
        rho_lambda_unordered(40, 30)
    with pytest.raises(KTooLargeForTruncation):
        rho_lambda_unordered(10, 10)
    with pytest.raises(KTooLargeForTruncation):
        prob_gamma_le(100, 12, m=10)


def test_probability():
    assert 0.48 <= prob_gamma_le(100, 5, m=10) <= 0.52
    assert prob_gamma_le(10, 5, exact=True) == Fraction(89, 98)
    assert prob_gamma_le(7, 7, exact=True) == 1
    assert prob_gamma_le(7, 9, exact=True) == 1
    for n in range(2, 40):
        row = [prob_gamma_le(n, k, exact=True) for k in range(1, n + 2)]
        assert row == sorted(row)
        assert all(0 <= p <= 1 for p in row)
        # only the caterpillar of size 3 is excluded at (n, k) = (3, 2)
        assert all(p > 0 for p in row[1:]) or n == 3
    assert 0 < prob_gamma_le(10, 5, m=10) <= 1
