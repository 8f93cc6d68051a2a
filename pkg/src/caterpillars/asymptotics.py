"""Singularity analysis for the capped tree families.

All real arithmetic uses :mod:`mpmath` with a per-call working precision of
at least 30 significant digits.  Results are ``mpmath.mpf`` values.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Literal

import mpmath

from .counting import catalan, w_minus, wedderburn
from .errors import KTooLargeForTruncation, NoConvergence

__all__ = [
    "AsymptoticModel",
    "WEDDERBURN_AMPLITUDE",
    "WEDDERBURN_RHO",
    "rho_ordered",
    "ordered_model",
    "factor_b",
    "asym_f_minus",
    "u_tilde_coefficient",
    "expected_gamma_approx",
    "rho_lambda_unordered",
    "asym_w_minus",
    "prob_gamma_le",
]

MIN_DPS = 30

# Published constants of the unconstrained Wedderburn-Etherington asymptotics,
# w_n ~ A n^(-3/2) rho^(-n); used as given, not re-derived.
WEDDERBURN_AMPLITUDE = "0.3187766259"
WEDDERBURN_RHO = "0.40269750367"


@dataclass(frozen=True)
class AsymptoticModel:
    """``count(n) ~ amplitude * n**(-3/2) * rho**(-n)``.

    ``m`` is the series truncation order (unordered family only) and
    ``w_prime`` the truncated derivative ``W_k'(rho^2)`` used for the
    amplitude.
    """

    family: Literal["ordered", "unordered"]
    k: int
    rho: mpmath.mpf
    amplitude: mpmath.mpf
    m: int | None = None
    w_prime: mpmath.mpf | None = None

    def estimate(self, n: int) -> mpmath.mpf:
        with mpmath.workdps(max(MIN_DPS, mpmath.mp.dps)):
            n = mpmath.mpf(n)
            return self.amplitude * n ** mpmath.mpf(-1.5) * self.rho ** (-n)


def _dps(precision):
    return max(MIN_DPS, int(precision) + 10)


def _refine(f, df, lo, hi, precision, what):
    """Bisection down to a 1e-10 bracket, then Newton from its midpoint.

    ``f(lo)`` and ``f(hi)`` must have opposite signs.
    """
    flo = f(lo)
    if flo == 0:
        return lo
    if flo * f(hi) > 0:
        raise NoConvergence(f"{what}: bracket does not change sign")
    for _ in range(200):
        if hi - lo < mpmath.mpf("1e-10"):
            break
        mid = (lo + hi) / 2
        fmid = f(mid)
        if fmid == 0:
            return mid
        if (fmid > 0) == (flo > 0):
            lo, flo = mid, fmid
        else:
            hi = mid
    x = (lo + hi) / 2
    tol = mpmath.mpf(10) ** (-(precision + 5))
    for _ in range(100):
        step = f(x) / df(x)
        x -= step
        if abs(step) < tol:
            break
    else:
        raise NoConvergence(f"{what}: Newton iteration did not settle")
    if not (lo - tol <= x <= hi + tol):
        raise NoConvergence(f"{what}: Newton left the bisection bracket")
    if abs(f(x)) > mpmath.mpf(10) ** (-precision):
        raise NoConvergence(f"{what}: residual too large")
    return x


@lru_cache(maxsize=None)
def rho_ordered(k: int, precision: int = 30) -> mpmath.mpf:
    """Smallest positive root of ``1 - 4x + 2^(k+1) x^(k+1)``, which lies in (1/4, 2/5)."""
    if k < 2:
        raise ValueError(f"k must be at least 2, got {k}")
    with mpmath.workdps(_dps(precision)):
        c = mpmath.mpf(2) ** (k + 1)

        def f(x):
            return 1 - 4 * x + c * x ** (k + 1)

        def df(x):
            return -4 + (k + 1) * c * x**k

        root = _refine(f, df, mpmath.mpf(1) / 4, mpmath.mpf(2) / 5, precision, f"rho_ordered(k={k})")
        return +root


def factor_b(k: int, x, rho=None):
    """``B(x) = 4 - 2^(k+1) * sum_{i=0}^{k} rho^i x^(k-i)``.

    With ``rho = rho_ordered(k)`` it satisfies
    ``1 - 4x + 2^(k+1) x^(k+1) = (rho - x) B(x)``.
    """
    if rho is None:
        rho = rho_ordered(k)
    with mpmath.workdps(MIN_DPS + 10):
        x = mpmath.mpf(x)
        return 4 - mpmath.mpf(2) ** (k + 1) * mpmath.fsum(rho**i * x ** (k - i) for i in range(k + 1))


@lru_cache(maxsize=None)
def ordered_model(k: int) -> AsymptoticModel:
    rho = rho_ordered(k)
    with mpmath.workdps(MIN_DPS + 10):
        radicand = 4 * rho - (k + 1) * mpmath.mpf(2) ** (k + 1) * rho ** (k + 1)
        amp = mpmath.sqrt(radicand / mpmath.pi) / 4
        return AsymptoticModel("ordered", k, rho, +amp)


def asym_f_minus(k: int, n: int) -> mpmath.mpf:
    """Leading-order estimate of ``f_minus(k, n)``."""
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    return ordered_model(k).estimate(n)


def _log_sqrt_coefficient(n: int) -> Fraction:
    # [x^n] sqrt(1-4x) * ln(1-4x), both factors with rational coefficients
    total = Fraction(0)
    for m in range(1, n + 1):
        s = 1 if m == n else -2 * catalan(n - m)
        total -= Fraction(s * 4**m, m)
    return total


def u_tilde_coefficient(n: int) -> mpmath.mpf:
    """``[x^n]`` of ``1/2 + 1/(2 sqrt 2) + sqrt(1-4x) (log2 sqrt(1-4x) + 1/4 - 1/sqrt 2)``.

    ``sqrt(1-4x)`` contributes ``-2 catalan(n)``; the logarithmic part is
    ``ln(1-4x) / (2 ln 2)`` and is multiplied out exactly before the single
    division by ``ln 2``.
    """
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    log_part = _log_sqrt_coefficient(n)
    with mpmath.workdps(MIN_DPS + 10):
        sqrt_part = -2 * catalan(n) * (mpmath.mpf(1) / 4 - 1 / mpmath.sqrt(2))
        value = sqrt_part + mpmath.mpf(log_part.numerator) / log_part.denominator / (2 * mpmath.log(2))
        return +value


def expected_gamma_approx(n: int, mode: str = "ratio") -> mpmath.mpf:
    """Approximate mean of gamma over ordered trees of size ``n``.

    ``mode="ratio"`` returns ``u_tilde_coefficient(n) / catalan(n)``;
    ``mode="log2"`` returns the cruder ``log2(n)``.
    """
    if n < 2:
        raise ValueError(f"n must be at least 2, got {n}")
    if mode == "log2":
        with mpmath.workdps(MIN_DPS):
            return mpmath.log(n, 2)
    if mode != "ratio":
        raise ValueError(f"unknown mode {mode!r}")
    with mpmath.workdps(MIN_DPS + 10):
        return +(u_tilde_coefficient(n) / catalan(n))


def _poly(coeffs):
    """Evaluators for ``sum c_e x^e`` given ``{e: c}``, value and derivative."""
    items = sorted(coeffs.items())

    def f(x):
        return mpmath.fsum(c * x**e for e, c in items)

    def df(x):
        return mpmath.fsum(c * e * x ** (e - 1) for e, c in items if e)

    return f, df


@lru_cache(maxsize=None)
def rho_lambda_unordered(k: int, m: int = 30, precision: int = 30) -> AsymptoticModel:
    """Numerical singularity and amplitude for unordered trees with gamma <= k.

    The implicit series ``W_k`` is replaced by its first ``m`` exact
    coefficients; the singularity is the smallest positive solution of
    ``x - x^(k+1) + W_k(x^2)/2 = 1/2`` on (0, 1/2].  The amplitude is reported
    normalised, as ``lambda_k / (2 sqrt(pi))``.
    """
    if k < 2:
        raise ValueError(f"k must be at least 2, got {k}")
    if m < 1:
        raise ValueError(f"m must be positive, got {m}")
    if k >= m:
        raise KTooLargeForTruncation(
            f"k={k} >= m={m}: the first {m} coefficients of W_k equal those of the "
            "unconstrained series, so the truncated equation cannot detect the cap"
        )
    w = [0] + [w_minus(k, i) for i in range(1, m + 1)]
    coeffs: dict[int, Fraction] = {0: Fraction(-1, 2), 1: Fraction(1)}
    coeffs[k + 1] = coeffs.get(k + 1, 0) - 1
    for i in range(1, m + 1):
        coeffs[2 * i] = coeffs.get(2 * i, 0) + Fraction(w[i], 2)

    # coarse float scan for the first sign change on (0, 1/2]
    fcoeffs = sorted((e, float(c)) for e, c in coeffs.items())
    steps = 4096
    lo = hi = None
    prev_x, prev_v = 0.0, -0.5
    for s in range(1, steps + 1):
        x = 0.5 * s / steps
        v = sum(c * x**e for e, c in fcoeffs)
        if (v >= 0) != (prev_v >= 0):
            lo, hi = prev_x, x
            break
        prev_x, prev_v = x, v
    if lo is None:
        raise NoConvergence(f"no root of the truncated equation on (0, 1/2] for k={k}, m={m}")

    with mpmath.workdps(_dps(precision)):
        f, df = _poly({e: mpmath.mpf(c.numerator) / c.denominator for e, c in coeffs.items()})
        rho = _refine(f, df, mpmath.mpf(lo), mpmath.mpf(hi), precision, f"rho_unordered(k={k}, m={m})")
        w_prime = mpmath.fsum(i * w[i] * rho ** (2 * i - 2) for i in range(1, m + 1))
        lam_sq = 2 * rho - 2 * rho ** (k + 1) - 2 * k * rho ** (k + 1) + 2 * rho**2 * w_prime
        amplitude = mpmath.sqrt(lam_sq) / (2 * mpmath.sqrt(mpmath.pi))
        return AsymptoticModel("unordered", k, +rho, +amplitude, m=m, w_prime=+w_prime)


def asym_w_minus(k: int, n: int, m: int = 30) -> mpmath.mpf:
    """Leading-order estimate of ``w_minus(k, n)``."""
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    return rho_lambda_unordered(k, m).estimate(n)


def prob_gamma_le(n: int, k: int, m: int = 10, exact: bool = False):
    """Probability that a uniform unordered tree of size ``n`` has gamma <= k.

    The asymptotic mode divides the capped estimate by the published
    unconstrained one and caps the result at 1.  ``exact=True`` returns the
    rational ``w_minus(k, n) / wedderburn(n)``.
    """
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    if exact:
        return Fraction(w_minus(k, n), wedderburn(n))
    model = rho_lambda_unordered(k, m)
    with mpmath.workdps(MIN_DPS + 10):
        amp = mpmath.mpf(WEDDERBURN_AMPLITUDE)
        rho = mpmath.mpf(WEDDERBURN_RHO)
        value = (model.amplitude / amp) * (model.rho / rho) ** (-n)
        return +min(value, mpmath.mpf(1))
