"""Exact and Euler-Maclaurin evaluation of the scalar sums behind the entropy formulas.

Every sum is returned as a :class:`SumExpansion` carrying the exact value
(compensated summation via :func:`math.fsum`), the asymptotic expansion and
its explicit error bound. Natural logarithms throughout.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import xlog1py, xlogy

EULER_GAMMA = 0.57721566490153286061

# Convergence control for constants defined only as limits.
LIMIT_TOLERANCE = 1e-10
LIMIT_MAX_TERMS = 10**8
POLE_EXCLUSION = 1e-6

# B_{2j} / (2j)! for j = 1..4
_EM_COEFFS = (1.0 / 12.0, -1.0 / 720.0, 1.0 / 30240.0, -1.0 / 1209600.0)


@dataclass(frozen=True)
class SumExpansion:
    exact_value: float
    asymptotic_value: float
    error_bound: float
    valid: bool = True  # whether the bound is guaranteed at this argument

    @property
    def residual(self) -> float:
        return self.exact_value - self.asymptotic_value

    def within_bound(self, slack: float = 0.0) -> bool:
        return abs(self.residual) <= self.error_bound + slack


def fsum(values) -> float:
    """Correctly rounded sum of a float array."""
    return math.fsum(np.asarray(values, dtype=float).ravel().tolist())


def binary_entropy(p):
    """h(p) = -p log p - (1-p) log(1-p) with 0 log 0 = 0; accepts scalars or arrays."""
    p = np.asarray(p, dtype=float)
    if np.any((p < 0) | (p > 1)):
        raise ValueError("probability outside [0, 1]")
    h = -xlogy(p, p) - xlog1py(1.0 - p, -p)
    return float(h) if h.ndim == 0 else h


def binary_entropy_expansion(p: float) -> SumExpansion:
    """Small-p expansion p log(1/p) + p - p^2/2, residual in [-p^3/2, 0]."""
    if not 0.0 < p < 1.0:
        raise ValueError("expansion needs 0 < p < 1")
    exact = binary_entropy(p)
    asym = -p * math.log(p) + p - 0.5 * p * p
    return SumExpansion(exact, asym, 0.5 * p**3)


def _em_tail(s: float, a0: float, b0: float, x: float) -> float:
    """Sum_j B_2j/(2j)! f^(2j-1)(x) for f(x) = x^-s (a0 + b0 log x)."""
    # f^(m)(x) = x^(-s-m) (a + b log x)
    a, b = a0, b0
    lx = math.log(x)
    total = 0.0
    for m in range(2 * len(_EM_COEFFS)):
        if m % 2 == 1:
            total += _EM_COEFFS[m // 2] * x ** (-s - m) * (a + b * lx)
        a, b = -(s + m) * a + b, -(s + m) * b
    return total


def _iterate_limit(estimate) -> float:
    """Double the truncation point until successive estimates agree to LIMIT_TOLERANCE."""
    n = 64
    prev = estimate(n)
    while True:
        n *= 2
        if n > LIMIT_MAX_TERMS:
            raise ArithmeticError("limit did not converge within the term cap")
        cur = estimate(n)
        if abs(cur - prev) < LIMIT_TOLERANCE:
            return cur
        prev = cur


@lru_cache(maxsize=None)
def zeta(s: float) -> float:
    """Riemann zeta for s > 0, s != 1.

    For s > 1 the series; for 0 < s < 1 the limit of partial sums minus
    M^(1-s)/(1-s). Both are evaluated through the same Euler-Maclaurin
    corrected truncation, iterated to convergence.
    """
    if s <= 0 or abs(s - 1.0) < POLE_EXCLUSION:
        raise ValueError("zeta defined here only for s > 0 away from 1")

    def estimate(n: int) -> float:
        k = np.arange(1, n + 1, dtype=float)
        head = fsum(k ** (-s))
        return head - n ** (1 - s) / (1 - s) - 0.5 * n ** (-s) - _em_tail(s, 1.0, 0.0, n)

    return _iterate_limit(estimate)


@lru_cache(maxsize=None)
def zeta_prime(s: float) -> float:
    """Derivative of zeta at s > 0 (s != 1); minus the constant of sum log k / k^s."""
    if s < 0 or abs(s - 1.0) < POLE_EXCLUSION:
        raise ValueError("zeta' defined here only for s >= 0 away from 1")

    def estimate(n: int) -> float:
        k = np.arange(1, n + 1, dtype=float)
        head = fsum(np.log(k) * k ** (-s))
        ln = math.log(n)
        integral = n ** (1 - s) * ln / (1 - s) - n ** (1 - s) / (1 - s) ** 2
        return head - integral - 0.5 * ln * n ** (-s) - _em_tail(s, 0.0, 1.0, n)

    return -_iterate_limit(estimate)


@lru_cache(maxsize=None)
def stieltjes_gamma1() -> float:
    """lim [sum_{k<=n} log k / k - (log n)^2 / 2]."""

    def estimate(n: int) -> float:
        k = np.arange(1, n + 1, dtype=float)
        head = fsum(np.log(k) / k)
        ln = math.log(n)
        return head - 0.5 * ln * ln - 0.5 * ln / n - _em_tail(1.0, 0.0, 1.0, n)

    return _iterate_limit(estimate)


def _check_n(n: int) -> None:
    if int(n) != n or n < 1:
        raise ValueError("n must be a positive integer")


def harmonic_sum(n: int) -> SumExpansion:
    _check_n(n)
    exact = fsum(1.0 / np.arange(1, n + 1, dtype=float))
    asym = math.log(n) + EULER_GAMMA + 0.5 / n
    return SumExpansion(exact, asym, 1.0 / (6.0 * n * n), valid=n >= 2)


def power_sum(s: float, n: int) -> SumExpansion:
    """sum_{k=1}^n k^-s against n^(1-s)/(1-s) + zeta(s) + 1/(2 n^s)."""
    _check_n(n)
    if s <= 0:
        raise ValueError("power_sum needs s > 0")
    if abs(s - 1.0) < POLE_EXCLUSION:
        raise ValueError("s too close to 1; use harmonic_sum")
    exact = fsum(np.arange(1, n + 1, dtype=float) ** (-s))
    asym = n ** (1 - s) / (1 - s) + zeta(s) + 0.5 * n ** (-s)
    return SumExpansion(exact, asym, s / (6.0 * n ** (s + 1)), valid=n >= 2)


def log_power_sum(s: float, n: int) -> SumExpansion:
    """sum_{k=1}^n log(k) / k^s with the s = 1 and s != 1 expansions."""
    _check_n(n)
    if s < 0:
        raise ValueError("log_power_sum needs s >= 0")
    k = np.arange(1, n + 1, dtype=float)
    ln = math.log(n)
    if s == 1:
        exact = fsum(np.log(k) / k)
        asym = 0.5 * ln * ln + stieltjes_gamma1() + 0.5 * ln / n
        bound = (1.0 + ln) / (6.0 * n * n)
    else:
        if abs(s - 1.0) < POLE_EXCLUSION:
            raise ValueError("s too close to 1; use s = 1 exactly")
        exact = fsum(np.log(k) * k ** (-s))
        asym = (ln * n ** (1 - s) / (1 - s) - n ** (1 - s) / (1 - s) ** 2
                - zeta_prime(s) + 0.5 * ln * n ** (-s))
        bound = (1.0 + s * ln) / (6.0 * n ** (s + 1))
    return SumExpansion(exact, asym, bound, valid=n >= 2)


def log_factorial(n: int) -> float:
    """log n! by compensated summation of logs (no Stirling)."""
    if n < 0:
        raise ValueError("n must be non-negative")
    if n < 2:
        return 0.0
    return fsum(np.log(np.arange(2, n + 1, dtype=float)))
