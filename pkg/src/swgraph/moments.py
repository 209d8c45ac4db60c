"""Moment sums of the edge probabilities, mean degree and degree tails."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import LabelledGraph, ModelParams
from .series import fsum, zeta

A_HALF_TOLERANCE = 1e-12


@dataclass(frozen=True)
class MomentReport:
    s1_exact: float
    s1_asymptotic: float
    s2_exact: float
    s2_asymptotic: float
    s2_asymptotic_corrected: float
    regime: str
    mean_degree_exact: float
    mean_degree_asymptotic: float


def regime(a: float) -> str:
    if a == 0.5 or abs(a - 0.5) < A_HALF_TOLERANCE:
        return "a=1/2"
    return "a<1/2" if a < 0.5 else "a>1/2"


def _weighted_terms(params: ModelParams) -> tuple[np.ndarray, np.ndarray]:
    """p(k) for k = 2..n//2 and the per-distance coefficient (2, or 1 for an antipodal class)."""
    p = params.probabilities()[2:]
    w = np.full(len(p), 2.0)
    if params.n % 2 == 0 and len(w):
        w[-1] = 1.0
    return p, w


def s_sums_exact(params: ModelParams) -> tuple[float, float]:
    """S_1 = sum of incident optional-edge probabilities at one vertex, S_2 the same for p^2."""
    p, w = _weighted_terms(params)
    return fsum(w * p), fsum(w * p * p)


def s_sums_asymptotic(params: ModelParams, corrected: bool = False) -> tuple[float, float, str]:
    """Leading terms: S_1 ~ 2b; S_2 by regime of a.

    For a > 1/2 the published leading term carries zeta(2a). The sum runs over
    k >= 2, so its limit is actually zeta(2a) - 1 and the published value
    overshoots S_2 by the factor zeta(2a) / (zeta(2a) - 1). ``corrected=True``
    uses zeta(2a) - 1.
    """
    n, a, b = params.n, params.a, params.b
    reg = regime(a)
    if reg == "a<1/2":
        s2 = 4.0 * (1 - a) ** 2 / (1 - 2 * a) * b * b / n
    elif reg == "a=1/2":
        s2 = b * b * math.log(n) / n
    else:
        z = zeta(2 * a) - 1.0 if corrected else zeta(2 * a)
        s2 = 2.0 ** (3 - 2 * a) * (1 - a) ** 2 * z * b * b / n ** (2 - 2 * a)
    return 2.0 * b, s2, reg


def mean_degree_exact(params: ModelParams) -> float:
    return 2.0 + s_sums_exact(params)[0]


def mean_degree_asymptotic(params: ModelParams) -> float:
    return 2.0 * params.b + 2.0


def degree_variance(params: ModelParams) -> float:
    """Variance of a single vertex degree: sum of Bernoulli variances of its optional edges."""
    p, w = _weighted_terms(params)
    return fsum(w * p * (1 - p))


def moment_report(params: ModelParams) -> MomentReport:
    s1, s2 = s_sums_exact(params)
    s1a, s2a, reg = s_sums_asymptotic(params)
    s2c = s_sums_asymptotic(params, corrected=True)[1]
    return MomentReport(s1, s1a, s2, s2a, s2c, reg, 2.0 + s1, mean_degree_asymptotic(params))


def max_degree_exceedance(g: LabelledGraph, b: float) -> tuple[int, bool]:
    """Largest degree and whether it exceeds 9b/2."""
    dmax = int(g.degrees().max()) if g.n else 0
    return dmax, dmax > 4.5 * b
