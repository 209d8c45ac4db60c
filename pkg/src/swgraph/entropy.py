"""Graph, structural and conditional entropies (nats) for SW, ER and PAG models.

Asymptotic outputs carry their leading terms only. The o(1) and O(1) terms
that the asymptotic results leave unquantified are reported as explicit
zero-valued ``*_slack`` fields rather than folded into the point values.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import integrate

from .model import ModelParams
from .moments import s_sums_exact
from .series import binary_entropy, fsum, log_factorial

PAG_TOLERANCE = 1e-10


@dataclass(frozen=True)
class EntropyReport:
    n: int
    a: float
    b: float
    c: float
    h_graph_exact: float
    h_graph_asymptotic: float
    h_graph_asymptotic_corrected: float
    c_a: float
    c_a_corrected: float
    h_structure_asymptotic: float
    h_conditional_upper: float
    expected_edges: float
    compressibility: float
    h_graph_slack: float = 0.0
    h_conditional_slack: float = 0.0

    @property
    def structure_lower_bound(self) -> float:
        """Chain-rule floor H(G) - n log n on the structural entropy."""
        return self.h_graph_exact - self.n * math.log(self.n)

    def as_dict(self) -> dict:
        out = dict(self.__dict__)
        out["structure_lower_bound"] = self.structure_lower_bound
        return out


def sw_entropy_exact(params: ModelParams) -> float:
    """n * sum_k h(p(k)) over distances 2..n//2, the antipodal class weighted n/2."""
    p = params.probabilities()[2:]
    counts = params.pair_counts()[2:].astype(float)
    return fsum(counts * binary_entropy(p))


def sw_entropy_constant(a: float, corrected: bool = False) -> float:
    """Third-order constant C_a of the SW entropy expansion.

    The published constant is a(1 + log 2)/(1 - a) + log((1 - a) 2^(1-a)) - 1.
    Carrying the leading-order sums through gives log(2(1 - a)) + a/(1 - a) - 1
    instead; the two differ by a^2 log 2 / (1 - a), and the exact entropy
    converges to the latter. ``corrected=True`` returns it.
    """
    if not 0.0 < a < 1.0:
        raise ValueError("a must lie in (0, 1)")
    if corrected:
        return math.log(2.0 * (1.0 - a)) + a / (1.0 - a) - 1.0
    return a * (1.0 + math.log(2.0)) / (1.0 - a) + math.log((1.0 - a) * 2.0 ** (1.0 - a)) - 1.0


def sw_entropy_asymptotic(params: ModelParams, corrected: bool = False) -> float:
    n, b = params.n, params.b
    return n * b * (math.log(n) - math.log(b) - sw_entropy_constant(params.a, corrected))


def sw_structural_entropy_asymptotic(params: ModelParams, corrected: bool = False) -> float:
    # asymmetry makes the leading three terms coincide with the graph entropy
    return sw_entropy_asymptotic(params, corrected)


def sw_conditional_entropy_upper(params: ModelParams) -> float:
    """n log b + n log 5 + log(n/b); the additive O(1) is not included."""
    n, b = params.n, params.b
    return n * math.log(b) + n * math.log(5.0) + math.log(n / b)


def sw_expected_edges(params: ModelParams) -> float:
    s1, _ = s_sums_exact(params)
    return params.n + params.n * s1 / 2.0


def er_entropy(n: int, p: float) -> float:
    return n * (n - 1) / 2.0 * binary_entropy(p)


def er_structural_entropy_asymptotic(n: int, p: float) -> float:
    return er_entropy(n, p) - log_factorial(n)


def er_structural_validity(n: int, p: float, margin: float = 10.0) -> bool:
    """Whether p and 1-p both exceed margin * log(n)/n (the asymptotic regime)."""
    t = margin * math.log(n) / n
    return p > t and 1.0 - p > t


def _pag_term(x):
    return np.log(x) / ((x + 1.0) * (x + 2.0))


def _pag_term_derivative(x: float) -> float:
    g = 1.0 / ((x + 1.0) * (x + 2.0))
    dg = -(2.0 * x + 3.0) * g * g
    return g / x + math.log(x) * dg


@lru_cache(maxsize=None)
def pag_constant(m: int) -> float:
    """A(m) = sum_{d >= m} log d / ((d+1)(d+2)).

    Truncated at D, with the tail replaced by its Euler-Maclaurin estimate
    (integral minus half the last term minus f'(D)/12); D doubles until two
    successive values agree to PAG_TOLERANCE.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    d_max = max(1024, 2 * m)
    prev = None
    while True:
        head = fsum(_pag_term(np.arange(m, d_max + 1, dtype=float)))
        tail, _ = integrate.quad(_pag_term, d_max, np.inf, epsabs=1e-14, epsrel=1e-12, limit=200)
        value = head + tail - 0.5 * float(_pag_term(float(d_max))) - _pag_term_derivative(d_max) / 12.0
        if prev is not None and abs(value - prev) < PAG_TOLERANCE:
            return value
        prev = value
        d_max *= 2


def pag_entropy_asymptotic(n: int, m: int) -> float:
    """m n log n + m (log 2m - 1 - log m! - A) n."""
    a = pag_constant(m)
    return m * n * math.log(n) + m * (math.log(2 * m) - 1.0 - math.lgamma(m + 1) - a) * n


def pag_structural_leading(n: int, m: int) -> float:
    return (m - 1) * n * math.log(n)


def compressibility_ratio(h_graph: float, expected_edges: float) -> float:
    """Nats per expected edge."""
    if expected_edges <= 0:
        raise ZeroDivisionError("expected edge count must be positive")
    return h_graph / expected_edges


def entropy_report(params: ModelParams) -> EntropyReport:
    h = sw_entropy_exact(params)
    edges = sw_expected_edges(params)
    return EntropyReport(
        n=params.n,
        a=params.a,
        b=params.b,
        c=params.c,
        h_graph_exact=h,
        h_graph_asymptotic=sw_entropy_asymptotic(params),
        h_graph_asymptotic_corrected=sw_entropy_asymptotic(params, corrected=True),
        c_a=sw_entropy_constant(params.a),
        c_a_corrected=sw_entropy_constant(params.a, corrected=True),
        h_structure_asymptotic=sw_structural_entropy_asymptotic(params),
        h_conditional_upper=sw_conditional_entropy_upper(params),
        expected_edges=edges,
        compressibility=compressibility_ratio(h, edges),
    )
