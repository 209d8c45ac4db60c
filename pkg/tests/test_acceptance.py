"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Two criteria quote constants that do not match their own derivations. The
literal versions are kept as strict xfails and each has a companion that
uses the derived constant.
"""
import math
import time

import mpmath
import numpy as np
import pytest

from conftest import record_criterion
from swgraph import experiments
from swgraph.entropy import (compressibility_ratio, sw_entropy_asymptotic, sw_entropy_constant,
                             sw_entropy_exact, sw_expected_edges)
from swgraph.model import LabelledGraph, ModelParams, make_rng, sample_er, trial_seed
from swgraph.moments import s_sums_asymptotic, s_sums_exact
from swgraph.series import binary_entropy_expansion, harmonic_sum, log_power_sum, power_sum
from swgraph.symmetry import (aut_size, is_admissible, tau_count, tau_degree_bound,
                              total_defect)

mpmath.mp.dps = 40


class Budget:
    def __init__(self, seconds: float):
        self.seconds = seconds

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start

    @property
    def ok(self) -> bool:
        return self.elapsed <= self.seconds

    def __str__(self) -> str:
        return f"{self.elapsed:.1f}s of {self.seconds:.0f}s"


def _log2(n: int) -> float:
    return math.log(n) ** 2


def test_criterion_01_mean_degree():
    with Budget(120) as t:
        row = experiments.mean_degree(10001, 0.5, 20, 200, seed=0)[0]
    ok = row["within_3se"] and row["asymptotic_rel_gap"] <= 0.05 and t.ok
    record_criterion("criterion 1 mean degree", ok,
                     f"|emp-exact|/se={abs(row['empirical'] - row['exact']) / row['standard_error']:.2f}, "
                     f"rel gap to 42={row['asymptotic_rel_gap']:.4f}, {t}")
    assert ok


S2_NS = [10**3, 10**4, 10**5, 10**6]


def _s2_check(a: float, corrected: bool):
    with Budget(60) as t:
        rows = experiments.s2_regimes([a], S2_NS, 1.0, corrected=corrected)
    ratios = [r["ratio"] for r in rows]
    dist = [abs(r - 1.0) for r in ratios]
    ok = all(x > y for x, y in zip(dist, dist[1:])) and 0.9 <= ratios[-1] <= 1.1 and t.ok
    return ok, f"ratios {', '.join(f'{r:.4f}' for r in ratios)}, {t}"


@pytest.mark.parametrize("a", [
    0.3, 0.5,
    pytest.param(0.7, marks=pytest.mark.xfail(strict=True, reason="quoted constant zeta(2a); the limit needs zeta(2a)-1")),
])
def test_criterion_02_s2_regimes(a):
    ok, detail = _s2_check(a, corrected=False)
    record_criterion(f"criterion 2 s2 regimes a={a}", ok, detail)
    assert ok


@pytest.mark.parametrize("a", [0.3, 0.5, 0.7])
def test_criterion_02_s2_regimes_derived_constant(a):
    ok, detail = _s2_check(a, corrected=True)
    record_criterion(f"criterion 2 s2 regimes a={a} (zeta(2a)-1)", ok, detail)
    assert ok


def _s2_oracle(n: int, a: float) -> float:
    # per-vertex sum of p(k)^2: two neighbours per distance, one at the antipode
    params = ModelParams(n, a, 1.0)
    c = mpmath.mpf(params.c)
    tot = mpmath.mpf(0)
    for k in range(2, n // 2 + 1):
        w = 1 if (n % 2 == 0 and k == n // 2) else 2
        tot += w * (c * mpmath.mpf(k) ** (-a)) ** 2
    return float(tot)


def test_criterion_02_exact_sum_oracle():
    for a in (0.3, 0.7):
        for n in (1001, 2000):
            _, s2 = s_sums_exact(ModelParams(n, a, 1.0))
            assert s2 == pytest.approx(_s2_oracle(n, a), rel=1e-12)


EM_NS = sorted({int(x) for x in np.logspace(np.log10(2), 6, 14)})
EM_S = [0.3, 0.5, 2.0, 3.0]


def _mp_asym_power(s, n):
    s, n = mpmath.mpf(s), mpmath.mpf(n)
    return n ** (1 - s) / (1 - s) + mpmath.zeta(s) + n ** (-s) / 2


def _mp_asym_logpower(s, n):
    s, n = mpmath.mpf(s), mpmath.mpf(n)
    ln = mpmath.log(n)
    return (ln * n ** (1 - s) / (1 - s) - n ** (1 - s) / (1 - s) ** 2
            - mpmath.zeta(s, 1, 1) + ln * n ** (-s) / 2)


def test_criterion_03_euler_maclaurin():
    eps = np.finfo(float).eps
    failures = []
    with Budget(60) as t:
        for n in EM_NS:
            h = harmonic_sum(n)
            truth = mpmath.harmonic(n)
            asym = mpmath.log(n) + mpmath.euler + mpmath.mpf(1) / (2 * n)
            if not abs(truth - asym) <= h.error_bound:
                failures.append(("harmonic bound", n))
            if not h.within_bound(8 * eps * abs(truth)):
                failures.append(("harmonic", n))
            for s in EM_S:
                e = power_sum(s, n)
                truth = mpmath.zeta(s) - mpmath.zeta(s, n + 1)
                if not abs(truth - _mp_asym_power(s, n)) <= e.error_bound:
                    failures.append(("power bound", s, n))
                if not e.within_bound(8 * eps * max(abs(float(truth)), 1.0)):
                    failures.append(("power", s, n))
                e = log_power_sum(s, n)
                truth = -mpmath.zeta(s, 1, 1) + mpmath.zeta(s, n + 1, 1)
                if not abs(truth - _mp_asym_logpower(s, n)) <= e.error_bound:
                    failures.append(("log power bound", s, n))
                if not e.within_bound(8 * eps * max(abs(float(truth)), 1.0)):
                    failures.append(("log power", s, n))
            e = log_power_sum(1, n)
            truth = mpmath.stieltjes(1) - mpmath.stieltjes(1, n + 1)
            ln = mpmath.log(n)
            asym = ln * ln / 2 + mpmath.stieltjes(1) + ln / (2 * n)
            if not abs(truth - asym) <= e.error_bound:
                failures.append(("log harmonic bound", n))
            if not e.within_bound(8 * eps * max(abs(float(truth)), 1.0)):
                failures.append(("log harmonic", n))
        for p in np.geomspace(1e-4, 0.99, 50):
            r = binary_entropy_expansion(float(p)).residual
            mp_r = (-p * mpmath.log(p) - (1 - mpmath.mpf(p)) * mpmath.log1p(-p)
                    - (-p * mpmath.log(p) + p - mpmath.mpf(p) ** 2 / 2))
            for val in (r, float(mp_r)):
                if not -p**3 / 2 <= val <= 0:
                    failures.append(("entropy residual", p))
                if p <= 0.25 and not val <= -p**3 / 10:
                    failures.append(("entropy residual p<=1/4", p))
    ok = not failures and t.ok
    record_criterion("criterion 3 Euler-Maclaurin bounds", ok,
                     f"{len(EM_NS)} n values, {len(failures)} failures, {t}")
    assert ok, failures[:5]


ENTROPY_NS = [10**3, 10**4, 10**5, 10**6]
REGRESSION_NS = np.logspace(3, 7, 13).astype(int)


def _entropy_gaps(corrected: bool):
    gaps = []
    for n in ENTROPY_NS:
        params = ModelParams(n, 0.5, _log2(n))
        h = sw_entropy_exact(params)
        gaps.append(abs(h - sw_entropy_asymptotic(params, corrected=corrected)) / h)
    return gaps


def _regressed_constant(a: float) -> float:
    # fixed b; basis from the next-order terms of the exact entropy
    b = 2.0
    y = [sw_entropy_exact(ModelParams(int(n), a, b)) / (n * b) - math.log(n) + math.log(b)
         for n in REGRESSION_NS]
    x = REGRESSION_NS.astype(float) ** (a - 1)
    lg = np.log(REGRESSION_NS)
    basis = np.column_stack([np.ones_like(x), x, x * lg, lg / REGRESSION_NS])
    return -float(np.linalg.lstsq(basis, np.array(y), rcond=None)[0][0])


def _entropy_check(corrected: bool):
    with Budget(60) as t:
        gaps = _entropy_gaps(corrected)
        fits = {a: (_regressed_constant(a), sw_entropy_constant(a, corrected=corrected))
                for a in (0.3, 0.5, 0.7)}
    shrinking = all(x > y for x, y in zip(gaps, gaps[1:]))
    # the derived constant vanishes at a=1/2, so "within 2%" is read as an absolute 0.002 there
    fit_ok = all(abs(f - c) <= max(0.02 * abs(c), 0.002) for f, c in fits.values())
    ok = gaps[2] <= 0.05 and shrinking and fit_ok and t.ok
    detail = (f"gap at 1e5 {gaps[2]:.4f}, shrinking={shrinking}, fitted/target "
              + ", ".join(f"a={a}: {f:.4f}/{c:.4f}" for a, (f, c) in fits.items()) + f", {t}")
    return ok, detail


@pytest.mark.xfail(strict=True, reason="quoted C_a differs from the limit by a^2 log2/(1-a)")
def test_criterion_04_graph_entropy():
    ok, detail = _entropy_check(corrected=False)
    record_criterion("criterion 4 graph entropy", ok, detail)
    assert ok


def test_criterion_04_graph_entropy_derived_constant():
    ok, detail = _entropy_check(corrected=True)
    record_criterion("criterion 4 graph entropy (derived C_a)", ok, detail)
    assert ok


def test_criterion_04_gap_shrinks_with_quoted_constant():
    gaps = _entropy_gaps(corrected=False)
    assert all(x > y for x, y in zip(gaps, gaps[1:]))


def test_criterion_05_entropy_likelihood():
    with Budget(120) as t:
        row = experiments.entropy_likelihood(101, 0.5, 5, 10**5, seed=0)[0]
    ok = row["pass"] and t.ok
    record_criterion("criterion 5 entropy-likelihood identity", ok,
                     f"z={row['z_score']:.2f}, {t}")
    assert ok


def test_criterion_06_asymmetry():
    with Budget(600) as t:
        n = 300
        res = experiments.symmetry(n, 0.5, _log2(n), 200, seed=0)
        cycles = {m: aut_size(LabelledGraph.cycle(m)) for m in (5, 6, 7, 12, 50, 300)}
    cyc_ok = all(v == 2 * m for m, v in cycles.items())
    ok = (res["resource_limited"] == 0 and res["asymmetric_fraction"] == 1.0 and cyc_ok and t.ok)
    record_criterion("criterion 6 asymmetry", ok,
                     f"fraction {res['asymmetric_fraction']}, limited {res['resource_limited']}, "
                     f"cycle control {cyc_ok}, {t}")
    assert ok


def test_criterion_07_oracle_agreement():
    mismatches = defect_bad = 0
    with Budget(300) as t:
        for n in (5, 6, 7, 8):
            for i in range(100):
                seed = trial_seed(1000 * n, i)
                p = make_rng(seed).uniform(0.2, 0.8)
                g = sample_er(n, float(p), seed)
                refined = aut_size(g, method="refine")
                brute = aut_size(g, method="enumerate")
                mismatches += refined != brute
                defect_bad += (total_defect(g) != 0) != (brute == 1)
    ok = mismatches == 0 and defect_bad == 0 and t.ok
    record_criterion("criterion 7 automorphism oracle agreement", ok,
                     f"{mismatches} size mismatches, {defect_bad} defect mismatches, {t}")
    assert ok


def test_criterion_08_z_concentration():
    n = 500
    with Budget(120) as t:
        row = experiments.z_concentration(n, 0.5, _log2(n), 200, seed=0)[0]
    ok = row["pass"] and t.ok
    record_criterion("criterion 8 Z concentration", ok,
                     f"mean/target {row['ratio']:.3f}, min Z {row['min_z']}, {t}")
    assert ok


def test_criterion_09_degree_tails():
    n = 2000
    with Budget(120) as t:
        row = experiments.tails(n, 0.5, _log2(n), 200, seed=0)[0]
    ok = row["pass"] and t.ok
    record_criterion("criterion 9 degree tails", ok,
                     f"exceedance {row['fraction']:.3f}, max degree {row['max_degree_seen']} "
                     f"vs {row['threshold']:.1f}, {t}")
    assert ok


def _cycle_plus_chords(n: int, seed: int) -> LabelledGraph:
    rng = make_rng(seed)
    ring = [(i, i % n + 1) for i in range(1, n + 1)]
    chords = [(u, v) for u in range(1, n + 1) for v in range(u + 2, n + 1)
              if not (u == 1 and v == n)]
    keep = rng.random(len(chords)) < rng.uniform(0.1, 0.6)
    return LabelledGraph(n, ring + [c for c, k in zip(chords, keep) if k])


def test_criterion_10_tau_bound():
    worst = 0.0
    violations = 0
    with Budget(300) as t:
        for n in (5, 6, 7, 8):
            for i in range(50):
                g = _cycle_plus_chords(n, trial_seed(7 * n, i))
                assert is_admissible(g)
                tau = tau_count(g)
                bound = tau_degree_bound(n, int(g.degrees().max()))
                violations += tau > bound
                worst = max(worst, tau / bound)
        cycles_one = all(tau_count(LabelledGraph.cycle(n)) == 1 for n in (5, 6, 7, 8))
    ok = violations == 0 and cycles_one and t.ok
    record_criterion("criterion 10 tau bound", ok,
                     f"max tau/bound {worst:.3g}, bare cycles tau=1 {cycles_one}, {t}")
    assert ok


def test_criterion_11_codec_efficiency():
    with Budget(300) as t:
        row = experiments.codec_efficiency(10**4, 0.5, 20, 50, seed=0)[0]
    ok = row["pass"] and t.ok
    record_criterion("criterion 11 codec efficiency", ok,
                     f"payload/H {row['ratio']:.5f}, lossless {row['all_lossless']}, "
                     f"structural {row['all_structural_ok']}, {t}")
    assert ok


def test_criterion_12_incompressibility():
    ns = [10**3, 10**4, 10**5, 10**6]
    with Budget(60) as t:
        ratios = []
        for n in ns:
            params = ModelParams(n, 0.5, _log2(n))
            ratios.append(compressibility_ratio(sw_entropy_exact(params), sw_expected_edges(params)))
    scaled = [r / math.log(n) for r, n in zip(ratios, ns)]
    ok = (all(x < y for x, y in zip(ratios, ratios[1:]))
          and all(0.1 <= s <= 2.0 for s in scaled) and t.ok)
    record_criterion("criterion 12 incompressibility trend", ok,
                     "ratio/log n " + ", ".join(f"{s:.3f}" for s in scaled) + f", {t}")
    assert ok
