"""Acceptance checks shared by the test suite and ``covertnet validate``.

Each ``criterion_N`` returns a list of :class:`CheckResult`, one per
sub-check, so partial outcomes stay visible.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .channel import draw_realization, trial_seed
from .cooperation import cooperation_stats, k_min_exact, pa_of_k_from_stats
from .detection import erfc_approx
from .montecarlo import (
    DEFAULT_TRIALS,
    build_trial_pool,
    bracket_upper_bound,
    compare_sweep,
    empirical_dep_curve,
    empirical_k_min,
    grid_search_rate,
    kmin_variants,
    loglog_slope,
    on_off_brute_force,
    on_off_structure_ok,
    pairwise_majority,
    random_on_off_instance,
    ring_scenario,
    sensitivity_sweep,
)
from .optimizer import piecewise_search
from .scenario import BENCHMARK_CONSTANTS, BENCHMARK_SEED, fading_map, benchmark_scenario

C = BENCHMARK_CONSTANTS
MC_SEED = 2024
STRINGENCY = tuple(round(0.90 + 0.01 * i, 2) for i in range(10)) + (0.975,)


@dataclass(frozen=True)
class CheckResult:
    criterion: int
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"criterion {self.criterion} {self.name}: {'PASS' if self.passed else 'FAIL'} ({self.detail})"


@lru_cache(maxsize=None)
def _fading(seed: int = BENCHMARK_SEED, m: int = 1000):
    return fading_map(benchmark_scenario(seed=seed, m=m))


@lru_cache(maxsize=4)
def _pool(seed: int, trials: int = DEFAULT_TRIALS):
    return build_trial_pool(_fading(seed), C, trials, seed=MC_SEED + seed)


def _within(value: float, target: float, rel: float) -> bool:
    return abs(value - target) <= rel * target


def criterion_1() -> list:
    out = []
    f = _fading()
    for k, p_a in ((60, 0.0667), (60, 0.1), (30, 0.1)):
        t0 = time.perf_counter()
        pool = build_trial_pool(f, C, DEFAULT_TRIALS, seed=MC_SEED)
        curve = empirical_dep_curve(f, C, p_a, k, pool=pool)
        elapsed = time.perf_counter() - t0
        tag = f"K={k},Pa={p_a * 1e3:g}mW"
        steps = abs(curve.empirical_argmin - curve.gamma_star) / curve.grid_step
        out += [
            CheckResult(1, f"sup-norm {tag}", curve.sup_error <= 0.05, f"sup={curve.sup_error:.4f}"),
            CheckResult(1, f"gamma* vs empirical argmin {tag}", steps <= 2,
                        f"{steps:.1f} grid steps"),
            CheckResult(1, f"zeta_min {tag}", abs(curve.empirical_min - curve.zeta_min_cf) <= 0.02,
                        f"emp={curve.empirical_min:.4f} cf={curve.zeta_min_cf:.4f}"),
            CheckResult(1, f"runtime {tag}", elapsed <= 60.0, f"{elapsed:.2f}s"),
        ]
    return out


def criterion_2() -> list:
    worst, fails = 0.0, []
    for seed in range(1, 11):
        f = _fading(seed)
        pool = _pool(seed)
        for p_a in (0.05, 0.1):
            exact = k_min_exact(cooperation_stats(f, p_a, 0.03, C)).k_min
            emp = empirical_k_min(f, C, p_a, 0.03, pool=pool)
            gap = math.inf if emp is None else abs(emp - exact)
            worst = max(worst, gap / max(3.0, 0.1 * exact))
            if gap > max(3.0, 0.1 * exact):
                fails.append((seed, p_a, exact, emp))
    out = [CheckResult(2, "closed form vs simulation, 10 seeds", not fails,
                       f"worst gap/tolerance={worst:.2f}, failures={fails}")]
    f = _fading()
    for p_a, anchor in ((0.05, 90), (0.1, 245)):
        k = k_min_exact(cooperation_stats(f, p_a, 0.03, C)).k_min
        out.append(CheckResult(2, f"anchor {anchor} at {p_a * 1e3:g}mW", _within(k, anchor, 0.15),
                               f"k_min_exact={k}"))
    return out


def criterion_3() -> list:
    f = _fading()
    eps = 1.0 - np.linspace(0.90, 0.99, 10)
    out = []
    for p_a in (0.025, 0.05):
        k = [k_min_exact(cooperation_stats(f, p_a, e, C)).k_min for e in eps]
        s = loglog_slope(eps, k)
        out.append(CheckResult(3, f"log-log slope at {p_a * 1e3:g}mW", -2.3 <= s <= -1.7,
                               f"slope={s:.3f}"))
    for ome, anchor in ((0.95, 12), (0.975, 50)):
        k = k_min_exact(cooperation_stats(f, 0.025, 1.0 - ome, C)).k_min
        out.append(CheckResult(3, f"anchor {anchor} at 1-eps={ome}", _within(k, anchor, 0.20),
                               f"k_min_exact={k}"))
    return out


def criterion_4() -> list:
    points = ((0.025, 0.05), (0.025, 0.025), (0.05, 0.03), (0.05, 0.05))
    worst, bad = 0, 0
    for m in (500, 1000, 2000):
        for seed in range(20):
            f = _fading(100 + seed, m)
            for p_a, eps in points:
                v = kmin_variants(f, p_a, eps, C)
                d = abs(v["kmin_exact"] - v["kmin_asym"])
                worst = max(worst, d)
                bad += d > 1
    return [CheckResult(4, "exact vs asymptotic, M in {500,1000,2000} x 20 seeds", bad == 0,
                        f"max gap={worst}, violations={bad}")]


def criterion_5() -> list:
    gaps = []
    for seed in range(10):
        f = fading_map(ring_scenario(600.0, 1e-6, seed))
        v = kmin_variants(f, 0.1, 0.03, C)
        gaps.append(abs(v["kmin_exact"] - v["kmin_homog"]))
    over = []
    for seed in range(20):
        f = _fading(100 + seed)
        for p_a, eps in ((0.025, 0.05), (0.025, 0.025), (0.05, 0.03), (0.1, 0.03)):
            v = kmin_variants(f, p_a, eps, C)
            over.append(v["kmin_homog"] >= v["kmin_exact"])
    return [
        CheckResult(5, "sigma_d -> 0 gap", max(gaps) <= 2, f"max gap={max(gaps)}"),
        CheckResult(5, "homogeneous overestimates on adverse layouts", all(over),
                    f"{sum(over)}/{len(over)} cases"),
    ]


def criterion_6() -> list:
    out = []
    for param, increasing, word in (("sigma_d", False, "decreasing"), ("mu_d", True, "increasing")):
        rows = sensitivity_sweep(param)
        votes = pairwise_majority(rows, increasing=increasing)
        ok = all(frac > 0.5 for _, _, frac in votes)
        out.append(CheckResult(6, f"k_min_exact strictly {word} in {param}", ok,
                               "votes=" + ",".join(f"{frac:.1f}" for _, _, frac in votes)))
    return out


def _random_case(i: int):
    rng = np.random.default_rng(trial_seed(MC_SEED, i))
    f = _fading(500 + i)
    eps = float(rng.uniform(0.01, 0.1))
    real = draw_realization(f, trial_seed(MC_SEED + 1, i))
    return f, eps, real


def criterion_7(cases: int = 50) -> list:
    beaten, gaps, fine_ok, slow = 0, [], True, 0.0
    for i in range(cases):
        f, eps, real = _random_case(i)
        t0 = time.perf_counter()
        res = piecewise_search(real, f, eps, C)
        slow = max(slow, time.perf_counter() - t0)
        coarse = grid_search_rate(real, f, eps, C, 4096)[0]
        # nested grid: every coarse point is also a fine point
        fine = grid_search_rate(real, f, eps, C, 4095 * 16 + 1)[0]
        upper = bracket_upper_bound(real, f, eps, C)
        beaten += coarse > res.rate_star + 1e-6
        gaps.append(abs(res.rate_star - coarse))
        fine_ok &= coarse <= fine <= res.rate_star + 1e-12 <= upper + 1e-12
    return [
        CheckResult(7, "grid oracle never beats the search", beaten == 0, f"{beaten}/{cases} beaten"),
        CheckResult(7, "search matches 4096-point grid within 1e-6", max(gaps) <= 1e-6,
                    f"max |gap|={max(gaps):.2e}"),
        CheckResult(7, "finer grid converges from below", bool(fine_ok), f"{cases} cases"),
        CheckResult(7, "runtime at M=1000", slow <= 1.0, f"max {slow * 1e3:.1f} ms"),
    ]


def criterion_8() -> list:
    f = _fading()
    sweep = compare_sweep(f, C, STRINGENCY, realizations=100, seed=MC_SEED)
    raw = sweep["raw"]
    worse = 0
    for ome in STRINGENCY:
        for p, b in zip(raw[(ome, "proposed")], raw[(ome, "baseline")]):
            if p.feasible and b.feasible and p.rate_star < b.rate_star - 1e-12:
                worse += 1
    flips = [ome for ome in STRINGENCY if ome >= 0.97
             and all(r.feasible for r in raw[(ome, "proposed")])
             and not any(r.feasible for r in raw[(ome, "baseline")])]
    levels = sorted(o for o in STRINGENCY if o >= 0.93)
    pa = [np.mean([r.p_a_star for r in raw[(o, "proposed")]]) for o in levels]
    mono = all(b <= a * (1 + 1e-12) for a, b in zip(pa, pa[1:]))
    return [
        CheckResult(8, "proposed rate >= baseline per realization", worse == 0, f"{worse} violations"),
        CheckResult(8, "baseline infeasible, proposed feasible at some 1-eps >= 0.97", bool(flips),
                    f"levels={flips}"),
        CheckResult(8, "mean P_a*/P_max non-increasing for 1-eps >= 0.93", mono,
                    "ratios=" + ",".join(f"{p / C.p_max:.3f}" for p in pa)),
    ]


def criterion_9(instances: int = 100) -> list:
    rng = np.random.default_rng(MC_SEED)
    bad = 0
    for _ in range(instances):
        inst = random_on_off_instance(rng, levels=6)
        powers = on_off_brute_force(inst)
        if powers is None or not on_off_structure_ok(inst, powers):
            bad += 1
    return [CheckResult(9, "on-off structure over brute-force instances", bad == 0,
                        f"{bad}/{instances} counterexamples")]


def criterion_10() -> list:
    worst_ev, worst_rt = 0.0, 0.0
    for seed in range(20):
        lam = _fading(100 + seed).lambda_mw
        e, v, mu = np.mean(lam**2), np.var(lam), np.mean(lam)
        worst_ev = max(worst_ev, abs((e - v) - mu**2) / mu**2)
    f = _fading()
    for k_bar in (1, 7, 35, 140, 600, 1000):
        stats = cooperation_stats(f, C.p_max, 0.03, C)
        p = pa_of_k_from_stats(k_bar, stats, C)
        raw = k_min_exact(cooperation_stats(f, p, 0.03, C)).raw_root
        worst_rt = max(worst_rt, abs(raw - k_bar) / k_bar)
    from scipy.special import erfc

    x = np.linspace(1.0, 20.0, 2000)
    rel = float(np.max(np.abs(erfc_approx(x) - erfc(x)) / erfc(x)))
    return [
        CheckResult(10, "E - V = mean^2", worst_ev <= 1e-12, f"max rel={worst_ev:.1e}"),
        CheckResult(10, "pa_of_k / k_min_exact round trip", worst_rt <= 1e-6, f"max rel={worst_rt:.1e}"),
        CheckResult(10, "erfc approximation for x >= 1", rel < 0.01, f"max rel={rel:.4f}"),
    ]


CRITERIA = {
    1: criterion_1,
    2: criterion_2,
    3: criterion_3,
    4: criterion_4,
    5: criterion_5,
    6: criterion_6,
    7: criterion_7,
    8: criterion_8,
    9: criterion_9,
    10: criterion_10,
}


def run_all(which=None) -> list:
    results = []
    for n in sorted(which or CRITERIA):
        results.extend(CRITERIA[n]())
    return results
