import math

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from covertnet.channel import ChannelRealization, selection_order
from covertnet.cooperation import (
    CooperationStats,
    activation_threshold,
    c_eps,
    cooperation_stats,
    k_min_asymptotic,
    k_min_exact,
    k_min_homogeneous,
    pa_of_k,
    pa_of_k_from_stats,
)
from covertnet.scenario import BENCHMARK_CONSTANTS, FadingMap, benchmark_scenario, fading_map

C = BENCHMARK_CONSTANTS


@pytest.fixture(scope="module")
def bench():
    return fading_map(benchmark_scenario())


def _stats(e, v, c_const, m=1000, eps=0.03):
    return CooperationStats(e_moment=e, v_moment=v, c_eps=c_eps(eps), c_const=c_const, m=m,
                            mean_lambda=math.sqrt(e - v), lambda_aw=1.0, p_a=0.1, p_max=0.2, epsilon=eps)


def test_c_eps_values():
    assert c_eps(0.05) == pytest.approx((400 - 8 + 0.04) / (2 * math.pi))
    assert c_eps(0.05) == pytest.approx(62.39, abs=0.01)
    for bad in (0.5, 0.0, -0.1, 0.7):
        with pytest.raises(ValueError):
            c_eps(bad)


def test_stats_moments(bench):
    s = cooperation_stats(bench, 0.05, 0.03, C)
    lam = bench.lambda_mw
    assert s.e_moment == pytest.approx(np.mean(lam**2), rel=1e-14)
    assert s.v_moment == pytest.approx(np.var(lam), rel=1e-14)
    assert s.e_moment - s.v_moment == pytest.approx(np.mean(lam) ** 2, rel=1e-12)
    assert s.c_const == pytest.approx(C.p_max**2 / (0.05**2 * bench.lambda_aw**2 * c_eps(0.03)))
    with pytest.raises(ValueError):
        cooperation_stats(bench, 0.0, 0.03, C)


def test_homogeneous_population_has_zero_variance():
    f = FadingMap(1.0, 2e-12, np.ones(50), np.full(50, 1e-12))
    s = cooperation_stats(f, 0.1, 0.03, C)
    assert s.v_moment == 0.0
    assert s.e_moment == pytest.approx(1e-24)


def test_zero_variance_limit():
    s = _stats(e=1.0, v=0.0, c_const=0.02)
    r = k_min_exact(s)
    assert r.k_min == 50 and r.feasible
    assert r.raw_root == pytest.approx(50.0, rel=1e-12)
    assert k_min_asymptotic(s).k_min == 50


def test_infeasible_results():
    # x = 4V/(C M (E+V)^2) > 1: no real root
    s = _stats(e=1.0, v=0.9, c_const=1e-4, m=100)
    r = k_min_exact(s)
    assert not r.feasible and r.k_min == 101 and math.isinf(r.raw_root)
    # real root beyond M
    s = _stats(e=1.0, v=0.0, c_const=1e-3, m=100)
    r = k_min_exact(s)
    assert not r.feasible and r.k_min == 1000


def test_exact_matches_textbook_root(bench):
    for p_a, eps in ((0.05, 0.03), (0.1, 0.03), (0.025, 0.05)):
        s = cooperation_stats(bench, p_a, eps, C)
        e, v, c, m = s.e_moment, s.v_moment, s.c_const, s.m
        textbook = m * (e + v) / (2 * v) * (1 - math.sqrt(1 - 4 * v / (c * m * (e + v) ** 2)))
        assert k_min_exact(s).raw_root == pytest.approx(textbook, rel=1e-9)
        # the root satisfies C K (E + V - K V / M) = 1
        k = k_min_exact(s).raw_root
        assert c * k * (e + v - k * v / m) == pytest.approx(1.0, rel=1e-12)


def test_asymptotic_close_and_scaling(bench):
    for p_a, eps in ((0.05, 0.03), (0.025, 0.025), (0.025, 0.05)):
        s = cooperation_stats(bench, p_a, eps, C)
        assert abs(k_min_exact(s).k_min - k_min_asymptotic(s).k_min) <= 1
    # the gap is second order: exact ~ K_a (1 + K_a V / (M (E + V))); 140 vs 138 at 100 mW
    for p_a in (0.05, 0.1, 0.15):
        s = cooperation_stats(bench, p_a, 0.03, C)
        ka = k_min_asymptotic(s).raw_root
        predicted = ka**2 * s.v_moment / (s.m * (s.e_moment + s.v_moment))
        assert k_min_exact(s).raw_root - ka == pytest.approx(predicted, rel=0.1)
    a = k_min_asymptotic(cooperation_stats(bench, 0.05, 0.01, C)).raw_root
    b = k_min_asymptotic(cooperation_stats(bench, 0.05, 0.02, C)).raw_root
    assert a / b == pytest.approx(4.0, rel=0.01)


def test_homogeneous_examples(bench):
    r = k_min_homogeneous(C.p_max, 1e-12, 1e-12, 0.03, C)
    assert r.k_min == math.ceil(c_eps(0.03))
    r1 = k_min_homogeneous(0.05, bench.lambda_aw, 1e-13, 0.03, C)
    r2 = k_min_homogeneous(0.10, bench.lambda_aw, 1e-13, 0.03, C)
    assert r2.raw_root == pytest.approx(4 * r1.raw_root, rel=1e-12)
    with pytest.raises(ValueError):
        k_min_homogeneous(0.1, 1.0, 0.0, 0.03, C)


def test_homogeneous_overestimates_on_adverse_layout(bench):
    lam_bar = float(np.mean(bench.lambda_mw))
    for p_a in (0.025, 0.05, 0.1):
        for eps in (0.05, 0.03, 0.025):
            exact = k_min_exact(cooperation_stats(bench, p_a, eps, C)).k_min
            homog = k_min_homogeneous(p_a, bench.lambda_aw, lam_bar, eps, C).k_min
            assert homog >= exact


def test_near_homogeneous_population_matches_homogeneous():
    lam = 1e-13 * (1 + 1e-9 * np.linspace(-1, 1, 1000))
    f = FadingMap(1.0, 3e-13, np.ones(1000), lam)
    for p_a in (0.02, 0.05, 0.1):
        s = cooperation_stats(f, p_a, 0.03, C)
        homog = k_min_homogeneous(p_a, f.lambda_aw, float(np.mean(lam)), 0.03, C)
        assert abs(k_min_exact(s).raw_root - homog.raw_root) <= 1e-6 * homog.raw_root


@given(st.floats(0.005, 0.2), st.floats(1.01, 3.0), st.floats(0.01, 0.2))
def test_monotone_in_power_and_epsilon(p_a, f, eps):
    bench = fading_map(benchmark_scenario())
    base = k_min_exact(cooperation_stats(bench, p_a, eps, C)).raw_root
    assert k_min_exact(cooperation_stats(bench, p_a * f, eps, C)).raw_root >= base
    assume(eps * f < 0.5)
    assert k_min_exact(cooperation_stats(bench, p_a, eps * f, C)).raw_root <= base


def test_pa_of_k_examples(bench):
    s = cooperation_stats(bench, C.p_max, 0.03, C)
    assert pa_of_k_from_stats(0, s, C) == 0.0
    kw = dict(e_moment=2.0, v_moment=0.0, lambda_aw=0.5, epsilon=0.03, constants=C, m=40)
    assert pa_of_k(40, **kw) == pytest.approx(C.p_max / (math.sqrt(c_eps(0.03)) * 0.5) * math.sqrt(2.0 * 40))
    with pytest.raises(ValueError):
        pa_of_k(41, **kw)
    with pytest.raises(ValueError):
        pa_of_k(3, **{**kw, "e_moment": -5.0})


@given(st.integers(1, 1000), st.floats(0.01, 0.2))
def test_pa_of_k_round_trip(k_bar, eps):
    bench = fading_map(benchmark_scenario())
    s = cooperation_stats(bench, C.p_max, eps, C)
    p = pa_of_k_from_stats(k_bar, s, C)
    raw = k_min_exact(cooperation_stats(bench, p, eps, C)).raw_root
    assert raw == pytest.approx(k_bar, rel=1e-6)


def test_pa_of_k_increasing(bench):
    s = cooperation_stats(bench, C.p_max, 0.03, C)
    p = pa_of_k_from_stats(np.arange(bench.m + 1), s, C)
    assert np.all(np.diff(p) > 0)
    assert bench.m * (s.e_moment + s.v_moment) / (2 * s.v_moment) >= bench.m


def _order(ratios):
    r = np.asarray(ratios, float)
    f = FadingMap(1.0, 1.0, np.ones(r.size), np.ones(r.size))
    return selection_order(ChannelRealization(1.0, 1.0, r, np.ones(r.size)), f)


def test_activation_threshold_examples():
    o = _order([0.4, 0.1, 0.9, 0.3])
    assert activation_threshold(o, 4) == 0.9
    assert activation_threshold(o, 1) == 0.1
    assert activation_threshold(o, 0) < 0.1
    with pytest.raises(ValueError):
        activation_threshold(o, 5)


@given(st.lists(st.floats(0.0, 1e3), min_size=1, max_size=50, unique=True), st.data())
def test_threshold_activates_exactly_k(ratios, data):
    o = _order(ratios)
    k = data.draw(st.integers(0, len(ratios)))
    tau = activation_threshold(o, k)
    assert int(np.count_nonzero(o.ratios <= tau)) == k
