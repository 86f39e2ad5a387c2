"""On-off power profile, covert rate and the search over cooperator counts."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channel import ChannelRealization, SelectionOrder, bob_only_order, selection_order
from .cooperation import (
    NO_ACTIVATION,
    activation_threshold,
    c_eps,
    cooperation_stats,
    k_min_exact,
    k_min_homogeneous,
    pa_of_k_from_stats,
)
from .scenario import FadingMap, RadioConstants, _readonly


@dataclass(frozen=True, eq=False)
class PowerProfile:
    """Alice's power plus an on-off power per user (watts)."""

    p_a: float
    p_users: np.ndarray
    tau: float
    k: int

    def __post_init__(self):
        object.__setattr__(self, "p_users", _readonly(self.p_users))
        if self.p_a < 0:
            raise ValueError(f"p_a must be >= 0 (got {self.p_a})")
        if self.k != int(np.count_nonzero(self.p_users)):
            raise ValueError("k must equal the number of active users")


@dataclass(frozen=True, eq=False)
class OptimizationResult:
    """Best cell of the search.

    ``trace`` has one row ``(P_a, K_bar, rate)`` per cell K_bar = 0..M; cells
    that cannot meet the covert target carry ``rate = -inf``. ``feasible``
    means a strictly positive covert rate is attainable (silence, the K_bar = 0
    cell, is always allowed).
    """

    p_a_star: float
    k_star: int
    tau_star: float
    rate_star: float
    feasible: bool
    trace: np.ndarray
    policy: str = "proposed"

    def __post_init__(self):
        object.__setattr__(self, "trace", _readonly(self.trace))


def on_off_profile(order: SelectionOrder, tau: float, p_a: float, constants: RadioConstants) -> PowerProfile:
    """Users whose ratio is at most ``tau`` transmit at P_max, the rest stay silent."""
    if p_a > constants.p_max * (1.0 + 1e-12):
        raise ValueError(f"p_a = {p_a} W exceeds P_max = {constants.p_max} W")
    if p_a < 0:
        raise ValueError(f"p_a must be >= 0 (got {p_a})")
    active = order.ratios <= tau
    p_users = np.where(active, constants.p_max, 0.0)
    return PowerProfile(p_a=min(p_a, constants.p_max), p_users=p_users, tau=tau,
                        k=int(np.count_nonzero(active)))


def achievable_rate(profile: PowerProfile, realization: ChannelRealization,
                    constants: RadioConstants) -> float:
    """Bob's rate in bits per channel use, helpers treated as noise."""
    interference = float(np.dot(profile.p_users, realization.g_mb))
    snr = profile.p_a * realization.g_ab / (interference + constants.sigma_b_sq)
    return float(np.log2(1.0 + snr))


def _interference_prefix(realization: ChannelRealization, order: SelectionOrder,
                         constants: RadioConstants) -> np.ndarray:
    # entry k: Bob-side interference with the first k users of the order active
    g = realization.g_mb[order.order]
    return np.concatenate(([0.0], np.cumsum(constants.p_max * g)))


def _best_cell(powers: np.ndarray, usable: np.ndarray, realization: ChannelRealization,
               order: SelectionOrder, constants: RadioConstants, policy: str) -> OptimizationResult:
    m = order.m
    k_bar = np.arange(m + 1)
    interference = _interference_prefix(realization, order, constants)
    rates = np.log2(1.0 + powers * realization.g_ab / (interference + constants.sigma_b_sq))
    rates = np.where(usable, rates, -np.inf)
    # silence is always allowed
    powers = powers.copy()
    powers[0] = 0.0
    rates[0] = 0.0
    # np.argmax returns the first maximum: ties go to the smaller K_bar
    k_star = int(np.argmax(rates))
    rate_star = float(rates[k_star])
    trace = np.column_stack([powers, k_bar.astype(float), rates])
    if k_star == 0 or not rate_star > 0:
        return OptimizationResult(0.0, 0, NO_ACTIVATION, 0.0, False, trace, policy)
    return OptimizationResult(
        p_a_star=float(powers[k_star]),
        k_star=k_star,
        tau_star=activation_threshold(order, k_star),
        rate_star=rate_star,
        feasible=True,
        trace=trace,
        policy=policy,
    )


def piecewise_search(realization: ChannelRealization, fading: FadingMap, epsilon: float,
                     constants: RadioConstants) -> OptimizationResult:
    """Maximise the covert rate over K_bar = 0..M.

    For each K_bar, Alice uses the largest power whose minimum cooperator count
    is K_bar (clamped to P_max) and the K_bar lowest-ratio users are switched
    on. Within a cell the rate grows with P_a, so only the cell maximum needs
    evaluating. A clamped cell is kept only if K_bar users suffice at P_max.
    """
    c_eps(epsilon)
    m = fading.m
    order = selection_order(realization, fading)
    stats = cooperation_stats(fading, constants.p_max, epsilon, constants)
    k_bar = np.arange(m + 1)
    unclamped = pa_of_k_from_stats(k_bar, stats, constants)
    powers = np.minimum(constants.p_max, unclamped)
    at_pmax = k_min_exact(stats)
    usable = (unclamped < constants.p_max) | (at_pmax.feasible & (k_bar >= at_pmax.k_min))
    return _best_cell(powers, usable, realization, order, constants, "proposed")


def homogeneous_power(k_bar, lambda_aw: float, lambda_bar: float, epsilon: float,
                      constants: RadioConstants):
    """Inverse of the homogeneous K_min: ``P_max (lambda_bar/lambda_aw) sqrt(K/c_eps)``."""
    kb = np.asarray(k_bar, dtype=float)
    return constants.p_max * (lambda_bar / lambda_aw) * np.sqrt(kb / c_eps(epsilon))


def baseline_policy(realization: ChannelRealization, fading: FadingMap, epsilon: float,
                    constants: RadioConstants, power_control: bool = False) -> OptimizationResult:
    """Reference scheme: Bob-gain ordering and homogeneous cooperator sizing.

    By default Alice always transmits at P_max and switches on the K_hom users
    with the weakest gain to Bob, where K_hom is the homogeneous K_min for the
    mean lambda_mw. The result is infeasible when K_hom > M.

    ``power_control=True`` instead reuses the piecewise sweep with the
    homogeneous power map ``P(K) = P_max (lambda_bar/lambda_aw) sqrt(K/c_eps)``.
    """
    m = fading.m
    order = bob_only_order(realization)
    lambda_bar = float(np.mean(fading.lambda_mw))
    at_pmax = k_min_homogeneous(constants.p_max, fading.lambda_aw, lambda_bar, epsilon,
                                constants, m=m)
    k_bar = np.arange(m + 1)
    if power_control:
        unclamped = homogeneous_power(k_bar, fading.lambda_aw, lambda_bar, epsilon, constants)
        powers = np.minimum(constants.p_max, unclamped)
        usable = (unclamped < constants.p_max) | (k_bar >= at_pmax.k_min)
        return _best_cell(powers, usable, realization, order, constants, "baseline_pc")
    powers = np.full(m + 1, constants.p_max)
    usable = k_bar == at_pmax.k_min
    return _best_cell(powers, usable, realization, order, constants, "baseline")


def covert_margin(result: OptimizationResult, fading: FadingMap, epsilon: float,
                  constants: RadioConstants) -> float:
    """Closed-form minimum DEP at the optimum minus ``1 - epsilon`` (inf when silent)."""
    from .detection import detection_params, min_dep

    if result.k_star == 0 or result.p_a_star == 0:
        return math.inf
    params = detection_params(result.p_a_star, fading, result.k_star, constants)
    return min_dep(params) - (1.0 - epsilon)
