"""How many cooperative users are needed, and which ones.

All K_min variants solve ``C K (E + V - K V / M) = 1`` (or a simplification of
it), where ``E`` is the mean of lambda_mw^2, ``V`` the population variance of
lambda_mw and ``C = P_max^2 / (P_a^2 lambda_aw^2 c_eps)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .channel import SelectionOrder
from .scenario import FadingMap, RadioConstants

# relative slack before rounding up, absorbs float dust at integer boundaries
CEIL_SLACK = 1e-9

# threshold returned when nobody should transmit
NO_ACTIVATION = -math.inf


def c_eps(epsilon: float) -> float:
    """``(1/eps^2 - 8 + 16 eps^2) / (2 pi)``; equals sigma_big/delta^2 at the covert boundary."""
    if not 0 < epsilon < 0.5:
        raise ValueError(f"epsilon must lie in (0, 0.5) (got {epsilon})")
    return (1.0 / epsilon**2 - 8.0 + 16.0 * epsilon**2) / (2.0 * math.pi)


def ceil_count(x: float) -> int:
    if x <= 0:
        return 0
    return int(math.ceil(x * (1.0 - CEIL_SLACK)))


@dataclass(frozen=True)
class CooperationStats:
    """Population moments of lambda_mw and the constants derived from them."""

    e_moment: float
    v_moment: float
    c_eps: float
    c_const: float
    m: int
    mean_lambda: float
    lambda_aw: float
    p_a: float
    p_max: float
    epsilon: float

    def __post_init__(self):
        if self.v_moment < 0 or self.e_moment < self.v_moment * (1.0 - 1e-12):
            raise ValueError("expected E >= V >= 0 (E - V is the squared mean)")
        if not (self.c_eps > 0 and self.c_const > 0):
            raise ValueError("c_eps and C must be > 0")


@dataclass(frozen=True)
class KminResult:
    """Minimum cooperator count.

    ``raw_root`` is the real root before the ceiling (``inf`` when the
    quadratic has no real root). ``k_min`` is then ``m + 1`` as a marker.
    """

    k_min: int
    feasible: bool
    raw_root: float


def cooperation_stats(fading: FadingMap, p_a: float, epsilon: float,
                      constants: RadioConstants) -> CooperationStats:
    if not p_a > 0:
        raise ValueError(f"p_a must be > 0 (got {p_a})")
    ce = c_eps(epsilon)
    lam = fading.lambda_mw
    e_moment = float(np.mean(lam**2))
    v_moment = float(np.var(lam))
    c_const = constants.p_max**2 / (p_a**2 * fading.lambda_aw**2 * ce)
    return CooperationStats(
        e_moment=e_moment,
        v_moment=v_moment,
        c_eps=ce,
        c_const=c_const,
        m=fading.m,
        mean_lambda=float(np.mean(lam)),
        lambda_aw=fading.lambda_aw,
        p_a=p_a,
        p_max=constants.p_max,
        epsilon=epsilon,
    )


def k_min_exact(stats: CooperationStats, m: Optional[int] = None) -> KminResult:
    """Smaller root of the covert-equality quadratic, rounded up.

    Uses ``1 - sqrt(1 - x) = x / (1 + sqrt(1 - x))`` so the root reads
    ``2 / (C (E+V) (1 + sqrt(1 - x)))``; this is finite at V = 0 where it
    reduces to ``1 / (C E)``.
    """
    m = stats.m if m is None else m
    if m < 1:
        raise ValueError("m must be >= 1")
    e, v, c = stats.e_moment, stats.v_moment, stats.c_const
    s = e + v
    x = 4.0 * v / (c * m * s * s)
    if x > 1.0:
        return KminResult(k_min=m + 1, feasible=False, raw_root=math.inf)
    raw = 2.0 / (c * s * (1.0 + math.sqrt(1.0 - x)))
    k = ceil_count(raw)
    return KminResult(k_min=k, feasible=k <= m, raw_root=raw)


def k_min_asymptotic(stats: CooperationStats) -> KminResult:
    """Large-M form ``ceil(1 / (C (E + V)))``.

    The neglected term is of order K^2 V / (M (E + V)), so the two forms drift
    apart once K_min approaches sqrt(M).
    """
    raw = 1.0 / (stats.c_const * (stats.e_moment + stats.v_moment))
    k = ceil_count(raw)
    return KminResult(k_min=k, feasible=k <= stats.m, raw_root=raw)


def k_min_homogeneous(p_a: float, lambda_aw: float, lambda_bar: float, epsilon: float,
                      constants: RadioConstants, m: Optional[int] = None) -> KminResult:
    """K_min when every helper is assumed to see Willie through ``lambda_bar``."""
    if not lambda_bar > 0:
        raise ValueError(f"lambda_bar must be > 0 (got {lambda_bar})")
    raw = p_a**2 * c_eps(epsilon) / constants.p_max**2 * (lambda_aw / lambda_bar) ** 2
    k = ceil_count(raw)
    return KminResult(k_min=k, feasible=m is None or k <= m, raw_root=raw)


def pa_of_k(k_bar, *, e_moment: float, v_moment: float, lambda_aw: float, epsilon: float,
            constants: RadioConstants, m: int):
    """Largest Alice power for which ``k_bar`` cooperators still meet the covert target.

    Vectorised over ``k_bar``. Not clamped to P_max; the caller does that.
    """
    kb = np.asarray(k_bar, dtype=float)
    if np.any(kb < 0) or np.any(kb > m):
        raise ValueError(f"k_bar must lie in [0, {m}]")
    radicand = (e_moment + v_moment) * kb - (v_moment / m) * kb**2
    if np.any(radicand < 0):
        raise ValueError("negative radicand: requires E >= V and 0 <= k_bar <= M")
    out = constants.p_max / (math.sqrt(c_eps(epsilon)) * lambda_aw) * np.sqrt(radicand)
    return float(out) if np.ndim(k_bar) == 0 else out


def pa_of_k_from_stats(k_bar, stats: CooperationStats, constants: RadioConstants):
    return pa_of_k(k_bar, e_moment=stats.e_moment, v_moment=stats.v_moment,
                   lambda_aw=stats.lambda_aw, epsilon=stats.epsilon,
                   constants=constants, m=stats.m)


def activation_threshold(order: SelectionOrder, k_min: int) -> float:
    """Ratio of the ``k_min``-th user in ascending order (-inf for k_min = 0)."""
    if not 0 <= k_min <= order.m:
        raise ValueError(f"k_min must lie in [0, {order.m}] (got {k_min})")
    if k_min == 0:
        return NO_ACTIVATION
    return float(order.ratios[order.order[k_min - 1]])
