"""Willie's energy detector under the on-off cooperation policy.

Closed forms for the detection error probability (DEP) curve, the optimal
threshold and the minimum DEP. The aggregate interference at Willie is
modelled as Gaussian with mean ``xi`` and variance ``sigma_big`` averaged over
a uniformly random K-subset of the M users; Alice adds an exponential term
with mean ``delta``.

The closed forms need a non-degenerate Gaussian part (K >= 1) and a present
covert signal (P_a > 0). Outside that range the functions either raise
:class:`DegenerateModelError` or return a conventional value together with a
:class:`DegenerateModelWarning`.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.special import erfcx, log_ndtr, ndtr

from .scenario import FadingMap, RadioConstants

SQRT_PI = math.sqrt(math.pi)


class DegenerateModelError(ValueError):
    """The Gaussian-plus-exponential DEP model is undefined for these inputs."""


class DegenerateModelWarning(UserWarning):
    """A closed form was evaluated outside its validity range."""


@dataclass(frozen=True)
class DetectionParams:
    """Parameters of Willie's test-statistic distribution (watts, watts^2)."""

    delta: float
    xi: float
    sigma_big: float
    k: int
    m: int
    sigma_w_sq: float

    def __post_init__(self):
        if self.delta < 0 or self.xi < 0 or self.sigma_big < 0:
            raise ValueError("delta, xi and sigma_big must be >= 0")
        if not 0 <= self.k <= self.m:
            raise ValueError(f"k must lie in [0, m]; got k={self.k}, m={self.m}")

    @property
    def variance_ratio(self) -> float:
        """``sigma_big / (2 delta^2)``, the single number the minimum DEP depends on."""
        if self.delta == 0:
            return math.inf
        return self.sigma_big / (2.0 * self.delta**2)


@dataclass(frozen=True)
class DepPoint:
    gamma: np.ndarray
    p_fa: np.ndarray
    p_md: np.ndarray
    zeta: np.ndarray


def detection_params(p_a: float, fading: FadingMap, k: int, constants: RadioConstants) -> DetectionParams:
    """Mean and variance of the aggregate interference for K active users."""
    m = fading.m
    if p_a < 0:
        raise ValueError(f"p_a must be >= 0 (got {p_a})")
    if not 0 <= k <= m:
        raise ValueError(f"k must lie in [0, {m}] (got {k})")
    if k >= 1 and m < 2:
        raise ValueError("need M >= 2 users: the finite-population factor divides by M - 1")
    lam = fading.lambda_mw
    p_max = constants.p_max
    xi = k * p_max * float(np.mean(lam))
    if k == 0:
        sigma_big = 0.0
    else:
        fpc = k * (m - k) / (m - 1)
        sigma_big = p_max**2 * (k * float(np.mean(lam**2)) + fpc * float(np.var(lam)))
    return DetectionParams(
        delta=p_a * fading.lambda_aw,
        xi=xi,
        sigma_big=sigma_big,
        k=int(k),
        m=m,
        sigma_w_sq=constants.sigma_w_sq,
    )


def _check_nondegenerate(params: DetectionParams) -> None:
    if params.sigma_big <= 0:
        raise DegenerateModelError("sigma_big = 0: no cooperative interference (K = 0)")
    if params.delta <= 0:
        raise DegenerateModelError("delta = 0: Alice is silent, both hypotheses coincide")


def _log_tail_product(params: DetectionParams, gamma) -> np.ndarray:
    """log of exp(-(2D(g-X) - S)/(2D^2)) * Q(-(D(g-X) - S)/(sqrt(S) D))."""
    d, x, s = params.delta, params.xi, params.sigma_big
    g_hat = np.asarray(gamma, dtype=float) - params.sigma_w_sq
    exponent = -(2.0 * d * (g_hat - x) - s) / (2.0 * d * d)
    q_arg = -(d * (g_hat - x) - s) / (math.sqrt(s) * d)
    # Q(z) = Phi(-z); work in logs so the huge exponent never overflows
    return exponent + log_ndtr(-q_arg)


def dep_point(params: DetectionParams, gamma) -> DepPoint:
    """False-alarm / miss-detection split of the DEP at threshold(s) ``gamma``."""
    _check_nondegenerate(params)
    g = np.asarray(gamma, dtype=float)
    z = (g - params.sigma_w_sq - params.xi) / math.sqrt(params.sigma_big)
    p_fa = ndtr(-z)
    p_md = np.clip(ndtr(z) - np.exp(_log_tail_product(params, g)), 0.0, 1.0)
    return DepPoint(gamma=g, p_fa=p_fa, p_md=p_md, zeta=p_fa + p_md)


def dep_closed_form(params: DetectionParams, gamma):
    """DEP ``zeta(gamma)`` of the Gaussian-interference model (vectorised)."""
    _check_nondegenerate(params)
    zeta = 1.0 - np.exp(_log_tail_product(params, gamma))
    return float(zeta) if np.ndim(gamma) == 0 else zeta


def dep_exponential_approx(params: DetectionParams, gamma, c_q: float = 0.5):
    """DEP with Q replaced by ``c_q * exp(-x^2/2)``; a pure quadratic in gamma.

    Only used to check that the optimal threshold sits at the vertex.
    """
    if params.sigma_big <= 0:
        raise DegenerateModelError("sigma_big = 0: no cooperative interference (K = 0)")
    g_hat = np.asarray(gamma, dtype=float) - params.sigma_w_sq
    zeta = 1.0 - c_q * np.exp(-((g_hat - params.xi) ** 2) / (2.0 * params.sigma_big))
    return float(zeta) if np.ndim(gamma) == 0 else zeta


def optimal_gamma(params: DetectionParams) -> float:
    return params.xi + params.sigma_w_sq


def default_gamma_grid(params: DetectionParams, points: int = 2000, spread: float = 6.0) -> np.ndarray:
    """Thresholds from the noise floor up to ``xi + spread*sqrt(sigma_big)``."""
    lo = params.sigma_w_sq
    hi = params.xi + spread * math.sqrt(params.sigma_big) + params.sigma_w_sq
    return np.linspace(lo, hi, points)


def erfc_approx(x):
    """``2/sqrt(pi) * exp(-x^2) / (x + sqrt(x^2 + 4/pi))``; tight for x >~ 1."""
    xa = np.asarray(x, dtype=float)
    if np.any(xa < 0):
        raise ValueError("erfc_approx is defined for x >= 0")
    out = 2.0 / SQRT_PI * np.exp(-xa * xa) / (xa + np.sqrt(xa * xa + 4.0 / math.pi))
    return float(out) if np.ndim(x) == 0 else out


def min_dep_from_ratio(ratio):
    """Minimum DEP as a function of ``sigma_big / (2 delta^2)``."""
    r = np.asarray(ratio, dtype=float)
    out = 1.0 - 1.0 / (SQRT_PI * (np.sqrt(r) + np.sqrt(r + 4.0 / math.pi)))
    return float(out) if np.ndim(ratio) == 0 else out


def min_dep(params: DetectionParams) -> float:
    """Willie's DEP at the optimal threshold, using the erfc approximation.

    ``delta = 0`` returns 1 (nothing to detect). ``k = 0`` returns the
    formula's value of 0.5 even though a silent-helper Willie would detect
    perfectly; both cases warn.
    """
    if params.delta <= 0:
        warnings.warn("delta = 0: no covert signal, minimum DEP set to 1 by convention",
                      DegenerateModelWarning, stacklevel=2)
        return 1.0
    if params.sigma_big <= 0:
        warnings.warn("sigma_big = 0: closed form returns 0.5, outside its validity range",
                      DegenerateModelWarning, stacklevel=2)
    return min_dep_from_ratio(params.variance_ratio)


def min_dep_unapproximated(params: DetectionParams) -> float:
    """Same as :func:`min_dep` but with the exact erfc: ``1 - erfcx(sqrt(r))/2``."""
    _check_nondegenerate(params)
    return float(1.0 - 0.5 * erfcx(math.sqrt(params.variance_ratio)))


def covert_ratio_for(epsilon: float) -> float:
    """Value of ``sigma_big / (2 delta^2)`` at which the minimum DEP equals 1 - epsilon."""
    if not 0 < epsilon < 0.5:
        raise ValueError(f"epsilon must lie in (0, 0.5) (got {epsilon})")
    return ((1.0 - 4.0 * epsilon**2) / (2.0 * epsilon * SQRT_PI)) ** 2

