"""Rayleigh block-fading power gains on the covert band and user ordering."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .scenario import FadingMap, _readonly


@dataclass(frozen=True, eq=False)
class ChannelRealization:
    """One draw of |h|^2 for every link on the covert band.

    ``g_mb`` and ``g_mw`` are length-M arrays (users to Bob, users to Willie).
    """

    g_ab: float
    g_aw: float
    g_mb: np.ndarray
    g_mw: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "g_mb", _readonly(self.g_mb))
        object.__setattr__(self, "g_mw", _readonly(self.g_mw))
        if self.g_mb.shape != self.g_mw.shape:
            raise ValueError("g_mb and g_mw must have equal length")
        if self.g_ab < 0 or self.g_aw < 0 or np.any(self.g_mb < 0) or np.any(self.g_mw < 0):
            raise ValueError("power gains must be >= 0")

    @property
    def m(self) -> int:
        return int(self.g_mb.shape[0])


@dataclass(frozen=True, eq=False)
class SelectionOrder:
    """Per-user activation metric and the stable ascending order of it."""

    ratios: np.ndarray
    order: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "ratios", _readonly(self.ratios))
        order = np.array(self.order, dtype=np.intp)
        order.setflags(write=False)
        object.__setattr__(self, "order", order)

    @property
    def m(self) -> int:
        return int(self.ratios.shape[0])

    def sorted_ratios(self) -> np.ndarray:
        return self.ratios[self.order]


def trial_seed(master: int, index: int) -> np.random.SeedSequence:
    """Sub-seed for trial ``index``; independent of how trials are scheduled."""
    return np.random.SeedSequence(entropy=int(master), spawn_key=(int(index),))


def draw_realization(fading: FadingMap, seed) -> ChannelRealization:
    """Draw exponential power gains with the link means from ``fading``.

    ``seed`` is anything ``numpy.random.default_rng`` accepts. The draw order
    (Alice-Bob, Alice-Willie, users-Bob, users-Willie) is fixed so a seed
    always gives the same realization.
    """
    rng = np.random.default_rng(seed)
    g_ab = float(rng.exponential(fading.lambda_ab))
    g_aw = float(rng.exponential(fading.lambda_aw))
    g_mb = rng.exponential(fading.lambda_mb)
    g_mw = rng.exponential(fading.lambda_mw)
    return ChannelRealization(g_ab, g_aw, g_mb, g_mw)


def _stable_order(ratios: np.ndarray) -> SelectionOrder:
    # stable sort: equal ratios keep ascending user index
    return SelectionOrder(ratios, np.argsort(ratios, kind="stable"))


def selection_order(realization: ChannelRealization, fading: FadingMap) -> SelectionOrder:
    """Order users by |h_mb|^2 / lambda_mw, smallest first."""
    if realization.m != fading.m:
        raise ValueError(f"realization has {realization.m} users, fading map has {fading.m}")
    return _stable_order(realization.g_mb / fading.lambda_mw)


def bob_only_order(realization: ChannelRealization) -> SelectionOrder:
    """Order users by their instantaneous gain to Bob alone (prior-work policy)."""
    return _stable_order(np.asarray(realization.g_mb, dtype=float))
