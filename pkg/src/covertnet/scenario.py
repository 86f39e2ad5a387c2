"""Network topology, large-scale fading and radio constants.

Everything inside the package is linear (watts, linear power ratios). dB and
dBm only appear when reading or writing scenario files.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any, Optional, Union

import numpy as np

PathLike = Union[str, Path]


class ScenarioError(ValueError):
    """Invalid scenario configuration; the message names the offending field."""


def db_to_linear(db: float) -> float:
    return 10.0 ** (db / 10.0)


def linear_to_db(x: float) -> float:
    return 10.0 * math.log10(x)


def dbm_to_watts(dbm: float) -> float:
    return 10.0 ** ((dbm - 30.0) / 10.0)


def watts_to_dbm(w: float) -> float:
    return 10.0 * math.log10(w) + 30.0


@dataclass(frozen=True)
class RadioConstants:
    """Path-loss model and power budget shared by every node.

    Attributes
    ----------
    beta0 : float
        Reference channel gain at 1 m (linear).
    alpha : float
        Path-loss exponent.
    p_max : float
        Per-user transmit power budget in watts.
    sigma_b_sq, sigma_w_sq : float
        Noise power at Bob and at Willie, in watts.
    """

    beta0: float
    alpha: float
    p_max: float
    sigma_b_sq: float
    sigma_w_sq: float

    def __post_init__(self):
        for name in ("beta0", "alpha", "p_max", "sigma_b_sq", "sigma_w_sq"):
            value = getattr(self, name)
            if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
                raise ScenarioError(f"{name}: must be a finite number > 0 (got {value!r})")

    @classmethod
    def from_db(
        cls,
        beta0_db: float,
        alpha: float,
        p_max_mw: float,
        noise_dbm: float,
        noise_bob_dbm: Optional[float] = None,
        noise_willie_dbm: Optional[float] = None,
    ) -> "RadioConstants":
        if p_max_mw is None or not p_max_mw > 0:
            raise ScenarioError(f"p_max_mw: must be > 0 (got {p_max_mw!r})")
        nb = noise_dbm if noise_bob_dbm is None else noise_bob_dbm
        nw = noise_dbm if noise_willie_dbm is None else noise_willie_dbm
        return cls(
            beta0=db_to_linear(beta0_db),
            alpha=float(alpha),
            p_max=p_max_mw * 1e-3,
            sigma_b_sq=dbm_to_watts(nb),
            sigma_w_sq=dbm_to_watts(nw),
        )


# 3GPP UMa-style single slope: PL(dB) = 34.5 + 35 log10(d), 23 dBm budget, -102 dBm noise.
BENCHMARK_CONSTANTS = RadioConstants.from_db(beta0_db=-34.5, alpha=3.5, p_max_mw=200.0, noise_dbm=-102.0)

BENCHMARK_WILLIE = (500.0, 500.0)
BENCHMARK_BOB = (100.0, 100.0)
BENCHMARK_ALICE = (831.0, 831.0)
BENCHMARK_OUTER_RADIUS = 707.0
BENCHMARK_M = 1000
# Topology seed used for every benchmark reproduction in this package.
BENCHMARK_SEED = 1


def path_loss_coefficient(d, constants: RadioConstants):
    """Large-scale fading coefficient ``beta0 * d**(-alpha)``.

    Accepts a scalar or an array of distances in meters. Non-positive
    distances mean co-located nodes and raise ``ValueError``.
    """
    d_arr = np.asarray(d, dtype=float)
    if np.any(~(d_arr > 0)):
        raise ValueError(f"distance must be > 0 (co-located nodes); got min {np.min(d_arr)!r}")
    out = constants.beta0 * d_arr ** (-constants.alpha)
    if np.ndim(d) == 0:
        return float(out)
    return out


@dataclass(frozen=True)
class Annulus:
    """Ring centred on Willie in which non-covert users are dropped uniformly."""

    r_inner: float
    r_outer: float

    def __post_init__(self):
        if not (math.isfinite(self.r_inner) and self.r_inner >= 0):
            raise ScenarioError(f"r_inner_m: must be >= 0 (got {self.r_inner!r})")
        if not (math.isfinite(self.r_outer) and self.r_inner < self.r_outer):
            raise ScenarioError(
                f"r_outer_m: must exceed r_inner_m (got inner={self.r_inner!r}, outer={self.r_outer!r})"
            )

    def mean_square_radius(self) -> float:
        """E[r^2] for a point uniform over the annulus area."""
        return 0.5 * (self.r_inner**2 + self.r_outer**2)


def _readonly(a) -> np.ndarray:
    arr = np.array(a, dtype=float)
    arr.setflags(write=False)
    return arr


def _point(value, name: str) -> tuple:
    try:
        x, y = (float(v) for v in value)
    except (TypeError, ValueError):
        raise ScenarioError(f"{name}: expected [x, y] coordinates (got {value!r})") from None
    if not (math.isfinite(x) and math.isfinite(y)):
        raise ScenarioError(f"{name}: coordinates must be finite (got {value!r})")
    return (x, y)


@dataclass(frozen=True, eq=False)
class Scenario:
    """Node positions plus radio constants.

    ``user_pos`` is an ``(M, 2)`` read-only array. ``seed`` is the experiment
    seed carried by the scenario file (``None`` if the file had none).
    """

    alice_pos: tuple
    bob_pos: tuple
    willie_pos: tuple
    user_pos: np.ndarray
    constants: RadioConstants
    seed: Optional[int] = None
    geometry: Optional[Annulus] = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "alice_pos", _point(self.alice_pos, "alice"))
        object.__setattr__(self, "bob_pos", _point(self.bob_pos, "bob"))
        object.__setattr__(self, "willie_pos", _point(self.willie_pos, "willie"))
        users = np.asarray(self.user_pos, dtype=float)
        if users.ndim != 2 or users.shape[1] != 2:
            raise ScenarioError(f"users: expected a list of [x, y] pairs (got shape {users.shape})")
        if users.shape[0] < 1:
            raise ScenarioError("users: at least one non-covert user is required")
        if not np.all(np.isfinite(users)):
            raise ScenarioError("users: coordinates must be finite")
        object.__setattr__(self, "user_pos", _readonly(users))

        if self.d_ab <= 0:
            raise ScenarioError("alice: co-located with bob")
        if self.d_aw <= 0:
            raise ScenarioError("alice: co-located with willie")
        bad_w = np.flatnonzero(self.d_mw <= 0)
        if bad_w.size:
            raise ScenarioError(f"users: user {int(bad_w[0])} is co-located with willie")
        bad_b = np.flatnonzero(self.d_mb <= 0)
        if bad_b.size:
            raise ScenarioError(f"users: user {int(bad_b[0])} is co-located with bob")

    @property
    def m(self) -> int:
        return int(self.user_pos.shape[0])

    @property
    def d_ab(self) -> float:
        return math.dist(self.alice_pos, self.bob_pos)

    @property
    def d_aw(self) -> float:
        return math.dist(self.alice_pos, self.willie_pos)

    @property
    def d_mb(self) -> np.ndarray:
        return np.hypot(*(self.user_pos - np.asarray(self.bob_pos)).T)

    @property
    def d_mw(self) -> np.ndarray:
        return np.hypot(*(self.user_pos - np.asarray(self.willie_pos)).T)

    def with_users(self, user_pos, geometry: Optional[Annulus] = None) -> "Scenario":
        return Scenario(self.alice_pos, self.bob_pos, self.willie_pos, user_pos,
                        self.constants, self.seed, geometry)

    def __eq__(self, other):
        if not isinstance(other, Scenario):
            return NotImplemented
        return (
            self.alice_pos == other.alice_pos
            and self.bob_pos == other.bob_pos
            and self.willie_pos == other.willie_pos
            and self.constants == other.constants
            and self.seed == other.seed
            and np.array_equal(self.user_pos, other.user_pos)
        )

    __hash__ = None


@dataclass(frozen=True, eq=False)
class FadingMap:
    """Large-scale coefficients for every link used downstream (linear)."""

    lambda_ab: float
    lambda_aw: float
    lambda_mb: np.ndarray
    lambda_mw: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "lambda_mb", _readonly(self.lambda_mb))
        object.__setattr__(self, "lambda_mw", _readonly(self.lambda_mw))
        if self.lambda_mb.shape != self.lambda_mw.shape or self.lambda_mw.ndim != 1:
            raise ValueError("lambda_mb and lambda_mw must be 1-D arrays of equal length")
        if not (self.lambda_ab > 0 and self.lambda_aw > 0
                and np.all(self.lambda_mb > 0) and np.all(self.lambda_mw > 0)):
            raise ValueError("large-scale coefficients must all be > 0")

    @property
    def m(self) -> int:
        return int(self.lambda_mw.shape[0])


def fading_map(scenario: Scenario) -> FadingMap:
    c = scenario.constants
    return FadingMap(
        lambda_ab=path_loss_coefficient(scenario.d_ab, c),
        lambda_aw=path_loss_coefficient(scenario.d_aw, c),
        lambda_mb=path_loss_coefficient(scenario.d_mb, c),
        lambda_mw=path_loss_coefficient(scenario.d_mw, c),
    )


def sample_annulus(rng: np.random.Generator, m: int, geometry: Annulus, center) -> np.ndarray:
    """Draw ``m`` points uniformly over the annulus area around ``center``.

    The radius uses the inverse CDF of the area law with ``u`` in (0, 1], so
    every point lies strictly outside the inner circle.
    """
    u = 1.0 - rng.random(m)
    r = np.sqrt(geometry.r_inner**2 + u * (geometry.r_outer**2 - geometry.r_inner**2))
    theta = rng.random(m) * (2.0 * np.pi)
    cx, cy = center
    return np.column_stack((cx + r * np.cos(theta), cy + r * np.sin(theta)))


def benchmark_annulus() -> Annulus:
    return Annulus(r_inner=math.dist(BENCHMARK_ALICE, BENCHMARK_WILLIE), r_outer=BENCHMARK_OUTER_RADIUS)


def generate_adverse_scenario(
    m: int = BENCHMARK_M,
    seed: int = BENCHMARK_SEED,
    geometry: Optional[Annulus] = None,
    *,
    constants: RadioConstants = BENCHMARK_CONSTANTS,
    alice=BENCHMARK_ALICE,
    bob=BENCHMARK_BOB,
    willie=BENCHMARK_WILLIE,
) -> Scenario:
    """Spatially adverse topology: every helper is farther from Willie than Alice.

    Users are uniform over ``geometry`` (default: from ``d_aw`` out to 707 m
    around Willie). The result is a pure function of the arguments.
    """
    if m < 1:
        raise ScenarioError(f"users.count: must be >= 1 (got {m!r})")
    geometry = geometry or benchmark_annulus()
    d_aw = math.dist(_point(alice, "alice"), _point(willie, "willie"))
    if geometry.r_inner < d_aw:
        raise ScenarioError(
            f"r_inner_m: must be >= d_aw = {d_aw:.3f} m for the adverse layout (got {geometry.r_inner!r})"
        )
    rng = np.random.default_rng(seed)
    users = sample_annulus(rng, m, geometry, willie)
    return Scenario(alice, bob, willie, users, constants, seed, geometry)


def benchmark_scenario(seed: int = BENCHMARK_SEED, m: int = BENCHMARK_M) -> Scenario:
    """The adverse benchmark layout with the default radio constants."""
    return generate_adverse_scenario(m=m, seed=seed)


# --------------------------------------------------------------------------
# Scenario files
# --------------------------------------------------------------------------

def _require(cfg: dict, key: str):
    if key not in cfg:
        raise ScenarioError(f"{key}: missing required field")
    return cfg[key]


def _number(cfg: dict, key: str) -> float:
    value = _require(cfg, key)
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ScenarioError(f"{key}: expected a number (got {value!r})")
    return float(value)


def constants_from_dict(cfg: dict) -> RadioConstants:
    lin = cfg.get("linear")
    if lin is not None:
        # exact linear values written by save_scenario; they win over the dB fields
        try:
            return RadioConstants(
                beta0=float(lin["beta0"]),
                alpha=_number(cfg, "alpha"),
                p_max=float(lin["p_max_w"]),
                sigma_b_sq=float(lin["sigma_b_sq_w"]),
                sigma_w_sq=float(lin["sigma_w_sq_w"]),
            )
        except KeyError as exc:
            raise ScenarioError(f"linear.{exc.args[0]}: missing required field") from None
    return RadioConstants.from_db(
        beta0_db=_number(cfg, "beta0_db"),
        alpha=_number(cfg, "alpha"),
        p_max_mw=_number(cfg, "p_max_mw"),
        noise_dbm=_number(cfg, "noise_dbm"),
        noise_bob_dbm=cfg.get("noise_bob_dbm"),
        noise_willie_dbm=cfg.get("noise_willie_dbm"),
    )


def scenario_from_dict(cfg: dict) -> Scenario:
    if not isinstance(cfg, dict):
        raise ScenarioError("scenario: top level must be a JSON object")
    constants = constants_from_dict(cfg)
    alice = _point(_require(cfg, "alice"), "alice")
    bob = _point(_require(cfg, "bob"), "bob")
    willie = _point(_require(cfg, "willie"), "willie")
    seed = cfg.get("seed")
    if seed is not None and (isinstance(seed, bool) or not isinstance(seed, int) or seed < 0):
        raise ScenarioError(f"seed: expected a non-negative integer (got {seed!r})")

    users = _require(cfg, "users")
    if not isinstance(users, dict):
        raise ScenarioError("users: expected an object with 'explicit' or 'count'")
    if "explicit" in users:
        scen = Scenario(alice, bob, willie, users["explicit"], constants, seed)
    else:
        count = users.get("count")
        if isinstance(count, bool) or not isinstance(count, int):
            raise ScenarioError(f"users.count: expected an integer (got {count!r})")
        useed = users.get("seed", seed)
        if useed is None:
            raise ScenarioError("users.seed: generated topologies need an explicit seed")
        r_inner = users.get("r_inner_m", math.dist(alice, willie))
        r_outer = users.get("r_outer_m", BENCHMARK_OUTER_RADIUS)
        geometry = Annulus(float(r_inner), float(r_outer))
        scen = generate_adverse_scenario(
            count, useed, geometry, constants=constants, alice=alice, bob=bob, willie=willie
        )
        scen = Scenario(alice, bob, willie, scen.user_pos, constants, seed if seed is not None else useed, geometry)
    return scen


def scenario_to_dict(scenario: Scenario) -> dict:
    c = scenario.constants
    out: dict[str, Any] = {
        "beta0_db": linear_to_db(c.beta0),
        "alpha": c.alpha,
        "p_max_mw": c.p_max * 1e3,
        "noise_dbm": watts_to_dbm(c.sigma_b_sq),
        "noise_bob_dbm": watts_to_dbm(c.sigma_b_sq),
        "noise_willie_dbm": watts_to_dbm(c.sigma_w_sq),
        "linear": {
            "beta0": c.beta0,
            "p_max_w": c.p_max,
            "sigma_b_sq_w": c.sigma_b_sq,
            "sigma_w_sq_w": c.sigma_w_sq,
        },
        "alice": list(scenario.alice_pos),
        "bob": list(scenario.bob_pos),
        "willie": list(scenario.willie_pos),
        "users": {"explicit": scenario.user_pos.tolist()},
    }
    if scenario.seed is not None:
        out["seed"] = scenario.seed
    return out


def load_scenario(path: PathLike) -> Scenario:
    """Read and validate a JSON scenario file."""
    try:
        cfg = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"{path}: not valid JSON ({exc})") from None
    return scenario_from_dict(cfg)


def save_scenario(scenario: Scenario, path: PathLike) -> None:
    Path(path).write_text(json.dumps(scenario_to_dict(scenario), indent=1) + "\n")


def benchmark_scenario_path() -> Path:
    """Location of the bundled adverse-scenario config."""
    return Path(str(resources.files("covertnet") / "data" / "benchmark_adverse.json"))
