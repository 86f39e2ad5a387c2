"""``covertnet`` command-line entry point.

Every command writes its CSV(s) plus a ``<command>.manifest.json`` sidecar
holding the full scenario and resolved parameters, prints one summary line and
exits with 0 (ok), 2 (infeasible) or 1 (error).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from . import __version__
from .channel import draw_realization, trial_seed
from .cooperation import c_eps, cooperation_stats, k_min_exact
from .detection import detection_params, min_dep, optimal_gamma
from .montecarlo import (
    DEFAULT_TRIALS,
    SENSITIVITY_VALUES,
    compare_sweep,
    dep_curve_rows,
    empirical_dep_curve,
    kmin_sweep,
    sensitivity_sweep,
    write_csv,
)
from .optimizer import piecewise_search
from .scenario import ScenarioError, benchmark_scenario_path, fading_map, load_scenario, scenario_to_dict

EXIT_OK, EXIT_ERROR, EXIT_INFEASIBLE = 0, 1, 2
COMMANDS = ("dep-curve", "min-dep", "kmin-sweep", "sensitivity", "optimize", "compare-baseline", "validate")
SEED_ENV = "COVERTNET_SEED"


class UsageError(ValueError):
    pass


@dataclass
class RunSpec:
    command: str
    scenario_path: Path
    overrides: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}")


def _bool(v: bool) -> str:
    return "true" if v else "false"


def _resolve_seed(cli_seed: Optional[int], scenario_seed: Optional[int]) -> int:
    if cli_seed is not None:
        return cli_seed
    env = os.environ.get(SEED_ENV)
    if env:
        try:
            value = int(env)
        except ValueError:
            raise UsageError(f"{SEED_ENV}: expected an integer (got {env!r})") from None
        if value < 0:
            raise UsageError(f"{SEED_ENV}: must be >= 0")
        return value
    return 0 if scenario_seed is None else scenario_seed


def _epsilon(value: float) -> float:
    try:
        c_eps(value)
    except ValueError as exc:
        raise UsageError(f"--epsilon: {exc}") from None
    return value


def _power(mw: float, p_max: float) -> float:
    w = mw / 1000.0
    if not 0 < w <= p_max * (1 + 1e-12):
        raise UsageError(f"--p-a-mw: must lie in (0, {p_max * 1000:g}] mW (got {mw:g})")
    return w


def _eps_range(o: dict) -> list:
    n = o["eps_steps"]
    if n < 1:
        raise UsageError("--eps-steps: must be >= 1")
    values = [round(float(v), 12) for v in np.linspace(o["eps_from"], o["eps_to"], n)]
    for v in values:
        _epsilon(v)
    return values


def _write_manifest(out: Path, spec: RunSpec, scenario, params: dict, outputs: list) -> None:
    manifest = {
        "command": spec.command,
        "version": __version__,
        "scenario_path": str(spec.scenario_path),
        "scenario": scenario_to_dict(scenario),
        "parameters": params,
        "outputs": [p.name for p in outputs],
    }
    path = out / f"{spec.command}.manifest.json"
    path.write_text(json.dumps(manifest, indent=1, sort_keys=True) + "\n")


def run(spec: RunSpec) -> int:
    """Execute one command; raises on bad input, returns the exit status otherwise."""
    o = dict(spec.overrides)
    out = Path(o.get("out_dir") or "out")
    try:
        scenario = load_scenario(spec.scenario_path)
    except FileNotFoundError:
        raise UsageError(f"--scenario: no such file {spec.scenario_path}") from None
    c = scenario.constants
    fading = fading_map(scenario)
    seed = _resolve_seed(o.get("seed"), scenario.seed)
    trials = o.get("trials") or DEFAULT_TRIALS
    threads = o.get("threads")
    if trials < 1000:
        raise UsageError("--trials: must be >= 1000")
    params: dict = {"seed": seed, "trials": trials}
    status = EXIT_OK
    out.mkdir(parents=True, exist_ok=True)

    if spec.command == "dep-curve":
        k = o.get("k") or 60
        p_a = _power(o.get("p_a_mw") or 100.0, c.p_max)
        if not 1 <= k <= fading.m:
            raise UsageError(f"--k: must lie in [1, {fading.m}]")
        curve = empirical_dep_curve(fading, c, p_a, k, trials, seed, threads=threads)
        outputs = [write_csv(out / "dep_curve.csv", dep_curve_rows(curve))]
        params.update(k=k, p_a_mw=p_a * 1000)
        summary = (f"K={k} P_a={p_a * 1000:g}mW sup|emp-cf|={curve.sup_error:.4f} "
                   f"ζ_min={curve.zeta_min_cf:.4f} emp_min={curve.empirical_min:.4f}")

    elif spec.command == "min-dep":
        p_a = _power(o.get("p_a_mw") or 100.0, c.p_max)
        eps = _epsilon(o.get("epsilon") or 0.03)
        res = k_min_exact(cooperation_stats(fading, p_a, eps, c))
        k = o.get("k") or (res.k_min if res.feasible else fading.m)
        if not 1 <= k <= fading.m:
            raise UsageError(f"--k: must lie in [1, {fading.m}]")
        dp = detection_params(p_a, fading, k, c)
        zmin = min_dep(dp)
        feasible = zmin >= 1.0 - eps - 1e-9 and (o.get("k") is not None or res.feasible)
        row = {"pa_mw": p_a * 1000, "epsilon": eps, "k": k, "kmin_exact": res.k_min,
               "gamma_star": optimal_gamma(dp), "zeta_min": zmin, "feasible": feasible}
        outputs = [write_csv(out / "min_dep.csv", [row], list(row))]
        params.update(p_a_mw=p_a * 1000, epsilon=eps, k=o.get("k"))
        summary = f"K_min={res.k_min} K={k} ζ_min={zmin:.4f} feasible={_bool(feasible)}"
        status = EXIT_OK if feasible else EXIT_INFEASIBLE

    elif spec.command == "kmin-sweep":
        powers = [_power(v, c.p_max) for v in (o.get("p_a_mw_list") or [25.0, 50.0, 100.0])]
        eps = _eps_range(o)
        rows = kmin_sweep(fading, c, powers, eps, empirical=bool(o.get("empirical")),
                          trials=trials, seed=seed, threads=threads)
        outputs = [write_csv(out / "kmin_sweep.csv", rows)]
        params.update(p_a_mw=[p * 1000 for p in powers], epsilon=eps, empirical=bool(o.get("empirical")))
        summary = f"rows={len(rows)} K_min range={min(r['kmin_exact'] for r in rows)}..{max(r['kmin_exact'] for r in rows)}"

    elif spec.command == "sensitivity":
        param = o.get("param") or "sigma_d"
        p_a = _power(o.get("p_a_mw") or 100.0, c.p_max)
        eps = _epsilon(o.get("epsilon") or 0.03)
        n_seeds = o.get("seeds") or 10
        rows = sensitivity_sweep(param, SENSITIVITY_VALUES[param], p_a, eps,
                                 range(seed, seed + n_seeds), constants=c)
        outputs = [write_csv(out / "sensitivity.csv", rows)]
        params.update(param=param, p_a_mw=p_a * 1000, epsilon=eps, seeds=n_seeds)
        med = [float(np.median([r["kmin_exact"] for r in rows if r["param_value"] == v]))
               for v in SENSITIVITY_VALUES[param]]
        summary = f"{param} median K_min=" + ",".join(f"{m:g}" for m in med)

    elif spec.command == "optimize":
        eps = _epsilon(o.get("epsilon") or 0.05)
        real = draw_realization(fading, trial_seed(seed, 0))
        res = piecewise_search(real, fading, eps, c)
        row = {"one_minus_eps": round(1.0 - eps, 12), "policy": "proposed", "pa_star_mw": res.p_a_star * 1000,
               "k_star": res.k_star, "rate_star": res.rate_star, "feasible": res.feasible}
        outputs = [write_csv(out / "compare.csv", [row])]
        params.update(epsilon=eps)
        summary = (f"P_a*={res.p_a_star * 1000:.2f}mW K*={res.k_star} R*={res.rate_star:.5f} "
                   f"feasible={_bool(res.feasible)}")
        status = EXIT_OK if res.feasible else EXIT_INFEASIBLE

    elif spec.command == "compare-baseline":
        eps = _eps_range(o)
        ome = [round(1.0 - e, 12) for e in eps]
        n = o.get("realizations") or 100
        sweep = compare_sweep(fading, c, ome, n, seed, power_control=bool(o.get("power_control")))
        outputs = [write_csv(out / "compare.csv", sweep["rows"])]
        params.update(epsilon=eps, realizations=n, power_control=bool(o.get("power_control")))
        infeasible = [r["one_minus_eps"] for r in sweep["rows"] if r["policy"] != "proposed" and not r["feasible"]]
        summary = f"levels={len(ome)} baseline infeasible at 1-eps={infeasible}"

    else:  # validate
        from .acceptance import run_all

        results = run_all(o.get("criteria"))
        rows = [{"criterion": r.criterion, "check": r.name, "passed": r.passed, "detail": r.detail}
                for r in results]
        outputs = [write_csv(out / "validation.csv", rows, ["criterion", "check", "passed", "detail"])]
        for r in results:
            print(r.line())
        params.update(criteria=o.get("criteria"))
        failed = sum(not r.passed for r in results)
        summary = f"checks={len(results)} failed={failed}"
        status = EXIT_OK if failed == 0 else EXIT_ERROR

    _write_manifest(out, spec, scenario, params, outputs)
    print(summary)
    return status


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--scenario", type=Path, default=None, help="scenario JSON (default: bundled benchmark)")
    common.add_argument("--out", type=Path, default=Path("out"), help="output directory")
    common.add_argument("--seed", type=int, default=None, help=f"master seed (fallback: ${SEED_ENV}, then scenario)")
    common.add_argument("--trials", type=int, default=None)
    common.add_argument("--threads", type=int, default=None)

    p = argparse.ArgumentParser(prog="covertnet", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("dep-curve", parents=[common], help="simulated vs closed-form DEP curve")
    s.add_argument("--k", type=int)
    s.add_argument("--p-a-mw", type=float)

    s = sub.add_parser("min-dep", parents=[common], help="minimum DEP and K_min at one operating point")
    s.add_argument("--k", type=int)
    s.add_argument("--p-a-mw", type=float)
    s.add_argument("--epsilon", type=float)

    eps_args = argparse.ArgumentParser(add_help=False)
    eps_args.add_argument("--eps-from", type=float, default=0.10)
    eps_args.add_argument("--eps-to", type=float, default=0.01)
    eps_args.add_argument("--eps-steps", type=int, default=10)

    s = sub.add_parser("kmin-sweep", parents=[common, eps_args], help="K_min variants over epsilon")
    s.add_argument("--p-a-mw", type=float, nargs="+", dest="p_a_mw_list")
    s.add_argument("--empirical", action="store_true", help="also run the simulated K_min")

    s = sub.add_parser("sensitivity", parents=[common], help="K_min vs user-distance statistics")
    s.add_argument("--param", choices=sorted(SENSITIVITY_VALUES), default="sigma_d")
    s.add_argument("--p-a-mw", type=float)
    s.add_argument("--epsilon", type=float)
    s.add_argument("--seeds", type=int, default=10)

    s = sub.add_parser("optimize", parents=[common], help="piecewise search on one channel draw")
    s.add_argument("--epsilon", type=float)

    s = sub.add_parser("compare-baseline", parents=[common, eps_args], help="proposed vs baseline sweep")
    s.add_argument("--realizations", type=int, default=100)
    s.add_argument("--power-control", action="store_true", help="baseline with homogeneous power map")

    s = sub.add_parser("validate", parents=[common], help="run the acceptance checks")
    s.add_argument("--criteria", type=int, nargs="+")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    o = vars(args).copy()
    command = o.pop("command")
    scenario = o.pop("scenario") or benchmark_scenario_path()
    o["out_dir"] = o.pop("out")
    try:
        return run(RunSpec(command, scenario, o))
    except (UsageError, ScenarioError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
