"""Covert uplink with cooperative jamming users: closed forms, optimizer and simulators."""

__version__ = "0.1.0"

from .channel import (
    ChannelRealization,
    SelectionOrder,
    bob_only_order,
    draw_realization,
    selection_order,
    trial_seed,
)
from .cooperation import (
    CooperationStats,
    KminResult,
    activation_threshold,
    c_eps,
    cooperation_stats,
    k_min_asymptotic,
    k_min_exact,
    k_min_homogeneous,
    pa_of_k,
)
from .detection import (
    DegenerateModelError,
    DegenerateModelWarning,
    DetectionParams,
    dep_closed_form,
    detection_params,
    erfc_approx,
    min_dep,
    optimal_gamma,
)
from .montecarlo import (
    DepCurve,
    OnOffOracleInstance,
    build_trial_pool,
    empirical_dep_curve,
    empirical_k_min,
    on_off_brute_force,
    random_on_off_instance,
    sensitivity_sweep,
    write_csv,
)
from .optimizer import (
    OptimizationResult,
    PowerProfile,
    achievable_rate,
    baseline_policy,
    on_off_profile,
    piecewise_search,
)
from .scenario import (
    BENCHMARK_CONSTANTS,
    FadingMap,
    RadioConstants,
    Scenario,
    ScenarioError,
    benchmark_scenario,
    fading_map,
    generate_adverse_scenario,
    load_scenario,
    save_scenario,
)
