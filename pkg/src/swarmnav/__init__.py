"""Majority-vote quality amplification for swarm landmark navigation.

Four pieces work together: closed-form analytics of majority-vote decision
quality (:mod:`swarmnav.voting`), landmark-graph and scenario tooling
(:mod:`swarmnav.terrain`), a deterministic Monte Carlo mission simulator
(:mod:`swarmnav.simulation`), and a flight-energy model
(:mod:`swarmnav.energy`).  The ``swarmnav`` command line wraps them for
table generation, scenario construction, and experiment sweeps.
"""

from .energy import PowerModel, e_fly, trial_energy
from .simulation import (
    ErrorModel,
    ResultRow,
    ResultTable,
    RngSpec,
    SwarmConfig,
    TiePolicy,
    TrialOutcome,
    VoteRecord,
    majority_advice,
    majority_recognition,
    run_experiment,
    run_trial,
)
from .terrain import (
    FlightPlan,
    Landmark,
    LandmarkGraph,
    Scenario,
    complete_graph,
    generate_grid,
    load_scenario,
    parse_osm_subset,
    save_scenario,
    shortest_flight_plan,
)
from .voting import (
    GainPoint,
    fractional_gain,
    gain_polynomial,
    majority_error,
    normal_approx_majority_success,
    optimal_gain,
    single_path_success,
    swarm_path_success,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "PowerModel",
    "e_fly",
    "trial_energy",
    "ErrorModel",
    "ResultRow",
    "ResultTable",
    "RngSpec",
    "SwarmConfig",
    "TiePolicy",
    "TrialOutcome",
    "VoteRecord",
    "majority_advice",
    "majority_recognition",
    "run_experiment",
    "run_trial",
    "FlightPlan",
    "Landmark",
    "LandmarkGraph",
    "Scenario",
    "complete_graph",
    "generate_grid",
    "load_scenario",
    "parse_osm_subset",
    "save_scenario",
    "shortest_flight_plan",
    "GainPoint",
    "fractional_gain",
    "gain_polynomial",
    "majority_error",
    "normal_approx_majority_success",
    "optimal_gain",
    "single_path_success",
    "swarm_path_success",
]
