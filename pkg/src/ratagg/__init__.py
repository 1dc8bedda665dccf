"""Proportional-fair multi-RAT traffic aggregation.

Clients attached to several base stations (WiFi and cellular) split their
traffic across them; each BS divides its unit airtime among its clients. The
package provides the distributed water-filling dynamics that reach the
proportionally fair optimum, a price-based dual-decomposition baseline, an
independent global solver for verification, and seeded scenario generation.
"""

from .afra import (
    Policy,
    RunResult,
    RunSummary,
    SimConfig,
    SimState,
    StepRecord,
    afra_bs_update,
    count_update_messages,
    initial_allocation,
    initial_state,
    is_equilibrium,
    potential_gain,
    run_afra,
    select_next_bs,
)
from .ddnum import (
    DEFAULT_GAMMA_GRID,
    DdnumConfig,
    DdnumRunResult,
    DdnumStepRecord,
    DdnumSummary,
    PriceVector,
    client_subproblem,
    count_ddnum_messages,
    price_update,
    project_feasible,
    run_ddnum,
    tune_gamma,
)
from .errors import (
    DimensionMismatch,
    EmptyClientSet,
    InsufficientBSs,
    NegativeRate,
    NoConvergence,
    NoFeasibleGamma,
    NonPositiveThroughput,
    NonPositiveWeight,
    TopologyError,
    TopologyFormatError,
    ZeroConnectivityClient,
)
from .experiments import (
    COMPARISON_GAMMA_GRID,
    ComparisonResult,
    ComparisonRow,
    SweepCell,
    compare_algorithms,
    convergence_sweep,
)
from .fileio import load_topology, save_topology
from .model import (
    NEGATIVE_INFINITY,
    TOL_FEAS,
    Allocation,
    FeasibilityReport,
    ThroughputView,
    Topology,
    check_feasibility,
    client_throughput,
    pf_index,
    potential,
    throughput_view,
    validate_topology,
    water_levels,
)
from .oracle import (
    GlobalPfSolution,
    PropertyReport,
    UniquenessReport,
    check_equilibrium_properties,
    convergence_step_bound,
    solve_global_pf,
    verify_uniqueness,
)
from .scenarios import (
    CELLULAR_RATES,
    WIFI_RATES,
    ScenarioParams,
    alpha_family_example,
    generate_random,
)
from .waterfill import (
    WaterfillInput,
    WaterfillResult,
    find_k,
    single_bs_pf_shares,
    solve_theta,
    sort_clients,
    waterfill_allocate,
)

__version__ = "0.1.0"
