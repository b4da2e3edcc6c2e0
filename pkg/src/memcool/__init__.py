"""Memory-enhanced quantum cooling with generalized collision models.

Simulates cooling of a finite-dimensional target by repeated collisions
with batches of thermal machines, some of which carry memory between
steps. Provides the closed-form asymptotic limits, the adaptive step-wise
optimal protocol, the fixed-interaction HBAC-style Markov chain, and
cross-protocol analysis (correlations, fixed-budget grids, a divisibility
witness for memory effects).
"""

from .analysis import (
    BudgetCell,
    TraceComparison,
    WitnessResult,
    budget_grid,
    cp_divisibility_witness,
    mutual_information,
    trace_compare,
)
from .asymptotics import (
    HierarchyOrder,
    attainability_check,
    hierarchy_compare,
    hierarchy_exponent,
    markov_asymptotic_state,
    p_star,
    rho_star_s,
    rho_star_s_general,
    rho_star_sl,
    subspace_population_bound,
)
from .engine import (
    CapacityError,
    ProtocolTrace,
    StepRecord,
    attach_fresh_machines,
    final_local_sort,
    global_basis_step,
    run_protocol,
    stepwise_optimal_step,
)
from .majorize import MetricBundle, coolness_metrics, is_majorized_by, optimal_marginal
from .nonadaptive import (
    TransitionMatrix,
    alpha_kl,
    build_transition,
    build_v_matrix,
    chain_spectrum,
    fixed_point,
    iterate_chain,
    mixing_time_bound,
    spectral_gap_bound,
)
from .spectra import (
    DiagonalState,
    EnergySpectrum,
    MemoryConfig,
    initial_sl_distribution,
    partition_function,
    product_distribution,
    quasi_partition,
    sl_energy_order,
    thermal_distribution,
)

__version__ = "0.1.0"
