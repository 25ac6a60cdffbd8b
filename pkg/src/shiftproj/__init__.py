"""shiftproj: graph shift operators whose filters compute exact projections.

Dense kernels, feasibility oracles, executable counterexamples for two
tempting-but-wrong Schur-based design conditions, a symmetric design route,
and a locality-enforcing decentralized filter simulator.
"""

from .counterexamples import (
    ProjectorShiftCase,
    RankRequirement,
    power_basis_rank_demo,
    rank_requirement_vacuity,
    shared_diagonal_asymmetric,
    shared_diagonal_projector,
    zero_shift_check,
)
from .design import (
    DesignOptions,
    DesignProblem,
    DesignResult,
    Infeasible,
    feasible_shift,
    verify_design,
)
from .linalg import (
    NumericalOverflowError,
    PowerBasisMatrix,
    SchurForm,
    SubspaceBasis,
    numerical_rank,
    orthonormal_complement,
    power_basis,
    projector,
    random_orthonormal,
    schur_decompose,
    unvec,
    vec,
)
from .reporting import ClaimCheck, CounterexampleReport
from .scenario import Scenario, ScenarioError, load_scenario, scenario_from_dict
from .shifts import (
    EigenGrouping,
    FilterCoefficients,
    GraphTopology,
    InfeasibleGroupingError,
    PolynomialShiftCheck,
    TopologyCheck,
    apply_filter,
    coefficients_from_grouping,
    complete_topology,
    eigen_grouping,
    empty_topology,
    filter_matrix,
    grouping_condition_holds,
    is_polynomial_shift,
    is_topological,
    minimal_filter_order,
    path_topology,
    random_connected_topology,
    ring_topology,
)
from .simulate import (
    CommStats,
    FilterComparison,
    FilterRun,
    LocalityViolationError,
    NetworkState,
    compare_with_centralized,
    node_round_update,
    run_filter,
)

__version__ = "0.1.0"
