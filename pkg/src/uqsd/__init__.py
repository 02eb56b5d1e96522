"""Pure-state decompositions of rank-two mixed states, optimal two-state
discrimination bounds, and a polarization-path circuit that attains them."""

from .qcore import (
    ATOL,
    EIGEN,
    POLARIZATION,
    BasisMismatchError,
    DensityMatrix2,
    PureState,
    RankTwoMixedState,
    TwoQubitPure,
    density_from_ensemble,
    eigendecompose,
    inner_product,
    partial_trace_idler,
    prepare_spdc,
)
from .decomposition import (
    Decomposition,
    DecompositionParameter,
    DegenerateDecompositionError,
    InconsistentInputsError,
    balanced_decomposition,
    decomposition_overlap,
    decomposition_probabilities,
    decomposition_states,
    degenerate_decomposition,
    gamma_from_state,
    overlap_from_projections,
)
from .discrimination import (
    DiscriminationMetrics,
    DiscriminationRegime,
    classify_regime,
    helstrom_pe,
    jaeger_shimony_ps,
    metrics,
    pe_of_gamma,
    ps_of_gamma,
)
from .optics import (
    CircuitState,
    DetectorDistribution,
    EtaPair,
    InfeasibleGeometryError,
    MonteCarloReport,
    PathLabel,
    PreparedState,
    SetupConfig,
    UndefinedEtaError,
    apply_pbs,
    apply_wp,
    detection_distribution,
    detection_plate_angle,
    eta_overlap,
    eta_pair,
    evolve,
    input_state,
    monte_carlo,
    optimal_config,
    optimal_eta,
    optimal_x,
    orthogonality_phi,
    ps_max,
    success_probability_x,
)

__version__ = "0.1.0"
