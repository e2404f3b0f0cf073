"""Finite-dimensional quantum dynamics with configuration-level bookkeeping.

Density matrices are decomposed into weighted configurations, channels
carry them forward in time, conditional probability tables connect the
configurations of a parent system to those of its subsystems, and
trajectory tools enumerate or sample the resulting stochastic processes.
"""

from .channels import (
    CNOT,
    HADAMARD,
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    SWAP,
    SWAP_REFACTOR_TIME,
    CPTPReport,
    QuantumChannel,
    UnitaryFamily,
    UnitaryOperator,
    apply,
    channel_distance,
    channel_from_json,
    channel_to_json,
    choi_matrix,
    compose,
    dilation_channel,
    entangling_cnot_family,
    factorized_family,
    semigroup_defect,
    swap_refactorizing_family,
    unitary_channel,
    verify_cptp,
)
from .errors import (
    BadInterval,
    BadPartition,
    GridMismatch,
    LabelClash,
    NotADistribution,
    NotAProjector,
    NotAWitnessPair,
    NothingToTrace,
    NotPSD,
    NotUnitary,
    OnticSimError,
    SpaceMismatch,
    ToleranceBreach,
    TooManyTrajectories,
    UnknownSubsystem,
)
from .measurement import (
    SWEEP_CSV_HEADER,
    BoundReport,
    MeasurementModel,
    MeasurementReport,
    SweepPoint,
    born_conditional_check,
    correlational_entropy,
    decoherence_scaling_sweep,
    error_entropy_bound,
    exponential_overlap,
    pointer_overlap,
    simulate_measurement,
    sweep_to_csv,
)
from .ontic import (
    ConditionalProbabilityTable,
    OnticDecomposition,
    OnticEntry,
    bayesian_propagation_check,
    conditional_probabilities,
    ontic_decomposition,
    psd_pairing_check,
    single_system_conditional,
    table_to_csv,
    table_to_json,
)
from .opendyn import (
    ConditionedChannel,
    FactorizationCheck,
    NonlinearityWitnessReport,
    WitnessPair,
    bell_state,
    conditional_channel_given_env,
    nonlinearity_witness,
    parent_conditioned_probabilities,
    projector_factorization_check,
    werner_state,
    witness_pair_bell_vs_product,
    witness_pair_werner,
    witness_report_to_json,
)
from .qcore import (
    CorrelationOperator,
    DensityMatrix,
    HilbertSpace,
    PureState,
    basis_state,
    correlation_operator,
    density_matrix_from_json,
    density_matrix_to_json,
    embed_operator,
    matrix_from_json,
    matrix_to_json,
    maximally_mixed,
    partial_trace,
    permute_factors,
    space_from_json,
    space_to_json,
    tensor,
    trace_distance,
)
from .trajectories import (
    ENUMERATION_GUARD,
    MarkovKernelChain,
    OnticTrajectory,
    bloch_helix,
    bloch_state,
    closed_system_trajectory,
    enumerate_trajectory_measure,
    kernel_from_matrix,
    markov_chain_from_repeated_interaction,
    measure_to_json,
    sample_trajectories,
    sample_trajectory,
    trajectory_probability,
    trajectory_to_csv,
)

__version__ = "0.1.0"
