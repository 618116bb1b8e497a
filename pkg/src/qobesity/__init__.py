"""Quantum obesity, steering ellipsoids and local filtering for two-qubit
states, with transverse-field Ising / XXZ phase-transition scans."""

from .states import (
    PAULI,
    CorrelationMatrix,
    StateValidationError,
    bell_phi_plus,
    concurrence,
    correlation_matrix,
    load_state,
    maximally_mixed,
    pair_reduced_state,
    random_state,
    save_state,
    state_from_correlation_matrix,
    validate_state,
)
from .obesity import (
    BellDiagonalParams,
    PatternMismatchError,
    bell_diagonal_state,
    obesity,
    obesity_bell_diagonal,
    obesity_from_R,
    obesity_x_family,
)
from .ellipsoid import (
    SingularMarginalError,
    SteeringEllipsoid,
    ellipsoid_volume,
    gamma_b,
    steered_bloch_vector,
    steering_ellipsoid,
)
from .filtering import (
    FilterAnnihilatesStateError,
    FilterError,
    FilterUndefinedError,
    LocalFilter,
    LorentzLift,
    apply_filter,
    filtered_correlation_matrix,
    filtered_obesity_general,
    filtered_obesity_theorem,
    filtering_function,
    ising_optimal_filter,
    load_filter,
    lorentz_lift,
    save_filter,
)
from .quadrature import QuadratureError, adaptive_simpson
from .ising import (
    IsingCorrelators,
    IsingPairState,
    UnphysicalPairStateError,
    g_ell,
    ising_pair_state,
    omega_phi,
    pair_correlators,
    sigma_z_expectation,
)
from .chains import (
    ChainSpec,
    EigensolverError,
    GroundSpace,
    NotBellDiagonalError,
    build_hamiltonian,
    ed_bell_diagonal_params,
    ed_pair_correlators,
    ground_space,
    read_correlator_table,
    write_correlator_table,
)
from .scan import (
    KinkReport,
    ScanRecord,
    analyze_state,
    detect_kink,
    finite_difference,
    ising_scan,
    read_scan_csv,
    write_scan_csv,
    xxz_scan,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
