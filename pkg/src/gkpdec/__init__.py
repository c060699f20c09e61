"""gkpdec: lattice-level decoding of multimode GKP codes.

Builds Steane-type error-correction circuits for GKP codes defined as
symplectic lattices, propagates Gaussian shift noise through them, and
compares closest-vector (MED) decoding against the noise-correlated
COR-MED decoder with large Monte-Carlo logical-error-rate experiments.
"""

from .circuit import (
    SCALINGS,
    SteaneCircuit,
    StabilizerViolationError,
    build_circuit,
    build_k_matrix,
    build_tl,
    cov_distance,
    propagate_covariance,
    square_reference_circuit,
    squeezing_distance,
    verify_stabilizer_preservation,
)
from .cvp import (
    RankError,
    ReducedLattice,
    closest_point,
    closest_point_bruteforce,
    lll_reduce,
    shortest_vectors,
)
from .decoders import (
    CorMedContext,
    Syndrome,
    chi_from_syndrome,
    cormed_decode,
    cormed_precompute,
    med_decode,
)
from .lattice import (
    CATALOG_NAMES,
    GkpCode,
    InvalidBasisChangeError,
    NotACodeError,
    NotAQubitError,
    UnknownCodeError,
    apply_basis_change,
    catalog,
    in_voronoi,
    logical_pauli_matrix,
    make_code,
    pauli_residue,
    relevant_vectors,
)
from .linalg import (
    DecompositionError,
    DimensionError,
    cholesky_upper,
    generalized_eigvals,
    invert_spd,
    is_integer_unimodular,
)
from .montecarlo import (
    DECODERS,
    PLEstimate,
    TrialOutcome,
    available_backends,
    default_backend,
    estimate_pl,
    run_trial,
    simulate_measurement,
    sweep,
    wilson_interval,
)
from .noise import (
    ELL,
    InvalidParameterError,
    NoiseModel,
    db_to_sigma2_over_2pi,
    gamma0,
    sample_shift,
    sigma2_over_2pi_to_db,
)
from .symplectic import (
    InvalidCouplingError,
    SelectionMaps,
    SymplecticMatrix,
    compose,
    coupler,
    omega,
    selection_maps,
    symplectic_product,
)

__version__ = "0.1.0"
