"""fanweave: unitary operator bases, their fan representations and canonical
invariants, mutually unbiased bases, pure POVMs, and PPT certificates."""

from .basis import (
    INEQUIVALENT,
    NOT_DISTINGUISHED,
    CommutationGraph,
    Fan,
    FanInvariant,
    HadamardFan,
    Provenance,
    Tag,
    UnitaryBasis,
    basis_commutation_graph,
    build_pauli2,
    build_shift_multiply,
    build_weyl,
    canonical_hadamard_signature,
    commutation_graph,
    compare_ub,
    enumerate_mass,
    fan_invariant,
    fan_representation,
    fan_system,
    hadamard_fan,
    invariant_profile,
    mes_basis_to_ub,
    tag_at,
    twill_check,
    unitary_basis,
)
from .combinatorics import (
    FiniteGroup,
    HadamardFamily,
    LatinSquare,
    fourier_family,
    group_cyclic,
    group_from_cayley,
    group_product,
    group_s3,
    hadamard_crisscross,
    hadamard_family,
    hadamard_fourier,
    hadamard_twill,
    is_partial_hadamard,
    latin_crisscross,
    latin_from_group,
    latin_identities,
    latin_inverse,
    latin_square,
    latin_twill,
)
from .config import DEFAULT_TOLS, Tolerances
from .errors import InvariantError, UnsupportedConfigurationError
from .linalg import (
    SpectralDecomposition,
    eig_normal,
    entanglement_entropy,
    flip,
    hs_orthogonality_check,
    is_psd,
    is_unitary,
    omega,
    op_to_vec,
    partial_transpose,
    random_unitary,
    schmidt_rank,
    simul_diag,
    vec_to_op,
)
from .ppt import (
    PptCertificate,
    SkewHamiltonian,
    arveson_pair,
    build_ppt,
    circulant,
    random_shm,
    shm_conjugation_residual,
    skew_hamiltonian,
    symplectic_j,
    verify_circulant_cuet,
)
from .tomography import (
    CoverSelection,
    MubSystem,
    Povm,
    crude_povm,
    is_info_complete,
    make_povm,
    mass_eigenbasis,
    minimal_cover,
    mub_from_partition,
    refined_bound,
    refined_povm,
    reconstruct,
    s_bound,
)

__version__ = "0.1.0"
