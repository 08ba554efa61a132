//! Isometries, automorphism groups and isoduality.

mod isodual;
mod isometry;

pub use isodual::{
    check_decomposition_claim, cross_validate_th1, double_dual_witnesses, filtration_with_certificate,
    find_similarity, is_similarity, is_totally_isotropic, isoduality_ratio, isoduality_witness,
    right_orthogonal, th1_certificate, unimodular_certificate, verify_aut_invariance,
    verify_isodual_filtration, verify_tau_square_law, witness_from_maps, witness_from_seed,
    DecompositionClaim, IsodualOptions, IsodualityWitness, PairingType, Similarity, Th1Certificate,
};
pub use isometry::{
    automorphisms, is_unimodular, isometries, AutGroup, IsometryList, IsometryOptions, CLOSURE_CAP,
    DEFAULT_ISOMETRY_BUDGET,
};
