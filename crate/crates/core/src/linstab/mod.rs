//! Linear stability of the homogeneous state: dispersion relation, truncated
//! angular eigenproblems, resolvent bounds and growing-mode profiles.

pub mod dispersion;
pub mod eigenfunction;
pub mod operator;

pub use dispersion::{dispersion_closed_form, find_unstable_root, DispersionResult, RootOutcome};
pub use eigenfunction::{
    apply_inviscid_operator, gram_matrix, gram_off_diagonal, inviscid_eigenfunction,
    orthogonal_seeds, rotate_quarter, rotated_eigenfunction, viscous_eigenfunction,
    ThetaProfilePair,
};
pub use operator::{
    assemble_viscous_operator, default_cluster_tol, eigenspace_rank, resolvent_norm_check,
    rightmost_eigenvalues, sigma_sweep, viscous_spectrum, EigenSpectrum, ResolventCheck,
    DEFAULT_MODES,
};
