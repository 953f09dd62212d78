//! Discretisation of `𝕋² × 𝕋₂π`: grids, transforms, fields and operators.

pub mod field;
pub mod grid;
pub mod io;
pub mod ops;
pub mod transform;

pub use field::{FieldData, Representation, SpatialField2, SpectralField3};
pub use grid::{is_nyquist, signed_mode, SpectralGrid};
pub use ops::{
    assemble_b, d_theta, d_x1, d_x2, dealias, divergence_x, gradient_x, hessian_x, laplacian_2,
    laplacian_x, Hessian, InteractionField,
};
pub use transform::SpectralContext;
