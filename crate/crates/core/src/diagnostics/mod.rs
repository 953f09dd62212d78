//! Observables along trajectories: norms, pattern counts, growth fits and
//! the energy balance.

pub mod energy;
pub mod fit;
pub mod observables;
pub mod writer;

pub use energy::{
    diffusion_rate, dissipation_residual, energy_rate, half_l2_squared, interaction_rate,
};
pub use fit::{fit_exponential_rate, ExponentialFit, MIN_FIT_SAMPLES};
pub use observables::{
    compute_observables, compute_observables_with, periodic_peaks, ObservableOptions,
    ObservableRecord, LP_EXPONENTS,
};
pub use writer::{csv_header, CsvObservableWriter, NdjsonWriter};
