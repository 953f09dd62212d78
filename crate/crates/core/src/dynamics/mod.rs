//! Time integration of the coupled kinetic–chemical system on the torus.

pub mod chemical;
pub mod phi;
pub mod run;
pub mod seed;
pub mod state;
pub mod stepper;

pub use chemical::{chemical_solve_elliptic, chemical_step_parabolic};
pub use phi::{phi1, phi2};
pub use run::{
    checkpoint_path, latest_checkpoint, load_checkpoint, run, write_checkpoint, Checkpoint,
    Observer, RecordLog, RunOptions, RunSummary,
};
pub use seed::{
    advisory_dt, concentrated_seed, eigenfunction_seed, homogeneous_norm, random_smooth_seed,
    EigenSeed,
};
pub use state::{PhaseState, F_STAR};
pub use stepper::{
    cfl_limit, fokker_planck_step, Scheme, StepReport, Stepper, StepperConfig, STEPPER_KEYS,
};
