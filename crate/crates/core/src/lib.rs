//! Numerical laboratory for a kinetic model of ant-trail formation: a
//! Fokker–Planck equation on positions and headings coupled to a
//! chemotactic pheromone field on the torus.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod diagnostics;
pub mod dynamics;
pub mod error;
pub mod experiments;
pub mod linstab;
pub mod params;
pub mod spectral;

pub use error::{Error, Result};
pub use params::{Coupling, ModelParams, ReducedParams};
