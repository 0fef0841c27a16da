//! Multi-frequency inverse source toolkit for the 2D Helmholtz equation.
//!
//! Hankel functions, the frequency-domain forward map, the time-domain wave
//! solution, the boundary functionals with their explicit bounds, and a ridge
//! reconstruction of the source pair from multi-frequency Cauchy data.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod forward;
pub mod functionals;
pub mod geometry;
pub mod inverse;
pub mod io;
pub mod quad;
pub mod specfun;
pub mod wavedom;

pub use error::{Error, Result};
pub use forward::{CauchyDataSet, FrequencyGrid, Solver};
pub use functionals::FunctionalKind;
pub use geometry::{Bump, Domain, Point, Scene, SourceField, SourcePair};
pub use inverse::{ExperimentConfig, ForwardMatrix, ReconstructionResult, Regularization, SolveStatus, SourceBasis};
pub use io::{Manifest, SceneSpec};
pub use num_complex::Complex64;
pub use specfun::HankelOrder;
pub use wavedom::WaveEvalConfig;
