//! Synthesis and simulation of rational discrete-time matrix all-pass filters.
//!
//! A matrix all-pass filter is a rational transfer function matrix `G(z)`
//! whose frequency response `G(e^{jω})` is unitary at every frequency, so it
//! reshapes the matrix-valued phase of a vector signal without changing its
//! norm. This crate constructs such filters from boundary interpolation data:
//! given frequencies `ω_i`, unitary responses `A_i` and Hermitian positive
//! definite group-delay matrices `Γ_i`, it produces a matrix fraction
//! `G(z) = N(z) D(z)^{-1}` of degree `n` that matches every constraint
//! exactly. Solvability is certified by positive definiteness of a Pick-type
//! block matrix, and when the `Γ_i` are not prescribed they can be chosen by
//! a trace-minimizing barrier optimizer.
//!
//! Modules follow the pipeline:
//!
//! - [`dataset`]: validated interpolation data and neutral subspace lifts
//! - [`pickmat`]: the Pick matrix, definiteness tests, Schur reduction
//! - [`construct`]: the recursive filter construction itself
//! - [`polyfilter`]: frequency response, group delay and LCCDE simulation
//! - [`gdopt`]: interior-point choice of group-delay matrices
//! - [`baselines`]: geodesic interpolation and error metrics
//! - [`experiments`]: MIMO-OFDM precoder interpolation experiments
//! - [`io`]: JSON and CSV interchange formats

pub mod baselines;
pub mod construct;
pub mod dataset;
mod error;
pub mod experiments;
pub mod gdopt;
pub mod io;
pub mod linalg;
pub mod pickmat;
pub mod polyfilter;
pub mod polynom;

pub use error::{Error, Result};

pub use construct::{design_allpass, AllPassFilter, DesignOptions};
pub use dataset::{validate_dataset, InterpolationPoint, ValidatedDataSet};
pub use gdopt::{optimize_group_delays, BarrierConfig, GammaAssignment};
pub use pickmat::{build_pick, is_positive_definite, PickMatrix};
