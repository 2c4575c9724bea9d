//! Frequency-domain baseline interpolator and the error metrics of the
//! precoder experiments.

use crate::linalg::{self, unitarity_deviation, CMat};
use crate::{Error, Result};

/// A unitary frequency-response sample.
#[derive(Debug, Clone)]
pub struct UnitarySample {
    pub omega: f64,
    pub u: CMat,
}

/// Principal matrix logarithm of a unitary, with a branch flag.
#[derive(Debug, Clone)]
pub struct UnitaryLog {
    /// Skew-Hermitian logarithm; exp of it reproduces the input.
    pub log: CMat,
    /// Some eigenvalue sat within 1e−9 of −1; its phase was resolved to +π.
    pub branch_ambiguous: bool,
}

/// Principal logarithm via the Schur form, eigenvalue phases in (−π, π].
pub fn unitary_log(u: &CMat) -> Result<UnitaryLog> {
    let dev = unitarity_deviation(u);
    if dev > 1e-8 {
        return Err(Error::NonUnitary {
            deviation: dev,
            tolerance: 1e-8,
        });
    }
    let (log, branch_ambiguous) = linalg::unitary_log(u);
    Ok(UnitaryLog {
        log,
        branch_ambiguous,
    })
}

/// Endpoint-anchored exponential map:
/// U(ω) = U_a · exp(t · log(U_a*U_b)), t = (ω − ω_a)/(ω_b − ω_a).
/// Returns the interpolant and the propagated branch flag.
pub fn geodesic_interpolate(
    a: &UnitarySample,
    b: &UnitarySample,
    omega: f64,
) -> Result<(CMat, bool)> {
    if a.omega >= b.omega {
        return Err(Error::Parse("samples must be in increasing frequency".into()));
    }
    if omega < a.omega - 1e-12 || omega > b.omega + 1e-12 {
        return Err(Error::Parse(format!(
            "frequency {omega} outside segment [{}, {}]",
            a.omega, b.omega
        )));
    }
    let t = ((omega - a.omega) / (b.omega - a.omega)).clamp(0.0, 1.0);
    let step = unitary_log(&(a.u.adjoint() * &b.u))?;
    let scaled = step.log.map(|v| v * t);
    Ok((&a.u * linalg::skew_hermitian_exp(&scaled), step.branch_ambiguous))
}

/// ‖U − V‖_F.
pub fn frobenius_error(u: &CMat, v: &CMat) -> f64 {
    (u - v).norm()
}

/// Distance modulo right multiplication by diagonal unitaries:
/// min_Θ ‖U − VΘ‖_F = √(max(0, 2m − 2Σ_i |(V*U)_ii|)).
pub fn flag_distance(u: &CMat, v: &CMat) -> f64 {
    let m = u.nrows();
    let inner = v.adjoint() * u;
    let sum: f64 = (0..m).map(|i| inner[(i, i)].norm()).sum();
    (2.0 * m as f64 - 2.0 * sum).max(0.0).sqrt()
}
