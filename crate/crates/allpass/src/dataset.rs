//! Interpolation data sets: validation, neutral lifting, derotation.
//!
//! A data point prescribes a unitary frequency response `A` at a frequency
//! `ω`, optionally together with a Hermitian positive definite group-delay
//! matrix `Γ`. Validation lifts each response to a neutral 2m×m subspace
//! basis `B = [I; A]` satisfying `B*JB = 0` under the signature
//! `J = diag(I, −I)`; the construction consumes points front-to-back, so
//! input order fixes the recursion order.

use crate::linalg::{
    self, cis, cond_2, hermitian_deviation, hermitian_part, identity, signature,
    smallest_eigenvalue, try_inverse, unitarity_deviation, CMat,
};
use crate::{Error, Result};
use std::f64::consts::PI;

/// Tolerances used by data-set validation.
#[derive(Debug, Clone)]
pub struct ValidationConfig {
    /// Frobenius bound on ‖A*A − I‖.
    pub unitarity_tol: f64,
    /// Frobenius bound on ‖Γ − Γ*‖.
    pub hermitian_tol: f64,
    /// Minimum circular separation between frequencies (radians).
    pub eps_omega: f64,
    /// Exclusion radius around ω = π, where the base step divides by 1 + e^{jω}.
    pub eps_pi: f64,
    /// Condition-number bound for lift top blocks.
    pub cond_bound: f64,
}

impl Default for ValidationConfig {
    fn default() -> Self {
        Self {
            unitarity_tol: 1e-8,
            hermitian_tol: 1e-10,
            eps_omega: 1e-9,
            eps_pi: 1e-6,
            cond_bound: 1e10,
        }
    }
}

/// Wraps an angle into (−π, π].
pub fn wrap_angle(omega: f64) -> f64 {
    let mut w = omega.rem_euclid(2.0 * PI);
    if w > PI {
        w -= 2.0 * PI;
    }
    w
}

/// Circular distance between two angles.
pub fn angle_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(2.0 * PI);
    d.min(2.0 * PI - d)
}

/// One raw interpolation constraint (ω, A, optional Γ).
#[derive(Debug, Clone)]
pub struct InterpolationPoint {
    pub omega: f64,
    pub a: CMat,
    pub gamma: Option<CMat>,
}

impl InterpolationPoint {
    pub fn new(omega: f64, a: CMat, gamma: Option<CMat>) -> Self {
        Self {
            omega: wrap_angle(omega),
            a,
            gamma,
        }
    }
}

/// A 2m×m neutral subspace basis: ‖B*JB‖ ≈ 0.
#[derive(Debug, Clone)]
pub struct NeutralLift {
    b: CMat,
}

impl NeutralLift {
    pub(crate) fn from_matrix(b: CMat) -> Self {
        Self { b }
    }

    /// Canonical lift [I; A] without the unitarity gate. The reduction uses
    /// this for mid-recursion ratios, whose unitarity holds only up to the
    /// conditioning of the transformed top blocks.
    pub(crate) fn canonical_unchecked(a: &CMat) -> Self {
        let m = a.nrows();
        let mut b = CMat::zeros(2 * m, m);
        b.rows_mut(0, m).copy_from(&identity(m));
        b.rows_mut(m, m).copy_from(a);
        Self { b }
    }

    pub fn matrix(&self) -> &CMat {
        &self.b
    }

    pub fn dim(&self) -> usize {
        self.b.ncols()
    }

    /// Top m×m block.
    pub fn block1(&self) -> CMat {
        let m = self.dim();
        self.b.rows(0, m).into()
    }

    /// Bottom m×m block.
    pub fn block2(&self) -> CMat {
        let m = self.dim();
        self.b.rows(m, m).into()
    }

    /// ‖B*JB‖_F, zero for exactly neutral lifts.
    pub fn neutrality_deviation(&self) -> f64 {
        let m = self.dim();
        (self.b.adjoint() * signature(m) * &self.b).norm()
    }

    /// B₂B₁⁻¹, the unitary response encoded by the lift.
    pub fn ratio(&self) -> Result<CMat> {
        let b1 = self.block1();
        let inv = try_inverse(&b1).ok_or(Error::NonInvertibleTopBlock(cond_2(&b1)))?;
        Ok(self.block2() * inv)
    }
}

/// Canonical lift B = [I; A] of a unitary response.
pub fn lift_neutral(a: &CMat) -> Result<NeutralLift> {
    lift_neutral_with(a, &ValidationConfig::default())
}

pub fn lift_neutral_with(a: &CMat, cfg: &ValidationConfig) -> Result<NeutralLift> {
    let dev = unitarity_deviation(a);
    if dev > cfg.unitarity_tol {
        return Err(Error::NonUnitary {
            deviation: dev,
            tolerance: cfg.unitarity_tol,
        });
    }
    let m = a.nrows();
    let mut b = CMat::zeros(2 * m, m);
    b.rows_mut(0, m).copy_from(&identity(m));
    b.rows_mut(m, m).copy_from(a);
    Ok(NeutralLift { b })
}

/// One validated point: frequency, neutral lift, optional Pick-diagonal Γ,
/// and the cached response ratio A = B₂B₁⁻¹.
#[derive(Debug, Clone)]
pub struct DataPoint {
    pub omega: f64,
    pub lift: NeutralLift,
    pub gamma: Option<CMat>,
    pub(crate) ratio: CMat,
}

impl DataPoint {
    /// The group-delay target in canonical coordinates, B₁⁻*ΓB₁⁻¹.
    ///
    /// For canonical lifts (B₁ = I) this is Γ itself. For the transformed
    /// lifts produced by data-set reduction, the stored Γ is the Pick-matrix
    /// diagonal block and relates to the actual group delay F of a solution
    /// by the congruence Γ = B₁* F B₁.
    pub fn gamma_canonical(&self) -> Result<CMat> {
        let g = self.gamma.as_ref().ok_or(Error::MissingGamma(0))?;
        let b1 = self.lift.block1();
        let inv = try_inverse(&b1).ok_or(Error::NonInvertibleTopBlock(cond_2(&b1)))?;
        Ok(hermitian_part(&(inv.adjoint() * g * &inv)))
    }
}

/// A validated interpolation data set.
#[derive(Debug, Clone)]
pub struct ValidatedDataSet {
    m: usize,
    points: Vec<DataPoint>,
}

impl ValidatedDataSet {
    pub(crate) fn from_parts(m: usize, points: Vec<DataPoint>) -> Self {
        Self { m, points }
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[DataPoint] {
        &self.points
    }

    pub fn point(&self, i: usize) -> &DataPoint {
        &self.points[i]
    }

    pub fn omegas(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.omega).collect()
    }

    /// Cached unitary response A_i = B_{i,2}B_{i,1}⁻¹.
    pub fn ratio(&self, i: usize) -> &CMat {
        &self.points[i].ratio
    }

    pub fn has_all_gammas(&self) -> bool {
        self.points.iter().all(|p| p.gamma.is_some())
    }

    /// Replaces the group-delay matrices wholesale (used after optimization).
    pub fn with_gammas(&self, gammas: Vec<CMat>) -> Result<Self> {
        if gammas.len() != self.points.len() {
            return Err(Error::DimensionMismatch {
                expected: self.points.len(),
                got: gammas.len(),
            });
        }
        let mut out = self.clone();
        for (p, g) in out.points.iter_mut().zip(gammas) {
            p.gamma = Some(g);
        }
        Ok(out)
    }

    /// Back to raw points (canonical responses, current gammas).
    pub fn to_raw(&self) -> Vec<InterpolationPoint> {
        self.points
            .iter()
            .map(|p| InterpolationPoint {
                omega: p.omega,
                a: p.ratio.clone(),
                gamma: p.gamma.clone(),
            })
            .collect()
    }
}

/// Validates raw points and lifts them canonically.
pub fn validate_dataset(raw: &[InterpolationPoint]) -> Result<ValidatedDataSet> {
    validate_dataset_with(raw, &ValidationConfig::default())
}

pub fn validate_dataset_with(
    raw: &[InterpolationPoint],
    cfg: &ValidationConfig,
) -> Result<ValidatedDataSet> {
    if raw.is_empty() {
        return Err(Error::Parse("data set needs at least one point".into()));
    }
    let m = raw[0].a.nrows();
    for (i, p) in raw.iter().enumerate() {
        if p.a.nrows() != m || p.a.ncols() != m {
            return Err(Error::DimensionMismatch {
                expected: m,
                got: p.a.nrows().max(p.a.ncols()),
            });
        }
        for q in raw.iter().skip(i + 1) {
            if angle_distance(p.omega, q.omega) < cfg.eps_omega {
                return Err(Error::DuplicateFrequency(p.omega, q.omega));
            }
        }
        // the base step divides by 1 + e^{jω}, so ±π is excluded
        if angle_distance(p.omega, PI) < cfg.eps_pi {
            return Err(Error::FrequencyAtPi(p.omega));
        }
    }
    let mut points = Vec::with_capacity(raw.len());
    for (i, p) in raw.iter().enumerate() {
        let lift = lift_neutral_with(&p.a, cfg)?;
        let gamma = match &p.gamma {
            Some(g) => {
                if g.nrows() != m || g.ncols() != m {
                    return Err(Error::DimensionMismatch {
                        expected: m,
                        got: g.nrows().max(g.ncols()),
                    });
                }
                let dev = hermitian_deviation(g);
                if dev > cfg.hermitian_tol {
                    return Err(Error::NonHermitianGamma(dev));
                }
                let min_eig = smallest_eigenvalue(g);
                if min_eig <= 0.0 {
                    return Err(Error::NonPositiveGamma(min_eig));
                }
                Some(hermitian_part(g))
            }
            None => None,
        };
        let _ = i;
        points.push(DataPoint {
            omega: p.omega,
            ratio: p.a.clone(),
            lift,
            gamma,
        });
    }
    Ok(ValidatedDataSet { m, points })
}

/// Post-multiplies every response by a constant unitary C, re-lifting
/// canonically; gammas and frequencies are untouched. A filter designed for
/// the derotated set, right-multiplied by C*, satisfies the original
/// constraints (group delays transform by unitary similarity).
pub fn derotate(ds: &ValidatedDataSet, c: &CMat) -> Result<ValidatedDataSet> {
    let dev = unitarity_deviation(c);
    if dev > 1e-8 {
        return Err(Error::NonUnitary {
            deviation: dev,
            tolerance: 1e-8,
        });
    }
    let mut points = Vec::with_capacity(ds.len());
    for p in &ds.points {
        let a = &p.ratio * c;
        let gamma = match p.gamma.as_ref() {
            Some(_) => Some(p.gamma_canonical()?),
            None => None,
        };
        let lift = lift_neutral(&a)?;
        points.push(DataPoint {
            omega: p.omega,
            ratio: a,
            lift,
            gamma,
        });
    }
    Ok(ValidatedDataSet { m: ds.m, points })
}

/// Scalar derotation by e^{jφ}·I.
pub fn derotate_phase(ds: &ValidatedDataSet, phi: f64) -> Result<ValidatedDataSet> {
    let c = identity(ds.dim()).map(|v| v * cis(phi));
    derotate(ds, &c)
}

pub use linalg::random_unitary;
