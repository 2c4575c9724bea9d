//! Recursive construction of matrix all-pass interpolants.
//!
//! The solution is built by induction on the point count: a degree-1 base
//! filter absorbs the first constraint, a 2m×2m reduction operator H(z) maps
//! the remaining points onto an (n−1)-point problem, and the recursive
//! solution is lifted back through H. Every step keeps the matrix fraction
//! N(z)D(z)⁻¹ unitary on the circle.
//!
//! Two normalizations matter and are easy to get wrong:
//!
//! - The coupling factor in H and in the lift is
//!   κ(z) = 2(1+z)(1+z₁)/|1+z₁|², which matches the base step (the lift of
//!   the identity fraction reproduces the base filter times the scalar 2).
//!   Since κ is a positive real multiple of (1+z)(1+z₁), the neutrality
//!   identities H(z₁)B₁ = 0 and H J H* = 16 sin²((ω₁−ω)/2)·J are untouched,
//!   and with it the group-delay bookkeeping of the recursion becomes exact.
//! - Transformed lifts are normalized by 2(z−z₁), which gives the reduced
//!   data set the exact Schur-complement Pick matrix of the original data.
//!
//! With both normalizations the designed filter satisfies equality F_i = Γ_i
//! (not merely unitary similarity) whenever no derotation retry was needed.

use crate::dataset::{
    angle_distance, derotate_phase, lift_neutral, DataPoint, NeutralLift, ValidatedDataSet,
};
use crate::linalg::{cis, cond_2, cplx, hermitian_part, identity, signature, try_inverse, CMat};
use crate::pickmat::{build_pick, is_positive_definite};
use crate::polynom::MatrixPolynomial;
use crate::{Error, Result};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

/// A matrix fraction G(z) = N(z)D(z)⁻¹ with interpolation metadata.
/// When `derotation` is present the realized response is N D⁻¹ C*.
#[derive(Debug, Clone)]
pub struct AllPassFilter {
    pub n: MatrixPolynomial,
    pub d: MatrixPolynomial,
    pub interp_omegas: Vec<f64>,
    pub derotation: Option<CMat>,
}

impl AllPassFilter {
    pub fn dim(&self) -> usize {
        self.n.dim()
    }

    pub fn degree(&self) -> usize {
        self.n.degree().max(self.d.degree())
    }

    /// Shifts the interpolation frequencies by +alpha by substituting
    /// z → e^{−jα}z in both polynomials. Group delays are invariant.
    pub fn rotate_frequencies(&self, alpha: f64) -> AllPassFilter {
        AllPassFilter {
            n: self.n.rotate_argument(-alpha),
            d: self.d.rotate_argument(-alpha),
            interp_omegas: self
                .interp_omegas
                .iter()
                .map(|w| crate::dataset::wrap_angle(w + alpha))
                .collect(),
            derotation: self.derotation.clone(),
        }
    }
}

/// Retry and tolerance knobs for `design_allpass`.
#[derive(Debug, Clone)]
pub struct DesignOptions {
    /// Derotation retries before giving up on a degenerate construction.
    pub max_retries: usize,
    /// Seed for the retry phases; the construction is deterministic given it.
    pub retry_seed: u64,
    /// Condition-number bound on (I − A₁*) and reduced-lift top blocks.
    pub cond_threshold: f64,
    /// Override for the Pick-matrix margin; relative default when None.
    pub pd_margin: Option<f64>,
}

impl Default for DesignOptions {
    fn default() -> Self {
        Self {
            max_retries: 8,
            retry_seed: 0,
            cond_threshold: 1e10,
            pd_margin: None,
        }
    }
}

/// κ(z) = 2(1+z)(1+z₁)/|1+z₁|² as (constant, z) scalar coefficients: both
/// equal 2(1+z₁)/|1+z₁|².
fn kappa_coefficient(z1: Complex64) -> Complex64 {
    let c = cplx(1.0, 0.0) + z1;
    c * (2.0 / c.norm_sqr())
}

fn invert_gamma(gamma: &CMat) -> Result<CMat> {
    if cond_2(gamma) > 1e12 {
        return Err(Error::SingularGamma);
    }
    try_inverse(gamma).ok_or(Error::SingularGamma)
}

/// Degree-1 interpolant for a single point: G(e^{jω₁}) = A₁, G unitary on
/// the circle, and jG*G′ = Γ₁ at ω₁ whenever I − A₁* is invertible.
pub fn base_filter(omega1: f64, a1: &CMat, gamma1: &CMat) -> Result<AllPassFilter> {
    if angle_distance(omega1, PI) < 1e-6 {
        return Err(Error::FrequencyAtPi(omega1));
    }
    let m = a1.nrows();
    let z1 = cis(omega1);
    let g_inv = invert_gamma(gamma1)?;
    let eye = identity(m);
    // common factor z₁/(1+z₁) of the (1+z) term
    let w = z1 / (cplx(1.0, 0.0) + z1);
    let k_n = (a1 * &g_inv * (&eye - a1.adjoint())).map(|v| v * w);
    let k_d = (&g_inv * (&eye - a1.adjoint())).map(|v| v * w);
    let n = MatrixPolynomial::from_coeffs(vec![eye.map(|v| v * -z1) + &k_n, &eye + &k_n]);
    let d = MatrixPolynomial::from_coeffs(vec![eye.map(|v| v * -z1) + &k_d, &eye + &k_d]);
    Ok(AllPassFilter {
        n,
        d,
        interp_omegas: vec![omega1],
        derotation: None,
    })
}

/// The 2m×2m degree-1 reduction operator
/// H(z) = 2(z−z₁)I − κ(z)·B₁Γ₁⁻¹B₁*J built from the first data point.
#[derive(Debug, Clone)]
pub struct ReductionOperator {
    pub h: MatrixPolynomial,
    omega1: f64,
}

impl ReductionOperator {
    pub fn new(omega1: f64, a1: &CMat, gamma1: &CMat) -> Result<Self> {
        if angle_distance(omega1, PI) < 1e-6 {
            return Err(Error::FrequencyAtPi(omega1));
        }
        let m = a1.nrows();
        let z1 = cis(omega1);
        let s = kappa_coefficient(z1);
        let g_inv = invert_gamma(gamma1)?;
        let b1 = lift_neutral(a1)?;
        let core = (b1.matrix() * g_inv * b1.matrix().adjoint() * signature(m)).map(|v| v * s);
        let h0 = identity(2 * m).map(|v| v * (-2.0 * z1)) - &core;
        let h1 = identity(2 * m).map(|v| v * cplx(2.0, 0.0)) - &core;
        Ok(Self {
            h: MatrixPolynomial::from_coeffs(vec![h0, h1]),
            omega1,
        })
    }

    /// H(e^{jω})·B, normalized by 2(e^{jω} − z₁) so that the reduced data
    /// set's Pick matrix is exactly the Schur complement of the original.
    pub fn transform_lift(&self, omega: f64, lift: &NeutralLift) -> NeutralLift {
        let z = cis(omega);
        let scale = 2.0 * (z - cis(self.omega1));
        let b = (self.h.eval(z) * lift.matrix()).map(|v| v / scale);
        NeutralLift::from_matrix(b)
    }
}

/// Reduces an n-point data set to n−1 points using its first point.
///
/// Returned points carry the transformed neutral lifts and the
/// Schur-complement diagonal blocks
/// Γ̂_i = Γ_{i+1} − (I−A*_{i+1}A₁)Γ₁⁻¹(I−A₁*A_{i+1}) / |1−e^{j(ω_{i+1}−ω₁)}|²
/// as their gammas, so `build_pick` of the result equals `schur_reduce` of
/// the input's Pick matrix.
pub fn reduce_dataset(ds: &ValidatedDataSet) -> Result<ValidatedDataSet> {
    reduce_dataset_with(ds, &DesignOptions::default())
}

pub fn reduce_dataset_with(
    ds: &ValidatedDataSet,
    opts: &DesignOptions,
) -> Result<ValidatedDataSet> {
    if ds.len() < 2 {
        return Err(Error::Parse("need at least two points to reduce".into()));
    }
    let m = ds.dim();
    let eye = identity(m);
    // canonical view of the first point
    let a1 = ds.ratio(0).clone();
    let g1 = ds.point(0).gamma_canonical()?;
    let g1_inv = invert_gamma(&g1)?;
    let omega1 = ds.point(0).omega;
    let op = ReductionOperator::new(omega1, &a1, &g1)?;

    let mut points = Vec::with_capacity(ds.len() - 1);
    for p in ds.points().iter().skip(1) {
        let a = ds_ratio_canonical(p)?;
        let gamma = p.gamma_canonical()?;
        let canonical = NeutralLift::canonical_unchecked(&a);
        let lift = op.transform_lift(p.omega, &canonical);
        let neut = lift.neutrality_deviation();
        if neut > 1e-8 * lift.matrix().norm_squared().max(1.0) {
            return Err(Error::LostNeutrality(neut));
        }
        let b1 = lift.block1();
        let cond = cond_2(&b1);
        if cond > opts.cond_threshold {
            return Err(Error::NonInvertibleTopBlock(cond));
        }
        let ratio = lift.ratio()?;
        let delta = p.omega - omega1;
        let denom = (cplx(1.0, 0.0) - cis(delta)).norm_sqr();
        let cross = &eye - a.adjoint() * &a1;
        let corr = (&cross * &g1_inv * cross.adjoint()).map(|v| v / denom);
        let gamma_hat = hermitian_part(&(gamma - corr));
        points.push(DataPoint {
            omega: p.omega,
            lift,
            gamma: Some(gamma_hat),
            ratio,
        });
    }
    Ok(ValidatedDataSet::from_parts(m, points))
}

fn ds_ratio_canonical(p: &DataPoint) -> Result<CMat> {
    Ok(p.ratio.clone())
}

/// A numerically kind consumption order: frequencies far from π first.
///
/// The base and reduction operators carry a 1/(1+e^{jω₁}) factor, so points
/// near ±π make poor early pivots; input order fixes the recursion order, and
/// callers that are free to reorder their constraints should use this one.
pub fn conditioning_order(omegas: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..omegas.len()).collect();
    idx.sort_by(|&a, &b| {
        angle_distance(omegas[b], PI)
            .total_cmp(&angle_distance(omegas[a], PI))
    });
    idx
}

/// Lifts an (n−1)-point solution through the first point's reduction:
///
/// N(z) = [2(z−z₁)I − κ(z)A₁Γ₁⁻¹A₁*]·N̂(z) + [κ(z)A₁Γ₁⁻¹]·D̂(z)
/// D(z) = [2(z−z₁)I + κ(z)Γ₁⁻¹]·D̂(z) − [κ(z)Γ₁⁻¹A₁*]·N̂(z)
///
/// Degrees increase by exactly one.
pub fn lift_solution(
    omega1: f64,
    a1: &CMat,
    gamma1: &CMat,
    nhat: &MatrixPolynomial,
    dhat: &MatrixPolynomial,
) -> Result<(MatrixPolynomial, MatrixPolynomial)> {
    let m = a1.nrows();
    if nhat.dim() != m || dhat.dim() != m || nhat.degree() != dhat.degree() {
        return Err(Error::DimensionMismatch {
            expected: m,
            got: nhat.dim().max(dhat.dim()),
        });
    }
    let z1 = cis(omega1);
    let s = kappa_coefficient(z1);
    let g_inv = invert_gamma(gamma1)?;
    let eye = identity(m);

    let x = a1 * &g_inv * a1.adjoint(); // A₁Γ⁻¹A₁*
    let y = a1 * &g_inv; // A₁Γ⁻¹
    let w = &g_inv * a1.adjoint(); // Γ⁻¹A₁*

    let shift = |sign: f64, c: &CMat| {
        // 2(z−z₁)I ± κ(z)·C as a degree-1 polynomial
        let sc = c.map(|v| v * s * sign);
        MatrixPolynomial::from_coeffs(vec![
            eye.map(|v| v * (-2.0 * z1)) + &sc,
            eye.map(|v| v * cplx(2.0, 0.0)) + &sc,
        ])
    };
    let kappa_times = |c: &CMat| {
        let sc = c.map(|v| v * s);
        MatrixPolynomial::from_coeffs(vec![sc.clone(), sc])
    };

    let n = shift(-1.0, &x).mul(nhat).add(&kappa_times(&y).mul(dhat));
    let d = shift(1.0, &g_inv)
        .mul(dhat)
        .add(&kappa_times(&w).mul(nhat).scale(cplx(-1.0, 0.0)));
    Ok((n, d))
}

/// Designs a degree-n matrix all-pass filter for the whole data set.
///
/// Refuses with `PickNotPositiveDefinite` before recursing when the data is
/// infeasible. Degenerate constructions (a recursion level whose first
/// response has an eigenvalue at 1, or a reduced lift with a singular top
/// block) are retried on a derotated data set up to `max_retries` times; the
/// applied rotation is recorded on the returned filter.
pub fn design_allpass(ds: &ValidatedDataSet, opts: &DesignOptions) -> Result<AllPassFilter> {
    let pick = build_pick(ds)?;
    let margin = opts.pd_margin.unwrap_or_else(|| pick.default_margin());
    let witness = is_positive_definite(&pick, margin)?;
    if !witness.positive {
        return Err(Error::PickNotPositiveDefinite {
            witness: witness.smallest_eigenvalue,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.retry_seed);
    for attempt in 0..=opts.max_retries {
        let (work, rotation) = if attempt == 0 {
            (ds.clone(), None)
        } else {
            let phi: f64 = rng.gen_range(0.0..(2.0 * PI));
            (derotate_phase(ds, phi)?, Some(phi))
        };
        match construct_recursive(&work, opts) {
            Ok((n, d)) => {
                let derotation = rotation.map(|phi| identity(ds.dim()).map(|v| v * cis(phi)));
                return Ok(AllPassFilter {
                    n,
                    d,
                    interp_omegas: ds.omegas(),
                    derotation,
                });
            }
            // these mark a degenerate level; retry with a fresh rotation
            Err(Error::NonInvertibleTopBlock(_))
            | Err(Error::LostNeutrality(_))
            | Err(Error::SingularGamma)
            | Err(Error::DegenerateConstruction { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::DegenerateConstruction {
        retries: opts.max_retries,
    })
}

fn construct_recursive(
    ds: &ValidatedDataSet,
    opts: &DesignOptions,
) -> Result<(MatrixPolynomial, MatrixPolynomial)> {
    let m = ds.dim();
    let a1 = ds.ratio(0).clone();
    let g1 = ds.point(0).gamma_canonical()?;
    // an eigenvalue of A₁ at 1 makes the group-delay constraint vacuous
    let gap = identity(m) - a1.adjoint();
    if cond_2(&gap) > opts.cond_threshold {
        return Err(Error::DegenerateConstruction { retries: 0 });
    }
    if ds.len() == 1 {
        let f = base_filter(ds.point(0).omega, &a1, &g1)?;
        return Ok((f.n, f.d));
    }
    let reduced = reduce_dataset_with(ds, opts)?;
    let (nhat, dhat) = construct_recursive(&reduced, opts)?;
    lift_solution(ds.point(0).omega, &a1, &g1, &nhat, &dhat)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{derotate, validate_dataset, InterpolationPoint};
    use crate::linalg::{random_unitary, unitarity_deviation, ZERO};
    use crate::pickmat::schur_reduce;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::FRAC_PI_2;

    fn scalar(re: f64, im: f64) -> CMat {
        CMat::from_element(1, 1, cplx(re, im))
    }

    fn eval_fraction(n: &MatrixPolynomial, d: &MatrixPolynomial, omega: f64) -> CMat {
        let z = cis(omega);
        n.eval(z) * try_inverse(&d.eval(z)).unwrap()
    }

    fn fd_group_delay(n: &MatrixPolynomial, d: &MatrixPolynomial, omega: f64) -> CMat {
        let h = 1e-6;
        let gp = eval_fraction(n, d, omega + h);
        let gm = eval_fraction(n, d, omega - h);
        let dg = (gp - gm).map(|v| v / (2.0 * h));
        let g = eval_fraction(n, d, omega);
        (g.adjoint() * dg).map(|v| v * cplx(0.0, 1.0))
    }

    /// Random PD Hermitian with eigenvalues in (lo, hi).
    fn random_pd(m: usize, lo: f64, hi: f64, rng: &mut ChaCha8Rng) -> CMat {
        let u = random_unitary(m, rng);
        let d = CMat::from_fn(m, m, |i, j| {
            if i == j {
                cplx(lo + (hi - lo) * rng.gen::<f64>(), 0.0)
            } else {
                ZERO
            }
        });
        hermitian_part(&(&u * d * u.adjoint()))
    }

    use rand::Rng;

    #[test]
    fn base_scalar_example_coefficients() {
        // ω₁ = 0, A₁ = −1, Γ₁ = 2 → N = 0.5z − 1.5, D = 1.5z − 0.5
        let f = base_filter(0.0, &scalar(-1.0, 0.0), &scalar(2.0, 0.0)).unwrap();
        assert!((f.n.coeffs()[0][(0, 0)] - cplx(-1.5, 0.0)).norm() < 1e-15);
        assert!((f.n.coeffs()[1][(0, 0)] - cplx(0.5, 0.0)).norm() < 1e-15);
        assert!((f.d.coeffs()[0][(0, 0)] - cplx(-0.5, 0.0)).norm() < 1e-15);
        assert!((f.d.coeffs()[1][(0, 0)] - cplx(1.5, 0.0)).norm() < 1e-15);
        // G(1) = −1, group delay 2
        let g = eval_fraction(&f.n, &f.d, 0.0);
        assert!((g[(0, 0)] - cplx(-1.0, 0.0)).norm() < 1e-14);
        let gd = fd_group_delay(&f.n, &f.d, 0.0);
        assert!((gd[(0, 0)].re - 2.0).abs() < 1e-5);
    }

    #[test]
    fn base_interpolates_for_any_gamma() {
        for gamma in [0.5, 1.0, 2.0, 7.5] {
            let f = base_filter(0.0, &scalar(-1.0, 0.0), &scalar(gamma, 0.0)).unwrap();
            let g = eval_fraction(&f.n, &f.d, 0.0);
            assert!((g[(0, 0)] - cplx(-1.0, 0.0)).norm() < 1e-13, "γ = {gamma}");
        }
    }

    #[test]
    fn base_rejects_pi() {
        assert!(matches!(
            base_filter(PI, &scalar(1.0, 0.0), &scalar(1.0, 0.0)),
            Err(Error::FrequencyAtPi(_))
        ));
    }

    #[test]
    fn base_matrix_group_delay_matches_gamma() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for trial in 0..10 {
            let a = random_unitary(2, &mut rng);
            // skip responses with an eigenvalue near 1
            if cond_2(&(identity(2) - a.adjoint())) > 1e6 {
                continue;
            }
            let gamma = random_pd(2, 0.5, 3.0, &mut rng);
            let omega = -2.0 + 0.37 * trial as f64;
            let f = base_filter(omega, &a, &gamma).unwrap();
            let g = eval_fraction(&f.n, &f.d, omega);
            assert!((g - &a).norm() < 1e-12);
            let fd = fd_group_delay(&f.n, &f.d, omega);
            assert!((fd - &gamma).norm() < 1e-5, "trial {trial}");
        }
    }

    #[test]
    fn reduction_operator_signature_identity() {
        // H(z) J H(z)* = 16 sin²((ω₁−ω)/2) J on the circle
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let a1 = random_unitary(2, &mut rng);
        let g1 = random_pd(2, 0.5, 2.5, &mut rng);
        let omega1 = 0.3;
        let op = ReductionOperator::new(omega1, &a1, &g1).unwrap();
        let j = signature(2);
        for k in 0..9 {
            let omega = -3.0 + 0.7 * k as f64;
            let hz = op.h.eval(cis(omega));
            let c = 16.0 * ((omega1 - omega) / 2.0).sin().powi(2);
            let dev = (&hz * &j * hz.adjoint() - j.map(|v| v * c)).norm();
            assert!(dev <= 1e-8 * (1.0 + c), "ω = {omega}");
        }
        // H(z₁) annihilates the first lift
        let b1 = lift_neutral(&a1).unwrap();
        assert!((op.h.eval(cis(omega1)) * b1.matrix()).norm() < 1e-12);
    }

    #[test]
    fn reduce_scalar_hand_value() {
        // Γ̂₁ = 2 − (2)(1/2)(2)/|1−e^{jπ/2}|² = 1
        let ds = validate_dataset(&[
            InterpolationPoint::new(0.0, scalar(1.0, 0.0), Some(scalar(2.0, 0.0))),
            InterpolationPoint::new(FRAC_PI_2, scalar(-1.0, 0.0), Some(scalar(2.0, 0.0))),
        ])
        .unwrap();
        let red = reduce_dataset(&ds).unwrap();
        assert_eq!(red.len(), 1);
        let gh = red.point(0).gamma.as_ref().unwrap();
        assert!((gh[(0, 0)] - cplx(1.0, 0.0)).norm() < 1e-13);
    }

    #[test]
    fn reduce_identical_responses_keeps_gamma() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let a = random_unitary(2, &mut rng);
        let g1 = random_pd(2, 1.0, 2.0, &mut rng);
        let g2 = random_pd(2, 1.0, 2.0, &mut rng);
        let ds = validate_dataset(&[
            InterpolationPoint::new(-0.4, a.clone(), Some(g1)),
            InterpolationPoint::new(1.2, a.clone(), Some(g2.clone())),
        ])
        .unwrap();
        let red = reduce_dataset(&ds).unwrap();
        assert!((red.point(0).gamma.as_ref().unwrap() - &g2).norm() < 1e-12);
    }

    #[test]
    fn reduce_matches_schur_complement() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        for trial in 0..20 {
            let n = 2 + trial % 4;
            let raw: Vec<_> = (0..n)
                .map(|i| {
                    let omega = -2.8 + 5.6 * (i as f64 + 0.5) / n as f64;
                    let gamma = identity(2).map(|v| v * (8.0 + i as f64));
                    InterpolationPoint::new(omega, random_unitary(2, &mut rng), Some(gamma))
                })
                .collect();
            let ds = validate_dataset(&raw).unwrap();
            let lhs = build_pick(&reduce_dataset(&ds).unwrap()).unwrap();
            let rhs = schur_reduce(&build_pick(&ds).unwrap()).unwrap();
            let err = (lhs.matrix() - rhs.matrix()).norm();
            assert!(err <= 1e-9, "trial {trial}: {err:.3e}");
        }
    }

    #[test]
    fn lift_identity_reproduces_base_times_two() {
        // spec example: ω₁ = 0, A₁ = −1, Γ₁ = 2, N̂ = D̂ = 1 → z−3 and 3z−1
        let (n, d) = lift_solution(
            0.0,
            &scalar(-1.0, 0.0),
            &scalar(2.0, 0.0),
            &MatrixPolynomial::identity(1),
            &MatrixPolynomial::identity(1),
        )
        .unwrap();
        assert!((n.coeffs()[0][(0, 0)] - cplx(-3.0, 0.0)).norm() < 1e-14);
        assert!((n.coeffs()[1][(0, 0)] - cplx(1.0, 0.0)).norm() < 1e-14);
        assert!((d.coeffs()[0][(0, 0)] - cplx(-1.0, 0.0)).norm() < 1e-14);
        assert!((d.coeffs()[1][(0, 0)] - cplx(3.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn lift_interpolates_first_point_for_any_input() {
        let mut rng = ChaCha8Rng::seed_from_u64(15);
        for _ in 0..10 {
            let a1 = random_unitary(2, &mut rng);
            let g1 = random_pd(2, 0.5, 2.0, &mut rng);
            let omega1 = 0.9;
            let (n, d) = lift_solution(
                omega1,
                &a1,
                &g1,
                &MatrixPolynomial::identity(2),
                &MatrixPolynomial::identity(2),
            )
            .unwrap();
            assert_eq!(n.degree(), 1);
            let g = eval_fraction(&n, &d, omega1);
            assert!((g - &a1).norm() < 1e-11);
        }
    }

    #[test]
    fn lift_carries_unitarity_through() {
        // with N̂D̂⁻¹ all-pass, D*D − N*N = 16sin²((ω₁−ω)/2)(D̂*D̂ − N̂*N̂) = 0
        let mut rng = ChaCha8Rng::seed_from_u64(16);
        let inner = base_filter(1.1, &random_unitary(2, &mut rng), &identity(2)).unwrap();
        let a1 = random_unitary(2, &mut rng);
        let g1 = random_pd(2, 0.8, 1.8, &mut rng);
        let (n, d) = lift_solution(-0.7, &a1, &g1, &inner.n, &inner.d).unwrap();
        for k in 0..64 {
            let omega = -PI + 2.0 * PI * (k as f64 + 1.0) / 64.0;
            let g = eval_fraction(&n, &d, omega);
            assert!(unitarity_deviation(&g) < 1e-8);
        }
    }

    #[test]
    fn design_single_point_equals_base() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let a = random_unitary(2, &mut rng);
        let g = random_pd(2, 0.5, 1.5, &mut rng);
        let ds =
            validate_dataset(&[InterpolationPoint::new(0.4, a.clone(), Some(g.clone()))]).unwrap();
        let f = design_allpass(&ds, &DesignOptions::default()).unwrap();
        let b = base_filter(0.4, &a, &g).unwrap();
        assert!((f.n.coeffs()[0].clone() - b.n.coeffs()[0].clone()).norm() < 1e-12);
        assert_eq!(f.degree(), 1);
    }

    #[test]
    fn design_scalar_two_point() {
        // γ = 2 > √2: succeeds, degree 2, right values, delays = 2
        let ds = validate_dataset(&[
            InterpolationPoint::new(0.0, scalar(1.0, 0.0), Some(scalar(2.0, 0.0))),
            InterpolationPoint::new(FRAC_PI_2, scalar(-1.0, 0.0), Some(scalar(2.0, 0.0))),
        ])
        .unwrap();
        let f = design_allpass(&ds, &DesignOptions::default()).unwrap();
        assert_eq!(f.degree(), 2);
        let c = f.derotation.clone().unwrap_or_else(|| identity(1));
        let g0 = eval_fraction(&f.n, &f.d, 0.0) * c.adjoint();
        let g1 = eval_fraction(&f.n, &f.d, FRAC_PI_2) * c.adjoint();
        assert!((g0[(0, 0)] - cplx(1.0, 0.0)).norm() < 1e-10);
        assert!((g1[(0, 0)] - cplx(-1.0, 0.0)).norm() < 1e-10);
        for k in 0..256 {
            let omega = -PI + 2.0 * PI * (k as f64 + 1.0) / 256.0;
            let g = eval_fraction(&f.n, &f.d, omega);
            assert!((g[(0, 0)].norm() - 1.0).abs() < 1e-10);
        }
        for omega in [0.0, FRAC_PI_2] {
            let gd = fd_group_delay(&f.n, &f.d, omega);
            assert!((gd[(0, 0)].re - 2.0).abs() < 1e-4, "ω = {omega}");
        }
    }

    #[test]
    fn design_refuses_infeasible_scalar_pair() {
        // γ = 1 < √2
        let ds = validate_dataset(&[
            InterpolationPoint::new(0.0, scalar(1.0, 0.0), Some(scalar(1.0, 0.0))),
            InterpolationPoint::new(FRAC_PI_2, scalar(-1.0, 0.0), Some(scalar(1.0, 0.0))),
        ])
        .unwrap();
        match design_allpass(&ds, &DesignOptions::default()) {
            Err(Error::PickNotPositiveDefinite { witness }) => assert!(witness < 0.0),
            other => panic!("expected refusal, got {other:?}"),
        }
    }

    #[test]
    fn design_exact_group_delay_without_derotation() {
        // generic data needs no retry, so F_i = Γ_i holds with equality
        let mut rng = ChaCha8Rng::seed_from_u64(18);
        let n = 4;
        let raw: Vec<_> = (0..n)
            .map(|i| {
                let omega = -2.5 + 5.0 * (i as f64 + 0.4) / n as f64;
                let gamma = identity(2).map(|v| v * (7.0 + i as f64));
                InterpolationPoint::new(omega, random_unitary(2, &mut rng), Some(gamma))
            })
            .collect();
        let ds = validate_dataset(&raw).unwrap();
        let f = design_allpass(&ds, &DesignOptions::default()).unwrap();
        assert!(f.derotation.is_none());
        assert_eq!(f.degree(), n);
        for (i, p) in raw.iter().enumerate() {
            let g = eval_fraction(&f.n, &f.d, p.omega);
            assert!((g - &p.a).norm() < 1e-9, "point {i}");
            let fd = fd_group_delay(&f.n, &f.d, p.omega);
            assert!(
                (fd - p.gamma.as_ref().unwrap()).norm() < 1e-4,
                "point {i}: delay deviates"
            );
        }
    }

    #[test]
    fn derotation_round_trip_satisfies_original_constraints() {
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        let raw: Vec<_> = (0..3)
            .map(|i| {
                let omega = -2.0 + 1.7 * i as f64;
                let gamma = identity(2).map(|v| v * 9.0);
                InterpolationPoint::new(omega, random_unitary(2, &mut rng), Some(gamma))
            })
            .collect();
        let ds = validate_dataset(&raw).unwrap();
        let c = random_unitary(2, &mut rng);
        let rotated = derotate(&ds, &c).unwrap();
        let f = design_allpass(&rotated, &DesignOptions::default()).unwrap();
        for p in &raw {
            // G_rot(e^{jω_i})·C* should reproduce the original A_i
            let g = eval_fraction(&f.n, &f.d, p.omega) * c.adjoint();
            assert!((g - &p.a).norm() < 1e-9);
        }
    }

    #[test]
    fn design_handles_eigenvalue_one_by_derotation() {
        // A₁ = 1 (scalar) forces a retry; the filter still meets constraints
        let ds = validate_dataset(&[
            InterpolationPoint::new(0.0, scalar(1.0, 0.0), Some(scalar(3.0, 0.0))),
            InterpolationPoint::new(1.9, scalar(0.0, 1.0), Some(scalar(3.0, 0.0))),
        ])
        .unwrap();
        let f = design_allpass(&ds, &DesignOptions::default()).unwrap();
        assert!(f.derotation.is_some());
        let c = f.derotation.clone().unwrap();
        for (omega, want) in [(0.0, cplx(1.0, 0.0)), (1.9, cplx(0.0, 1.0))] {
            let g = eval_fraction(&f.n, &f.d, omega) * c.adjoint();
            assert!((g[(0, 0)] - want).norm() < 1e-10);
        }
        // spectra of F_i still match Γ_i = 3 (unitary similarity)
        for omega in [0.0, 1.9] {
            let fd = fd_group_delay(&f.n, &f.d, omega);
            assert!((fd[(0, 0)].re - 3.0).abs() < 1e-4);
        }
    }

    #[test]
    fn rotate_frequencies_moves_interpolation_nodes() {
        let mut rng = ChaCha8Rng::seed_from_u64(20);
        let a = random_unitary(2, &mut rng);
        let g = identity(2).map(|v| v * 2.0);
        let f = base_filter(0.5, &a, &g).unwrap();
        let alpha = 1.2;
        let rot = f.rotate_frequencies(alpha);
        assert!((rot.interp_omegas[0] - 1.7).abs() < 1e-12);
        let gval = eval_fraction(&rot.n, &rot.d, 0.5 + alpha);
        assert!((gval - &a).norm() < 1e-12);
        // group delay is invariant under the remap
        let fd = fd_group_delay(&rot.n, &rot.d, 0.5 + alpha);
        assert!((fd - &g).norm() < 1e-5);
    }
}
