//! Evaluation machinery for matrix fractions: frequency response, analytic
//! group delay, unitarity audit, and time-domain LCCDE simulation.

use crate::construct::AllPassFilter;
use crate::linalg::{cis, cond_2, cplx, hermitian_part, identity, try_inverse, CMat, CVec};
use crate::polynom::MatrixPolynomial;
use crate::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Σ_k C_k z^k by Horner recurrence on matrices.
pub fn eval_poly(p: &MatrixPolynomial, z: Complex64) -> CMat {
    p.eval(z)
}

/// G(e^{jω}) = N(e^{jω})D(e^{jω})⁻¹, right-multiplied by the derotation C*
/// when present.
pub fn eval_filter(f: &AllPassFilter, omega: f64) -> Result<CMat> {
    let g = eval_fraction(f, omega)?;
    Ok(apply_derotation(f, g))
}

fn apply_derotation(f: &AllPassFilter, g: CMat) -> CMat {
    match &f.derotation {
        Some(c) => g * c.adjoint(),
        None => g,
    }
}

fn eval_fraction(f: &AllPassFilter, omega: f64) -> Result<CMat> {
    let z = cis(omega);
    let d = f.d.eval(z);
    let cond = cond_2(&d);
    if cond > 1e12 {
        return Err(Error::SingularDenominator(cond));
    }
    Ok(f.n.eval(z) * try_inverse(&d).ok_or(Error::SingularDenominator(cond))?)
}

/// The group-delay matrix F(ω) = jG*(e^{jω}) dG/dω, computed analytically
/// through dG/dz = (N′ − G D′)D⁻¹ and dG/dω = j e^{jω} dG/dz.
#[derive(Debug, Clone)]
pub struct GroupDelayMatrix {
    /// Hermitian part of F.
    pub f: CMat,
    /// ‖F − F*‖_F before symmetrization; large values flag a filter that is
    /// not all-pass at this frequency.
    pub skew_norm: f64,
    pub omega: f64,
}

pub fn group_delay(f: &AllPassFilter, omega: f64) -> Result<GroupDelayMatrix> {
    let z = cis(omega);
    let d = f.d.eval(z);
    let cond = cond_2(&d);
    if cond > 1e12 {
        return Err(Error::SingularDenominator(cond));
    }
    let d_inv = try_inverse(&d).ok_or(Error::SingularDenominator(cond))?;
    let g = f.n.eval(z) * &d_inv;
    let dn = f.n.derivative().eval(z);
    let dd = f.d.derivative().eval(z);
    let dg_dz = (dn - &g * dd) * &d_inv;
    let dg_dw = dg_dz.map(|v| v * cplx(0.0, 1.0) * z);
    let raw = (g.adjoint() * dg_dw).map(|v| v * cplx(0.0, 1.0));
    // derotation conjugates the delay: F → C F C*
    let raw = match &f.derotation {
        Some(c) => c * raw * c.adjoint(),
        None => raw,
    };
    let herm = hermitian_part(&raw);
    let skew_norm = (&raw - &herm).norm();
    Ok(GroupDelayMatrix {
        f: herm,
        skew_norm,
        omega,
    })
}

/// max over a uniform grid on (−π, π] of ‖G*G − I‖_F.
pub fn unitarity_deviation(f: &AllPassFilter, grid_size: usize) -> f64 {
    assert!(grid_size >= 2);
    let eye = identity(f.dim());
    let mut worst: f64 = 0.0;
    for k in 0..grid_size {
        let omega = -PI + 2.0 * PI * (k as f64 + 1.0) / grid_size as f64;
        if let Ok(g) = eval_filter(f, omega) {
            worst = worst.max((g.adjoint() * &g - &eye).norm());
        } else {
            worst = f64::INFINITY;
        }
    }
    worst
}

/// A time-indexed list of length-m complex vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorSignal {
    pub samples: Vec<CVec>,
}

impl VectorSignal {
    pub fn new(samples: Vec<CVec>) -> Result<Self> {
        if let Some(first) = samples.first() {
            let m = first.len();
            if samples.iter().any(|s| s.len() != m) {
                return Err(Error::Parse("signal samples differ in dimension".into()));
            }
        }
        Ok(Self { samples })
    }

    pub fn dim(&self) -> usize {
        self.samples.first().map_or(0, |s| s.len())
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Unit impulse δ[t]·e₁ of the given length.
    pub fn impulse(m: usize, len: usize) -> Self {
        let mut samples = vec![CVec::zeros(m); len];
        if len > 0 {
            samples[0][0] = cplx(1.0, 0.0);
        }
        Self { samples }
    }

    pub fn norm(&self) -> f64 {
        self.samples
            .iter()
            .map(|s| s.norm_squared())
            .sum::<f64>()
            .sqrt()
    }
}

/// Result of a time-domain run; `unstable` flags a companion-form spectral
/// radius above 1 + 1e−9 (the construction does not guarantee stability).
#[derive(Debug, Clone)]
pub struct LccdeOutput {
    pub signal: VectorSignal,
    pub unstable: bool,
}

/// Runs the causal state recursion
/// w[t+d] = D_d⁻¹(x[t] − Σ_{k<d} D_k w[t+k]), y[t] = Σ_k N_k w[t+k]
/// from zero initial state. z acts as the advance operator, so the output
/// equals convolution with the filter's impulse response.
pub fn lccde_filter(f: &AllPassFilter, x: &VectorSignal) -> Result<LccdeOutput> {
    let m = f.dim();
    if x.dim() != m && !x.is_empty() {
        return Err(Error::DimensionMismatch {
            expected: m,
            got: x.dim(),
        });
    }
    let d = f.d.degree();
    let lead = &f.d.coeffs()[d];
    if cond_2(lead) > 1e10 {
        return Err(Error::SingularLeadingCoefficient);
    }
    let lead_inv = try_inverse(lead).ok_or(Error::SingularLeadingCoefficient)?;
    let unstable = spectral_radius(f)? > 1.0 + 1e-9;

    // derotation acts on the input: G x = N D⁻¹ (C* x)
    let input: Vec<CVec> = match &f.derotation {
        Some(c) => x.samples.iter().map(|s| c.adjoint() * s).collect(),
        None => x.samples.clone(),
    };

    let t_len = input.len();
    let mut w = vec![CVec::zeros(m); t_len + d];
    for t in 0..t_len {
        let mut rhs = input[t].clone();
        for k in 0..d {
            rhs -= &f.d.coeffs()[k] * &w[t + k];
        }
        w[t + d] = &lead_inv * rhs;
    }
    let mut y = Vec::with_capacity(t_len);
    for t in 0..t_len {
        let mut acc = CVec::zeros(m);
        for (k, nk) in f.n.coeffs().iter().enumerate() {
            acc += nk * &w[t + k];
        }
        y.push(acc);
    }
    Ok(LccdeOutput {
        signal: VectorSignal { samples: y },
        unstable,
    })
}

/// Spectral radius of the block companion form of D(z); the roots of
/// det D(z) are the recursion's modes.
pub fn spectral_radius(f: &AllPassFilter) -> Result<f64> {
    let m = f.dim();
    let d = f.d.degree();
    if d == 0 {
        return Ok(0.0);
    }
    let lead_inv =
        try_inverse(&f.d.coeffs()[d]).ok_or(Error::SingularLeadingCoefficient)?;
    let size = m * d;
    let mut comp = CMat::zeros(size, size);
    for blk in 0..d.saturating_sub(1) {
        comp.view_mut(((blk) * m, (blk + 1) * m), (m, m))
            .copy_from(&identity(m));
    }
    for k in 0..d {
        let block = (&lead_inv * &f.d.coeffs()[k]).map(|v| -v);
        comp.view_mut(((d - 1) * m, k * m), (m, m)).copy_from(&block);
    }
    let (_, t) = comp.schur().unpack();
    Ok((0..size).map(|i| t[(i, i)].norm()).fold(0.0, f64::max))
}
