//! The modified Pick matrix: construction, definiteness, Schur reduction.
//!
//! For a data set {(ω_i, B_i, Γ_i)} the nm×nm block matrix has Γ_i on the
//! diagonal and B_i*JB_k / (1 − e^{j(ω_i−ω_k)}) off it; positive definiteness
//! of this matrix is exactly solvability of the interpolation problem. For
//! canonical lifts the off-diagonal blocks reduce to
//! (I − A_i*A_k) / (1 − e^{j(ω_i−ω_k)}).

use crate::dataset::ValidatedDataSet;
use crate::linalg::{
    cholesky_pd, cis, hermitian_deviation, identity, signature, smallest_eigenvalue, try_inverse,
    CMat, ONE,
};
use crate::{Error, Result};

/// Dense Hermitian block matrix of the interpolation data.
#[derive(Debug, Clone)]
pub struct PickMatrix {
    p: CMat,
    m: usize,
    n: usize,
}

impl PickMatrix {
    pub fn matrix(&self) -> &CMat {
        &self.p
    }

    /// Block dimension m.
    pub fn block_dim(&self) -> usize {
        self.m
    }

    /// Number of diagonal blocks n.
    pub fn blocks(&self) -> usize {
        self.n
    }

    pub fn block(&self, i: usize, k: usize) -> CMat {
        self.p.view((i * self.m, k * self.m), (self.m, self.m)).into()
    }

    /// Relative margin 1e−10 · trace(P)/(nm); absolute thresholds misbehave
    /// across scales of Γ.
    pub fn default_margin(&self) -> f64 {
        let tr: f64 = (0..self.p.nrows()).map(|i| self.p[(i, i)].re).sum();
        1e-10 * tr / self.p.nrows() as f64
    }
}

/// Assembles the Pick matrix from a validated data set with full gammas.
pub fn build_pick(ds: &ValidatedDataSet) -> Result<PickMatrix> {
    let m = ds.dim();
    let n = ds.len();
    for (i, p) in ds.points().iter().enumerate() {
        if p.gamma.is_none() {
            return Err(Error::MissingGamma(i));
        }
    }
    let j = signature(m);
    let mut p = CMat::zeros(n * m, n * m);
    for i in 0..n {
        for k in 0..n {
            let block = if i == k {
                ds.point(i).gamma.clone().unwrap()
            } else {
                let bi = ds.point(i).lift.matrix();
                let bk = ds.point(k).lift.matrix();
                let denom = ONE - cis(ds.point(i).omega - ds.point(k).omega);
                (bi.adjoint() * &j * bk).map(|v| v / denom)
            };
            p.view_mut((i * m, k * m), (m, m)).copy_from(&block);
        }
    }
    Ok(PickMatrix { p, m, n })
}

/// Outcome of a definiteness test. The witness is the smallest eigenvalue of
/// the Hermitian part, needed by the barrier optimizer and error messages.
#[derive(Debug, Clone, Copy)]
pub struct PdWitness {
    pub positive: bool,
    pub smallest_eigenvalue: f64,
}

/// Tests P − margin·I ≻ 0 by attempted Cholesky factorization, with a
/// Hermitian eigensolve supplying the witness either way.
pub fn is_positive_definite(pick: &PickMatrix, margin: f64) -> Result<PdWitness> {
    let p = &pick.p;
    let dev = hermitian_deviation(p);
    if dev > 1e-10 * p.norm().max(1.0) {
        return Err(Error::NonHermitianInput(dev));
    }
    let shifted = p - identity(p.nrows()).map(|v| v * margin);
    let chol_ok = cholesky_pd(&shifted).is_some();
    let witness = smallest_eigenvalue(p);
    Ok(PdWitness {
        positive: chol_ok && witness > margin,
        smallest_eigenvalue: witness,
    })
}

/// Schur complement with respect to the leading block Γ₁:
/// S = P₂₂ − P₂₁ Γ₁⁻¹ P₁₂. Positive definiteness is inherited from P.
pub fn schur_reduce(pick: &PickMatrix) -> Result<PickMatrix> {
    let (m, n) = (pick.m, pick.n);
    if n < 2 {
        return Err(Error::Parse("need at least two blocks to reduce".into()));
    }
    let g1: CMat = pick.p.view((0, 0), (m, m)).into();
    let g1_inv = try_inverse(&g1).ok_or(Error::SingularLeadingBlock)?;
    let p12: CMat = pick.p.view((0, m), (m, (n - 1) * m)).into();
    let p21: CMat = pick.p.view((m, 0), ((n - 1) * m, m)).into();
    let p22: CMat = pick.p.view((m, m), ((n - 1) * m, (n - 1) * m)).into();
    let s = p22 - p21 * g1_inv * p12;
    Ok(PickMatrix {
        p: s,
        m,
        n: n - 1,
    })
}
