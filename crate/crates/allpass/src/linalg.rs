//! Dense complex linear algebra helpers shared by every module.
//!
//! Everything operates on dynamically sized `DMatrix<Complex64>`. Matrices in
//! this crate are small (at most a few hundred rows), so dense decompositions
//! are always the right tool.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

pub type CMat = DMatrix<Complex64>;
pub type CVec = DVector<Complex64>;

pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);

pub fn cplx(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// e^{jω}
pub fn cis(omega: f64) -> Complex64 {
    Complex64::new(omega.cos(), omega.sin())
}

pub fn identity(m: usize) -> CMat {
    CMat::identity(m, m)
}

/// ‖X − X*‖_F
pub fn hermitian_deviation(x: &CMat) -> f64 {
    (x - x.adjoint()).norm()
}

/// ‖A*A − I‖_F
pub fn unitarity_deviation(a: &CMat) -> f64 {
    (a.adjoint() * a - identity(a.nrows())).norm()
}

/// (X + X*)/2
pub fn hermitian_part(x: &CMat) -> CMat {
    (x + x.adjoint()).map(|v| v * 0.5)
}

/// Signature matrix J = diag(I_m, −I_m).
pub fn signature(m: usize) -> CMat {
    let mut j = identity(2 * m);
    for i in m..2 * m {
        j[(i, i)] = -ONE;
    }
    j
}

/// Haar-distributed random unitary: QR of a complex Gaussian matrix with the
/// R diagonal phases divided out.
pub fn random_unitary<R: Rng>(m: usize, rng: &mut R) -> CMat {
    let g = CMat::from_fn(m, m, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(re, im) / (2.0f64).sqrt()
    });
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for k in 0..m {
        let d = r[(k, k)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { ONE };
        for i in 0..m {
            q[(i, k)] *= phase;
        }
    }
    q
}

/// Hermitian eigendecomposition with eigenvalues sorted ascending.
/// Only the Hermitian part of the input is consulted.
pub fn hermitian_eigen(x: &CMat) -> (Vec<f64>, CMat) {
    let se = nalgebra::SymmetricEigen::new(hermitian_part(x));
    let mut order: Vec<usize> = (0..se.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| se.eigenvalues[a].total_cmp(&se.eigenvalues[b]));
    let vals: Vec<f64> = order.iter().map(|&i| se.eigenvalues[i]).collect();
    let vecs = CMat::from_fn(x.nrows(), x.ncols(), |r, c| se.eigenvectors[(r, order[c])]);
    (vals, vecs)
}

/// Sorted (ascending) eigenvalues of the Hermitian part.
pub fn hermitian_eigenvalues(x: &CMat) -> Vec<f64> {
    hermitian_eigen(x).0
}

pub fn smallest_eigenvalue(x: &CMat) -> f64 {
    hermitian_eigenvalues(x)[0]
}

/// Cholesky factorization that fails on non-positive pivots.
///
/// nalgebra's `Cholesky` happily takes complex square roots of negative
/// pivots, so it cannot serve as a definiteness test; this one can.
pub fn cholesky_pd(x: &CMat) -> Option<CMat> {
    let n = x.nrows();
    let mut l = CMat::zeros(n, n);
    for j in 0..n {
        let mut d = x[(j, j)].re;
        for k in 0..j {
            d -= l[(j, k)].norm_sqr();
        }
        if d <= 0.0 || !d.is_finite() {
            return None;
        }
        let djj = d.sqrt();
        l[(j, j)] = cplx(djj, 0.0);
        for i in j + 1..n {
            let mut s = x[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)].conj();
            }
            l[(i, j)] = s / djj;
        }
    }
    Some(l)
}

/// 2-norm condition number via SVD; `f64::INFINITY` for singular input.
pub fn cond_2(x: &CMat) -> f64 {
    let sv = x.clone().svd(false, false).singular_values;
    let max = sv.iter().cloned().fold(0.0f64, f64::max);
    let min = sv.iter().cloned().fold(f64::INFINITY, f64::min);
    if min <= 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}

/// Spectral (2-) norm.
pub fn norm_2(x: &CMat) -> f64 {
    x.clone()
        .svd(false, false)
        .singular_values
        .iter()
        .cloned()
        .fold(0.0f64, f64::max)
}

pub fn try_inverse(x: &CMat) -> Option<CMat> {
    x.clone().try_inverse()
}

/// Principal logarithm of a unitary matrix via its Schur form, eigenvalue
/// phases taken in (−π, π]. Returns the skew-Hermitian log and whether any
/// eigenvalue sat within 1e−9 of −1 (branch ambiguity, resolved to +π).
pub fn unitary_log(u: &CMat) -> (CMat, bool) {
    let m = u.nrows();
    let (q, t) = u.clone().schur().unpack();
    let mut ambiguous = false;
    let mut phases = CVec::zeros(m);
    for i in 0..m {
        let lambda = t[(i, i)];
        if (lambda + ONE).norm() < 1e-9 {
            ambiguous = true;
        }
        // atan2 already lands in (−π, π]
        phases[i] = cplx(0.0, lambda.im.atan2(lambda.re));
    }
    let log = &q * CMat::from_diagonal(&phases) * q.adjoint();
    (log, ambiguous)
}

/// exp of a skew-Hermitian matrix via the Hermitian eigendecomposition of
/// K/j; the result is unitary.
pub fn skew_hermitian_exp(k: &CMat) -> CMat {
    // K = jH with H Hermitian
    let h = k.map(|v| v * cplx(0.0, -1.0));
    let (vals, vecs) = hermitian_eigen(&h);
    let d = CVec::from_iterator(vals.len(), vals.iter().map(|&t| cis(t)));
    &vecs * CMat::from_diagonal(&d) * vecs.adjoint()
}

/// max_k ‖X_k − Y_k‖_F over a list of equally sized matrices.
pub fn max_block_distance(xs: &[CMat], ys: &[CMat]) -> f64 {
    xs.iter()
        .zip(ys)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}
