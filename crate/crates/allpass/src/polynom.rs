//! Matrix polynomials in ascending powers of z.

use crate::linalg::{CMat, ZERO};
use crate::{Error, Result};
use num_complex::Complex64;

/// An m×m matrix polynomial P(z) = Σ_k C_k z^k, coefficients stored in
/// ascending powers. Degree is structural: the construction keeps the
/// coefficient list it produced, and only exactly-zero trailing blocks are
/// trimmed on normalization.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixPolynomial {
    coeffs: Vec<CMat>,
}

impl MatrixPolynomial {
    /// Builds from coefficients, trimming exactly-zero trailing blocks.
    pub fn new(mut coeffs: Vec<CMat>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::Parse("matrix polynomial needs coefficients".into()));
        }
        let m = coeffs[0].nrows();
        for c in &coeffs {
            if c.nrows() != m || c.ncols() != m {
                return Err(Error::DimensionMismatch {
                    expected: m,
                    got: c.nrows().max(c.ncols()),
                });
            }
        }
        while coeffs.len() > 1 && coeffs.last().unwrap().iter().all(|v| *v == ZERO) {
            coeffs.pop();
        }
        Ok(Self { coeffs })
    }

    /// Keeps the coefficient list exactly as given (structural degree).
    pub fn from_coeffs(coeffs: Vec<CMat>) -> Self {
        assert!(!coeffs.is_empty());
        Self { coeffs }
    }

    pub fn constant(c: CMat) -> Self {
        Self { coeffs: vec![c] }
    }

    pub fn identity(m: usize) -> Self {
        Self::constant(CMat::identity(m, m))
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn dim(&self) -> usize {
        self.coeffs[0].nrows()
    }

    pub fn coeffs(&self) -> &[CMat] {
        &self.coeffs
    }

    /// Horner evaluation P(z).
    pub fn eval(&self, z: Complex64) -> CMat {
        let mut acc = self.coeffs.last().unwrap().clone();
        for c in self.coeffs.iter().rev().skip(1) {
            acc = acc.map(|v| v * z) + c;
        }
        acc
    }

    /// dP/dz as a polynomial.
    pub fn derivative(&self) -> Self {
        if self.coeffs.len() == 1 {
            return Self::constant(CMat::zeros(self.dim(), self.dim()));
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c.map(|v| v * k as f64))
            .collect();
        Self { coeffs }
    }

    /// Coefficient convolution: self(z) · rhs(z).
    pub fn mul(&self, rhs: &Self) -> Self {
        let m = self.dim();
        let d = self.degree() + rhs.degree();
        let mut out = vec![CMat::zeros(m, m); d + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self { coeffs: out }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let m = self.dim();
        let len = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = vec![CMat::zeros(m, m); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            out[i] += a;
        }
        for (i, b) in rhs.coeffs.iter().enumerate() {
            out[i] += b;
        }
        Self { coeffs: out }
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| c.map(|v| v * s)).collect(),
        }
    }

    /// Substitutes z → e^{jα} z, i.e. coefficient k picks up the phase e^{jkα}.
    pub fn rotate_argument(&self, alpha: f64) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| {
                let ph = crate::linalg::cis(alpha * k as f64);
                c.map(|v| v * ph)
            })
            .collect();
        Self { coeffs }
    }
}
