//! Group-delay selection by trace minimization.
//!
//! When a data set prescribes responses but no group-delay matrices, the
//! diagonal blocks of the Pick matrix are free Hermitian variables. Among all
//! feasible choices we pick the one minimizing Σ trace(Γ_i) subject to
//! P(Γ) ≻ 0, which keeps the filter's phase variation small. The off-diagonal
//! blocks are constants of the problem.
//!
//! The solver is a short-step log-det barrier method: minimize
//! Σ trace(Γ_i) − μ log det(P − margin·I) over the Hermitian diagonal blocks,
//! Newton steps with backtracking, μ shrinking geometrically to `mu_final`.
//! The infimum is not attained (the cone is open); the returned point sits
//! O(μ_final) inside the boundary.

use crate::linalg::{cholesky_pd, cis, cplx, identity, norm_2, smallest_eigenvalue, CMat, ONE};
use crate::{Error, Result};
use num_complex::Complex64;

/// Solver parameters. `mu_init = None` starts at trace(P_init)/(nm).
#[derive(Debug, Clone)]
pub struct BarrierConfig {
    pub mu_init: Option<f64>,
    pub mu_decay: f64,
    pub mu_final: f64,
    pub pd_margin: f64,
    pub newton_tol: f64,
    pub max_newton: usize,
    pub max_outer: usize,
}

impl Default for BarrierConfig {
    fn default() -> Self {
        Self {
            mu_init: None,
            mu_decay: 0.2,
            mu_final: 1e-4,
            pd_margin: 1e-6,
            newton_tol: 1e-9,
            max_newton: 50,
            max_outer: 64,
        }
    }
}

impl BarrierConfig {
    fn validate(&self) -> Result<()> {
        let pos = self.mu_decay > 0.0
            && self.mu_decay < 1.0
            && self.mu_final > 0.0
            && self.pd_margin > 0.0
            && self.newton_tol > 0.0;
        if !pos {
            return Err(Error::BadConfig(
                "barrier parameters must be positive with mu_decay in (0,1)".into(),
            ));
        }
        if let Some(mu0) = self.mu_init {
            if mu0 <= self.mu_final {
                return Err(Error::BadConfig("mu_init must exceed mu_final".into()));
            }
        }
        Ok(())
    }
}

/// The optimizer's answer: Hermitian PD blocks, their total trace, and the
/// smallest eigenvalue of the resulting Pick matrix.
#[derive(Debug, Clone)]
pub struct GammaAssignment {
    pub gammas: Vec<CMat>,
    pub achieved_trace: f64,
    pub pd_witness: f64,
    /// False when the Newton budget ran out; the iterate is still feasible.
    pub converged: bool,
}

/// Fixed off-diagonal blocks (I − A_i*A_k)/(1 − e^{j(ω_i−ω_k)}) with zero
/// diagonal blocks.
fn offdiagonal_pick(omegas: &[f64], responses: &[CMat]) -> CMat {
    let n = omegas.len();
    let m = responses[0].nrows();
    let eye = identity(m);
    let mut p = CMat::zeros(n * m, n * m);
    for i in 0..n {
        for k in 0..n {
            if i == k {
                continue;
            }
            let denom = ONE - cis(omegas[i] - omegas[k]);
            let block = (&eye - responses[i].adjoint() * &responses[k]).map(|v| v / denom);
            p.view_mut((i * m, k * m), (m, m)).copy_from(&block);
        }
    }
    p
}

/// Γ_i = (Σ_{k≠i} ‖P_ik‖₂ + margin + 1)·I makes P positive definite by
/// block Gershgorin.
pub fn feasible_initialization(omegas: &[f64], responses: &[CMat], margin: f64) -> Vec<CMat> {
    let n = omegas.len();
    let m = responses[0].nrows();
    let p0 = offdiagonal_pick(omegas, responses);
    (0..n)
        .map(|i| {
            let mut radius = 0.0;
            for k in 0..n {
                if k != i {
                    radius += norm_2(&p0.view((i * m, k * m), (m, m)).into());
                }
            }
            identity(m).map(|v| v * (radius + margin + 1.0))
        })
        .collect()
}

/// Real parameterization of one Hermitian block: m diagonal entries plus
/// real/imaginary parts of the strict upper triangle. Each basis element has
/// at most two nonzero entries, kept as (row, col, coefficient) triples.
struct HermitianBasis {
    elems: Vec<Vec<(usize, usize, Complex64)>>,
}

impl HermitianBasis {
    fn new(m: usize) -> Self {
        let mut elems = Vec::with_capacity(m * m);
        for a in 0..m {
            elems.push(vec![(a, a, ONE)]);
        }
        for a in 0..m {
            for b in a + 1..m {
                elems.push(vec![(a, b, ONE), (b, a, ONE)]);
                elems.push(vec![(a, b, cplx(0.0, 1.0)), (b, a, cplx(0.0, -1.0))]);
            }
        }
        Self { elems }
    }

    fn len(&self) -> usize {
        self.elems.len()
    }

    /// tr(E_p), nonzero only for diagonal elements.
    fn trace(&self, p: usize) -> f64 {
        self.elems[p]
            .iter()
            .filter(|(r, c, _)| r == c)
            .map(|(_, _, v)| v.re)
            .sum()
    }

    /// tr(W E_p) = Σ_s α_s W[c_s, r_s] for E_p = Σ_s α_s e_{r_s} e_{c_s}*.
    fn trace_with(&self, p: usize, w: &CMat) -> f64 {
        self.elems[p]
            .iter()
            .map(|&(r, c, v)| (w[(c, r)] * v).re)
            .sum()
    }

    fn add_scaled(&self, p: usize, scale: f64, target: &mut CMat) {
        for &(r, c, v) in &self.elems[p] {
            target[(r, c)] += v * scale;
        }
    }
}

/// Minimizes Σ trace(Γ_i) over Hermitian diagonal blocks keeping the Pick
/// matrix positive definite.
pub fn optimize_group_delays(
    omegas: &[f64],
    responses: &[CMat],
    cfg: &BarrierConfig,
) -> Result<GammaAssignment> {
    cfg.validate()?;
    if omegas.is_empty() || omegas.len() != responses.len() {
        return Err(Error::BadConfig(
            "need matching, non-empty frequency and response lists".into(),
        ));
    }
    let n = omegas.len();
    let m = responses[0].nrows();
    let nm = n * m;
    let p0 = offdiagonal_pick(omegas, responses);
    let mut gammas = feasible_initialization(omegas, responses, cfg.pd_margin);

    let assemble = |gammas: &[CMat]| {
        let mut p = p0.clone();
        for (i, g) in gammas.iter().enumerate() {
            p.view_mut((i * m, i * m), (m, m)).copy_from(g);
        }
        p
    };
    // shifted matrix X = P − margin·I; barrier φ = Σtr(Γ) − μ log det X
    let shifted = |gammas: &[CMat]| {
        assemble(gammas) - identity(nm).map(|v| v * cfg.pd_margin)
    };
    let log_det = |x: &CMat| -> Option<f64> {
        let l = cholesky_pd(x)?;
        Some(2.0 * (0..nm).map(|i| l[(i, i)].re.ln()).sum::<f64>())
    };
    let total_trace =
        |gammas: &[CMat]| -> f64 { gammas.iter().map(|g| g.trace().re).sum() };

    if log_det(&shifted(&gammas)).is_none() {
        // Gershgorin initialization cannot fail; reported defensively
        return Err(Error::InfeasibleStart);
    }

    let basis = HermitianBasis::new(m);
    let q = basis.len();
    let mut mu = cfg
        .mu_init
        .unwrap_or_else(|| assemble(&gammas).trace().re / nm as f64)
        .max(cfg.mu_final);
    let mut converged = true;

    for _outer in 0..cfg.max_outer {
        let mut inner_done = false;
        for _ in 0..cfg.max_newton {
            let x = shifted(&gammas);
            let w = match x.clone().try_inverse() {
                Some(w) => w,
                None => return Err(Error::InfeasibleStart),
            };
            // gradient over all blocks
            let mut grad = vec![0.0f64; n * q];
            for i in 0..n {
                let wii: CMat = w.view((i * m, i * m), (m, m)).into();
                for p in 0..q {
                    grad[i * q + p] = basis.trace(p) - mu * basis.trace_with(p, &wii);
                }
            }
            // Hessian entries μ·tr(W_ki E_p W_ik E_r); with sparse basis
            // elements each entry is a handful of products
            let mut hess = nalgebra::DMatrix::<f64>::zeros(n * q, n * q);
            for i in 0..n {
                for k in 0..n {
                    let wik: CMat = w.view((i * m, k * m), (m, m)).into();
                    let wki: CMat = w.view((k * m, i * m), (m, m)).into();
                    for p in 0..q {
                        for r in 0..q {
                            let mut acc = 0.0;
                            for &(pa, pb, pv) in &basis.elems[p] {
                                for &(ra, rb, rv) in &basis.elems[r] {
                                    acc += (pv * rv * wik[(pb, ra)] * wki[(rb, pa)]).re;
                                }
                            }
                            hess[(i * q + p, k * q + r)] = mu * acc;
                        }
                    }
                }
            }
            let grad_v = nalgebra::DVector::from_vec(grad.clone());
            let step = match hess.clone().cholesky() {
                Some(ch) => ch.solve(&grad_v.map(|v| -v)),
                None => return Err(Error::InfeasibleStart),
            };
            let decrement_sq = -grad_v.dot(&step);
            if decrement_sq / 2.0 <= cfg.newton_tol {
                inner_done = true;
                break;
            }
            // backtracking line search keeping X ≻ 0
            let phi0 = total_trace(&gammas) - mu * log_det(&x).unwrap();
            let mut t = 1.0;
            let mut accepted = false;
            while t > 1e-12 {
                let mut trial = gammas.clone();
                for (i, g) in trial.iter_mut().enumerate() {
                    for p in 0..q {
                        basis.add_scaled(p, t * step[i * q + p], g);
                    }
                }
                if let Some(ld) = log_det(&shifted(&trial)) {
                    let phi = total_trace(&trial) - mu * ld;
                    if phi <= phi0 - 0.25 * t * decrement_sq {
                        gammas = trial;
                        accepted = true;
                        break;
                    }
                }
                t *= 0.5;
            }
            if !accepted {
                break; // stalled; numerically at the floor for this μ
            }
        }
        if !inner_done {
            converged = false;
        }
        if mu <= cfg.mu_final {
            break;
        }
        mu = (mu * cfg.mu_decay).max(cfg.mu_final);
    }

    let p_final = assemble(&gammas);
    Ok(GammaAssignment {
        achieved_trace: total_trace(&gammas),
        pd_witness: smallest_eigenvalue(&p_final),
        gammas,
        converged,
    })
}
