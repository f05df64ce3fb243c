//! Covariance matrix adaptation.
//!
//! A compact CMA-ES core driving the CMA emitters: rank-one plus rank-mu
//! covariance updates, cumulative step-size adaptation, and lazy
//! eigendecomposition. Hyperparameters follow the standard published
//! defaults for the problem dimension; the population size comes from the
//! caller so per-emitter batches stay aligned with the evaluation budget.
//!
//! The update consumes an externally supplied best-first ordering and never
//! sees raw scores, so any rank-preserving transformation of the scoring
//! signal leaves the trajectory bit-identical.

use crate::archive::{InsertResult, InsertStatus};
use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;

#[derive(Clone, Debug)]
pub struct CmaWeights {
    pub lambda: usize,
    pub mu: usize,
    /// Positive log-rank recombination weights over the top mu, summing to 1.
    pub weights: Vec<f64>,
    pub mu_eff: f64,
    pub c_sigma: f64,
    pub d_sigma: f64,
    pub c_c: f64,
    pub c_1: f64,
    pub c_mu: f64,
    /// E‖N(0, I_n)‖.
    pub chi_n: f64,
    /// Eigendecomposition refresh cadence in generations.
    pub eigen_every: usize,
}

impl CmaWeights {
    pub fn new(dim: usize, lambda: usize) -> Self {
        assert!(lambda >= 2, "population size must be at least 2");
        let n = dim as f64;
        let mu = lambda / 2;
        let raw: Vec<f64> = (1..=mu)
            .map(|i| ((lambda as f64 + 1.0) / 2.0).ln() - (i as f64).ln())
            .collect();
        let sum: f64 = raw.iter().sum();
        let weights: Vec<f64> = raw.iter().map(|w| w / sum).collect();
        let mu_eff = 1.0 / weights.iter().map(|w| w * w).sum::<f64>();
        let c_sigma = (mu_eff + 2.0) / (n + mu_eff + 5.0);
        let d_sigma = 1.0 + 2.0 * (0.0f64).max(((mu_eff - 1.0) / (n + 1.0)).sqrt() - 1.0) + c_sigma;
        let c_c = (4.0 + mu_eff / n) / (n + 4.0 + 2.0 * mu_eff / n);
        let c_1 = 2.0 / ((n + 1.3).powi(2) + mu_eff);
        let c_mu =
            (1.0 - c_1).min(2.0 * (mu_eff - 2.0 + 1.0 / mu_eff) / ((n + 2.0).powi(2) + mu_eff));
        let chi_n = n.sqrt() * (1.0 - 1.0 / (4.0 * n) + 1.0 / (21.0 * n * n));
        let eigen_every = (1.0 / (10.0 * (c_1 + c_mu) * n)).floor().max(1.0) as usize;
        CmaWeights {
            lambda,
            mu,
            weights,
            mu_eff,
            c_sigma,
            d_sigma,
            c_c,
            c_1,
            c_mu,
            chi_n,
            eigen_every,
        }
    }
}

#[derive(Clone, Debug)]
pub struct CmaState {
    pub weights: CmaWeights,
    dim: usize,
    mean: DVector<f64>,
    sigma: f64,
    cov: DMatrix<f64>,
    path_c: DVector<f64>,
    path_sigma: DVector<f64>,
    /// Cached eigenvectors (columns) and sqrt-eigenvalues of `cov`.
    eigen_b: DMatrix<f64>,
    eigen_d: DVector<f64>,
    eigen_stale: usize,
    /// Set when the covariance stopped being positive definite or finite.
    degenerate: bool,
    generation: u64,
    last_mean_move: u64,
}

impl CmaState {
    pub fn new(mean: &[f64], sigma: f64, lambda: usize) -> Self {
        let dim = mean.len();
        CmaState {
            weights: CmaWeights::new(dim, lambda),
            dim,
            mean: DVector::from_row_slice(mean),
            sigma,
            cov: DMatrix::identity(dim, dim),
            path_c: DVector::zeros(dim),
            path_sigma: DVector::zeros(dim),
            eigen_b: DMatrix::identity(dim, dim),
            eigen_d: DVector::from_element(dim, 1.0),
            eigen_stale: 0,
            degenerate: false,
            generation: 0,
            last_mean_move: 0,
        }
    }

    pub fn mean(&self) -> &[f64] {
        self.mean.as_slice()
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn generation(&self) -> u64 {
        self.generation
    }

    fn refresh_eigen(&mut self) {
        if self.cov.iter().any(|v| !v.is_finite()) {
            self.degenerate = true;
            return;
        }
        let eigen = self.cov.clone().symmetric_eigen();
        let mut d = eigen.eigenvalues;
        for v in d.iter_mut() {
            if *v <= 0.0 || !v.is_finite() {
                self.degenerate = true;
                *v = 1e-20;
            }
            *v = v.sqrt();
        }
        self.eigen_b = eigen.eigenvectors;
        self.eigen_d = d;
        self.eigen_stale = 0;
    }

    /// Condition number of the covariance, from the cached decomposition.
    pub fn condition_number(&self) -> f64 {
        let max = self.eigen_d.iter().cloned().fold(f64::MIN, f64::max);
        let min = self.eigen_d.iter().cloned().fold(f64::MAX, f64::min);
        (max / min).powi(2)
    }

    /// Draws `lambda` candidates from N(mean, sigma^2 C).
    pub fn ask<R: Rng>(&mut self, rng: &mut R) -> Vec<Vec<f64>> {
        if self.eigen_stale >= self.weights.eigen_every {
            self.refresh_eigen();
        }
        let lambda = self.weights.lambda;
        let mut out = Vec::with_capacity(lambda);
        for _ in 0..lambda {
            let z = DVector::from_fn(self.dim, |_, _| rng.sample::<f64, _>(StandardNormal));
            let y = &self.eigen_b * z.component_mul(&self.eigen_d);
            let x = &self.mean + self.sigma * y;
            out.push(x.as_slice().to_vec());
        }
        out
    }

    /// Updates the distribution from candidates ordered best-first. The list
    /// must contain exactly the vectors produced by the matching `ask`.
    pub fn tell(&mut self, ranked: &[&[f64]]) {
        assert_eq!(
            ranked.len(),
            self.weights.lambda,
            "rank list length mismatch"
        );
        let w = &self.weights;
        let old_mean = self.mean.clone();

        // Weighted recombination of the top mu.
        let mut new_mean = DVector::zeros(self.dim);
        for (wi, x) in w.weights.iter().zip(ranked) {
            new_mean += *wi * DVector::from_row_slice(x);
        }
        let y_w = (&new_mean - &old_mean) / self.sigma;

        // C^(-1/2) y_w via the cached eigendecomposition.
        let mut c_inv_sqrt_y = self.eigen_b.transpose() * &y_w;
        for (v, d) in c_inv_sqrt_y.iter_mut().zip(self.eigen_d.iter()) {
            *v /= d.max(1e-20);
        }
        let c_inv_sqrt_y = &self.eigen_b * c_inv_sqrt_y;

        let c_sigma = w.c_sigma;
        self.path_sigma = (1.0 - c_sigma) * &self.path_sigma
            + (c_sigma * (2.0 - c_sigma) * w.mu_eff).sqrt() * c_inv_sqrt_y;

        let expected_decay = 1.0 - (1.0 - c_sigma).powi(2 * (self.generation as i32 + 1));
        let ps_norm = self.path_sigma.norm();
        let h_sigma =
            ps_norm / expected_decay.sqrt() < (1.4 + 2.0 / (self.dim as f64 + 1.0)) * w.chi_n;
        let h = if h_sigma { 1.0 } else { 0.0 };

        let c_c = w.c_c;
        self.path_c = (1.0 - c_c) * &self.path_c + h * (c_c * (2.0 - c_c) * w.mu_eff).sqrt() * &y_w;

        // Rank-one plus rank-mu covariance update, with the stall correction
        // applied when the step-size path is out of bounds.
        let delta_h = (1.0 - h) * c_c * (2.0 - c_c);
        let mut new_cov = (1.0 - w.c_1 - w.c_mu + w.c_1 * delta_h) * &self.cov;
        new_cov += w.c_1 * &self.path_c * self.path_c.transpose();
        for (wi, x) in w.weights.iter().zip(ranked) {
            let y = (DVector::from_row_slice(x) - &old_mean) / self.sigma;
            new_cov += w.c_mu * *wi * &y * y.transpose();
        }
        // Symmetrize to keep round-off from accumulating asymmetry.
        self.cov = (&new_cov + new_cov.transpose()) * 0.5;

        self.sigma *= ((c_sigma / w.d_sigma) * (ps_norm / w.chi_n - 1.0)).exp();
        if !self.sigma.is_finite() {
            self.degenerate = true;
        }

        self.mean = new_mean;
        self.generation += 1;
        self.eigen_stale += 1;
        if (&self.mean - &old_mean).amax() > 1e-12 {
            self.last_mean_move = self.generation;
        }
    }

    /// Restart test: a whole generation rejected by the archive, or numerical
    /// degeneracy (vanishing step size, ill-conditioned covariance, or a
    /// mean frozen for 50 generations).
    pub fn should_restart(&self, last_gen: &[InsertResult]) -> bool {
        if !last_gen.is_empty() && last_gen.iter().all(|r| r.status == InsertStatus::Rejected) {
            return true;
        }
        self.degenerate
            || self.sigma < 1e-12
            || self.condition_number() > 1e14
            || self.generation.saturating_sub(self.last_mean_move) >= 50
    }
}
