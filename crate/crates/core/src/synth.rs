//! Synthetic designs for examples, simulations and tests.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;

use crate::dataset::Dataset;
use crate::error::{Result, RidgeError};

/// A linear model with known coefficients and noise level.
#[derive(Debug, Clone)]
pub struct KnownModel {
    pub x: DMatrix<f64>,
    pub beta: DVector<f64>,
    pub sigma: f64,
}

impl KnownModel {
    pub fn sigma2(&self) -> f64 {
        self.sigma * self.sigma
    }

    /// One draw of `Y = Xβ + u` with Gaussian noise.
    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<Dataset> {
        let mean = &self.x * &self.beta;
        let y = DVector::from_fn(mean.len(), |i, _| {
            mean[i] + self.sigma * rng.sample::<f64, _>(StandardNormal)
        });
        Dataset::from_parts(y, self.x.clone())
    }
}

pub fn gaussian_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> DMatrix<f64> {
    DMatrix::from_fn(rows, cols, |_, _| rng.sample(StandardNormal))
}

/// Well-conditioned random regression with unit-scale coefficients.
pub fn random_model<R: Rng + ?Sized>(rng: &mut R, n: usize, p: usize, sigma: f64) -> KnownModel {
    let x = gaussian_matrix(rng, n, p);
    let beta = DVector::from_fn(p, |_, _| rng.random_range(-2.0..2.0));
    KnownModel { x, beta, sigma }
}

pub fn random_dataset<R: Rng + ?Sized>(rng: &mut R, n: usize, p: usize) -> Dataset {
    random_model(rng, n, p, 0.5)
        .draw(rng)
        .expect("random Gaussian design is valid")
}

/// A design whose Gram matrix has the prescribed spectrum.
///
/// Returns a dataset with `XᵗX = Γ diag(λ) Γᵗ` for a random orthogonal `Γ`,
/// OLS coefficients equal to `Γξ` and residual variance estimate exactly
/// `sigma2_hat`.
pub fn spectral_design<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    lambda: &[f64],
    xi: &[f64],
    sigma2_hat: f64,
) -> Result<Dataset> {
    let p = lambda.len();
    if xi.len() != p {
        return Err(RidgeError::DimensionMismatch {
            what: "canonical coefficients",
            expected: p,
            found: xi.len(),
        });
    }
    if n <= p {
        return Err(RidgeError::invalid(format!("need n > p (n = {n}, p = {p})")));
    }
    if lambda.iter().any(|&l| l <= 0.0) {
        return Err(RidgeError::invalid("spectrum must be positive"));
    }
    let q = gaussian_matrix(rng, n, p + 1).qr().q();
    let gamma = gaussian_matrix(rng, p, p).qr().q();
    let root = DMatrix::from_diagonal(&DVector::from_iterator(p, lambda.iter().map(|l| l.sqrt())));
    let x = q.columns(0, p) * root * gamma.transpose();
    let beta = &gamma * DVector::from_column_slice(xi);
    let noise = q.column(p) * (sigma2_hat * (n - p) as f64).sqrt();
    let y = &x * beta + noise;
    Dataset::from_parts(y, x)
}
