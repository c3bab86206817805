//! Goodness of fit for generalized ridge fits.

use serde::Serialize;

use crate::dataset::{transform_y, Dataset, TransformMode};
use crate::error::{Result, RidgeError};
use crate::linalg::{quad_form, SymMatrix};
use crate::ridge::{CanonicalForm, Coord, RidgeFit};

#[derive(Debug, Clone, Serialize)]
pub struct GofReport {
    /// `YᵗY`.
    pub tss: f64,
    /// `β̂ᵗ(XᵗX + 2ΓKΓᵗ)β̂`.
    pub ess: f64,
    /// `eᵗe`.
    pub rss: f64,
    /// `1 − eᵗe/YᵗY`.
    pub gof: f64,
    /// The same quantity evaluated in the eigenbasis.
    pub gof_spectral: f64,
    /// Augmented-model variant using `XᵗX + ΓKΓᵗ`.
    pub gof_augmented: f64,
    /// `(λ_j + 2k_j)/(λ_j + k_j)²`.
    pub xi_matrix_diag: Vec<f64>,
    /// Set for untransformed data, where the ratio need not lie in `[0, 1]`.
    pub raw_data: bool,
}

pub fn gof_of(c: &CanonicalForm, d: &Dataset, fit: &RidgeFit) -> Result<GofReport> {
    fit.spec.check_dim(c.p())?;
    let k = fit.spec.k();
    let gram = d.gram();
    let penalty = c.eigen.conjugate_diagonal(k);
    let with_penalty = |scale: f64| SymMatrix::new(gram.as_matrix() + &penalty * scale);
    let tss = d.tss();
    let ess = quad_form(&fit.beta, &with_penalty(2.0)?)?;
    let gof_augmented = quad_form(&fit.beta, &with_penalty(1.0)?)? / tss;
    let rss = fit.residuals.norm_squared();
    let lambda = c.lambda();
    Ok(GofReport {
        tss,
        ess,
        rss,
        gof: 1.0 - rss / tss,
        gof_spectral: c.gof_for(k),
        gof_augmented,
        xi_matrix_diag: (0..c.p())
            .map(|j| (lambda[j] + 2.0 * k[j]) / ((lambda[j] + k[j]) * (lambda[j] + k[j])))
            .collect(),
        raw_data: d.transform().mode == TransformMode::Raw,
    })
}

/// `lim_{k_l→∞} GoF(k_l) = GoF − δ_l²/(λ_l YᵗY)`.
pub fn gof_limit_single(c: &CanonicalForm, l: Coord) -> Result<f64> {
    l.check(c.p())?;
    let j = l.index();
    let ols = c.gof_for(&vec![0.0; c.p()]);
    Ok(ols - c.delta[j] * c.delta[j] / (c.lambda()[j] * c.yty))
}

/// Runs `fit_gof` on the stored data and on `(Y − a)/b`.
pub fn gof_under_transform<F>(d: &Dataset, a: f64, b: f64, fit_gof: F) -> Result<(f64, f64)>
where
    F: Fn(&Dataset) -> Result<f64>,
{
    if b == 0.0 {
        return Err(RidgeError::invalid("scale factor b must be nonzero"));
    }
    let shifted = transform_y(d, a, b)?;
    Ok((fit_gof(d)?, fit_gof(&shifted)?))
}
