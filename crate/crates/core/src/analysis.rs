//! One-stop wrapper bundling a dataset with its canonical form and OLS fit.

use nalgebra::DVector;

use crate::dataset::{ols_fit, Dataset, OlsFit};
use crate::error::Result;
use crate::gof::{gof_of, GofReport};
use crate::ridge::{augmented_fit, ridge_fit, AugmentedFit, CanonicalForm, RidgeFit, ShrinkageSpec};
use crate::risk::{mse_of, RiskProfile};
use crate::selection::{self, SearchMode, SelectionResult};
use crate::risk::Grid;

/// Noise variance and canonical coefficients used in risk formulas.
#[derive(Debug, Clone)]
pub struct PlugIn {
    pub sigma2: f64,
    pub xi: DVector<f64>,
}

#[derive(Debug, Clone)]
pub struct GeneralizedRidge {
    pub dataset: Dataset,
    pub canonical: CanonicalForm,
    pub ols: OlsFit,
    pub plug_in: PlugIn,
}

/// Everything computed for one shrinkage specification.
#[derive(Debug, Clone)]
pub struct Evaluation {
    pub fit: RidgeFit,
    pub risk: RiskProfile,
    pub gof: GofReport,
    pub augmented: AugmentedFit,
    /// Squared distance from the OLS estimate.
    pub distance_from_ols: f64,
}

impl GeneralizedRidge {
    /// Plug-in values default to the OLS estimates of `σ²` and `ξ`.
    pub fn new(dataset: Dataset) -> Result<Self> {
        let canonical = CanonicalForm::new(&dataset)?;
        let ols = ols_fit(&dataset)?;
        let plug_in = PlugIn {
            sigma2: ols.sigma2_hat,
            xi: canonical.xi_hat.clone(),
        };
        Ok(GeneralizedRidge {
            dataset,
            canonical,
            ols,
            plug_in,
        })
    }

    pub fn with_sigma2(mut self, sigma2: f64) -> Self {
        self.plug_in.sigma2 = sigma2;
        self
    }

    pub fn p(&self) -> usize {
        self.dataset.p()
    }

    pub fn sigma2(&self) -> f64 {
        self.plug_in.sigma2
    }

    pub fn fit(&self, spec: &ShrinkageSpec) -> Result<RidgeFit> {
        ridge_fit(&self.canonical, &self.dataset, spec, self.plug_in.sigma2)
    }

    pub fn risk(&self, spec: &ShrinkageSpec) -> Result<RiskProfile> {
        mse_of(&self.canonical, spec, self.plug_in.sigma2, &self.plug_in.xi)
    }

    pub fn evaluate(&self, spec: &ShrinkageSpec) -> Result<Evaluation> {
        let fit = self.fit(spec)?;
        let gof = gof_of(&self.canonical, &self.dataset, &fit)?;
        let augmented = augmented_fit(&self.canonical, &self.dataset, spec, self.plug_in.sigma2)?;
        Ok(Evaluation {
            distance_from_ols: fit.distance_sq(&self.ols.beta_hat),
            risk: self.risk(spec)?,
            fit,
            gof,
            augmented,
        })
    }

    pub fn k_hkb(&self) -> Result<SelectionResult> {
        selection::k_hkb_from(self.plug_in.sigma2, &self.ols.beta_hat)
    }

    pub fn k_hk(&self) -> Result<SelectionResult> {
        selection::k_hk(&self.canonical, self.plug_in.sigma2, &self.plug_in.xi)
    }

    pub fn k_grid_min(&self, grid: &Grid, mode: SearchMode) -> Result<SelectionResult> {
        selection::k_grid_min(&self.canonical, self.plug_in.sigma2, &self.plug_in.xi, grid, mode)
    }

    pub fn per_coordinate(&self) -> Result<SelectionResult> {
        selection::per_coordinate(&self.canonical, self.plug_in.sigma2, &self.plug_in.xi)
    }

    pub fn single_min(&self, l: crate::ridge::Coord) -> Result<SelectionResult> {
        selection::single_min(&self.canonical, self.plug_in.sigma2, &self.plug_in.xi, l)
    }

    pub fn best_single(&self) -> Result<SelectionResult> {
        selection::best_single(&self.canonical, self.plug_in.sigma2, &self.plug_in.xi)
    }

    pub fn single_minima(&self) -> Result<Vec<crate::risk::SingleMinimum>> {
        selection::single_minima(&self.canonical, self.plug_in.sigma2, &self.plug_in.xi)
    }
}
