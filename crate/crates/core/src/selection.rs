//! Rules for choosing the shrinkage matrix.

use nalgebra::DVector;
use rayon::prelude::*;
use serde::Serialize;

use crate::dataset::OlsFit;
use crate::error::{Result, RidgeError};
use crate::ridge::{CanonicalForm, Coord, ShrinkageSpec};
use crate::risk::{mse_ols, mse_single_min, mse_value, Grid, SingleMinimum};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "rule", content = "coord", rename_all = "snake_case")]
pub enum Rule {
    /// `p σ̂² / β̂ᵗβ̂`.
    Hkb,
    /// `σ² / ξ_max²`.
    Hk,
    /// First local minimum of the uniform MSE along a grid.
    GridMin,
    SingleMin(Coord),
    /// `k_i = σ²/ξ_i²` in every coordinate.
    PerCoordinate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchMode {
    /// Stop at the first grid point where the MSE rises.
    EarlyStop,
    /// Evaluate the whole grid and take the global argmin.
    Exhaustive,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridDiagnostics {
    pub mode: SearchMode,
    pub step: Option<f64>,
    pub index: usize,
    pub evaluated: usize,
    pub mse: f64,
    /// Grid points on either side of the answer.
    pub lower: Option<f64>,
    pub upper: Option<f64>,
    /// The MSE never rose inside the grid; the last point was returned.
    pub no_interior_minimum: bool,
    pub k_hk: Option<f64>,
    /// Grid answer above the Hoerl–Kennard value.
    pub exceeds_hk: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Diagnostics {
    Hkb { sigma2: f64, beta_norm_sq: f64 },
    Hk { sigma2: f64, xi_max: f64, coord: Coord },
    Grid(GridDiagnostics),
    Single { minimum: SingleMinimum, mse_ols: f64 },
    PerCoordinate { sigma2: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SelectionResult {
    pub rule: Rule,
    pub spec: ShrinkageSpec,
    pub diagnostics: Diagnostics,
}

impl SelectionResult {
    /// The common value for uniform and single-coordinate rules.
    pub fn k(&self) -> Option<f64> {
        match self.spec.kind() {
            crate::ridge::ShrinkageKind::Uniform { k } | crate::ridge::ShrinkageKind::Single { k, .. } => Some(k),
            crate::ridge::ShrinkageKind::Zero => Some(0.0),
            crate::ridge::ShrinkageKind::General => None,
        }
    }
}

pub fn k_hkb(ols: &OlsFit) -> Result<SelectionResult> {
    k_hkb_from(ols.sigma2_hat, &ols.beta_hat)
}

pub fn k_hkb_from(sigma2: f64, beta: &DVector<f64>) -> Result<SelectionResult> {
    let beta_norm_sq = beta.norm_squared();
    if beta_norm_sq == 0.0 {
        return Err(RidgeError::Undefined("all coefficients are zero".into()));
    }
    let p = beta.len();
    let k = p as f64 * sigma2 / beta_norm_sq;
    Ok(SelectionResult {
        rule: Rule::Hkb,
        spec: ShrinkageSpec::uniform(p, k)?,
        diagnostics: Diagnostics::Hkb { sigma2, beta_norm_sq },
    })
}

/// Largest-magnitude canonical coefficient; ties go to the lowest index.
fn xi_max(xi: &DVector<f64>) -> Option<(Coord, f64)> {
    let mut best: Option<(usize, f64)> = None;
    for (j, v) in xi.iter().enumerate() {
        if best.is_none_or(|(_, b)| v.abs() > b) {
            best = Some((j, v.abs()));
        }
    }
    best.filter(|&(_, v)| v > 0.0).map(|(j, v)| (Coord::zero_based(j), v))
}

pub fn k_hk(c: &CanonicalForm, sigma2: f64, xi: &DVector<f64>) -> Result<SelectionResult> {
    let (coord, max) = xi_max(xi).ok_or_else(|| RidgeError::Undefined("all canonical coefficients are zero".into()))?;
    Ok(SelectionResult {
        rule: Rule::Hk,
        spec: ShrinkageSpec::uniform(c.p(), sigma2 / (max * max))?,
        diagnostics: Diagnostics::Hk { sigma2, xi_max: max, coord },
    })
}

/// Grid search over uniform `k`, early-stopping as soon as the MSE rises.
pub fn k_grid_min(c: &CanonicalForm, sigma2: f64, xi: &DVector<f64>, grid: &Grid, mode: SearchMode) -> Result<SelectionResult> {
    if xi.len() != c.p() {
        return Err(RidgeError::DimensionMismatch {
            what: "canonical coefficients",
            expected: c.p(),
            found: xi.len(),
        });
    }
    let p = c.p();
    let ks = grid.values();
    let at = |k: f64| mse_value(c, &vec![k; p], sigma2, xi);

    let (index, evaluated, no_interior_minimum, mse) = match mode {
        SearchMode::EarlyStop => {
            let mut prev = at(ks[0]);
            let mut found = None;
            for (j, &k) in ks.iter().enumerate().skip(1) {
                let cur = at(k);
                if cur > prev {
                    found = Some((j - 1, j + 1, prev));
                    break;
                }
                prev = cur;
            }
            match found {
                Some((i, n, m)) => (i, n, false, m),
                None => (ks.len() - 1, ks.len(), true, prev),
            }
        }
        SearchMode::Exhaustive => {
            let values: Vec<f64> = ks.par_iter().map(|&k| at(k)).collect();
            let (i, m) = values
                .iter()
                .enumerate()
                .fold((0, f64::INFINITY), |acc, (i, &v)| if v < acc.1 { (i, v) } else { acc });
            (i, ks.len(), i == ks.len() - 1, m)
        }
    };
    let k = ks[index];
    let k_hk = xi_max(xi).map(|(_, m)| sigma2 / (m * m));
    Ok(SelectionResult {
        rule: Rule::GridMin,
        spec: ShrinkageSpec::uniform(p, k)?,
        diagnostics: Diagnostics::Grid(GridDiagnostics {
            mode,
            step: grid.step(),
            index,
            evaluated,
            mse,
            lower: index.checked_sub(1).map(|i| ks[i]),
            upper: ks.get(index + 1).copied(),
            no_interior_minimum,
            k_hk,
            exceeds_hk: k_hk.is_some_and(|h| k > h),
        }),
    })
}

pub fn per_coordinate(c: &CanonicalForm, sigma2: f64, xi: &DVector<f64>) -> Result<SelectionResult> {
    if xi.len() != c.p() {
        return Err(RidgeError::DimensionMismatch {
            what: "canonical coefficients",
            expected: c.p(),
            found: xi.len(),
        });
    }
    let zeros: Vec<String> = xi
        .iter()
        .enumerate()
        .filter(|(_, v)| **v == 0.0)
        .map(|(j, _)| (j + 1).to_string())
        .collect();
    if !zeros.is_empty() {
        return Err(RidgeError::Undefined(format!(
            "per-coordinate shrinkage undefined: zero canonical coefficient at {}",
            zeros.join(", ")
        )));
    }
    let k = xi.iter().map(|v| sigma2 / (v * v)).collect();
    Ok(SelectionResult {
        rule: Rule::PerCoordinate,
        spec: ShrinkageSpec::general(k)?,
        diagnostics: Diagnostics::PerCoordinate { sigma2 },
    })
}

pub fn single_min(c: &CanonicalForm, sigma2: f64, xi: &DVector<f64>, l: Coord) -> Result<SelectionResult> {
    let minimum = mse_single_min(c, l, sigma2, xi)?;
    Ok(SelectionResult {
        rule: Rule::SingleMin(l),
        spec: ShrinkageSpec::single(c.p(), l, minimum.k)?,
        diagnostics: Diagnostics::Single {
            minimum,
            mse_ols: mse_ols(c, sigma2),
        },
    })
}

/// Single-coordinate minima for every coordinate.
pub fn single_minima(c: &CanonicalForm, sigma2: f64, xi: &DVector<f64>) -> Result<Vec<SingleMinimum>> {
    (0..c.p()).map(|j| mse_single_min(c, Coord::zero_based(j), sigma2, xi)).collect()
}

/// The coordinate whose single-coordinate minimum has the lowest MSE.
pub fn best_single(c: &CanonicalForm, sigma2: f64, xi: &DVector<f64>) -> Result<SelectionResult> {
    let rows = single_minima(c, sigma2, xi)?;
    let best = rows
        .iter()
        .min_by(|a, b| a.mse.total_cmp(&b.mse))
        .expect("at least one coordinate");
    single_min(c, sigma2, xi, best.coord)
}
