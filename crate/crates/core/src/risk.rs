//! Exact mean squared error of `β̂(K)`, its single-coordinate analysis and
//! ridge traces.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use nalgebra::DVector;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Result, RidgeError};
use crate::ridge::{CanonicalForm, Coord, ShrinkageSpec};

#[derive(Debug, Clone, Serialize)]
pub struct RiskProfile {
    pub spec: ShrinkageSpec,
    /// Variance term `σ² Σ λ_j/(λ_j+k_j)²`.
    pub eta1: f64,
    /// Squared bias `Σ k_j² ξ_j²/(λ_j+k_j)²`.
    pub eta2: f64,
    pub mse: f64,
    pub sigma2: f64,
    pub xi: Vec<f64>,
}

fn check_inputs(c: &CanonicalForm, sigma2: f64, xi: &DVector<f64>) -> Result<()> {
    if xi.len() != c.p() {
        return Err(RidgeError::DimensionMismatch {
            what: "canonical coefficients",
            expected: c.p(),
            found: xi.len(),
        });
    }
    if !sigma2.is_finite() || sigma2 < 0.0 {
        return Err(RidgeError::invalid(format!("sigma² must be nonnegative, got {sigma2}")));
    }
    Ok(())
}

fn eta_terms(lambda: &DVector<f64>, k: &[f64], sigma2: f64, xi: &DVector<f64>) -> (f64, f64) {
    let mut eta1 = 0.0;
    let mut eta2 = 0.0;
    for j in 0..lambda.len() {
        let denom = (lambda[j] + k[j]) * (lambda[j] + k[j]);
        eta1 += sigma2 * lambda[j] / denom;
        eta2 += k[j] * k[j] * xi[j] * xi[j] / denom;
    }
    (eta1, eta2)
}

pub fn mse_of(c: &CanonicalForm, spec: &ShrinkageSpec, sigma2: f64, xi: &DVector<f64>) -> Result<RiskProfile> {
    check_inputs(c, sigma2, xi)?;
    spec.check_dim(c.p())?;
    let (eta1, eta2) = eta_terms(c.lambda(), spec.k(), sigma2, xi);
    Ok(RiskProfile {
        spec: spec.clone(),
        eta1,
        eta2,
        mse: eta1 + eta2,
        sigma2,
        xi: xi.iter().copied().collect(),
    })
}

/// Scalar MSE for raw penalties, skipping the profile bookkeeping.
pub(crate) fn mse_value(c: &CanonicalForm, k: &[f64], sigma2: f64, xi: &DVector<f64>) -> f64 {
    let (a, b) = eta_terms(c.lambda(), k, sigma2, xi);
    a + b
}

/// `σ² Σ 1/λ_j`.
pub fn mse_ols(c: &CanonicalForm, sigma2: f64) -> f64 {
    c.lambda().iter().map(|l| sigma2 / l).sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SingleMinimum {
    pub coord: Coord,
    /// `σ²/ξ_l²`.
    pub k: f64,
    pub mse: f64,
    /// Whether the MSE stays below OLS for every `k_l > 0`.
    pub always_below_ols: bool,
}

pub fn mse_single_min(c: &CanonicalForm, l: Coord, sigma2: f64, xi: &DVector<f64>) -> Result<SingleMinimum> {
    check_inputs(c, sigma2, xi)?;
    l.check(c.p())?;
    let j = l.index();
    let xi2 = xi[j] * xi[j];
    if xi2 == 0.0 {
        return Err(RidgeError::Undefined(format!(
            "canonical coefficient {l} is zero, so the single-coordinate minimum does not exist"
        )));
    }
    let lam = c.lambda()[j];
    let mse = mse_ols(c, sigma2) - sigma2 / lam + sigma2 * xi2 / (xi2 * lam + sigma2);
    Ok(SingleMinimum {
        coord: l,
        k: sigma2 / xi2,
        mse,
        always_below_ols: xi2 - sigma2 / lam < 0.0,
    })
}

/// `lim_{k_l→∞} MSE = MSE_OLS + ξ_l² − σ²/λ_l`.
pub fn mse_single_limit(c: &CanonicalForm, l: Coord, sigma2: f64, xi: &DVector<f64>) -> Result<f64> {
    check_inputs(c, sigma2, xi)?;
    l.check(c.p())?;
    let j = l.index();
    Ok(mse_ols(c, sigma2) + xi[j] * xi[j] - sigma2 / c.lambda()[j])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", content = "coord", rename_all = "snake_case")]
pub enum TraceMode {
    /// `K = kI`.
    Uniform,
    /// Only coordinate `l` is penalised.
    Single(Coord),
}

impl TraceMode {
    pub fn spec(self, p: usize, k: f64) -> Result<ShrinkageSpec> {
        match self {
            TraceMode::Uniform => ShrinkageSpec::uniform(p, k),
            TraceMode::Single(l) => ShrinkageSpec::single(p, l, k),
        }
    }

    fn penalties(self, p: usize, k: f64) -> Vec<f64> {
        match self {
            TraceMode::Uniform => vec![k; p],
            TraceMode::Single(l) => {
                let mut v = vec![0.0; p];
                v[l.index()] = k;
                v
            }
        }
    }
}

impl fmt::Display for TraceMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TraceMode::Uniform => write!(f, "uniform"),
            TraceMode::Single(l) => write!(f, "single:{l}"),
        }
    }
}

/// Strictly increasing, nonnegative shrinkage values.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Grid(Vec<f64>);

impl Grid {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(RidgeError::invalid("empty grid"));
        }
        if values.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(RidgeError::invalid("grid values must be finite and nonnegative"));
        }
        if values.windows(2).any(|w| w[1] <= w[0]) {
            return Err(RidgeError::invalid("grid must be strictly increasing"));
        }
        Ok(Grid(values))
    }

    /// `start, start + step, …` up to `stop` (inclusive within half a step).
    /// Points are `start + i·step` so there is no accumulated drift.
    pub fn uniform(start: f64, stop: f64, step: f64) -> Result<Self> {
        if !(step > 0.0) || !start.is_finite() || !stop.is_finite() || stop < start {
            return Err(RidgeError::invalid(format!(
                "invalid grid {start}:{stop}:{step}"
            )));
        }
        let count = ((stop - start) / step + 0.5).floor() as usize + 1;
        Grid::new((0..count).map(|i| start + i as f64 * step).collect())
    }

    /// `[0, 1]` in steps of `1e-5`.
    pub fn default_unit() -> Self {
        Grid::uniform(0.0, 1.0, 1e-5).expect("static grid")
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Uniform spacing if every gap agrees to 1e-9 relative.
    pub fn step(&self) -> Option<f64> {
        let v = &self.0;
        if v.len() < 2 {
            return None;
        }
        let step = (v[v.len() - 1] - v[0]) / (v.len() - 1) as f64;
        v.windows(2)
            .all(|w| ((w[1] - w[0]) - step).abs() <= 1e-9 * step)
            .then_some(step)
    }
}

impl FromStr for Grid {
    type Err = RidgeError;

    /// `START:STOP:STEP`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let nums: std::result::Result<Vec<f64>, _> = parts.iter().map(|p| p.trim().parse::<f64>()).collect();
        match nums {
            Ok(n) if n.len() == 3 => Grid::uniform(n[0], n[1], n[2]),
            _ => Err(RidgeError::invalid(format!("grid must be START:STOP:STEP, got {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceRow {
    pub k: f64,
    pub beta: Vec<f64>,
    pub norm: f64,
    pub mse: f64,
    pub gof: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceSeries {
    pub mode: TraceMode,
    pub grid: Grid,
    pub rows: Vec<TraceRow>,
}

/// Evaluates every grid point (in parallel); rows follow grid order.
pub fn trace(c: &CanonicalForm, mode: TraceMode, grid: &Grid, sigma2: f64, xi: &DVector<f64>) -> Result<TraceSeries> {
    check_inputs(c, sigma2, xi)?;
    if let TraceMode::Single(l) = mode {
        l.check(c.p())?;
    }
    let p = c.p();
    let rows = grid
        .values()
        .par_iter()
        .map(|&k| {
            let pen = mode.penalties(p, k);
            TraceRow {
                k,
                beta: c.beta_for(&pen).iter().copied().collect(),
                norm: c.norm_for(&pen),
                mse: mse_value(c, &pen, sigma2, xi),
                gof: c.gof_for(&pen),
            }
        })
        .collect();
    Ok(TraceSeries {
        mode,
        grid: grid.clone(),
        rows,
    })
}

/// File names written by [`TraceSeries::write_csv`].
pub fn trace_paths(prefix: &Path) -> [PathBuf; 4] {
    let base = prefix.to_string_lossy();
    ["coefficients", "norm", "mse", "gof"].map(|s| PathBuf::from(format!("{base}_{s}.csv")))
}

impl TraceSeries {
    pub fn p(&self) -> usize {
        self.rows.first().map_or(0, |r| r.beta.len())
    }

    pub fn column(&self, f: impl Fn(&TraceRow) -> f64) -> Vec<f64> {
        self.rows.iter().map(f).collect()
    }

    /// Writes `PREFIX_coefficients.csv`, `PREFIX_norm.csv`, `PREFIX_mse.csv`
    /// and `PREFIX_gof.csv`, each with `k` as first column. Values use the
    /// shortest representation that parses back to the same `f64`.
    pub fn write_csv(&self, prefix: &Path, names: &[String]) -> Result<[PathBuf; 4]> {
        let paths = trace_paths(prefix);
        let csv_err = |e: csv::Error| RidgeError::Io(e.into());

        let mut w = csv::Writer::from_path(&paths[0]).map_err(csv_err)?;
        let mut header = vec!["k".to_string()];
        header.extend(names.iter().cloned());
        w.write_record(&header).map_err(csv_err)?;
        for row in &self.rows {
            let mut rec = vec![row.k.to_string()];
            rec.extend(row.beta.iter().map(f64::to_string));
            w.write_record(&rec).map_err(csv_err)?;
        }
        w.flush()?;

        let scalars: [(&str, fn(&TraceRow) -> f64); 3] =
            [("norm", |r| r.norm), ("mse", |r| r.mse), ("gof", |r| r.gof)];
        for (path, (name, get)) in paths[1..].iter().zip(scalars) {
            let mut w = csv::Writer::from_path(path).map_err(csv_err)?;
            w.write_record(["k", name]).map_err(csv_err)?;
            for row in &self.rows {
                w.write_record([row.k.to_string(), get(row).to_string()]).map_err(csv_err)?;
            }
            w.flush()?;
        }
        Ok(paths)
    }

    pub fn read_csv(prefix: &Path, mode: TraceMode) -> Result<Self> {
        let paths = trace_paths(prefix);
        let coef = read_table(&paths[0])?;
        let scalar: Vec<Vec<Vec<f64>>> = paths[1..].iter().map(|p| read_table(p)).collect::<Result<_>>()?;
        if scalar.iter().any(|t| t.len() != coef.len()) {
            return Err(RidgeError::Data("trace files disagree on row count".into()));
        }
        let rows = coef
            .iter()
            .enumerate()
            .map(|(i, r)| TraceRow {
                k: r[0],
                beta: r[1..].to_vec(),
                norm: scalar[0][i][1],
                mse: scalar[1][i][1],
                gof: scalar[2][i][1],
            })
            .collect::<Vec<_>>();
        let grid = Grid::new(rows.iter().map(|r| r.k).collect())?;
        Ok(TraceSeries { mode, grid, rows })
    }
}

fn read_table(path: &Path) -> Result<Vec<Vec<f64>>> {
    let mut rdr = csv::Reader::from_path(path).map_err(|e| RidgeError::Data(format!("{}: {e}", path.display())))?;
    let mut out = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| RidgeError::Data(e.to_string()))?;
        let row = rec
            .iter()
            .enumerate()
            .map(|(j, f)| {
                f.parse::<f64>().map_err(|_| RidgeError::Parse {
                    row: i + 2,
                    column: j + 1,
                    message: format!("not a number: {f:?}"),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        out.push(row);
    }
    Ok(out)
}
