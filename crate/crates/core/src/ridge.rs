//! The generalized ridge estimator in canonical coordinates.

use std::fmt;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::dataset::Dataset;
use crate::error::{Result, RidgeError};
use crate::linalg::{eigendecompose, inverse_spd, solve_spd, EigenSystem, SymMatrix};
use crate::linalg::{DEFAULT_EIGEN_TOL, DEFAULT_RANK_TOL};

/// A coordinate of the eigenbasis, stored 0-based and displayed 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "usize", try_from = "usize")]
pub struct Coord(usize);

impl Coord {
    pub fn zero_based(index: usize) -> Self {
        Coord(index)
    }

    /// Parses the human-facing numbering where the first coordinate is 1.
    pub fn one_based(number: usize, p: usize) -> Result<Self> {
        if number == 0 || number > p {
            return Err(RidgeError::invalid(format!(
                "coordinate {number} out of range 1..={p}"
            )));
        }
        Ok(Coord(number - 1))
    }

    pub fn index(self) -> usize {
        self.0
    }

    pub fn number(self) -> usize {
        self.0 + 1
    }

    pub(crate) fn check(self, p: usize) -> Result<()> {
        if self.0 >= p {
            return Err(RidgeError::invalid(format!(
                "coordinate {} out of range 1..={p}",
                self.number()
            )));
        }
        Ok(())
    }
}

impl fmt::Display for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.number())
    }
}

impl From<Coord> for usize {
    fn from(c: Coord) -> usize {
        c.number()
    }
}

impl TryFrom<usize> for Coord {
    type Error = String;
    fn try_from(number: usize) -> std::result::Result<Self, String> {
        number
            .checked_sub(1)
            .map(Coord)
            .ok_or_else(|| "coordinates are numbered from 1".to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ShrinkageKind {
    Zero,
    Uniform { k: f64 },
    Single { coord: Coord, k: f64 },
    General,
}

/// The diagonal penalty `K = diag(k₁, …, k_p)`, expressed in the eigenbasis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShrinkageSpec {
    kind: ShrinkageKind,
    k: Vec<f64>,
}

fn check_k(k: f64) -> Result<()> {
    if !k.is_finite() || k < 0.0 {
        return Err(RidgeError::invalid(format!(
            "shrinkage must be finite and nonnegative, got {k}"
        )));
    }
    Ok(())
}

impl ShrinkageSpec {
    pub fn zero(p: usize) -> Self {
        ShrinkageSpec {
            kind: ShrinkageKind::Zero,
            k: vec![0.0; p],
        }
    }

    pub fn uniform(p: usize, k: f64) -> Result<Self> {
        check_k(k)?;
        Ok(ShrinkageSpec {
            kind: ShrinkageKind::Uniform { k },
            k: vec![k; p],
        })
    }

    pub fn single(p: usize, coord: Coord, k: f64) -> Result<Self> {
        check_k(k)?;
        coord.check(p)?;
        let mut ks = vec![0.0; p];
        ks[coord.index()] = k;
        Ok(ShrinkageSpec {
            kind: ShrinkageKind::Single { coord, k },
            k: ks,
        })
    }

    pub fn general(k: Vec<f64>) -> Result<Self> {
        if k.is_empty() {
            return Err(RidgeError::invalid("empty shrinkage vector"));
        }
        for &v in &k {
            check_k(v)?;
        }
        Ok(ShrinkageSpec {
            kind: ShrinkageKind::General,
            k,
        })
    }

    pub fn kind(&self) -> ShrinkageKind {
        self.kind
    }

    pub fn k(&self) -> &[f64] {
        &self.k
    }

    pub fn p(&self) -> usize {
        self.k.len()
    }

    pub fn is_zero(&self) -> bool {
        self.k.iter().all(|&v| v == 0.0)
    }

    pub(crate) fn check_dim(&self, p: usize) -> Result<()> {
        if self.p() != p {
            return Err(RidgeError::DimensionMismatch {
                what: "shrinkage vector",
                expected: p,
                found: self.p(),
            });
        }
        Ok(())
    }

    /// Short human label such as `uniform(0.01)` or `single(10, 0.077)`.
    pub fn label(&self) -> String {
        match self.kind {
            ShrinkageKind::Zero => "zero".into(),
            ShrinkageKind::Uniform { k } => format!("uniform({k})"),
            ShrinkageKind::Single { coord, k } => format!("single({coord}, {k})"),
            ShrinkageKind::General => "general".into(),
        }
    }
}

/// The rotated model `Y = Zξ + u` with `Z = XΓ`.
#[derive(Debug, Clone)]
pub struct CanonicalForm {
    pub eigen: EigenSystem,
    pub z: DMatrix<f64>,
    /// `ξ̂ = Λ⁻¹ZᵗY`; zero on rank-deficient coordinates.
    pub xi_hat: DVector<f64>,
    /// `δ = Γᵗα`.
    pub delta: DVector<f64>,
    /// `α = XᵗY`.
    pub alpha: DVector<f64>,
    pub yty: f64,
    deficient: Vec<usize>,
}

impl CanonicalForm {
    /// Requires a full-rank Gram matrix.
    pub fn new(d: &Dataset) -> Result<Self> {
        let c = Self::relaxed(d)?;
        if let Some(&j) = c.deficient.first() {
            return Err(RidgeError::RankDeficient {
                index: j,
                value: c.eigen.lambda[j],
            });
        }
        Ok(c)
    }

    /// Tolerates rank deficiency; such coordinates must later receive a
    /// strictly positive penalty.
    pub fn relaxed(d: &Dataset) -> Result<Self> {
        let eigen = eigendecompose(&d.gram(), DEFAULT_EIGEN_TOL)?;
        let deficient = eigen.deficient_coordinates(DEFAULT_RANK_TOL);
        let z = d.x() * &eigen.gamma;
        let alpha = d.cross();
        let delta = eigen.gamma.transpose() * &alpha;
        let xi_hat = DVector::from_fn(eigen.order(), |j, _| {
            if deficient.contains(&j) {
                0.0
            } else {
                delta[j] / eigen.lambda[j]
            }
        });
        Ok(CanonicalForm {
            eigen,
            z,
            xi_hat,
            delta,
            alpha,
            yty: d.tss(),
            deficient,
        })
    }

    pub fn p(&self) -> usize {
        self.eigen.order()
    }

    pub fn lambda(&self) -> &DVector<f64> {
        &self.eigen.lambda
    }

    pub fn gamma(&self) -> &DMatrix<f64> {
        &self.eigen.gamma
    }

    pub fn deficient(&self) -> &[usize] {
        &self.deficient
    }

    fn check_penalised(&self, k: &[f64]) -> Result<()> {
        match self.deficient.iter().find(|&&j| k[j] <= 0.0) {
            Some(&j) => Err(RidgeError::RankDeficient {
                index: j,
                value: self.eigen.lambda[j],
            }),
            None => Ok(()),
        }
    }

    /// `ξ = Γᵗβ` for an arbitrary coefficient vector.
    pub fn rotate(&self, beta: &DVector<f64>) -> Result<DVector<f64>> {
        if beta.len() != self.p() {
            return Err(RidgeError::DimensionMismatch {
                what: "coefficient vector",
                expected: self.p(),
                found: beta.len(),
            });
        }
        Ok(self.eigen.gamma.transpose() * beta)
    }

    /// `ΓΩδ` without the companion matrices.
    pub fn beta_for(&self, k: &[f64]) -> DVector<f64> {
        let scaled = DVector::from_fn(self.p(), |j, _| self.delta[j] / (self.eigen.lambda[j] + k[j]));
        &self.eigen.gamma * scaled
    }

    /// `‖β̂(K)‖ = Σ δ_j²/(λ_j+k_j)²` (squared Euclidean norm).
    pub fn norm_for(&self, k: &[f64]) -> f64 {
        self.terms(k, |d, l, kj| d * d / ((l + kj) * (l + kj)))
    }

    /// `(1/YᵗY) Σ δ_j²(λ_j+2k_j)/(λ_j+k_j)²`.
    pub fn gof_for(&self, k: &[f64]) -> f64 {
        self.terms(k, |d, l, kj| d * d * (l + 2.0 * kj) / ((l + kj) * (l + kj))) / self.yty
    }

    fn terms(&self, k: &[f64], f: impl Fn(f64, f64, f64) -> f64) -> f64 {
        (0..self.p())
            .map(|j| f(self.delta[j], self.eigen.lambda[j], k[j]))
            .sum()
    }

    pub fn beta_ols(&self) -> DVector<f64> {
        &self.eigen.gamma * &self.xi_hat
    }
}

#[derive(Debug, Clone)]
pub struct RidgeFit {
    pub spec: ShrinkageSpec,
    pub beta: DVector<f64>,
    pub fitted: DVector<f64>,
    pub residuals: DVector<f64>,
    /// Squared Euclidean norm `β̂ᵗβ̂`.
    pub norm: f64,
    /// `σ²ΓΨΓᵗ` with `Ψ = diag(λ_j/(λ_j+k_j)²)`.
    pub varcov: DMatrix<f64>,
    /// `W_K = Γ diag(λ_j/(λ_j+k_j)) Γᵗ`, mapping OLS onto `β̂(K)`.
    pub w_k: DMatrix<f64>,
    pub gof: f64,
}

impl RidgeFit {
    /// Squared distance `‖β̂(K) − other‖`.
    pub fn distance_sq(&self, other: &DVector<f64>) -> f64 {
        (&self.beta - other).norm_squared()
    }
}

pub fn ridge_fit(c: &CanonicalForm, d: &Dataset, spec: &ShrinkageSpec, sigma2: f64) -> Result<RidgeFit> {
    spec.check_dim(c.p())?;
    if d.p() != c.p() {
        return Err(RidgeError::DimensionMismatch {
            what: "dataset columns",
            expected: c.p(),
            found: d.p(),
        });
    }
    if !sigma2.is_finite() || sigma2 < 0.0 {
        return Err(RidgeError::invalid(format!("sigma² must be nonnegative, got {sigma2}")));
    }
    let k = spec.k();
    c.check_penalised(k)?;
    let lambda = c.lambda();
    let beta = c.beta_for(k);
    let fitted = d.x() * &beta;
    let residuals = d.y() - &fitted;
    let psi: Vec<f64> = (0..c.p())
        .map(|j| sigma2 * lambda[j] / ((lambda[j] + k[j]) * (lambda[j] + k[j])))
        .collect();
    let shrink: Vec<f64> = (0..c.p()).map(|j| lambda[j] / (lambda[j] + k[j])).collect();
    Ok(RidgeFit {
        spec: spec.clone(),
        norm: c.norm_for(k),
        gof: c.gof_for(k),
        varcov: c.eigen.conjugate_diagonal(&psi),
        w_k: c.eigen.conjugate_diagonal(&shrink),
        beta,
        fitted,
        residuals,
    })
}

/// OLS on the stacked system `[Y; 0] = [X; K^{1/2}Γᵗ] β + u`.
#[derive(Debug, Clone)]
pub struct AugmentedFit {
    pub beta: DVector<f64>,
    /// `σ²(XᵗX + ΓKΓᵗ)⁻¹`, which differs from the ridge sandwich variance.
    pub varcov_a: DMatrix<f64>,
    /// `β̂ᵗ(XᵗX + ΓKΓᵗ)β̂ / YᵗY`.
    pub gof_a: f64,
}

pub fn augmented_fit(c: &CanonicalForm, d: &Dataset, spec: &ShrinkageSpec, sigma2: f64) -> Result<AugmentedFit> {
    spec.check_dim(d.p())?;
    let (n, p) = (d.n(), d.p());
    let root_k = DMatrix::from_diagonal(&DVector::from_iterator(p, spec.k().iter().map(|k| k.sqrt())));
    let penalty_rows = root_k * c.gamma().transpose();
    let mut x_a = DMatrix::zeros(n + p, p);
    x_a.rows_mut(0, n).copy_from(d.x());
    x_a.rows_mut(n, p).copy_from(&penalty_rows);
    let mut y_a = DVector::zeros(n + p);
    y_a.rows_mut(0, n).copy_from(d.y());

    let gram_a = SymMatrix::gram(&x_a);
    let beta = solve_spd(&gram_a, &(x_a.transpose() * &y_a))?;
    let varcov_a = inverse_spd(&gram_a)?.into_matrix() * sigma2;
    let gof_a = crate::linalg::quad_form(&beta, &gram_a)? / y_a.norm_squared();
    Ok(AugmentedFit { beta, varcov_a, gof_a })
}

/// `lim_{k_l→∞} β̂(k_l)`: OLS with the `l`-th canonical component removed.
pub fn shrink_limit(c: &CanonicalForm, l: Coord) -> Result<DVector<f64>> {
    l.check(c.p())?;
    let j = l.index();
    let weight = c.delta[j] / c.lambda()[j];
    Ok(c.beta_ols() - c.gamma().column(j) * weight)
}

/// `lim_{k_l→∞} ‖β̂(k_l)‖ = ‖β̂‖ − δ_l²/λ_l²`.
pub fn norm_single_limit(c: &CanonicalForm, l: Coord) -> Result<f64> {
    l.check(c.p())?;
    let j = l.index();
    let lam = c.lambda()[j];
    Ok(c.norm_for(&vec![0.0; c.p()]) - c.delta[j] * c.delta[j] / (lam * lam))
}
