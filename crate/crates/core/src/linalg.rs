//! Dense symmetric linear algebra: Jacobi eigendecomposition, Cholesky
//! solves and quadratic forms.
//!
//! Everything here works on small dense matrices (p up to a few hundred),
//! which is the regime of the Gram matrices `XᵗX` handled by the crate.

use nalgebra::{DMatrix, DVector};

use crate::error::{Result, RidgeError};

/// Default relative tolerance for the eigensolver.
pub const DEFAULT_EIGEN_TOL: f64 = 1e-12;

/// Maximum number of cyclic Jacobi sweeps.
pub const MAX_SWEEPS: usize = 100;

/// Relative eigenvalue threshold below which a Gram matrix is treated as
/// rank deficient (`λ_min ≤ tol · λ_max`).
pub const DEFAULT_RANK_TOL: f64 = 1e-12;

/// A real symmetric matrix. Stored densely; symmetry holds exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix {
    inner: DMatrix<f64>,
}

impl SymMatrix {
    /// Wraps a square matrix, rejecting it if it is not symmetric to within
    /// `1e-12 · max|m|`. The stored matrix is the exact symmetric part.
    pub fn new(m: DMatrix<f64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(RidgeError::DimensionMismatch {
                what: "symmetric matrix (columns)",
                expected: m.nrows(),
                found: m.ncols(),
            });
        }
        if m.nrows() == 0 {
            return Err(RidgeError::invalid("symmetric matrix must have order >= 1"));
        }
        let scale = m.amax();
        let asym = (&m - m.transpose()).amax();
        if asym > 1e-12 * scale.max(f64::MIN_POSITIVE) {
            return Err(RidgeError::invalid(format!(
                "matrix is not symmetric (max |m - mᵗ| = {asym:e})"
            )));
        }
        Ok(Self::symmetrize(m))
    }

    fn symmetrize(m: DMatrix<f64>) -> Self {
        let inner = (&m + m.transpose()) * 0.5;
        SymMatrix { inner }
    }

    /// The Gram matrix `XᵗX` of a design matrix.
    pub fn gram(x: &DMatrix<f64>) -> Self {
        Self::symmetrize(x.transpose() * x)
    }

    pub fn from_diagonal(d: &[f64]) -> Self {
        SymMatrix {
            inner: DMatrix::from_diagonal(&DVector::from_column_slice(d)),
        }
    }

    pub fn identity(order: usize) -> Self {
        SymMatrix {
            inner: DMatrix::identity(order, order),
        }
    }

    pub fn order(&self) -> usize {
        self.inner.nrows()
    }

    pub fn as_matrix(&self) -> &DMatrix<f64> {
        &self.inner
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.inner
    }

    pub fn trace(&self) -> f64 {
        self.inner.trace()
    }
}

/// Eigenvectors (as columns of `gamma`) and eigenvalues of a symmetric
/// matrix, sorted by decreasing eigenvalue.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenSystem {
    pub gamma: DMatrix<f64>,
    pub lambda: DVector<f64>,
}

impl EigenSystem {
    pub fn order(&self) -> usize {
        self.lambda.len()
    }

    /// `Γ Λ Γᵗ`.
    pub fn reconstruct(&self) -> DMatrix<f64> {
        &self.gamma * DMatrix::from_diagonal(&self.lambda) * self.gamma.transpose()
    }

    /// `Γ diag(d) Γᵗ` for an arbitrary diagonal in the eigenbasis.
    pub fn conjugate_diagonal(&self, d: &[f64]) -> DMatrix<f64> {
        let mut scaled = self.gamma.clone();
        for (j, mut col) in scaled.column_iter_mut().enumerate() {
            col *= d[j];
        }
        scaled * self.gamma.transpose()
    }

    pub fn condition_number(&self) -> f64 {
        let max = self.lambda.max();
        let min = self.lambda.min();
        max / min
    }

    /// Indices (0-based) of eigenvalues at or below `tol · λ_max`.
    pub fn deficient_coordinates(&self, tol: f64) -> Vec<usize> {
        let max = self.lambda.max();
        self.lambda
            .iter()
            .enumerate()
            .filter(|(_, &l)| l <= tol * max)
            .map(|(j, _)| j)
            .collect()
    }

    pub fn is_full_rank(&self, tol: f64) -> bool {
        self.deficient_coordinates(tol).is_empty()
    }
}

/// Eigendecomposition of a positive semidefinite matrix such as `XᵗX`.
///
/// Eigenvalues below `-tol · ‖m‖_F` are reported as a rank-deficiency error;
/// smaller negative rounding noise is clamped to zero.
pub fn eigendecompose(m: &SymMatrix, tol: f64) -> Result<EigenSystem> {
    let mut sys = symmetric_eigen(m, tol)?;
    let fro = m.as_matrix().norm();
    for (j, l) in sys.lambda.iter_mut().enumerate() {
        if *l < -tol * fro {
            return Err(RidgeError::RankDeficient { index: j, value: *l });
        }
        if *l < 0.0 {
            *l = 0.0;
        }
    }
    Ok(sys)
}

/// Eigendecomposition of an arbitrary (possibly indefinite) symmetric matrix
/// by cyclic Jacobi rotations.
///
/// Eigenvalues are sorted in decreasing order; ties keep the original
/// diagonal order.
pub fn symmetric_eigen(m: &SymMatrix, tol: f64) -> Result<EigenSystem> {
    if !(tol > 0.0) {
        return Err(RidgeError::invalid("eigensolver tolerance must be positive"));
    }
    let n = m.order();
    let mut a = m.as_matrix().clone();
    let mut v = DMatrix::<f64>::identity(n, n);
    let threshold = tol * a.norm();

    let mut converged = false;
    let mut off = off_diagonal_norm(&a);
    for _ in 0..MAX_SWEEPS {
        if off <= threshold {
            converged = true;
            break;
        }
        for p in 0..n.saturating_sub(1) {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
        off = off_diagonal_norm(&a);
    }
    if !converged && off > threshold {
        return Err(RidgeError::NoConvergence {
            sweeps: MAX_SWEEPS,
            off_norm: off,
        });
    }

    let mut order: Vec<usize> = (0..n).collect();
    // stable sort keeps ties in original index order
    order.sort_by(|&i, &j| a[(j, j)].total_cmp(&a[(i, i)]));
    let lambda = DVector::from_iterator(n, order.iter().map(|&i| a[(i, i)]));
    let gamma = DMatrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    Ok(EigenSystem { gamma, lambda })
}

fn off_diagonal_norm(a: &DMatrix<f64>) -> f64 {
    let n = a.nrows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)] * a[(i, j)];
            }
        }
    }
    s.sqrt()
}

/// One Jacobi rotation annihilating `a[p, q]`; accumulates into `v`.
fn rotate(a: &mut DMatrix<f64>, v: &mut DMatrix<f64>, p: usize, q: usize) {
    let apq = a[(p, q)];
    if apq == 0.0 {
        return;
    }
    let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
    let t = if theta.abs() > 1e150 {
        0.5 / theta
    } else {
        let sign = if theta >= 0.0 { 1.0 } else { -1.0 };
        sign / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    let n = a.nrows();

    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = c * akp - s * akq;
        a[(k, q)] = s * akp + c * akq;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = c * apk - s * aqk;
        a[(q, k)] = s * apk + c * aqk;
    }
    a[(p, q)] = 0.0;
    a[(q, p)] = 0.0;
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = c * vkp - s * vkq;
        v[(k, q)] = s * vkp + c * vkq;
    }
}

/// Lower Cholesky factor; fails on the first non-positive pivot.
fn cholesky(m: &SymMatrix) -> Result<DMatrix<f64>> {
    let n = m.order();
    let a = m.as_matrix();
    let mut l = DMatrix::<f64>::zeros(n, n);
    for j in 0..n {
        let mut d = a[(j, j)];
        for k in 0..j {
            d -= l[(j, k)] * l[(j, k)];
        }
        if !(d > 0.0) || !d.is_finite() {
            return Err(RidgeError::Singular { row: j, pivot: d });
        }
        let djj = d.sqrt();
        l[(j, j)] = djj;
        for i in (j + 1)..n {
            let mut s = a[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)];
            }
            l[(i, j)] = s / djj;
        }
    }
    Ok(l)
}

fn cholesky_solve_in_place(l: &DMatrix<f64>, b: &mut DVector<f64>) {
    let n = l.nrows();
    for i in 0..n {
        let mut s = b[i];
        for k in 0..i {
            s -= l[(i, k)] * b[k];
        }
        b[i] = s / l[(i, i)];
    }
    for i in (0..n).rev() {
        let mut s = b[i];
        for k in (i + 1)..n {
            s -= l[(k, i)] * b[k];
        }
        b[i] = s / l[(i, i)];
    }
}

/// Solves `m · x = rhs` for symmetric positive definite `m`.
pub fn solve_spd(m: &SymMatrix, rhs: &DVector<f64>) -> Result<DVector<f64>> {
    if rhs.len() != m.order() {
        return Err(RidgeError::DimensionMismatch {
            what: "solve_spd right-hand side",
            expected: m.order(),
            found: rhs.len(),
        });
    }
    let l = cholesky(m)?;
    let mut x = rhs.clone();
    cholesky_solve_in_place(&l, &mut x);
    Ok(x)
}

/// Inverse of a symmetric positive definite matrix.
pub fn inverse_spd(m: &SymMatrix) -> Result<SymMatrix> {
    let n = m.order();
    let l = cholesky(m)?;
    let mut inv = DMatrix::<f64>::zeros(n, n);
    for j in 0..n {
        let mut e = DVector::<f64>::zeros(n);
        e[j] = 1.0;
        cholesky_solve_in_place(&l, &mut e);
        inv.set_column(j, &e);
    }
    Ok(SymMatrix::symmetrize(inv))
}

/// `vᵗ m v`.
pub fn quad_form(v: &DVector<f64>, m: &SymMatrix) -> Result<f64> {
    if v.len() != m.order() {
        return Err(RidgeError::DimensionMismatch {
            what: "quadratic form vector",
            expected: m.order(),
            found: v.len(),
        });
    }
    Ok(v.dot(&(m.as_matrix() * v)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_symmetric(rng: &mut ChaCha8Rng, n: usize) -> SymMatrix {
        let b = DMatrix::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0));
        SymMatrix::new(&b + b.transpose()).unwrap()
    }

    fn random_spd(rng: &mut ChaCha8Rng, n: usize) -> SymMatrix {
        let b = DMatrix::from_fn(n + 3, n, |_, _| rng.random_range(-1.0..1.0));
        let mut g = b.transpose() * b;
        for i in 0..n {
            g[(i, i)] += 0.5;
        }
        SymMatrix::new(g).unwrap()
    }

    /// Gaussian elimination with partial pivoting on an augmented copy.
    fn elimination_solve(m: &DMatrix<f64>, rhs: &DVector<f64>) -> DVector<f64> {
        let n = m.nrows();
        let mut a = m.clone();
        let mut b = rhs.clone();
        for col in 0..n {
            let piv = (col..n)
                .max_by(|&i, &j| a[(i, col)].abs().total_cmp(&a[(j, col)].abs()))
                .unwrap();
            a.swap_rows(col, piv);
            b.swap_rows(col, piv);
            for r in (col + 1)..n {
                let f = a[(r, col)] / a[(col, col)];
                for c in col..n {
                    a[(r, c)] -= f * a[(col, c)];
                }
                b[r] -= f * b[col];
            }
        }
        let mut x = DVector::zeros(n);
        for r in (0..n).rev() {
            let mut s = b[r];
            for c in (r + 1)..n {
                s -= a[(r, c)] * x[c];
            }
            x[r] = s / a[(r, r)];
        }
        x
    }

    #[test]
    fn identity_has_unit_spectrum() {
        let sys = eigendecompose(&SymMatrix::identity(3), DEFAULT_EIGEN_TOL).unwrap();
        assert_eq!(sys.lambda.as_slice(), &[1.0, 1.0, 1.0]);
        let g = &sys.gamma;
        assert!((g.transpose() * g - DMatrix::identity(3, 3)).amax() < 1e-14);
    }

    #[test]
    fn diagonal_input_is_sorted() {
        let sys = eigendecompose(&SymMatrix::from_diagonal(&[1.0, 4.0]), DEFAULT_EIGEN_TOL).unwrap();
        assert_eq!(sys.lambda.as_slice(), &[4.0, 1.0]);
        assert_eq!(sys.gamma[(1, 0)].abs(), 1.0);
        assert_eq!(sys.gamma[(0, 1)].abs(), 1.0);
    }

    #[test]
    fn ties_keep_index_order() {
        let sys = symmetric_eigen(&SymMatrix::from_diagonal(&[2.0, 5.0, 2.0]), 1e-12).unwrap();
        assert_eq!(sys.lambda.as_slice(), &[5.0, 2.0, 2.0]);
        assert_eq!(sys.gamma[(0, 1)], 1.0);
        assert_eq!(sys.gamma[(2, 2)], 1.0);
    }

    #[test]
    fn random_round_trip_and_orthogonality() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in 1..=8 {
            for _ in 0..10 {
                let m = random_symmetric(&mut rng, n);
                let sys = symmetric_eigen(&m, DEFAULT_EIGEN_TOL).unwrap();
                let scale = m.as_matrix().amax();
                assert!((sys.reconstruct() - m.as_matrix()).amax() <= 1e-8 * scale);
                let g = &sys.gamma;
                let eye = DMatrix::<f64>::identity(n, n);
                assert!((g.transpose() * g - &eye).amax() <= 1e-10);
                assert!((g * g.transpose() - &eye).amax() <= 1e-10);
                assert_relative_eq!(sys.lambda.sum(), m.trace(), epsilon = 1e-10 * scale.max(1.0));
                for j in 1..n {
                    assert!(sys.lambda[j - 1] >= sys.lambda[j]);
                }
            }
        }
    }

    #[test]
    fn ill_conditioned_gram_keeps_small_eigenvalues() {
        // eigenvalues spanning ~8 orders of magnitude
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let target = [5.0e5, 3.0e4, 900.0, 1.3, 0.017, 0.0065];
        let b = DMatrix::from_fn(6, 6, |_, _| rng.random_range(-1.0..1.0));
        let q = b.qr().q();
        let m = &q * DMatrix::from_diagonal(&DVector::from_column_slice(&target)) * q.transpose();
        let sys = eigendecompose(&SymMatrix::new((&m + m.transpose()) * 0.5).unwrap(), DEFAULT_EIGEN_TOL).unwrap();
        for (got, want) in sys.lambda.iter().zip(target) {
            assert_relative_eq!(*got, want, max_relative = 1e-6);
        }
    }

    #[test]
    fn negative_eigenvalue_is_rank_deficiency() {
        let m = SymMatrix::from_diagonal(&[3.0, -1.0]);
        assert!(matches!(
            eigendecompose(&m, DEFAULT_EIGEN_TOL),
            Err(RidgeError::RankDeficient { index: 1, .. })
        ));
        assert!(symmetric_eigen(&m, DEFAULT_EIGEN_TOL).is_ok());
    }

    #[test]
    fn asymmetric_input_rejected() {
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 0.0, 1.0]);
        assert!(SymMatrix::new(m).is_err());
    }

    #[test]
    fn solve_trivial_systems() {
        let b = DVector::from_column_slice(&[3.0, -1.0, 2.0]);
        assert_eq!(solve_spd(&SymMatrix::identity(3), &b).unwrap(), b);
        let x = solve_spd(&SymMatrix::from_diagonal(&[2.0, 4.0]), &DVector::from_column_slice(&[2.0, 8.0])).unwrap();
        assert_relative_eq!(x[0], 1.0);
        assert_relative_eq!(x[1], 2.0);
    }

    #[test]
    fn solve_matches_elimination_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let m = random_spd(&mut rng, 5);
            let rhs = DVector::from_fn(5, |_, _| rng.random_range(-2.0..2.0));
            let x = solve_spd(&m, &rhs).unwrap();
            let oracle = elimination_solve(m.as_matrix(), &rhs);
            assert!((&x - &oracle).amax() <= 1e-10);
            assert!((m.as_matrix() * &x - &rhs).norm() <= 1e-8 * rhs.norm());
        }
    }

    #[test]
    fn singular_system_reports_pivot() {
        let m = SymMatrix::new(DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 1.0, 1.0])).unwrap();
        let r = solve_spd(&m, &DVector::from_column_slice(&[1.0, 1.0]));
        assert!(matches!(r, Err(RidgeError::Singular { row: 1, .. })));
    }

    #[test]
    fn inverse_times_matrix_is_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let m = random_spd(&mut rng, 4);
        let inv = inverse_spd(&m).unwrap();
        assert!((inv.as_matrix() * m.as_matrix() - DMatrix::<f64>::identity(4, 4)).amax() < 1e-10);
    }

    #[test]
    fn quadratic_forms() {
        let m = SymMatrix::from_diagonal(&[3.0, 5.0]);
        assert_eq!(quad_form(&DVector::from_column_slice(&[1.0, 0.0]), &m).unwrap(), 3.0);
        assert_eq!(quad_form(&DVector::from_column_slice(&[1.0, 1.0]), &m).unwrap(), 8.0);
        assert!(quad_form(&DVector::from_column_slice(&[1.0]), &m).is_err());
    }

    #[test]
    fn quadratic_form_matches_eigen_expansion() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..20 {
            let m = random_symmetric(&mut rng, 6);
            let v = DVector::from_fn(6, |_, _| rng.random_range(-1.0..1.0));
            let sys = symmetric_eigen(&m, DEFAULT_EIGEN_TOL).unwrap();
            let b = sys.gamma.transpose() * &v;
            let expansion: f64 = sys.lambda.iter().zip(b.iter()).map(|(l, bj)| l * bj * bj).sum();
            assert!((quad_form(&v, &m).unwrap() - expansion).abs() <= 1e-10);
        }
    }
}
