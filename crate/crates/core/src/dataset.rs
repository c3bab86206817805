//! Response/design data, affine transforms and the OLS baseline.

use std::collections::HashSet;
use std::path::Path;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Result, RidgeError};
use crate::linalg::{solve_spd, SymMatrix};

pub const INTERCEPT_NAME: &str = "(Intercept)";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TransformMode {
    Raw,
    CenterY,
    StandardizeAll,
    /// `y ↦ (y − a)/b` with caller-chosen origin and scale.
    AffineY,
}

/// Affine provenance of the stored data: `raw = origin + scale · stored`,
/// for the response and for every design column.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransformSpec {
    pub mode: TransformMode,
    pub y_origin: f64,
    pub y_scale: f64,
    pub x_origin: Vec<f64>,
    pub x_scale: Vec<f64>,
}

impl TransformSpec {
    pub fn identity(p: usize) -> Self {
        TransformSpec {
            mode: TransformMode::Raw,
            y_origin: 0.0,
            y_scale: 1.0,
            x_origin: vec![0.0; p],
            x_scale: vec![1.0; p],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    y: DVector<f64>,
    x: DMatrix<f64>,
    column_names: Vec<String>,
    response_name: String,
    transform: TransformSpec,
}

impl Dataset {
    /// Validates `n > p ≥ 1`, finiteness and unique column names.
    pub fn new(y: DVector<f64>, x: DMatrix<f64>, column_names: Vec<String>) -> Result<Self> {
        let n = y.len();
        let p = x.ncols();
        if x.nrows() != n {
            return Err(RidgeError::DimensionMismatch {
                what: "design rows",
                expected: n,
                found: x.nrows(),
            });
        }
        if column_names.len() != p {
            return Err(RidgeError::DimensionMismatch {
                what: "column names",
                expected: p,
                found: column_names.len(),
            });
        }
        if p == 0 {
            return Err(RidgeError::Data("design has no regressors".into()));
        }
        if n <= p {
            return Err(RidgeError::Data(format!(
                "need more observations than regressors (n = {n}, p = {p})"
            )));
        }
        if let Some(i) = y.iter().position(|v| !v.is_finite()) {
            return Err(RidgeError::Data(format!("non-finite response at row {}", i + 1)));
        }
        if let Some(i) = x.iter().position(|v| !v.is_finite()) {
            return Err(RidgeError::Data(format!(
                "non-finite design value at row {}, column {}",
                i % n + 1,
                i / n + 1
            )));
        }
        let mut seen = HashSet::new();
        for name in &column_names {
            if !seen.insert(name.as_str()) {
                return Err(RidgeError::Data(format!("duplicate column name {name:?}")));
            }
        }
        Ok(Dataset {
            y,
            x,
            column_names,
            response_name: "y".into(),
            transform: TransformSpec::identity(p),
        })
    }

    /// Builds a dataset with generated names `x1..xp`.
    pub fn from_parts(y: DVector<f64>, x: DMatrix<f64>) -> Result<Self> {
        let names = (1..=x.ncols()).map(|j| format!("x{j}")).collect();
        Self::new(y, x, names)
    }

    pub fn with_response_name(mut self, name: impl Into<String>) -> Self {
        self.response_name = name.into();
        self
    }

    /// Rebuilds from resampled rows without re-validating names.
    pub(crate) fn resampled(&self, rows: &[usize]) -> Dataset {
        let n = rows.len();
        let p = self.p();
        let y = DVector::from_iterator(n, rows.iter().map(|&r| self.y[r]));
        let x = DMatrix::from_fn(n, p, |i, j| self.x[(rows[i], j)]);
        Dataset {
            y,
            x,
            column_names: self.column_names.clone(),
            response_name: self.response_name.clone(),
            transform: self.transform.clone(),
        }
    }

    pub fn n(&self) -> usize {
        self.y.len()
    }

    pub fn p(&self) -> usize {
        self.x.ncols()
    }

    pub fn y(&self) -> &DVector<f64> {
        &self.y
    }

    pub fn x(&self) -> &DMatrix<f64> {
        &self.x
    }

    pub fn column_names(&self) -> &[String] {
        &self.column_names
    }

    pub fn response_name(&self) -> &str {
        &self.response_name
    }

    pub fn transform(&self) -> &TransformSpec {
        &self.transform
    }

    pub fn gram(&self) -> SymMatrix {
        SymMatrix::gram(&self.x)
    }

    /// `XᵗY`.
    pub fn cross(&self) -> DVector<f64> {
        self.x.transpose() * &self.y
    }

    /// `YᵗY`, the total sum of squares of the stored response.
    pub fn tss(&self) -> f64 {
        self.y.norm_squared()
    }

    pub fn y_mean(&self) -> f64 {
        self.y.mean()
    }

    /// Index of a column that is identically one, if any.
    pub fn intercept_column(&self) -> Option<usize> {
        (0..self.p()).find(|&j| self.x.column(j).iter().all(|&v| v == 1.0))
    }

    /// Prepends a column of ones unless one is already present.
    pub fn with_intercept(self) -> Result<Self> {
        if self.intercept_column().is_some() {
            return Ok(self);
        }
        let n = self.n();
        let x = self.x.clone().insert_column(0, 1.0);
        let mut names = Vec::with_capacity(self.p() + 1);
        names.push(INTERCEPT_NAME.to_string());
        names.extend(self.column_names.iter().cloned());
        debug_assert_eq!(x.nrows(), n);
        let mut transform = self.transform.clone();
        transform.x_origin.insert(0, 0.0);
        transform.x_scale.insert(0, 1.0);
        let mut d = Dataset::new(self.y, x, names)?;
        d.response_name = self.response_name;
        d.transform = transform;
        Ok(d)
    }
}

/// Which CSV column holds the response.
#[derive(Debug, Clone, PartialEq)]
pub enum ResponseColumn {
    /// 0-based index.
    Index(usize),
    Name(String),
}

#[derive(Debug, Clone)]
pub struct CsvOptions {
    pub header: bool,
    pub delimiter: u8,
    pub response: ResponseColumn,
}

impl Default for CsvOptions {
    fn default() -> Self {
        CsvOptions {
            header: true,
            delimiter: b',',
            response: ResponseColumn::Index(0),
        }
    }
}

/// Reads a rectangular numeric table. Row and column numbers in errors are
/// 1-based and count the header line.
pub fn load_csv(path: impl AsRef<Path>, options: &CsvOptions) -> Result<Dataset> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|e| {
        RidgeError::Data(format!("cannot open {}: {e}", path.display()))
    })?;
    read_csv(file, options)
}

pub fn read_csv<R: std::io::Read>(reader: R, options: &CsvOptions) -> Result<Dataset> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .delimiter(options.delimiter)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);

    let mut header: Option<Vec<String>> = None;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut width: Option<usize> = None;
    for (line, record) in rdr.records().enumerate() {
        let row_no = line + 1;
        let record = record.map_err(|e| RidgeError::Data(format!("line {row_no}: {e}")))?;
        if record.iter().all(|f| f.is_empty()) {
            continue;
        }
        match width {
            None => width = Some(record.len()),
            Some(w) if w != record.len() => {
                return Err(RidgeError::Data(format!(
                    "ragged row {row_no}: expected {w} fields, found {}",
                    record.len()
                )))
            }
            _ => {}
        }
        if options.header && header.is_none() {
            header = Some(record.iter().map(str::to_string).collect());
            continue;
        }
        let mut values = Vec::with_capacity(record.len());
        for (col, field) in record.iter().enumerate() {
            let v: f64 = field.parse().map_err(|_| RidgeError::Parse {
                row: row_no,
                column: col + 1,
                message: format!("not a number: {field:?}"),
            })?;
            values.push(v);
        }
        rows.push(values);
    }

    let width = width.ok_or_else(|| RidgeError::Data("empty table".into()))?;
    if width < 2 {
        return Err(RidgeError::Data("need a response column and at least one regressor".into()));
    }
    let names: Vec<String> = header.unwrap_or_else(|| (1..=width).map(|j| format!("v{j}")).collect());
    let response = match &options.response {
        ResponseColumn::Index(i) if *i < width => *i,
        ResponseColumn::Index(i) => {
            return Err(RidgeError::Data(format!(
                "response column {} out of range (table has {width} columns)",
                i + 1
            )))
        }
        ResponseColumn::Name(name) => names
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| RidgeError::Data(format!("no column named {name:?}")))?,
    };

    let n = rows.len();
    let regressors: Vec<usize> = (0..width).filter(|&j| j != response).collect();
    let y = DVector::from_iterator(n, rows.iter().map(|r| r[response]));
    let x = DMatrix::from_fn(n, regressors.len(), |i, j| rows[i][regressors[j]]);
    let column_names = regressors.iter().map(|&j| names[j].clone()).collect();
    Ok(Dataset::new(y, x, column_names)?.with_response_name(names[response].clone()))
}

/// Writes the stored values with the response first, in the layout
/// [`load_csv`] reads by default.
pub fn write_csv(d: &Dataset, path: impl AsRef<Path>) -> Result<()> {
    let mut w = csv::Writer::from_path(path.as_ref()).map_err(|e| RidgeError::Data(e.to_string()))?;
    let header = std::iter::once(d.response_name()).chain(d.column_names().iter().map(String::as_str));
    w.write_record(header).map_err(|e| RidgeError::Data(e.to_string()))?;
    for i in 0..d.n() {
        let xs = d.x().row(i);
        let row = std::iter::once(d.y()[i]).chain(xs.iter().copied()).map(|v| format!("{v:e}"));
        w.write_record(row).map_err(|e| RidgeError::Data(e.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

/// Applies a transform to the currently stored values and composes the
/// provenance metadata, so applying `CenterY` twice is a no-op.
pub fn apply_transform(d: &Dataset, mode: TransformMode) -> Result<Dataset> {
    match mode {
        TransformMode::Raw => invert_transform(d),
        TransformMode::CenterY => Ok(affine_y(d, d.y_mean(), 1.0, TransformMode::CenterY)),
        TransformMode::AffineY => Err(RidgeError::invalid(
            "AffineY needs explicit origin and scale; use transform_y",
        )),
        TransformMode::StandardizeAll => {
            let (y_mean, y_norm) = centered_norm(d.y.iter().copied());
            if y_norm == 0.0 {
                return Err(RidgeError::Data("response has zero variance".into()));
            }
            let mut out = affine_y(d, y_mean, y_norm, TransformMode::StandardizeAll);
            for j in 0..d.p() {
                let (mean, norm) = centered_norm(d.x.column(j).iter().copied());
                if norm == 0.0 {
                    return Err(RidgeError::Data(format!(
                        "column {:?} has zero variance and cannot be standardized",
                        d.column_names[j]
                    )));
                }
                for v in out.x.column_mut(j).iter_mut() {
                    *v = (*v - mean) / norm;
                }
                let t = &mut out.transform;
                t.x_origin[j] += t.x_scale[j] * mean;
                t.x_scale[j] *= norm;
            }
            Ok(out)
        }
    }
}

/// `y ↦ (y − a)/b` on the stored response.
pub fn transform_y(d: &Dataset, a: f64, b: f64) -> Result<Dataset> {
    if b == 0.0 || !b.is_finite() || !a.is_finite() {
        return Err(RidgeError::invalid(format!("invalid affine map (a = {a}, b = {b})")));
    }
    Ok(affine_y(d, a, b, TransformMode::AffineY))
}

fn affine_y(d: &Dataset, a: f64, b: f64, mode: TransformMode) -> Dataset {
    let mut out = d.clone();
    out.y.iter_mut().for_each(|v| *v = (*v - a) / b);
    let t = &mut out.transform;
    t.y_origin += t.y_scale * a;
    t.y_scale *= b;
    t.mode = mode;
    out
}

fn centered_norm(values: impl Iterator<Item = f64> + Clone) -> (f64, f64) {
    let (sum, count) = values.clone().fold((0.0, 0usize), |(s, c), v| (s + v, c + 1));
    let mean = sum / count as f64;
    let ss: f64 = values.map(|v| (v - mean) * (v - mean)).sum();
    (mean, ss.sqrt())
}

/// Maps the stored values back to the raw scale.
pub fn invert_transform(d: &Dataset) -> Result<Dataset> {
    let mut out = d.clone();
    let t = d.transform.clone();
    out.y.iter_mut().for_each(|v| *v = t.y_origin + t.y_scale * *v);
    for j in 0..d.p() {
        for v in out.x.column_mut(j).iter_mut() {
            *v = t.x_origin[j] + t.x_scale[j] * *v;
        }
    }
    out.transform = TransformSpec::identity(d.p());
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct OlsFit {
    pub beta_hat: DVector<f64>,
    pub fitted: DVector<f64>,
    pub residuals: DVector<f64>,
    /// `eᵗe / (n − p)`.
    pub sigma2_hat: f64,
}

impl OlsFit {
    pub fn rss(&self) -> f64 {
        self.residuals.norm_squared()
    }
}

/// Ordinary least squares through the normal equations.
pub fn ols_fit(d: &Dataset) -> Result<OlsFit> {
    let beta_hat = solve_spd(&d.gram(), &d.cross())?;
    let fitted = &d.x * &beta_hat;
    let residuals = &d.y - &fitted;
    let sigma2_hat = residuals.norm_squared() / (d.n() - d.p()) as f64;
    Ok(OlsFit {
        beta_hat,
        fitted,
        residuals,
        sigma2_hat,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn toy() -> Dataset {
        read_csv("y,x\n1,2\n2,3\n3,5\n".as_bytes(), &CsvOptions::default()).unwrap()
    }

    #[test]
    fn csv_write_read_is_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let y = DVector::from_fn(7, |_, _| rng.random::<f64>() * 1e3);
        let x = DMatrix::from_fn(7, 2, |_, _| rng.random::<f64>() - 0.5);
        let d = Dataset::from_parts(y, x).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("d.csv");
        write_csv(&d, &path).unwrap();
        let back = load_csv(&path, &CsvOptions::default()).unwrap();
        assert_eq!(back.y(), d.y());
        assert_eq!(back.x(), d.x());
        assert_eq!(back.column_names(), d.column_names());
    }

    #[test]
    fn loads_toy_table() {
        let d = toy();
        assert_eq!((d.n(), d.p()), (3, 1));
        assert_eq!(d.column_names(), &["x".to_string()]);
        assert_eq!(d.response_name(), "y");
        assert_eq!(d.y().as_slice(), &[1.0, 2.0, 3.0]);
    }

    #[test]
    fn response_by_name_and_no_header() {
        let opts = CsvOptions {
            response: ResponseColumn::Name("y".into()),
            ..Default::default()
        };
        let d = read_csv("a,y\n1,10\n2,20\n4,30\n".as_bytes(), &opts).unwrap();
        assert_eq!(d.y().as_slice(), &[10.0, 20.0, 30.0]);
        let opts = CsvOptions {
            header: false,
            delimiter: b';',
            response: ResponseColumn::Index(1),
        };
        let d = read_csv("1;10\n2;20\n4;30\n".as_bytes(), &opts).unwrap();
        assert_eq!(d.x().column(0).as_slice(), &[1.0, 2.0, 4.0]);
    }

    #[test]
    fn letter_in_cell_names_location() {
        let err = read_csv("y,x\n1,2\n2,b\n3,4\n".as_bytes(), &CsvOptions::default()).unwrap_err();
        match err {
            RidgeError::Parse { row, column, .. } => assert_eq!((row, column), (3, 2)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn ragged_and_short_tables_rejected() {
        assert!(matches!(
            read_csv("y,x\n1,2\n2\n3,4\n".as_bytes(), &CsvOptions::default()),
            Err(RidgeError::Data(_))
        ));
        // n <= p
        assert!(read_csv("y,a,b\n1,2,3\n2,3,4\n".as_bytes(), &CsvOptions::default()).is_err());
        assert!(load_csv("/nonexistent/file.csv", &CsvOptions::default()).is_err());
    }

    #[test]
    fn duplicate_names_rejected() {
        let r = Dataset::new(
            DVector::from_column_slice(&[1.0, 2.0, 3.0]),
            DMatrix::from_row_slice(3, 2, &[1.0, 0.0, 0.0, 1.0, 1.0, 1.0]),
            vec!["a".into(), "a".into()],
        );
        assert!(r.is_err());
    }

    #[test]
    fn center_y_is_idempotent() {
        let d = apply_transform(&toy(), TransformMode::CenterY).unwrap();
        assert_eq!(d.y().as_slice(), &[-1.0, 0.0, 1.0]);
        let twice = apply_transform(&d, TransformMode::CenterY).unwrap();
        assert_eq!(twice.y(), d.y());
        assert_eq!(twice.transform().y_origin, 2.0);
    }

    #[test]
    fn standardize_gives_correlation_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let x = DMatrix::from_fn(20, 3, |_, _| rng.random_range(-5.0..5.0));
        let y = DVector::from_fn(20, |_, _| rng.random_range(0.0..10.0));
        let d = Dataset::from_parts(y, x).unwrap();
        let s = apply_transform(&d, TransformMode::StandardizeAll).unwrap();
        assert_relative_eq!(s.tss(), 1.0, epsilon = 1e-12);
        let g = s.gram();
        for j in 0..3 {
            assert_relative_eq!(g.as_matrix()[(j, j)], 1.0, epsilon = 1e-12);
            assert!(s.x().column(j).sum().abs() < 1e-12);
        }
    }

    #[test]
    fn standardize_rejects_constant_column() {
        let d = Dataset::from_parts(
            DVector::from_column_slice(&[1.0, 2.0, 4.0]),
            DMatrix::from_element(3, 1, 1.0),
        )
        .unwrap();
        assert!(apply_transform(&d, TransformMode::StandardizeAll).is_err());
    }

    #[test]
    fn transforms_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let x = DMatrix::from_fn(15, 4, |_, _| rng.random_range(-3.0..8.0));
        let y = DVector::from_fn(15, |_, _| rng.random_range(-1.0..4.0));
        let d = Dataset::from_parts(y, x).unwrap();
        for mode in [TransformMode::CenterY, TransformMode::StandardizeAll] {
            let t = apply_transform(&d, mode).unwrap();
            let back = invert_transform(&t).unwrap();
            assert!((back.y() - d.y()).amax() < 1e-10);
            assert!((back.x() - d.x()).amax() < 1e-10);
        }
        let t = transform_y(&d, 1.5, -2.0).unwrap();
        let back = invert_transform(&t).unwrap();
        assert!((back.y() - d.y()).amax() < 1e-10);
        assert!(transform_y(&d, 0.0, 0.0).is_err());
    }

    #[test]
    fn intercept_is_prepended_once() {
        let d = toy().with_intercept().unwrap();
        assert_eq!(d.p(), 2);
        assert_eq!(d.column_names()[0], INTERCEPT_NAME);
        assert_eq!(d.intercept_column(), Some(0));
        assert_eq!(d.clone().with_intercept().unwrap().p(), 2);
    }

    #[test]
    fn exact_line_through_origin() {
        let d = Dataset::from_parts(
            DVector::from_column_slice(&[2.0, 4.0, 6.0, 8.0]),
            DMatrix::from_column_slice(4, 1, &[1.0, 2.0, 3.0, 4.0]),
        )
        .unwrap();
        let fit = ols_fit(&d).unwrap();
        assert_relative_eq!(fit.beta_hat[0], 2.0, epsilon = 1e-14);
        assert!(fit.sigma2_hat.abs() < 1e-28);
    }

    #[test]
    fn residuals_orthogonal_to_design() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..20 {
            let n = rng.random_range(8..40);
            let p = rng.random_range(1..6);
            let x = DMatrix::from_fn(n, p, |_, _| rng.random_range(-1.0..1.0));
            let y = DVector::from_fn(n, |_, _| rng.random_range(-1.0..1.0));
            let d = Dataset::from_parts(y, x).unwrap();
            let fit = ols_fit(&d).unwrap();
            let xte = d.x().transpose() * &fit.residuals;
            assert!(xte.norm() <= 1e-8 * d.cross().norm().max(1e-300));
            assert_relative_eq!(fit.sigma2_hat, fit.rss() / (n - p) as f64);
        }
    }

    #[test]
    fn singular_design_fails() {
        let d = Dataset::from_parts(
            DVector::from_column_slice(&[1.0, 2.0, 3.0, 4.0]),
            DMatrix::from_row_slice(4, 2, &[1.0, 2.0, 2.0, 4.0, 3.0, 6.0, 4.0, 8.0]),
        )
        .unwrap();
        assert!(matches!(ols_fit(&d), Err(RidgeError::Singular { .. })));
    }
}
