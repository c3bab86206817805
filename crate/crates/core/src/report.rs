//! Run reports rendered as JSON or aligned text with identical numbers.

use std::fmt::{self, Write as _};

use serde::{Serialize, Serializer};

pub const SIGNIFICANT_DIGITS: usize = 10;

/// A number rounded to ten significant digits at construction, so every
/// rendering shows the same value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Num(f64);

impl Num {
    pub fn new(v: f64) -> Self {
        Num(round_sig(v, SIGNIFICANT_DIGITS))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl From<f64> for Num {
    fn from(v: f64) -> Self {
        Num::new(v)
    }
}

pub fn round_sig(v: f64, digits: usize) -> f64 {
    if v == 0.0 || !v.is_finite() {
        return v;
    }
    let s = format!("{:.*e}", digits - 1, v);
    s.parse().unwrap_or(v)
}

impl fmt::Display for Num {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = self.0;
        let a = v.abs();
        if a != 0.0 && !(1e-4..1e10).contains(&a) {
            write!(f, "{v:e}")
        } else {
            write!(f, "{v}")
        }
    }
}

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.0.is_finite() {
            s.serialize_f64(self.0)
        } else {
            s.serialize_none()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Cell {
    Num(Num),
    Int(u64),
    Bool(bool),
    Text(String),
    Empty(()),
}

impl Cell {
    pub fn num(v: f64) -> Self {
        Cell::Num(Num::new(v))
    }

    pub fn text(s: impl Into<String>) -> Self {
        Cell::Text(s.into())
    }

    pub fn opt(v: Option<f64>) -> Self {
        v.map_or(Cell::Empty(()), Cell::num)
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Num(n) => n.fmt(f),
            Cell::Int(i) => i.fmt(f),
            Cell::Bool(b) => f.write_str(if *b { "TRUE" } else { "FALSE" }),
            Cell::Text(s) => f.write_str(s),
            Cell::Empty(()) => f.write_str("-"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Scalar {
    pub name: String,
    pub value: Cell,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table {
    pub title: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(title: impl Into<String>, columns: &[&str]) -> Self {
        Table {
            title: title.into(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DatasetSummary {
    pub source: String,
    pub response: String,
    pub n: u64,
    pub p: u64,
    pub transform: String,
    pub intercept_added: bool,
    pub sigma2_hat: Num,
    pub sigma2_used: Num,
    pub condition_number: Num,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpecSummary {
    pub label: String,
    pub k: Vec<Num>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub tool: String,
    pub version: String,
    pub command: Vec<String>,
    pub dataset: Option<DatasetSummary>,
    pub spec: Option<SpecSummary>,
    pub scalars: Vec<Scalar>,
    pub tables: Vec<Table>,
    pub files: Vec<String>,
    pub warnings: Vec<String>,
    pub seed: Option<u64>,
    pub timing_ms: Option<Num>,
}

impl RunReport {
    pub fn new(command: Vec<String>) -> Self {
        RunReport {
            tool: env!("CARGO_PKG_NAME").into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command,
            dataset: None,
            spec: None,
            scalars: Vec::new(),
            tables: Vec::new(),
            files: Vec::new(),
            warnings: Vec::new(),
            seed: None,
            timing_ms: None,
        }
    }

    pub fn scalar(&mut self, name: impl Into<String>, value: Cell) {
        self.scalars.push(Scalar {
            name: name.into(),
            value,
        });
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} {}  {}", self.tool, self.version, self.command.join(" "));
        if let Some(d) = &self.dataset {
            let _ = writeln!(out, "\ndata: {} (response {})", d.source, d.response);
            let rows = [
                ("n", d.n.to_string()),
                ("p", d.p.to_string()),
                ("transform", d.transform.clone()),
                ("intercept added", Cell::Bool(d.intercept_added).to_string()),
                ("sigma2_hat", d.sigma2_hat.to_string()),
                ("sigma2 used", d.sigma2_used.to_string()),
                ("condition number", d.condition_number.to_string()),
            ];
            write_pairs(&mut out, rows.iter().map(|(a, b)| (a.to_string(), b.clone())));
        }
        if let Some(s) = &self.spec {
            let ks: Vec<String> = s.k.iter().map(Num::to_string).collect();
            let _ = writeln!(out, "\nspec: {}\nk: {}", s.label, ks.join(" "));
        }
        if !self.scalars.is_empty() {
            out.push('\n');
            write_pairs(&mut out, self.scalars.iter().map(|s| (s.name.clone(), s.value.to_string())));
        }
        for t in &self.tables {
            let _ = writeln!(out, "\n{}", t.title);
            write_table(&mut out, t);
        }
        if !self.files.is_empty() {
            let _ = writeln!(out, "\nwrote:");
            for f in &self.files {
                let _ = writeln!(out, "  {f}");
            }
        }
        for w in &self.warnings {
            let _ = writeln!(out, "warning: {w}");
        }
        if let Some(seed) = self.seed {
            let _ = writeln!(out, "seed: {seed}");
        }
        if let Some(t) = self.timing_ms {
            let _ = writeln!(out, "elapsed ms: {t}");
        }
        out
    }
}

fn write_pairs(out: &mut String, pairs: impl Iterator<Item = (String, String)>) {
    let pairs: Vec<_> = pairs.collect();
    let width = pairs.iter().map(|(a, _)| a.chars().count()).max().unwrap_or(0);
    for (a, b) in pairs {
        let _ = writeln!(out, "  {a:<width$}  {b}");
    }
}

fn write_table(out: &mut String, t: &Table) {
    let cells: Vec<Vec<String>> = t.rows.iter().map(|r| r.iter().map(Cell::to_string).collect()).collect();
    let widths: Vec<usize> = (0..t.columns.len())
        .map(|j| {
            cells
                .iter()
                .map(|r| r[j].chars().count())
                .chain([t.columns[j].chars().count()])
                .max()
                .unwrap_or(0)
        })
        .collect();
    let line = |vals: &[String]| -> String {
        let parts: Vec<String> = vals
            .iter()
            .zip(&widths)
            .enumerate()
            .map(|(j, (v, w))| if j == 0 { format!("{v:<w$}") } else { format!("{v:>w$}") })
            .collect();
        format!("  {}", parts.join("  ").trim_end())
    };
    let _ = writeln!(out, "{}", line(&t.columns));
    for r in &cells {
        let _ = writeln!(out, "{}", line(r));
    }
}
