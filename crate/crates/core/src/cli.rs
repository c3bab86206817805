//! Command-line front end: `fit`, `trace`, `select`, `bootstrap`, `compare`.

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use nalgebra::DVector;

use crate::analysis::GeneralizedRidge;
use crate::bootstrap::{bootstrap, BootstrapConfig, Execution, DEFAULT_REPLICATES};
use crate::comparison::{dominance_condition, standard_comparisons, Candidates, DominanceVerdict, Truth, Verdict};
use crate::dataset::{apply_transform, load_csv, CsvOptions, ResponseColumn, TransformMode};
use crate::error::{Result, RidgeError};
use crate::gof::gof_limit_single;
use crate::report::{Cell, DatasetSummary, Num, RunReport, SpecSummary, Table};
use crate::ridge::{norm_single_limit, Coord, ShrinkageSpec};
use crate::risk::{mse_ols, mse_single_limit, trace, Grid, TraceMode, TraceSeries};
use crate::selection::{Diagnostics, SearchMode, SelectionResult};
use crate::svg::{LineChart, Marker, Series};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;
pub const EXIT_DATA: i32 = 4;

/// Points kept per SVG series; longer traces are thinned evenly.
const SVG_MAX_POINTS: usize = 2000;

#[derive(Parser, Debug)]
#[command(name = "ridgeforge", version, about = "Generalized ridge regression toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Fit one shrinkage specification and report coefficients, MSE and GoF.
    Fit(FitArgs),
    /// Write ridge traces (coefficients, norm, MSE, GoF) as CSV and optional SVG.
    Trace(TraceArgs),
    /// Apply a shrinkage selection rule.
    Select(SelectArgs),
    /// Percentile-bootstrap intervals under a fixed specification.
    Bootstrap(BootstrapArgs),
    /// Check dominance of one estimator over another.
    Compare(CompareArgs),
}

#[derive(Args, Debug)]
struct DataArgs {
    /// CSV file with a header row unless --no-header is given.
    #[arg(long)]
    data: PathBuf,
    /// Subtract the response mean (default).
    #[arg(long, group = "transform")]
    center_y: bool,
    /// Center and scale every column to unit length; no intercept is added.
    #[arg(long, group = "transform")]
    standardize: bool,
    /// Use the data as read.
    #[arg(long, group = "transform")]
    raw: bool,
    /// Response column, as a 1-based index or a header name.
    #[arg(long, default_value = "1")]
    response: String,
    #[arg(long)]
    no_header: bool,
    #[arg(long, default_value_t = ',')]
    delimiter: char,
    /// Do not prepend a column of ones when the design lacks one.
    #[arg(long)]
    no_intercept: bool,
    /// Noise variance for risk formulas instead of the OLS estimate.
    #[arg(long)]
    sigma2: Option<f64>,
}

#[derive(Args, Debug)]
struct OutputArgs {
    #[arg(long, conflicts_with = "text")]
    json: bool,
    /// Aligned text output (default).
    #[arg(long)]
    text: bool,
    /// Include elapsed time in the report.
    #[arg(long)]
    timing: bool,
}

#[derive(Args, Debug)]
struct FitArgs {
    #[command(flatten)]
    data: DataArgs,
    #[arg(long, default_value = "zero")]
    spec: SpecToken,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args, Debug)]
struct TraceArgs {
    #[command(flatten)]
    data: DataArgs,
    /// `uniform` or `single:L`.
    #[arg(long, default_value = "uniform")]
    mode: ModeToken,
    /// `START:STOP:STEP`.
    #[arg(long, default_value = "0:1:0.00001")]
    grid: String,
    /// Output prefix for `PREFIX_{coefficients,norm,mse,gof}.csv`.
    #[arg(long)]
    out: PathBuf,
    /// Also write SVG charts next to the CSV files.
    #[arg(long)]
    svg: bool,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct SelectArgs {
    #[command(flatten)]
    data: DataArgs,
    /// `hkb`, `hk`, `gridmin`, `percoord`, `singlemin:L`, `bestsingle` or `table1`.
    #[arg(long)]
    rule: RuleToken,
    /// Grid for `gridmin`, as `START:STOP:STEP`.
    #[arg(long, default_value = "0:1:0.00001")]
    grid: String,
    /// Scan the whole grid instead of stopping at the first rise.
    #[arg(long)]
    exhaustive: bool,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args, Debug)]
struct BootstrapArgs {
    #[command(flatten)]
    data: DataArgs,
    #[arg(long, default_value = "zero")]
    spec: SpecToken,
    /// Number of replicates.
    #[arg(long, default_value_t = DEFAULT_REPLICATES)]
    m: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 0.95)]
    level: f64,
    /// Worker threads (defaults to RIDGEFORGE_THREADS, then all cores).
    #[arg(long)]
    threads: Option<usize>,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args, Debug)]
struct CompareArgs {
    #[command(flatten)]
    data: DataArgs,
    #[arg(long, required_unless_present = "all")]
    challenger: Option<SpecToken>,
    #[arg(long, required_unless_present = "all")]
    incumbent: Option<SpecToken>,
    /// Run the standard set of comparisons between selected estimators.
    #[arg(long)]
    all: bool,
    /// True coefficients (comma separated) for the bias condition.
    #[arg(long, requires = "true_sigma2")]
    true_beta: Option<String>,
    #[arg(long, requires = "true_beta")]
    true_sigma2: Option<f64>,
    #[command(flatten)]
    out: OutputArgs,
}

/// Shrinkage specification as written on the command line; coordinates are
/// 1-based.
#[derive(Debug, Clone, PartialEq)]
pub enum SpecToken {
    Zero,
    Uniform(f64),
    Single(usize, f64),
    PerCoord,
    File(PathBuf),
    Hkb,
    Hk,
    Kmin,
    SingleMin(usize),
    BestSingle,
}

fn parse_num<T: FromStr>(s: &str, what: &str) -> std::result::Result<T, String> {
    s.trim().parse().map_err(|_| format!("invalid {what}: {s:?}"))
}

impl FromStr for SpecToken {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        match parts.as_slice() {
            ["zero"] => Ok(SpecToken::Zero),
            ["percoord"] => Ok(SpecToken::PerCoord),
            ["hkb"] => Ok(SpecToken::Hkb),
            ["hk"] => Ok(SpecToken::Hk),
            ["kmin"] => Ok(SpecToken::Kmin),
            ["bestsingle"] => Ok(SpecToken::BestSingle),
            ["uniform", k] => Ok(SpecToken::Uniform(parse_num(k, "k")?)),
            ["single", l, k] => Ok(SpecToken::Single(parse_num(l, "coordinate")?, parse_num(k, "k")?)),
            ["singlemin", l] => Ok(SpecToken::SingleMin(parse_num(l, "coordinate")?)),
            ["file", ..] => Ok(SpecToken::File(PathBuf::from(&s["file:".len()..]))),
            _ => Err(format!(
                "unknown spec {s:?}; expected zero, uniform:K, single:L:K, percoord, file:PATH, hkb, hk, kmin, singlemin:L or bestsingle"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum ModeToken {
    Uniform,
    Single(usize),
}

impl FromStr for ModeToken {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.split(':').collect::<Vec<_>>().as_slice() {
            ["uniform"] => Ok(ModeToken::Uniform),
            ["single", l] => Ok(ModeToken::Single(parse_num(l, "coordinate")?)),
            _ => Err(format!("mode must be uniform or single:L, got {s:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum RuleToken {
    Hkb,
    Hk,
    GridMin,
    PerCoord,
    SingleMin(usize),
    BestSingle,
    Table1,
}

impl FromStr for RuleToken {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.split(':').collect::<Vec<_>>().as_slice() {
            ["hkb"] => Ok(RuleToken::Hkb),
            ["hk"] => Ok(RuleToken::Hk),
            ["gridmin"] => Ok(RuleToken::GridMin),
            ["percoord"] => Ok(RuleToken::PerCoord),
            ["bestsingle"] => Ok(RuleToken::BestSingle),
            ["table1"] => Ok(RuleToken::Table1),
            ["singlemin", l] => Ok(RuleToken::SingleMin(parse_num(l, "coordinate")?)),
            _ => Err(format!(
                "unknown rule {s:?}; expected hkb, hk, gridmin, percoord, singlemin:L, bestsingle or table1"
            )),
        }
    }
}

pub fn exit_code(e: &RidgeError) -> i32 {
    match e {
        RidgeError::InvalidArgument(_) | RidgeError::DimensionMismatch { .. } => EXIT_USAGE,
        RidgeError::Data(_) | RidgeError::Parse { .. } | RidgeError::Io(_) => EXIT_DATA,
        _ if e.is_numeric() => EXIT_NUMERIC,
        _ => EXIT_NUMERIC,
    }
}

/// Parses arguments, runs the command and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let echo: Vec<String> = args.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
    match execute(cli.command, echo) {
        Ok(text) => {
            print!("{text}");
            EXIT_OK
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn execute(command: Command, echo: Vec<String>) -> Result<String> {
    let started = Instant::now();
    let (mut report, out) = match command {
        Command::Fit(a) => (cmd_fit(&a, echo)?, a.out),
        Command::Trace(a) => (cmd_trace(&a, echo)?, a.output),
        Command::Select(a) => (cmd_select(&a, echo)?, a.out),
        Command::Bootstrap(a) => (cmd_bootstrap(&a, echo)?, a.out),
        Command::Compare(a) => (cmd_compare(&a, echo)?, a.out),
    };
    if out.timing {
        report.timing_ms = Some(Num::new(started.elapsed().as_secs_f64() * 1e3));
    }
    Ok(if out.json {
        report.to_json() + "\n"
    } else {
        report.to_text()
    })
}

struct Loaded {
    analysis: GeneralizedRidge,
    summary: DatasetSummary,
    warnings: Vec<String>,
}

fn load(a: &DataArgs) -> Result<Loaded> {
    let response = match a.response.parse::<usize>() {
        Ok(0) => return Err(RidgeError::invalid("response columns are numbered from 1")),
        Ok(i) => ResponseColumn::Index(i - 1),
        Err(_) => ResponseColumn::Name(a.response.clone()),
    };
    if !a.delimiter.is_ascii() {
        return Err(RidgeError::invalid("delimiter must be a single ASCII character"));
    }
    let options = CsvOptions {
        header: !a.no_header,
        delimiter: a.delimiter as u8,
        response,
    };
    let raw = load_csv(&a.data, &options)?;
    let mode = if a.standardize {
        TransformMode::StandardizeAll
    } else if a.raw {
        TransformMode::Raw
    } else {
        TransformMode::CenterY
    };
    let add_intercept = !a.no_intercept && mode != TransformMode::StandardizeAll && raw.intercept_column().is_none();
    let with_ones = if add_intercept { raw.with_intercept()? } else { raw };
    let data = apply_transform(&with_ones, mode)?;
    let mut analysis = GeneralizedRidge::new(data)?;
    let sigma2_hat = analysis.ols.sigma2_hat;
    if let Some(s2) = a.sigma2 {
        if !(s2.is_finite() && s2 >= 0.0) {
            return Err(RidgeError::invalid(format!("--sigma2 must be nonnegative, got {s2}")));
        }
        analysis = analysis.with_sigma2(s2);
    }
    let mut warnings = Vec::new();
    if mode == TransformMode::Raw {
        warnings.push("raw (uncentered) response: GoF is not bounded by the usual R² range".into());
    }
    let d = &analysis.dataset;
    let summary = DatasetSummary {
        source: a.data.display().to_string(),
        response: d.response_name().to_string(),
        n: d.n() as u64,
        p: d.p() as u64,
        transform: format!("{mode:?}"),
        intercept_added: add_intercept,
        sigma2_hat: Num::new(sigma2_hat),
        sigma2_used: Num::new(analysis.sigma2()),
        condition_number: Num::new(analysis.canonical.eigen.condition_number()),
    };
    Ok(Loaded {
        analysis,
        summary,
        warnings,
    })
}

fn coord(l: usize, p: usize) -> Result<Coord> {
    Coord::one_based(l, p)
}

fn read_spec_file(path: &Path, p: usize) -> Result<ShrinkageSpec> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| RidgeError::Data(format!("cannot read {}: {e}", path.display())))?;
    let values: Vec<f64> = text
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .enumerate()
        .map(|(i, s)| {
            s.parse().map_err(|_| RidgeError::Parse {
                row: 1,
                column: i + 1,
                message: format!("not a number: {s:?}"),
            })
        })
        .collect::<Result<_>>()?;
    let spec = ShrinkageSpec::general(values)?;
    spec.check_dim(p)?;
    Ok(spec)
}

/// Turns a command-line token into a concrete specification.
pub fn resolve_spec(token: &SpecToken, g: &GeneralizedRidge) -> Result<(ShrinkageSpec, Option<SelectionResult>)> {
    let p = g.p();
    let selected = |r: SelectionResult| Ok((r.spec.clone(), Some(r)));
    match token {
        SpecToken::Zero => Ok((ShrinkageSpec::zero(p), None)),
        SpecToken::Uniform(k) => Ok((ShrinkageSpec::uniform(p, *k)?, None)),
        SpecToken::Single(l, k) => Ok((ShrinkageSpec::single(p, coord(*l, p)?, *k)?, None)),
        SpecToken::File(path) => Ok((read_spec_file(path, p)?, None)),
        SpecToken::PerCoord => selected(g.per_coordinate()?),
        SpecToken::Hkb => selected(g.k_hkb()?),
        SpecToken::Hk => selected(g.k_hk()?),
        SpecToken::Kmin => selected(g.k_grid_min(&Grid::default_unit(), SearchMode::EarlyStop)?),
        SpecToken::SingleMin(l) => selected(g.single_min(coord(*l, p)?)?),
        SpecToken::BestSingle => selected(g.best_single()?),
    }
}

fn spec_summary(spec: &ShrinkageSpec) -> SpecSummary {
    SpecSummary {
        label: spec.label(),
        k: spec.k().iter().map(|&k| Num::new(k)).collect(),
    }
}

fn start(echo: Vec<String>, loaded: &Loaded) -> RunReport {
    let mut r = RunReport::new(echo);
    r.dataset = Some(loaded.summary.clone());
    r.warnings = loaded.warnings.clone();
    r
}

fn cmd_fit(a: &FitArgs, echo: Vec<String>) -> Result<RunReport> {
    let loaded = load(&a.data)?;
    let g = &loaded.analysis;
    let (spec, _) = resolve_spec(&a.spec, g)?;
    let ev = g.evaluate(&spec)?;
    let mut r = start(echo, &loaded);
    r.spec = Some(spec_summary(&spec));

    let mut coef = Table::new("coefficients", &["name", "ols", "estimate", "std_error", "augmented_std_error"]);
    for (j, name) in g.dataset.column_names().iter().enumerate() {
        coef.push(vec![
            Cell::text(name),
            Cell::num(g.ols.beta_hat[j]),
            Cell::num(ev.fit.beta[j]),
            Cell::num(ev.fit.varcov[(j, j)].sqrt()),
            Cell::num(ev.augmented.varcov_a[(j, j)].sqrt()),
        ]);
    }
    r.tables.push(coef);
    r.scalar("mse", Cell::num(ev.risk.mse));
    r.scalar("eta1_variance", Cell::num(ev.risk.eta1));
    r.scalar("eta2_bias_sq", Cell::num(ev.risk.eta2));
    r.scalar("mse_ols", Cell::num(mse_ols(&g.canonical, g.sigma2())));
    r.scalar("gof", Cell::num(ev.gof.gof));
    r.scalar("gof_augmented", Cell::num(ev.gof.gof_augmented));
    r.scalar("tss", Cell::num(ev.gof.tss));
    r.scalar("ess", Cell::num(ev.gof.ess));
    r.scalar("rss", Cell::num(ev.gof.rss));
    r.scalar("norm_sq", Cell::num(ev.fit.norm));
    r.scalar("distance_sq_from_ols", Cell::num(ev.distance_from_ols));
    Ok(r)
}

fn trace_mode(m: ModeToken, p: usize) -> Result<TraceMode> {
    Ok(match m {
        ModeToken::Uniform => TraceMode::Uniform,
        ModeToken::Single(l) => TraceMode::Single(coord(l, p)?),
    })
}

fn thin(points: Vec<(f64, f64)>) -> Vec<(f64, f64)> {
    if points.len() <= SVG_MAX_POINTS {
        return points;
    }
    let stride = points.len().div_ceil(SVG_MAX_POINTS);
    let last = *points.last().expect("nonempty");
    let mut out: Vec<_> = points.into_iter().step_by(stride).collect();
    if out.last() != Some(&last) {
        out.push(last);
    }
    out
}

fn trace_charts(t: &TraceSeries, g: &GeneralizedRidge) -> Result<Vec<(&'static str, LineChart)>> {
    let c = &g.canonical;
    let names = g.dataset.column_names();
    let xs = t.column(|r| r.k);
    let k_label = match t.mode {
        TraceMode::Uniform => "k".to_string(),
        TraceMode::Single(l) => format!("k_{l}"),
    };
    let series = |name: &str, ys: Vec<f64>| Series {
        name: name.to_string(),
        points: thin(xs.iter().copied().zip(ys).collect()),
    };
    let ols_norm = c.norm_for(&vec![0.0; c.p()]);
    let ols_gof = c.gof_for(&vec![0.0; c.p()]);
    let ols_mse = mse_ols(c, g.sigma2());

    let coef = LineChart {
        title: format!("Ridge trace ({})", t.mode),
        x_label: k_label.clone(),
        y_label: "coefficient".into(),
        series: (0..t.p()).map(|j| series(&names[j], t.column(|r| r.beta[j]))).collect(),
        markers: (0..t.p())
            .map(|j| Marker::Point {
                x: xs[0],
                y: g.ols.beta_hat[j],
                label: format!("OLS {}", names[j]),
            })
            .collect(),
    };
    let mut norm_markers = vec![Marker::HLine { y: ols_norm, label: "OLS".into() }];
    let mut mse_markers = vec![Marker::HLine { y: ols_mse, label: "OLS".into() }];
    let mut gof_markers = vec![Marker::HLine { y: ols_gof, label: "OLS".into() }];
    if let TraceMode::Single(l) = t.mode {
        norm_markers.push(Marker::HLine { y: norm_single_limit(c, l)?, label: "limit".into() });
        mse_markers.push(Marker::HLine {
            y: mse_single_limit(c, l, g.sigma2(), &g.plug_in.xi)?,
            label: "limit".into(),
        });
        gof_markers.push(Marker::HLine { y: gof_limit_single(c, l)?, label: "limit".into() });
        if let Ok(m) = g.single_min(l) {
            if let Some(k) = m.k() {
                if k <= xs[xs.len() - 1] {
                    mse_markers.push(Marker::VLine { x: k, label: "minimum".into() });
                }
            }
        }
    }
    let scalar = |title: &str, y: &str, values: Vec<f64>, markers: Vec<Marker>| LineChart {
        title: format!("{title} ({})", t.mode),
        x_label: k_label.clone(),
        y_label: y.into(),
        series: vec![series(y, values)],
        markers,
    };
    Ok(vec![
        ("coefficients", coef),
        ("norm", scalar("Squared norm", "norm", t.column(|r| r.norm), norm_markers)),
        ("mse", scalar("Mean squared error", "MSE", t.column(|r| r.mse), mse_markers)),
        ("gof", scalar("Goodness of fit", "GoF", t.column(|r| r.gof), gof_markers)),
    ])
}

fn cmd_trace(a: &TraceArgs, echo: Vec<String>) -> Result<RunReport> {
    let loaded = load(&a.data)?;
    let g = &loaded.analysis;
    let mode = trace_mode(a.mode, g.p())?;
    let grid: Grid = a.grid.parse()?;
    let t = trace(&g.canonical, mode, &grid, g.sigma2(), &g.plug_in.xi)?;
    let mut r = start(echo, &loaded);
    let paths = t.write_csv(&a.out, g.dataset.column_names())?;
    r.files.extend(paths.iter().map(|p| p.display().to_string()));
    if a.svg {
        for (name, chart) in trace_charts(&t, g)? {
            let path = format!("{}_{name}.svg", a.out.display());
            std::fs::write(&path, chart.render())?;
            r.files.push(path);
        }
    }
    r.scalar("mode", Cell::text(mode.to_string()));
    r.scalar("points", Cell::Int(grid.len() as u64));
    let (imin, best) = t
        .rows
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.mse.total_cmp(&b.1.mse))
        .expect("nonempty grid");
    r.scalar("min_mse_on_grid", Cell::num(best.mse));
    r.scalar("argmin_k", Cell::num(best.k));
    r.scalar("argmin_index", Cell::Int(imin as u64));
    r.scalar("mse_ols", Cell::num(mse_ols(&g.canonical, g.sigma2())));
    Ok(r)
}

fn selection_scalars(r: &mut RunReport, s: &SelectionResult) {
    r.scalar("rule", Cell::text(format!("{:?}", s.rule)));
    if let Some(k) = s.k() {
        r.scalar("k", Cell::num(k));
    }
    match &s.diagnostics {
        Diagnostics::Hkb { sigma2, beta_norm_sq } => {
            r.scalar("sigma2", Cell::num(*sigma2));
            r.scalar("beta_norm_sq", Cell::num(*beta_norm_sq));
        }
        Diagnostics::Hk { sigma2, xi_max, coord } => {
            r.scalar("sigma2", Cell::num(*sigma2));
            r.scalar("xi_max", Cell::num(*xi_max));
            r.scalar("xi_max_coord", Cell::Int(coord.number() as u64));
        }
        Diagnostics::Grid(d) => {
            r.scalar("search", Cell::text(format!("{:?}", d.mode)));
            r.scalar("grid_step", Cell::opt(d.step));
            r.scalar("index", Cell::Int(d.index as u64));
            r.scalar("evaluated", Cell::Int(d.evaluated as u64));
            r.scalar("mse", Cell::num(d.mse));
            r.scalar("lower_neighbor", Cell::opt(d.lower));
            r.scalar("upper_neighbor", Cell::opt(d.upper));
            r.scalar("no_interior_minimum", Cell::Bool(d.no_interior_minimum));
            r.scalar("k_hk", Cell::opt(d.k_hk));
            r.scalar("exceeds_k_hk", Cell::Bool(d.exceeds_hk));
            if d.no_interior_minimum {
                r.warnings.push("MSE never rose on the grid; returned the last grid point".into());
            }
            if d.exceeds_hk {
                r.warnings.push("grid minimum exceeds k_HK (plug-in sigma² may be the cause)".into());
            }
        }
        Diagnostics::Single { minimum, mse_ols } => {
            r.scalar("coord", Cell::Int(minimum.coord.number() as u64));
            r.scalar("mse", Cell::num(minimum.mse));
            r.scalar("mse_ols", Cell::num(*mse_ols));
            r.scalar("always_below_ols", Cell::Bool(minimum.always_below_ols));
        }
        Diagnostics::PerCoordinate { sigma2 } => {
            r.scalar("sigma2", Cell::num(*sigma2));
        }
    }
}

fn cmd_select(a: &SelectArgs, echo: Vec<String>) -> Result<RunReport> {
    let loaded = load(&a.data)?;
    let g = &loaded.analysis;
    let p = g.p();
    let mut r = start(echo, &loaded);
    let result = match a.rule {
        RuleToken::Table1 => {
            let mut t = Table::new("single-coordinate minima", &["l", "k_l_min", "mse", "always_below_ols"]);
            for m in g.single_minima()? {
                t.push(vec![
                    Cell::Int(m.coord.number() as u64),
                    Cell::num(m.k),
                    Cell::num(m.mse),
                    Cell::Bool(m.always_below_ols),
                ]);
            }
            r.tables.push(t);
            r.scalar("mse_ols", Cell::num(mse_ols(&g.canonical, g.sigma2())));
            return Ok(r);
        }
        RuleToken::Hkb => g.k_hkb()?,
        RuleToken::Hk => g.k_hk()?,
        RuleToken::GridMin => {
            let grid: Grid = a.grid.parse()?;
            let mode = if a.exhaustive { SearchMode::Exhaustive } else { SearchMode::EarlyStop };
            g.k_grid_min(&grid, mode)?
        }
        RuleToken::PerCoord => g.per_coordinate()?,
        RuleToken::SingleMin(l) => g.single_min(coord(l, p)?)?,
        RuleToken::BestSingle => g.best_single()?,
    };
    r.spec = Some(spec_summary(&result.spec));
    selection_scalars(&mut r, &result);
    r.scalar("mse_at_spec", Cell::num(g.risk(&result.spec)?.mse));
    Ok(r)
}

fn cmd_bootstrap(a: &BootstrapArgs, echo: Vec<String>) -> Result<RunReport> {
    let loaded = load(&a.data)?;
    let g = &loaded.analysis;
    let (spec, _) = resolve_spec(&a.spec, g)?;
    let cfg = BootstrapConfig {
        replicates: a.m,
        level: a.level,
        seed: a.seed,
        execution: Execution::Parallel(a.threads),
    };
    let s = bootstrap(&g.dataset, &spec, &cfg)?;
    let mut r = start(echo, &loaded);
    r.spec = Some(spec_summary(&spec));
    r.seed = Some(a.seed);
    let mut t = Table::new("percentile intervals", &["name", "estimate", "lower", "upper", "significant"]);
    for iv in s.coefficients.iter().chain([&s.gof]) {
        t.push(vec![
            Cell::text(&iv.name),
            Cell::num(iv.estimate),
            Cell::num(iv.lower),
            Cell::num(iv.upper),
            iv.significant.map_or(Cell::Empty(()), Cell::Bool),
        ]);
    }
    r.tables.push(t);
    r.scalar("replicates", Cell::Int(a.m as u64));
    r.scalar("replicates_used", Cell::Int(s.replicates_used as u64));
    r.scalar("discarded", Cell::Int(s.discarded as u64));
    r.scalar("level", Cell::num(s.level));
    let sig: Vec<String> = s.significant_set().iter().map(|j| j.to_string()).collect();
    r.scalar("significant_coefficients", Cell::text(sig.join(",")));
    Ok(r)
}

fn verdict_cell(v: &Verdict) -> Cell {
    Cell::text(match v {
        Verdict::Dominates => "dominates",
        Verdict::NotComparable => "not comparable",
        Verdict::ConditionHolds(_) => "condition holds",
        Verdict::ConditionFails(_) => "condition fails",
    })
}

fn verdict_row(name: &str, v: &DominanceVerdict) -> Vec<Cell> {
    vec![
        Cell::text(name),
        Cell::text(&v.challenger),
        Cell::text(&v.incumbent),
        Cell::Bool(v.witness.strict_pd),
        Cell::Bool(v.witness.psd_nonzero),
        Cell::text(v.witness.boundary.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",")),
        verdict_cell(&v.verdict),
    ]
}

const VERDICT_COLUMNS: [&str; 7] = ["comparison", "challenger", "incumbent", "strict_pd", "psd", "boundary", "verdict"];

fn parse_beta(s: &str, p: usize) -> Result<DVector<f64>> {
    let values: Vec<f64> = s
        .split(',')
        .map(|v| v.trim().parse().map_err(|_| RidgeError::invalid(format!("invalid coefficient {v:?}"))))
        .collect::<Result<_>>()?;
    if values.len() != p {
        return Err(RidgeError::DimensionMismatch {
            what: "true coefficients",
            expected: p,
            found: values.len(),
        });
    }
    Ok(DVector::from_vec(values))
}

fn cmd_compare(a: &CompareArgs, echo: Vec<String>) -> Result<RunReport> {
    let loaded = load(&a.data)?;
    let g = &loaded.analysis;
    let mut r = start(echo, &loaded);
    if a.all {
        let hkb = g.k_hkb()?.spec;
        let hk = g.k_hk()?.spec;
        let grid_min = g.k_grid_min(&Grid::default_unit(), SearchMode::EarlyStop)?.spec;
        let per_coordinate = g.per_coordinate()?.spec;
        let best_single = g.best_single()?.spec;
        let cand = Candidates {
            hkb: &hkb,
            hk: &hk,
            grid_min: &grid_min,
            per_coordinate: &per_coordinate,
            best_single: &best_single,
        };
        let mut t = Table::new("dominance", &VERDICT_COLUMNS);
        for nv in standard_comparisons(&g.canonical, &cand)? {
            t.push(verdict_row(&nv.name, &nv.verdict));
        }
        r.tables.push(t);
        return Ok(r);
    }
    let (challenger, _) = resolve_spec(a.challenger.as_ref().expect("required by clap"), g)?;
    let (incumbent, _) = resolve_spec(a.incumbent.as_ref().expect("required by clap"), g)?;
    let truth = match (&a.true_beta, a.true_sigma2) {
        (Some(b), Some(s2)) => Some(Truth {
            beta: parse_beta(b, g.p())?,
            sigma2: s2,
        }),
        _ => None,
    };
    let v = dominance_condition(&g.canonical, &challenger, &incumbent, truth.as_ref())?;
    let mut diag = Table::new("closed-form diagonal", &["coord", "lambda", "k_challenger", "k_incumbent", "entry"]);
    for j in 0..g.p() {
        diag.push(vec![
            Cell::Int(j as u64 + 1),
            Cell::num(g.canonical.lambda()[j]),
            Cell::num(challenger.k()[j]),
            Cell::num(incumbent.k()[j]),
            Cell::num(v.witness.diagonal[j]),
        ]);
    }
    r.tables.push(diag);
    r.scalar("challenger", Cell::text(&v.challenger));
    r.scalar("incumbent", Cell::text(&v.incumbent));
    r.scalar("strict_pd", Cell::Bool(v.witness.strict_pd));
    r.scalar("psd", Cell::Bool(v.witness.psd_nonzero));
    r.scalar("verdict", verdict_cell(&v.verdict));
    r.scalar("condition_value", Cell::opt(v.condition_value));
    r.scalar("mse_challenger", Cell::num(g.risk(&challenger)?.mse));
    r.scalar("mse_incumbent", Cell::num(g.risk(&incumbent)?.mse));
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_tokens_parse() {
        assert_eq!("zero".parse::<SpecToken>(), Ok(SpecToken::Zero));
        assert_eq!("uniform:0.5".parse::<SpecToken>(), Ok(SpecToken::Uniform(0.5)));
        assert_eq!("single:10:0.077".parse::<SpecToken>(), Ok(SpecToken::Single(10, 0.077)));
        assert_eq!("file:/tmp/a:b".parse::<SpecToken>(), Ok(SpecToken::File("/tmp/a:b".into())));
        assert!("uniform:abc".parse::<SpecToken>().is_err());
        assert!("single:1".parse::<SpecToken>().is_err());
        assert!("bogus".parse::<SpecToken>().is_err());
    }

    #[test]
    fn rule_and_mode_tokens_parse() {
        assert_eq!("singlemin:3".parse::<RuleToken>(), Ok(RuleToken::SingleMin(3)));
        assert_eq!("table1".parse::<RuleToken>(), Ok(RuleToken::Table1));
        assert_eq!("single:2".parse::<ModeToken>(), Ok(ModeToken::Single(2)));
        assert!("single".parse::<ModeToken>().is_err());
    }

    #[test]
    fn error_classes_map_to_exit_codes() {
        assert_eq!(exit_code(&RidgeError::invalid("x")), EXIT_USAGE);
        assert_eq!(exit_code(&RidgeError::Data("x".into())), EXIT_DATA);
        assert_eq!(exit_code(&RidgeError::Singular { row: 0, pivot: 0.0 }), EXIT_NUMERIC);
        assert_eq!(exit_code(&RidgeError::Undefined("x".into())), EXIT_NUMERIC);
    }

    #[test]
    fn thinning_keeps_endpoints() {
        let pts: Vec<(f64, f64)> = (0..10_001).map(|i| (i as f64, 0.0)).collect();
        let t = thin(pts);
        assert!(t.len() <= SVG_MAX_POINTS + 1);
        assert_eq!(t[0].0, 0.0);
        assert_eq!(t.last().unwrap().0, 10_000.0);
    }
}
