//! Ridge traces for a uniform and a single-coordinate path, written as CSV
//! and SVG.
//!
//!     cargo run --example ridge_trace -- [OUT_DIR]

use std::path::PathBuf;

use ridgeforge::gorman_toman as gt;
use ridgeforge::svg::{LineChart, Marker, Series};
use ridgeforge::{trace, Coord, GeneralizedRidge, Grid, TraceMode};

fn main() -> ridgeforge::Result<()> {
    let out = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "trace_out".into()));
    std::fs::create_dir_all(&out)?;
    let g = GeneralizedRidge::new(gt::spectral_surrogate(1)?)?;
    let names = g.dataset.column_names().to_vec();

    let ten = Coord::one_based(10, g.p())?;
    for (tag, mode, grid) in [
        ("uniform", TraceMode::Uniform, Grid::uniform(0.0, 0.01, 1e-5)?),
        ("single10", TraceMode::Single(ten), Grid::uniform(0.0, 1.0, 1e-3)?),
    ] {
        let t = trace(&g.canonical, mode, &grid, g.sigma2(), &g.plug_in.xi)?;
        for path in t.write_csv(&out.join(tag), &names)? {
            println!("wrote {}", path.display());
        }
        let ks = t.column(|r| r.k);
        let mse = t.column(|r| r.mse);
        let chart = LineChart {
            title: format!("MSE along the {mode} path"),
            x_label: "k".into(),
            y_label: "MSE".into(),
            series: vec![Series { name: "MSE".into(), points: ks.into_iter().zip(mse).collect() }],
            markers: vec![Marker::HLine { y: gt::MSE[0], label: "OLS".into() }],
        };
        let svg = out.join(format!("{tag}_mse.svg"));
        std::fs::write(&svg, chart.render())?;
        println!("wrote {}", svg.display());
    }
    Ok(())
}
