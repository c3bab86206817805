//! Fit ordinary, regular and generalized ridge on a CSV file (response in the
//! first column) or, without arguments, on a small synthetic design.
//!
//!     cargo run --example fit -- [DATA.csv]

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use ridgeforge::synth::random_dataset;
use ridgeforge::{apply_transform, load_csv, CsvOptions, GeneralizedRidge, ShrinkageSpec, TransformMode};

fn main() -> ridgeforge::Result<()> {
    let data = match std::env::args().nth(1) {
        Some(path) => {
            let raw = load_csv(&path, &CsvOptions::default())?.with_intercept()?;
            apply_transform(&raw, TransformMode::CenterY)?
        }
        None => random_dataset(&mut ChaCha8Rng::seed_from_u64(5), 40, 4),
    };
    let g = GeneralizedRidge::new(data)?;
    let p = g.p();
    println!("n = {}, p = {}, sigma2_hat = {:.6}", g.dataset.n(), p, g.sigma2());

    let per_coordinate = g.per_coordinate()?.spec;
    let specs = [
        ShrinkageSpec::zero(p),
        ShrinkageSpec::uniform(p, 0.5)?,
        per_coordinate,
    ];
    for spec in &specs {
        let ev = g.evaluate(spec)?;
        println!("\n{}", spec.label());
        for (name, (b, v)) in g
            .dataset
            .column_names()
            .iter()
            .zip(ev.fit.beta.iter().zip(ev.fit.varcov.diagonal().iter()))
        {
            println!("  {name:>12} {b:>12.6} (se {:.6})", v.sqrt());
        }
        println!(
            "  MSE {:.6}  GoF {:.6}  squared distance from OLS {:.6}",
            ev.risk.mse, ev.gof.gof, ev.distance_from_ols
        );
        let gap = (&ev.augmented.beta - &ev.fit.beta).amax();
        println!("  augmented least squares agrees to {gap:.1e}");
    }
    Ok(())
}
