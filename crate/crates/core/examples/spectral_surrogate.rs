//! Builds a design with the Gorman–Toman spectrum and noise level, then
//! checks that the risk summaries come back out.
//!
//!     cargo run --example spectral_surrogate -- [OUT.csv]

use ridgeforge::gorman_toman as gt;
use ridgeforge::{write_csv, GeneralizedRidge, ShrinkageSpec};

fn main() -> ridgeforge::Result<()> {
    let data = gt::spectral_surrogate(1)?;
    if let Some(path) = std::env::args().nth(1) {
        write_csv(&data, &path)?;
        println!("wrote {path} ({} rows, {} regressors)", data.n(), data.p());
    }

    let g = GeneralizedRidge::new(data)?;
    println!("sigma2_hat  {:.8}  (published {})", g.sigma2(), gt::SIGMA2_HAT);
    println!("{:>3} {:>14} {:>14}", "l", "lambda", "published");
    for (l, (got, want)) in g.canonical.lambda().iter().zip(gt::EIGENVALUES).enumerate() {
        println!("{:>3} {:>14.7e} {:>14.7e}", l + 1, got, want);
    }

    let ols = g.risk(&ShrinkageSpec::zero(g.p()))?;
    let hk = g.k_hk()?;
    println!("\nMSE(OLS) {:.6}  published {}", ols.mse, gt::MSE[0]);
    println!(
        "k_HK     {:.10}  published {}",
        hk.k().unwrap_or(f64::NAN),
        gt::K_HK
    );
    println!("MSE(k_HK) {:.6}  published {}", g.risk(&hk.spec)?.mse, gt::MSE[2]);
    Ok(())
}
