//! Bias–variance split of the MSE along a uniform path, and the
//! single-coordinate minima.
//!
//!     cargo run --example risk_profile

use ridgeforge::gorman_toman as gt;
use ridgeforge::risk::mse_ols;
use ridgeforge::{GeneralizedRidge, ShrinkageSpec};

fn main() -> ridgeforge::Result<()> {
    let g = GeneralizedRidge::new(gt::spectral_surrogate(1)?)?;
    let p = g.p();
    println!("MSE(OLS) = {:.6}\n", mse_ols(&g.canonical, g.sigma2()));

    println!("{:>10} {:>12} {:>12} {:>12}", "k", "variance", "bias^2", "MSE");
    for k in [0.0, 1e-4, 5e-4, 8.3e-4, 2e-3, 1e-2, 0.1] {
        let r = g.risk(&ShrinkageSpec::uniform(p, k)?)?;
        println!("{k:>10.1e} {:>12.6} {:>12.6} {:>12.6}", r.eta1, r.eta2, r.mse);
    }

    println!("\n{:>3} {:>14} {:>10} {:>8}", "l", "k_l,min", "MSE", "always");
    for m in g.single_minima()? {
        println!(
            "{:>3} {:>14.7e} {:>10.6} {:>8}",
            m.coord.number(),
            m.k,
            m.mse,
            if m.always_below_ols { "TRUE" } else { "FALSE" }
        );
    }
    Ok(())
}
