//! Every shrinkage selection rule on the same data.
//!
//!     cargo run --example select_k

use ridgeforge::gorman_toman as gt;
use ridgeforge::{GeneralizedRidge, Grid, SearchMode};

fn main() -> ridgeforge::Result<()> {
    let g = GeneralizedRidge::new(gt::spectral_surrogate(1)?)?;
    let grid = Grid::uniform(0.0, 1.0, 1e-5)?;
    let rules = [
        ("Hoerl-Kennard-Baldwin", g.k_hkb()?),
        ("Hoerl-Kennard", g.k_hk()?),
        ("grid minimum", g.k_grid_min(&grid, SearchMode::EarlyStop)?),
        ("per coordinate", g.per_coordinate()?),
        ("best single coordinate", g.best_single()?),
    ];
    for (name, r) in &rules {
        let mse = g.risk(&r.spec)?.mse;
        match r.k() {
            Some(k) => println!("{name:<24} k = {k:<14.8e} MSE {mse:.6}"),
            None => println!("{name:<24} {:<18} MSE {mse:.6}", r.spec.label()),
        }
    }
    Ok(())
}
