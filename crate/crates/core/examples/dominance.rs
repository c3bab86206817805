//! Matrix-MSE dominance between estimators, first from the penalty structure
//! alone, then with a known truth.
//!
//!     cargo run --example dominance

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use ridgeforge::comparison::{standard_comparisons, Candidates, Truth};
use ridgeforge::gorman_toman as gt;
use ridgeforge::synth::random_model;
use ridgeforge::{dominance_condition, CanonicalForm, GeneralizedRidge, Grid, SearchMode, ShrinkageSpec};

fn main() -> ridgeforge::Result<()> {
    let g = GeneralizedRidge::new(gt::spectral_surrogate(1)?)?;
    let (hkb, hk) = (g.k_hkb()?.spec, g.k_hk()?.spec);
    let grid_min = g.k_grid_min(&Grid::default_unit(), SearchMode::EarlyStop)?.spec;
    let (per_coordinate, best_single) = (g.per_coordinate()?.spec, g.best_single()?.spec);
    let cand = Candidates {
        hkb: &hkb,
        hk: &hk,
        grid_min: &grid_min,
        per_coordinate: &per_coordinate,
        best_single: &best_single,
    };
    for v in standard_comparisons(&g.canonical, &cand)? {
        let boundary: Vec<String> = v.verdict.witness.boundary.iter().map(|c| c.to_string()).collect();
        println!("{:<28} {:<14} boundary [{}]", v.name, format!("{:?}", v.verdict.verdict), boundary.join(","));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let model = random_model(&mut rng, 30, 3, 1.0);
    let c = CanonicalForm::new(&model.draw(&mut rng)?)?;
    let truth = Truth { beta: model.beta.clone(), sigma2: model.sigma2() };
    for k in [0.05, 1.0, 50.0] {
        let v = dominance_condition(&c, &ShrinkageSpec::uniform(3, k)?, &ShrinkageSpec::zero(3), Some(&truth))?;
        println!("\nuniform({k}) vs OLS with known beta: {:?}", v.verdict);
    }
    Ok(())
}
