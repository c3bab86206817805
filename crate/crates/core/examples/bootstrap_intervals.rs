//! Percentile bootstrap intervals for a ridge fit. Thread count follows
//! `RIDGEFORGE_THREADS` when set.
//!
//!     cargo run --release --example bootstrap_intervals -- [REPLICATES] [SEED]

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use ridgeforge::synth::random_model;
use ridgeforge::{bootstrap, BootstrapConfig, GeneralizedRidge};

fn main() -> ridgeforge::Result<()> {
    let mut args = std::env::args().skip(1);
    let replicates = args.next().and_then(|s| s.parse().ok()).unwrap_or(2000);
    let seed = args.next().and_then(|s| s.parse().ok()).unwrap_or(0);

    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let mut model = random_model(&mut rng, 80, 4, 1.0);
    model.beta[2] = 0.0;
    let g = GeneralizedRidge::new(model.draw(&mut rng)?)?;
    let spec = g.k_hk()?.spec;

    let cfg = BootstrapConfig { replicates, seed, ..BootstrapConfig::default() };
    let s = bootstrap(&g.dataset, &spec, &cfg)?;
    println!("95% intervals under {}, {} replicates (seed {seed})", spec.label(), s.replicates_used);
    for (iv, truth) in s.coefficients.iter().zip(model.beta.iter()) {
        let mark = if iv.significant == Some(true) { "*" } else { "" };
        println!("  {:>4} {:>9.4} [{:>9.4}, {:>9.4}] {mark:1}  true {truth:.4}", iv.name, iv.estimate, iv.lower, iv.upper);
    }
    println!("  GoF  {:>9.4} [{:>9.4}, {:>9.4}]", s.gof.estimate, s.gof.lower, s.gof.upper);
    println!("significant: {:?}", s.significant_set());
    Ok(())
}
