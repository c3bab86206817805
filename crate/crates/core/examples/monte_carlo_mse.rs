//! Closed-form MSE against simulation on a model with known coefficients.
//!
//!     cargo run --release --example monte_carlo_mse -- [DRAWS]

use nalgebra::DVector;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use ridgeforge::synth::random_model;
use ridgeforge::{mse_of, CanonicalForm, Coord, Dataset, ShrinkageSpec};

fn main() -> ridgeforge::Result<()> {
    let draws: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(20_000);
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let model = random_model(&mut rng, 20, 3, 1.5);
    let c = CanonicalForm::new(&Dataset::from_parts(DVector::zeros(20), model.x.clone())?)?;
    let xi = c.rotate(&model.beta)?;
    let specs = [
        ShrinkageSpec::zero(3),
        ShrinkageSpec::uniform(3, 1.0)?,
        ShrinkageSpec::single(3, Coord::one_based(3, 3)?, 4.0)?,
    ];

    let mut loss = vec![Vec::with_capacity(draws); specs.len()];
    for _ in 0..draws {
        let sample = model.draw(&mut rng)?;
        let delta = c.gamma().transpose() * sample.cross();
        for (s, spec) in specs.iter().enumerate() {
            let k = spec.k();
            let shrunk = DVector::from_fn(3, |j, _| delta[j] / (c.lambda()[j] + k[j]));
            loss[s].push((c.gamma() * shrunk - &model.beta).norm_squared());
        }
    }
    println!("{:<16} {:>10} {:>10} {:>8}", "spec", "formula", "simulated", "z");
    for (spec, l) in specs.iter().zip(&loss) {
        let n = l.len() as f64;
        let mean = l.iter().sum::<f64>() / n;
        let sd = (l.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt();
        let formula = mse_of(&c, spec, model.sigma2(), &xi)?.mse;
        println!("{:<16} {formula:>10.5} {mean:>10.5} {:>8.2}", spec.label(), (formula - mean) / (sd / n.sqrt()));
    }
    Ok(())
}
