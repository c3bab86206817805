//! Goodness of fit is unchanged by rescaling the response but not by moving
//! its origin.
//!
//!     cargo run --example gof_transforms

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use ridgeforge::dataset::transform_y;
use ridgeforge::synth::random_dataset;
use ridgeforge::{Dataset, GeneralizedRidge, ShrinkageSpec};

fn gof(d: &Dataset) -> ridgeforge::Result<f64> {
    let g = GeneralizedRidge::new(d.clone())?;
    Ok(g.evaluate(&ShrinkageSpec::uniform(g.p(), 0.8)?)?.gof.gof)
}

fn main() -> ridgeforge::Result<()> {
    let base = random_dataset(&mut ChaCha8Rng::seed_from_u64(4), 50, 3);
    println!("original            GoF {:.10}", gof(&base)?);
    for scale in [0.01, 3.0, 1000.0] {
        println!("y / {scale:<8}        GoF {:.10}", gof(&transform_y(&base, 0.0, scale)?)?);
    }
    for origin in [-2.0, 1.0, 5.0] {
        println!("y - ({origin:>4})         GoF {:.10}", gof(&transform_y(&base, origin, 1.0)?)?);
    }
    Ok(())
}
