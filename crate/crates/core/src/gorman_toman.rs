//! Published summary values for the eleven-regressor Gorman–Toman example,
//! fitted with an intercept column and a centered response.
//!
//! Coefficient columns are indexed like the regressors. The spectrum and the
//! noise estimate are enough to rebuild a design with identical risk figures
//! (see [`spectral_surrogate`]).

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::dataset::Dataset;
use crate::error::Result;
use crate::synth::spectral_design;

pub const P: usize = 11;
pub const SIGMA2_HAT: f64 = 0.01216569;
/// Residual degrees of freedom implied by the published figures.
pub const RESIDUAL_DF: usize = 25;
pub const N: usize = P + RESIDUAL_DF;

pub const EIGENVALUES: [f64; P] = [
    528398.9, 32899.95, 951.4839, 362.2351, 162.681, 98.19544, 5.799103, 1.332221, 0.1563322,
    0.01702985, 0.0064903,
];

/// Single-coordinate minimisers `σ̂²/ξ̂_l²`.
pub const K_SINGLE_MIN: [f64; P] = [
    5.675967e7, 5.130849e3, 27.21801, 7.085955, 1.889662, 84.11808, 3.968410e3, 7.126586e-2,
    1.754329e-2, 7.706729e-2, 7.048761e-4,
];
pub const MSE_SINGLE_MIN: [f64; P] = [
    2.678111, 2.678111, 2.678110, 2.678110, 2.678110, 2.678053, 2.676016, 2.677647, 2.670259,
    2.093025, 2.494481,
];
pub const ALWAYS_BELOW_OLS: [bool; P] = [
    true, false, false, false, false, false, true, false, false, true, false,
];

pub const K_HKB: f64 = 0.007316662;
pub const K_HK: f64 = 0.0007048761;
pub const K_MIN: f64 = 0.00083;
pub const BEST_SINGLE: usize = 10;

/// Column labels of the coefficient table, in order.
pub const COLUMNS: [&str; 6] = ["OLS", "k_HKB", "k_HK", "k_min", "per-coordinate", "single(10)"];

pub const MSE: [f64; 6] = [2.678111, 5.708535, 2.438379, 2.433703, 1.898926, 2.093025];
pub const GOF: [f64; 6] = [0.8966053, 0.8857528, 0.8962376, 0.8961127, 0.8932614, 0.8959923];
/// Squared distance from OLS for the five shrinkage columns.
pub const DISTANCE_FROM_OLS: [f64; 5] = [4.862431, 0.1659039, 0.2222425, 0.2790656, 0.1058898];

pub const COEFFICIENTS: [[f64; P]; 6] = [
    [
        -1.1480402485, -0.0281064758, -0.0109609943, -0.9948352689, -0.0546405548, -3.9596038257,
        0.5449012650, 0.0278180802, 0.0480904082, 0.0008690746, 0.0075720370,
    ],
    [
        -0.615975316, -0.028590426, -0.010387826, -0.899367297, -0.057234825, -1.825723658,
        0.415759276, 0.018243272, 0.049696522, 0.001331381, 0.007590831,
    ],
    [
        -1.0558162341, -0.0281255168, -0.0108660148, -0.9803653295, -0.0552104328, -3.5638578763,
        0.5210035568, 0.0261355566, 0.0484754107, 0.0009551638, 0.0075480354,
    ],
    [
        -1.0411181661, -0.0281304843, -0.0108508010, -0.9780152042, -0.0552980693, -3.5016107255,
        0.5172413161, 0.0258683518, 0.0485336645, 0.0009686944, 0.0075449443,
    ],
    [
        -0.7536100103, -0.0296059930, -0.0095889300, -0.8959178060, -0.0495166302, -3.6255322448,
        0.4999095608, 0.0215278846, 0.0484407896, 0.0007518084, 0.0103226880,
    ],
    [
        -0.8289615831, -0.0309439917, -0.0108340116, -0.9926400826, -0.0545627458, -4.0218644743,
        0.5316978673, 0.0248643709, 0.0456378608, 0.0008365183, 0.0080287843,
    ],
];

/// Coefficients whose percentile interval excludes zero (1-based).
pub const SIGNIFICANT_WIDE: [usize; 6] = [3, 4, 6, 7, 8, 9];
pub const SIGNIFICANT_NARROW: [usize; 4] = [4, 6, 7, 9];

/// `|ξ̂_l| = √(σ̂²/k_l)`; signs are not recoverable from the summaries.
pub fn canonical_magnitudes() -> [f64; P] {
    K_SINGLE_MIN.map(|k| (SIGMA2_HAT / k).sqrt())
}

/// A synthetic design with the published spectrum, noise estimate and
/// canonical coefficient magnitudes. Every quantity that depends only on
/// `λ`, `σ̂²`, `ξ̂²` and `YᵗY` (MSE, GoF, distances, selected `k`) matches the
/// original data; coefficients in the original basis do not.
pub fn spectral_surrogate(seed: u64) -> Result<Dataset> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    spectral_design(&mut rng, N, &EIGENVALUES, &canonical_magnitudes(), SIGMA2_HAT)
}
