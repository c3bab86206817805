use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use ridgeforge::bootstrap::quantile;
use ridgeforge::comparison::pd_witness;
use ridgeforge::dataset::transform_y;
use ridgeforge::synth::random_dataset;
use ridgeforge::*;

fn dataset(seed: u64, n: usize, p: usize) -> Dataset {
    random_dataset(&mut ChaCha8Rng::seed_from_u64(seed), n, p)
}

fn shape() -> impl Strategy<Value = (u64, usize, usize)> {
    (any::<u64>(), 1usize..7).prop_flat_map(|(seed, p)| (Just(seed), (p + 2)..40, Just(p)))
}

fn penalties(p: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(prop_oneof![Just(0.0), 1e-3..10.0f64], p)
}

fn flip_column(c: &CanonicalForm, j: usize) -> CanonicalForm {
    let mut f = c.clone();
    f.eigen.gamma.column_mut(j).neg_mut();
    f.z.column_mut(j).neg_mut();
    f.delta[j] = -f.delta[j];
    f.xi_hat[j] = -f.xi_hat[j];
    f
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn eigenvector_signs_do_not_matter((seed, n, p) in shape(), j in 0usize..6, k in penalties(6)) {
        let d = dataset(seed, n, p);
        let c = CanonicalForm::new(&d).unwrap();
        let j = j % p;
        let k = &k[..p];
        let f = flip_column(&c, j);
        let (a, b) = (c.beta_for(k), f.beta_for(k));
        prop_assert!((a - b).amax() <= 1e-12 * c.beta_ols().amax().max(1.0));
        prop_assert!((c.gof_for(k) - f.gof_for(k)).abs() <= 1e-12);
    }

    #[test]
    fn uniform_fit_ignores_row_order((seed, n, p) in shape(), k in 1e-3..5.0f64) {
        let d = dataset(seed, n, p);
        let rev: Vec<usize> = (0..n).rev().collect();
        let y = DVector::from_fn(n, |i, _| d.y()[rev[i]]);
        let x = DMatrix::from_fn(n, p, |i, j| d.x()[(rev[i], j)]);
        let e = Dataset::from_parts(y, x).unwrap();
        let spec = ShrinkageSpec::uniform(p, k).unwrap();
        let a = GeneralizedRidge::new(d).unwrap().fit(&spec).unwrap().beta;
        let b = GeneralizedRidge::new(e).unwrap().fit(&spec).unwrap().beta;
        prop_assert!((a - &b).amax() <= 1e-9 * b.amax().max(1.0));
    }

    #[test]
    fn norm_and_gof_fall_with_uniform_k((seed, n, p) in shape(), k1 in 0.0..5.0f64, dk in 1e-3..5.0f64) {
        let c = CanonicalForm::new(&dataset(seed, n, p)).unwrap();
        let (lo, hi) = (vec![k1; p], vec![k1 + dk; p]);
        prop_assert!(c.norm_for(&hi) < c.norm_for(&lo));
        prop_assert!(c.gof_for(&hi) < c.gof_for(&lo));
    }

    #[test]
    fn gof_lies_between_zero_and_ols((seed, n, p) in shape(), k in penalties(6)) {
        let c = CanonicalForm::new(&dataset(seed, n, p)).unwrap();
        let k = &k[..p];
        let g = c.gof_for(k);
        prop_assert!(g >= 0.0);
        prop_assert!(g <= c.gof_for(&vec![0.0; p]) + 1e-12);
    }

    #[test]
    fn per_coordinate_minimises_mse((seed, n, p) in shape(), k in penalties(6)) {
        let g = GeneralizedRidge::new(dataset(seed, n, p)).unwrap();
        let best = g.per_coordinate().unwrap();
        let other = ShrinkageSpec::general(k[..p].to_vec()).unwrap();
        let m_best = g.risk(&best.spec).unwrap().mse;
        let m_other = g.risk(&other).unwrap().mse;
        prop_assert!(m_best <= m_other * (1.0 + 1e-12));
    }

    #[test]
    fn single_minimum_beats_other_single_penalties((seed, n, p) in shape(), l in 0usize..6, k in 0.0..100.0f64) {
        let g = GeneralizedRidge::new(dataset(seed, n, p)).unwrap();
        let l = Coord::zero_based(l % p);
        let at_min = g.single_min(l).unwrap();
        let other = ShrinkageSpec::single(p, l, k).unwrap();
        prop_assert!(g.risk(&at_min.spec).unwrap().mse <= g.risk(&other).unwrap().mse * (1.0 + 1e-12));
    }

    #[test]
    fn mse_splits_into_variance_and_bias((seed, n, p) in shape(), k in penalties(6)) {
        let g = GeneralizedRidge::new(dataset(seed, n, p)).unwrap();
        let r = g.risk(&ShrinkageSpec::general(k[..p].to_vec()).unwrap()).unwrap();
        prop_assert!(r.eta1 >= 0.0 && r.eta2 >= 0.0);
        prop_assert!((r.mse - r.eta1 - r.eta2).abs() <= 1e-12 * r.mse.max(1.0));
    }

    #[test]
    fn larger_challenger_raises_every_diagonal_entry((seed, n, p) in shape(), k in penalties(6), bump in penalties(6)) {
        let c = CanonicalForm::new(&dataset(seed, n, p)).unwrap();
        let base = ShrinkageSpec::general(k[..p].to_vec()).unwrap();
        let bigger = ShrinkageSpec::general(k[..p].iter().zip(&bump).map(|(a, b)| a + b).collect()).unwrap();
        let incumbent = ShrinkageSpec::uniform(p, 0.5).unwrap();
        let lo = pd_witness(&c, &base, &incumbent).unwrap().diagonal;
        let hi = pd_witness(&c, &bigger, &incumbent).unwrap().diagonal;
        for (a, b) in lo.iter().zip(&hi) {
            prop_assert!(b >= a);
        }
    }

    #[test]
    fn gof_is_scale_invariant((seed, n, p) in shape(), scale in 0.01..100.0f64, k in penalties(6)) {
        let d = dataset(seed, n, p);
        let spec = ShrinkageSpec::general(k[..p].to_vec()).unwrap();
        let gof = |d: &Dataset| GeneralizedRidge::new(d.clone()).unwrap().evaluate(&spec).unwrap().gof.gof;
        let scaled = transform_y(&d, 0.0, scale).unwrap();
        prop_assert!((gof(&d) - gof(&scaled)).abs() <= 1e-10);
    }

    #[test]
    fn quantiles_are_monotone_and_bounded(mut v in prop::collection::vec(-1e3..1e3f64, 1..200), q1 in 0.0..=1.0f64, q2 in 0.0..=1.0f64) {
        v.sort_by(f64::total_cmp);
        let (lo, hi) = if q1 <= q2 { (q1, q2) } else { (q2, q1) };
        let a = quantile(&v, lo).unwrap();
        let b = quantile(&v, hi).unwrap();
        prop_assert!(a <= b);
        prop_assert!(v[0] <= a && b <= v[v.len() - 1]);
    }

    #[test]
    fn coordinates_round_trip(p in 1usize..50, l in 1usize..50) {
        let l = l.min(p);
        let c = Coord::one_based(l, p).unwrap();
        prop_assert_eq!(c.number(), l);
        prop_assert_eq!(c.index() + 1, l);
        prop_assert!(Coord::one_based(0, p).is_err());
        prop_assert!(Coord::one_based(p + 1, p).is_err());
    }

    #[test]
    fn grids_parse_to_expected_length(steps in 1usize..500, step in 1e-4..1.0f64) {
        let stop = steps as f64 * step;
        let g: Grid = format!("0:{stop}:{step}").parse().unwrap();
        prop_assert_eq!(g.len(), steps + 1);
        prop_assert!(g.values().windows(2).all(|w| w[1] > w[0]));
    }
}
