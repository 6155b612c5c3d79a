mod common;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tennis_momentum::explain::{exact_shapley, sobol_indices, MAX_SHAPLEY_FEATURES};
use tennis_momentum::Error;

fn rows(rng: &mut ChaCha8Rng, count: usize, p: usize) -> Vec<Vec<f64>> {
    (0..count).map(|_| (0..p).map(|_| rng.random_range(-1.0..1.0)).collect()).collect()
}

/// Random sum of pairwise products and sines with fixed coefficients.
fn random_function(rng: &mut ChaCha8Rng, p: usize) -> impl Fn(&[f64]) -> f64 + Sync {
    let terms: Vec<(usize, usize, f64)> =
        (0..p + 2).map(|_| (rng.random_range(0..p), rng.random_range(0..p), rng.random_range(-2.0..2.0))).collect();
    move |x: &[f64]| terms.iter().map(|&(i, j, c)| c * x[i] * (x[j] + 1.0).sin()).sum()
}

#[test]
fn matches_subset_formula() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for p in 1..=9 {
        let f = random_function(&mut rng, p);
        let background = rows(&mut rng, 5, p);
        let x = rows(&mut rng, 1, p).remove(0);
        let a = exact_shapley(&f, &background, &x, 0).unwrap();
        let oracle = common::shapley_oracle(&f, &background, &x);
        for (u, v) in a.phi.iter().zip(&oracle) {
            assert!((u - v).abs() < 1e-10, "p = {p}");
        }
        assert!(a.efficiency_gap() < 1e-9);
    }
}

#[test]
fn symmetric_features_share_credit() {
    let f = |x: &[f64]| x[0] * x[1] + (x[0] + x[1]).exp() + x[2];
    let background = vec![vec![0.1, 0.1, 0.0], vec![-0.4, -0.4, 1.0], vec![0.3, 0.3, 0.5]];
    let a = exact_shapley(&f, &background, &[0.7, 0.7, -0.2], 0).unwrap();
    assert!((a.phi[0] - a.phi[1]).abs() < 1e-12);
}

#[test]
fn too_many_features_is_a_capacity_error() {
    let p = MAX_SHAPLEY_FEATURES + 1;
    let f = |x: &[f64]| x.iter().sum::<f64>();
    let r = exact_shapley(&f, &[vec![0.0; p]], &vec![1.0; p], 0);
    assert!(matches!(r, Err(Error::Capacity(_))));
}

#[test]
fn sobol_is_reproducible_and_seed_dependent() {
    let f = |x: &[f64]| x[0] * x[1] + x[2];
    let b = [(0.0, 1.0); 3];
    let a1 = sobol_indices(&f, &b, 1024, 4).unwrap();
    let a2 = sobol_indices(&f, &b, 1024, 4).unwrap();
    let other = sobol_indices(&f, &b, 1024, 5).unwrap();
    assert_eq!(a1, a2);
    assert_ne!(a1.s1, other.s1);
}

#[test]
fn sobol_ishigami_close_to_analytic() {
    let pi = std::f64::consts::PI;
    let f = |x: &[f64]| x[0].sin() + 7.0 * x[1].sin().powi(2) + 0.1 * x[2].powi(4) * x[0].sin();
    let s = sobol_indices(&f, &[(-pi, pi); 3], 1 << 14, 1).unwrap();
    let (s1, st) = common::ishigami_indices();
    for i in 0..3 {
        assert!((s.s1[i] - s1[i]).abs() < 0.05 && (s.st[i] - st[i]).abs() < 0.05);
        assert!(s.s1_conf[i] > 0.0 && s.st_conf[i] > 0.0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn efficiency_linearity_and_dummy(seed in 0u64..10_000, p in 2usize..7) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        // the last feature is never read
        let f = random_function(&mut rng, p - 1);
        let g = random_function(&mut rng, p - 1);
        let fs = |x: &[f64]| f(&x[..p - 1]);
        let gs = |x: &[f64]| g(&x[..p - 1]);
        let sum = |x: &[f64]| fs(x) + gs(x);
        let background = rows(&mut rng, 4, p);
        let x = rows(&mut rng, 1, p).remove(0);
        let a = exact_shapley(&fs, &background, &x, 0).unwrap();
        let b = exact_shapley(&gs, &background, &x, 0).unwrap();
        let c = exact_shapley(&sum, &background, &x, 0).unwrap();
        prop_assert!(a.efficiency_gap() < 1e-9 && c.efficiency_gap() < 1e-9);
        for j in 0..p {
            prop_assert!((c.phi[j] - a.phi[j] - b.phi[j]).abs() < 1e-9);
        }
        prop_assert_eq!(a.phi[p - 1], 0.0);
    }

    #[test]
    fn sobol_additive_shares(w in 0.2f64..5.0) {
        // Y = X1 + w·X2 on the unit square: S1 = (1, w²)/(1 + w²), no interaction
        let f = |x: &[f64]| x[0] + w * x[1];
        let s = sobol_indices(&f, &[(0.0, 1.0), (0.0, 1.0)], 1 << 12, 3).unwrap();
        let share = [1.0 / (1.0 + w * w), w * w / (1.0 + w * w)];
        for i in 0..2 {
            prop_assert!((s.s1[i] - share[i]).abs() < 0.03);
            prop_assert!((s.st[i] - s.s1[i]).abs() < 0.03);
        }
    }
}
