mod common;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tennis_momentum::features::ObservationSequence;
use tennis_momentum::hmm::{baum_welch, forward, posteriors, viterbi, HmmModel, TrainConfig};

fn instance(seed: u64) -> (HmmModel, Vec<usize>, usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.random_range(1..=3);
    let m = rng.random_range(2..=3);
    let t = rng.random_range(1..=8);
    let model = common::random_model(&mut rng, n, m);
    let obs = (0..t).map(|_| rng.random_range(0..m)).collect();
    (model, obs, m)
}

#[test]
fn inference_matches_enumeration() {
    for seed in 0..200 {
        let (model, raw, m) = instance(seed);
        let obs = ObservationSequence::new(raw.clone(), m).unwrap();
        let e = common::enumerate_paths(&model, &raw);
        let fp = forward(&model, &obs).unwrap();
        assert!((fp.log_likelihood - e.likelihood.ln()).abs() < 1e-9, "seed {seed}");
        let post = posteriors(&model, &obs).unwrap();
        for (row, want) in post.gamma.iter().zip(&e.gamma) {
            for (a, b) in row.iter().zip(want) {
                assert!((a - b).abs() < 1e-9);
            }
        }
        for (a, b) in post.xi.iter().flatten().flatten().zip(e.xi.iter().flatten().flatten()) {
            assert!((a - b).abs() < 1e-9);
        }
        let (path, log_p) = viterbi(&model, &obs).unwrap();
        assert!((log_p - e.best_prob.ln()).abs() < 1e-9);
        assert!((model.path_log_probability(&path, &raw) - log_p).abs() < 1e-9);
        if e.second_prob < e.best_prob * (1.0 - 1e-9) {
            assert_eq!(path, e.best_path, "seed {seed}");
        }
    }
}

#[test]
fn long_sequences_stay_finite() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let model = common::random_model(&mut rng, 3, 4);
    let (_, raw) = model.sample(20_000, &mut rng);
    let obs = ObservationSequence::new(raw, 4).unwrap();
    let ll = forward(&model, &obs).unwrap().log_likelihood;
    assert!(ll.is_finite() && ll < 0.0);
    assert!(viterbi(&model, &obs).unwrap().1.is_finite());
}

#[test]
fn state_relabelling_leaves_likelihood_unchanged() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let model = common::random_model(&mut rng, 3, 3);
    let (_, raw) = model.sample(50, &mut rng);
    let obs = ObservationSequence::new(raw, 3).unwrap();
    let a = forward(&model, &obs).unwrap().log_likelihood;
    let b = forward(&model.permute_states(&[2, 0, 1]), &obs).unwrap().log_likelihood;
    assert!((a - b).abs() < 1e-10);
}

#[test]
fn em_recovers_transitions_up_to_relabelling() {
    let truth = HmmModel::new(
        vec![0.5, 0.5],
        vec![vec![0.95, 0.05], vec![0.1, 0.9]],
        vec![vec![0.6, 0.3, 0.1], vec![0.1, 0.3, 0.6]],
    )
    .unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let (_, raw) = truth.sample(5000, &mut rng);
    let obs = ObservationSequence::new(raw, 3).unwrap();
    let fit = baum_welch(&[obs], 2, 3, &TrainConfig { restarts: 20, seed: 1, ..Default::default() }).unwrap();
    let err = |p: [usize; 2]| -> f64 {
        (0..2)
            .flat_map(|i| (0..2).map(move |j| (i, j)))
            .map(|(i, j)| (fit.model.a[p[i]][p[j]] - truth.a[i][j]).abs())
            .fold(0.0, f64::max)
    };
    assert!(err([0, 1]).min(err([1, 0])) < 0.05);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn em_never_decreases_likelihood(seed in 0u64..10_000, n in 1usize..=3, len in 2usize..120) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let gen = common::random_model(&mut rng, n, 3);
        let (_, raw) = gen.sample(len, &mut rng);
        let obs = ObservationSequence::new(raw, 3).unwrap();
        let fit = baum_welch(&[obs], n, 3, &TrainConfig { restarts: 2, seed, max_iterations: 60, ..Default::default() }).unwrap();
        for w in fit.trace.windows(2) {
            prop_assert!(w[1] >= w[0] - 1e-9, "{} -> {}", w[0], w[1]);
        }
        fit.model.validate().unwrap();
    }

    #[test]
    fn posteriors_are_distributions(seed in 0u64..10_000) {
        let (model, raw, m) = instance(seed);
        let post = posteriors(&model, &ObservationSequence::new(raw, m).unwrap()).unwrap();
        for row in &post.gamma {
            prop_assert!((row.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
        for (t, slice) in post.xi.iter().enumerate() {
            // marginalising ξ_t over the next state gives γ_t
            for (i, row) in slice.iter().enumerate() {
                prop_assert!((row.iter().sum::<f64>() - post.gamma[t][i]).abs() < 1e-12);
            }
        }
    }
}
