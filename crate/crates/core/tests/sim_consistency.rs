mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tennis_momentum::ingest::{validate_log, Player};
use tennis_momentum::sim::{game_win_probability, play_game, simulate_match, SimConfig};

#[test]
fn closed_form_agrees_with_markov_recursion() {
    for k in 1..100 {
        let p = k as f64 / 100.0;
        let g = game_win_probability(p).unwrap();
        assert!((g - common::game_hold_by_recursion(p)).abs() < 1e-12, "p = {p}");
        // returner's view of the same game
        assert!((g + game_win_probability(1.0 - p).unwrap() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn simulated_games_within_three_sigma() {
    let n = 200_000;
    for (i, p) in [0.35, 0.55, 0.8].into_iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(i as u64);
        let held = (0..n).filter(|_| play_game(p, &mut rng)).count() as f64 / n as f64;
        let g = game_win_probability(p).unwrap();
        assert!((held - g).abs() <= 3.0 * (g * (1.0 - g) / n as f64).sqrt(), "p = {p}");
    }
}

#[test]
fn serve_frequencies_match_configuration() {
    let (mut won, mut served) = ([0u32; 2], [0u32; 2]);
    for seed in 0..40 {
        let cfg = SimConfig { p_serve_1: 0.7, p_serve_2: 0.58, seed, ..Default::default() };
        for pt in simulate_match(&cfg).unwrap().points {
            served[pt.server.index()] += 1;
            won[pt.server.index()] += (pt.point_victor == pt.server) as u32;
        }
    }
    for (i, p) in [0.7, 0.58].into_iter().enumerate() {
        let n = served[i] as f64;
        assert!((won[i] as f64 / n - p).abs() <= 3.0 * (p * (1.0 - p) / n).sqrt());
    }
}

#[test]
fn equal_players_win_equally_often() {
    let n = 10_000;
    let p1 = (0..n)
        .filter(|&seed| {
            let cfg = SimConfig { best_of: 3, seed, ..Default::default() };
            simulate_match(&cfg).unwrap().match_winner() == Some(Player::One)
        })
        .count();
    assert!((p1 as f64 / n as f64 - 0.5).abs() <= 0.02);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn logs_pass_validation(seed in any::<u64>(), p1 in 0.3f64..0.9, p2 in 0.3f64..0.9,
                            coupling in 0.0f64..0.3, flags in any::<bool>(), bo5 in any::<bool>()) {
        let cfg = SimConfig {
            p_serve_1: p1,
            p_serve_2: p2,
            seed,
            momentum_coupling: coupling,
            extended_flags: flags,
            best_of: if bo5 { 5 } else { 3 },
            ..Default::default()
        };
        let log = simulate_match(&cfg).unwrap();
        let report = validate_log(&log);
        prop_assert!(report.errors.is_empty(), "{:?}", report.errors);
        prop_assert_eq!(simulate_match(&cfg).unwrap(), log);
    }
}
