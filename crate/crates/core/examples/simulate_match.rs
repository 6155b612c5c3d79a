// Simulated matches and the closed-form probability of holding serve.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tennis_momentum::sim::{game_win_probability, play_game, simulate_match, SimConfig};

fn main() -> tennis_momentum::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for p in [0.5, 0.6, 0.7] {
        let n = 200_000;
        let held = (0..n).filter(|_| play_game(p, &mut rng)).count() as f64 / n as f64;
        println!("p = {p}: closed form {:.4}, simulated {held:.4}", game_win_probability(p)?);
    }

    let mut wins = 0;
    for seed in 0..200 {
        let log = simulate_match(&SimConfig { p_serve_1: 0.66, p_serve_2: 0.62, seed, ..Default::default() })?;
        if log.match_winner() == Some(tennis_momentum::Player::One) {
            wins += 1;
        }
    }
    println!("player 1 won {wins} of 200 best-of-5 matches");
    Ok(())
}
