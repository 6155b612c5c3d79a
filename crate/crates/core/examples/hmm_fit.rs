// Sample from a known two-state model, refit it with Baum-Welch and decode.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tennis_momentum::features::ObservationSequence;
use tennis_momentum::hmm::{baum_welch, forward, viterbi, HmmModel, TrainConfig};

fn main() -> tennis_momentum::Result<()> {
    let truth = HmmModel::new(
        vec![0.5, 0.5],
        vec![vec![0.9, 0.1], vec![0.2, 0.8]],
        vec![vec![0.8, 0.15, 0.05], vec![0.1, 0.3, 0.6]],
    )?;
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (states, symbols) = truth.sample(2000, &mut rng);
    let obs = ObservationSequence::new(symbols, 3)?;

    let fit = baum_welch(std::slice::from_ref(&obs), 2, 3, &TrainConfig { restarts: 4, ..Default::default() })?;
    println!("restart {} after {} likelihood evaluations", fit.restart, fit.trace.len());
    println!("log L true {:.2}  fitted {:.2}", forward(&truth, &obs)?.log_likelihood, fit.trace.last().unwrap());
    for (i, row) in fit.model.a.iter().enumerate() {
        println!("A[{i}] = {row:.3?}");
    }

    let (path, log_p) = viterbi(&fit.model, &obs)?;
    // states are only identified up to relabelling
    let same = path.iter().zip(&states).filter(|(a, b)| a == b).count() as f64 / states.len() as f64;
    println!("viterbi log p {log_p:.2}, agreement with hidden path {:.3}", same.max(1.0 - same));
    Ok(())
}
