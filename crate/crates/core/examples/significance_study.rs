// Fitted momentum versus a Gaussian-noise column as a next-point predictor.

use tennis_momentum::pipeline::{significance_study, simulate_matches, RunConfig};

fn main() -> tennis_momentum::Result<()> {
    for coupling in [0.15, 0.0] {
        let mut config = RunConfig { sim_matches: 12, seed: 1, ..Default::default() };
        config.sim.momentum_coupling = coupling;
        config.gbt.rounds = 60;
        let logs = simulate_matches(&config)?;
        let r = significance_study(&logs, &config)?;
        println!(
            "coupling {coupling}: accuracy {:.3} vs {:.3}, auc {:.3} vs {:.3}, momentum rank {} vs {}",
            r.real.metrics.accuracy,
            r.baseline.metrics.accuracy,
            r.real.metrics.auc,
            r.baseline.metrics.auc,
            r.real.momentum_rank,
            r.baseline.momentum_rank
        );
    }
    Ok(())
}
