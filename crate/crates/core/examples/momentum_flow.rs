// Momentum series, swings and performance for one simulated match.

use tennis_momentum::momentum::{analyze_match, MomentumSettings};
use tennis_momentum::sim::{simulate_match, SimConfig};

fn main() -> tennis_momentum::Result<()> {
    let log = simulate_match(&SimConfig { p_serve_1: 0.7, p_serve_2: 0.6, momentum_coupling: 0.15, seed: 5, ..Default::default() })?;
    let result = analyze_match(&log, &MomentumSettings::default())?;

    println!("{} points, winner {:?}", log.len(), log.match_winner());
    for (p, v) in log.points.iter().zip(&result.series.values).step_by(25) {
        let bar = "#".repeat((v.abs() * 20.0) as usize);
        println!("{:>4} set {} {:+.3} {}{}", p.point_no, p.set_no, v, if *v >= 0.0 { "+" } else { "-" }, bar);
    }
    println!("{} swings", result.swings.len());
    for s in result.swings.iter().take(5) {
        println!("  point {:>4}: {:?} ({:+.3} -> {:+.3})", s.index + 1, s.direction, s.pre, s.post);
    }
    let perf = result.performance;
    println!("peak |momentum| p1 {:.3}, p2 {:.3}", perf.player1.max_abs_momentum, perf.player2.max_abs_momentum);
    Ok(())
}
