// Boosted trees on a noisy nonlinear target: level-wise vs leaf-wise growth.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tennis_momentum::gbt::{evaluate_split_train_test, feature_importance, GbtConfig, Growth, ImportanceKind};

fn main() -> tennis_momentum::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let x: Vec<Vec<f64>> = (0..3000).map(|_| (0..4).map(|_| rng.random_range(-1.0..1.0)).collect()).collect();
    let y: Vec<f64> =
        x.iter().map(|r| (3.0 * r[0]).sin() + r[1] * r[2] + 0.1 * rng.random_range(-1.0..1.0)).collect();

    for growth in [Growth::LevelWise, Growth::LeafWise] {
        let config = GbtConfig { rounds: 150, growth, ..Default::default() };
        let (model, report) = evaluate_split_train_test(&x, &y, 0.8, &config)?;
        let gain = feature_importance(&model, ImportanceKind::Gain);
        println!("{growth:?}: test rmse {:.4}, r2 {:.3}", report.rmse, report.r2.unwrap_or(f64::NAN));
        println!("  gain importance {:.1?}", gain);
    }
    Ok(())
}
