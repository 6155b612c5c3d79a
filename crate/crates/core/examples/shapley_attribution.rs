// Exact Shapley attributions for a small nonlinear model.

use tennis_momentum::explain::{dependence_pairs, exact_shapley, shap_summary};

fn main() -> tennis_momentum::Result<()> {
    let names: Vec<String> = ["serve", "rally", "noise"].iter().map(|s| s.to_string()).collect();
    let model = |x: &[f64]| 2.0 * x[0] + x[0] * x[1];
    let background: Vec<Vec<f64>> = (0..16).map(|i| vec![(i % 4) as f64 / 4.0, (i / 4) as f64 / 4.0, 0.5]).collect();

    let mut attributions = Vec::new();
    for (id, x) in [[1.0, 1.0, 0.0], [0.0, 1.0, 1.0], [0.5, 0.0, 0.3]].iter().enumerate() {
        let a = exact_shapley(&model, &background, x, id)?;
        println!("x = {x:?}: phi0 {:.3} + phi {:.3?} = {:.3}", a.phi0, a.phi, a.prediction);
        attributions.push(a);
    }
    for r in shap_summary(&attributions, &names)? {
        println!("{:>6}: mean |phi| {:.3}, sign balance {:+.2}", r.feature, r.mean_abs_phi, r.sign_balance);
    }
    println!("{:?}", dependence_pairs(&names, &attributions, "serve", "rally")?);
    Ok(())
}
