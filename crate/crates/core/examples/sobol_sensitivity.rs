// Sobol indices of the Ishigami function.

use std::f64::consts::PI;

use tennis_momentum::explain::sobol_indices;

fn main() -> tennis_momentum::Result<()> {
    let ishigami = |x: &[f64]| x[0].sin() + 7.0 * x[1].sin().powi(2) + 0.1 * x[2].powi(4) * x[0].sin();
    let s = sobol_indices(&ishigami, &[(-PI, PI); 3], 1 << 13, 42)?;
    for i in 0..3 {
        println!("x{}: S1 {:.3} ± {:.3}   ST {:.3} ± {:.3}", i + 1, s.s1[i], s.s1_conf[i], s.st[i], s.st_conf[i]);
    }
    println!("{}", s.to_json()?);
    Ok(())
}
