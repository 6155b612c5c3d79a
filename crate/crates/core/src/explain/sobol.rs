use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::Predictor;
use crate::error::{Error, Result};

const BOOTSTRAP_RESAMPLES: usize = 100;
const MAX_BASE: usize = 1 << 16;

#[derive(Debug, Clone, PartialEq)]
pub struct SobolIndices {
    pub s1: Vec<f64>,
    pub st: Vec<f64>,
    /// Bootstrap 95% half-widths.
    pub s1_conf: Vec<f64>,
    pub st_conf: Vec<f64>,
    pub n_base: usize,
    pub seed: u64,
    /// Output variance was zero; all indices are reported as 0.
    pub zero_variance: bool,
}

#[derive(Serialize, Deserialize)]
struct HalfWidth {
    s1: f64,
    st: f64,
}

#[derive(Serialize, Deserialize)]
struct SobolExport {
    s1: Vec<f64>,
    st: Vec<f64>,
    ci: Vec<HalfWidth>,
    n: usize,
    seed: u64,
    zero_variance: bool,
}

impl SobolIndices {
    pub fn to_json(&self) -> Result<String> {
        let export = SobolExport {
            s1: self.s1.clone(),
            st: self.st.clone(),
            ci: self.s1_conf.iter().zip(&self.st_conf).map(|(a, b)| HalfWidth { s1: *a, st: *b }).collect(),
            n: self.n_base,
            seed: self.seed,
            zero_variance: self.zero_variance,
        };
        Ok(serde_json::to_string_pretty(&export)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let e: SobolExport = serde_json::from_str(text)?;
        Ok(SobolIndices {
            s1_conf: e.ci.iter().map(|c| c.s1).collect(),
            st_conf: e.ci.iter().map(|c| c.st).collect(),
            s1: e.s1,
            st: e.st,
            n_base: e.n,
            seed: e.seed,
            zero_variance: e.zero_variance,
        })
    }
}

/// Observed per-column `(min, max)`.
pub fn bounds_from_rows(rows: &[Vec<f64>]) -> Result<Vec<(f64, f64)>> {
    let first = rows.first().ok_or_else(|| Error::domain("no rows to take bounds from"))?;
    let mut bounds: Vec<(f64, f64)> = first.iter().map(|v| (*v, *v)).collect();
    for row in rows {
        if row.len() != bounds.len() {
            return Err(Error::domain("rows have differing arity"));
        }
        for (b, v) in bounds.iter_mut().zip(row) {
            b.0 = b.0.min(*v);
            b.1 = b.1.max(*v);
        }
    }
    Ok(bounds)
}

struct Evaluations {
    fa: Vec<f64>,
    fb: Vec<f64>,
    /// `fab[i][k]`: row k of A with column i taken from B.
    fab: Vec<Vec<f64>>,
}

fn estimate(ev: &Evaluations, rows: &[usize]) -> Option<(Vec<f64>, Vec<f64>)> {
    let n = rows.len() as f64;
    let mean = rows.iter().map(|&k| ev.fa[k] + ev.fb[k]).sum::<f64>() / (2.0 * n);
    let var = rows.iter().map(|&k| (ev.fa[k] - mean).powi(2) + (ev.fb[k] - mean).powi(2)).sum::<f64>() / (2.0 * n);
    if var <= f64::EPSILON * mean.abs().max(1.0).powi(2) {
        return None;
    }
    let s1 = ev
        .fab
        .iter()
        .map(|fab| rows.iter().map(|&k| ev.fb[k] * (fab[k] - ev.fa[k])).sum::<f64>() / n / var)
        .collect();
    let st = ev
        .fab
        .iter()
        .map(|fab| rows.iter().map(|&k| (ev.fa[k] - fab[k]).powi(2)).sum::<f64>() / (2.0 * n) / var)
        .collect();
    Some((s1, st))
}

fn half_width(samples: &[f64]) -> f64 {
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    1.96 * var.sqrt()
}

/// First-order (Saltelli) and total-effect (Jansen) indices for independent
/// uniform inputs on `bounds`, with bootstrap half-widths.
pub fn sobol_indices(predict: &Predictor<'_>, bounds: &[(f64, f64)], n_base: usize, seed: u64) -> Result<SobolIndices> {
    let d = bounds.len();
    if d == 0 {
        return Err(Error::domain("no input dimensions"));
    }
    if 2 * d > sobol_burley::NUM_DIMENSIONS as usize {
        return Err(Error::Capacity(format!("{d} inputs exceed the sampler's dimension limit")));
    }
    if !n_base.is_power_of_two() || n_base < 2 || n_base > MAX_BASE {
        return Err(Error::domain(format!("n_base {n_base} must be a power of two in 2..={MAX_BASE}")));
    }
    for (i, (lo, hi)) in bounds.iter().enumerate() {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::domain(format!("degenerate bounds for input {i}: ({lo}, {hi})")));
        }
    }

    let seed32 = (seed ^ (seed >> 32)) as u32;
    let point = |k: usize, dim: usize| {
        let (lo, hi) = bounds[dim % d];
        lo + (hi - lo) * f64::from(sobol_burley::sample(k as u32, dim as u32, seed32))
    };
    let a: Vec<Vec<f64>> = (0..n_base).map(|k| (0..d).map(|j| point(k, j)).collect()).collect();
    let b: Vec<Vec<f64>> = (0..n_base).map(|k| (d..2 * d).map(|j| point(k, j)).collect()).collect();

    let mut row_counter = 0usize;
    let mut eval = |row: &[f64]| -> Result<f64> {
        let y = predict(row);
        row_counter += 1;
        if y.is_finite() {
            Ok(y)
        } else {
            Err(Error::Evaluation { row: row_counter - 1, message: format!("non-finite output at {row:?}") })
        }
    };
    let fa = a.iter().map(|r| eval(r)).collect::<Result<Vec<_>>>()?;
    let fb = b.iter().map(|r| eval(r)).collect::<Result<Vec<_>>>()?;
    let mut fab = Vec::with_capacity(d);
    for i in 0..d {
        let mut col = Vec::with_capacity(n_base);
        for k in 0..n_base {
            let mut row = a[k].clone();
            row[i] = b[k][i];
            col.push(eval(&row)?);
        }
        fab.push(col);
    }
    let ev = Evaluations { fa, fb, fab };

    let all: Vec<usize> = (0..n_base).collect();
    let Some((s1, st)) = estimate(&ev, &all) else {
        return Ok(SobolIndices {
            s1: vec![0.0; d],
            st: vec![0.0; d],
            s1_conf: vec![0.0; d],
            st_conf: vec![0.0; d],
            n_base,
            seed,
            zero_variance: true,
        });
    };

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut boot_s1 = vec![Vec::with_capacity(BOOTSTRAP_RESAMPLES); d];
    let mut boot_st = vec![Vec::with_capacity(BOOTSTRAP_RESAMPLES); d];
    let mut idx = vec![0usize; n_base];
    for _ in 0..BOOTSTRAP_RESAMPLES {
        for slot in idx.iter_mut() {
            *slot = rng.random_range(0..n_base);
        }
        if let Some((r1, rt)) = estimate(&ev, &idx) {
            for i in 0..d {
                boot_s1[i].push(r1[i]);
                boot_st[i].push(rt[i]);
            }
        }
    }
    let conf = |boot: &[Vec<f64>]| boot.iter().map(|b| if b.len() > 1 { half_width(b) } else { 0.0 }).collect();
    Ok(SobolIndices { s1_conf: conf(&boot_s1), st_conf: conf(&boot_st), s1, st, n_base, seed, zero_variance: false })
}
