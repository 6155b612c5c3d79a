use std::io::Write;
use std::thread;

use serde::{Deserialize, Serialize};

use super::Predictor;
use crate::error::{Error, Result};

pub const MAX_SHAPLEY_FEATURES: usize = 16;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShapleyAttribution {
    pub instance_id: usize,
    pub instance: Vec<f64>,
    pub phi: Vec<f64>,
    /// Mean prediction over the background rows.
    pub phi0: f64,
    pub prediction: f64,
    pub background_size: usize,
}

impl ShapleyAttribution {
    pub fn efficiency_gap(&self) -> f64 {
        (self.phi0 + self.phi.iter().sum::<f64>() - self.prediction).abs()
    }
}

/// Value of every coalition: mean prediction with coalition features taken
/// from `instance` and the rest from each background row.
fn coalition_values(predict: &Predictor<'_>, background: &[Vec<f64>], instance: &[f64]) -> Vec<f64> {
    let p = instance.len();
    let masks = 1usize << p;
    let value = |mask: usize, row: &mut Vec<f64>| {
        let mut total = 0.0;
        for b in background {
            for j in 0..p {
                row[j] = if mask >> j & 1 == 1 { instance[j] } else { b[j] };
            }
            total += predict(row);
        }
        total / background.len() as f64
    };
    let workers = thread::available_parallelism().map_or(1, |n| n.get()).min(masks);
    let chunk = masks.div_ceil(workers);
    let mut out = vec![0.0; masks];
    thread::scope(|s| {
        for (c, slot) in out.chunks_mut(chunk).enumerate() {
            let value = &value;
            s.spawn(move || {
                let mut row = vec![0.0; p];
                for (k, v) in slot.iter_mut().enumerate() {
                    *v = value(c * chunk + k, &mut row);
                }
            });
        }
    });
    out
}

/// Exact Shapley values by enumerating all `2^p` coalitions with an
/// interventional value function over `background`.
pub fn exact_shapley(
    predict: &Predictor<'_>,
    background: &[Vec<f64>],
    instance: &[f64],
    instance_id: usize,
) -> Result<ShapleyAttribution> {
    let p = instance.len();
    if p > MAX_SHAPLEY_FEATURES {
        return Err(Error::Capacity(format!(
            "{p} features exceed the exact-enumeration limit of {MAX_SHAPLEY_FEATURES}"
        )));
    }
    if background.is_empty() {
        return Err(Error::domain("background set is empty"));
    }
    if let Some(i) = background.iter().position(|r| r.len() != p) {
        return Err(Error::domain(format!("background row {i} has wrong arity")));
    }
    let values = coalition_values(predict, background, instance);
    if let Some(mask) = values.iter().position(|v| !v.is_finite()) {
        return Err(Error::Evaluation { row: instance_id, message: format!("non-finite value for coalition {mask:#b}") });
    }

    // weight for a coalition of size s not containing j: s!(p−s−1)!/p!
    let mut weight = vec![0.0; p.max(1)];
    for (s, w) in weight.iter_mut().enumerate().take(p) {
        let mut x = 1.0 / p as f64;
        // 1 / (p · C(p−1, s))
        for k in 0..s {
            x *= (k + 1) as f64 / (p - 1 - k) as f64;
        }
        *w = x;
    }
    let mut phi = vec![0.0; p];
    for (mask, v) in values.iter().enumerate() {
        let size = mask.count_ones() as usize;
        for (j, phi_j) in phi.iter_mut().enumerate() {
            if mask >> j & 1 == 0 {
                *phi_j += weight[size] * (values[mask | 1 << j] - v);
            }
        }
    }
    Ok(ShapleyAttribution {
        instance_id,
        instance: instance.to_vec(),
        phi,
        phi0: values[0],
        prediction: values[(1 << p) - 1],
        background_size: background.len(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureRank {
    pub feature: String,
    pub index: usize,
    pub mean_abs_phi: f64,
    /// Mean of sign(φ) across attributions.
    pub sign_balance: f64,
}

/// Features ranked by mean |φ|, descending; ties keep feature order.
pub fn shap_summary(attributions: &[ShapleyAttribution], names: &[String]) -> Result<Vec<FeatureRank>> {
    if attributions.is_empty() {
        return Err(Error::domain("no attributions to summarise"));
    }
    let p = names.len();
    if attributions.iter().any(|a| a.phi.len() != p) {
        return Err(Error::domain(format!("attribution arity differs from {p} feature names")));
    }
    let n = attributions.len() as f64;
    let mut ranks: Vec<FeatureRank> = names
        .iter()
        .enumerate()
        .map(|(j, name)| {
            let sign = |x: f64| if x > 0.0 { 1.0 } else if x < 0.0 { -1.0 } else { 0.0 };
            FeatureRank {
                feature: name.clone(),
                index: j,
                mean_abs_phi: attributions.iter().map(|a| a.phi[j].abs()).sum::<f64>() / n,
                sign_balance: attributions.iter().map(|a| sign(a.phi[j])).sum::<f64>() / n,
            }
        })
        .collect();
    ranks.sort_by(|a, b| b.mean_abs_phi.total_cmp(&a.mean_abs_phi));
    Ok(ranks)
}

/// `(value_a, value_b, φ_a)` per attribution, sorted by `value_a`.
pub fn dependence_pairs(
    names: &[String],
    attributions: &[ShapleyAttribution],
    feature_a: &str,
    feature_b: &str,
) -> Result<Vec<(f64, f64, f64)>> {
    let find = |f: &str| names.iter().position(|n| n == f).ok_or_else(|| Error::domain(format!("unknown feature {f}")));
    let (a, b) = (find(feature_a)?, find(feature_b)?);
    let mut out: Vec<(f64, f64, f64)> = attributions
        .iter()
        .map(|at| {
            if at.instance.len() != names.len() || at.phi.len() != names.len() {
                return Err(Error::domain("attribution arity differs from feature names"));
            }
            Ok((at.instance[a], at.instance[b], at.phi[a]))
        })
        .collect::<Result<_>>()?;
    out.sort_by(|x, y| x.0.total_cmp(&y.0));
    Ok(out)
}

/// Long format: `sample_id,feature,value,phi`.
pub fn write_attributions_csv<W: Write>(attributions: &[ShapleyAttribution], names: &[String], sink: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(["sample_id", "feature", "value", "phi"]).map_err(|e| Error::Codec(e.to_string()))?;
    for a in attributions {
        for (j, name) in names.iter().enumerate() {
            w.write_record([a.instance_id.to_string(), name.clone(), a.instance[j].to_string(), a.phi[j].to_string()])
                .map_err(|e| Error::Codec(e.to_string()))?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn write_dependence_csv<W: Write>(
    pairs: &[(f64, f64, f64)],
    feature_a: &str,
    feature_b: &str,
    sink: W,
) -> Result<()> {
    let mut w = csv::Writer::from_writer(sink);
    w.write_record([feature_a.to_string(), feature_b.to_string(), format!("phi_{feature_a}")])
        .map_err(|e| Error::Codec(e.to_string()))?;
    for (a, b, phi) in pairs {
        w.write_record([a.to_string(), b.to_string(), phi.to_string()]).map_err(|e| Error::Codec(e.to_string()))?;
    }
    w.flush()?;
    Ok(())
}
