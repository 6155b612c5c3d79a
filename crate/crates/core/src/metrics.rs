//! Binary classification metrics and Pearson correlation.
//!
//! The positive class is label `true` (player 1 wins the point). Ratios with a
//! zero denominator are reported as 0 and named in the `undefined` list.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    pub tp: u64,
    pub fp: u64,
    #[serde(rename = "fn")]
    pub fn_: u64,
    pub tn: u64,
}

impl ConfusionMatrix {
    pub fn total(&self) -> u64 {
        self.tp + self.fp + self.fn_ + self.tn
    }
}

pub fn confusion(labels: &[bool], predictions: &[bool]) -> Result<ConfusionMatrix> {
    if labels.len() != predictions.len() {
        return Err(Error::domain(format!(
            "{} labels but {} predictions",
            labels.len(),
            predictions.len()
        )));
    }
    if labels.is_empty() {
        return Err(Error::domain("confusion matrix needs at least one sample"));
    }
    let mut cm = ConfusionMatrix::default();
    for (&y, &p) in labels.iter().zip(predictions) {
        match (y, p) {
            (true, true) => cm.tp += 1,
            (false, true) => cm.fp += 1,
            (true, false) => cm.fn_ += 1,
            (false, false) => cm.tn += 1,
        }
    }
    Ok(cm)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub accuracy: f64,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    /// Metrics whose denominator was zero.
    pub undefined: Vec<String>,
}

pub fn classification_report(cm: &ConfusionMatrix) -> ClassificationReport {
    let mut undefined = Vec::new();
    let mut ratio = |name: &str, num: u64, den: u64| {
        if den == 0 {
            undefined.push(name.to_string());
            0.0
        } else {
            num as f64 / den as f64
        }
    };
    let accuracy = ratio("accuracy", cm.tp + cm.tn, cm.total());
    let precision = ratio("precision", cm.tp, cm.tp + cm.fp);
    let recall = ratio("recall", cm.tp, cm.tp + cm.fn_);
    let f1 = ratio("f1", 2 * cm.tp, 2 * cm.tp + cm.fp + cm.fn_);
    ClassificationReport { accuracy, precision, recall, f1, undefined }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RocPoint {
    pub fpr: f64,
    pub tpr: f64,
    /// Scores `>= threshold` are classified positive; the origin uses `f64::MAX`.
    pub threshold: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RocCurve {
    pub points: Vec<RocPoint>,
}

impl RocCurve {
    /// Trapezoidal area under the curve.
    pub fn area(&self) -> f64 {
        self.points
            .windows(2)
            .map(|w| (w[1].fpr - w[0].fpr) * (w[1].tpr + w[0].tpr) / 2.0)
            .sum()
    }

    pub fn write_csv<W: Write>(&self, mut sink: W) -> Result<()> {
        writeln!(sink, "fpr,tpr,threshold")?;
        for p in &self.points {
            writeln!(sink, "{},{},{}", p.fpr, p.tpr, p.threshold)?;
        }
        Ok(())
    }
}

/// ROC curve over the distinct scores (descending) and the AUC as the
/// Mann-Whitney statistic `P(s⁺ > s⁻) + ½·P(s⁺ = s⁻)`.
pub fn roc_auc(labels: &[bool], scores: &[f64]) -> Result<(RocCurve, f64)> {
    if labels.len() != scores.len() {
        return Err(Error::domain("labels and scores differ in length"));
    }
    if scores.iter().any(|s| s.is_nan()) {
        return Err(Error::domain("scores contain NaN"));
    }
    let pos = labels.iter().filter(|y| **y).count() as u64;
    let neg = labels.len() as u64 - pos;
    if pos == 0 || neg == 0 {
        return Err(Error::domain("AUC needs both classes present"));
    }
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]));

    let mut points = vec![RocPoint { fpr: 0.0, tpr: 0.0, threshold: f64::MAX }];
    // counted in halves so that ties stay integral
    let mut twice_concordant: u64 = 0;
    let (mut tp, mut fp) = (0u64, 0u64);
    let mut i = 0;
    while i < order.len() {
        let s = scores[order[i]];
        let (mut gp, mut gn) = (0u64, 0u64);
        while i < order.len() && scores[order[i]] == s {
            if labels[order[i]] {
                gp += 1;
            } else {
                gn += 1;
            }
            i += 1;
        }
        // positives in this group beat every negative still below it
        twice_concordant += 2 * gp * (neg - fp - gn) + gp * gn;
        tp += gp;
        fp += gn;
        points.push(RocPoint { fpr: fp as f64 / neg as f64, tpr: tp as f64 / pos as f64, threshold: s });
    }
    let auc = twice_concordant as f64 / (2 * pos * neg) as f64;
    Ok((RocCurve { points }, auc))
}

/// Product-moment correlation coefficient.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() || x.len() < 2 {
        return Err(Error::domain("pearson needs two equal-length vectors of length >= 2"));
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::domain("pearson is undefined for a constant vector"));
    }
    Ok((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}

/// The serialised evaluation bundle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricReport {
    pub accuracy: f64,
    pub auc: f64,
    pub recall: f64,
    pub f1: f64,
    pub precision: f64,
    pub confusion: ConfusionMatrix,
    pub roc: Vec<RocPoint>,
    pub undefined: Vec<String>,
}

impl MetricReport {
    /// Thresholds `scores` at `threshold` (inclusive) for the hard predictions.
    pub fn from_scores(labels: &[bool], scores: &[f64], threshold: f64) -> Result<Self> {
        let preds: Vec<bool> = scores.iter().map(|s| *s >= threshold).collect();
        let cm = confusion(labels, &preds)?;
        let rep = classification_report(&cm);
        let mut undefined = rep.undefined;
        let (roc, auc) = match roc_auc(labels, scores) {
            Ok((curve, auc)) => (curve.points, auc),
            Err(_) => {
                undefined.push("auc".to_string());
                (Vec::new(), 0.0)
            }
        };
        Ok(MetricReport {
            accuracy: rep.accuracy,
            auc,
            recall: rep.recall,
            f1: rep.f1,
            precision: rep.precision,
            confusion: cm,
            roc,
            undefined,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn confusion_fixtures() {
        let cm = confusion(&[true, false, true], &[true, false, true]).unwrap();
        assert_eq!(cm, ConfusionMatrix { tp: 2, fp: 0, fn_: 0, tn: 1 });
        let labels: Vec<bool> = (0..10).map(|i| i < 5).collect();
        let cm = confusion(&labels, &[true; 10]).unwrap();
        assert_eq!((cm.tp, cm.fp), (5, 5));
        assert!(confusion(&[true], &[true, false]).is_err());
    }

    #[test]
    fn inverted_predictions_swap_cells() {
        let labels = [true, false, true, true, false];
        let preds = [true, true, false, true, false];
        let inv: Vec<bool> = preds.iter().map(|p| !p).collect();
        let a = confusion(&labels, &preds).unwrap();
        let b = confusion(&labels, &inv).unwrap();
        assert_eq!((a.tp, a.tn, a.fp, a.fn_), (b.fn_, b.fp, b.tn, b.tp));
    }

    #[test]
    fn report_formulas() {
        let r = classification_report(&ConfusionMatrix { tp: 2, fp: 0, fn_: 0, tn: 1 });
        assert_eq!((r.accuracy, r.precision, r.recall, r.f1), (1.0, 1.0, 1.0, 1.0));
        let r = classification_report(&ConfusionMatrix { tp: 5, fp: 5, fn_: 0, tn: 0 });
        assert_eq!(r.precision, 0.5);
        assert_eq!(r.recall, 1.0);
        assert!((r.f1 - 2.0 / 3.0).abs() < 1e-15);
        assert!(r.undefined.is_empty());
    }

    #[test]
    fn zero_denominators_flagged() {
        let r = classification_report(&ConfusionMatrix { tp: 0, fp: 0, fn_: 0, tn: 4 });
        assert_eq!(r.precision, 0.0);
        assert!(r.undefined.contains(&"precision".to_string()));
        assert!(r.undefined.contains(&"recall".to_string()));
        assert!(r.undefined.contains(&"f1".to_string()));
    }

    #[test]
    fn auc_fixtures() {
        let (_, auc) = roc_auc(&[true, false, true, false], &[0.9, 0.8, 0.4, 0.3]).unwrap();
        assert_eq!(auc, 0.75);
        let (_, auc) = roc_auc(&[true, true, false], &[0.9, 0.8, 0.1]).unwrap();
        assert_eq!(auc, 1.0);
        let (curve, auc) = roc_auc(&[true, false, true, false], &[0.5; 4]).unwrap();
        assert_eq!(auc, 0.5);
        assert_eq!(curve.points.len(), 2);
        assert!(roc_auc(&[true, true], &[0.1, 0.2]).is_err());
    }

    #[test]
    fn curve_is_monotone_and_matches_auc() {
        let labels = [true, false, false, true, true, false, true];
        let scores = [0.3, 0.3, 0.9, 0.8, 0.1, 0.2, 0.8];
        let (curve, auc) = roc_auc(&labels, &scores).unwrap();
        assert_eq!(curve.points.first().map(|p| (p.fpr, p.tpr)), Some((0.0, 0.0)));
        assert_eq!(curve.points.last().map(|p| (p.fpr, p.tpr)), Some((1.0, 1.0)));
        for w in curve.points.windows(2) {
            assert!(w[1].fpr >= w[0].fpr && w[1].tpr >= w[0].tpr);
            assert!(w[1].threshold < w[0].threshold);
        }
        assert!((curve.area() - auc).abs() < 1e-12);
    }

    #[test]
    fn pearson_fixtures() {
        let x = [1.0, 2.0, 3.0, 4.0];
        let y: Vec<f64> = x.iter().map(|v| 2.0 * v + 1.0).collect();
        assert!((pearson(&x, &y).unwrap() - 1.0).abs() < 1e-15);
        let neg: Vec<f64> = x.iter().map(|v| -v).collect();
        assert!((pearson(&x, &neg).unwrap() + 1.0).abs() < 1e-15);
        assert!((pearson(&[1.0, 2.0, 3.0], &[1.0, 3.0, 2.0]).unwrap() - 0.5).abs() < 1e-15);
        assert!(pearson(&[1.0, 1.0], &[1.0, 2.0]).is_err());
    }

    #[test]
    fn majority_predictor_accuracy() {
        let labels: Vec<bool> = (0..13).map(|i| i % 3 != 0).collect();
        let share = labels.iter().filter(|l| **l).count() as f64 / 13.0;
        let cm = confusion(&labels, &[true; 13]).unwrap();
        assert_eq!(classification_report(&cm).accuracy, share);
    }

    #[test]
    fn report_json_shape() {
        let rep = MetricReport::from_scores(&[true, false, true], &[0.9, 0.2, 0.4], 0.5).unwrap();
        let v = serde_json::to_value(&rep).unwrap();
        for key in ["accuracy", "auc", "recall", "f1", "precision", "roc"] {
            assert!(v.get(key).is_some(), "{key}");
        }
        assert_eq!(v["confusion"]["fn"], 1);
        assert_eq!(rep.auc, 1.0);
    }
}
