mod common;

use proptest::prelude::*;
use tennis_momentum::metrics::{classification_report, confusion, roc_auc};

proptest! {
    #[test]
    fn auc_equals_pairwise_count(pairs in prop::collection::vec((any::<bool>(), 0u8..8), 2..80)) {
        let labels: Vec<bool> = pairs.iter().map(|p| p.0).collect();
        prop_assume!(labels.iter().any(|l| *l) && labels.iter().any(|l| !*l));
        let scores: Vec<f64> = pairs.iter().map(|p| p.1 as f64 / 8.0).collect();
        let (curve, auc) = roc_auc(&labels, &scores).unwrap();
        prop_assert_eq!(auc, common::pairwise_auc(&labels, &scores));
        prop_assert!((curve.area() - auc).abs() < 1e-12);
        // reversing the scores mirrors the area
        let flipped: Vec<f64> = scores.iter().map(|s| -s).collect();
        prop_assert!((roc_auc(&labels, &flipped).unwrap().1 - (1.0 - auc)).abs() < 1e-12);
    }

    #[test]
    fn confusion_counts_add_up(pairs in prop::collection::vec((any::<bool>(), any::<bool>()), 1..60)) {
        let (truth, pred): (Vec<bool>, Vec<bool>) = pairs.into_iter().unzip();
        let cm = confusion(&truth, &pred).unwrap();
        prop_assert_eq!(cm.total() as usize, truth.len());
        let r = classification_report(&cm);
        let agree = truth.iter().zip(&pred).filter(|(a, b)| a == b).count();
        prop_assert!((r.accuracy - agree as f64 / truth.len() as f64).abs() < 1e-15);
    }
}
