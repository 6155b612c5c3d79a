// Classification metrics and ROC curve from scores.

use tennis_momentum::metrics::{pearson, roc_auc, MetricReport};

fn main() -> tennis_momentum::Result<()> {
    let labels = [true, true, false, true, false, false, true, false];
    let scores = [0.9, 0.8, 0.7, 0.6, 0.4, 0.3, 0.3, 0.1];
    let report = MetricReport::from_scores(&labels, &scores, 0.5)?;
    println!(
        "accuracy {:.3} precision {:.3} recall {:.3} f1 {:.3} auc {:.4}",
        report.accuracy, report.precision, report.recall, report.f1, report.auc
    );
    println!("confusion {:?}", report.confusion);

    let (curve, auc) = roc_auc(&labels, &scores)?;
    for p in &curve.points {
        println!("  fpr {:.2} tpr {:.2}", p.fpr, p.tpr);
    }
    println!("trapezoid area {:.4} = {:.4}", curve.area(), auc);
    println!("pearson {:.3}", pearson(&[1.0, 2.0, 3.0, 4.0], &[1.5, 1.9, 3.2, 4.4])?);
    Ok(())
}
