//! Table-style metrics from a confusion matrix.

use pdtb_windows::corpus::ClassLabel;
use pdtb_windows::metrics::{compute_metrics, ConfusionMatrix};

fn main() -> pdtb_windows::Result<()> {
    // Rows are gold classes, columns predictions, in Temporal, Contingency,
    // Comparison, Expansion order.
    let cm = ConfusionMatrix::new([
        [12, 3, 1, 30],
        [4, 120, 10, 150],
        [2, 15, 60, 90],
        [10, 80, 40, 520],
    ]);
    let m = compute_metrics(&cm)?;
    println!(
        "accuracy {:.1}  precision {:.1}  recall {:.1}  F1 {:.1}  macro F1 {:.1}",
        100.0 * m.accuracy,
        100.0 * m.precision_w,
        100.0 * m.recall_w,
        100.0 * m.f1_w,
        100.0 * m.f1_macro
    );
    println!();
    println!(
        "{:<12} {:>9} {:>7} {:>6} {:>8}",
        "class", "precision", "recall", "F1", "support"
    );
    for class in ClassLabel::ALL {
        let c = m.per_class[&class];
        println!(
            "{:<12} {:>9.3} {:>7.3} {:>6.3} {:>8}",
            class.name(),
            c.precision,
            c.recall,
            c.f1,
            c.support
        );
    }
    Ok(())
}
