//! Two-sample t-tests between groups of runs.

use pdtb_windows::metrics::{student_t_cdf, two_sample_ttest, TTestVariant};

fn main() -> pdtb_windows::Result<()> {
    // Final accuracies of five seeds per strategy.
    let baseline = [0.589, 0.584, 0.593, 0.587, 0.591];
    let psrn = [0.585, 0.590, 0.581, 0.588, 0.586];
    let ewn4 = [0.542, 0.548, 0.539, 0.545, 0.550];

    for (name, other) in [("PSRN", &psrn), ("EWN (N=4)", &ewn4)] {
        for variant in [TTestVariant::Pooled, TTestVariant::Welch] {
            let r = two_sample_ttest(&baseline, other, variant, 0.05)?;
            println!(
                "Baseline vs {name:<10} {variant:?}: t = {:>7.3}, df = {:>5.2}, p = {:.3e} -> {}",
                r.t,
                r.df,
                r.p_value,
                if r.significant {
                    "significant"
                } else {
                    "not significant"
                }
            );
        }
    }

    println!(
        "\nP(T <= 2.228) with 10 degrees of freedom: {:.6}",
        student_t_cdf(2.228_138_852, 10.0)?
    );
    Ok(())
}
