//! Build every context-window dataset over one synthetic corpus and show
//! how the same implicit relation looks under each strategy.

use pdtb_windows::corpus::{generate_synthetic, SyntheticConfig};
use pdtb_windows::windowing::{build, WindowStrategy};

fn main() -> pdtb_windows::Result<()> {
    let corpus = generate_synthetic(&SyntheticConfig::default())?;
    let strategies = [
        WindowStrategy::Baseline,
        WindowStrategy::DirectNeighbors { n: 1 },
        WindowStrategy::DirectNeighbors { n: 2 },
        WindowStrategy::ExpandedWindow { n: 2 },
        WindowStrategy::ExpandedWindow { n: 4 },
        WindowStrategy::RandomNeighbors { seed: 42 },
    ];
    println!("{:<12} {:>8} {:>9}", "strategy", "examples", "excluded");
    for s in strategies {
        let d = build(&corpus, s)?;
        println!("{:<12} {:>8} {:>9}", s.to_string(), d.len(), d.excluded);
    }

    let pick = build(&corpus, WindowStrategy::Baseline)?.examples[3].origin;
    for s in [strategies[0], strategies[4], strategies[5]] {
        let d = build(&corpus, s)?;
        let e = d
            .examples
            .iter()
            .find(|e| e.origin == pick)
            .expect("kept by every non-DN strategy");
        println!("\n{s} ({})", e.label);
        for c in &e.context_before {
            println!("  before: {c}");
        }
        println!("  arg1:   {}", e.arg1);
        println!("  arg2:   {}", e.arg2);
        for c in &e.context_after {
            println!("  after:  {c}");
        }
    }
    Ok(())
}
