//! Split a dataset by section and encode one example into a fixed-length
//! token sequence with segment tags.

use pdtb_windows::corpus::{generate_synthetic, SyntheticConfig};
use pdtb_windows::dataset::{encode, split, EncodingSpec, SplitSpec, Vocab};
use pdtb_windows::windowing::{build, WindowStrategy};

fn main() -> pdtb_windows::Result<()> {
    let corpus = generate_synthetic(&SyntheticConfig {
        documents: 500,
        ..Default::default()
    })?;
    let dataset = build(&corpus, WindowStrategy::ExpandedWindow { n: 2 })?;
    let parts = split(&dataset, &SplitSpec::default())?;
    println!(
        "train {} / test {} / dropped {} (train fraction {:.3})",
        parts.train.len(),
        parts.test.len(),
        parts.dropped,
        parts.train_fraction().unwrap_or(0.0)
    );

    let spec = EncodingSpec {
        max_length: 32,
        ..Default::default()
    };
    let vocab = Vocab::build(&spec, &parts.train.examples)?;
    println!("vocabulary: {} entries", vocab.len());

    let example = &parts.test.examples[0];
    let encoded = encode(example, &spec, &vocab)?;
    let tokens: Vec<&str> = encoded
        .token_ids
        .iter()
        .map(|&id| vocab.token(id).unwrap_or("?"))
        .collect();
    println!("label {} -> {}", example.label, encoded.label);
    println!("tokens {}", tokens.join(" "));
    println!("mask   {:?}", encoded.attention_mask);
    Ok(())
}
