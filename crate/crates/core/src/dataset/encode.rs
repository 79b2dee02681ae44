//! Fixed-length encoding of windowed examples.
//!
//! An example becomes the token sequence
//!
//! ```text
//! [CTXB] before.. [ARG1] arg1.. [ARG2] arg2.. [CTXA] after..
//! ```
//!
//! truncated to `max_length` and padded with the pad token. When the
//! sequence is too long, tokens are removed from the left of the preceding
//! context first, then from the right of the following context, and only
//! then from the ends of Arg2 and Arg1. Segment tags are kept whenever
//! `max_length` leaves room for them.

use std::collections::{HashMap, HashSet};
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::windowing::Example;

const STOPWORDS: &str = include_str!("stopwords.txt");

/// Version of the bundled stop-word list.
pub const STOPWORDS_VERSION: u32 = 1;

pub fn stopwords() -> &'static HashSet<&'static str> {
    static SET: OnceLock<HashSet<&'static str>> = OnceLock::new();
    SET.get_or_init(|| {
        STOPWORDS
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .collect()
    })
}

/// Lowercase and split on whitespace; punctuation characters become
/// tokens of their own.
pub fn tokenize(text: &str) -> Vec<String> {
    let mut tokens = Vec::new();
    let mut word = String::new();
    for c in text.chars() {
        if c.is_alphanumeric() {
            word.extend(c.to_lowercase());
            continue;
        }
        if !word.is_empty() {
            tokens.push(std::mem::take(&mut word));
        }
        if !c.is_whitespace() {
            tokens.push(c.to_string());
        }
    }
    if !word.is_empty() {
        tokens.push(word);
    }
    tokens
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EncodingSpec {
    pub max_length: usize,
    pub pad_token: String,
    /// Tags for context before, Arg1, Arg2 and context after, in that order.
    pub segment_tags: [String; 4],
    pub keep_stopwords: bool,
}

impl Default for EncodingSpec {
    fn default() -> Self {
        Self {
            max_length: 128,
            pad_token: "[PAD]".into(),
            segment_tags: ["[CTXB]", "[ARG1]", "[ARG2]", "[CTXA]"].map(String::from),
            keep_stopwords: true,
        }
    }
}

pub const UNKNOWN_TOKEN: &str = "[UNK]";

impl EncodingSpec {
    pub fn validate(&self) -> Result<()> {
        if self.max_length == 0 {
            return Err(Error::InvalidConfig("max_length must be positive".into()));
        }
        let mut seen = HashSet::new();
        for t in self.segment_tags.iter().chain([&self.pad_token]) {
            if t.is_empty() {
                return Err(Error::InvalidConfig(
                    "segment tags and pad token must be non-empty".into(),
                ));
            }
            if t == UNKNOWN_TOKEN || !seen.insert(t.as_str()) {
                return Err(Error::InvalidConfig(format!(
                    "special token {t:?} is not distinct"
                )));
            }
        }
        Ok(())
    }

    fn content(&self, text: &str) -> Vec<String> {
        let mut tokens = tokenize(text);
        if !self.keep_stopwords {
            let stop = stopwords();
            tokens.retain(|t| !stop.contains(t.as_str()));
        }
        tokens
    }
}

/// The truncated, unpadded token sequence of `example`, tags included.
pub fn token_sequence(example: &Example, spec: &EncodingSpec) -> Result<Vec<String>> {
    if example.arg1.trim().is_empty() {
        return Err(Error::EmptyArgument("arg1"));
    }
    if example.arg2.trim().is_empty() {
        return Err(Error::EmptyArgument("arg2"));
    }
    let joined =
        |texts: &[String]| -> Vec<String> { texts.iter().flat_map(|t| spec.content(t)).collect() };
    let mut before = joined(&example.context_before);
    let mut arg1 = spec.content(&example.arg1);
    let mut arg2 = spec.content(&example.arg2);
    let mut after = joined(&example.context_after);

    let total = 4 + before.len() + arg1.len() + arg2.len() + after.len();
    let mut excess = total.saturating_sub(spec.max_length);
    let cut = excess.min(before.len());
    before.drain(..cut);
    excess -= cut;
    for segment in [&mut after, &mut arg2, &mut arg1] {
        let cut = excess.min(segment.len());
        segment.truncate(segment.len() - cut);
        excess -= cut;
    }

    let [t_before, t_arg1, t_arg2, t_after] = spec.segment_tags.clone();
    let mut seq = Vec::with_capacity(total - excess);
    seq.push(t_before);
    seq.extend(before);
    seq.push(t_arg1);
    seq.extend(arg1);
    seq.push(t_arg2);
    seq.extend(arg2);
    seq.push(t_after);
    seq.extend(after);
    seq.truncate(spec.max_length);
    Ok(seq)
}

/// Token-to-id mapping. Ids 0 and 1 are the pad and unknown tokens, the
/// four segment tags follow, and content tokens are numbered in order of
/// first appearance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<String>", into = "Vec<String>")]
pub struct Vocab {
    tokens: Vec<String>,
    index: HashMap<String, u32>,
}

impl Vocab {
    /// A vocabulary holding only the special tokens of `spec`.
    pub fn new(spec: &EncodingSpec) -> Self {
        let mut vocab = Vocab {
            tokens: Vec::new(),
            index: HashMap::new(),
        };
        vocab.insert(&spec.pad_token);
        vocab.insert(UNKNOWN_TOKEN);
        for tag in &spec.segment_tags {
            vocab.insert(tag);
        }
        vocab
    }

    /// Special tokens plus every token the encoder would produce for `examples`.
    pub fn build<'a>(
        spec: &EncodingSpec,
        examples: impl IntoIterator<Item = &'a Example>,
    ) -> Result<Self> {
        spec.validate()?;
        let mut vocab = Self::new(spec);
        let untruncated = EncodingSpec {
            max_length: usize::MAX,
            ..spec.clone()
        };
        for example in examples {
            for token in token_sequence(example, &untruncated)? {
                vocab.insert(&token);
            }
        }
        Ok(vocab)
    }

    fn insert(&mut self, token: &str) -> u32 {
        if let Some(&id) = self.index.get(token) {
            return id;
        }
        let id = self.tokens.len() as u32;
        self.tokens.push(token.to_string());
        self.index.insert(token.to_string(), id);
        id
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn pad_id(&self) -> u32 {
        0
    }

    pub fn unknown_id(&self) -> u32 {
        1
    }

    pub fn id(&self, token: &str) -> u32 {
        self.index.get(token).copied().unwrap_or(self.unknown_id())
    }

    pub fn token(&self, id: u32) -> Option<&str> {
        self.tokens.get(id as usize).map(String::as_str)
    }
}

impl TryFrom<Vec<String>> for Vocab {
    type Error = String;

    fn try_from(tokens: Vec<String>) -> Result<Self, String> {
        let mut index = HashMap::with_capacity(tokens.len());
        for (i, t) in tokens.iter().enumerate() {
            if index.insert(t.clone(), i as u32).is_some() {
                return Err(format!("duplicate vocabulary entry {t:?}"));
            }
        }
        if tokens.len() < 6 {
            return Err("vocabulary is missing its special tokens".into());
        }
        Ok(Vocab { tokens, index })
    }
}

impl From<Vocab> for Vec<String> {
    fn from(v: Vocab) -> Self {
        v.tokens
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EncodedExample {
    pub token_ids: Vec<u32>,
    /// 1 for real tokens, 0 for padding; ones always come first.
    pub attention_mask: Vec<u8>,
    pub label: u8,
}

impl EncodedExample {
    /// Ids of the real (unpadded) tokens.
    pub fn tokens(&self) -> &[u32] {
        let n = self.attention_mask.iter().take_while(|&&m| m == 1).count();
        &self.token_ids[..n]
    }
}

pub fn encode(example: &Example, spec: &EncodingSpec, vocab: &Vocab) -> Result<EncodedExample> {
    spec.validate()?;
    let seq = token_sequence(example, spec)?;
    let real = seq.len();
    let mut token_ids: Vec<u32> = seq.iter().map(|t| vocab.id(t)).collect();
    token_ids.resize(spec.max_length, vocab.id(&spec.pad_token));
    let mut attention_mask = vec![1u8; real];
    attention_mask.resize(spec.max_length, 0);
    Ok(EncodedExample {
        token_ids,
        attention_mask,
        label: example.label.index() as u8,
    })
}
