//! Sentence segmentation, tokenization, POS tagging and lemmatization.

mod lemma;
mod tagger;
mod tags;

pub use lemma::Lemmatizer;
pub use tagger::Tagger;
pub use tags::{PosClass, PosTag, UnknownTag};

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

/// A token with its surface form, lowercase lemma and POS tag.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TaggedToken {
    pub surface: String,
    pub lemma: String,
    pub tag: PosTag,
    pub sentence_index: usize,
    pub token_index: usize,
}

/// Rule-based sentence splitter with an abbreviation list. Boundaries are
/// placed after `.`/`!`/`?` runs followed by whitespace, except when a `.`
/// closes a listed abbreviation or a single capital-letter initial.
pub struct SentenceSplitter {
    abbreviations: HashSet<String>,
}

impl SentenceSplitter {
    pub fn new(abbreviations: HashSet<String>) -> Self {
        SentenceSplitter { abbreviations }
    }

    pub fn split_sentences(&self, text: &str) -> Vec<String> {
        let chars: Vec<char> = text.chars().collect();
        let mut sentences = Vec::new();
        let mut start = 0usize;
        let mut i = 0usize;
        while i < chars.len() {
            let c = chars[i];
            if matches!(c, '.' | '!' | '?') {
                // consume the whole terminator run ("...", "?!", "!!")
                let mut end = i + 1;
                while end < chars.len() && matches!(chars[end], '.' | '!' | '?') {
                    end += 1;
                }
                let at_boundary = end >= chars.len() || chars[end].is_whitespace();
                let suppressed = c == '.'
                    && end == i + 1
                    && self.is_abbreviation_before(&chars[start..i]);
                if at_boundary && !suppressed {
                    let sentence: String = chars[start..end].iter().collect();
                    let sentence = sentence.trim();
                    if !sentence.is_empty() {
                        sentences.push(sentence.to_string());
                    }
                    start = end;
                }
                i = end;
            } else {
                i += 1;
            }
        }
        let tail: String = chars[start..].iter().collect();
        let tail = tail.trim();
        if !tail.is_empty() {
            sentences.push(tail.to_string());
        }
        sentences
    }

    /// True when the word ending at the candidate period is an abbreviation
    /// or a single capital-letter initial.
    fn is_abbreviation_before(&self, before: &[char]) -> bool {
        let word: String = before
            .iter()
            .rev()
            .take_while(|c| !c.is_whitespace())
            .collect::<Vec<_>>()
            .into_iter()
            .rev()
            .collect();
        let word = word.trim_matches(|c: char| !c.is_alphanumeric());
        if word.is_empty() {
            return false;
        }
        if word.len() == 1 && word.chars().next().is_some_and(|c| c.is_uppercase()) {
            return true;
        }
        self.abbreviations.contains(&word.to_lowercase())
    }
}

/// Punctuation detached from word edges during tokenization.
fn is_detachable(c: char) -> bool {
    matches!(c, '.' | '!' | '?' | ';' | ':' | ',')
}

/// Splits a sentence on whitespace, then peels leading/trailing punctuation
/// from `{. ! ? ; : ,}` into separate tokens. Hyphens and apostrophes stay
/// word-internal.
pub fn tokenize(sentence: &str) -> Vec<String> {
    let mut tokens = Vec::new();
    for word in sentence.split_whitespace() {
        let chars: Vec<char> = word.chars().collect();
        let mut lead = 0;
        while lead < chars.len() && is_detachable(chars[lead]) {
            lead += 1;
        }
        let mut trail = chars.len();
        while trail > lead && is_detachable(chars[trail - 1]) {
            trail -= 1;
        }
        for &c in &chars[..lead] {
            tokens.push(c.to_string());
        }
        if trail > lead {
            tokens.push(chars[lead..trail].iter().collect());
        }
        for &c in &chars[trail..] {
            tokens.push(c.to_string());
        }
    }
    tokens
}
