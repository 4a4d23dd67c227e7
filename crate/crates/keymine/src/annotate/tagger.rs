//! Deterministic lexicon-plus-rules POS tagger.
//!
//! Lookup order: case-sensitive lexicon section, lowercase lexicon,
//! shape/suffix rules for unknowns, default NN. Pure over an immutable
//! lexicon, so identical token lists always yield identical tags.

use std::collections::HashMap;

use super::tags::PosTag;

pub struct Tagger {
    lower: HashMap<String, PosTag>,
    exact: HashMap<String, PosTag>,
}

impl Tagger {
    pub fn new(lower: HashMap<String, PosTag>, exact: HashMap<String, PosTag>) -> Self {
        Tagger { lower, exact }
    }

    pub fn tag_token(&self, token: &str) -> PosTag {
        if let Some(tag) = self.exact.get(token) {
            return *tag;
        }
        let lowercase = token.to_lowercase();
        if let Some(tag) = self.lower.get(&lowercase) {
            return *tag;
        }
        self.unknown_tag(token, &lowercase)
    }

    pub fn tag(&self, tokens: &[String]) -> Vec<(String, PosTag)> {
        tokens
            .iter()
            .map(|t| (t.clone(), self.tag_token(t)))
            .collect()
    }

    fn unknown_tag(&self, token: &str, lowercase: &str) -> PosTag {
        if let Some(tag) = punctuation_tag(token) {
            return tag;
        }
        if token
            .chars()
            .all(|c| c.is_ascii_digit() || matches!(c, '.' | ',' | '-'))
            && token.chars().any(|c| c.is_ascii_digit())
        {
            return PosTag::Cd;
        }
        if token.chars().next().is_some_and(|c| c.is_uppercase()) {
            return PosTag::Nnp;
        }
        self.suffix_tag(lowercase).unwrap_or(PosTag::Nn)
    }

    fn suffix_tag(&self, word: &str) -> Option<PosTag> {
        let n = word.len();
        if n > 4 && word.ends_with("ing") {
            return Some(PosTag::Vbg);
        }
        if n > 3 && word.ends_with("ed") {
            return Some(PosTag::Vbd);
        }
        if n > 3 && word.ends_with("ly") {
            return Some(PosTag::Rb);
        }
        for noun_suffix in ["tion", "sion", "ment", "ness", "ship", "hood", "ism"] {
            if n > noun_suffix.len() + 1 && word.ends_with(noun_suffix) {
                return Some(PosTag::Nn);
            }
        }
        for adj_suffix in ["able", "ible", "ous", "ful", "less", "ive"] {
            if n > adj_suffix.len() + 1 && word.ends_with(adj_suffix) {
                return Some(PosTag::Jj);
            }
        }
        if n > 4 && word.ends_with("est") {
            return Some(PosTag::Jjs);
        }
        if n > 2 && word.ends_with('s') && !word.ends_with("ss") {
            // plural noun or 3rd-person verb, decided by the stem's lexicon tag
            let stem = &word[..n - 1];
            return match self.lower.get(stem) {
                Some(PosTag::Vb | PosTag::Vbp) => Some(PosTag::Vbz),
                _ => Some(PosTag::Nns),
            };
        }
        None
    }
}

fn punctuation_tag(token: &str) -> Option<PosTag> {
    match token {
        "." | "!" | "?" => Some(PosTag::SentClose),
        "," => Some(PosTag::Comma),
        ";" | ":" => Some(PosTag::MidPunct),
        _ if token.chars().all(|c| !c.is_alphanumeric()) && !token.is_empty() => {
            Some(PosTag::Sym)
        }
        _ => None,
    }
}
