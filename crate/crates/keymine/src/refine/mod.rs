//! Candidate keyphrase refinement: stopword/length filtering, sentiment
//! scoring and the polarity gate that keeps only opinionated keyphrases.

mod sentiment;

pub use sentiment::{sentiment_score, SentimentLexicon};

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

/// Filtering rules for candidate keyphrases.
#[derive(Debug, Clone)]
pub struct FilterConfig {
    /// Candidates equal to one of these (space-joined) are discarded.
    pub stopwords: HashSet<String>,
    /// Tokens that may not start nor end a keyphrase.
    pub boundary_stopwords: HashSet<String>,
    /// Tokens removed from keyphrase interiors; empty by default.
    pub internal_stopwords: HashSet<String>,
    /// Maximum keyphrase length in tokens.
    pub max_len: usize,
    /// Scores within [-neutral_band, +neutral_band] are neutral.
    pub neutral_band: f64,
}

impl FilterConfig {
    pub fn new(stopwords: HashSet<String>, boundary_stopwords: HashSet<String>) -> Self {
        FilterConfig {
            stopwords,
            boundary_stopwords,
            internal_stopwords: HashSet::new(),
            max_len: 10,
            neutral_band: 0.05,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RejectReason {
    IsStopword,
    StrippedEmpty,
    TooLong,
}

/// Drops boundary stopwords from the front, then the back, then interior
/// stopwords; may leave nothing.
pub fn strip_boundary_stopwords(candidate: &[String], cfg: &FilterConfig) -> Vec<String> {
    let mut start = 0;
    let mut end = candidate.len();
    while start < end && cfg.boundary_stopwords.contains(&candidate[start]) {
        start += 1;
    }
    while end > start && cfg.boundary_stopwords.contains(&candidate[end - 1]) {
        end -= 1;
    }
    candidate[start..end]
        .iter()
        .filter(|lemma| !cfg.internal_stopwords.contains(*lemma))
        .cloned()
        .collect()
}

/// Accepts or rejects one candidate: whole-candidate stopword check,
/// boundary strip, emptiness and length checks, in that order.
pub fn filter_candidate(
    candidate: &[String],
    cfg: &FilterConfig,
) -> Result<Vec<String>, RejectReason> {
    if cfg.stopwords.contains(&candidate.join(" ")) {
        return Err(RejectReason::IsStopword);
    }
    let stripped = strip_boundary_stopwords(candidate, cfg);
    if stripped.is_empty() {
        return Err(RejectReason::StrippedEmpty);
    }
    if stripped.len() > cfg.max_len {
        return Err(RejectReason::TooLong);
    }
    Ok(stripped)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Polarity {
    Negative,
    Positive,
    Neutral,
}

impl Polarity {
    pub fn as_str(&self) -> &'static str {
        match self {
            Polarity::Negative => "negative",
            Polarity::Positive => "positive",
            Polarity::Neutral => "neutral",
        }
    }
}

/// Table of score-to-polarity criteria: positive above the band, negative
/// below it, neutral inside it (inclusive on both ends).
pub fn classify_polarity(score: f64, cfg: &FilterConfig) -> Polarity {
    if score > cfg.neutral_band {
        Polarity::Positive
    } else if score < -cfg.neutral_band {
        Polarity::Negative
    } else {
        Polarity::Neutral
    }
}

/// A keyphrase that survived filtering and the sentiment gate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoredKeyphrase {
    pub doc_id: String,
    pub sentence_index: usize,
    pub text: String,
    pub token_count: usize,
    pub score: f64,
    pub polarity: Polarity,
}

/// Rejection and survival counters for one refinement pass.
#[derive(Debug, Default, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RefineCounters {
    pub candidates: u64,
    pub rejected_is_stopword: u64,
    pub rejected_stripped_empty: u64,
    pub rejected_too_long: u64,
    pub neutral_dropped: u64,
    pub emitted: u64,
}

impl RefineCounters {
    pub fn merge(&mut self, other: &RefineCounters) {
        self.candidates += other.candidates;
        self.rejected_is_stopword += other.rejected_is_stopword;
        self.rejected_stripped_empty += other.rejected_stripped_empty;
        self.rejected_too_long += other.rejected_too_long;
        self.neutral_dropped += other.neutral_dropped;
        self.emitted += other.emitted;
    }
}

/// Filters, scores and polarity-gates a document's candidates, preserving
/// document order. Neutral keyphrases are dropped.
pub fn refine(
    doc_id: &str,
    candidates: &[(usize, Vec<String>)],
    cfg: &FilterConfig,
    lex: &SentimentLexicon,
) -> (Vec<ScoredKeyphrase>, RefineCounters) {
    let mut out = Vec::new();
    let mut counters = RefineCounters::default();
    for (sentence_index, candidate) in candidates {
        counters.candidates += 1;
        let kept = match filter_candidate(candidate, cfg) {
            Ok(kept) => kept,
            Err(RejectReason::IsStopword) => {
                counters.rejected_is_stopword += 1;
                continue;
            }
            Err(RejectReason::StrippedEmpty) => {
                counters.rejected_stripped_empty += 1;
                continue;
            }
            Err(RejectReason::TooLong) => {
                counters.rejected_too_long += 1;
                continue;
            }
        };
        let text = kept.join(" ");
        let score = sentiment_score(&text, lex);
        let polarity = classify_polarity(score, cfg);
        if polarity == Polarity::Neutral {
            counters.neutral_dropped += 1;
            continue;
        }
        counters.emitted += 1;
        out.push(ScoredKeyphrase {
            doc_id: doc_id.to_string(),
            sentence_index: *sentence_index,
            text,
            token_count: kept.len(),
            score,
            polarity,
        });
    }
    (out, counters)
}
