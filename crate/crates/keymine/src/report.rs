//! Polarity-split keyphrase frequency aggregation and report writing.

use std::collections::HashMap;
use std::fs;
use std::io::Write;
use std::path::Path;

use serde::Serialize;
use thiserror::Error;

use crate::corpus::ReadStats;
use crate::refine::{Polarity, RefineCounters, ScoredKeyphrase};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KeyphraseStat {
    pub keyphrase: String,
    pub polarity: Polarity,
    pub count: u64,
}

/// Mergeable frequency map over `(keyphrase, polarity)`. Merging is
/// associative and commutative, so partial aggregates from parallel workers
/// combine to the same totals.
#[derive(Debug, Default, Clone)]
pub struct Aggregate {
    counts: HashMap<(String, Polarity), u64>,
}

impl Aggregate {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, keyphrase: &ScoredKeyphrase) {
        *self
            .counts
            .entry((keyphrase.text.clone(), keyphrase.polarity))
            .or_insert(0) += 1;
    }

    pub fn merge(&mut self, other: Aggregate) {
        for (key, n) in other.counts {
            *self.counts.entry(key).or_insert(0) += n;
        }
    }

    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn unique(&self, polarity: Polarity) -> u64 {
        self.counts.keys().filter(|(_, p)| *p == polarity).count() as u64
    }

    /// All stats in canonical report order: count descending, ties broken
    /// by keyphrase ascending (then polarity for the degenerate case of one
    /// phrase carrying both).
    pub fn into_stats(self) -> Vec<KeyphraseStat> {
        let mut stats: Vec<KeyphraseStat> = self
            .counts
            .into_iter()
            .map(|((keyphrase, polarity), count)| KeyphraseStat {
                keyphrase,
                polarity,
                count,
            })
            .collect();
        stats.sort_by(|a, b| {
            b.count
                .cmp(&a.count)
                .then_with(|| a.keyphrase.cmp(&b.keyphrase))
                .then_with(|| a.polarity.cmp(&b.polarity))
        });
        stats
    }
}

/// Top `k` stats of one polarity, ordered as `Aggregate::into_stats`.
pub fn top_k(stats: &[KeyphraseStat], polarity: Polarity, k: usize) -> Vec<&KeyphraseStat> {
    stats
        .iter()
        .filter(|s| s.polarity == polarity)
        .take(k)
        .collect()
}

/// Corpus funnel counters and totals for one run.
#[derive(Debug, Default, Clone, Serialize)]
pub struct RunSummary {
    pub read: u64,
    pub malformed_records: u64,
    pub duplicate_ids: u64,
    pub replaced_invalid_bytes: u64,
    pub after_dedup: u64,
    pub after_sampling: u64,
    pub english: u64,
    pub non_english_dropped: u64,
    pub unknown_language_dropped: u64,
    pub documents_processed: u64,
    pub sentences: u64,
    pub candidates: u64,
    pub rejected_is_stopword: u64,
    pub rejected_stripped_empty: u64,
    pub rejected_too_long: u64,
    pub neutral_dropped: u64,
    pub emitted: u64,
    pub unique_negative_keyphrases: u64,
    pub unique_positive_keyphrases: u64,
}

impl RunSummary {
    pub fn absorb_read_stats(&mut self, stats: &ReadStats) {
        self.read = stats.records_read;
        self.malformed_records = stats.malformed_records;
        self.duplicate_ids = stats.duplicate_ids;
        self.replaced_invalid_bytes = stats.replaced_invalid_bytes;
    }

    pub fn absorb_refine_counters(&mut self, counters: &RefineCounters) {
        self.candidates = counters.candidates;
        self.rejected_is_stopword = counters.rejected_is_stopword;
        self.rejected_stripped_empty = counters.rejected_stripped_empty;
        self.rejected_too_long = counters.rejected_too_long;
        self.neutral_dropped = counters.neutral_dropped;
        self.emitted = counters.emitted;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Json,
}

#[derive(Debug, Error)]
#[error("cannot write report {path}: {source}")]
pub struct ReportError {
    pub path: String,
    #[source]
    pub source: std::io::Error,
}

/// Writes the frequency CSV (`keyphrase,polarity,count`) or the JSON run
/// summary to `path`. Output bytes are a pure function of the inputs, so
/// reruns of the same corpus and config are byte-identical.
pub fn write_report(
    stats: &[KeyphraseStat],
    summary: &RunSummary,
    format: ReportFormat,
    path: &Path,
) -> Result<(), ReportError> {
    let to_err = |source: std::io::Error| ReportError {
        path: path.display().to_string(),
        source,
    };
    match format {
        ReportFormat::Csv => {
            let mut writer = csv::Writer::from_writer(Vec::new());
            writer
                .write_record(["keyphrase", "polarity", "count"])
                .map_err(io_of_csv)
                .map_err(to_err)?;
            for stat in stats {
                writer
                    .write_record([
                        stat.keyphrase.as_str(),
                        stat.polarity.as_str(),
                        &stat.count.to_string(),
                    ])
                    .map_err(io_of_csv)
                    .map_err(to_err)?;
            }
            let bytes = writer.into_inner().map_err(|e| {
                to_err(std::io::Error::other(e.to_string()))
            })?;
            fs::write(path, bytes).map_err(to_err)
        }
        ReportFormat::Json => {
            let mut bytes =
                serde_json::to_vec_pretty(summary).expect("summary serialization is infallible");
            bytes.push(b'\n');
            let mut file = fs::File::create(path).map_err(to_err)?;
            file.write_all(&bytes).map_err(to_err)
        }
    }
}

fn io_of_csv(e: csv::Error) -> std::io::Error {
    std::io::Error::other(e.to_string())
}
