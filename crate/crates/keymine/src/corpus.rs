//! Corpus ingestion: file reading, language gating, exact deduplication and
//! seeded Bernoulli sampling.

use std::collections::HashSet;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// One ingested social-media comment.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RawComment {
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
    pub text: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputFormat {
    Jsonl,
    Csv,
}

impl std::str::FromStr for InputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "jsonl" => Ok(InputFormat::Jsonl),
            "csv" => Ok(InputFormat::Csv),
            other => Err(format!("unknown input format {other:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct CorpusConfig {
    /// Probability in [0, 1] that a comment survives sampling.
    pub sample_fraction: f64,
    pub sample_seed: u64,
    /// Minimum English-coverage score for the `English` classification.
    pub english_threshold: f64,
}

impl Default for CorpusConfig {
    fn default() -> Self {
        CorpusConfig {
            sample_fraction: 1.0,
            sample_seed: 0,
            english_threshold: 0.35,
        }
    }
}

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("cannot read corpus {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("csv corpus {path}: {msg}")]
    CsvHeader { path: String, msg: String },
}

/// Per-file ingestion diagnostics. Malformed records never abort a run;
/// they are skipped and counted here.
#[derive(Debug, Default, Clone, Serialize)]
pub struct ReadStats {
    pub records_read: u64,
    pub malformed_records: u64,
    pub duplicate_ids: u64,
    pub replaced_invalid_bytes: u64,
}

pub struct CorpusReader {
    comments: std::vec::IntoIter<RawComment>,
    stats: ReadStats,
    warnings: Vec<String>,
}

impl CorpusReader {
    pub fn stats(&self) -> &ReadStats {
        &self.stats
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }
}

impl Iterator for CorpusReader {
    type Item = RawComment;

    fn next(&mut self) -> Option<RawComment> {
        self.comments.next()
    }
}

/// Reads a corpus file, yielding one comment per well-formed record in file
/// order. Invalid UTF-8 bytes are replaced and counted; records missing
/// `id` or `text`, or repeating an already-seen id, are skipped with a
/// diagnostic.
pub fn read_corpus(path: &Path, format: InputFormat) -> Result<CorpusReader, CorpusError> {
    let bytes = fs::read(path).map_err(|source| CorpusError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let text = String::from_utf8_lossy(&bytes);
    let replaced = text.chars().filter(|&c| c == '\u{FFFD}').count() as u64
        - bytes
            .windows(3)
            .filter(|w| *w == "\u{FFFD}".as_bytes())
            .count() as u64;

    let mut stats = ReadStats {
        replaced_invalid_bytes: replaced,
        ..Default::default()
    };
    let mut warnings = Vec::new();
    let mut seen_ids: HashSet<String> = HashSet::new();
    let mut comments = Vec::new();

    let mut push = |record: Result<RawComment, String>, line: usize| {
        stats.records_read += 1;
        match record {
            Ok(c) if c.id.is_empty() => {
                stats.malformed_records += 1;
                warnings.push(format!("record {line}: empty id"));
            }
            Ok(c) => {
                if seen_ids.insert(c.id.clone()) {
                    comments.push(c);
                } else {
                    stats.duplicate_ids += 1;
                    warnings.push(format!("record {line}: duplicate id {:?}", c.id));
                }
            }
            Err(msg) => {
                stats.malformed_records += 1;
                warnings.push(format!("record {line}: {msg}"));
            }
        }
    };

    match format {
        InputFormat::Jsonl => {
            for (i, line) in text.lines().enumerate() {
                if line.trim().is_empty() {
                    continue;
                }
                let parsed = serde_json::from_str::<RawComment>(line)
                    .map_err(|e| format!("invalid json: {e}"));
                push(parsed, i + 1);
            }
        }
        InputFormat::Csv => {
            let mut reader = csv::ReaderBuilder::new()
                .has_headers(true)
                .flexible(true)
                .from_reader(text.as_bytes());
            let headers = reader
                .headers()
                .map_err(|e| CorpusError::CsvHeader {
                    path: path.display().to_string(),
                    msg: e.to_string(),
                })?
                .clone();
            let col = |name: &str| headers.iter().position(|h| h == name);
            let (id_col, text_col) = match (col("id"), col("text")) {
                (Some(i), Some(t)) => (i, t),
                _ => {
                    return Err(CorpusError::CsvHeader {
                        path: path.display().to_string(),
                        msg: "header must declare `id` and `text` columns".into(),
                    })
                }
            };
            let source_col = col("source");
            let timestamp_col = col("timestamp");
            for (i, record) in reader.records().enumerate() {
                let parsed = match record {
                    Ok(rec) => match (rec.get(id_col), rec.get(text_col)) {
                        (Some(id), Some(text)) => Ok(RawComment {
                            id: id.to_string(),
                            text: text.to_string(),
                            source: source_col.and_then(|c| rec.get(c)).map(str::to_string),
                            timestamp: timestamp_col.and_then(|c| rec.get(c)).map(str::to_string),
                        }),
                        _ => Err("missing id or text field".to_string()),
                    },
                    Err(e) => Err(format!("invalid csv: {e}")),
                };
                push(parsed, i + 2);
            }
        }
    }

    Ok(CorpusReader {
        comments: comments.into_iter(),
        stats,
        warnings,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Language {
    English,
    Other,
    Unknown,
}

/// Classifies a text by the fraction of its alphabetic tokens found in the
/// bundled English high-frequency list. Texts with fewer than 3 alphabetic
/// tokens are `Unknown`. Pure and deterministic.
pub fn detect_language(
    text: &str,
    english_words: &HashSet<String>,
    english_threshold: f64,
) -> (Language, f64) {
    let mut tokens = 0usize;
    let mut hits = 0usize;
    for token in text.split(|c: char| !c.is_alphabetic()) {
        if token.is_empty() {
            continue;
        }
        tokens += 1;
        if english_words.contains(&token.to_lowercase()) {
            hits += 1;
        }
    }
    if tokens < 3 {
        return (Language::Unknown, 0.0);
    }
    let coverage = hits as f64 / tokens as f64;
    if coverage >= english_threshold {
        (Language::English, coverage)
    } else {
        (Language::Other, coverage)
    }
}

/// Exact-duplicate filter. The key is the text casefolded with whitespace
/// runs collapsed and trimmed; the first occurrence in stream order wins.
/// Holds the key set, so it must run as a single serial stage.
#[derive(Debug, Default)]
pub struct Dedup {
    seen: HashSet<String>,
}

impl Dedup {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn key(text: &str) -> String {
        text.to_lowercase()
            .split_whitespace()
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// True the first time a text's key is seen.
    pub fn is_first(&mut self, text: &str) -> bool {
        self.seen.insert(Self::key(text))
    }

    pub fn dedup<'a, I>(&'a mut self, comments: I) -> impl Iterator<Item = RawComment> + 'a
    where
        I: IntoIterator<Item = RawComment>,
        I::IntoIter: 'a,
    {
        comments
            .into_iter()
            .filter(move |c| self.is_first(&c.text))
    }
}

const FNV_OFFSET: u64 = 0xcbf29ce484222325;
const FNV_PRIME: u64 = 0x100000001b3;

/// Deterministic 64-bit record hash: FNV-1a over the id bytes, seed folded
/// in, finished with a splitmix64-style mix for avalanche.
pub fn sample_hash(id: &str, seed: u64) -> u64 {
    let mut h = FNV_OFFSET;
    for b in id.as_bytes() {
        h ^= u64::from(*b);
        h = h.wrapping_mul(FNV_PRIME);
    }
    h ^= seed;
    h ^= h >> 30;
    h = h.wrapping_mul(0xbf58476d1ce4e5b9);
    h ^= h >> 27;
    h = h.wrapping_mul(0x94d049bb133111eb);
    h ^ (h >> 31)
}

/// A comment survives iff `hash(id, seed) / 2^64 < fraction`. Deterministic
/// in `(id, seed, fraction)` and monotone in `fraction`.
pub fn sample_survives(id: &str, cfg: &CorpusConfig) -> bool {
    let threshold = (cfg.sample_fraction * 2f64.powi(64)) as u128;
    u128::from(sample_hash(id, cfg.sample_seed)) < threshold
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn write_temp(content: &[u8], ext: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::Builder::new().suffix(ext).tempfile().unwrap();
        f.write_all(content).unwrap();
        f
    }

    fn comment(id: &str, text: &str) -> RawComment {
        RawComment {
            id: id.into(),
            source: None,
            text: text.into(),
            timestamp: None,
        }
    }

    #[test]
    fn reads_jsonl_in_order() {
        let f = write_temp(
            br#"{"id":"a","text":"one"}
{"id":"b","text":"two","source":"twitter"}
{"id":"c","text":"three","timestamp":"2020-04-01T00:00:00Z"}
"#,
            ".jsonl",
        );
        let reader = read_corpus(f.path(), InputFormat::Jsonl).unwrap();
        let stats = reader.stats().clone();
        let all: Vec<_> = reader.collect();
        assert_eq!(stats.records_read, 3);
        assert_eq!(stats.malformed_records, 0);
        assert_eq!(
            all.iter().map(|c| c.id.as_str()).collect::<Vec<_>>(),
            ["a", "b", "c"]
        );
    }

    #[test]
    fn empty_file_is_empty_stream() {
        let f = write_temp(b"", ".jsonl");
        let reader = read_corpus(f.path(), InputFormat::Jsonl).unwrap();
        assert_eq!(reader.count(), 0);
    }

    #[test]
    fn record_missing_text_is_skipped_with_warning() {
        let f = write_temp(
            br#"{"id":"a","text":"one"}
{"id":"b"}
{"id":"c","text":"three"}
"#,
            ".jsonl",
        );
        let mut reader = read_corpus(f.path(), InputFormat::Jsonl).unwrap();
        let all: Vec<_> = reader.by_ref().collect();
        assert_eq!(all.len(), 2);
        assert_eq!(reader.stats().malformed_records, 1);
        assert_eq!(reader.warnings().len(), 1);
    }

    #[test]
    fn duplicate_and_empty_ids_are_rejected() {
        let f = write_temp(
            br#"{"id":"a","text":"one"}
{"id":"a","text":"again"}
{"id":"","text":"anon"}
"#,
            ".jsonl",
        );
        let mut reader = read_corpus(f.path(), InputFormat::Jsonl).unwrap();
        let all: Vec<_> = reader.by_ref().collect();
        assert_eq!(all.len(), 1);
        assert_eq!(reader.stats().duplicate_ids, 1);
        assert_eq!(reader.stats().malformed_records, 1);
    }

    #[test]
    fn reads_csv_with_header() {
        let f = write_temp(
            b"id,text,source\n1,\"stay home, wash hands\",yt\n2,ok then,fb\n",
            ".csv",
        );
        let reader = read_corpus(f.path(), InputFormat::Csv).unwrap();
        let all: Vec<_> = reader.collect();
        assert_eq!(all.len(), 2);
        assert_eq!(all[0].text, "stay home, wash hands");
        assert_eq!(all[1].source.as_deref(), Some("fb"));
    }

    #[test]
    fn csv_without_required_columns_is_fatal() {
        let f = write_temp(b"key,value\n1,2\n", ".csv");
        assert!(matches!(
            read_corpus(f.path(), InputFormat::Csv),
            Err(CorpusError::CsvHeader { .. })
        ));
    }

    #[test]
    fn missing_file_is_fatal() {
        assert!(matches!(
            read_corpus(Path::new("/nonexistent.jsonl"), InputFormat::Jsonl),
            Err(CorpusError::Io { .. })
        ));
    }

    #[test]
    fn invalid_utf8_is_replaced_and_counted() {
        let f = write_temp(b"{\"id\":\"a\",\"text\":\"ok \xff\xfe\"}\n", ".jsonl");
        let mut reader = read_corpus(f.path(), InputFormat::Jsonl).unwrap();
        let all: Vec<_> = reader.by_ref().collect();
        assert_eq!(all.len(), 1);
        assert_eq!(reader.stats().replaced_invalid_bytes, 2);
    }

    #[test]
    fn detect_language_examples() {
        let res = crate::data::default_resources();
        let (lang, _) = detect_language(
            "the virus is spreading and we must stay at home",
            &res.english_words,
            0.35,
        );
        assert_eq!(lang, Language::English);
        let (lang, conf) = detect_language("xz qq", &res.english_words, 0.35);
        assert_eq!(lang, Language::Unknown);
        assert_eq!(conf, 0.0);
        let (lang, _) = detect_language(
            "el virus se propaga rapidamente en todo el mundo",
            &res.english_words,
            0.35,
        );
        assert_eq!(lang, Language::Other);
    }

    #[test]
    fn detect_language_is_pure() {
        let res = crate::data::default_resources();
        let text = "we must stay at home today";
        let first = detect_language(text, &res.english_words, 0.35);
        for _ in 0..10 {
            assert_eq!(detect_language(text, &res.english_words, 0.35), first);
        }
    }

    #[test]
    fn dedup_key_casefolds_and_collapses_whitespace() {
        let mut d = Dedup::new();
        let comments = vec![comment("1", "Stay home!"), comment("2", "stay   home!")];
        let kept: Vec<_> = d.dedup(comments).collect();
        assert_eq!(kept.len(), 1);
        assert_eq!(kept[0].id, "1");
    }

    #[test]
    fn dedup_keeps_first_occurrence() {
        let mut d = Dedup::new();
        let comments = vec![comment("1", "a"), comment("2", "b"), comment("3", "a")];
        let kept: Vec<_> = d.dedup(comments).collect();
        assert_eq!(
            kept.iter().map(|c| c.text.as_str()).collect::<Vec<_>>(),
            ["a", "b"]
        );
    }

    #[test]
    fn dedup_planted_duplicates() {
        // 10k records with 1k planted duplicates leave exactly 9k; oracle is
        // a hash-set count over the dedup keys
        let mut comments = Vec::new();
        for i in 0..9000 {
            comments.push(comment(&format!("id{i}"), &format!("text number {i}")));
        }
        for i in 0..1000 {
            comments.push(comment(
                &format!("dup{i}"),
                &format!("TEXT   NUMBER {}", i * 9),
            ));
        }
        let oracle: HashSet<String> = comments.iter().map(|c| Dedup::key(&c.text)).collect();
        assert_eq!(oracle.len(), 9000);
        let mut d = Dedup::new();
        assert_eq!(d.dedup(comments).count(), 9000);
    }

    #[test]
    fn dedup_is_idempotent() {
        let comments: Vec<_> = (0..100)
            .map(|i| comment(&format!("{i}"), &format!("text {}", i % 37)))
            .collect();
        let once: Vec<_> = Dedup::new().dedup(comments).collect();
        let twice: Vec<_> = Dedup::new().dedup(once.clone()).collect();
        assert_eq!(once.len(), twice.len());
        for (a, b) in once.iter().zip(twice.iter()) {
            assert_eq!(a.id, b.id);
        }
    }

    #[test]
    fn sample_extremes() {
        let all = CorpusConfig {
            sample_fraction: 1.0,
            ..Default::default()
        };
        let none = CorpusConfig {
            sample_fraction: 0.0,
            ..Default::default()
        };
        for i in 0..1000 {
            let id = format!("id{i}");
            assert!(sample_survives(&id, &all));
            assert!(!sample_survives(&id, &none));
        }
    }

    #[test]
    fn sample_binomial_bound() {
        // Binomial(100000, 0.13): mean 13000, 3 sigma = 319
        let cfg = CorpusConfig {
            sample_fraction: 0.13,
            sample_seed: 42,
            english_threshold: 0.35,
        };
        let survivors = (0..100_000)
            .filter(|i| sample_survives(&format!("synthetic-{i}"), &cfg))
            .count() as i64;
        assert!(
            (survivors - 13_000).abs() <= 319,
            "survivors {survivors} outside 13000 +/- 319"
        );
    }

    #[test]
    fn sample_monotone_in_fraction() {
        for i in 0..2000 {
            let id = format!("id{i}");
            let mut prev = false;
            for &fraction in &[0.0, 0.1, 0.25, 0.5, 0.75, 1.0] {
                let cfg = CorpusConfig {
                    sample_fraction: fraction,
                    sample_seed: 7,
                    english_threshold: 0.35,
                };
                let now = sample_survives(&id, &cfg);
                assert!(!prev || now, "survivor set must grow with fraction");
                prev = now;
            }
        }
    }
}
