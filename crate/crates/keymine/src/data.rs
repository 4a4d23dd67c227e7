//! Loading of the bundled data tables and their file-based overrides.
//!
//! Every table ships inside the binary so a plain `keymine run` works with
//! no external files; each can be replaced through a CLI flag. All loaders
//! fail fast with a description of the offending line.

use std::collections::{HashMap, HashSet};
use std::fs;
use std::path::Path;

use thiserror::Error;

use crate::annotate::{Lemmatizer, PosClass, PosTag, SentenceSplitter, Tagger};
use crate::preprocess::Preprocessor;
use crate::refine::SentimentLexicon;

pub const DEFAULT_CONTRACTIONS: &str = include_str!("../data/contractions.csv");
pub const DEFAULT_SLANG: &str = include_str!("../data/slang.csv");
pub const DEFAULT_TAGGER_LEXICON: &str = include_str!("../data/tagger_lexicon.tsv");
pub const DEFAULT_ABBREVIATIONS: &str = include_str!("../data/abbreviations.txt");
pub const DEFAULT_LEMMA_EXCEPTIONS: &str = include_str!("../data/lemma_exceptions.tsv");
pub const DEFAULT_STOPWORDS: &str = include_str!("../data/stopwords.txt");
pub const DEFAULT_BOUNDARY_STOPWORDS: &str = include_str!("../data/boundary_stopwords.txt");
pub const DEFAULT_SENTIMENT_LEXICON: &str = include_str!("../data/sentiment_lexicon.tsv");
pub const DEFAULT_ENGLISH_WORDS: &str = include_str!("../data/english_words.txt");

#[derive(Debug, Error)]
pub enum DataError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{what} line {line}: {msg}")]
    Parse {
        what: &'static str,
        line: usize,
        msg: String,
    },
}

/// Parsed contents of every data table.
pub struct Resources {
    pub contractions: Vec<(String, String)>,
    pub slang: Vec<(String, String)>,
    pub tagger_lexicon_lower: HashMap<String, PosTag>,
    pub tagger_lexicon_exact: HashMap<String, PosTag>,
    pub abbreviations: HashSet<String>,
    pub lemma_exceptions: HashMap<(String, PosClass), String>,
    pub stopwords: HashSet<String>,
    pub boundary_stopwords: HashSet<String>,
    pub sentiment_valences: HashMap<String, f64>,
    pub english_words: HashSet<String>,
}

impl Resources {
    pub fn preprocessor(&self) -> Preprocessor {
        Preprocessor::new(&self.contractions, &self.slang)
    }

    pub fn sentence_splitter(&self) -> SentenceSplitter {
        SentenceSplitter::new(self.abbreviations.clone())
    }

    pub fn tagger(&self) -> Tagger {
        Tagger::new(
            self.tagger_lexicon_lower.clone(),
            self.tagger_lexicon_exact.clone(),
        )
    }

    pub fn lemmatizer(&self) -> Lemmatizer {
        // wordform vocabulary doubles as the stem-validation set
        let vocab: HashSet<String> = self.tagger_lexicon_lower.keys().cloned().collect();
        Lemmatizer::new(self.lemma_exceptions.clone(), vocab)
    }

    pub fn sentiment_lexicon(&self) -> SentimentLexicon {
        SentimentLexicon::new(self.sentiment_valences.clone())
    }
}

/// Parses the bundled defaults. The bundled tables are covered by tests, so
/// failures here are build defects rather than runtime conditions.
pub fn default_resources() -> Resources {
    try_resources(
        DEFAULT_CONTRACTIONS,
        DEFAULT_SLANG,
        DEFAULT_TAGGER_LEXICON,
        DEFAULT_ABBREVIATIONS,
        DEFAULT_LEMMA_EXCEPTIONS,
        DEFAULT_STOPWORDS,
        DEFAULT_BOUNDARY_STOPWORDS,
        DEFAULT_SENTIMENT_LEXICON,
        DEFAULT_ENGLISH_WORDS,
    )
    .expect("bundled data tables parse")
}

#[allow(clippy::too_many_arguments)]
fn try_resources(
    contractions: &str,
    slang: &str,
    tagger: &str,
    abbreviations: &str,
    lemma_exceptions: &str,
    stopwords: &str,
    boundary_stopwords: &str,
    sentiment: &str,
    english_words: &str,
) -> Result<Resources, DataError> {
    let (lower, exact) = parse_tagger_lexicon(tagger)?;
    Ok(Resources {
        contractions: parse_two_column_csv(contractions, "contraction table")?,
        slang: parse_two_column_csv(slang, "slang table")?,
        tagger_lexicon_lower: lower,
        tagger_lexicon_exact: exact,
        abbreviations: parse_word_lines(abbreviations),
        lemma_exceptions: parse_lemma_exceptions(lemma_exceptions)?,
        stopwords: parse_word_lines(stopwords),
        boundary_stopwords: parse_word_lines(boundary_stopwords),
        sentiment_valences: parse_sentiment_lexicon(sentiment)?,
        english_words: parse_word_lines(english_words),
    })
}

/// Per-table override paths; `None` keeps the bundled default.
#[derive(Debug, Default, Clone)]
pub struct ResourcePaths {
    pub contractions: Option<String>,
    pub slang: Option<String>,
    pub tagger_lexicon: Option<String>,
    pub abbreviations: Option<String>,
    pub lemma_exceptions: Option<String>,
    pub stopwords: Option<String>,
    pub boundary_stopwords: Option<String>,
    pub sentiment_lexicon: Option<String>,
    pub english_words: Option<String>,
}

pub fn load_resources(paths: &ResourcePaths) -> Result<Resources, DataError> {
    let read = |p: &Option<String>, default: &'static str| -> Result<String, DataError> {
        match p {
            Some(path) => fs::read_to_string(Path::new(path)).map_err(|source| DataError::Io {
                path: path.clone(),
                source,
            }),
            None => Ok(default.to_string()),
        }
    };
    try_resources(
        &read(&paths.contractions, DEFAULT_CONTRACTIONS)?,
        &read(&paths.slang, DEFAULT_SLANG)?,
        &read(&paths.tagger_lexicon, DEFAULT_TAGGER_LEXICON)?,
        &read(&paths.abbreviations, DEFAULT_ABBREVIATIONS)?,
        &read(&paths.lemma_exceptions, DEFAULT_LEMMA_EXCEPTIONS)?,
        &read(&paths.stopwords, DEFAULT_STOPWORDS)?,
        &read(&paths.boundary_stopwords, DEFAULT_BOUNDARY_STOPWORDS)?,
        &read(&paths.sentiment_lexicon, DEFAULT_SENTIMENT_LEXICON)?,
        &read(&paths.english_words, DEFAULT_ENGLISH_WORDS)?,
    )
}

/// `key,value` CSV with a header row; keys are lowercased.
fn parse_two_column_csv(text: &str, what: &'static str) -> Result<Vec<(String, String)>, DataError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(text.as_bytes());
    let mut rows = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| DataError::Parse {
            what,
            line: i + 2,
            msg: e.to_string(),
        })?;
        if record.len() < 2 {
            return Err(DataError::Parse {
                what,
                line: i + 2,
                msg: "expected two columns".into(),
            });
        }
        rows.push((record[0].trim().to_lowercase(), record[1].trim().to_string()));
    }
    Ok(rows)
}

/// One token per line, `#` comments and blank lines skipped.
fn parse_word_lines(text: &str) -> HashSet<String> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(str::to_string)
        .collect()
}

/// `wordform<TAB>tag`; anything containing an uppercase letter lands in the
/// case-sensitive section.
fn parse_tagger_lexicon(
    text: &str,
) -> Result<(HashMap<String, PosTag>, HashMap<String, PosTag>), DataError> {
    let mut lower = HashMap::new();
    let mut exact = HashMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim_end();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (form, tag) = line.split_once('\t').ok_or(DataError::Parse {
            what: "tagger lexicon",
            line: i + 1,
            msg: "expected form<TAB>tag".into(),
        })?;
        let tag: PosTag = tag.trim().parse().map_err(|_| DataError::Parse {
            what: "tagger lexicon",
            line: i + 1,
            msg: format!("unknown tag {:?}", tag),
        })?;
        if form.chars().any(|c| c.is_uppercase()) {
            exact.insert(form.to_string(), tag);
        } else {
            lower.insert(form.to_string(), tag);
        }
    }
    Ok((lower, exact))
}

/// `form<TAB>lemma<TAB>class` with class one of noun, verb, adj.
fn parse_lemma_exceptions(text: &str) -> Result<HashMap<(String, PosClass), String>, DataError> {
    let mut map = HashMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim_end();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut parts = line.split('\t');
        let (form, lemma, class) = match (parts.next(), parts.next(), parts.next()) {
            (Some(f), Some(l), Some(c)) => (f, l, c),
            _ => {
                return Err(DataError::Parse {
                    what: "lemma exceptions",
                    line: i + 1,
                    msg: "expected form<TAB>lemma<TAB>class".into(),
                })
            }
        };
        let class = match class.trim() {
            "noun" => PosClass::Noun,
            "verb" => PosClass::Verb,
            "adj" => PosClass::Adjective,
            other => {
                return Err(DataError::Parse {
                    what: "lemma exceptions",
                    line: i + 1,
                    msg: format!("unknown class {other:?}"),
                })
            }
        };
        map.insert((form.to_string(), class), lemma.to_string());
    }
    Ok(map)
}

/// TSV whose first two columns are `token<TAB>mean-valence`; extra columns
/// are ignored.
fn parse_sentiment_lexicon(text: &str) -> Result<HashMap<String, f64>, DataError> {
    let mut map = HashMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim_end();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut parts = line.split('\t');
        let (token, valence) = match (parts.next(), parts.next()) {
            (Some(t), Some(v)) => (t, v),
            _ => {
                return Err(DataError::Parse {
                    what: "sentiment lexicon",
                    line: i + 1,
                    msg: "expected token<TAB>valence".into(),
                })
            }
        };
        let valence: f64 = valence.trim().parse().map_err(|_| DataError::Parse {
            what: "sentiment lexicon",
            line: i + 1,
            msg: format!("bad valence {valence:?}"),
        })?;
        map.insert(token.to_string(), valence);
    }
    Ok(map)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_tables_parse() {
        let res = default_resources();
        assert!(res.contractions.len() > 50);
        assert!(res.slang.len() > 50);
        assert!(res.tagger_lexicon_lower.len() > 4000);
        assert!(!res.tagger_lexicon_exact.is_empty());
        assert!(res.sentiment_valences.len() > 500);
        assert_eq!(res.english_words.len(), 2000);
        assert!(res.stopwords.contains("there"));
        assert!(res.boundary_stopwords.contains("be"));
        assert!(res.boundary_stopwords.contains("sure"));
    }

    #[test]
    fn override_with_missing_file_is_an_error() {
        let paths = ResourcePaths {
            stopwords: Some("/nonexistent/stopwords.txt".into()),
            ..Default::default()
        };
        assert!(matches!(load_resources(&paths), Err(DataError::Io { .. })));
    }
}
