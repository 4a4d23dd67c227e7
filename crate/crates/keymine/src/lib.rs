//! Mining of opinionated keyphrases from social-media comment corpora.
//!
//! The pipeline runs seven stages over each comment: text normalization,
//! sentence segmentation, part-of-speech tagging, lemmatization, grammar
//! chunking over the tag sequence, stopword/length filtering, and a
//! valence-lexicon sentiment gate that keeps only keyphrases with a
//! non-neutral polarity. Surviving keyphrases are aggregated into
//! polarity-split frequency reports.
//!
//! The crate ships as a library plus a `keymine` binary exposing the full
//! run and each stage boundary as subcommands.

// lets test-support modules shared with the integration tests name this
// crate by its external path
extern crate self as keymine;

pub mod annotate;
pub mod chunk;
pub mod cli;
pub mod corpus;
pub mod data;
pub mod pipeline;
pub mod preprocess;
pub mod refine;
pub mod report;

pub use annotate::{Lemmatizer, PosTag, SentenceSplitter, TaggedToken, Tagger};
pub use chunk::{assemble_keyphrases, find_chunks, parse_grammar, Chunk, CompiledGrammar, IobLabel, IobToken};
pub use corpus::{CorpusConfig, Language, RawComment};
pub use preprocess::Preprocessor;
pub use refine::{FilterConfig, Polarity, ScoredKeyphrase, SentimentLexicon};
pub use report::{KeyphraseStat, RunSummary};

/// Pattern text of the default chunking grammar.
pub const DEFAULT_GRAMMAR: &str =
    "{ <DT>? <JJ.*>* <NN.*>* <VB.*>? (<IN>? <DT>? <JJ.*>* <NN.*>*)? }";
