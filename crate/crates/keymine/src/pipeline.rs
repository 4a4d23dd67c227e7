//! End-to-end document processing: the per-comment extraction pipeline and
//! the parallel corpus driver.

use rayon::prelude::*;

use crate::annotate::{Lemmatizer, SentenceSplitter, TaggedToken, Tagger};
use crate::chunk::{assemble_keyphrases, find_chunks, parse_grammar, to_iob, CompiledGrammar, GrammarError, IobToken};
use crate::corpus::{detect_language, sample_survives, CorpusConfig, Dedup, Language, RawComment};
use crate::data::Resources;
use crate::preprocess::Preprocessor;
use crate::refine::{refine, FilterConfig, RefineCounters, ScoredKeyphrase, SentimentLexicon};
use crate::report::{Aggregate, RunSummary};

/// Immutable bundle of every stage's machinery; shareable across workers.
pub struct Pipeline {
    pub preprocessor: Preprocessor,
    pub splitter: SentenceSplitter,
    pub tagger: Tagger,
    pub lemmatizer: Lemmatizer,
    pub grammar: CompiledGrammar,
    pub filter: FilterConfig,
    pub sentiment: SentimentLexicon,
    pub merge_adjacent_chunks: bool,
}

/// Keyphrases and counters extracted from one document.
#[derive(Debug, Default)]
pub struct DocumentOutput {
    pub keyphrases: Vec<ScoredKeyphrase>,
    pub sentences: u64,
    pub counters: RefineCounters,
}

impl Pipeline {
    pub fn from_resources(
        resources: &Resources,
        grammar_source: &str,
        filter: FilterConfig,
        merge_adjacent_chunks: bool,
    ) -> Result<Self, GrammarError> {
        Ok(Pipeline {
            preprocessor: resources.preprocessor(),
            splitter: resources.sentence_splitter(),
            tagger: resources.tagger(),
            lemmatizer: resources.lemmatizer(),
            grammar: parse_grammar(grammar_source)?,
            filter,
            sentiment: resources.sentiment_lexicon(),
            merge_adjacent_chunks,
        })
    }

    /// Sentence-wise annotation of already-normalized text.
    pub fn annotate_text(&self, text: &str) -> Vec<Vec<TaggedToken>> {
        self.splitter
            .split_sentences(text)
            .iter()
            .enumerate()
            .filter_map(|(sentence_index, sentence)| {
                let tokens = crate::annotate::tokenize(sentence);
                if tokens.is_empty() {
                    return None;
                }
                let tagged = self.tagger.tag(&tokens);
                Some(self.lemmatizer.lemmatize(&tagged, sentence_index))
            })
            .collect()
    }

    /// Chunks one annotated sentence into its IOB labelling and candidate
    /// lemma sequences.
    pub fn chunk_sentence(&self, sentence: &[TaggedToken]) -> (Vec<IobToken>, Vec<Vec<String>>) {
        let chunks = find_chunks(sentence, &self.grammar);
        let iob = to_iob(sentence, &chunks);
        let candidates = assemble_keyphrases(&iob, self.merge_adjacent_chunks);
        (iob, candidates)
    }

    /// Runs the full extraction over one raw comment.
    pub fn process_document(&self, id: &str, raw_text: &str) -> DocumentOutput {
        let text = self.preprocessor.preprocess(raw_text);
        let sentences = self.annotate_text(&text);
        let mut candidates: Vec<(usize, Vec<String>)> = Vec::new();
        for sentence in &sentences {
            let sentence_index = sentence[0].sentence_index;
            let (_, assembled) = self.chunk_sentence(sentence);
            for candidate in assembled {
                candidates.push((sentence_index, candidate));
            }
        }
        let (keyphrases, counters) = refine(id, &candidates, &self.filter, &self.sentiment);
        DocumentOutput {
            keyphrases,
            sentences: sentences.len() as u64,
            counters,
        }
    }
}

/// Comments surviving the corpus funnel, with the funnel counters.
pub struct FunnelOutput {
    pub documents: Vec<RawComment>,
    pub after_dedup: u64,
    pub after_sampling: u64,
    pub english: u64,
    pub non_english_dropped: u64,
    pub unknown_language_dropped: u64,
}

/// Serial corpus funnel: dedup (optional), seeded sampling, language gate.
pub fn corpus_funnel(
    comments: impl Iterator<Item = RawComment>,
    cfg: &CorpusConfig,
    resources: &Resources,
    dedup_enabled: bool,
) -> FunnelOutput {
    let mut dedup = Dedup::new();
    let mut after_dedup = 0u64;
    let mut after_sampling = 0u64;
    let mut non_english_dropped = 0u64;
    let mut unknown_language_dropped = 0u64;
    let mut documents = Vec::new();

    for comment in comments {
        if dedup_enabled && !dedup.is_first(&comment.text) {
            continue;
        }
        after_dedup += 1;
        if !sample_survives(&comment.id, cfg) {
            continue;
        }
        after_sampling += 1;
        let (language, _) =
            detect_language(&comment.text, &resources.english_words, cfg.english_threshold);
        match language {
            Language::English => documents.push(comment),
            Language::Other => non_english_dropped += 1,
            Language::Unknown => unknown_language_dropped += 1,
        }
    }

    FunnelOutput {
        after_dedup,
        after_sampling,
        english: documents.len() as u64,
        non_english_dropped,
        unknown_language_dropped,
        documents,
    }
}

/// Output of a whole corpus run, keyphrases in document order.
pub struct CorpusOutput {
    pub keyphrases: Vec<ScoredKeyphrase>,
    pub aggregate: Aggregate,
    pub summary: RunSummary,
}

/// Fans documents out per worker and folds the results back in document
/// order, so output is independent of the worker count.
pub fn process_corpus(pipeline: &Pipeline, funnel: FunnelOutput) -> CorpusOutput {
    let outputs: Vec<DocumentOutput> = funnel
        .documents
        .par_iter()
        .map(|doc| pipeline.process_document(&doc.id, &doc.text))
        .collect();

    let mut keyphrases = Vec::new();
    let mut counters = RefineCounters::default();
    let mut aggregate = Aggregate::new();
    let mut sentences = 0u64;
    for output in outputs {
        for keyphrase in &output.keyphrases {
            aggregate.add(keyphrase);
        }
        keyphrases.extend(output.keyphrases);
        counters.merge(&output.counters);
        sentences += output.sentences;
    }

    let mut summary = RunSummary {
        after_dedup: funnel.after_dedup,
        after_sampling: funnel.after_sampling,
        english: funnel.english,
        non_english_dropped: funnel.non_english_dropped,
        unknown_language_dropped: funnel.unknown_language_dropped,
        documents_processed: funnel.english,
        sentences,
        unique_negative_keyphrases: aggregate.unique(crate::refine::Polarity::Negative),
        unique_positive_keyphrases: aggregate.unique(crate::refine::Polarity::Positive),
        ..Default::default()
    };
    summary.absorb_refine_counters(&counters);

    CorpusOutput {
        keyphrases,
        aggregate,
        summary,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data;
    use crate::refine::Polarity;
    use crate::DEFAULT_GRAMMAR;

    fn pipeline() -> Pipeline {
        let res = data::default_resources();
        let filter = FilterConfig::new(res.stopwords.clone(), res.boundary_stopwords.clone());
        Pipeline::from_resources(&res, DEFAULT_GRAMMAR, filter, true).unwrap()
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
    fn worked_sentence_end_to_end() {
        let out = pipeline().process_document(
            "c1",
            "Stop panic buying and be sure to use face masks in public areas",
        );
        assert_eq!(out.sentences, 1);
        assert_eq!(out.keyphrases.len(), 2);
        assert_eq!(out.keyphrases[0].text, "stop panic buying");
        assert_eq!(out.keyphrases[0].score, -0.6705);
        assert_eq!(out.keyphrases[0].polarity, Polarity::Negative);
        assert_eq!(out.keyphrases[1].text, "use face mask in public area");
        assert_eq!(out.keyphrases[1].score, 0.1027);
        assert_eq!(out.keyphrases[1].polarity, Polarity::Positive);
        assert!(!out
            .keyphrases
            .iter()
            .any(|k| k.text.contains("be sure") || k.text == "sure"));
    }

    #[test]
    fn empty_document_yields_nothing() {
        let out = pipeline().process_document("c1", "");
        assert_eq!(out.sentences, 0);
        assert!(out.keyphrases.is_empty());
    }

    #[test]
    fn funnel_counts_are_monotone() {
        let res = data::default_resources();
        let comments = vec![
            comment("1", "Stay home and wash your hands."),
            comment("2", "stay   HOME and wash your hands."),
            comment("3", "el virus se propaga por todo el mundo hoy"),
            comment("4", "xz qq"),
            comment("5", "The hospitals are full and the nurses are exhausted."),
        ];
        let read = comments.len() as u64;
        let funnel = corpus_funnel(
            comments.into_iter(),
            &CorpusConfig::default(),
            &res,
            true,
        );
        assert!(read >= funnel.after_dedup);
        assert!(funnel.after_dedup >= funnel.after_sampling);
        assert!(funnel.after_sampling >= funnel.english);
        assert_eq!(funnel.after_dedup, 4);
        assert_eq!(funnel.non_english_dropped, 1);
        assert_eq!(funnel.unknown_language_dropped, 1);
        assert_eq!(funnel.english, 2);
    }

    #[test]
    fn dedup_can_be_disabled() {
        let res = data::default_resources();
        let comments = vec![
            comment("1", "Stay home."),
            comment("2", "stay home."),
        ];
        let funnel = corpus_funnel(
            comments.into_iter(),
            &CorpusConfig::default(),
            &res,
            false,
        );
        assert_eq!(funnel.after_dedup, 2);
    }

    #[test]
    fn process_corpus_conserves_counts() {
        let res = data::default_resources();
        let comments: Vec<RawComment> = (0..50)
            .map(|i| {
                comment(
                    &format!("id{i}"),
                    "Stop panic buying and be sure to use face masks in public areas",
                )
            })
            .collect();
        let funnel = corpus_funnel(
            comments.into_iter(),
            &CorpusConfig::default(),
            &res,
            false,
        );
        let out = process_corpus(&pipeline(), funnel);
        assert_eq!(out.summary.emitted, out.keyphrases.len() as u64);
        assert_eq!(out.aggregate.total(), out.summary.emitted);
        assert_eq!(out.summary.documents_processed, 50);
        assert_eq!(out.summary.emitted, 100);
    }
}
