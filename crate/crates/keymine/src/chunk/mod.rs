//! Chunk extraction over tagged sentences, CoNLL IOB conversion and
//! candidate keyphrase assembly.

pub mod grammar;

pub use grammar::{parse_grammar, parse_pattern, CompiledGrammar, GrammarError, PatternAst, TagPredicate};

use serde::{Deserialize, Serialize};

use crate::annotate::{PosTag, TaggedToken};

/// A grammar match over one sentence: token span `[start, end)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Chunk {
    pub start: usize,
    pub end: usize,
}

impl Chunk {
    pub fn tokens<'a>(&self, sentence: &'a [TaggedToken]) -> &'a [TaggedToken] {
        &sentence[self.start..self.end]
    }
}

/// CoNLL IOB label: a token begins a key term, continues one, or is
/// outside every chunk.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum IobLabel {
    #[serde(rename = "B-KT")]
    Begin,
    #[serde(rename = "I-KT")]
    Inside,
    #[serde(rename = "O")]
    Outside,
}

impl IobLabel {
    pub fn as_str(&self) -> &'static str {
        match self {
            IobLabel::Begin => "B-KT",
            IobLabel::Inside => "I-KT",
            IobLabel::Outside => "O",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IobToken {
    pub lemma: String,
    pub tag: PosTag,
    pub label: IobLabel,
}

/// Greedy leftmost-longest chunking of one sentence: at each position take
/// the longest non-empty grammar match and resume after it, otherwise
/// advance one token. Chunks come out ordered and disjoint.
pub fn find_chunks(sentence: &[TaggedToken], grammar: &CompiledGrammar) -> Vec<Chunk> {
    let tags: Vec<&str> = sentence.iter().map(|t| t.tag.as_str()).collect();
    find_chunks_in_tags(&tags, grammar)
}

/// Same policy over a bare tag sequence.
pub fn find_chunks_in_tags(tags: &[&str], grammar: &CompiledGrammar) -> Vec<Chunk> {
    let mut chunks = Vec::new();
    let mut i = 0;
    while i < tags.len() {
        match grammar.longest_match(&tags[i..]) {
            Some(len) => {
                chunks.push(Chunk {
                    start: i,
                    end: i + len,
                });
                i += len;
            }
            None => i += 1,
        }
    }
    chunks
}

/// Labels every token of the sentence: chunk-initial tokens `B-KT`, other
/// chunk tokens `I-KT`, everything else `O`. Chunks must be ordered,
/// disjoint and in bounds; a violation is a programming error.
pub fn to_iob(sentence: &[TaggedToken], chunks: &[Chunk]) -> Vec<IobToken> {
    let mut labels = vec![IobLabel::Outside; sentence.len()];
    let mut prev_end = 0;
    for chunk in chunks {
        assert!(
            chunk.start >= prev_end && chunk.start < chunk.end && chunk.end <= sentence.len(),
            "chunks must be ordered, disjoint and in bounds: {chunk:?}"
        );
        labels[chunk.start] = IobLabel::Begin;
        for label in &mut labels[chunk.start + 1..chunk.end] {
            *label = IobLabel::Inside;
        }
        prev_end = chunk.end;
    }
    sentence
        .iter()
        .zip(labels)
        .map(|(tok, label)| IobToken {
            lemma: tok.lemma.clone(),
            tag: tok.tag,
            label,
        })
        .collect()
}

/// Groups labelled tokens into candidate keyphrases (lemma sequences).
///
/// With `merge_adjacent_chunks` the candidates are the maximal runs of
/// non-`O` tokens, so a chunk starting right after another one merges into
/// it. Without it, every `B-KT` starts a fresh candidate.
pub fn assemble_keyphrases(iob: &[IobToken], merge_adjacent_chunks: bool) -> Vec<Vec<String>> {
    let mut candidates = Vec::new();
    let mut current: Vec<String> = Vec::new();
    for token in iob {
        match token.label {
            IobLabel::Outside => {
                if !current.is_empty() {
                    candidates.push(std::mem::take(&mut current));
                }
            }
            IobLabel::Begin if !merge_adjacent_chunks => {
                if !current.is_empty() {
                    candidates.push(std::mem::take(&mut current));
                }
                current.push(token.lemma.clone());
            }
            IobLabel::Begin | IobLabel::Inside => current.push(token.lemma.clone()),
        }
    }
    if !current.is_empty() {
        candidates.push(current);
    }
    candidates
}

#[cfg(test)]
#[path = "../../tests/support/oracle.rs"]
mod oracle;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::DEFAULT_GRAMMAR;

    /// Tags of the worked sentence "Stop panic buying and be sure to use
    /// face masks in public areas".
    const SENTENCE_TAGS: [&str; 13] = [
        "NNP", "NN", "NN", "CC", "VB", "JJ", "TO", "VB", "NN", "NNS", "IN", "JJ", "NNS",
    ];
    const SENTENCE_LEMMAS: [&str; 13] = [
        "stop", "panic", "buying", "and", "be", "sure", "to", "use", "face", "mask", "in",
        "public", "area",
    ];

    fn sentence() -> Vec<TaggedToken> {
        SENTENCE_TAGS
            .iter()
            .zip(SENTENCE_LEMMAS)
            .enumerate()
            .map(|(i, (tag, lemma))| TaggedToken {
                surface: lemma.to_string(),
                lemma: lemma.to_string(),
                tag: tag.parse().unwrap(),
                sentence_index: 0,
                token_index: i,
            })
            .collect()
    }

    #[test]
    fn worked_sentence_chunk_boundaries() {
        let g = parse_grammar(DEFAULT_GRAMMAR).unwrap();
        let chunks = find_chunks(&sentence(), &g);
        let spans: Vec<(usize, usize)> = chunks.iter().map(|c| (c.start, c.end)).collect();
        assert_eq!(spans, [(0, 3), (4, 6), (7, 10), (10, 13)]);
    }

    #[test]
    fn no_chunks_in_all_function_word_sentence() {
        let g = parse_grammar(DEFAULT_GRAMMAR).unwrap();
        let tags = ["CC", "TO", "CC"];
        assert!(find_chunks_in_tags(&tags, &g).is_empty());
    }

    #[test]
    fn worked_sentence_iob_listing() {
        let g = parse_grammar(DEFAULT_GRAMMAR).unwrap();
        let sent = sentence();
        let iob = to_iob(&sent, &find_chunks(&sent, &g));
        let expected = [
            ("stop", "NNP", "B-KT"),
            ("panic", "NN", "I-KT"),
            ("buying", "NN", "I-KT"),
            ("and", "CC", "O"),
            ("be", "VB", "B-KT"),
            ("sure", "JJ", "I-KT"),
            ("to", "TO", "O"),
            ("use", "VB", "B-KT"),
            ("face", "NN", "I-KT"),
            ("mask", "NNS", "I-KT"),
            ("in", "IN", "B-KT"),
            ("public", "JJ", "I-KT"),
            ("area", "NNS", "I-KT"),
        ];
        let got: Vec<(&str, &str, &str)> = iob
            .iter()
            .map(|t| (t.lemma.as_str(), t.tag.as_str(), t.label.as_str()))
            .collect();
        assert_eq!(got, expected);
    }

    #[test]
    fn no_chunks_means_all_outside() {
        let sent = sentence();
        let iob = to_iob(&sent, &[]);
        assert!(iob.iter().all(|t| t.label == IobLabel::Outside));
    }

    #[test]
    fn single_token_chunk_is_one_begin() {
        let sent = sentence();
        let iob = to_iob(&sent, &[Chunk { start: 2, end: 3 }]);
        let begins = iob.iter().filter(|t| t.label == IobLabel::Begin).count();
        let insides = iob.iter().filter(|t| t.label == IobLabel::Inside).count();
        assert_eq!((begins, insides), (1, 0));
    }

    #[test]
    #[should_panic(expected = "ordered, disjoint and in bounds")]
    fn overlapping_chunks_are_a_programming_error() {
        let sent = sentence();
        to_iob(
            &sent,
            &[Chunk { start: 0, end: 3 }, Chunk { start: 2, end: 5 }],
        );
    }

    #[test]
    fn worked_sentence_assembly_merges_adjacent_chunks() {
        let g = parse_grammar(DEFAULT_GRAMMAR).unwrap();
        let sent = sentence();
        let iob = to_iob(&sent, &find_chunks(&sent, &g));
        let merged = assemble_keyphrases(&iob, true);
        assert_eq!(
            merged.iter().map(|c| c.join(" ")).collect::<Vec<_>>(),
            [
                "stop panic buying",
                "be sure",
                "use face mask in public area"
            ]
        );
        let unmerged = assemble_keyphrases(&iob, false);
        assert_eq!(
            unmerged.iter().map(|c| c.join(" ")).collect::<Vec<_>>(),
            [
                "stop panic buying",
                "be sure",
                "use face mask",
                "in public area"
            ]
        );
    }

    #[test]
    fn all_outside_assembles_to_nothing() {
        let sent = sentence();
        let iob = to_iob(&sent, &[]);
        assert!(assemble_keyphrases(&iob, true).is_empty());
    }

    #[test]
    fn back_to_back_chunks_merge_into_one_candidate() {
        let iob: Vec<IobToken> = [
            ("a", IobLabel::Begin),
            ("b", IobLabel::Inside),
            ("c", IobLabel::Begin),
            ("d", IobLabel::Inside),
        ]
        .iter()
        .map(|(lemma, label)| IobToken {
            lemma: lemma.to_string(),
            tag: PosTag::Nn,
            label: *label,
        })
        .collect();
        assert_eq!(assemble_keyphrases(&iob, true), vec![vec!["a", "b", "c", "d"]]);
        assert_eq!(
            assemble_keyphrases(&iob, false),
            vec![vec!["a", "b"], vec!["c", "d"]]
        );
    }

    #[test]
    fn small_pattern_agrees_with_brute_force_enumeration() {
        // "<VB.*>? <NN.*>*" over {VB, NN} up to length 4
        let source = "<VB.*>? <NN.*>*";
        let g = parse_grammar(source).unwrap();
        let ast = parse_pattern(source).unwrap();
        let alphabet = ["VB", "NN"];
        let mut checked = 0;
        for len in 0..=4usize {
            for mut idx in 0..alphabet.len().pow(len as u32) {
                let mut seq = Vec::with_capacity(len);
                for _ in 0..len {
                    seq.push(alphabet[idx % alphabet.len()]);
                    idx /= alphabet.len();
                }
                assert_eq!(
                    g.accepts(&seq),
                    !seq.is_empty() && oracle::accepts(&ast, &seq),
                    "{seq:?}"
                );
                checked += 1;
            }
        }
        assert_eq!(checked, 31);
    }

    #[test]
    fn compiled_chunking_matches_oracle_on_random_sequences() {
        let g = parse_grammar(DEFAULT_GRAMMAR).unwrap();
        let ast = parse_pattern(DEFAULT_GRAMMAR).unwrap();
        let alphabet = ["DT", "JJ", "NN", "NNS", "VB", "IN", "CC", "TO"];
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for _ in 0..10_000 {
            let len = (next() % 9) as usize;
            let seq: Vec<&str> = (0..len)
                .map(|_| alphabet[(next() % 8) as usize])
                .collect();
            let fast = find_chunks_in_tags(&seq, &g);
            let slow = oracle::chunks(&ast, &seq);
            assert_eq!(fast, slow, "{seq:?}");
        }
    }

    #[test]
    fn every_chunk_reverifies_against_the_oracle_matcher() {
        let g = parse_grammar(DEFAULT_GRAMMAR).unwrap();
        let ast = parse_pattern(DEFAULT_GRAMMAR).unwrap();
        let sent = sentence();
        for chunk in find_chunks(&sent, &g) {
            let tags: Vec<&str> = sent[chunk.start..chunk.end]
                .iter()
                .map(|t| t.tag.as_str())
                .collect();
            assert!(oracle::accepts(&ast, &tags));
        }
    }
}
