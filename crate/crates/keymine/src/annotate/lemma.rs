//! POS-aware lemmatization: exception tables per word class, then suffix
//! stripping validated against a wordform vocabulary, else the lowercased
//! token itself.

use std::collections::{HashMap, HashSet};

use super::tags::{PosClass, PosTag};
use super::TaggedToken;

pub struct Lemmatizer {
    exceptions: HashMap<(String, PosClass), String>,
    vocab: HashSet<String>,
}

impl Lemmatizer {
    pub fn new(exceptions: HashMap<(String, PosClass), String>, vocab: HashSet<String>) -> Self {
        Lemmatizer { exceptions, vocab }
    }

    /// Lemma of a single token under its tag. The token is lowercased
    /// first; suffix rules fire only for inflected tags (NNS, VBD, VBG,
    /// VBN, VBZ, JJR, JJS and plural proper nouns).
    pub fn lemma(&self, token: &str, tag: PosTag) -> String {
        let lower = token.to_lowercase();
        let class = tag.class();
        if class == PosClass::Other {
            return lower;
        }
        if let Some(lemma) = self.exceptions.get(&(lower.clone(), class)) {
            return lemma.clone();
        }
        if !tag.is_inflected() {
            return lower;
        }
        match class {
            PosClass::Noun => self.noun_singular(&lower),
            PosClass::Verb => match tag {
                PosTag::Vbd | PosTag::Vbn => self.strip_ed(&lower),
                PosTag::Vbg => self.strip_ing(&lower),
                PosTag::Vbz => self.strip_s(&lower),
                _ => lower,
            },
            PosClass::Adjective => self.strip_comparative(&lower),
            PosClass::Other => lower,
        }
    }

    pub fn lemmatize(&self, tagged: &[(String, PosTag)], sentence_index: usize) -> Vec<TaggedToken> {
        tagged
            .iter()
            .enumerate()
            .map(|(token_index, (surface, tag))| TaggedToken {
                surface: surface.clone(),
                lemma: self.lemma(surface, *tag),
                tag: *tag,
                sentence_index,
                token_index,
            })
            .collect()
    }

    /// First candidate found in the vocabulary wins; otherwise `fallback`.
    fn pick<'a>(&self, candidates: &[String], fallback: &'a str) -> String {
        for c in candidates {
            if self.vocab.contains(c) {
                return c.clone();
            }
        }
        fallback.to_string()
    }

    fn noun_singular(&self, word: &str) -> String {
        let n = word.len();
        if n > 3 && word.ends_with("ies") {
            return format!("{}y", &word[..n - 3]);
        }
        if n > 3 && word.ends_with("ves") {
            let stem = &word[..n - 3];
            return self.pick(&[format!("{stem}f"), format!("{stem}fe")], &format!("{stem}f"));
        }
        if word.ends_with("ss") || !word.ends_with('s') {
            return word.to_string();
        }
        let strip_s = word[..n - 1].to_string();
        if n > 2 && word.ends_with("es") {
            let strip_es = word[..n - 2].to_string();
            let es_default = ["ses", "xes", "zes", "ches", "shes", "oes"]
                .iter()
                .any(|suf| word.ends_with(suf));
            let fallback = if es_default { &strip_es } else { &strip_s };
            return self.pick(&[strip_s.clone(), strip_es.clone()], fallback);
        }
        strip_s
    }

    fn strip_s(&self, word: &str) -> String {
        let n = word.len();
        if n > 3 && word.ends_with("ies") {
            return format!("{}y", &word[..n - 3]);
        }
        if word.ends_with("ss") || !word.ends_with('s') || n < 3 {
            return word.to_string();
        }
        let strip_s = word[..n - 1].to_string();
        if word.ends_with("es") {
            let strip_es = word[..n - 2].to_string();
            let es_default = ["ses", "xes", "zes", "ches", "shes", "oes"]
                .iter()
                .any(|suf| word.ends_with(suf));
            let fallback = if es_default { &strip_es } else { &strip_s };
            return self.pick(&[strip_s.clone(), strip_es.clone()], fallback);
        }
        strip_s
    }

    fn strip_ed(&self, word: &str) -> String {
        let n = word.len();
        if !word.ends_with("ed") || n < 4 {
            return word.to_string();
        }
        if word.ends_with("ied") {
            return format!("{}y", &word[..n - 3]);
        }
        let stem = &word[..n - 2];
        self.stem_candidates(stem)
    }

    fn strip_ing(&self, word: &str) -> String {
        let n = word.len();
        if !word.ends_with("ing") || n < 5 {
            return word.to_string();
        }
        let stem = &word[..n - 3];
        self.stem_candidates(stem)
    }

    /// Resolves e-restoration ("us" -> "use") and consonant undoubling
    /// ("stopp" -> "stop") against the vocabulary; plain stem otherwise.
    fn stem_candidates(&self, stem: &str) -> String {
        let mut candidates = vec![format!("{stem}e"), stem.to_string()];
        let chars: Vec<char> = stem.chars().collect();
        if chars.len() >= 3 {
            let last = chars[chars.len() - 1];
            let prev = chars[chars.len() - 2];
            if last == prev && !"aeiou".contains(last) {
                candidates.push(chars[..chars.len() - 1].iter().collect());
            }
        }
        self.pick(&candidates, stem)
    }

    fn strip_comparative(&self, word: &str) -> String {
        let n = word.len();
        let stem = if n > 4 && word.ends_with("iest") {
            return format!("{}y", &word[..n - 4]);
        } else if n > 4 && word.ends_with("ier") {
            return format!("{}y", &word[..n - 3]);
        } else if n > 4 && word.ends_with("est") {
            &word[..n - 3]
        } else if n > 3 && word.ends_with("er") {
            &word[..n - 2]
        } else {
            return word.to_string();
        };
        let mut candidates = vec![stem.to_string(), format!("{stem}e")];
        let chars: Vec<char> = stem.chars().collect();
        if chars.len() >= 3 && chars[chars.len() - 1] == chars[chars.len() - 2] {
            candidates.push(chars[..chars.len() - 1].iter().collect());
        }
        self.pick(&candidates, stem)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data;

    fn lem() -> Lemmatizer {
        data::default_resources().lemmatizer()
    }

    #[test]
    fn plural_nouns() {
        assert_eq!(lem().lemma("masks", PosTag::Nns), "mask");
        assert_eq!(lem().lemma("areas", PosTag::Nns), "area");
        assert_eq!(lem().lemma("houses", PosTag::Nns), "house");
        assert_eq!(lem().lemma("watches", PosTag::Nns), "watch");
        assert_eq!(lem().lemma("cities", PosTag::Nns), "city");
        assert_eq!(lem().lemma("lives", PosTag::Nns), "life");
        assert_eq!(lem().lemma("children", PosTag::Nns), "child");
        assert_eq!(lem().lemma("classes", PosTag::Nns), "class");
    }

    #[test]
    fn singular_noun_is_identity() {
        assert_eq!(lem().lemma("mask", PosTag::Nn), "mask");
        assert_eq!(lem().lemma("virus", PosTag::Nn), "virus");
        assert_eq!(lem().lemma("buying", PosTag::Nn), "buying");
    }

    #[test]
    fn verb_forms() {
        assert_eq!(lem().lemma("seen", PosTag::Vbn), "see");
        assert_eq!(lem().lemma("sees", PosTag::Vbz), "see");
        assert_eq!(lem().lemma("used", PosTag::Vbd), "use");
        assert_eq!(lem().lemma("using", PosTag::Vbg), "use");
        assert_eq!(lem().lemma("stopped", PosTag::Vbd), "stop");
        assert_eq!(lem().lemma("running", PosTag::Vbg), "run");
        assert_eq!(lem().lemma("carried", PosTag::Vbd), "carry");
        assert_eq!(lem().lemma("was", PosTag::Vbd), "be");
        assert_eq!(lem().lemma("goes", PosTag::Vbz), "go");
        assert_eq!(lem().lemma("buying", PosTag::Vbg), "buy");
    }

    #[test]
    fn adjectives() {
        assert_eq!(lem().lemma("bigger", PosTag::Jjr), "big");
        assert_eq!(lem().lemma("nicer", PosTag::Jjr), "nice");
        assert_eq!(lem().lemma("happiest", PosTag::Jjs), "happy");
        assert_eq!(lem().lemma("better", PosTag::Jjr), "good");
        assert_eq!(lem().lemma("worst", PosTag::Jjs), "bad");
    }

    #[test]
    fn lowercases_before_lookup() {
        assert_eq!(lem().lemma("Stop", PosTag::Nnp), "stop");
        assert_eq!(lem().lemma("MASKS", PosTag::Nns), "mask");
    }

    #[test]
    fn unknown_words_strip_deterministically() {
        assert_eq!(lem().lemma("flurps", PosTag::Nns), "flurp");
        assert_eq!(lem().lemma("flurped", PosTag::Vbd), "flurp");
        assert_eq!(lem().lemma("flurping", PosTag::Vbg), "flurp");
    }

    #[test]
    fn lemmatize_preserves_length_tags_and_indices() {
        let tagged = vec![
            ("Stop".to_string(), PosTag::Nnp),
            ("panic".to_string(), PosTag::Nn),
            ("masks".to_string(), PosTag::Nns),
        ];
        let out = lem().lemmatize(&tagged, 3);
        assert_eq!(out.len(), tagged.len());
        for (i, tok) in out.iter().enumerate() {
            assert_eq!(tok.sentence_index, 3);
            assert_eq!(tok.token_index, i);
            assert_eq!(tok.tag, tagged[i].1);
            assert_eq!(tok.lemma, tok.lemma.to_lowercase());
        }
        assert_eq!(out[2].lemma, "mask");
    }

    #[test]
    fn idempotent_on_own_output() {
        let words = ["masks", "seen", "carried", "happiest", "children", "using"];
        let tags = [
            PosTag::Nns,
            PosTag::Vbn,
            PosTag::Vbd,
            PosTag::Jjs,
            PosTag::Nns,
            PosTag::Vbg,
        ];
        for (w, t) in words.iter().zip(tags) {
            let once = lem().lemma(w, t);
            // a lemma re-entering under its base-form tag must be stable
            let base = match t.class() {
                PosClass::Noun => PosTag::Nn,
                PosClass::Verb => PosTag::Vb,
                PosClass::Adjective => PosTag::Jj,
                PosClass::Other => t,
            };
            assert_eq!(lem().lemma(&once, base), once);
        }
    }
}
