//! Text normalization applied to every raw comment before segmentation.
//!
//! Steps run in a fixed order: social-media artifact removal, contraction
//! expansion, HTML decoding, special-character stripping, repeated-character
//! compression, slang expansion, and removal of purely numeric words. Each
//! step is total over UTF-8 input and the full composition is idempotent.

use std::collections::HashMap;

use once_cell::sync::Lazy;
use regex::Regex;
use serde::Serialize;

/// A comment after normalization, ready for sentence segmentation.
#[derive(Debug, Clone, Serialize)]
pub struct CleanDocument {
    pub id: String,
    pub text: String,
    pub steps_applied: Vec<&'static str>,
}

pub const STEP_LABELS: [&str; 7] = [
    "strip_social_artifacts",
    "expand_contractions",
    "decode_html",
    "strip_special_chars",
    "compress_repeats",
    "expand_slang",
    "remove_number_words",
];

static URL_RE: Lazy<Regex> =
    Lazy::new(|| Regex::new(r"(?i)\b[a-z][a-z0-9+.-]*://\S*|\bwww\.\S*").unwrap());

/// Removes @-mentions, #-hashtags (tag text included) and URL-shaped
/// substrings, collapsing the surrounding whitespace.
pub fn strip_social_artifacts(text: &str) -> String {
    let text = URL_RE.replace_all(text, " ");
    let kept: Vec<&str> = text
        .split_whitespace()
        .filter(|tok| !tok.starts_with('@') && !tok.starts_with('#'))
        .collect();
    kept.join(" ")
}

/// Shortens every run of three or more identical characters inside a word
/// to exactly two.
pub fn compress_repeats(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    let mut prev: Option<char> = None;
    let mut run = 0usize;
    for c in text.chars() {
        if Some(c) == prev && !c.is_whitespace() {
            run += 1;
            if run > 2 {
                continue;
            }
        } else {
            prev = Some(c);
            run = 1;
        }
        out.push(c);
    }
    out
}

/// Keep-set for `strip_special_chars`: letters, digits, whitespace and the
/// punctuation needed downstream for sentence boundaries and tokenization.
pub fn in_keep_set(c: char) -> bool {
    c.is_alphabetic()
        || c.is_ascii_digit()
        || c.is_whitespace()
        || matches!(c, '.' | '!' | '?' | ';' | ':' | ',' | '\'' | '-')
}

pub fn strip_special_chars(text: &str) -> String {
    let kept: String = text.chars().filter(|&c| in_keep_set(c)).collect();
    collapse_whitespace(&kept)
}

static TAG_RE: Lazy<Regex> = Lazy::new(|| Regex::new(r"</?[a-zA-Z][^<>]*>").unwrap());
static ENTITY_RE: Lazy<Regex> =
    Lazy::new(|| Regex::new(r"&(#[0-9]{1,7}|#[xX][0-9a-fA-F]{1,6}|[a-zA-Z][a-zA-Z0-9]{1,30});").unwrap());

/// Named entities decoded by `decode_html`. The common subset is enough for
/// social-media text; unknown names are left alone and their `&`/`;` fall to
/// the special-character strip.
static NAMED_ENTITIES: &[(&str, &str)] = &[
    ("amp", "&"),
    ("lt", "<"),
    ("gt", ">"),
    ("quot", "\""),
    ("apos", "'"),
    ("nbsp", " "),
    ("ndash", "\u{2013}"),
    ("mdash", "\u{2014}"),
    ("lsquo", "\u{2018}"),
    ("rsquo", "\u{2019}"),
    ("ldquo", "\u{201C}"),
    ("rdquo", "\u{201D}"),
    ("hellip", "\u{2026}"),
    ("copy", "\u{A9}"),
    ("reg", "\u{AE}"),
    ("trade", "\u{2122}"),
    ("deg", "\u{B0}"),
    ("plusmn", "\u{B1}"),
    ("frac12", "\u{BD}"),
    ("frac14", "\u{BC}"),
    ("times", "\u{D7}"),
    ("divide", "\u{F7}"),
    ("cent", "\u{A2}"),
    ("pound", "\u{A3}"),
    ("euro", "\u{20AC}"),
    ("sect", "\u{A7}"),
    ("middot", "\u{B7}"),
    ("bull", "\u{2022}"),
];

fn decode_entities_once(text: &str) -> String {
    ENTITY_RE
        .replace_all(text, |caps: &regex::Captures| {
            let body = &caps[1];
            if let Some(rest) = body.strip_prefix('#') {
                let parsed = if let Some(hex) = rest.strip_prefix(['x', 'X']) {
                    u32::from_str_radix(hex, 16).ok()
                } else {
                    rest.parse::<u32>().ok()
                };
                match parsed.and_then(char::from_u32) {
                    Some(c) => c.to_string(),
                    None => String::new(),
                }
            } else {
                match NAMED_ENTITIES.iter().find(|(name, _)| *name == body) {
                    Some((_, repl)) => (*repl).to_string(),
                    None => caps[0].to_string(),
                }
            }
        })
        .into_owned()
}

/// Removes HTML tags and decodes entities, repeating to a fixpoint with an
/// iteration cap of 5.
pub fn decode_html(text: &str) -> String {
    let mut cur = text.to_string();
    for _ in 0..5 {
        let stripped = TAG_RE.replace_all(&cur, " ").into_owned();
        let decoded = decode_entities_once(&stripped);
        if decoded == cur {
            break;
        }
        cur = decoded;
    }
    collapse_whitespace(&cur)
}

static NUMBER_WORD_RE: Lazy<Regex> = Lazy::new(|| Regex::new(r"^[0-9]+([.,][0-9]+)*$").unwrap());

/// Drops whitespace-delimited tokens consisting solely of digits with
/// optional `.`/`,` separators.
pub fn remove_number_words(text: &str) -> String {
    let kept: Vec<&str> = text
        .split_whitespace()
        .filter(|tok| !NUMBER_WORD_RE.is_match(tok))
        .collect();
    kept.join(" ")
}

fn collapse_whitespace(text: &str) -> String {
    text.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// Table-driven normalizer holding the compiled contraction and slang
/// replacements. Construct once and share; all methods are pure.
pub struct Preprocessor {
    contraction_re: Regex,
    contractions: HashMap<String, String>,
    slang_re: Option<Regex>,
    slang: HashMap<String, String>,
}

impl Preprocessor {
    /// Builds the replacement automata from `(key, expansion)` tables.
    /// Keys are matched case-insensitively on word boundaries; longer keys
    /// win over their prefixes.
    pub fn new(contractions: &[(String, String)], slang: &[(String, String)]) -> Self {
        let contraction_re = build_word_regex(contractions.iter().map(|(k, _)| k.as_str()))
            .expect("contraction table yields at least one key");
        Preprocessor {
            contraction_re,
            contractions: to_lower_map(contractions),
            slang_re: build_word_regex(slang.iter().map(|(k, _)| k.as_str())),
            slang: to_lower_map(slang),
        }
    }

    /// Replaces every contraction with its expansion, preserving a leading
    /// capital letter ("Couldn't" becomes "Could not").
    pub fn expand_contractions(&self, text: &str) -> String {
        self.contraction_re
            .replace_all(text, |caps: &regex::Captures| {
                let surface = &caps[0];
                let expansion = &self.contractions[&surface.to_lowercase()];
                match surface.chars().next() {
                    Some(first) if first.is_uppercase() => capitalize(expansion),
                    _ => expansion.clone(),
                }
            })
            .into_owned()
    }

    /// Replaces whole-word slang keys with their expansions (lowercase,
    /// case-insensitive match).
    pub fn expand_slang(&self, text: &str) -> String {
        match &self.slang_re {
            Some(re) => re
                .replace_all(text, |caps: &regex::Captures| {
                    self.slang[&caps[0].to_lowercase()].clone()
                })
                .into_owned(),
            None => text.to_string(),
        }
    }

    /// Runs all normalization steps in pipeline order.
    pub fn preprocess(&self, text: &str) -> String {
        let text = strip_social_artifacts(text);
        let text = self.expand_contractions(&text);
        // tag removal must see the brackets, so HTML decoding precedes the
        // special-character strip
        let text = decode_html(&text);
        let text = strip_special_chars(&text);
        let text = compress_repeats(&text);
        let text = self.expand_slang(&text);
        remove_number_words(&text)
    }

    pub fn clean(&self, id: &str, text: &str) -> CleanDocument {
        CleanDocument {
            id: id.to_string(),
            text: self.preprocess(text),
            steps_applied: STEP_LABELS.to_vec(),
        }
    }
}

fn to_lower_map(table: &[(String, String)]) -> HashMap<String, String> {
    table
        .iter()
        .map(|(k, v)| (k.to_lowercase(), v.clone()))
        .collect()
}

fn capitalize(s: &str) -> String {
    let mut chars = s.chars();
    match chars.next() {
        Some(first) => first.to_uppercase().chain(chars).collect(),
        None => String::new(),
    }
}

fn build_word_regex<'a>(keys: impl Iterator<Item = &'a str>) -> Option<Regex> {
    let mut keys: Vec<&str> = keys.collect();
    if keys.is_empty() {
        return None;
    }
    // longest first so "couldn't've" is not split by "couldn't"
    keys.sort_by(|a, b| b.len().cmp(&a.len()).then(a.cmp(b)));
    let alternation = keys
        .iter()
        .map(|k| regex::escape(k))
        .collect::<Vec<_>>()
        .join("|");
    Some(Regex::new(&format!(r"(?i)\b({alternation})\b")).expect("escaped keys compile"))
}
