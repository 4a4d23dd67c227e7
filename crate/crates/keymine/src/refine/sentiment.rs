//! Rule-based valence scoring producing a compound sentiment score in
//! [-1, +1].
//!
//! Token valences come from the lexicon; degree modifiers shift the valence
//! of the word they precede, negations within three tokens flip it by a
//! damped factor, and ALL-CAPS emphasis, "but" clause weighting, idiom
//! overrides and terminal punctuation emphasis adjust the raw sum before
//! normalization as x/sqrt(x^2 + 15). Scores are rounded to four decimals.

use std::collections::{HashMap, HashSet};

use once_cell::sync::Lazy;

const BOOST_UP: f64 = 0.293;
const BOOST_DOWN: f64 = -0.293;
const CAPS_EMPHASIS: f64 = 0.733;
const NEGATION_SCALAR: f64 = -0.74;
const NORMALIZATION_ALPHA: f64 = 15.0;

static BOOSTERS: Lazy<HashMap<&'static str, f64>> = Lazy::new(|| {
    let mut m = HashMap::new();
    for w in [
        "absolutely", "amazingly", "awfully", "completely", "considerable", "considerably",
        "decidedly", "deeply", "effing", "enormous", "enormously", "entirely", "especially",
        "exceptional", "exceptionally", "extreme", "extremely", "fabulously", "flipping",
        "flippin", "frackin", "fracking", "fricking", "frickin", "frigging", "friggin", "fully",
        "fuckin", "fucking", "fuggin", "fugging", "greatly", "hella", "highly", "hugely",
        "incredible", "incredibly", "intensely", "major", "majorly", "more", "most",
        "particularly", "purely", "quite", "really", "remarkably", "so", "substantially",
        "thoroughly", "total", "totally", "tremendous", "tremendously", "uber", "unbelievably",
        "unusually", "utter", "utterly", "very",
    ] {
        m.insert(w, BOOST_UP);
    }
    for w in [
        "almost", "barely", "hardly", "just enough", "kind of", "kinda", "kindof", "kind-of",
        "less", "little", "marginal", "marginally", "occasional", "occasionally", "partly",
        "scarce", "scarcely", "slight", "slightly", "somewhat", "sort of", "sorta", "sortof",
        "sort-of",
    ] {
        m.insert(w, BOOST_DOWN);
    }
    m
});

static NEGATIONS: Lazy<HashSet<&'static str>> = Lazy::new(|| {
    [
        "aint", "arent", "cannot", "cant", "couldnt", "darent", "didnt", "doesnt", "ain't",
        "aren't", "can't", "couldn't", "daren't", "didn't", "doesn't", "dont", "hadnt", "hasnt",
        "havent", "isnt", "mightnt", "mustnt", "neither", "don't", "hadn't", "hasn't", "haven't",
        "isn't", "mightn't", "mustn't", "neednt", "needn't", "never", "none", "nope", "nor",
        "not", "nothing", "nowhere", "oughtnt", "shant", "shouldnt", "uhuh", "wasnt", "werent",
        "oughtn't", "shan't", "shouldn't", "uh-uh", "wasn't", "weren't", "without", "wont",
        "wouldnt", "won't", "wouldn't", "rarely", "seldom", "despite",
    ]
    .into_iter()
    .collect()
});

static IDIOMS: Lazy<HashMap<&'static str, f64>> = Lazy::new(|| {
    [
        ("the shit", 3.0),
        ("the bomb", 3.0),
        ("bad ass", 1.5),
        ("badass", 1.5),
        ("bus stop", 0.0),
        ("yeah right", -2.0),
        ("kiss of death", -1.5),
        ("to die for", 3.0),
        ("beating heart", 3.1),
        ("broken heart", -2.9),
    ]
    .into_iter()
    .collect()
});

/// Valence lexicon plus the built-in booster and negation tables.
/// Immutable after construction; unknown tokens score 0.
pub struct SentimentLexicon {
    valences: HashMap<String, f64>,
    boosters: &'static HashMap<&'static str, f64>,
    negations: &'static HashSet<&'static str>,
}

impl SentimentLexicon {
    pub fn new(valences: HashMap<String, f64>) -> Self {
        SentimentLexicon {
            valences,
            boosters: &BOOSTERS,
            negations: &NEGATIONS,
        }
    }

    pub fn valence(&self, token: &str) -> Option<f64> {
        self.valences.get(token).copied()
    }

    pub fn tokens(&self) -> impl Iterator<Item = &str> {
        self.valences.keys().map(String::as_str)
    }

    pub fn is_booster(&self, token: &str) -> bool {
        self.boosters.contains_key(token)
    }

    pub fn is_negation(&self, token: &str) -> bool {
        self.negations.contains(token)
    }

    fn booster_value(&self, token: &str) -> Option<f64> {
        self.boosters.get(token).copied()
    }
}

fn normalize(sum: f64) -> f64 {
    let score = sum / (sum * sum + NORMALIZATION_ALPHA).sqrt();
    score.clamp(-1.0, 1.0)
}

fn is_punctuation(c: char) -> bool {
    c.is_ascii_punctuation()
}

/// Whitespace tokens with edge punctuation stripped; tokens that would
/// shrink to two characters or fewer are kept whole (emoticons).
fn scoring_tokens(text: &str) -> Vec<&str> {
    text.split_whitespace()
        .map(|tok| {
            let stripped = tok.trim_matches(is_punctuation);
            if stripped.chars().count() <= 2 {
                tok
            } else {
                stripped
            }
        })
        .collect()
}

fn is_all_caps(token: &str) -> bool {
    let mut has_alpha = false;
    for c in token.chars() {
        if c.is_alphabetic() {
            has_alpha = true;
            if !c.is_uppercase() {
                return false;
            }
        }
    }
    has_alpha
}

/// True when some but not all tokens are ALL-CAPS, i.e. capitalization
/// carries emphasis.
fn mixed_caps(tokens: &[&str]) -> bool {
    let caps = tokens.iter().filter(|t| is_all_caps(t)).count();
    caps > 0 && caps < tokens.len()
}

fn negated(lex: &SentimentLexicon, word: &str) -> bool {
    lex.is_negation(word) || word.contains("n't")
}

/// Booster contribution of `word` applied toward the sign of `valence`,
/// with ALL-CAPS emphasis added when capitalization is informative.
fn booster_scalar(lex: &SentimentLexicon, word: &str, valence: f64, cap_diff: bool) -> f64 {
    let Some(mut scalar) = lex.booster_value(&word.to_lowercase()) else {
        return 0.0;
    };
    if valence < 0.0 {
        scalar = -scalar;
    }
    if is_all_caps(word) && cap_diff {
        if valence > 0.0 {
            scalar += CAPS_EMPHASIS;
        } else {
            scalar -= CAPS_EMPHASIS;
        }
    }
    scalar
}

fn negation_adjust(
    lex: &SentimentLexicon,
    valence: f64,
    lower: &[String],
    distance: usize,
    i: usize,
) -> f64 {
    match distance {
        0 => {
            if negated(lex, &lower[i - 1]) {
                return valence * NEGATION_SCALAR;
            }
        }
        1 => {
            if lower[i - 2] == "never" && (lower[i - 1] == "so" || lower[i - 1] == "this") {
                return valence * 1.25;
            }
            if lower[i - 2] == "without" && lower[i - 1] == "doubt" {
                return valence;
            }
            if negated(lex, &lower[i - 2]) {
                return valence * NEGATION_SCALAR;
            }
        }
        2 => {
            if lower[i - 3] == "never"
                && (lower[i - 2] == "so" || lower[i - 2] == "this")
                || (lower[i - 1] == "so" || lower[i - 1] == "this")
            {
                return valence * 1.25;
            }
            if lower[i - 3] == "without"
                && (lower[i - 2] == "doubt" || lower[i - 1] == "doubt")
            {
                return valence;
            }
            if negated(lex, &lower[i - 3]) {
                return valence * NEGATION_SCALAR;
            }
        }
        _ => {}
    }
    valence
}

fn idioms_adjust(lex: &SentimentLexicon, valence: f64, lower: &[String], i: usize) -> f64 {
    let gram = |from: usize, to: usize| lower[from..=to].join(" ");
    let mut valence = valence;
    let sequences = [
        gram(i - 1, i),
        gram(i - 2, i),
        gram(i - 2, i - 1),
        gram(i - 3, i - 1),
        gram(i - 3, i - 2),
    ];
    for seq in &sequences {
        if let Some(v) = IDIOMS.get(seq.as_str()) {
            valence = *v;
            break;
        }
    }
    if lower.len() - 1 > i {
        if let Some(v) = IDIOMS.get(gram(i, i + 1).as_str()) {
            valence = *v;
        }
    }
    if lower.len() - 1 > i + 1 {
        if let Some(v) = IDIOMS.get(gram(i, i + 2).as_str()) {
            valence = *v;
        }
    }
    // bigram/trigram boosters such as "sort of"
    for gram in [&sequences[3], &sequences[4], &sequences[2]] {
        if let Some(b) = lex.booster_value(gram.as_str()) {
            valence += b;
        }
    }
    valence
}

fn least_adjust(lex: &SentimentLexicon, valence: f64, lower: &[String], i: usize) -> f64 {
    if i > 1
        && lex.valence(&lower[i - 1]).is_none()
        && lower[i - 1] == "least"
        && lower[i - 2] != "at"
        && lower[i - 2] != "very"
    {
        valence * NEGATION_SCALAR
    } else if i > 0 && lex.valence(&lower[i - 1]).is_none() && lower[i - 1] == "least" {
        valence * NEGATION_SCALAR
    } else {
        valence
    }
}

fn token_valence(
    lex: &SentimentLexicon,
    tokens: &[&str],
    lower: &[String],
    i: usize,
    cap_diff: bool,
) -> f64 {
    let Some(mut valence) = lex.valence(&lower[i]) else {
        return 0.0;
    };

    // "no" negates an adjacent lexicon word instead of scoring itself
    if lower[i] == "no" && i + 1 < lower.len() && lex.valence(&lower[i + 1]).is_some() {
        valence = 0.0;
    }
    if (i >= 1 && lower[i - 1] == "no")
        || (i >= 2 && lower[i - 2] == "no")
        || (i >= 3 && lower[i - 3] == "no" && (lower[i - 1] == "or" || lower[i - 1] == "nor"))
    {
        valence = lex.valence(&lower[i]).unwrap() * NEGATION_SCALAR;
    }

    if is_all_caps(tokens[i]) && cap_diff {
        if valence > 0.0 {
            valence += CAPS_EMPHASIS;
        } else {
            valence -= CAPS_EMPHASIS;
        }
    }

    for distance in 0..3usize {
        if i <= distance {
            break;
        }
        let preceding = &lower[i - (distance + 1)];
        if lex.valence(preceding).is_some() {
            continue;
        }
        let mut scalar = booster_scalar(lex, tokens[i - (distance + 1)], valence, cap_diff);
        if scalar != 0.0 {
            if distance == 1 {
                scalar *= 0.95;
            }
            if distance == 2 {
                scalar *= 0.9;
            }
        }
        valence += scalar;
        valence = negation_adjust(lex, valence, lower, distance, i);
        if distance == 2 {
            valence = idioms_adjust(lex, valence, lower, i);
        }
    }
    least_adjust(lex, valence, lower, i)
}

fn punctuation_emphasis(text: &str) -> f64 {
    let exclamations = text.chars().filter(|&c| c == '!').count().min(4);
    let questions = text.chars().filter(|&c| c == '?').count();
    let qm = if questions > 1 {
        if questions <= 3 {
            questions as f64 * 0.18
        } else {
            0.96
        }
    } else {
        0.0
    };
    exclamations as f64 * 0.292 + qm
}

/// Compound sentiment score of a text. Deterministic; all-unknown token
/// sequences score 0.
pub fn sentiment_score(text: &str, lex: &SentimentLexicon) -> f64 {
    let tokens = scoring_tokens(text);
    if tokens.is_empty() {
        return 0.0;
    }
    let lower: Vec<String> = tokens.iter().map(|t| t.to_lowercase()).collect();
    let cap_diff = mixed_caps(&tokens);

    let mut sentiments: Vec<f64> = Vec::with_capacity(tokens.len());
    for i in 0..tokens.len() {
        if lex.is_booster(&lower[i]) {
            sentiments.push(0.0);
            continue;
        }
        if i + 1 < tokens.len() && lower[i] == "kind" && lower[i + 1] == "of" {
            sentiments.push(0.0);
            continue;
        }
        sentiments.push(token_valence(lex, &tokens, &lower, i, cap_diff));
    }

    // clause after "but" dominates
    if let Some(but_index) = lower.iter().position(|w| w == "but") {
        for (i, s) in sentiments.iter_mut().enumerate() {
            if i < but_index {
                *s *= 0.5;
            } else if i > but_index {
                *s *= 1.5;
            }
        }
    }

    let mut sum: f64 = sentiments.iter().sum();
    let emphasis = punctuation_emphasis(text);
    if sum > 0.0 {
        sum += emphasis;
    } else if sum < 0.0 {
        sum -= emphasis;
    }
    round4(normalize(sum))
}

fn round4(x: f64) -> f64 {
    (x * 10_000.0).round() / 10_000.0
}
