//! POS-pattern grammar: parsing and compilation to a tag-predicate NFA.
//!
//! The pattern language covers what the chunking grammar needs: `<TAG>`
//! atoms (literal or `PREFIX.*`), quantifiers `?`, `*`, `+` on atoms and
//! parenthesized groups, concatenation, and an optional surrounding `{ }`.
//! Alternation is out of scope.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GrammarError {
    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("pattern can only match the empty sequence")]
    EmptyOnly,
}

/// Matches one tag: exactly, or by prefix for `<XX.*>` atoms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TagPredicate {
    Literal(String),
    Prefix(String),
}

impl TagPredicate {
    pub fn matches(&self, tag: &str) -> bool {
        match self {
            TagPredicate::Literal(t) => tag == t,
            TagPredicate::Prefix(p) => tag.starts_with(p.as_str()),
        }
    }
}

impl fmt::Display for TagPredicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TagPredicate::Literal(t) => write!(f, "<{t}>"),
            TagPredicate::Prefix(p) => write!(f, "<{p}.*>"),
        }
    }
}

/// Parsed pattern tree.
#[derive(Debug, Clone, PartialEq)]
pub enum PatternAst {
    Atom(TagPredicate),
    Seq(Vec<PatternAst>),
    /// `?` is (0, Some(1)), `*` is (0, None), `+` is (1, None).
    Repeat {
        inner: Box<PatternAst>,
        min: u32,
        max: Option<u32>,
    },
}

struct Parser<'a> {
    chars: Vec<(usize, char)>,
    cursor: usize,
    source: &'a str,
}

impl<'a> Parser<'a> {
    fn new(source: &'a str) -> Self {
        Parser {
            chars: source.char_indices().collect(),
            cursor: 0,
            source,
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.cursor).map(|(_, c)| *c)
    }

    fn pos(&self) -> usize {
        self.chars
            .get(self.cursor)
            .map(|(i, _)| *i)
            .unwrap_or(self.source.len())
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek();
        self.cursor += 1;
        c
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|c| c.is_whitespace()) {
            self.cursor += 1;
        }
    }

    fn err(&self, msg: impl Into<String>) -> GrammarError {
        GrammarError::Syntax {
            pos: self.pos(),
            msg: msg.into(),
        }
    }

    fn parse_pattern(&mut self) -> Result<PatternAst, GrammarError> {
        self.skip_ws();
        let braced = if self.peek() == Some('{') {
            self.bump();
            true
        } else {
            false
        };
        let seq = self.parse_seq()?;
        self.skip_ws();
        if braced {
            if self.peek() != Some('}') {
                return Err(self.err("expected closing '}'"));
            }
            self.bump();
            self.skip_ws();
        }
        match self.peek() {
            None => Ok(seq),
            Some('}') => Err(self.err("unmatched '}'")),
            Some(c) => Err(self.err(format!("unexpected character {c:?}"))),
        }
    }

    fn parse_seq(&mut self) -> Result<PatternAst, GrammarError> {
        let mut items = Vec::new();
        loop {
            self.skip_ws();
            match self.peek() {
                Some('<') => items.push(self.parse_quantified(|p| p.parse_atom())?),
                Some('(') => items.push(self.parse_quantified(|p| p.parse_group())?),
                Some('?') | Some('*') | Some('+') => {
                    return Err(self.err("quantifier without a preceding atom or group"))
                }
                _ => break,
            }
        }
        Ok(PatternAst::Seq(items))
    }

    fn parse_quantified(
        &mut self,
        inner: impl FnOnce(&mut Self) -> Result<PatternAst, GrammarError>,
    ) -> Result<PatternAst, GrammarError> {
        let item = inner(self)?;
        self.skip_ws();
        let quantified = match self.peek() {
            Some('?') => PatternAst::Repeat {
                inner: Box::new(item),
                min: 0,
                max: Some(1),
            },
            Some('*') => PatternAst::Repeat {
                inner: Box::new(item),
                min: 0,
                max: None,
            },
            Some('+') => PatternAst::Repeat {
                inner: Box::new(item),
                min: 1,
                max: None,
            },
            _ => return Ok(item),
        };
        self.bump();
        // reject "<NN>?*" style stacking
        self.skip_ws();
        if matches!(self.peek(), Some('?') | Some('*') | Some('+')) {
            return Err(self.err("stacked quantifiers are not allowed"));
        }
        Ok(quantified)
    }

    fn parse_atom(&mut self) -> Result<PatternAst, GrammarError> {
        let open = self.pos();
        self.bump(); // '<'
        let mut body = String::new();
        loop {
            match self.peek() {
                Some('>') => {
                    self.bump();
                    break;
                }
                Some(c) if c == '<' || c == '{' || c == '}' || c == '(' || c == ')' => {
                    return Err(self.err(format!("unexpected {c:?} inside '<...>'")))
                }
                Some(c) => {
                    body.push(c);
                    self.bump();
                }
                None => {
                    return Err(GrammarError::Syntax {
                        pos: open,
                        msg: "unclosed '<'".into(),
                    })
                }
            }
        }
        let body = body.trim();
        if body.is_empty() {
            return Err(GrammarError::Syntax {
                pos: open,
                msg: "empty tag pattern '<>'".into(),
            });
        }
        let predicate = match body.strip_suffix(".*") {
            Some(prefix) if !prefix.is_empty() => TagPredicate::Prefix(prefix.to_string()),
            Some(_) => {
                return Err(GrammarError::Syntax {
                    pos: open,
                    msg: "empty prefix before '.*'".into(),
                })
            }
            None => TagPredicate::Literal(body.to_string()),
        };
        Ok(PatternAst::Atom(predicate))
    }

    fn parse_group(&mut self) -> Result<PatternAst, GrammarError> {
        let open = self.pos();
        self.bump(); // '('
        let seq = self.parse_seq()?;
        self.skip_ws();
        if self.peek() != Some(')') {
            return Err(GrammarError::Syntax {
                pos: open,
                msg: "unclosed '('".into(),
            });
        }
        self.bump();
        Ok(seq)
    }
}

/// Parses pattern text into its tree without compiling.
pub fn parse_pattern(source: &str) -> Result<PatternAst, GrammarError> {
    Parser::new(source).parse_pattern()
}

#[derive(Debug, Clone, Default)]
struct State {
    eps: Vec<usize>,
    trans: Option<(TagPredicate, usize)>,
}

/// Thompson-style NFA over tag predicates. Immutable after construction and
/// shareable across workers. `accepts` and `longest_match` never report the
/// empty sequence: chunks always contain at least one token.
#[derive(Debug, Clone)]
pub struct CompiledGrammar {
    states: Vec<State>,
    start: usize,
    accept: usize,
    source: String,
}

impl CompiledGrammar {
    pub fn source(&self) -> &str {
        &self.source
    }

    fn push_state(states: &mut Vec<State>) -> usize {
        states.push(State::default());
        states.len() - 1
    }

    /// Builds the fragment for `ast` between fresh entry/exit states.
    fn build(states: &mut Vec<State>, ast: &PatternAst) -> (usize, usize) {
        match ast {
            PatternAst::Atom(pred) => {
                let entry = Self::push_state(states);
                let exit = Self::push_state(states);
                states[entry].trans = Some((pred.clone(), exit));
                (entry, exit)
            }
            PatternAst::Seq(items) => {
                let entry = Self::push_state(states);
                let mut tail = entry;
                for item in items {
                    let (s, e) = Self::build(states, item);
                    states[tail].eps.push(s);
                    tail = e;
                }
                (entry, tail)
            }
            PatternAst::Repeat { inner, min, max } => {
                let (s, e) = Self::build(states, inner);
                let entry = Self::push_state(states);
                let exit = Self::push_state(states);
                states[entry].eps.push(s);
                match (min, max) {
                    (0, Some(1)) => {
                        states[entry].eps.push(exit);
                        states[e].eps.push(exit);
                    }
                    (0, None) => {
                        states[entry].eps.push(exit);
                        states[e].eps.push(s);
                        states[e].eps.push(exit);
                    }
                    (1, None) => {
                        states[e].eps.push(s);
                        states[e].eps.push(exit);
                    }
                    _ => unreachable!("parser only emits ?, * and +"),
                }
                (entry, exit)
            }
        }
    }

    fn compile(ast: &PatternAst, source: &str) -> Result<Self, GrammarError> {
        let mut states = Vec::new();
        let (start, accept) = Self::build(&mut states, ast);
        let compiled = CompiledGrammar {
            states,
            start,
            accept,
            source: source.to_string(),
        };
        if !compiled.matches_nonempty() {
            return Err(GrammarError::EmptyOnly);
        }
        Ok(compiled)
    }

    fn closure(&self, set: &mut Vec<bool>, stack: &mut Vec<usize>) {
        while let Some(s) = stack.pop() {
            for &t in &self.states[s].eps {
                if !set[t] {
                    set[t] = true;
                    stack.push(t);
                }
            }
        }
    }

    fn start_set(&self) -> Vec<bool> {
        let mut set = vec![false; self.states.len()];
        set[self.start] = true;
        let mut stack = vec![self.start];
        self.closure(&mut set, &mut stack);
        set
    }

    fn step(&self, set: &[bool], tag: &str) -> Vec<bool> {
        let mut next = vec![false; self.states.len()];
        let mut stack = Vec::new();
        for (s, active) in set.iter().enumerate() {
            if !active {
                continue;
            }
            if let Some((pred, target)) = &self.states[s].trans {
                if pred.matches(tag) && !next[*target] {
                    next[*target] = true;
                    stack.push(*target);
                }
            }
        }
        self.closure(&mut next, &mut stack);
        next
    }

    /// Length of the longest non-empty prefix of `tags` the grammar
    /// accepts, if any.
    pub fn longest_match(&self, tags: &[&str]) -> Option<usize> {
        let mut set = self.start_set();
        let mut best = None;
        for (i, tag) in tags.iter().enumerate() {
            set = self.step(&set, tag);
            if !set.iter().any(|&b| b) {
                break;
            }
            if set[self.accept] {
                best = Some(i + 1);
            }
        }
        best
    }

    /// True when the whole non-empty sequence is in the pattern's language.
    pub fn accepts(&self, tags: &[&str]) -> bool {
        if tags.is_empty() {
            return false;
        }
        let mut set = self.start_set();
        for tag in tags {
            set = self.step(&set, tag);
            if !set.iter().any(|&b| b) {
                return false;
            }
        }
        set[self.accept]
    }

    /// True when some sequence of length >= 1 is accepted: a predicate edge
    /// exists from a start-reachable state into an accept-co-reachable one.
    fn matches_nonempty(&self) -> bool {
        let n = self.states.len();
        let mut forward = vec![false; n];
        forward[self.start] = true;
        let mut stack = vec![self.start];
        while let Some(s) = stack.pop() {
            let push = |t: usize, forward: &mut Vec<bool>, stack: &mut Vec<usize>| {
                if !forward[t] {
                    forward[t] = true;
                    stack.push(t);
                }
            };
            for &t in &self.states[s].eps {
                push(t, &mut forward, &mut stack);
            }
            if let Some((_, t)) = &self.states[s].trans {
                push(*t, &mut forward, &mut stack);
            }
        }
        let mut backward = vec![false; n];
        backward[self.accept] = true;
        let mut changed = true;
        while changed {
            changed = false;
            for s in 0..n {
                if backward[s] {
                    continue;
                }
                let via_eps = self.states[s].eps.iter().any(|&t| backward[t]);
                let via_trans = self.states[s]
                    .trans
                    .as_ref()
                    .is_some_and(|(_, t)| backward[*t]);
                if via_eps || via_trans {
                    backward[s] = true;
                    changed = true;
                }
            }
        }
        (0..n).any(|s| {
            forward[s]
                && self.states[s]
                    .trans
                    .as_ref()
                    .is_some_and(|(_, t)| backward[*t])
        })
    }
}

/// Parses and compiles pattern text into an executable matcher.
pub fn parse_grammar(source: &str) -> Result<CompiledGrammar, GrammarError> {
    let ast = parse_pattern(source)?;
    CompiledGrammar::compile(&ast, source)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::DEFAULT_GRAMMAR;

    #[test]
    fn default_grammar_compiles_and_accepts_noun_runs() {
        let g = parse_grammar(DEFAULT_GRAMMAR).unwrap();
        assert!(g.accepts(&["NNP", "NN", "NN"]));
        assert!(g.accepts(&["DT", "JJ", "NN"]));
        assert!(g.accepts(&["VB", "JJ"]));
        assert!(g.accepts(&["IN", "JJ", "NNS"]));
        assert!(!g.accepts(&["CC"]));
        assert!(!g.accepts(&[]));
    }

    #[test]
    fn unclosed_atom_is_a_syntax_error() {
        assert!(matches!(
            parse_grammar("<NN"),
            Err(GrammarError::Syntax { .. })
        ));
    }

    #[test]
    fn error_positions_point_at_the_problem() {
        match parse_grammar("<NN> (<VB>") {
            Err(GrammarError::Syntax { pos, .. }) => assert_eq!(pos, 5),
            other => panic!("expected syntax error, got {other:?}"),
        }
        match parse_grammar("? <NN>") {
            Err(GrammarError::Syntax { pos, .. }) => assert_eq!(pos, 0),
            other => panic!("expected syntax error, got {other:?}"),
        }
    }

    #[test]
    fn rejects_malformed_patterns() {
        for bad in ["<>", "<NN>>", "{<NN>", "<NN>}", "(<NN>))", "<NN>?*", "<.*>"] {
            assert!(
                matches!(parse_grammar(bad), Err(GrammarError::Syntax { .. })),
                "{bad:?} should be a syntax error"
            );
        }
    }

    #[test]
    fn empty_only_patterns_are_rejected() {
        for empty in ["", "{ }", "( )*", "(( ))?"] {
            assert_eq!(parse_grammar(empty).unwrap_err(), GrammarError::EmptyOnly, "{empty:?}");
        }
        // all-optional patterns still accept their non-empty sentences
        assert!(parse_grammar("<NN>? <VB>*").is_ok());
    }

    #[test]
    fn plus_requires_one_occurrence() {
        let g = parse_grammar("<NN>+").unwrap();
        assert!(g.accepts(&["NN"]));
        assert!(g.accepts(&["NN", "NN", "NN"]));
        assert!(!g.accepts(&["JJ"]));
        assert_eq!(g.longest_match(&["NN", "NN", "JJ"]), Some(2));
    }

    #[test]
    fn prefix_predicates_match_tag_families() {
        let g = parse_grammar("<NN.*>+").unwrap();
        assert!(g.accepts(&["NN", "NNS", "NNP", "NNPS"]));
        assert!(!g.accepts(&["JJ"]));
    }

    #[test]
    fn longest_match_never_reports_empty() {
        let g = parse_grammar(DEFAULT_GRAMMAR).unwrap();
        assert_eq!(g.longest_match(&["CC", "NN"]), None);
        assert_eq!(g.longest_match(&[]), None);
        assert_eq!(g.longest_match(&["NN", "CC"]), Some(1));
    }
}
