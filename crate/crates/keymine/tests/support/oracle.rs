//! Naive backtracking reference matcher for the POS-pattern grammar.
//!
//! Interprets the parsed pattern tree directly, computing the full set of
//! match end positions; deliberately independent of the compiled NFA it is
//! used to check. Shared by the unit tests and the acceptance suite.

use std::collections::BTreeSet;

use keymine::chunk::{Chunk, PatternAst};

/// All positions where a match of `ast` starting at `pos` may end.
pub fn match_ends(ast: &PatternAst, tags: &[&str], pos: usize) -> BTreeSet<usize> {
    let mut ends = BTreeSet::new();
    match ast {
        PatternAst::Atom(pred) => {
            if pos < tags.len() && pred.matches(tags[pos]) {
                ends.insert(pos + 1);
            }
        }
        PatternAst::Seq(items) => {
            ends.insert(pos);
            for item in items {
                let mut next = BTreeSet::new();
                for &p in &ends {
                    next.extend(match_ends(item, tags, p));
                }
                ends = next;
                if ends.is_empty() {
                    break;
                }
            }
        }
        PatternAst::Repeat { inner, min, max } => {
            // expand iteratively; the frontier closure terminates because
            // end positions never decrease and are bounded by the input
            let mut reached: BTreeSet<usize> = BTreeSet::new();
            let mut frontier: BTreeSet<usize> = BTreeSet::new();
            frontier.insert(pos);
            let mut count = 0u32;
            loop {
                if count >= *min {
                    reached.extend(frontier.iter().copied());
                }
                if let Some(max) = max {
                    if count >= *max {
                        break;
                    }
                }
                let mut next = BTreeSet::new();
                for &p in &frontier {
                    next.extend(match_ends(inner, tags, p));
                }
                // a credited position has already had its expansion
                // scheduled, so dropping it loses nothing and stops
                // epsilon-matching inners from looping forever
                next.retain(|e| !reached.contains(e));
                if next.is_empty() {
                    break;
                }
                frontier = next;
                count += 1;
            }
            ends = reached;
        }
    }
    ends
}

/// Whole-sequence acceptance (the empty sequence is allowed here; chunking
/// layers its non-empty rule on top).
pub fn accepts(ast: &PatternAst, tags: &[&str]) -> bool {
    match_ends(ast, tags, 0).contains(&tags.len())
}

/// Longest non-empty match starting at `pos`.
pub fn longest_match_at(ast: &PatternAst, tags: &[&str], pos: usize) -> Option<usize> {
    match_ends(ast, tags, pos)
        .into_iter()
        .filter(|&e| e > pos)
        .max()
        .map(|e| e - pos)
}

/// Greedy leftmost-longest chunking with single-token advance on failure;
/// mirrors the production policy over the reference matcher.
pub fn chunks(ast: &PatternAst, tags: &[&str]) -> Vec<Chunk> {
    let mut out = Vec::new();
    let mut i = 0;
    while i < tags.len() {
        match longest_match_at(ast, tags, i) {
            Some(len) => {
                out.push(Chunk {
                    start: i,
                    end: i + len,
                });
                i += len;
            }
            None => i += 1,
        }
    }
    out
}
