//! Rewriting of Wilson words toward `Tr R^e W(a,a)...`.
//!
//! The relation set is not confluent, so normalization is a best-first search over
//! the rewrite graph. States are deduplicated up to trace rotation.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::wilson::{Level, Role, Seg, Token, WilsonWord, WordToken};

pub const BUDGET_ENV: &str = "WILSON_KNOT_BUDGET";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RewriteRule {
    Concat,
    RMerge,
    QuasiCommute,
    CrossPos,
    CrossNeg,
    Rotate,
}

impl fmt::Display for RewriteRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            RewriteRule::Concat => "concat",
            RewriteRule::RMerge => "r_merge",
            RewriteRule::QuasiCommute => "quasi_commute",
            RewriteRule::CrossPos => "cross_pos",
            RewriteRule::CrossNeg => "cross_neg",
            RewriteRule::Rotate => "rotate",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Forward,
    Backward,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RewriteError {
    #[error("{rule} {direction:?} does not match at position {pos}: {reason}")]
    PatternMismatch {
        rule: RewriteRule,
        direction: Direction,
        pos: usize,
        reason: String,
    },
    #[error("no normal form within {states} states")]
    BudgetExceeded { states: usize },
    #[error("not a Wilson word: {0}")]
    NonWilsonInput(String),
    #[error("rewrite graph exhausted after {states} states without a normal form")]
    NoNormalForm { states: usize },
}

impl RewriteError {
    pub fn code(&self) -> &'static str {
        match self {
            RewriteError::PatternMismatch { .. } => "pattern_mismatch",
            RewriteError::BudgetExceeded { .. } => "budget_exceeded",
            RewriteError::NonWilsonInput(_) => "non_wilson_input",
            RewriteError::NoNormalForm { .. } => "no_normal_form",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub max_states: usize,
    pub max_depth: usize,
    pub deterministic_tiebreak: bool,
    /// enforce stamp precedence on quasi-commutation
    pub guarded: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            max_states: 100_000,
            max_depth: 256,
            deterministic_tiebreak: true,
            guarded: true,
        }
    }
}

impl SearchConfig {
    /// Default config with `max_states` taken from the budget variable when it parses.
    pub fn from_env() -> Self {
        let mut cfg = SearchConfig::default();
        if let Some(n) = std::env::var(BUDGET_ENV)
            .ok()
            .and_then(|v| v.trim().parse::<usize>().ok())
        {
            cfg.max_states = n.max(1);
        }
        cfg
    }
}

/// `Tr R^e W(a,a) W(b,b) ...` with the partition function normalized to one.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalForm {
    pub e: i64,
    pub loops: Vec<String>,
    pub partition_normalization: i64,
}

pub fn power_index(nf: &NormalForm) -> i64 {
    -nf.e
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    pub rule: RewriteRule,
    pub position: usize,
    pub direction: Direction,
    /// word after the step
    pub word: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceLog {
    pub guarded: bool,
    pub steps: Vec<TraceStep>,
}

impl TraceLog {
    /// Re-applies every step to `input`, checking each snapshot.
    pub fn replay(&self, input: &WilsonWord) -> Result<WilsonWord, RewriteError> {
        let mut w = input.clone();
        for (i, step) in self.steps.iter().enumerate() {
            w = apply_rule_with(&w, step.rule, step.position, step.direction, self.guarded)?;
            if w.to_string() != step.word {
                return Err(RewriteError::PatternMismatch {
                    rule: step.rule,
                    direction: step.direction,
                    pos: step.position,
                    reason: format!("step {i} produced {w}, log has {}", step.word),
                });
            }
        }
        Ok(w)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchOutcome {
    pub normal_form: NormalForm,
    pub log: TraceLog,
    pub output: WilsonWord,
    pub states: usize,
}

/// Applies one rule with stamp guards on.
pub fn apply_rule(
    w: &WilsonWord,
    rule: RewriteRule,
    pos: usize,
    dir: Direction,
) -> Result<WilsonWord, RewriteError> {
    apply_rule_with(w, rule, pos, dir, true)
}

pub fn apply_rule_with(
    w: &WilsonWord,
    rule: RewriteRule,
    pos: usize,
    dir: Direction,
    guarded: bool,
) -> Result<WilsonWord, RewriteError> {
    rewrite_tokens(w, rule, pos, dir, guarded)
        .map(|toks| w.with_tokens(toks))
        .map_err(|reason| RewriteError::PatternMismatch {
            rule,
            direction: dir,
            pos,
            reason: reason.to_string(),
        })
}

/// Allocation-free matcher behind [`apply_rule_with`]; the search calls it directly.
fn rewrite_tokens(
    w: &WilsonWord,
    rule: RewriteRule,
    pos: usize,
    dir: Direction,
    guarded: bool,
) -> Result<Vec<Token>, &'static str> {
    let toks = w.tokens();
    let n = toks.len();
    if pos >= n.max(1) {
        return Err("position out of range");
    }
    let win = |k: usize| -> Result<[Token; 5], &'static str> {
        if k > n {
            return Err("word too short");
        }
        let mut out = [Token::Rpow(0); 5];
        for (i, slot) in out.iter_mut().take(k).enumerate() {
            *slot = toks[(pos + i) % n];
        }
        Ok(out)
    };
    let seg = |t: Token| match t {
        Token::Seg(s) => Ok(s),
        Token::Rpow(_) => Err("expected a segment"),
    };
    let rpow = |t: Token| match t {
        Token::Rpow(k) => Ok(k),
        Token::Seg(_) => Err("expected an R power"),
    };
    let (k, repl): (usize, Vec<Token>) = match (rule, dir) {
        (RewriteRule::Rotate, d) => {
            let mut out = toks.to_vec();
            match d {
                Direction::Forward => out.rotate_left(pos),
                Direction::Backward => out.rotate_right(pos),
            }
            return Ok(out);
        }
        (RewriteRule::Concat, Direction::Forward) => {
            let t = win(2)?;
            let (a, b) = (seg(t[0])?, seg(t[1])?);
            let len = w.component_len(a) as u32;
            if a.comp != b.comp || (a.start + a.len) % len != b.start {
                return Err("segments are not consecutive");
            }
            if a.len + b.len > len {
                return Err("segments overlap");
            }
            (
                2,
                vec![Token::Seg(Seg {
                    comp: a.comp,
                    start: a.start,
                    len: a.len + b.len,
                })],
            )
        }
        (RewriteRule::Concat, Direction::Backward) => {
            let a = seg(win(1)?[0])?;
            if a.len < 2 {
                return Err("segment is a single piece");
            }
            let len = w.component_len(a) as u32;
            (
                1,
                vec![
                    Token::Seg(Seg {
                        comp: a.comp,
                        start: a.start,
                        len: 1,
                    }),
                    Token::Seg(Seg {
                        comp: a.comp,
                        start: (a.start + 1) % len,
                        len: a.len - 1,
                    }),
                ],
            )
        }
        (RewriteRule::RMerge, Direction::Forward) => {
            let t = win(2)?;
            if n < 2 {
                return Err("word too short");
            }
            (2, vec![Token::Rpow(rpow(t[0])? + rpow(t[1])?)])
        }
        (RewriteRule::RMerge, Direction::Backward) => return Err("merging has no backward form"),
        (RewriteRule::QuasiCommute, Direction::Forward) => {
            let t = win(2)?;
            if n < 2 {
                return Err("word too short");
            }
            let (a, b) = (seg(t[0])?, seg(t[1])?);
            if guarded && w.stamp(b) >= w.stamp(a) {
                return Err("right segment does not precede");
            }
            (2, vec![Token::Rpow(1), t[1], t[0], Token::Rpow(-1)])
        }
        (RewriteRule::QuasiCommute, Direction::Backward) => {
            let t = win(4)?;
            if n < 4 {
                return Err("word too short");
            }
            let (a, b) = (rpow(t[0])?, rpow(t[3])?);
            let (e, l) = (seg(t[1])?, seg(t[2])?);
            if a < 1 || b > -1 {
                return Err("needs R^a ... R^b with a >= 1 and b <= -1");
            }
            if guarded && w.stamp(e) >= w.stamp(l) {
                return Err("left segment does not precede");
            }
            (4, vec![Token::Rpow(a - 1), t[2], t[1], Token::Rpow(b + 1)])
        }
        (RewriteRule::CrossPos, Direction::Forward)
        | (RewriteRule::CrossNeg, Direction::Forward) => {
            let t = win(4)?;
            if n < 4 {
                return Err("word too short");
            }
            let [p, q, r, s] = [seg(t[0])?, seg(t[1])?, seg(t[2])?, seg(t[3])?];
            check_block(w, p, q, r, s)?;
            let over_first = w.stamp(r) < w.stamp(p);
            match (rule, over_first) {
                (RewriteRule::CrossPos, true) => (4, vec![Token::Rpow(1), t[2], t[1], t[0], t[3]]),
                (RewriteRule::CrossNeg, false) => {
                    (4, vec![t[0], t[3], t[2], t[1], Token::Rpow(-1)])
                }
                _ => return Err("crossing block has the other kind"),
            }
        }
        (RewriteRule::CrossPos, Direction::Backward) => {
            let t = win(5)?;
            if n < 5 {
                return Err("word too short");
            }
            let a = rpow(t[0])?;
            let [r, q, p, s] = [seg(t[1])?, seg(t[2])?, seg(t[3])?, seg(t[4])?];
            check_block(w, p, q, r, s)?;
            if a < 1 || w.stamp(r) >= w.stamp(p) {
                return Err("not a rewritten positive block");
            }
            (5, vec![Token::Rpow(a - 1), t[3], t[2], t[1], t[4]])
        }
        (RewriteRule::CrossNeg, Direction::Backward) => {
            let t = win(5)?;
            if n < 5 {
                return Err("word too short");
            }
            let b = rpow(t[4])?;
            let [p, s, r, q] = [seg(t[0])?, seg(t[1])?, seg(t[2])?, seg(t[3])?];
            check_block(w, p, q, r, s)?;
            if b > -1 || w.stamp(r) < w.stamp(p) {
                return Err("not a rewritten negative block");
            }
            (5, vec![t[0], t[3], t[2], t[1], Token::Rpow(b + 1)])
        }
    };
    Ok(splice(toks, pos, k, repl))
}

/// Four single pieces around one crossing point: under-in, over-out, over-in, under-out.
fn check_block(w: &WilsonWord, p: Seg, q: Seg, r: Seg, s: Seg) -> Result<(), &'static str> {
    if [p, q, r, s].iter().any(|x| x.len != 1) {
        return Err("block tokens must be single pieces");
    }
    let piece = |x: Seg| w.table().piece(x.comp as usize, x.start as usize);
    let (pp, qq, rr, ss) = (piece(p), piece(q), piece(r), piece(s));
    let x = match pp.end_role {
        Some(Role {
            crossing,
            level: Level::Under,
        }) => crossing,
        _ => return Err("first token must enter under"),
    };
    if qq.start_role
        != Some(Role {
            crossing: x,
            level: Level::Over,
        })
        || rr.end_role
            != Some(Role {
                crossing: x,
                level: Level::Over,
            })
        || ss.start_role
            != Some(Role {
                crossing: x,
                level: Level::Under,
            })
    {
        return Err("tokens do not surround one crossing point");
    }
    let follows =
        |a: Seg, b: Seg| a.comp == b.comp && (a.start + 1) % w.component_len(a) as u32 == b.start;
    if !follows(p, s) || !follows(r, q) {
        return Err("tokens are not the strand pieces through the crossing");
    }
    Ok(())
}

/// Replaces the `k` tokens starting at `pos` (cyclically) and merges adjacent R powers.
fn splice(toks: &[Token], pos: usize, k: usize, repl: Vec<Token>) -> Vec<Token> {
    let n = toks.len();
    let mut out: Vec<Token> = Vec::with_capacity(n + repl.len());
    let push = |out: &mut Vec<Token>, t: Token| match (out.last_mut(), t) {
        (Some(Token::Rpow(a)), Token::Rpow(b)) => {
            *a += b;
            if *a == 0 {
                out.pop();
            }
        }
        (_, Token::Rpow(0)) => {}
        (_, t) => out.push(t),
    };
    if pos + k <= n {
        for &t in toks[..pos]
            .iter()
            .chain(repl.iter())
            .chain(toks[pos + k..].iter())
        {
            push(&mut out, t);
        }
    } else {
        let rest = (pos + k) - n;
        for &t in repl.iter().chain(toks[rest..pos].iter()) {
            push(&mut out, t);
        }
    }
    out
}

/// Rotation- and renaming-invariant key of a word.
pub fn canonical_cyclic(w: &WilsonWord) -> String {
    canonical_cyclic_tokens(&w.label_tokens())
}

pub fn canonical_cyclic_tokens(tokens: &[WordToken]) -> String {
    let n = tokens.len();
    let mut best: Option<String> = None;
    for r in 0..n.max(1) {
        let mut names: HashMap<&str, usize> = HashMap::new();
        let mut key = String::new();
        for i in 0..n {
            match &tokens[(r + i) % n] {
                WordToken::Seg(a, b) => {
                    let mut id = |l| {
                        let next = names.len() + 1;
                        *names.entry(l).or_insert(next)
                    };
                    let (x, y) = (id(a.as_str()), id(b.as_str()));
                    key.push_str(&format!("W({x},{y})"));
                }
                WordToken::Rpow(k) => key.push_str(&format!("R^{k}")),
            }
        }
        if best.as_ref().is_none_or(|b| key < *b) {
            best = Some(key);
        }
    }
    best.unwrap_or_default()
}

/// Start index of the lexicographically least rotation.
fn least_rotation<T: Ord>(s: &[T]) -> usize {
    let n = s.len();
    let (mut i, mut j, mut k) = (0, 1, 0);
    while i < n && j < n && k < n {
        let (a, b) = (&s[(i + k) % n], &s[(j + k) % n]);
        if a == b {
            k += 1;
            continue;
        }
        if a > b {
            i += k + 1;
        } else {
            j += k + 1;
        }
        if i == j {
            j += 1;
        }
        k = 0;
    }
    i.min(j).min(n.saturating_sub(1))
}

fn token_code(t: Token) -> u64 {
    match t {
        Token::Rpow(k) => (k as i64 + (1 << 31)) as u64,
        Token::Seg(s) => {
            (1 << 62) | ((s.comp as u64) << 40) | ((s.start as u64) << 20) | s.len as u64
        }
    }
}

/// Rotation-invariant key that keeps piece identity.
fn state_key(toks: &[Token]) -> Vec<u64> {
    let codes: Vec<u64> = toks.iter().map(|&t| token_code(t)).collect();
    let r = least_rotation(&codes);
    let mut out = codes;
    out.rotate_left(r);
    out
}

fn is_normal(w: &WilsonWord) -> bool {
    let mut rpows = 0;
    for &t in w.tokens() {
        match t {
            Token::Seg(s) if !w.is_loop(s) => return false,
            Token::Seg(_) => {}
            Token::Rpow(_) => rpows += 1,
        }
    }
    rpows <= 1
}

fn net_exponent(toks: &[Token]) -> i64 {
    toks.iter()
        .map(|t| match t {
            Token::Rpow(k) => *k as i64,
            Token::Seg(_) => 0,
        })
        .sum()
}

fn cost(toks: &[Token]) -> (usize, i64) {
    let mut segs = 0;
    let mut r = 0;
    for t in toks {
        match t {
            Token::Seg(_) => segs += 1,
            Token::Rpow(k) => r += k.unsigned_abs() as i64,
        }
    }
    (segs, r)
}

/// Every piece covered exactly once by segment tokens.
fn check_wilson(w: &WilsonWord) -> Result<(), RewriteError> {
    let table = w.table();
    let mut seen: Vec<Vec<u8>> = (0..table.component_count())
        .map(|c| vec![0; table.pieces(c).len()])
        .collect();
    for &t in w.tokens() {
        if let Token::Seg(s) = t {
            let len = seen[s.comp as usize].len();
            for k in 0..s.len {
                seen[s.comp as usize][(s.start + k) as usize % len] += 1;
            }
        }
    }
    for (c, counts) in seen.iter().enumerate() {
        if let Some(p) = counts.iter().position(|&k| k != 1) {
            return Err(RewriteError::NonWilsonInput(format!(
                "piece {p} of component {c} is covered {} times",
                counts[p]
            )));
        }
    }
    Ok(())
}

type Step = (RewriteRule, usize, Direction);

/// Heap entry: segment count, total `|R|`, tiebreak key, node id.
type Entry = (usize, i64, Vec<u64>, usize);

struct Node {
    tokens: Vec<Token>,
    parent: Option<usize>,
    steps: Vec<Step>,
    depth: usize,
}

fn successors(w: &WilsonWord, guarded: bool) -> Vec<(Vec<Step>, WilsonWord)> {
    let n = w.len();
    let mut out = Vec::new();
    let mut push = |step: Step| {
        if let Ok(toks) = rewrite_tokens(w, step.0, step.1, step.2, guarded) {
            let next = w.with_tokens(toks);
            let m = next.len();
            let wraps = m > 1
                && matches!(next.tokens()[0], Token::Rpow(_))
                && matches!(next.tokens()[m - 1], Token::Rpow(_));
            if wraps {
                let merge = (RewriteRule::RMerge, m - 1, Direction::Forward);
                let merged = apply_rule_with(&next, merge.0, merge.1, merge.2, guarded)
                    .expect("both ends are R powers");
                out.push((vec![step, merge], merged));
            } else {
                out.push((vec![step], next));
            }
        }
    };
    for pos in 0..n {
        push((RewriteRule::Concat, pos, Direction::Forward));
        push((RewriteRule::QuasiCommute, pos, Direction::Forward));
        push((RewriteRule::QuasiCommute, pos, Direction::Backward));
        push((RewriteRule::CrossPos, pos, Direction::Forward));
        push((RewriteRule::CrossNeg, pos, Direction::Forward));
    }
    out
}

pub fn normalize(
    w: &WilsonWord,
    cfg: &SearchConfig,
) -> Result<(NormalForm, TraceLog), RewriteError> {
    normalize_with_stats(w, cfg).map(|o| (o.normal_form, o.log))
}

/// Best-first search by (segment count, total |R| exponent). Among the normal forms
/// reached, the one with the smallest `|e|` wins; reaching `e = 0` stops early.
pub fn normalize_with_stats(
    w: &WilsonWord,
    cfg: &SearchConfig,
) -> Result<SearchOutcome, RewriteError> {
    check_wilson(w)?;
    let mut nodes = vec![Node {
        tokens: w.tokens().to_vec(),
        parent: None,
        steps: vec![],
        depth: 0,
    }];
    let mut visited: HashMap<Vec<u64>, usize> = HashMap::new();
    visited.insert(state_key(w.tokens()), 0);
    let mut heap: BinaryHeap<Reverse<Entry>> = BinaryHeap::new();
    let tiebreak = |toks: &[Token]| {
        if cfg.deterministic_tiebreak {
            state_key(toks)
        } else {
            Vec::new()
        }
    };
    let (s0, r0) = cost(w.tokens());
    heap.push(Reverse((s0, r0, tiebreak(w.tokens()), 0)));
    let mut best: Option<(i64, usize)> = None;
    let max_states = cfg.max_states.max(1);
    let mut budget_hit = false;

    'search: while let Some(Reverse((_, _, _, id))) = heap.pop() {
        let word = w.with_tokens(nodes[id].tokens.clone());
        if is_normal(&word) {
            let e = net_exponent(word.tokens());
            if best.is_none_or(|(b, _)| e.abs() < b.abs()) {
                best = Some((e, id));
            }
            if e == 0 {
                break;
            }
            continue;
        }
        if nodes[id].depth >= cfg.max_depth {
            continue;
        }
        for (steps, next) in successors(&word, cfg.guarded) {
            let key = state_key(next.tokens());
            if visited.contains_key(&key) {
                continue;
            }
            if visited.len() >= max_states {
                budget_hit = true;
                break 'search;
            }
            let child = nodes.len();
            let (s, r) = cost(next.tokens());
            let tie = if cfg.deterministic_tiebreak {
                key.clone()
            } else {
                Vec::new()
            };
            visited.insert(key, child);
            heap.push(Reverse((s, r, tie, child)));
            nodes.push(Node {
                tokens: next.tokens().to_vec(),
                parent: Some(id),
                steps,
                depth: nodes[id].depth + 1,
            });
        }
    }

    let states = visited.len();
    let Some((e, id)) = best else {
        return Err(if budget_hit {
            RewriteError::BudgetExceeded { states }
        } else {
            RewriteError::NoNormalForm { states }
        });
    };

    let mut path: Vec<Step> = Vec::new();
    let mut cur = Some(id);
    while let Some(c) = cur {
        path.splice(0..0, nodes[c].steps.iter().copied());
        cur = nodes[c].parent;
    }
    let mut log = TraceLog {
        guarded: cfg.guarded,
        steps: Vec::with_capacity(path.len() + 1),
    };
    let mut word = w.clone();
    for (rule, pos, dir) in path {
        word = apply_rule_with(&word, rule, pos, dir, cfg.guarded).expect("search steps replay");
        log.steps.push(TraceStep {
            rule,
            position: pos,
            direction: dir,
            word: word.to_string(),
        });
    }
    if let Some(p) = word
        .tokens()
        .iter()
        .position(|t| matches!(t, Token::Rpow(_)))
    {
        if p > 0 {
            word = apply_rule_with(
                &word,
                RewriteRule::Rotate,
                p,
                Direction::Forward,
                cfg.guarded,
            )
            .expect("rotation always applies");
            log.steps.push(TraceStep {
                rule: RewriteRule::Rotate,
                position: p,
                direction: Direction::Forward,
                word: word.to_string(),
            });
        }
    }
    let loops = word
        .tokens()
        .iter()
        .filter_map(|t| match *t {
            Token::Seg(s) => Some(word.from_label(s).to_string()),
            Token::Rpow(_) => None,
        })
        .collect();
    Ok(SearchOutcome {
        normal_form: NormalForm {
            e,
            loops,
            partition_normalization: 1,
        },
        log,
        output: word,
        states,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{parse_pd, Diagram};
    use crate::wilson::{encode, encode_knot, EncodeOptions, Label, Piece, PieceTable};
    use num_rational::Ratio;
    use std::sync::Arc;

    /// One component `z1 -> z2 -> z3 -> z4 -> z1` with stamps in that order.
    fn path_word(tokens: &[(u32, u32)]) -> WilsonWord {
        let pieces = (0..4)
            .map(|i| Piece {
                from: Label::Z(i + 1),
                to: Label::Z((i + 1) % 4 + 1),
                stamp: Ratio::from_integer(i as i64),
                start_role: None,
                end_role: None,
            })
            .collect();
        let table = Arc::new(PieceTable::new(vec![pieces]).unwrap());
        let toks = tokens
            .iter()
            .map(|&(s, l)| {
                Token::Seg(Seg {
                    comp: 0,
                    start: s,
                    len: l,
                })
            })
            .collect();
        WilsonWord::new(table, toks).unwrap()
    }

    fn fig1() -> WilsonWord {
        encode_knot(&parse_pd("X[2,2,1,1]").unwrap(), Some(0)).unwrap()
    }

    #[test]
    fn concat_joins_consecutive_segments() {
        let w = path_word(&[(1, 1), (2, 1), (0, 1), (3, 1)]);
        let out = apply_rule(&w, RewriteRule::Concat, 0, Direction::Forward).unwrap();
        assert_eq!(out.to_string(), "W(z2,z4)W(z1,z2)W(z4,z1)");
        let back = apply_rule(&out, RewriteRule::Concat, 0, Direction::Backward).unwrap();
        assert_eq!(back, w);
        assert_eq!(
            apply_rule(&w, RewriteRule::Concat, 1, Direction::Forward)
                .unwrap_err()
                .code(),
            "pattern_mismatch"
        );
    }

    #[test]
    fn quasi_commute_needs_precedence() {
        let w = path_word(&[(2, 1), (0, 1), (1, 1), (3, 1)]);
        let out = apply_rule(&w, RewriteRule::QuasiCommute, 0, Direction::Forward).unwrap();
        assert_eq!(out.to_string(), "R^1W(z1,z2)W(z3,z4)R^-1W(z2,z3)W(z4,z1)");
        let back = apply_rule(&out, RewriteRule::QuasiCommute, 0, Direction::Backward).unwrap();
        assert_eq!(back, w);
        assert!(apply_rule(&w, RewriteRule::QuasiCommute, 1, Direction::Forward).is_err());
        assert!(
            apply_rule_with(&w, RewriteRule::QuasiCommute, 1, Direction::Forward, false).is_ok()
        );
    }

    #[test]
    fn r_powers_merge_and_vanish() {
        let w = path_word(&[(0, 1), (1, 1), (2, 1), (3, 1)]);
        let w = w.with_tokens(vec![
            Token::Rpow(2),
            Token::Rpow(-2),
            Token::Seg(Seg {
                comp: 0,
                start: 0,
                len: 4,
            }),
        ]);
        let out = apply_rule(&w, RewriteRule::RMerge, 0, Direction::Forward).unwrap();
        assert_eq!(out.to_string(), "W(z1,z1)");
        let wrap = w.with_tokens(vec![
            Token::Rpow(1),
            Token::Seg(Seg {
                comp: 0,
                start: 0,
                len: 4,
            }),
            Token::Rpow(2),
        ]);
        let out = apply_rule(&wrap, RewriteRule::RMerge, 2, Direction::Forward).unwrap();
        assert_eq!(out.to_string(), "R^3W(z1,z1)");
    }

    #[test]
    fn crossing_block_rules() {
        let w = fig1();
        // W(z2,w)W(w,z2)W(z1,w)W(w,z1): the over strand is visited first
        let pos = apply_rule(&w, RewriteRule::CrossPos, 0, Direction::Forward).unwrap();
        assert_eq!(pos.to_string(), "R^1W(z1,w1)W(w1,z2)W(z2,w1)W(w1,z1)");
        assert!(apply_rule(&w, RewriteRule::CrossNeg, 0, Direction::Forward).is_err());
        assert_eq!(
            apply_rule(&pos, RewriteRule::CrossPos, 0, Direction::Backward).unwrap(),
            w
        );
        let m = fig1_mirror();
        let neg = apply_rule(&m, RewriteRule::CrossNeg, 0, Direction::Forward).unwrap();
        assert!(neg.to_string().ends_with("R^-1"));
        assert_eq!(
            apply_rule(&neg, RewriteRule::CrossNeg, 0, Direction::Backward).unwrap(),
            m
        );
    }

    fn fig1_mirror() -> WilsonWord {
        encode_knot(&parse_pd("X[2,2,1,1]").unwrap().mirror(), Some(0)).unwrap()
    }

    #[test]
    fn rotate_round_trip() {
        let w = fig1();
        let r = apply_rule(&w, RewriteRule::Rotate, 3, Direction::Forward).unwrap();
        assert_eq!(r.tokens()[0], w.tokens()[3]);
        assert_eq!(
            apply_rule(&r, RewriteRule::Rotate, 3, Direction::Backward).unwrap(),
            w
        );
        assert_eq!(canonical_cyclic(&r), canonical_cyclic(&w));
    }

    #[test]
    fn canonical_keys() {
        let s = |a: &str, b: &str| WordToken::Seg(a.into(), b.into());
        let k = canonical_cyclic_tokens;
        assert_eq!(
            k(&[s("a", "b"), s("b", "a")]),
            k(&[s("b", "a"), s("a", "b")])
        );
        assert_eq!(k(&[s("a", "a")]), k(&[s("b", "b")]));
        assert_eq!(
            k(&[WordToken::Rpow(1), s("a", "a")]),
            k(&[s("a", "a"), WordToken::Rpow(1)])
        );
        assert_ne!(
            k(&[WordToken::Rpow(1), s("a", "a")]),
            k(&[WordToken::Rpow(-1), s("a", "a")])
        );
        assert_ne!(
            k(&[s("a", "b"), s("b", "a")]),
            k(&[s("a", "a"), s("b", "b")])
        );
    }

    #[test]
    fn least_rotation_matches_brute_force() {
        for s in [
            vec![3, 1, 2, 1, 2],
            vec![1, 1, 1],
            vec![2, 1],
            vec![5],
            vec![1, 2, 1, 1, 2, 1, 1],
        ] {
            let n = s.len();
            let brute = (0..n)
                .map(|r| {
                    let mut v = s.clone();
                    v.rotate_left(r);
                    v
                })
                .min()
                .unwrap();
            let mut got = s.clone();
            got.rotate_left(least_rotation(&s));
            assert_eq!(got, brute);
        }
    }

    #[test]
    fn loops_are_already_normal() {
        let w = encode(&Diagram::unknots(2), &EncodeOptions::default()).unwrap();
        let (nf, log) = normalize(&w, &SearchConfig::default()).unwrap();
        assert_eq!(nf.e, 0);
        assert_eq!(nf.loops, vec!["z1", "z2"]);
        assert!(log.steps.is_empty());
    }

    #[test]
    fn curl_normalizes_with_replayable_log() {
        let w = fig1();
        let out = normalize_with_stats(&w, &SearchConfig::default()).unwrap();
        assert_eq!(out.normal_form.e, 0);
        assert_eq!(out.normal_form.loops.len(), 1);
        assert_eq!(out.log.replay(&w).unwrap(), out.output);
        let again = normalize_with_stats(&w, &SearchConfig::default()).unwrap();
        assert_eq!(again.log, out.log);
    }

    #[test]
    fn tiny_budget() {
        let w = encode_knot(
            &parse_pd("X[4,2,5,1] X[2,6,3,5] X[6,4,1,3]").unwrap(),
            Some(0),
        )
        .unwrap();
        let cfg = SearchConfig {
            max_states: 3,
            ..SearchConfig::default()
        };
        assert_eq!(normalize(&w, &cfg).unwrap_err().code(), "budget_exceeded");
    }

    #[test]
    fn rejects_partial_words() {
        let w = fig1();
        let partial = w.with_tokens(w.tokens()[..3].to_vec());
        assert_eq!(
            normalize(&partial, &SearchConfig::default())
                .unwrap_err()
                .code(),
            "non_wilson_input"
        );
    }

    #[test]
    fn power_index_sign() {
        let nf = |e| NormalForm {
            e,
            loops: vec![],
            partition_normalization: 1,
        };
        assert_eq!(power_index(&nf(1)), -1);
        assert_eq!(power_index(&nf(-2)), 2);
        assert_eq!(power_index(&nf(0)), 0);
    }
}
