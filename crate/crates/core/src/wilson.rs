//! Diagrams as cyclic words of oriented strand segments.
//!
//! Every crossing contributes the four pieces of curve that meet at its crossing point,
//! in the order under-in, over-out, over-in, under-out. Pieces are the atoms; a word
//! token covers a run of consecutive pieces of one component.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diagram::Diagram;

pub type Stamp = Ratio<i64>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EncodeError {
    #[error("expected a knot, got {0} components")]
    MultiComponentInput(usize),
    #[error("invalid component ordering: {0}")]
    InvalidOrdering(String),
    #[error("invalid basepoint: {0}")]
    InvalidBasepoint(String),
    #[error("malformed word text: {0}")]
    MalformedWord(String),
}

impl EncodeError {
    pub fn code(&self) -> &'static str {
        match self {
            EncodeError::MultiComponentInput(_) => "multi_component_input",
            EncodeError::InvalidOrdering(_) => "invalid_ordering",
            EncodeError::InvalidBasepoint(_) => "invalid_basepoint",
            EncodeError::MalformedWord(_) => "malformed_word",
        }
    }
}

/// Endpoint symbol: `z` for points on arcs, `w` for crossing points. Indices are 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    Z(u32),
    W(u32),
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Z(i) => write!(f, "z{i}"),
            Label::W(i) => write!(f, "w{i}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Level {
    Over,
    Under,
}

/// How a piece meets a crossing point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Role {
    pub crossing: u32,
    pub level: Level,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Piece {
    pub from: Label,
    pub to: Label,
    pub stamp: Stamp,
    /// set when the piece leaves a crossing point
    pub start_role: Option<Role>,
    /// set when the piece enters a crossing point
    pub end_role: Option<Role>,
}

/// Pieces of each component in traversal order; piece `k + 1` continues piece `k` cyclically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PieceTable {
    components: Vec<Vec<Piece>>,
}

impl PieceTable {
    pub fn new(components: Vec<Vec<Piece>>) -> Result<PieceTable, EncodeError> {
        for (c, pieces) in components.iter().enumerate() {
            if pieces.is_empty() {
                return Err(EncodeError::MalformedWord(format!(
                    "component {c} has no pieces"
                )));
            }
            for k in 0..pieces.len() {
                let next = &pieces[(k + 1) % pieces.len()];
                if pieces[k].to != next.from {
                    return Err(EncodeError::MalformedWord(format!(
                        "component {c}: piece {k} ends at {} but the next starts at {}",
                        pieces[k].to, next.from
                    )));
                }
            }
        }
        Ok(PieceTable { components })
    }

    pub fn component_count(&self) -> usize {
        self.components.len()
    }

    pub fn pieces(&self, comp: usize) -> &[Piece] {
        &self.components[comp]
    }

    pub fn piece(&self, comp: usize, index: usize) -> &Piece {
        let pieces = &self.components[comp];
        &pieces[index % pieces.len()]
    }
}

/// A run of `len` consecutive pieces of component `comp` starting at piece `start`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Seg {
    pub comp: u32,
    pub start: u32,
    pub len: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Token {
    Seg(Seg),
    Rpow(i32),
}

/// A cyclic word under the trace.
#[derive(Debug, Clone)]
pub struct WilsonWord {
    table: Arc<PieceTable>,
    tokens: Vec<Token>,
}

impl PartialEq for WilsonWord {
    fn eq(&self, other: &Self) -> bool {
        self.tokens == other.tokens
            && (Arc::ptr_eq(&self.table, &other.table) || self.table == other.table)
    }
}

impl Eq for WilsonWord {}

impl WilsonWord {
    pub fn new(table: Arc<PieceTable>, tokens: Vec<Token>) -> Result<WilsonWord, EncodeError> {
        for t in &tokens {
            match *t {
                Token::Rpow(0) => return Err(EncodeError::MalformedWord("R^0 token".into())),
                Token::Seg(s) => {
                    let n = table
                        .components
                        .get(s.comp as usize)
                        .map(|c| c.len())
                        .ok_or_else(|| {
                            EncodeError::MalformedWord(format!("no component {}", s.comp))
                        })?;
                    if s.len == 0 || s.len as usize > n || s.start as usize >= n {
                        return Err(EncodeError::MalformedWord(format!(
                            "segment {s:?} out of range"
                        )));
                    }
                }
                Token::Rpow(_) => {}
            }
        }
        Ok(WilsonWord { table, tokens })
    }

    /// Same pieces, new tokens. Tokens must refer to this word's table.
    pub(crate) fn with_tokens(&self, tokens: Vec<Token>) -> WilsonWord {
        WilsonWord {
            table: Arc::clone(&self.table),
            tokens,
        }
    }

    pub fn table(&self) -> &PieceTable {
        &self.table
    }

    pub fn tokens(&self) -> &[Token] {
        &self.tokens
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn component_len(&self, seg: Seg) -> usize {
        self.table.components[seg.comp as usize].len()
    }

    pub fn from_label(&self, seg: Seg) -> Label {
        self.table.piece(seg.comp as usize, seg.start as usize).from
    }

    pub fn to_label(&self, seg: Seg) -> Label {
        self.table
            .piece(seg.comp as usize, (seg.start + seg.len - 1) as usize)
            .to
    }

    /// Earliest stamp among the covered pieces.
    pub fn stamp(&self, seg: Seg) -> Stamp {
        (0..seg.len)
            .map(|k| {
                self.table
                    .piece(seg.comp as usize, (seg.start + k) as usize)
                    .stamp
            })
            .min()
            .expect("segments are non-empty")
    }

    pub fn is_loop(&self, seg: Seg) -> bool {
        seg.len as usize == self.component_len(seg)
    }

    pub fn seg_count(&self) -> usize {
        self.tokens
            .iter()
            .filter(|t| matches!(t, Token::Seg(_)))
            .count()
    }

    pub fn label_tokens(&self) -> Vec<WordToken> {
        self.tokens
            .iter()
            .map(|t| match *t {
                Token::Seg(s) => {
                    WordToken::Seg(self.from_label(s).to_string(), self.to_label(s).to_string())
                }
                Token::Rpow(k) => WordToken::Rpow(k),
            })
            .collect()
    }

    /// Stamps of the segment tokens, in token order.
    pub fn stamps(&self) -> Vec<Stamp> {
        self.tokens
            .iter()
            .filter_map(|t| match *t {
                Token::Seg(s) => Some(self.stamp(s)),
                Token::Rpow(_) => None,
            })
            .collect()
    }

    pub fn to_json(&self) -> WordJson {
        WordJson {
            tokens: self
                .label_tokens()
                .into_iter()
                .map(|t| match t {
                    WordToken::Seg(a, b) => TokenJson::Seg { seg: [a, b] },
                    WordToken::Rpow(k) => TokenJson::Rpow { rpow: k },
                })
                .collect(),
            stamps: self.stamps().iter().map(|s| s.to_string()).collect(),
        }
    }
}

impl fmt::Display for WilsonWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_tokens(&self.label_tokens()))
    }
}

/// A token with plain string labels, independent of any diagram.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum WordToken {
    Seg(String, String),
    Rpow(i32),
}

pub fn render_tokens(tokens: &[WordToken]) -> String {
    let mut out = String::new();
    for t in tokens {
        match t {
            WordToken::Seg(a, b) => out.push_str(&format!("W({a},{b})")),
            WordToken::Rpow(k) => out.push_str(&format!("R^{k}")),
        }
    }
    out
}

/// Parses text such as `W(z2,w)W(w,z2)R^-1`. A bare `R` is `R^1`.
pub fn parse_word(text: &str) -> Result<Vec<WordToken>, EncodeError> {
    let s: String = text
        .chars()
        .filter(|c| !c.is_whitespace() && *c != '·' && *c != '*')
        .collect();
    let mut rest = s.as_str();
    let mut out = Vec::new();
    let bad = |r: &str| EncodeError::MalformedWord(format!("near {r:?}"));
    while !rest.is_empty() {
        if let Some(r) = rest.strip_prefix("W(") {
            let close = r.find(')').ok_or_else(|| bad(rest))?;
            let (a, b) = r[..close].split_once(',').ok_or_else(|| bad(rest))?;
            if a.is_empty() || b.is_empty() {
                return Err(bad(rest));
            }
            out.push(WordToken::Seg(a.to_string(), b.to_string()));
            rest = &r[close + 1..];
        } else if let Some(r) = rest.strip_prefix('R') {
            let (k, r) = match r.strip_prefix('^') {
                Some(r) => {
                    let r = r.strip_prefix('{').unwrap_or(r);
                    let end = r
                        .char_indices()
                        .find(|&(i, c)| !(c.is_ascii_digit() || (i == 0 && c == '-')))
                        .map(|(i, _)| i)
                        .unwrap_or(r.len());
                    let k: i32 = r[..end].parse().map_err(|_| bad(rest))?;
                    let r = &r[end..];
                    (k, r.strip_prefix('}').unwrap_or(r))
                }
                None => (1, r),
            };
            if k != 0 {
                out.push(WordToken::Rpow(k));
            }
            rest = r;
        } else {
            return Err(bad(rest));
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TokenJson {
    Seg { seg: [String; 2] },
    Rpow { rpow: i32 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WordJson {
    pub tokens: Vec<TokenJson>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub stamps: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PatternKind {
    Positive,
    Negative,
    None,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossingPattern {
    pub kind: PatternKind,
    pub segments: Vec<(Label, Label)>,
}

/// Segment template for a crossing between strands `z1 -> z2` and `z3 -> z4` meeting
/// at `w`. Sign `+1` puts `z1 -> z2` over, `-1` puts it under, `0` means they do not meet.
pub fn pattern_for_crossing(sign: i8, labels: [Label; 5]) -> CrossingPattern {
    let [z1, z2, z3, z4, w] = labels;
    match sign.signum() {
        1 => CrossingPattern {
            kind: PatternKind::Positive,
            segments: vec![(z3, w), (w, z2), (z1, w), (w, z4)],
        },
        -1 => CrossingPattern {
            kind: PatternKind::Negative,
            segments: vec![(z1, w), (w, z4), (z3, w), (w, z2)],
        },
        _ => CrossingPattern {
            kind: PatternKind::None,
            segments: vec![(z1, z2), (z3, z4)],
        },
    }
}

/// Component order and per-component starting arcs (0-based arc ids).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EncodeOptions {
    pub ordering: Option<Vec<usize>>,
    pub basepoints: Option<Vec<usize>>,
}

pub fn encode_knot(d: &Diagram, basepoint: Option<usize>) -> Result<WilsonWord, EncodeError> {
    if d.component_count() != 1 {
        return Err(EncodeError::MultiComponentInput(d.component_count()));
    }
    let basepoints = basepoint.map(|b| vec![b]);
    encode(
        d,
        &EncodeOptions {
            ordering: None,
            basepoints,
        },
    )
}

pub fn encode_link(d: &Diagram, ordering: &[usize]) -> Result<WilsonWord, EncodeError> {
    encode(
        d,
        &EncodeOptions {
            ordering: Some(ordering.to_vec()),
            basepoints: None,
        },
    )
}

/// Encodes any diagram. Components are indexed as arc cycles first, then free loops.
///
/// Passage `j` of a component with `n` passages happens at time `j/n`; ties go to the
/// earlier component in the ordering. Crossing blocks appear in order of first visit.
pub fn encode(d: &Diagram, opts: &EncodeOptions) -> Result<WilsonWord, EncodeError> {
    let cycles = d.arc_cycles();
    let n_comp = d.component_count();
    let ordering = match &opts.ordering {
        Some(o) => {
            let mut sorted = o.clone();
            sorted.sort_unstable();
            if sorted != (0..n_comp).collect::<Vec<_>>() {
                return Err(EncodeError::InvalidOrdering(format!(
                    "{o:?} is not a permutation of 0..{n_comp}"
                )));
            }
            o.clone()
        }
        None => (0..n_comp).collect(),
    };
    if let Some(b) = &opts.basepoints {
        if b.len() != cycles.len() {
            return Err(EncodeError::InvalidBasepoint(format!(
                "{} basepoints for {} components with crossings",
                b.len(),
                cycles.len()
            )));
        }
        for (c, &arc) in b.iter().enumerate() {
            if arc >= d.arc_count() || d.component_of(arc) != c {
                return Err(EncodeError::InvalidBasepoint(format!(
                    "arc {} is not on component {c}",
                    arc + 1
                )));
            }
        }
    }

    // traversal of each component in ordering rank
    let mut next_z = 1u32;
    let mut components: Vec<Vec<Piece>> = Vec::with_capacity(n_comp);
    // (time, rank, in/out, comp slot, piece index)
    let mut keys: Vec<(Ratio<i64>, usize, u8, usize, usize)> = Vec::new();
    let mut pending_w: Vec<(usize, usize, usize)> = Vec::new();
    for (rank, &comp) in ordering.iter().enumerate() {
        if comp >= cycles.len() {
            let z = Label::Z(next_z);
            next_z += 1;
            keys.push((Ratio::from_integer(0), rank, 0, rank, 0));
            components.push(vec![Piece {
                from: z,
                to: z,
                stamp: Ratio::from_integer(0),
                start_role: None,
                end_role: None,
            }]);
            continue;
        }
        let cycle = &cycles[comp];
        let start = opts
            .basepoints
            .as_ref()
            .map(|b| {
                cycle
                    .iter()
                    .position(|&a| a == b[comp])
                    .expect("checked above")
            })
            .unwrap_or(0);
        let arcs: Vec<usize> = (0..cycle.len())
            .map(|k| cycle[(start + k) % cycle.len()])
            .collect();
        let zs: Vec<Label> = arcs
            .iter()
            .map(|_| {
                next_z += 1;
                Label::Z(next_z - 1)
            })
            .collect();
        let n = arcs.len() as i64;
        let mut pieces = Vec::with_capacity(2 * arcs.len());
        for (j, &arc) in arcs.iter().enumerate() {
            let head = d.head(arc);
            let role = Role {
                crossing: head.crossing as u32,
                level: if head.is_over() {
                    Level::Over
                } else {
                    Level::Under
                },
            };
            let time = Ratio::new(j as i64, n);
            let placeholder = Label::W(0);
            keys.push((time, rank, 0, rank, 2 * j));
            keys.push((time, rank, 1, rank, 2 * j + 1));
            pending_w.push((rank, 2 * j, head.crossing));
            pieces.push(Piece {
                from: zs[j],
                to: placeholder,
                stamp: time,
                start_role: None,
                end_role: Some(role),
            });
            pieces.push(Piece {
                from: placeholder,
                to: zs[(j + 1) % arcs.len()],
                stamp: time,
                start_role: Some(role),
                end_role: None,
            });
        }
        components.push(pieces);
    }

    keys.sort();
    let mut w_label: HashMap<usize, u32> = HashMap::new();
    let mut block_order: Vec<usize> = Vec::new();
    let crossing_of: HashMap<(usize, usize), usize> =
        pending_w.iter().map(|&(r, p, x)| ((r, p), x)).collect();
    for (idx, &(_, _, _, r, p)) in keys.iter().enumerate() {
        components[r][p].stamp = Ratio::from_integer(idx as i64);
        if let Some(&x) = crossing_of.get(&(r, p)) {
            if !w_label.contains_key(&x) {
                w_label.insert(x, w_label.len() as u32 + 1);
                block_order.push(x);
            }
        }
    }
    // fill in crossing labels and locate the four pieces at each crossing
    let mut at_crossing: HashMap<(usize, bool, Level), (usize, usize)> = HashMap::new();
    for (r, pieces) in components.iter_mut().enumerate() {
        for (p, piece) in pieces.iter_mut().enumerate() {
            if let Some(role) = piece.end_role {
                let x = role.crossing as usize;
                piece.to = Label::W(w_label[&x]);
                at_crossing.insert((x, true, role.level), (r, p));
            }
            if let Some(role) = piece.start_role {
                let x = role.crossing as usize;
                piece.from = Label::W(w_label[&x]);
                at_crossing.insert((x, false, role.level), (r, p));
            }
        }
    }
    let seg = |x: usize, incoming: bool, level: Level| {
        let (r, p) = at_crossing[&(x, incoming, level)];
        Token::Seg(Seg {
            comp: r as u32,
            start: p as u32,
            len: 1,
        })
    };
    let mut tokens = Vec::with_capacity(4 * block_order.len() + n_comp);
    for &x in &block_order {
        tokens.push(seg(x, true, Level::Under));
        tokens.push(seg(x, false, Level::Over));
        tokens.push(seg(x, true, Level::Over));
        tokens.push(seg(x, false, Level::Under));
    }
    for (r, pieces) in components.iter().enumerate() {
        if pieces.len() == 1 {
            tokens.push(Token::Seg(Seg {
                comp: r as u32,
                start: 0,
                len: 1,
            }));
        }
    }
    let table = PieceTable::new(components).expect("encoder output is contiguous");
    Ok(WilsonWord {
        table: Arc::new(table),
        tokens,
    })
}

/// Pattern kind of every crossing block, in block order: positive when the strand
/// visited first passes over.
pub fn block_kinds(w: &WilsonWord) -> Vec<PatternKind> {
    let mut out = Vec::new();
    let toks = w.tokens();
    let mut i = 0;
    while i + 3 < toks.len() {
        if let (Token::Seg(p), Token::Seg(r)) = (toks[i], toks[i + 2]) {
            let under = w.table().piece(p.comp as usize, p.start as usize);
            let over = w.table().piece(r.comp as usize, r.start as usize);
            if matches!(
                under.end_role,
                Some(Role {
                    level: Level::Under,
                    ..
                })
            ) && matches!(
                over.end_role,
                Some(Role {
                    level: Level::Over,
                    ..
                })
            ) {
                out.push(if over.stamp < under.stamp {
                    PatternKind::Positive
                } else {
                    PatternKind::Negative
                });
                i += 4;
                continue;
            }
        }
        i += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braid::{braid_closure, parse_braid};
    use crate::diagram::parse_pd;

    fn z(i: u32) -> Label {
        Label::Z(i)
    }

    #[test]
    fn templates() {
        let l = [z(1), z(2), z(3), z(4), Label::W(1)];
        let w = Label::W(1);
        assert_eq!(
            pattern_for_crossing(1, l).segments,
            vec![(z(3), w), (w, z(2)), (z(1), w), (w, z(4))]
        );
        assert_eq!(
            pattern_for_crossing(-1, l).segments,
            vec![(z(1), w), (w, z(4)), (z(3), w), (w, z(2))]
        );
        assert_eq!(
            pattern_for_crossing(0, l).segments,
            vec![(z(1), z(2)), (z(3), z(4))]
        );
        assert_eq!(pattern_for_crossing(0, l).kind, PatternKind::None);
    }

    #[test]
    fn curl_word() {
        let d = parse_pd("X[2,2,1,1]").unwrap();
        let w = encode_knot(&d, Some(0)).unwrap();
        assert_eq!(w.to_string(), "W(z2,w1)W(w1,z2)W(z1,w1)W(w1,z1)");
        assert_eq!(block_kinds(&w), vec![PatternKind::Positive]);
    }

    #[test]
    fn unknot_and_unlink() {
        let w = encode_knot(&Diagram::unknots(1), None).unwrap();
        assert_eq!(w.to_string(), "W(z1,z1)");
        let w = encode(&Diagram::unknots(2), &EncodeOptions::default()).unwrap();
        assert_eq!(w.to_string(), "W(z1,z1)W(z2,z2)");
    }

    #[test]
    fn multi_component_knot_input() {
        let h = braid_closure(&parse_braid("1 1", 2).unwrap());
        assert_eq!(
            encode_knot(&h, None).unwrap_err().code(),
            "multi_component_input"
        );
        assert_eq!(
            encode_link(&h, &[0, 0]).unwrap_err().code(),
            "invalid_ordering"
        );
    }

    #[test]
    fn label_counts() {
        for (word, n) in [("1 1 1", 2), ("1 -2 1 -2", 3), ("1 1 2 -1 2", 3)] {
            let d = braid_closure(&parse_braid(word, n).unwrap());
            let w = encode(&d, &EncodeOptions::default()).unwrap();
            assert_eq!(w.len(), 4 * d.crossing_count());
            let mut count: HashMap<String, usize> = HashMap::new();
            for t in w.label_tokens() {
                if let WordToken::Seg(a, b) = t {
                    *count.entry(a).or_default() += 1;
                    *count.entry(b).or_default() += 1;
                }
            }
            for (label, c) in count {
                let expect = if label.starts_with('w') { 4 } else { 2 };
                assert_eq!(c, expect, "{label} in {w}");
            }
        }
    }

    #[test]
    fn stamps_increase_along_a_knot() {
        let d = braid_closure(&parse_braid("1 1 1", 2).unwrap());
        let w = encode_knot(&d, None).unwrap();
        let pieces = w.table().pieces(0);
        assert!(pieces.windows(2).all(|p| p[0].stamp < p[1].stamp));
    }

    #[test]
    fn parse_word_text() {
        let t = parse_word("W(z2,w)W(w,z2) R^-1 W(z1,w)R").unwrap();
        assert_eq!(
            t,
            vec![
                WordToken::Seg("z2".into(), "w".into()),
                WordToken::Seg("w".into(), "z2".into()),
                WordToken::Rpow(-1),
                WordToken::Seg("z1".into(), "w".into()),
                WordToken::Rpow(1),
            ]
        );
        assert_eq!(parse_word("R^{-2}").unwrap(), vec![WordToken::Rpow(-2)]);
        assert!(parse_word("W(z1)").is_err());
        assert!(parse_word("Q").is_err());
    }

    #[test]
    fn json_shape() {
        let w = encode_knot(&parse_pd("X[2,2,1,1]").unwrap(), Some(0)).unwrap();
        let v = serde_json::to_value(w.to_json()).unwrap();
        assert_eq!(v["tokens"][0], serde_json::json!({"seg": ["z2", "w1"]}));
    }
}
