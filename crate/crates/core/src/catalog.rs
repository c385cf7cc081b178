//! Classification table of knots by power index, with connected-sum accounting.
//!
//! Two sums are distinguished: `⋆` loses two alternating crossings, `×` keeps them all.
//! Crossing counts add under both.

use serde::{Deserialize, Serialize};
use thiserror::Error;

const TABLE_JSON: &str = include_str!("../data/classification_table.json");
pub const TABLE_VERSION: u32 = 1;
pub const STAR: char = '⋆';
pub const TIMES: char = '×';

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CatalogError {
    #[error("{0} is a link; connected sums take knots")]
    LinkOperand(String),
    #[error("unknown knot {0}")]
    UnknownKnot(String),
    #[error("malformed table: {0}")]
    MalformedTable(String),
}

impl CatalogError {
    pub fn code(&self) -> &'static str {
        match self {
            CatalogError::LinkOperand(_) => "link_operand",
            CatalogError::UnknownKnot(_) => "unknown_knot",
            CatalogError::MalformedTable(_) => "malformed_table",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EntryKind {
    PrimeKnot,
    CompositeKnot,
    Link,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SumOp {
    #[serde(rename = "⋆")]
    Star,
    #[serde(rename = "×")]
    Times,
}

impl SumOp {
    pub fn symbol(self) -> char {
        match self {
            SumOp::Star => STAR,
            SumOp::Times => TIMES,
        }
    }
}

/// What a connected sum needs to know about an operand.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Summary {
    pub name: String,
    pub kind: EntryKind,
    pub crossings: u32,
    pub alternating: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SumExpr {
    pub op: SumOp,
    pub left: String,
    pub right: String,
    pub crossings: u32,
    pub alternating: u32,
}

impl SumExpr {
    pub fn name(&self) -> String {
        let wrap = |s: &str| {
            if s.contains([STAR, TIMES]) {
                format!("({s})")
            } else {
                s.to_string()
            }
        };
        format!(
            "{}{}{}",
            wrap(&self.left),
            self.op.symbol(),
            wrap(&self.right)
        )
    }

    pub fn summary(&self) -> Summary {
        Summary {
            name: self.name(),
            kind: EntryKind::CompositeKnot,
            crossings: self.crossings,
            alternating: self.alternating,
        }
    }
}

fn sum(op: SumOp, a: &Summary, b: &Summary) -> Result<SumExpr, CatalogError> {
    for x in [a, b] {
        if x.kind == EntryKind::Link {
            return Err(CatalogError::LinkOperand(x.name.clone()));
        }
    }
    let lost = if op == SumOp::Star { 2 } else { 0 };
    Ok(SumExpr {
        op,
        left: a.name.clone(),
        right: b.name.clone(),
        crossings: a.crossings + b.crossings,
        alternating: (a.alternating + b.alternating).saturating_sub(lost),
    })
}

pub fn star(a: &Summary, b: &Summary) -> Result<SumExpr, CatalogError> {
    sum(SumOp::Star, a, b)
}

pub fn times(a: &Summary, b: &Summary) -> Result<SumExpr, CatalogError> {
    sum(SumOp::Times, a, b)
}

/// Prime knots and the Hopf link: every crossing alternates.
pub fn base_knot(name: &str) -> Option<Summary> {
    const PRIMES: [(&str, u32); 11] = [
        ("3_1", 3),
        ("4_1", 4),
        ("5_1", 5),
        ("5_2", 5),
        ("6_1", 6),
        ("6_2", 6),
        ("6_3", 6),
        ("7_1", 7),
        ("7_2", 7),
        ("7_3", 7),
        ("7_4", 7),
    ];
    if name == "Hopf link" {
        return Some(Summary {
            name: name.into(),
            kind: EntryKind::Link,
            crossings: 2,
            alternating: 2,
        });
    }
    PRIMES
        .iter()
        .find(|(n, _)| *n == name)
        .map(|&(n, c)| Summary {
            name: n.into(),
            kind: EntryKind::PrimeKnot,
            crossings: c,
            alternating: c,
        })
}

/// Evaluates a sum expression such as `3_1⋆(3_1×3_1)`; operators associate to the left.
/// ASCII `*` and `x` stand for `⋆` and `×`.
pub fn evaluate(name: &str) -> Result<Summary, CatalogError> {
    let text = normalize_name(name);
    let mut parser = Parser {
        chars: text.chars().collect(),
        pos: 0,
    };
    let out = parser.expr()?;
    if parser.pos != parser.chars.len() {
        return Err(CatalogError::UnknownKnot(name.to_string()));
    }
    Ok(out)
}

pub fn normalize_name(name: &str) -> String {
    let t: String = name.chars().filter(|c| !c.is_whitespace()).collect();
    if t.eq_ignore_ascii_case("hopflink") || t.eq_ignore_ascii_case("hopf") {
        return "Hopf link".into();
    }
    t.replace('*', "⋆").replace(['x', 'X'], "×")
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn expr(&mut self) -> Result<Summary, CatalogError> {
        let mut acc = self.term()?;
        while let Some(&c) = self.chars.get(self.pos) {
            let op = match c {
                STAR => SumOp::Star,
                TIMES => SumOp::Times,
                _ => break,
            };
            self.pos += 1;
            let rhs = self.term()?;
            acc = sum(op, &acc, &rhs)?.summary();
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Summary, CatalogError> {
        if self.chars.get(self.pos) == Some(&'(') {
            self.pos += 1;
            let inner = self.expr()?;
            if self.chars.get(self.pos) != Some(&')') {
                return Err(CatalogError::UnknownKnot(self.chars.iter().collect()));
            }
            self.pos += 1;
            return Ok(inner);
        }
        let start = self.pos;
        while let Some(&c) = self.chars.get(self.pos) {
            if c == '(' || c == ')' || c == STAR || c == TIMES {
                break;
            }
            self.pos += 1;
        }
        let word: String = self.chars[start..self.pos].iter().collect();
        base_knot(&word).ok_or(CatalogError::UnknownKnot(word))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub name: String,
    pub m: i64,
    pub kind: EntryKind,
    pub crossings: u32,
    pub alternating: u32,
    /// `published` for values taken from the printed table
    pub source: String,
}

impl CatalogEntry {
    pub fn summary(&self) -> Summary {
        Summary {
            name: self.name.clone(),
            kind: self.kind,
            crossings: self.crossings,
            alternating: self.alternating,
        }
    }

    /// Top-level sum, absent for prime knots and links.
    pub fn construction(&self) -> Option<SumExpr> {
        let text = normalize_name(&self.name);
        let chars: Vec<char> = text.chars().collect();
        let mut depth = 0;
        let mut split = None;
        for (i, &c) in chars.iter().enumerate() {
            match c {
                '(' => depth += 1,
                ')' => depth -= 1,
                STAR | TIMES if depth == 0 => split = Some(i),
                _ => {}
            }
        }
        let i = split?;
        let left: String = chars[..i].iter().collect();
        let right: String = chars[i + 1..].iter().collect();
        let op = if chars[i] == STAR {
            SumOp::Star
        } else {
            SumOp::Times
        };
        let strip = |s: String| {
            if s.starts_with('(') && s.ends_with(')') && evaluate(&s[1..s.len() - 1]).is_ok() {
                s[1..s.len() - 1].to_string()
            } else {
                s
            }
        };
        let (l, r) = (evaluate(&left).ok()?, evaluate(&right).ok()?);
        let mut e = sum(op, &l, &r).ok()?;
        e.left = strip(left);
        e.right = strip(right);
        Some(e)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Table {
    pub version: u32,
    pub entries: Vec<CatalogEntry>,
}

impl Table {
    pub fn lookup_by_m(&self, m: i64) -> Option<&CatalogEntry> {
        self.entries.iter().find(|e| e.m == m)
    }

    pub fn lookup_by_name(&self, name: &str) -> Option<&CatalogEntry> {
        let want = normalize_name(name);
        self.entries
            .iter()
            .find(|e| normalize_name(&e.name) == want)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("table serializes")
    }

    pub fn from_json(text: &str) -> Result<Table, CatalogError> {
        let t: Table =
            serde_json::from_str(text).map_err(|e| CatalogError::MalformedTable(e.to_string()))?;
        if t.version != TABLE_VERSION {
            return Err(CatalogError::MalformedTable(format!(
                "unsupported version {}",
                t.version
            )));
        }
        Ok(t)
    }
}

pub fn load_table() -> Table {
    Table::from_json(TABLE_JSON).expect("bundled table is valid")
}

pub fn lookup_by_m(m: i64) -> Option<CatalogEntry> {
    load_table().lookup_by_m(m).cloned()
}

pub fn is_prime(n: i64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PrimeStatus {
    Consistent,
    /// the Hopf link at `m = 2`
    Exception,
    Violation,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrimeRow {
    pub m: i64,
    pub name: String,
    pub m_is_prime: bool,
    pub kind: EntryKind,
    pub status: PrimeStatus,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrimeReport {
    pub rows: Vec<PrimeRow>,
    pub violations: usize,
}

/// For `m` in `2..=32`: `m` an odd prime exactly when the entry is a prime knot.
pub fn prime_consistency_check(table: &Table) -> PrimeReport {
    let mut rows = Vec::new();
    for e in table.entries.iter().filter(|e| (2..=32).contains(&e.m)) {
        let odd_prime = is_prime(e.m) && e.m % 2 == 1;
        let prime_knot = e.kind == EntryKind::PrimeKnot;
        let status = if e.m == 2 && e.kind == EntryKind::Link {
            PrimeStatus::Exception
        } else if odd_prime == prime_knot {
            PrimeStatus::Consistent
        } else {
            PrimeStatus::Violation
        };
        rows.push(PrimeRow {
            m: e.m,
            name: e.name.clone(),
            m_is_prime: is_prime(e.m),
            kind: e.kind,
            status,
        });
    }
    let violations = rows
        .iter()
        .filter(|r| r.status == PrimeStatus::Violation)
        .count();
    PrimeReport { rows, violations }
}
