//! Kauffman bracket and Jones polynomial.
//!
//! The bracket uses `<X[a,b,c,d]> = A <a-b, c-d> + A^{-1} <a-d, b-c>` with loop value
//! `-A^2 - A^{-2}` and `<unknot> = 1`. The Jones polynomial is
//! `(-A^3)^{-writhe} <L>` at `A = t^{-1/4}`.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diagram::{switch_arcs, Diagram};
use crate::laurent::{LaurentPoly, Variable};

pub const DEFAULT_CROSSING_CAP: usize = 24;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum JonesError {
    #[error("{count} crossings exceed the state-sum cap of {cap}")]
    TooManyCrossings { count: usize, cap: usize },
    #[error("no crossing with index {0}")]
    InvalidCrossing(usize),
}

impl JonesError {
    pub fn code(&self) -> &'static str {
        match self {
            JonesError::TooManyCrossings { .. } => "too_many_crossings",
            JonesError::InvalidCrossing(_) => "invalid_crossing",
        }
    }
}

fn loop_value() -> LaurentPoly {
    LaurentPoly::from_terms(Variable::A, [(2, -1), (-2, -1)])
}

pub fn kauffman_bracket(d: &Diagram) -> Result<LaurentPoly, JonesError> {
    kauffman_bracket_with_cap(d, DEFAULT_CROSSING_CAP)
}

/// Sum over all `2^c` smoothings.
pub fn kauffman_bracket_with_cap(d: &Diagram, cap: usize) -> Result<LaurentPoly, JonesError> {
    let c = d.crossing_count();
    if c > cap {
        return Err(JonesError::TooManyCrossings { count: c, cap });
    }
    if d.component_count() == 0 {
        return Ok(LaurentPoly::one(Variable::A));
    }
    let n_arcs = d.arc_count();
    let arcs: Vec<[usize; 4]> = d.crossings().iter().map(|x| x.arcs).collect();
    // counts[a_smoothings][loops]
    let mut counts = vec![vec![0i64; n_arcs + 1]; c + 1];
    let mut parent = vec![0usize; n_arcs];
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut y = x;
        while p[y] != r {
            let n = p[y];
            p[y] = r;
            y = n;
        }
        r
    }
    for state in 0u64..(1u64 << c) {
        for (i, p) in parent.iter_mut().enumerate() {
            *p = i;
        }
        let mut loops = n_arcs;
        let mut a_count = 0;
        for (i, [a, b, cc, dd]) in arcs.iter().copied().enumerate() {
            let pairs = if state >> i & 1 == 0 {
                a_count += 1;
                [(a, b), (cc, dd)]
            } else {
                [(a, dd), (b, cc)]
            };
            for (x, y) in pairs {
                let (rx, ry) = (find(&mut parent, x), find(&mut parent, y));
                if rx != ry {
                    parent[rx] = ry;
                    loops -= 1;
                }
            }
        }
        counts[a_count][loops] += 1;
    }
    let delta = loop_value();
    let mut delta_pows = vec![LaurentPoly::one(Variable::A)];
    for k in 1..=n_arcs + d.free_loops() {
        delta_pows.push(&delta_pows[k - 1] * &delta);
    }
    let mut total = LaurentPoly::zero(Variable::A);
    for (a, row) in counts.iter().enumerate() {
        for (loops, &n) in row.iter().enumerate() {
            if n == 0 {
                continue;
            }
            let b = c - a;
            let term = delta_pows[loops + d.free_loops() - 1].shift(a as i64 - b as i64);
            total = &total + &term.scale(n);
        }
    }
    Ok(total)
}

type Memo = HashMap<(usize, Vec<(usize, usize)>), LaurentPoly>;

/// Memoized recursion over crossings in order. Each subproblem is keyed by the crossing
/// index and the partition of arcs that still have unvisited ends.
pub fn kauffman_bracket_recursive(d: &Diagram) -> LaurentPoly {
    if d.component_count() == 0 {
        return LaurentPoly::one(Variable::A);
    }
    let arcs: Vec<[usize; 4]> = d.crossings().iter().map(|x| x.arcs).collect();
    let mut last = vec![0usize; d.arc_count()];
    for (i, x) in arcs.iter().enumerate() {
        for &a in x {
            last[a] = last[a].max(i);
        }
    }
    let mut memo: Memo = HashMap::new();
    let delta = loop_value();
    let body = bracket_from(0, Vec::new(), &arcs, &last, &delta, &mut memo);
    let mut total = body;
    for _ in 0..d.free_loops() {
        total = &total * &delta;
    }
    total.exact_div(&delta).expect("at least one loop closes")
}

/// `open` lists `(arc, class)` for arcs seen but not finished, classes numbered by
/// first appearance.
fn bracket_from(
    i: usize,
    open: Vec<(usize, usize)>,
    arcs: &[[usize; 4]],
    last: &[usize],
    delta: &LaurentPoly,
    memo: &mut Memo,
) -> LaurentPoly {
    if i == arcs.len() {
        return LaurentPoly::one(Variable::A);
    }
    let key = (i, open);
    if let Some(v) = memo.get(&key) {
        return v.clone();
    }
    let open = &key.1;
    let [a, b, c, d] = arcs[i];
    let mut total = LaurentPoly::zero(Variable::A);
    for (weight, pairs) in [(1i64, [(a, b), (c, d)]), (-1, [(a, d), (b, c)])] {
        // class of every arc touched so far
        let mut class: HashMap<usize, usize> = open.iter().copied().collect();
        let mut next_class = open.iter().map(|&(_, k)| k + 1).max().unwrap_or(0);
        for x in [a, b, c, d] {
            class.entry(x).or_insert_with(|| {
                next_class += 1;
                next_class - 1
            });
        }
        for (x, y) in pairs {
            let (kx, ky) = (class[&x], class[&y]);
            if kx != ky {
                for v in class.values_mut() {
                    if *v == ky {
                        *v = kx;
                    }
                }
            }
        }
        let mut closed = 0u32;
        let mut classes: Vec<usize> = class.values().copied().collect();
        classes.sort_unstable();
        classes.dedup();
        for k in classes {
            if class.iter().all(|(&arc, &v)| v != k || last[arc] <= i) {
                closed += 1;
            }
        }
        let mut rest: Vec<(usize, usize)> = class
            .into_iter()
            .filter(|&(arc, _)| last[arc] > i)
            .collect();
        rest.sort_unstable();
        let mut relabel: HashMap<usize, usize> = HashMap::new();
        for entry in rest.iter_mut() {
            let n = relabel.len();
            entry.1 = *relabel.entry(entry.1).or_insert(n);
        }
        let sub = bracket_from(i + 1, rest, arcs, last, delta, memo);
        total = &total + &(&sub * &delta.pow(closed)).shift(weight);
    }
    memo.insert(key, total.clone());
    total
}

pub fn jones(d: &Diagram) -> Result<LaurentPoly, JonesError> {
    let bracket = kauffman_bracket(d)?;
    Ok(jones_from_bracket(&bracket, d.writhe()))
}

/// `(-A^3)^{-w} <L>` rewritten in half-powers of `t`.
pub fn jones_from_bracket(bracket: &LaurentPoly, writhe: i64) -> LaurentPoly {
    let sign = if writhe.rem_euclid(2) == 0 { 1 } else { -1 };
    let f = bracket.shift(-3 * writhe).scale(sign);
    debug_assert!(f.terms().all(|(e, _)| e % 2 == 0));
    f.map_exponents(Variable::T, |e| -e / 2)
}

/// Exchanges over and under at one crossing.
pub fn switch_crossing(d: &Diagram, i: usize) -> Result<Diagram, JonesError> {
    if i >= d.crossing_count() {
        return Err(JonesError::InvalidCrossing(i));
    }
    let mut crossings: Vec<[usize; 4]> = d.crossings().iter().map(|x| x.arcs).collect();
    let mut signs = d.signs().to_vec();
    crossings[i] = switch_arcs(crossings[i], signs[i]);
    signs[i] = -signs[i];
    Ok(Diagram::from_parts(crossings, signs, d.free_loops()).expect("switching keeps validity"))
}

/// Removes a crossing by the smoothing that respects orientation.
pub fn smooth_oriented(d: &Diagram, i: usize) -> Result<Diagram, JonesError> {
    if i >= d.crossing_count() {
        return Err(JonesError::InvalidCrossing(i));
    }
    let [a, b, c, dd] = d.crossings()[i].arcs;
    let (over_in, over_out) = if d.sign(i) > 0 { (dd, b) } else { (b, dd) };
    let n = d.arc_count();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        r
    }
    for (x, y) in [(a, over_out), (over_in, c)] {
        let (rx, ry) = (find(&mut parent, x), find(&mut parent, y));
        if rx != ry {
            let (lo, hi) = (rx.min(ry), rx.max(ry));
            parent[hi] = lo;
        }
    }
    let mut crossings: Vec<[usize; 4]> = Vec::new();
    let mut signs = Vec::new();
    for (k, x) in d.crossings().iter().enumerate() {
        if k != i {
            crossings.push(x.arcs.map(|arc| find(&mut parent, arc)));
            signs.push(d.sign(k));
        }
    }
    let mut used = vec![false; n];
    for x in &crossings {
        for &arc in x {
            used[arc] = true;
        }
    }
    let free = (0..n)
        .filter(|&r| find(&mut parent, r) == r && !used[r])
        .count();
    Ok(Diagram::from_parts(crossings, signs, d.free_loops() + free)
        .expect("smoothing keeps validity"))
}

/// Three diagrams that agree away from one crossing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkeinTriple {
    pub plus: Diagram,
    pub minus: Diagram,
    pub zero: Diagram,
}

pub fn skein_triple(d: &Diagram, crossing: usize) -> Result<SkeinTriple, JonesError> {
    let switched = switch_crossing(d, crossing)?;
    let zero = smooth_oriented(d, crossing)?;
    let (plus, minus) = if d.sign(crossing) > 0 {
        (d.clone(), switched)
    } else {
        (switched, d.clone())
    };
    Ok(SkeinTriple { plus, minus, zero })
}

/// Which diagram of a triple plays `L+` in the checked identity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SkeinLabeling {
    /// `t^{-1} V(L+) - t V(L-) = (t^{1/2} - t^{-1/2}) V(L0)` with `L+` the positive crossing.
    Standard,
    /// The same identity with the roles of `L+` and `L-` exchanged.
    Swapped,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SkeinCheck {
    pub holds: bool,
    pub residual: LaurentPoly,
}

pub fn verify_skein(tri: &SkeinTriple, labeling: SkeinLabeling) -> Result<SkeinCheck, JonesError> {
    let vp = jones(&tri.plus)?;
    let vm = jones(&tri.minus)?;
    let v0 = jones(&tri.zero)?;
    let (first, second) = match labeling {
        SkeinLabeling::Standard => (vp, vm),
        SkeinLabeling::Swapped => (vm, vp),
    };
    let t = |e: i64| LaurentPoly::monomial(Variable::T, e, 1);
    let lhs = &(&t(-2) * &first) - &(&t(2) * &second);
    let rhs = &(&t(1) - &t(-1)) * &v0;
    let residual = &lhs - &rhs;
    Ok(SkeinCheck {
        holds: residual.is_zero(),
        residual,
    })
}
