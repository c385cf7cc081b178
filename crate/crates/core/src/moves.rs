//! Reidemeister moves on PD diagrams.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diagram::{Diagram, Slot};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MoveError {
    #[error("move does not apply: {0}")]
    InvalidSite(String),
}

impl MoveError {
    pub fn code(&self) -> &'static str {
        "invalid_site"
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KinkTarget {
    Arc(usize),
    FreeLoop(usize),
}

/// One concrete move. Face indices refer to [`Diagram::faces`]; edge `i` of a face
/// is the arc leaving its `i`-th corner.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "move", rename_all = "snake_case")]
pub enum ReidemeisterMove {
    /// Adds a kink. Variants 0 and 3 give a positive crossing, 1 and 2 a negative one;
    /// 0/1 and 2/3 put the loop on opposite sides of the arc.
    AddKink {
        target: KinkTarget,
        variant: u8,
    },
    RemoveKink {
        crossing: usize,
    },
    /// Pushes a finger of edge `first` across edge `second` inside `face`.
    AddBigon {
        face: usize,
        first: usize,
        second: usize,
        first_over: bool,
    },
    /// Slides a strand across the crossing of the other two around a triangular face.
    Slide {
        face: usize,
    },
}

impl ReidemeisterMove {
    pub fn kind(&self) -> u8 {
        match self {
            ReidemeisterMove::AddKink { .. } | ReidemeisterMove::RemoveKink { .. } => 1,
            ReidemeisterMove::AddBigon { .. } => 2,
            ReidemeisterMove::Slide { .. } => 3,
        }
    }
}

pub fn apply_reidemeister(d: &Diagram, mv: &ReidemeisterMove) -> Result<Diagram, MoveError> {
    let out = match *mv {
        ReidemeisterMove::AddKink { target, variant } => add_kink(d, target, variant),
        ReidemeisterMove::RemoveKink { crossing } => remove_kink(d, crossing),
        ReidemeisterMove::AddBigon {
            face,
            first,
            second,
            first_over,
        } => add_bigon(d, face, first, second, first_over),
        ReidemeisterMove::Slide { face } => slide(d, face),
    }?;
    Ok(match d.name() {
        Some(n) => out.with_name(n),
        None => out,
    })
}

/// Every move that applies to `d`, in a fixed order.
pub fn reidemeister_sites(d: &Diagram) -> Vec<ReidemeisterMove> {
    let mut sites = Vec::new();
    for arc in 0..d.arc_count() {
        for variant in 0..4 {
            sites.push(ReidemeisterMove::AddKink {
                target: KinkTarget::Arc(arc),
                variant,
            });
        }
    }
    for i in 0..d.free_loops() {
        for variant in 0..4 {
            sites.push(ReidemeisterMove::AddKink {
                target: KinkTarget::FreeLoop(i),
                variant,
            });
        }
    }
    for c in 0..d.crossing_count() {
        if kink_loop_position(d, c).is_some() {
            sites.push(ReidemeisterMove::RemoveKink { crossing: c });
        }
    }
    let faces = d.faces();
    for (f, face) in faces.iter().enumerate() {
        let n = face.len();
        for i in 0..n {
            for j in i + 1..n {
                if edge_arc(d, &face.corners, i) == edge_arc(d, &face.corners, j) {
                    continue;
                }
                for first_over in [true, false] {
                    sites.push(ReidemeisterMove::AddBigon {
                        face: f,
                        first: i,
                        second: j,
                        first_over,
                    });
                }
            }
        }
        if slide_plan(d, &face.corners).is_ok() {
            sites.push(ReidemeisterMove::Slide { face: f });
        }
    }
    sites
}

/// Moves of one kind (1, 2 or 3).
pub fn sites_of_kind(d: &Diagram, kind: u8) -> Vec<ReidemeisterMove> {
    reidemeister_sites(d)
        .into_iter()
        .filter(|m| m.kind() == kind)
        .collect()
}

fn raw_crossings(d: &Diagram) -> Vec<[usize; 4]> {
    d.crossings().iter().map(|x| x.arcs).collect()
}

fn edge_arc(d: &Diagram, corners: &[Slot], i: usize) -> usize {
    let c = corners[i];
    d.arc_at(Slot::new(c.crossing, c.pos + 1))
}

fn kink_crossing(x1: usize, x2: usize, l: usize, variant: u8) -> ([usize; 4], i8) {
    match variant {
        0 => ([x1, x2, l, l], 1),
        1 => ([x1, l, l, x2], -1),
        2 => ([l, x1, x2, l], -1),
        _ => ([l, l, x2, x1], 1),
    }
}

fn add_kink(d: &Diagram, target: KinkTarget, variant: u8) -> Result<Diagram, MoveError> {
    if variant > 3 {
        return Err(MoveError::InvalidSite(format!("kink variant {variant}")));
    }
    let mut crossings = raw_crossings(d);
    let mut signs = d.signs().to_vec();
    let n = d.arc_count();
    let mut unknots = d.free_loops();
    match target {
        KinkTarget::Arc(x) => {
            if x >= n {
                return Err(MoveError::InvalidSite(format!("no arc {}", x + 1)));
            }
            let head = d.head(x);
            let (x2, l) = (n, n + 1);
            crossings[head.crossing][head.pos] = x2;
            let (arcs, s) = kink_crossing(x, x2, l, variant);
            crossings.push(arcs);
            signs.push(s);
        }
        KinkTarget::FreeLoop(i) => {
            if i >= unknots {
                return Err(MoveError::InvalidSite(format!("no free loop {i}")));
            }
            unknots -= 1;
            let (x, l) = (n, n + 1);
            let (arcs, s) = kink_crossing(x, x, l, variant);
            crossings.push(arcs);
            signs.push(s);
        }
    }
    Diagram::from_parts(crossings, signs, unknots)
        .map_err(|e| MoveError::InvalidSite(e.to_string()))
}

/// Position `p` such that one arc occupies both `p` and `p + 1`.
fn kink_loop_position(d: &Diagram, c: usize) -> Option<usize> {
    let arcs = d.crossings()[c].arcs;
    (0..4).find(|&p| arcs[p] == arcs[(p + 1) % 4])
}

fn remove_kink(d: &Diagram, c: usize) -> Result<Diagram, MoveError> {
    if c >= d.crossing_count() {
        return Err(MoveError::InvalidSite(format!("no crossing {c}")));
    }
    let p = kink_loop_position(d, c)
        .ok_or_else(|| MoveError::InvalidSite(format!("crossing {c} is not a kink")))?;
    let arcs = d.crossings()[c].arcs;
    let (u, v) = (arcs[(p + 2) % 4], arcs[(p + 3) % 4]);
    let mut unknots = d.free_loops();
    let mut crossings = raw_crossings(d);
    crossings.remove(c);
    let mut signs = d.signs().to_vec();
    signs.remove(c);
    if u == v {
        unknots += 1;
    } else {
        let (keep, drop) = (u.min(v), u.max(v));
        for x in crossings.iter_mut() {
            for a in x.iter_mut() {
                if *a == drop {
                    *a = keep;
                }
            }
        }
    }
    Diagram::from_parts(crossings, signs, unknots)
        .map_err(|e| MoveError::InvalidSite(e.to_string()))
}

/// Orders four pieces meeting at a crossing into PD form.
/// `ccw` lists the pieces counterclockwise; `incoming[i]` marks the piece entering the
/// crossing and `strand[i]` is 0 or 1, with strand `under` passing below.
fn pd_from_ccw(
    ccw: [usize; 4],
    incoming: [bool; 4],
    strand: [u8; 4],
    under: u8,
) -> ([usize; 4], i8) {
    let start = (0..4)
        .find(|&i| strand[i] == under && incoming[i])
        .expect("under-strand enters once");
    let arcs = [0, 1, 2, 3].map(|k| ccw[(start + k) % 4]);
    let over_in = (0..4)
        .find(|&k| strand[(start + k) % 4] != under && incoming[(start + k) % 4])
        .expect("over-strand enters once");
    (arcs, if over_in == 3 { 1 } else { -1 })
}

fn add_bigon(
    d: &Diagram,
    face: usize,
    first: usize,
    second: usize,
    first_over: bool,
) -> Result<Diagram, MoveError> {
    let faces = d.faces();
    let corners = &faces
        .get(face)
        .ok_or_else(|| MoveError::InvalidSite(format!("no face {face}")))?
        .corners;
    let len = corners.len();
    if first >= len || second >= len || first == second {
        return Err(MoveError::InvalidSite(format!(
            "edges {first},{second} of face {face}"
        )));
    }
    let walk = |i: usize| {
        let c = corners[i];
        (Slot::new(c.crossing, c.pos + 1), corners[(i + 1) % len])
    };
    let (x0, x1) = walk(first);
    let (y0, y1) = walk(second);
    let (x, y) = (d.arc_at(x0), d.arc_at(y0));
    if x == y {
        return Err(MoveError::InvalidSite("edges share an arc".into()));
    }

    let mut crossings = raw_crossings(d);
    let mut signs = d.signs().to_vec();
    let mut next = d.arc_count();
    let mut fresh = || {
        next += 1;
        next - 1
    };

    // pieces along the walk direction: (at walk start, middle, at walk end)
    let mut split = |arc: usize, start: Slot, end: Slot| {
        let mid = fresh();
        let last = fresh();
        let forward = d.tail(arc) == start;
        let head = if forward { end } else { start };
        crossings[head.crossing][head.pos] = last;
        if forward {
            ((arc, mid, last), true)
        } else {
            ((last, mid, arc), false)
        }
    };
    let ((xe, xm, xw), x_fwd) = split(x, x0, x1);
    let ((yw, ym, ye), y_fwd) = split(y, y0, y1);

    let under = if first_over { 1 } else { 0 };
    // west crossing, counterclockwise: ym, xm, yw, xw
    let west = pd_from_ccw(
        [ym, xm, yw, xw],
        [!y_fwd, x_fwd, y_fwd, !x_fwd],
        [1, 0, 1, 0],
        under,
    );
    // east crossing, counterclockwise: ye, xm, ym, xe
    let east = pd_from_ccw(
        [ye, xm, ym, xe],
        [!y_fwd, !x_fwd, y_fwd, x_fwd],
        [1, 0, 1, 0],
        under,
    );
    for (arcs, s) in [west, east] {
        crossings.push(arcs);
        signs.push(s);
    }
    Diagram::from_parts(crossings, signs, d.free_loops())
        .map_err(|e| MoveError::InvalidSite(e.to_string()))
}

struct SlidePlan {
    corners: [Slot; 3],
    /// travels from the previous corner towards this one
    forward: [bool; 3],
    mids: [usize; 3],
    /// ext arc beyond the earlier vertex and beyond the later vertex of each strand
    ext_before: [usize; 3],
    ext_after: [usize; 3],
    /// strand i passes under strand i+1 at corner i
    under_first: [bool; 3],
}

fn slide_plan(d: &Diagram, corners: &[Slot]) -> Result<SlidePlan, MoveError> {
    if corners.len() != 3 {
        return Err(MoveError::InvalidSite("face is not a triangle".into()));
    }
    let cs = [corners[0], corners[1], corners[2]];
    let (a, b, c) = (cs[0].crossing, cs[1].crossing, cs[2].crossing);
    if a == b || b == c || a == c {
        return Err(MoveError::InvalidSite("triangle repeats a crossing".into()));
    }
    let prev = |i: usize| (i + 2) % 3;
    let mut plan = SlidePlan {
        corners: cs,
        forward: [false; 3],
        mids: [0; 3],
        ext_before: [0; 3],
        ext_after: [0; 3],
        under_first: [false; 3],
    };
    // strand i runs through corners i-1 and i
    for i in 0..3 {
        let here = cs[i];
        let before = cs[prev(i)];
        plan.mids[i] = d.arc_at(here);
        plan.forward[i] = d.is_incoming(here);
        plan.ext_after[i] = d.arc_at(Slot::new(here.crossing, here.pos + 2));
        plan.ext_before[i] = d.arc_at(Slot::new(before.crossing, before.pos + 3));
        plan.under_first[i] = here.pos.is_multiple_of(2);
    }
    if plan.under_first.iter().all(|&u| u == plan.under_first[0]) {
        return Err(MoveError::InvalidSite("triangle is alternating".into()));
    }
    Ok(plan)
}

fn slide(d: &Diagram, face: usize) -> Result<Diagram, MoveError> {
    let faces = d.faces();
    let corners = &faces
        .get(face)
        .ok_or_else(|| MoveError::InvalidSite(format!("no face {face}")))?
        .corners;
    let plan = slide_plan(d, corners)?;
    // triangle vertices, clockwise in corner order
    let vert = |i: usize| {
        let t = PI / 2.0 - 2.0 * PI * i as f64 / 3.0;
        (t.cos(), t.sin())
    };
    let dir = |i: usize| {
        let (p, q) = (vert((i + 2) % 3), vert(i));
        (q.0 - p.0, q.1 - p.1)
    };
    let angle = |v: (f64, f64)| v.1.atan2(v.0);

    let mut crossings = raw_crossings(d);
    let mut signs = d.signs().to_vec();
    for i in 0..3 {
        let j = (i + 1) % 3;
        let (di, dj) = (dir(i), dir(j));
        // after the slide, strand i meets corner i before corner i-1, and
        // strand j meets corner j before corner i
        let pieces = [
            (plan.ext_before[i], (-di.0, -di.1), 0u8),
            (plan.mids[i], di, 0),
            (plan.ext_after[j], dj, 1),
            (plan.mids[j], (-dj.0, -dj.1), 1),
        ];
        let travel = |strand: u8| {
            let (k, v) = if strand == 0 { (i, di) } else { (j, dj) };
            if plan.forward[k] {
                v
            } else {
                (-v.0, -v.1)
            }
        };
        let mut order = [0usize, 1, 2, 3];
        order.sort_by(|&p, &q| angle(pieces[p].1).total_cmp(&angle(pieces[q].1)));
        let ccw = order.map(|k| pieces[k].0);
        // a piece behind the direction of travel enters the crossing
        let incoming = order.map(|k| {
            let (_, v, strand) = pieces[k];
            let t = travel(strand);
            v.0 * t.0 + v.1 * t.1 < 0.0
        });
        let strand = order.map(|k| pieces[k].2);
        let under = if plan.under_first[i] { 0 } else { 1 };
        let (arcs, s) = pd_from_ccw(ccw, incoming, strand, under);
        let c = plan.corners[i].crossing;
        crossings[c] = arcs;
        signs[c] = s;
    }
    Diagram::from_parts(crossings, signs, d.free_loops())
        .map_err(|e| MoveError::InvalidSite(e.to_string()))
}
