//! Oriented planar diagrams in PD notation.
//!
//! A crossing `X[a,b,c,d]` lists its four arcs counterclockwise starting at the
//! incoming under-strand, so the under-strand always runs `a -> c`. The over-strand
//! runs `d -> b` on a positive crossing and `b -> d` on a negative one.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DiagramError {
    #[error("malformed diagram syntax: {0}")]
    MalformedSyntax(String),
    #[error("arc {arc} appears {count} time(s), expected 2")]
    ArcCountError { arc: i64, count: usize },
    #[error("arc cycles are inconsistent: {0}")]
    DisconnectedArcCycle(String),
    #[error("braid generator {index} out of range for {strands} strand(s)")]
    IndexOutOfRange { index: i64, strands: usize },
    #[error("no crossing with index {0}")]
    InvalidCrossing(usize),
}

impl DiagramError {
    pub fn code(&self) -> &'static str {
        match self {
            DiagramError::MalformedSyntax(_) => "malformed_syntax",
            DiagramError::ArcCountError { .. } => "arc_count_error",
            DiagramError::DisconnectedArcCycle(_) => "disconnected_arc_cycle",
            DiagramError::IndexOutOfRange { .. } => "index_out_of_range",
            DiagramError::InvalidCrossing(_) => "invalid_crossing",
        }
    }
}

/// One crossing: arc ids counterclockwise from the incoming under-strand.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PdCrossing {
    pub arcs: [usize; 4],
}

impl PdCrossing {
    pub fn new(arcs: [usize; 4]) -> Self {
        PdCrossing { arcs }
    }
}

/// A position on a crossing: `pos` 0 and 2 are the under-strand, 1 and 3 the over-strand.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Slot {
    pub crossing: usize,
    pub pos: usize,
}

impl Slot {
    pub fn new(crossing: usize, pos: usize) -> Self {
        Slot {
            crossing,
            pos: pos % 4,
        }
    }

    pub fn opposite(self) -> Slot {
        Slot::new(self.crossing, self.pos + 2)
    }

    pub fn is_over(self) -> bool {
        self.pos % 2 == 1
    }
}

/// A face of the planar projection, as the cyclic list of its corners.
///
/// Corner `(c, p)` is the region between positions `p` and `p + 1` at crossing `c`;
/// the boundary edge leaving that corner is the arc at `(c, p + 1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Face {
    pub corners: Vec<Slot>,
}

impl Face {
    pub fn len(&self) -> usize {
        self.corners.len()
    }

    pub fn is_empty(&self) -> bool {
        self.corners.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagram {
    crossings: Vec<PdCrossing>,
    signs: Vec<i8>,
    unknots: usize,
    components: Vec<Vec<usize>>,
    arc_component: Vec<usize>,
    heads: Vec<Slot>,
    tails: Vec<Slot>,
    name: Option<String>,
}

impl Diagram {
    /// `count` disjoint unknots.
    pub fn unknots(count: usize) -> Diagram {
        Diagram {
            crossings: Vec::new(),
            signs: Vec::new(),
            unknots: count,
            components: Vec::new(),
            arc_component: Vec::new(),
            heads: Vec::new(),
            tails: Vec::new(),
            name: None,
        }
    }

    /// Builds a diagram from crossings with known signs. Arc ids are renumbered densely,
    /// preserving their relative order.
    pub fn from_parts(
        crossings: Vec<[usize; 4]>,
        signs: Vec<i8>,
        unknots: usize,
    ) -> Result<Diagram, DiagramError> {
        if crossings.len() != signs.len() {
            return Err(DiagramError::MalformedSyntax(format!(
                "{} crossings but {} signs",
                crossings.len(),
                signs.len()
            )));
        }
        if let Some(s) = signs.iter().find(|s| **s != 1 && **s != -1) {
            return Err(DiagramError::MalformedSyntax(format!("crossing sign {s}")));
        }
        let crossings = densify(crossings)?;
        let n_arcs = crossings.len() * 2;
        let mut heads: Vec<Option<Slot>> = vec![None; n_arcs];
        let mut tails: Vec<Option<Slot>> = vec![None; n_arcs];
        for (i, x) in crossings.iter().enumerate() {
            let over_in = if signs[i] > 0 { 3 } else { 1 };
            for pos in 0..4 {
                let arc = x.arcs[pos];
                let incoming = pos == 0 || pos == over_in;
                let slot = Slot::new(i, pos);
                let target = if incoming {
                    &mut heads[arc]
                } else {
                    &mut tails[arc]
                };
                if target.is_some() {
                    return Err(DiagramError::DisconnectedArcCycle(format!(
                        "arc {} is {} twice",
                        arc + 1,
                        if incoming { "entered" } else { "left" }
                    )));
                }
                *target = Some(slot);
            }
        }
        let heads: Vec<Slot> = heads
            .into_iter()
            .map(|s| s.expect("two ends per arc"))
            .collect();
        let tails: Vec<Slot> = tails
            .into_iter()
            .map(|s| s.expect("two ends per arc"))
            .collect();

        let mut arc_component = vec![usize::MAX; n_arcs];
        let mut components = Vec::new();
        for start in 0..n_arcs {
            if arc_component[start] != usize::MAX {
                continue;
            }
            let id = components.len();
            let mut cycle = Vec::new();
            let mut arc = start;
            loop {
                arc_component[arc] = id;
                cycle.push(arc);
                let exit = heads[arc].opposite();
                arc = crossings[exit.crossing].arcs[exit.pos];
                if arc == start {
                    break;
                }
                if arc_component[arc] != usize::MAX {
                    return Err(DiagramError::DisconnectedArcCycle(format!(
                        "traversal from arc {} does not close",
                        start + 1
                    )));
                }
            }
            components.push(cycle);
        }

        Ok(Diagram {
            crossings,
            signs,
            unknots,
            components,
            arc_component,
            heads,
            tails,
            name: None,
        })
    }

    /// Builds a diagram from unsigned PD crossings, deriving the orientation of every
    /// component. Components that only pass over get the orientation along which
    /// arc ids increase.
    pub fn from_pd(crossings: Vec<[usize; 4]>, unknots: usize) -> Result<Diagram, DiagramError> {
        let dense = densify(crossings)?;
        let n_arcs = dense.len() * 2;
        // slots[arc] = the two slots holding that arc
        let mut slots: Vec<Vec<Slot>> = vec![Vec::new(); n_arcs];
        for (i, x) in dense.iter().enumerate() {
            for pos in 0..4 {
                slots[x.arcs[pos]].push(Slot::new(i, pos));
            }
        }
        // incoming[c][p]: Some(true) if the strand enters crossing c at position p
        let mut incoming: Vec<[Option<bool>; 4]> =
            vec![[Some(true), None, Some(false), None]; dense.len()];
        let arc_at = |s: Slot| dense[s.crossing].arcs[s.pos];
        let other_slot = |s: Slot| -> Slot {
            let pair = &slots[arc_at(s)];
            if pair[0] == s {
                pair[1]
            } else {
                pair[0]
            }
        };

        let mut pending: Vec<Slot> = (0..dense.len())
            .flat_map(|c| [Slot::new(c, 0), Slot::new(c, 2)])
            .collect();
        loop {
            while let Some(s) = pending.pop() {
                let dir = incoming[s.crossing][s.pos].expect("queued slots are oriented");
                // the other end of the same arc has the opposite role
                let o = other_slot(s);
                let through = s.opposite();
                for (slot, want) in [(o, !dir), (through, !dir)] {
                    match incoming[slot.crossing][slot.pos] {
                        None => {
                            incoming[slot.crossing][slot.pos] = Some(want);
                            pending.push(slot);
                        }
                        Some(have) if have != want => {
                            return Err(DiagramError::DisconnectedArcCycle(format!(
                                "arc {} cannot be oriented consistently",
                                arc_at(slot) + 1
                            )));
                        }
                        Some(_) => {}
                    }
                }
            }
            // an over-only component: orient so that arc ids increase along it
            let free = (0..n_arcs).find(|&a| {
                slots[a]
                    .iter()
                    .all(|s| incoming[s.crossing][s.pos].is_none())
            });
            let Some(arc) = free else { break };
            let (s0, s1) = (slots[arc][0], slots[arc][1]);
            let next0 = arc_at(s0.opposite());
            let next1 = arc_at(s1.opposite());
            let head = if next1 < next0 { s1 } else { s0 };
            incoming[head.crossing][head.pos] = Some(true);
            pending.push(head);
        }

        let signs = incoming
            .iter()
            .map(|d| if d[3] == Some(true) { 1 } else { -1 })
            .collect();
        let raw = dense.iter().map(|x| x.arcs).collect();
        Diagram::from_parts(raw, signs, unknots)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Diagram {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn crossings(&self) -> &[PdCrossing] {
        &self.crossings
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    pub fn sign(&self, crossing: usize) -> i8 {
        self.signs[crossing]
    }

    pub fn arc_count(&self) -> usize {
        self.heads.len()
    }

    /// Crossing-less unknot components.
    pub fn free_loops(&self) -> usize {
        self.unknots
    }

    /// Arc cycles in traversal order. Free loops are not listed.
    pub fn arc_cycles(&self) -> &[Vec<usize>] {
        &self.components
    }

    pub fn component_count(&self) -> usize {
        self.components.len() + self.unknots
    }

    pub fn component_of(&self, arc: usize) -> usize {
        self.arc_component[arc]
    }

    pub fn arc_at(&self, slot: Slot) -> usize {
        self.crossings[slot.crossing].arcs[slot.pos]
    }

    /// Slot where `arc` ends.
    pub fn head(&self, arc: usize) -> Slot {
        self.heads[arc]
    }

    /// Slot where `arc` starts.
    pub fn tail(&self, arc: usize) -> Slot {
        self.tails[arc]
    }

    pub fn is_incoming(&self, slot: Slot) -> bool {
        self.heads[self.arc_at(slot)] == slot
    }

    pub fn other_end(&self, slot: Slot) -> Slot {
        let arc = self.arc_at(slot);
        if self.heads[arc] == slot {
            self.tails[arc]
        } else {
            self.heads[arc]
        }
    }

    pub fn next_arc(&self, arc: usize) -> usize {
        self.arc_at(self.heads[arc].opposite())
    }

    pub fn writhe(&self) -> i64 {
        self.signs.iter().map(|&s| s as i64).sum()
    }

    /// Swaps over and under at every crossing, keeping orientations.
    pub fn mirror(&self) -> Diagram {
        let crossings = self
            .crossings
            .iter()
            .zip(&self.signs)
            .map(|(x, &s)| switch_arcs(x.arcs, s))
            .collect();
        let signs = self.signs.iter().map(|s| -s).collect();
        let mut out =
            Diagram::from_parts(crossings, signs, self.unknots).expect("mirror preserves validity");
        out.name = self.name.clone();
        out
    }

    /// Faces of the projection. A split diagram yields one outer face per piece.
    pub fn faces(&self) -> Vec<Face> {
        let mut seen = vec![[false; 4]; self.crossings.len()];
        let mut faces = Vec::new();
        for c in 0..self.crossings.len() {
            for p in 0..4 {
                if seen[c][p] {
                    continue;
                }
                let mut corners = Vec::new();
                let mut corner = Slot::new(c, p);
                while !seen[corner.crossing][corner.pos] {
                    seen[corner.crossing][corner.pos] = true;
                    corners.push(corner);
                    corner = self.other_end(Slot::new(corner.crossing, corner.pos + 1));
                }
                faces.push(Face { corners });
            }
        }
        faces
    }

    /// Number of connected pieces of the projection, counting free loops.
    pub fn split_pieces(&self) -> usize {
        let n = self.crossings.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            p[x] = r;
            r
        }
        for arc in 0..self.arc_count() {
            let a = find(&mut parent, self.heads[arc].crossing);
            let b = find(&mut parent, self.tails[arc].crossing);
            parent[a] = b;
        }
        let roots = (0..n).filter(|&i| find(&mut parent, i) == i).count();
        roots + self.unknots
    }

    pub fn to_pd_string(&self) -> String {
        self.crossings
            .iter()
            .map(|x| {
                let [a, b, c, d] = x.arcs;
                format!("X[{},{},{},{}]", a + 1, b + 1, c + 1, d + 1)
            })
            .collect::<Vec<_>>()
            .join(" ")
    }

    pub fn to_json(&self) -> DiagramJson {
        DiagramJson {
            crossings: self
                .crossings
                .iter()
                .map(|x| x.arcs.map(|a| a + 1))
                .collect(),
            signs: Some(self.signs.clone()),
            components: self
                .components
                .iter()
                .map(|c| c.iter().map(|a| a + 1).collect())
                .collect(),
            unknots: self.unknots,
            name: self.name.clone(),
        }
    }

    pub fn from_json(json: &DiagramJson) -> Result<Diagram, DiagramError> {
        let d = match &json.signs {
            Some(signs) => {
                Diagram::from_parts(json.crossings.clone(), signs.clone(), json.unknots)?
            }
            None => Diagram::from_pd(json.crossings.clone(), json.unknots)?,
        };
        Ok(match &json.name {
            Some(n) => d.with_name(n.clone()),
            None => d,
        })
    }
}

impl fmt::Display for Diagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_pd_string())?;
        if self.unknots > 0 {
            write!(f, " + {} unknot(s)", self.unknots)?;
        }
        Ok(())
    }
}

/// Serialized form. Arc ids are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagramJson {
    pub crossings: Vec<[usize; 4]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub signs: Option<Vec<i8>>,
    #[serde(default)]
    pub components: Vec<Vec<usize>>,
    #[serde(default)]
    pub unknots: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
}

/// Crossing arcs after exchanging the over- and under-strands.
pub(crate) fn switch_arcs(arcs: [usize; 4], sign: i8) -> [usize; 4] {
    let [a, b, c, d] = arcs;
    if sign > 0 {
        [d, a, b, c]
    } else {
        [b, c, d, a]
    }
}

fn densify(crossings: Vec<[usize; 4]>) -> Result<Vec<PdCrossing>, DiagramError> {
    let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
    for x in &crossings {
        for &a in x {
            *counts.entry(a).or_default() += 1;
        }
    }
    if let Some((&arc, &count)) = counts.iter().find(|(_, &c)| c != 2) {
        return Err(DiagramError::ArcCountError {
            arc: arc as i64,
            count,
        });
    }
    let index: BTreeMap<usize, usize> = counts.keys().enumerate().map(|(i, &a)| (a, i)).collect();
    Ok(crossings
        .into_iter()
        .map(|x| PdCrossing::new(x.map(|a| index[&a])))
        .collect())
}

/// Parses `X[a,b,c,d]` tuples separated by whitespace or commas.
/// An optional `PD[...]` wrapper is accepted.
pub fn parse_pd(text: &str) -> Result<Diagram, DiagramError> {
    parse_pd_with_unknots(text, 0)
}

pub fn parse_pd_with_unknots(text: &str, unknots: usize) -> Result<Diagram, DiagramError> {
    let mut body = text.trim();
    if let Some(inner) = body.strip_prefix("PD[").and_then(|s| s.strip_suffix(']')) {
        body = inner;
    }
    let bytes = body.as_bytes();
    let mut i = 0;
    let mut crossings = Vec::new();
    let err = |at: usize, msg: &str| DiagramError::MalformedSyntax(format!("{msg} at byte {at}"));
    while i < bytes.len() {
        let ch = bytes[i];
        if ch.is_ascii_whitespace() || ch == b',' {
            i += 1;
            continue;
        }
        if ch != b'X' {
            return Err(err(i, "expected 'X['"));
        }
        i += 1;
        if bytes.get(i) != Some(&b'[') {
            return Err(err(i, "expected '['"));
        }
        let close = body[i..]
            .find(']')
            .map(|k| i + k)
            .ok_or_else(|| err(i, "unclosed '['"))?;
        let inner = &body[i + 1..close];
        let nums: Vec<&str> = inner
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|s| !s.is_empty())
            .collect();
        if nums.len() != 4 {
            return Err(err(i, "crossing needs exactly 4 arcs"));
        }
        let mut arcs = [0usize; 4];
        for (k, s) in nums.iter().enumerate() {
            let v: i64 = s.parse().map_err(|_| err(i, "arc id is not an integer"))?;
            if v < 1 {
                return Err(err(i, "arc ids must be positive"));
            }
            arcs[k] = v as usize;
        }
        crossings.push(arcs);
        i = close + 1;
    }
    Diagram::from_pd(crossings, unknots)
}

#[cfg(test)]
mod tests {
    use super::*;

    // Independent component count: walk arcs as an undirected 2-regular structure
    // where an arc continues to the arc diagonally across each crossing.
    fn brute_components(crossings: &[[usize; 4]]) -> usize {
        let mut ends: BTreeMap<usize, Vec<(usize, usize)>> = BTreeMap::new();
        for (i, x) in crossings.iter().enumerate() {
            for (p, &arc) in x.iter().enumerate() {
                ends.entry(arc).or_default().push((i, p));
            }
        }
        let mut seen = std::collections::BTreeSet::new();
        let mut count = 0;
        for &start in ends.keys() {
            if seen.contains(&start) {
                continue;
            }
            count += 1;
            let mut stack = vec![start];
            while let Some(a) = stack.pop() {
                if !seen.insert(a) {
                    continue;
                }
                for &(c, p) in &ends[&a] {
                    stack.push(crossings[c][(p + 2) % 4]);
                }
            }
        }
        count
    }

    #[test]
    fn trefoil_pd() {
        let raw = [[1, 4, 2, 5], [3, 6, 4, 1], [5, 2, 6, 3]];
        assert_eq!(brute_components(&raw), 1);
        let d = parse_pd("X[1,4,2,5] X[3,6,4,1] X[5,2,6,3]").unwrap();
        assert_eq!(d.crossing_count(), 3);
        assert_eq!(d.component_count(), 1);
        assert_eq!(d.arc_cycles()[0].len(), 6);
    }

    #[test]
    fn three_cycle_pd() {
        // opposite positions pair arcs {1,2}, {3,4}, {5,6}
        let raw = [[1, 4, 2, 3], [3, 6, 4, 5], [5, 2, 6, 1]];
        assert_eq!(brute_components(&raw), 3);
        let d = parse_pd("X[1,4,2,3] X[3,6,4,5] X[5,2,6,1]").unwrap();
        assert_eq!(d.crossing_count(), 3);
        assert_eq!(d.component_count(), 3);
        assert!(d.arc_cycles().iter().all(|c| c.len() == 2));
    }

    #[test]
    fn empty_input_is_empty_diagram() {
        let d = parse_pd("").unwrap();
        assert_eq!(d.crossing_count(), 0);
        assert_eq!(d.component_count(), 0);
        assert_eq!(parse_pd_with_unknots("", 2).unwrap().component_count(), 2);
    }

    #[test]
    fn arc_count_error() {
        match parse_pd("X[1,4,2,3] X[3,6,4,5]") {
            Err(DiagramError::ArcCountError { count: 1, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn malformed() {
        for bad in [
            "Y[1,2,3,4]",
            "X[1,2,3]",
            "X[1,2,3,a]",
            "X[1,2,3,4",
            "X[0,1,1,0]",
        ] {
            let e = parse_pd(bad).unwrap_err();
            assert_eq!(e.code(), "malformed_syntax", "{bad}");
        }
    }

    #[test]
    fn pd_wrapper_and_commas() {
        let d = parse_pd("PD[X[1,4,2,3], X[3,6,4,5], X[5,2,6,1]]").unwrap();
        assert_eq!(d.crossing_count(), 3);
    }

    #[test]
    fn kink_with_repeated_arcs() {
        let d = parse_pd("X[2,2,1,1]").unwrap();
        assert_eq!(d.component_count(), 1);
        assert_eq!(d.signs(), &[1]);
        let d = parse_pd("X[2,1,1,2]").unwrap();
        assert_eq!(d.signs(), &[-1]);
    }

    #[test]
    fn inconsistent_orientation() {
        // both under-strands enter along arc 1
        let e = parse_pd("X[1,3,2,4] X[1,4,2,3]").unwrap_err();
        assert_eq!(e.code(), "disconnected_arc_cycle");
    }

    #[test]
    fn mirror_involution_and_writhe() {
        let d = parse_pd("X[1,4,2,5] X[3,6,4,1] X[5,2,6,3]").unwrap();
        let m = d.mirror();
        assert_eq!(m.writhe(), -d.writhe());
        assert_eq!(m.mirror(), d);
        assert_eq!(Diagram::unknots(1).mirror(), Diagram::unknots(1));
    }

    #[test]
    fn euler_characteristic_of_faces() {
        for text in [
            "X[1,4,2,5] X[3,6,4,1] X[5,2,6,3]",
            "X[2,2,1,1]",
            "X[4,2,5,1] X[8,6,1,5] X[6,3,7,4] X[2,7,3,8]",
        ] {
            let d = parse_pd(text).unwrap();
            assert_eq!(d.faces().len(), d.crossing_count() + 2, "{text}");
        }
    }

    #[test]
    fn json_round_trip() {
        let d = parse_pd("X[1,4,2,5] X[3,6,4,1] X[5,2,6,3]")
            .unwrap()
            .with_name("3_1");
        let text = serde_json::to_string(&d.to_json()).unwrap();
        let back: DiagramJson = serde_json::from_str(&text).unwrap();
        assert_eq!(Diagram::from_json(&back).unwrap(), d);
    }
}
