use std::fmt;

use serde::{Deserialize, Serialize};

use crate::diagram::{Diagram, DiagramError};

/// A word in the braid generators; `+i` is sigma_i, `-i` its inverse.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BraidWord {
    strands: usize,
    letters: Vec<i32>,
}

impl BraidWord {
    pub fn new(strands: usize, letters: Vec<i32>) -> Result<BraidWord, DiagramError> {
        if strands == 0 {
            return Err(DiagramError::IndexOutOfRange { index: 0, strands });
        }
        for &l in &letters {
            if l == 0 || l.unsigned_abs() as usize >= strands {
                return Err(DiagramError::IndexOutOfRange {
                    index: l as i64,
                    strands,
                });
            }
        }
        Ok(BraidWord { strands, letters })
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn letters(&self) -> &[i32] {
        &self.letters
    }

    /// Image of each position under the underlying permutation.
    pub fn permutation(&self) -> Vec<usize> {
        let mut perm: Vec<usize> = (0..self.strands).collect();
        for &l in &self.letters {
            let i = l.unsigned_abs() as usize - 1;
            perm.swap(i, i + 1);
        }
        // perm[p] = starting strand now at position p; invert to start -> end
        let mut image = vec![0; self.strands];
        for (pos, &start) in perm.iter().enumerate() {
            image[start] = pos;
        }
        image
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let letters: Vec<String> = self.letters.iter().map(|l| l.to_string()).collect();
        write!(f, "{} ({} strands)", letters.join(" "), self.strands)
    }
}

pub fn parse_braid(text: &str, strands: usize) -> Result<BraidWord, DiagramError> {
    let letters = text
        .split(|c: char| c.is_whitespace() || c == ',')
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<i32>()
                .map_err(|_| DiagramError::MalformedSyntax(format!("braid letter {s:?}")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    BraidWord::new(strands, letters)
}

/// Closes the braid with strands running upward. Positions no letter touches
/// become free unknots.
pub fn braid_closure(b: &BraidWord) -> Diagram {
    let n = b.strands;
    let mut next_arc = n;
    let mut current: Vec<usize> = (0..n).collect();
    let mut crossings = Vec::with_capacity(b.letters.len());
    let mut signs = Vec::with_capacity(b.letters.len());
    for &l in &b.letters {
        let i = l.unsigned_abs() as usize - 1;
        let (left, right) = (current[i], current[i + 1]);
        // left strand moves right, right strand moves left
        let left_out = next_arc;
        let right_out = next_arc + 1;
        next_arc += 2;
        if l > 0 {
            crossings.push([right, left_out, right_out, left]);
            signs.push(1);
        } else {
            crossings.push([left, right, left_out, right_out]);
            signs.push(-1);
        }
        current[i] = right_out;
        current[i + 1] = left_out;
    }

    let mut parent: Vec<usize> = (0..next_arc).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut y = x;
        while p[y] != r {
            let nx = p[y];
            p[y] = r;
            y = nx;
        }
        r
    }
    let mut unknots = 0;
    for (pos, &top) in current.iter().enumerate() {
        if top == pos {
            unknots += 1;
            continue;
        }
        let a = find(&mut parent, top);
        let b = find(&mut parent, pos);
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        parent[hi] = lo;
    }
    let crossings = crossings
        .into_iter()
        .map(|x| x.map(|a| find(&mut parent, a)))
        .collect();
    Diagram::from_parts(crossings, signs, unknots).expect("braid closures are valid diagrams")
}
