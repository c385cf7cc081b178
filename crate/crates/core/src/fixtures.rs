//! Reference diagrams with known words, and seeded random diagrams.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::braid::{braid_closure, BraidWord};
use crate::diagram::{parse_pd, Diagram};
use crate::wilson::{encode, EncodeError, EncodeOptions, WilsonWord};

#[derive(Debug, Clone)]
pub struct Fixture {
    pub name: &'static str,
    pub diagram: Diagram,
    /// starting arc per component with crossings, 0-based
    pub basepoints: Option<Vec<usize>>,
    /// published word, when there is one
    pub word: Option<&'static str>,
    /// expected net R exponent of the normal form
    pub e: i64,
}

impl Fixture {
    pub fn encode(&self) -> Result<WilsonWord, EncodeError> {
        encode(
            &self.diagram,
            &EncodeOptions {
                ordering: None,
                basepoints: self.basepoints.clone(),
            },
        )
    }
}

fn pd(text: &str) -> Diagram {
    parse_pd(text).expect("fixture PD is valid")
}

const TREFOIL: &str = "X[4,2,5,1] X[2,6,3,5] X[6,4,1,3]";

pub fn worked_examples() -> Vec<Fixture> {
    let fx = |name, text: &str, basepoints: Option<Vec<usize>>, word, e| Fixture {
        name,
        diagram: pd(text).with_name(name),
        basepoints,
        word,
        e,
    };
    vec![
        fx("fig1", "X[2,2,1,1]", Some(vec![0]), Some("W(z2,w)W(w,z2)W(z1,w)W(w,z1)"), 0),
        fx(
            "fig3b",
            "X[3,3,4,2] X[4,2,1,1]",
            Some(vec![1]),
            Some("W(z3,w2)W(w2,z3)W(z2,w2)W(w2,z4)W(z4,w1)W(w1,z2)W(z1,w1)W(w1,z1)"),
            0,
        ),
        fx(
            "fig4a",
            TREFOIL,
            Some(vec![0]),
            Some("W(z4,w1)W(w1,z2)W(z1,w1)W(w1,z5)W(z2,w2)W(w2,z6)W(z5,w2)W(w2,z3)W(z6,w3)W(w3,z4)W(z3,w3)W(w3,z1)"),
            1,
        ),
        Fixture {
            name: "fig4b",
            diagram: pd(TREFOIL).mirror().with_name("fig4b"),
            basepoints: Some(vec![0]),
            word: Some(
                "W(z1,w1)W(w1,z5)W(z4,w1)W(w1,z2)W(z5,w2)W(w2,z3)W(z2,w2)W(w2,z6)W(z3,w3)W(w3,z1)W(z6,w3)W(w3,z4)",
            ),
            e: -1,
        },
        fx(
            "fig6a",
            "X[3,2,4,1] X[4,2,3,1]",
            Some(vec![0, 3]),
            Some("W(z3,w1)W(w1,z2)W(z1,w1)W(w1,z4)W(z4,w2)W(w2,z1)W(z2,w2)W(w2,z3)"),
            0,
        ),
        fx(
            "fig7a",
            "X[3,2,4,1] X[2,3,1,4]",
            None,
            Some("W(z3,w1)W(w1,z2)W(z1,w1)W(w1,z4)W(z2,w2)W(w2,z3)W(z4,w2)W(w2,z1)"),
            -2,
        ),
        fx(
            "fig7b",
            "X[4,1,3,2] X[2,3,1,4]",
            None,
            Some("W(z4,w1)W(w1,z2)W(z1,w1)W(w1,z3)W(z2,w2)W(w2,z4)W(z3,w2)W(w2,z1)"),
            2,
        ),
    ]
}

/// Closure of `s1^(2n)` (sign `+1`) or `s1^(-2n)`: two unknots with linking number `±n`.
pub fn torus_link(n: usize, sign: i32) -> Fixture {
    let letters = vec![sign.signum(); 2 * n];
    let d = braid_closure(&BraidWord::new(2, letters).expect("valid braid"));
    let name = if sign > 0 { "torus_pos" } else { "torus_neg" };
    Fixture {
        name,
        diagram: d.with_name(format!("{name}_{n}")),
        basepoints: None,
        word: None,
        e: -2 * n as i64 * sign.signum() as i64,
    }
}

/// Closures of random braids on 2 or 3 strands with at most `max_crossings` letters.
/// Braids whose closure would contain a free loop are redrawn.
pub fn random_fixtures(seed: u64, count: usize, max_crossings: usize) -> Vec<Diagram> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let strands = rng.gen_range(2..=3usize);
        let len = rng.gen_range(1..=max_crossings.max(1));
        let letters: Vec<i32> = (0..len)
            .map(|_| {
                let g = rng.gen_range(1..strands as i32);
                if rng.gen_bool(0.5) {
                    g
                } else {
                    -g
                }
            })
            .collect();
        let b = BraidWord::new(strands, letters).expect("generators in range");
        let d = braid_closure(&b);
        if d.free_loops() == 0 && d.crossing_count() > 0 {
            out.push(d.with_name(format!("braid {b}")));
        }
    }
    out
}
