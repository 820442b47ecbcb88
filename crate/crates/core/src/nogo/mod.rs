//! Combinatorics of the two-dimensional obstruction.
//!
//! Sites of a finite grid are ordered row first, then column, then label. A
//! one-step evolution moves a particle at a site into its footprint, a set of
//! neighboring sites fixed by a [`FootprintSpec`]. In two dimensions two
//! particles can swap their order while staying far apart, which no local sign
//! rule can compensate; [`find_witness_triple`] exhibits that geometry and
//! [`sign_csp`] shows the resulting sign constraints are unsatisfiable, while
//! the one-dimensional analogue is satisfiable.

mod csp;
mod path;

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

pub use csp::{sign_csp, verify_rule_against_automaton, Channel, ClassKey, CspOutcome, PhaseRule, SignConstraint};
pub use path::{connected_path, find_witness_triple, WitnessTriple};

/// Largest number of internal labels.
pub const MAX_LABELS: u8 = 4;

pub const MINUS: u8 = 0;
pub const PLUS: u8 = 1;

/// Cell `(i, j)` with internal label `eps`; `i` is the column, `j` the row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Site2D {
    pub i: i32,
    pub j: i32,
    pub eps: u8,
}

impl Site2D {
    pub fn new(i: i32, j: i32, eps: u8) -> Self {
        Site2D { i, j, eps }
    }

    /// Chebyshev distance between cells, ignoring labels.
    pub fn chebyshev(&self, other: &Site2D) -> i32 {
        (self.i - other.i).abs().max((self.j - other.j).abs())
    }

    /// `i + j` parity.
    pub fn parity(&self) -> i32 {
        (self.i + self.j).rem_euclid(2)
    }
}

impl Ord for Site2D {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.j, self.i, self.eps).cmp(&(other.j, other.i, other.eps))
    }
}

impl PartialOrd for Site2D {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Site2D {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let label = match self.eps {
            MINUS => "-".to_string(),
            PLUS => "+".to_string(),
            e => e.to_string(),
        };
        write!(f, "({},{},{label})", self.i, self.j)
    }
}

pub fn canonical_order(a: &Site2D, b: &Site2D) -> Ordering {
    a.cmp(b)
}

/// A `width x height` grid; height 1 is a chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lattice2D {
    pub width: usize,
    pub height: usize,
}

impl Lattice2D {
    pub fn new(width: usize, height: usize) -> Self {
        Lattice2D { width, height }
    }

    pub fn square(n: usize) -> Self {
        Self::new(n, n)
    }

    pub fn chain(n: usize) -> Self {
        Self::new(n, 1)
    }

    pub fn contains(&self, i: i32, j: i32) -> bool {
        i >= 0 && j >= 0 && (i as usize) < self.width && (j as usize) < self.height
    }

    /// All sites in canonical order.
    pub fn sites(&self, labels: u8) -> Vec<Site2D> {
        let mut v = Vec::with_capacity(self.width * self.height * labels as usize);
        for j in 0..self.height as i32 {
            for i in 0..self.width as i32 {
                for e in 0..labels {
                    v.push(Site2D::new(i, j, e));
                }
            }
        }
        v
    }

    /// Position of `s` in canonical order.
    pub fn rank(&self, s: &Site2D, labels: u8) -> usize {
        ((s.j as usize * self.width) + s.i as usize) * labels as usize + s.eps as usize
    }
}

/// One allowed hop: displacement and target label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Move {
    pub di: i32,
    pub dj: i32,
    pub to: u8,
}

/// Support of the one-step amplitudes: for every label, the hops with nonzero amplitude.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FootprintSpec {
    pub labels: u8,
    /// `moves[eps]`, sorted.
    pub moves: Vec<Vec<Move>>,
}

pub const CORNERS: [(i32, i32); 4] = [(-1, -1), (1, -1), (-1, 1), (1, 1)];

impl FootprintSpec {
    /// Builds a spec from `table(eps, c1, c2)`, the target labels of each corner.
    pub fn from_corners(labels: u8, table: impl Fn(u8, i32, i32) -> Vec<u8>) -> Self {
        let moves = (0..labels)
            .map(|e| {
                let mut v: Vec<Move> = CORNERS
                    .iter()
                    .flat_map(|&(c1, c2)| {
                        table(e, c1, c2)
                            .into_iter()
                            .filter(|t| *t < labels)
                            .map(move |to| Move { di: c1, dj: c2, to })
                    })
                    .collect();
                v.sort();
                v.dedup();
                v
            })
            .collect();
        FootprintSpec { labels, moves }
    }

    /// Every corner reaches every label.
    pub fn full(labels: u8) -> Self {
        let labels = labels.clamp(1, MAX_LABELS);
        Self::from_corners(labels, |_, _, _| (0..labels).collect())
    }

    /// One label per corner: the label is kept.
    pub fn minimal() -> Self {
        Self::from_corners(2, |e, _, _| vec![e])
    }

    /// Every particle moves to the `(+1, +1)` corner keeping its label.
    pub fn trivial() -> Self {
        Self::from_corners(2, |e, c1, c2| if (c1, c2) == (1, 1) { vec![e] } else { vec![] })
    }

    /// The one-dimensional automaton: `+` hops right, `-` hops left, either
    /// landing on both labels.
    pub fn chain_1d() -> Self {
        let mv = |di| vec![Move { di, dj: 0, to: MINUS }, Move { di, dj: 0, to: PLUS }];
        FootprintSpec {
            labels: 2,
            moves: vec![mv(-1), mv(1)],
        }
    }

    /// Every label and every corner has at least one target label.
    pub fn is_nontrivial(&self) -> bool {
        self.moves.len() == self.labels as usize
            && self.moves.iter().all(|ms| {
                CORNERS
                    .iter()
                    .all(|&(c1, c2)| ms.iter().any(|m| (m.di, m.dj) == (c1, c2)))
            })
    }

    /// True when every hop changes `i + j` by an even amount.
    pub fn preserves_parity(&self) -> bool {
        self.moves.iter().flatten().all(|m| (m.di + m.dj).rem_euclid(2) == 0)
    }

    /// `self` allows every hop of `other`.
    pub fn contains(&self, other: &FootprintSpec) -> bool {
        self.labels == other.labels
            && self
                .moves
                .iter()
                .zip(&other.moves)
                .all(|(a, b)| b.iter().all(|m| a.contains(m)))
    }
}

/// Footprint of `s`, clipped to the lattice and sorted canonically.
pub fn footprint(s: &Site2D, spec: &FootprintSpec, lattice: &Lattice2D) -> Vec<Site2D> {
    let Some(moves) = spec.moves.get(s.eps as usize) else {
        return Vec::new();
    };
    let mut v: Vec<Site2D> = moves
        .iter()
        .map(|m| Site2D::new(s.i + m.di, s.j + m.dj, m.to))
        .filter(|t| lattice.contains(t.i, t.j))
        .collect();
    v.sort();
    v.dedup();
    v
}

/// Machine-readable result of a witness search or a sign check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    #[serde(rename = "type")]
    pub kind: String,
    pub sites: Vec<Site2D>,
    pub path: Vec<Site2D>,
    pub violated_constraints: Vec<SignConstraint>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub assignment: Vec<PhaseRule>,
}

impl Certificate {
    pub fn from_witness(w: Option<&WitnessTriple>) -> Self {
        match w {
            Some(w) => Certificate {
                kind: "witness".into(),
                sites: vec![w.s1, w.s2, w.s3],
                path: w.path.clone(),
                violated_constraints: Vec::new(),
                assignment: Vec::new(),
            },
            None => Certificate {
                kind: "none".into(),
                sites: Vec::new(),
                path: Vec::new(),
                violated_constraints: Vec::new(),
                assignment: Vec::new(),
            },
        }
    }

    pub fn from_csp(outcome: &CspOutcome) -> Self {
        match outcome {
            CspOutcome::Sat { rules } => Certificate {
                kind: "sat".into(),
                sites: Vec::new(),
                path: Vec::new(),
                violated_constraints: Vec::new(),
                assignment: rules.clone(),
            },
            CspOutcome::Unsat { core } => {
                let mut sites: Vec<Site2D> = core
                    .iter()
                    .flat_map(|c| [c.channel.s, c.channel.t, c.channel.s_to, c.channel.t_to])
                    .collect();
                sites.sort();
                sites.dedup();
                Certificate {
                    kind: "unsat".into(),
                    sites,
                    path: Vec::new(),
                    violated_constraints: core.clone(),
                    assignment: Vec::new(),
                }
            }
        }
    }
}
