use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use super::{footprint, FootprintSpec, Lattice2D, Site2D};
use crate::error::{Error, Result};

fn far(s: &Site2D, center: &Site2D, d: i32) -> bool {
    s.chebyshev(center) >= d
}

/// Breadth-first search from `a` to `b` through footprints, visiting only
/// sites at Chebyshev distance at least `d` from `forbidden_center`.
///
/// Returns the hops after `a` (empty when `a == b`), or `None`. For specs
/// whose hops all preserve `i + j` parity, endpoints of different parity are
/// rejected without searching.
pub fn connected_path(
    lattice: &Lattice2D,
    a: &Site2D,
    b: &Site2D,
    spec: &FootprintSpec,
    forbidden_center: &Site2D,
    d: i32,
) -> Option<Vec<Site2D>> {
    if !far(a, forbidden_center, d) || !far(b, forbidden_center, d) {
        return None;
    }
    if a == b {
        return Some(Vec::new());
    }
    if spec.preserves_parity() && a.parity() != b.parity() {
        return None;
    }
    let mut parent: HashMap<Site2D, Site2D> = HashMap::new();
    let mut queue = VecDeque::from([*a]);
    parent.insert(*a, *a);
    while let Some(s) = queue.pop_front() {
        for n in footprint(&s, spec, lattice) {
            if parent.contains_key(&n) || !far(&n, forbidden_center, d) {
                continue;
            }
            parent.insert(n, s);
            if n == *b {
                let mut path = vec![n];
                let mut cur = s;
                while cur != *a {
                    path.push(cur);
                    cur = parent[&cur];
                }
                path.reverse();
                return Some(path);
            }
            queue.push_back(n);
        }
    }
    None
}

/// Sites reachable from `start` within the far region, following hops
/// forward or backward.
fn reachable(lattice: &Lattice2D, start: &Site2D, spec: &FootprintSpec, center: &Site2D, d: i32, reverse: &HashMap<Site2D, Vec<Site2D>>) -> (Vec<bool>, Vec<bool>) {
    let idx = |s: &Site2D| lattice.rank(s, spec.labels);
    let total = lattice.width * lattice.height * spec.labels as usize;
    let bfs = |backward: bool| {
        let mut seen = vec![false; total];
        seen[idx(start)] = true;
        let mut queue = VecDeque::from([*start]);
        while let Some(s) = queue.pop_front() {
            let next = if backward {
                reverse.get(&s).cloned().unwrap_or_default()
            } else {
                footprint(&s, spec, lattice)
            };
            for n in next {
                if far(&n, center, d) && !seen[idx(&n)] {
                    seen[idx(&n)] = true;
                    queue.push_back(n);
                }
            }
        }
        seen
    };
    (bfs(false), bfs(true))
}

/// Three sites `s1 < s2 < s3` with `s1` and `s3` far from `s2` and joined by a
/// path that stays far from `s2`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessTriple {
    pub s1: Site2D,
    pub s2: Site2D,
    pub s3: Site2D,
    /// From `s1` to `s3`, both included.
    pub path: Vec<Site2D>,
}

impl WitnessTriple {
    /// Checks ordering, distances and that each path step is a footprint hop.
    pub fn validate(&self, spec: &FootprintSpec, lattice: &Lattice2D, d: i32) -> std::result::Result<(), String> {
        if !(self.s1 < self.s2 && self.s2 < self.s3) {
            return Err(format!("{} < {} < {} fails", self.s1, self.s2, self.s3));
        }
        if self.s1.chebyshev(&self.s2) < d || self.s3.chebyshev(&self.s2) < d {
            return Err("an endpoint is within the exclusion radius".into());
        }
        if self.path.first() != Some(&self.s1) || self.path.last() != Some(&self.s3) {
            return Err("path does not run from s1 to s3".into());
        }
        if let Some(p) = self.path.iter().find(|p| p.chebyshev(&self.s2) < d) {
            return Err(format!("path site {p} is within {d} of {}", self.s2));
        }
        for w in self.path.windows(2) {
            if !footprint(&w[0], spec, lattice).contains(&w[1]) {
                return Err(format!("{} is not in the footprint of {}", w[1], w[0]));
            }
        }
        Ok(())
    }
}

/// Looks for a witness triple with `s2` at the lattice center.
///
/// Candidates for `s1` and `s3` are taken by increasing distance from `s2` in
/// canonical order. The two endpoints must reach each other in both
/// directions while avoiding the exclusion square, since the contradiction
/// moves a particle from one side of `s2` to the other and back.
pub fn find_witness_triple(spec: &FootprintSpec, lattice: &Lattice2D, d: i32) -> Result<Option<WitnessTriple>> {
    let need = 4 * d.max(0) as usize + 3;
    if lattice.width < need {
        return Err(Error::LatticeTooSmall(format!(
            "width {} < 4D+3 = {need}",
            lattice.width
        )));
    }
    let sites = lattice.sites(spec.labels);
    let mut reverse: HashMap<Site2D, Vec<Site2D>> = HashMap::new();
    for s in &sites {
        for t in footprint(s, spec, lattice) {
            reverse.entry(t).or_default().push(*s);
        }
    }
    let (ci, cj) = ((lattice.width / 2) as i32, (lattice.height / 2) as i32);
    for e in 0..spec.labels {
        let s2 = Site2D::new(ci, cj, e);
        let r2 = lattice.rank(&s2, spec.labels);
        let mut lower: Vec<&Site2D> = sites.iter().filter(|s| **s < s2 && far(s, &s2, d)).collect();
        let mut upper: Vec<&Site2D> = sites.iter().filter(|s| **s > s2 && far(s, &s2, d)).collect();
        lower.sort_by_key(|s| r2 - lattice.rank(s, spec.labels));
        upper.sort_by_key(|s| lattice.rank(s, spec.labels) - r2);

        let mut best: Option<(usize, usize, Site2D, Site2D)> = None;
        for s1 in &lower {
            let d1 = r2 - lattice.rank(s1, spec.labels);
            if best.is_some_and(|b| d1 > b.0) {
                break;
            }
            let (fwd, back) = reachable(lattice, s1, spec, &s2, d, &reverse);
            for s3 in &upper {
                let d3 = lattice.rank(s3, spec.labels) - r2;
                let score = d1 + d3;
                if best.is_some_and(|b| (score, d1) >= (b.0, b.1)) {
                    break;
                }
                let k = lattice.rank(s3, spec.labels);
                if fwd[k] && back[k] {
                    best = Some((score, d1, **s1, **s3));
                    break;
                }
            }
        }
        if let Some((_, _, s1, s3)) = best {
            let hops = connected_path(lattice, &s1, &s3, spec, &s2, d).expect("reachable endpoints have a path");
            let mut path = vec![s1];
            path.extend(hops);
            return Ok(Some(WitnessTriple { s1, s2, s3, path }));
        }
    }
    Ok(None)
}
