//! Oracles shared by the integration tests. Nothing here calls the automaton
//! or the solvers it checks; each answer is rebuilt from first principles.
#![allow(dead_code)]

use std::collections::{BTreeSet, VecDeque};
use std::f64::consts::PI;
use std::path::PathBuf;

use qca_dirac::nogo::{Channel, FootprintSpec, Lattice2D, Site2D};
use qca_dirac::{BasisState, LatticeConfig};

pub fn experiments_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../experiments")
}

pub fn config_path(name: &str) -> PathBuf {
    experiments_dir().join(name)
}

/// `arccos(cos theta cos k dx)`, the textbook form of the one-particle phase.
pub fn acos_phase(theta: f64, kdx: f64) -> f64 {
    (theta.cos() * kdx.cos()).clamp(-1.0, 1.0).acos()
}

/// Sign of the permutation that sorts `v`.
fn sort_sign(v: &[usize]) -> f64 {
    let mut inversions = 0;
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            if v[i] > v[j] {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Free translation at `theta = 0` on a ring, computed by hand: every `+`
/// particle moves one cell right, every `-` one cell left, and the labels stay.
/// Reordering the creation operators costs the sort sign; each seam crossing
/// costs an extra `(-1)^(n-1)` because the seam gate carries no string.
pub fn crossing_step(cells: usize, word: u128) -> (u128, f64) {
    let sites: Vec<usize> = (0..2 * cells).filter(|b| word >> b & 1 == 1).collect();
    let n = sites.len();
    let mut dest = Vec::with_capacity(n);
    let mut seam = 0;
    for &bit in &sites {
        let (cell, plus) = (bit / 2, bit % 2 == 1);
        let to = if plus {
            if cell + 1 == cells {
                seam += 1;
            }
            (cell + 1) % cells
        } else {
            if cell == 0 {
                seam += 1;
            }
            (cell + cells - 1) % cells
        };
        dest.push(2 * to + usize::from(plus));
    }
    let mut sign = sort_sign(&dest);
    if n > 0 && (n - 1) * seam % 2 == 1 {
        sign = -sign;
    }
    (dest.iter().fold(0u128, |w, b| w | (1u128 << b)), sign)
}

/// Spectrum of the free-translation signed permutation on the `n`-particle sector.
pub fn free_translation_phases(cells: usize, n: usize) -> Vec<f64> {
    let words: Vec<u128> = (0u128..1 << (2 * cells)).filter(|w| w.count_ones() as usize == n).collect();
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for &w in &words {
        if seen.contains(&w) {
            continue;
        }
        let (mut len, mut sign, mut cur) = (0, 1.0, w);
        loop {
            seen.insert(cur);
            let (next, s) = crossing_step(cells, cur);
            len += 1;
            sign *= s;
            cur = next;
            if cur == w {
                break;
            }
        }
        let base = if sign < 0.0 { PI } else { 0.0 };
        out.extend((0..len).map(|j| (base + 2.0 * PI * j as f64) / len as f64));
    }
    out
}

/// Largest distance between matched phases on the unit circle. Pairs greedily
/// by nearest unmatched partner, which is exact for the well-separated or
/// exactly repeated values used here.
pub fn circle_match(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    let d = |x: f64, y: f64| {
        let r = (x - y).rem_euclid(2.0 * PI);
        r.min(2.0 * PI - r)
    };
    let mut used = vec![false; b.len()];
    let mut worst: f64 = 0.0;
    for &x in a {
        let (j, dist) = b
            .iter()
            .enumerate()
            .filter(|(j, _)| !used[*j])
            .map(|(j, &y)| (j, d(x, y)))
            .min_by(|p, q| p.1.total_cmp(&q.1))
            .expect("equal lengths");
        used[j] = true;
        worst = worst.max(dist);
    }
    worst
}

pub fn word_of(b: BasisState) -> u128 {
    b.0
}

pub fn ring(cells: usize, theta: f64) -> LatticeConfig {
    LatticeConfig::new(cells, theta, qca_dirac::Boundary::Periodic).unwrap()
}

pub fn chain(cells: usize, theta: f64) -> LatticeConfig {
    LatticeConfig::new(cells, theta, qca_dirac::Boundary::Open).unwrap()
}

/// Row, column, label: the canonical order, spelled out.
pub fn before(a: &Site2D, b: &Site2D) -> bool {
    (a.j, a.i, a.eps) < (b.j, b.i, b.eps)
}

pub fn cheb(a: &Site2D, b: &Site2D) -> i32 {
    (a.i - b.i).abs().max((a.j - b.j).abs())
}

/// Footprint of `s` read straight from the move table.
pub fn hops(s: &Site2D, spec: &FootprintSpec, lat: &Lattice2D) -> Vec<Site2D> {
    spec.moves[s.eps as usize]
        .iter()
        .map(|m| Site2D::new(s.i + m.di, s.j + m.dj, m.to))
        .filter(|t| t.i >= 0 && t.j >= 0 && (t.i as usize) < lat.width && (t.j as usize) < lat.height)
        .collect()
}

/// Is `b` reachable from `a` by footprint hops that stay at distance `>= d` from `avoid`?
pub fn reachable_avoiding(lat: &Lattice2D, spec: &FootprintSpec, a: Site2D, b: Site2D, avoid: Site2D, d: i32) -> bool {
    if cheb(&a, &avoid) < d || cheb(&b, &avoid) < d {
        return false;
    }
    let mut seen = BTreeSet::from([(a.i, a.j, a.eps)]);
    let mut queue = VecDeque::from([a]);
    while let Some(s) = queue.pop_front() {
        if s == b {
            return true;
        }
        for t in hops(&s, spec, lat) {
            if cheb(&t, &avoid) >= d && seen.insert((t.i, t.j, t.eps)) {
                queue.push_back(t);
            }
        }
    }
    false
}

/// Exhaustive search for any witness geometry: ordered `s1 < s2 < s3`, both
/// endpoints at distance `>= d` from `s2`, mutually reachable around it.
pub fn any_witness(lat: &Lattice2D, spec: &FootprintSpec, d: i32) -> bool {
    let mut sites = Vec::new();
    for j in 0..lat.height as i32 {
        for i in 0..lat.width as i32 {
            for e in 0..spec.labels {
                sites.push(Site2D::new(i, j, e));
            }
        }
    }
    for s2 in &sites {
        for s1 in sites.iter().filter(|s| before(s, s2)) {
            for s3 in sites.iter().filter(|s| before(s2, s)) {
                if reachable_avoiding(lat, spec, *s1, *s3, *s2, d) && reachable_avoiding(lat, spec, *s3, *s1, *s2, d) {
                    return true;
                }
            }
        }
    }
    false
}

/// A channel no local rule can touch yet whose images come out reversed:
/// both particles stay farther apart than `radius`, each image is a legal hop,
/// and the canonical order flips.
pub fn is_blocking_channel(c: &Channel, spec: &FootprintSpec, lat: &Lattice2D, radius: i32) -> bool {
    before(&c.s, &c.t)
        && hops(&c.s, spec, lat).contains(&c.s_to)
        && hops(&c.t, spec, lat).contains(&c.t_to)
        && c.s_to != c.t_to
        && before(&c.t_to, &c.s_to)
        && cheb(&c.s, &c.t) > radius
        && cheb(&c.s_to, &c.t_to) > radius
}
