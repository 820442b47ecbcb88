//! Satisfiability of local pairwise sign rules.
//!
//! A two-particle state `a^dagger_s a^dagger_t |0>` with `s < t` evolves into
//! terms `a^dagger_{s'} a^dagger_{t'} |0>` with `s'` in the footprint of `s`
//! and `t'` in that of `t`. Writing each term in canonical order costs a sign
//! `-1` exactly when `s' > t'`. A local rule may attach a `+-1` phase to a
//! channel `(s -> s', t -> t')` only when the two particles are within
//! `radius` of each other before or after the step; such phases depend on the
//! relative geometry alone, so one variable covers each translation class.
//! Channels whose particles stay far apart receive no phase, so they demand
//! that no reordering happens.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{footprint, FootprintSpec, Lattice2D, Site2D, PLUS};
use crate::error::{Error, Result};
use crate::evolution::step;
use crate::lattice::{BasisState, Boundary, Eps, FockState, LatticeConfig, Site, C64};

const MAX_SIDE_2D: usize = 7;
const MAX_CELLS_1D: usize = 9;
const MAX_RADIUS: i32 = 2;

/// One two-particle transition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Channel {
    pub s: Site2D,
    pub t: Site2D,
    pub s_to: Site2D,
    pub t_to: Site2D,
}

impl Channel {
    /// `-1` when the images come out in the opposite canonical order.
    pub fn required_sign(&self) -> i8 {
        if self.s_to > self.t_to {
            -1
        } else {
            1
        }
    }

    pub fn separation_before(&self) -> i32 {
        self.s.chebyshev(&self.t)
    }

    pub fn separation_after(&self) -> i32 {
        self.s_to.chebyshev(&self.t_to)
    }

    pub fn is_local(&self, radius: i32) -> bool {
        self.separation_before().min(self.separation_after()) <= radius
    }

    pub fn class_key(&self) -> ClassKey {
        let rel = |x: &Site2D| (x.i - self.s.i, x.j - self.s.j);
        ClassKey {
            s_eps: self.s.eps,
            t_eps: self.t.eps,
            t_rel: rel(&self.t),
            s_to_rel: rel(&self.s_to),
            s_to_eps: self.s_to.eps,
            t_to_rel: rel(&self.t_to),
            t_to_eps: self.t_to.eps,
        }
    }
}

/// Translation class of a channel: labels and displacements relative to `s`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ClassKey {
    pub s_eps: u8,
    pub t_eps: u8,
    pub t_rel: (i32, i32),
    pub s_to_rel: (i32, i32),
    pub s_to_eps: u8,
    pub t_to_rel: (i32, i32),
    pub t_to_eps: u8,
}

impl ClassKey {
    /// The images swap canonical order.
    pub fn is_crossing(&self) -> bool {
        (self.s_to_rel.1, self.s_to_rel.0, self.s_to_eps) > (self.t_to_rel.1, self.t_to_rel.0, self.t_to_eps)
    }
}

/// A sign demand on one channel.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignConstraint {
    pub channel: Channel,
    pub required_sign: i8,
    /// Whether a local rule may act on this channel.
    pub local: bool,
    pub separation_before: i32,
    pub separation_after: i32,
}

/// Value of one rule class in a satisfying assignment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhaseRule {
    pub class: ClassKey,
    pub sign: i8,
    pub crossing: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum CspOutcome {
    Sat { rules: Vec<PhaseRule> },
    /// A minimal set of jointly unsatisfiable constraints.
    Unsat { core: Vec<SignConstraint> },
}

impl CspOutcome {
    pub fn is_sat(&self) -> bool {
        matches!(self, CspOutcome::Sat { .. })
    }
}

/// Parity constraints over boolean variables (`true` meaning `-1`): the XOR of
/// the scope must equal `odd`.
struct XorSystem {
    nvars: usize,
    scopes: Vec<Vec<usize>>,
    odd: Vec<bool>,
}

enum Solve {
    Sat(Vec<bool>),
    /// Constraints implicated in the refutation.
    Unsat(Vec<usize>),
}

impl XorSystem {
    /// Backtracking search with unit propagation over the `active` constraints.
    fn solve(&self, active: &[usize]) -> Solve {
        let mut watch: Vec<Vec<usize>> = vec![Vec::new(); self.nvars];
        for &c in active {
            for &v in &self.scopes[c] {
                watch[v].push(c);
            }
        }
        let mut assign: Vec<Option<bool>> = vec![None; self.nvars];
        let mut reason: Vec<Option<usize>> = vec![None; self.nvars];
        let mut trail: Vec<usize> = Vec::new();

        // returns the violated constraint, if any
        let propagate = |assign: &mut Vec<Option<bool>>,
                         reason: &mut Vec<Option<usize>>,
                         trail: &mut Vec<usize>,
                         seeds: Vec<usize>|
         -> Option<usize> {
            let mut queue = seeds;
            while let Some(c) = queue.pop() {
                let mut free = None;
                let mut nfree = 0;
                let mut acc = false;
                for &v in &self.scopes[c] {
                    match assign[v] {
                        Some(x) => acc ^= x,
                        None => {
                            nfree += 1;
                            free = Some(v);
                        }
                    }
                }
                match nfree {
                    0 if acc != self.odd[c] => return Some(c),
                    1 => {
                        let v = free.expect("one free variable");
                        assign[v] = Some(acc ^ self.odd[c]);
                        reason[v] = Some(c);
                        trail.push(v);
                        queue.extend(watch[v].iter().copied());
                    }
                    _ => {}
                }
            }
            None
        };

        if let Some(c) = propagate(&mut assign, &mut reason, &mut trail, active.to_vec()) {
            return Solve::Unsat(self.explain(c, &reason));
        }

        // depth-first over decisions: (trail length before, variable, tried true)
        let mut stack: Vec<(usize, usize, bool)> = Vec::new();
        loop {
            let Some(v) = assign.iter().position(|a| a.is_none()) else {
                return Solve::Sat(assign.into_iter().map(|a| a.unwrap_or(false)).collect());
            };
            stack.push((trail.len(), v, false));
            assign[v] = Some(false);
            reason[v] = None;
            trail.push(v);
            let mut conflict = propagate(&mut assign, &mut reason, &mut trail, watch[v].clone());
            while conflict.is_some() {
                // undo to the latest decision with an untried branch
                loop {
                    let Some((mark, dv, tried)) = stack.pop() else {
                        return Solve::Unsat(active.to_vec());
                    };
                    for u in trail.drain(mark..) {
                        assign[u] = None;
                        reason[u] = None;
                    }
                    if !tried {
                        stack.push((mark, dv, true));
                        assign[dv] = Some(true);
                        trail.push(dv);
                        conflict = propagate(&mut assign, &mut reason, &mut trail, watch[dv].clone());
                        break;
                    }
                }
            }
        }
    }

    /// The conflicting constraint plus the reasons of everything it depends on.
    fn explain(&self, conflict: usize, reason: &[Option<usize>]) -> Vec<usize> {
        let mut out = vec![conflict];
        let mut seen_vars = vec![false; self.nvars];
        let mut stack: Vec<usize> = self.scopes[conflict].clone();
        while let Some(v) = stack.pop() {
            if seen_vars[v] {
                continue;
            }
            seen_vars[v] = true;
            if let Some(c) = reason[v] {
                out.push(c);
                stack.extend(self.scopes[c].iter().copied());
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Deletion-based shrinking of an unsatisfiable set.
    fn minimize(&self, mut core: Vec<usize>) -> Vec<usize> {
        let mut i = 0;
        while i < core.len() {
            let mut trial = core.clone();
            trial.remove(i);
            if matches!(self.solve(&trial), Solve::Unsat(_)) {
                core = trial;
            } else {
                i += 1;
            }
        }
        core
    }
}

fn check_bounds(dimension: u8, radius: i32, lattice: &Lattice2D) -> Result<()> {
    if !(0..=MAX_RADIUS).contains(&radius) {
        return Err(Error::InvalidConfig(format!("radius {radius} outside 0..={MAX_RADIUS}")));
    }
    match dimension {
        1 => {
            if lattice.height != 1 {
                return Err(Error::InvalidConfig("a one-dimensional check needs height 1".into()));
            }
            if lattice.width > MAX_CELLS_1D {
                return Err(Error::LatticeTooLarge {
                    width: lattice.width,
                    height: lattice.height,
                    cap: format!("at most {MAX_CELLS_1D} cells in 1D"),
                });
            }
        }
        2 => {
            if lattice.width > MAX_SIDE_2D || lattice.height > MAX_SIDE_2D {
                return Err(Error::LatticeTooLarge {
                    width: lattice.width,
                    height: lattice.height,
                    cap: format!("at most {MAX_SIDE_2D} per side in 2D"),
                });
            }
        }
        d => return Err(Error::InvalidConfig(format!("dimension {d} (expected 1 or 2)"))),
    }
    Ok(())
}

/// Every two-particle channel on the lattice, in canonical order of `(s, t, s', t')`.
pub fn channels(spec: &FootprintSpec, lattice: &Lattice2D) -> Vec<Channel> {
    let sites = lattice.sites(spec.labels);
    let fps: Vec<Vec<Site2D>> = sites.iter().map(|s| footprint(s, spec, lattice)).collect();
    let mut out = Vec::new();
    for (a, s) in sites.iter().enumerate() {
        for (b, t) in sites.iter().enumerate().skip(a + 1) {
            for s_to in &fps[a] {
                for t_to in &fps[b] {
                    if s_to != t_to {
                        out.push(Channel {
                            s: *s,
                            t: *t,
                            s_to: *s_to,
                            t_to: *t_to,
                        });
                    }
                }
            }
        }
    }
    out
}

/// Searches for a local pairwise sign rule reproducing fermionic reordering
/// signs for every two-particle channel.
pub fn sign_csp(dimension: u8, radius: i32, spec: &FootprintSpec, lattice: &Lattice2D) -> Result<CspOutcome> {
    check_bounds(dimension, radius, lattice)?;
    let chans = channels(spec, lattice);
    let mut classes: BTreeMap<ClassKey, usize> = BTreeMap::new();
    let mut scopes = Vec::with_capacity(chans.len());
    let mut odd = Vec::with_capacity(chans.len());
    for ch in &chans {
        if ch.is_local(radius) {
            let next = classes.len();
            let v = *classes.entry(ch.class_key()).or_insert(next);
            scopes.push(vec![v]);
        } else {
            scopes.push(Vec::new());
        }
        odd.push(ch.required_sign() < 0);
    }
    let sys = XorSystem {
        nvars: classes.len(),
        scopes,
        odd,
    };
    let all: Vec<usize> = (0..chans.len()).collect();
    match sys.solve(&all) {
        Solve::Sat(values) => {
            let rules = classes
                .iter()
                .map(|(k, &v)| PhaseRule {
                    class: *k,
                    sign: if values[v] { -1 } else { 1 },
                    crossing: k.is_crossing(),
                })
                .collect();
            Ok(CspOutcome::Sat { rules })
        }
        Solve::Unsat(candidates) => {
            let core = sys
                .minimize(candidates)
                .into_iter()
                .map(|c| {
                    let ch = chans[c];
                    SignConstraint {
                        channel: ch,
                        required_sign: ch.required_sign(),
                        local: !sys.scopes[c].is_empty(),
                        separation_before: ch.separation_before(),
                        separation_after: ch.separation_after(),
                    }
                })
                .collect();
            Ok(CspOutcome::Unsat { core })
        }
    }
}

fn chain_site(s: &Site2D) -> Site {
    Site::new(s.i as usize, if s.eps == PLUS { Eps::Plus } else { Eps::Minus })
}

/// Rebuilds every bulk two-particle amplitude of the automaton on an open
/// chain from its one-particle amplitudes and the phase rule, and returns the
/// largest deviation from the directly evolved state.
pub fn verify_rule_against_automaton(config: &LatticeConfig, rules: &[PhaseRule], radius: i32) -> Result<f64> {
    if config.boundary != Boundary::Open {
        return Err(Error::BoundaryMode);
    }
    let spec = FootprintSpec::chain_1d();
    let lattice = Lattice2D::chain(config.cells);
    let table: BTreeMap<ClassKey, i8> = rules.iter().map(|r| (r.class, r.sign)).collect();
    let amp = |from: &Site2D, to: &Site2D| -> Result<C64> {
        let s = FockState::from_particles(config, &[chain_site(from)])?;
        let to = BasisState(1u128 << chain_site(to).bit());
        Ok(step(&s).amplitude(to))
    };
    let bulk: Vec<Site2D> = lattice
        .sites(2)
        .into_iter()
        .filter(|s| s.i >= 1 && (s.i as usize) + 1 < config.cells)
        .collect();
    let mut worst: f64 = 0.0;
    for (a, s) in bulk.iter().enumerate() {
        for t in bulk.iter().skip(a + 1) {
            let mut predicted: BTreeMap<BasisState, C64> = BTreeMap::new();
            for s_to in footprint(s, &spec, &lattice) {
                for t_to in footprint(t, &spec, &lattice) {
                    if s_to == t_to {
                        continue;
                    }
                    let ch = Channel { s: *s, t: *t, s_to, t_to };
                    let sign = if ch.is_local(radius) {
                        *table.get(&ch.class_key()).ok_or_else(|| {
                            Error::InvalidConfig(format!("rule has no entry for channel class {:?}", ch.class_key()))
                        })?
                    } else {
                        1
                    };
                    let word = BasisState((1u128 << chain_site(&s_to).bit()) | (1u128 << chain_site(&t_to).bit()));
                    *predicted.entry(word).or_default() += amp(s, &s_to)? * amp(t, &t_to)? * f64::from(sign);
                }
            }
            let start = FockState::from_particles(config, &[chain_site(s), chain_site(t)])?;
            let direct = step(&start);
            let rebuilt = FockState::from_amplitudes(config, predicted);
            worst = worst.max(direct.max_abs_diff(&rebuilt));
        }
    }
    Ok(worst)
}
