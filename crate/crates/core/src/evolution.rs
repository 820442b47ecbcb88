//! One automaton step `U = C * Sigma` built from two-site unitaries.
//!
//! The coin acts inside each cell on the pair `((x,+), (x,-))`; the shift acts
//! on the offset pairs `((x,+), (x+1,-))`. Each pair unitary is a 4x4 matrix in
//! the basis `|00>, |01>, |10>, |11>` of the ordered pair, index `2*j_a + j_b`.
//! Both carry a `-1` on `|11>`, which is the fermionic exchange sign.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;

use crate::lattice::{BasisState, Boundary, Eps, FockState, LatticeConfig, Site, C64};

/// Groups of this many local configurations or more are processed in parallel.
const PAR_THRESHOLD: usize = 1 << 12;

/// 4x4 unitary on an ordered pair of sites, `m[out][in]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalUnitary4(pub [[C64; 4]; 4]);

impl LocalUnitary4 {
    pub fn from_real(m: [[f64; 4]; 4]) -> Self {
        let mut out = [[C64::default(); 4]; 4];
        for (r, row) in m.iter().enumerate() {
            for (c, v) in row.iter().enumerate() {
                out[r][c] = C64::new(*v, 0.0);
            }
        }
        LocalUnitary4(out)
    }

    pub fn identity() -> Self {
        let mut m = [[0.0; 4]; 4];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = 1.0;
        }
        Self::from_real(m)
    }

    pub fn entry(&self, out: usize, input: usize) -> C64 {
        self.0[out][input]
    }

    pub fn adjoint(&self) -> Self {
        let mut out = [[C64::default(); 4]; 4];
        for (r, row) in out.iter_mut().enumerate() {
            for (c, v) in row.iter_mut().enumerate() {
                *v = self.0[c][r].conj();
            }
        }
        LocalUnitary4(out)
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let mut out = [[C64::default(); 4]; 4];
        for (r, row) in out.iter_mut().enumerate() {
            for (c, v) in row.iter_mut().enumerate() {
                *v = (0..4).map(|k| self.0[r][k] * rhs.0[k][c]).sum();
            }
        }
        LocalUnitary4(out)
    }

    /// Largest entry of `|U^dagger U - I|`.
    pub fn unitarity_defect(&self) -> f64 {
        let p = self.adjoint().mul(self);
        let id = Self::identity();
        let mut m: f64 = 0.0;
        for r in 0..4 {
            for c in 0..4 {
                m = m.max((p.0[r][c] - id.0[r][c]).norm());
            }
        }
        m
    }

    /// True if no entry connects configurations of different occupation.
    pub fn conserves_particle_number(&self) -> bool {
        let pop = |i: usize| i.count_ones();
        (0..4).all(|r| (0..4).all(|c| pop(r) == pop(c) || self.0[r][c] == C64::default()))
    }
}

/// Sign carried by doubly occupied pairs. `Bosonic` drops the `-1`; it exists
/// only as a negative control.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PhaseConvention {
    #[default]
    Fermionic,
    Bosonic,
}

impl PhaseConvention {
    fn double_occupancy_phase(self) -> f64 {
        match self {
            PhaseConvention::Fermionic => -1.0,
            PhaseConvention::Bosonic => 1.0,
        }
    }
}

/// Options for one step. `twisted_seam` multiplies single hops across the
/// periodic seam by `-1`; on an `n`-particle state it reproduces the native
/// dynamics of the `n +- 1` sector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct StepRule {
    pub convention: PhaseConvention,
    pub twisted_seam: bool,
}

impl StepRule {
    pub fn fermionic() -> Self {
        StepRule::default()
    }

    pub fn bosonic() -> Self {
        StepRule {
            convention: PhaseConvention::Bosonic,
            twisted_seam: false,
        }
    }

    pub fn twisted() -> Self {
        StepRule {
            convention: PhaseConvention::Fermionic,
            twisted_seam: true,
        }
    }
}

pub fn coin_matrix(theta: f64) -> LocalUnitary4 {
    coin_matrix_with(theta, PhaseConvention::Fermionic)
}

pub fn coin_matrix_with(theta: f64, convention: PhaseConvention) -> LocalUnitary4 {
    let (s, c) = theta.sin_cos();
    // columns: C|00> = |00>, C|01> = c|10> + s|01>, C|10> = c|01> - s|10>, C|11> = ph|11>
    LocalUnitary4::from_real([
        [1.0, 0.0, 0.0, 0.0],
        [0.0, s, c, 0.0],
        [0.0, c, -s, 0.0],
        [0.0, 0.0, 0.0, convention.double_occupancy_phase()],
    ])
}

pub fn shift_matrix() -> LocalUnitary4 {
    shift_matrix_with(PhaseConvention::Fermionic)
}

pub fn shift_matrix_with(convention: PhaseConvention) -> LocalUnitary4 {
    LocalUnitary4::from_real([
        [1.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 1.0, 0.0],
        [0.0, 1.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, convention.double_occupancy_phase()],
    ])
}

fn twisted_shift_matrix(convention: PhaseConvention) -> LocalUnitary4 {
    LocalUnitary4::from_real([
        [1.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, -1.0, 0.0],
        [0.0, -1.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, convention.double_occupancy_phase()],
    ])
}

/// Bits `(a, b)` of the coin pair of `cell`.
pub fn coin_pair(cell: usize) -> (u32, u32) {
    (Site::new(cell, Eps::Plus).bit(), Site::new(cell, Eps::Minus).bit())
}

/// Bits `(a, b)` of the shift pair starting at `cell`, if coupled.
pub fn shift_pair(config: &LatticeConfig, cell: usize) -> Option<(u32, u32)> {
    let next = cell + 1;
    if next < config.cells {
        return Some((Site::new(cell, Eps::Plus).bit(), Site::new(next, Eps::Minus).bit()));
    }
    match config.boundary {
        Boundary::Periodic => Some((Site::new(cell, Eps::Plus).bit(), Site::new(0, Eps::Minus).bit())),
        Boundary::Open => None,
    }
}

/// Applies `u` to the pair `(a, b)` of every basis word. Each output amplitude
/// is a fixed-order sum over the four local inputs, so the result does not
/// depend on traversal order or thread count.
pub(crate) fn apply_pair_unitary(
    amps: &BTreeMap<BasisState, C64>,
    a: u32,
    b: u32,
    u: &LocalUnitary4,
) -> BTreeMap<BasisState, C64> {
    let mask = (1u128 << a) | (1u128 << b);
    let mut groups: HashMap<u128, [C64; 4]> = HashMap::with_capacity(amps.len());
    for (word, amp) in amps {
        let local = 2 * ((word.0 >> a) & 1) as usize + ((word.0 >> b) & 1) as usize;
        groups.entry(word.0 & !mask).or_insert([C64::default(); 4])[local] = *amp;
    }
    let expand = |(rest, v): (u128, [C64; 4])| {
        let mut out = Vec::with_capacity(4);
        for (r, row) in u.0.iter().enumerate() {
            let mut acc = C64::default();
            let mut touched = false;
            for (c, x) in v.iter().enumerate() {
                if row[c] != C64::default() && *x != C64::default() {
                    acc += row[c] * x;
                    touched = true;
                }
            }
            if touched {
                let word = rest | (((r >> 1) as u128) << a) | (((r & 1) as u128) << b);
                out.push((BasisState(word), acc));
            }
        }
        out
    };
    let pieces: Vec<(BasisState, C64)> = if groups.len() >= PAR_THRESHOLD {
        let g: Vec<_> = groups.into_iter().collect();
        g.into_par_iter().flat_map_iter(expand).collect()
    } else {
        groups.into_iter().flat_map(expand).collect()
    };
    pieces.into_iter().collect()
}

fn amplitudes(state: &FockState) -> BTreeMap<BasisState, C64> {
    state.iter().collect()
}

pub fn apply_coin(state: &FockState) -> FockState {
    apply_coin_with(state, StepRule::fermionic())
}

pub fn apply_coin_with(state: &FockState, rule: StepRule) -> FockState {
    let config = *state.config();
    let u = coin_matrix_with(config.theta, rule.convention);
    let mut amps = amplitudes(state);
    for cell in 0..config.cells {
        let (a, b) = coin_pair(cell);
        amps = apply_pair_unitary(&amps, a, b, &u);
    }
    FockState::from_map(&config, amps)
}

fn apply_coin_adjoint(state: &FockState, rule: StepRule) -> FockState {
    let config = *state.config();
    let u = coin_matrix_with(config.theta, rule.convention).adjoint();
    let mut amps = amplitudes(state);
    for cell in 0..config.cells {
        let (a, b) = coin_pair(cell);
        amps = apply_pair_unitary(&amps, a, b, &u);
    }
    FockState::from_map(&config, amps)
}

pub fn apply_shift(state: &FockState) -> FockState {
    apply_shift_with(state, StepRule::fermionic())
}

pub fn apply_shift_with(state: &FockState, rule: StepRule) -> FockState {
    shift_impl(state, rule, false)
}

fn shift_impl(state: &FockState, rule: StepRule, adjoint: bool) -> FockState {
    let config = *state.config();
    let bulk = shift_matrix_with(rule.convention);
    let seam = if rule.twisted_seam {
        twisted_shift_matrix(rule.convention)
    } else {
        bulk
    };
    let (bulk, seam) = if adjoint {
        (bulk.adjoint(), seam.adjoint())
    } else {
        (bulk, seam)
    };
    let mut amps = amplitudes(state);
    for cell in 0..config.cells {
        if let Some((a, b)) = shift_pair(&config, cell) {
            let u = if cell + 1 == config.cells { &seam } else { &bulk };
            amps = apply_pair_unitary(&amps, a, b, u);
        }
    }
    FockState::from_map(&config, amps)
}

/// `U = C * Sigma`: shift first, then coin.
pub fn step(state: &FockState) -> FockState {
    step_with(state, StepRule::fermionic())
}

pub fn step_with(state: &FockState, rule: StepRule) -> FockState {
    apply_coin_with(&apply_shift_with(state, rule), rule)
}

/// `U^dagger = Sigma^dagger * C^dagger`.
pub fn step_inverse(state: &FockState) -> FockState {
    step_inverse_with(state, StepRule::fermionic())
}

pub fn step_inverse_with(state: &FockState, rule: StepRule) -> FockState {
    shift_impl(&apply_coin_adjoint(state, rule), rule, true)
}

pub fn evolve(state: &FockState, nsteps: usize) -> FockState {
    evolve_with(state, nsteps, StepRule::fermionic())
}

pub fn evolve_with(state: &FockState, nsteps: usize, rule: StepRule) -> FockState {
    let mut s = state.clone();
    for _ in 0..nsteps {
        s = step_with(&s, rule);
    }
    s
}

/// Probability carried by words with a particle farther than `radius` cells
/// from every source cell.
pub fn light_cone_leakage(state: &FockState, sources: &[usize], radius: usize) -> f64 {
    let config = state.config();
    state
        .iter()
        .filter(|(b, _)| {
            b.sites().any(|s| {
                sources
                    .iter()
                    .all(|&src| config.cell_distance(s.cell, src) > radius)
            })
        })
        .map(|(_, a)| a.norm_sqr())
        .fold(0.0, |acc, p| acc + p)
}

/// Evolves `(L/2, +)` for `nsteps` and returns the probability found outside
/// the radius-`nsteps` neighborhood of the starting cell.
pub fn light_cone_check(config: &LatticeConfig, nsteps: usize) -> f64 {
    let origin = config.cells / 2;
    let start = FockState::from_particles(config, &[Site::new(origin, Eps::Plus)])
        .expect("origin cell is inside the lattice");
    light_cone_leakage(&evolve(&start, nsteps), &[origin], nsteps)
}
