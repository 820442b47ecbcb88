//! Dense single-particle quantum walk, written independently of the automaton
//! so that it can serve as an oracle for the one-particle sector.
//!
//! Each cell holds a spinor `[R, L]`, identified with the labels `+` and `-`.
//! A step shifts `R` right and `L` left, then applies the coin
//! `exp(-i theta sigma_2)`. On an open chain the components that would leave
//! the lattice are reflected in place (`R <-> L` at the end cell).

use crate::error::{Error, Result};
use crate::io::{fmt_f64, Csv};
use crate::lattice::{BasisState, Boundary, Eps, FockState, LatticeConfig, Site, C64};
use crate::linalg::{self, Mat2};

pub const R: usize = 0;
pub const L: usize = 1;

/// Spinor component holding label `eps`.
pub fn component(eps: Eps) -> usize {
    match eps {
        Eps::Plus => R,
        Eps::Minus => L,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WalkState {
    pub config: LatticeConfig,
    pub spinors: Vec<[C64; 2]>,
}

impl WalkState {
    pub fn zero(config: &LatticeConfig) -> Self {
        WalkState {
            config: *config,
            spinors: vec![[C64::default(); 2]; config.cells],
        }
    }

    pub fn localized(config: &LatticeConfig, cell: usize, eps: Eps) -> Result<Self> {
        if cell >= config.cells {
            return Err(Error::OutOfRange {
                cell,
                cells: config.cells,
            });
        }
        let mut s = Self::zero(config);
        s.spinors[cell][component(eps)] = C64::new(1.0, 0.0);
        Ok(s)
    }

    pub fn amplitude(&self, cell: usize, eps: Eps) -> C64 {
        self.spinors[cell][component(eps)]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.spinors.iter().map(|s| s[0].norm_sqr() + s[1].norm_sqr()).sum()
    }

    pub fn normalized(&self) -> Self {
        let n = self.norm_sqr().sqrt();
        let mut out = self.clone();
        if n > 0.0 {
            for s in &mut out.spinors {
                s[0] /= n;
                s[1] /= n;
            }
        }
        out
    }

    /// Probability per cell.
    pub fn probabilities(&self) -> Vec<f64> {
        self.spinors.iter().map(|s| s[0].norm_sqr() + s[1].norm_sqr()).collect()
    }
}

pub fn walk_step(state: &WalkState) -> WalkState {
    let n = state.config.cells;
    let mut moved = vec![[C64::default(); 2]; n];
    for (j, s) in state.spinors.iter().enumerate() {
        if j + 1 < n {
            moved[j + 1][R] += s[R];
        } else {
            match state.config.boundary {
                Boundary::Periodic => moved[0][R] += s[R],
                Boundary::Open => moved[j][L] += s[R],
            }
        }
        if j > 0 {
            moved[j - 1][L] += s[L];
        } else {
            match state.config.boundary {
                Boundary::Periodic => moved[n - 1][L] += s[L],
                Boundary::Open => moved[0][R] += s[L],
            }
        }
    }
    let (sn, cs) = state.config.theta.sin_cos();
    for s in &mut moved {
        let (r, l) = (s[R], s[L]);
        s[R] = r * cs - l * sn;
        s[L] = r * sn + l * cs;
    }
    WalkState {
        config: state.config,
        spinors: moved,
    }
}

pub fn walk_evolve(state: &WalkState, nsteps: usize) -> WalkState {
    (0..nsteps).fold(state.clone(), |s, _| walk_step(&s))
}

/// `exp(-i theta sigma_2) diag(e^{ik dx}, e^{-ik dx})` in the `[R, L]` basis.
pub fn walk_momentum_step(config: &LatticeConfig, k: f64) -> Mat2 {
    let kdx = k * config.dx;
    let (s, c) = config.theta.sin_cos();
    let coin = Mat2::new(
        C64::new(c, 0.0),
        C64::new(-s, 0.0),
        C64::new(s, 0.0),
        C64::new(c, 0.0),
    );
    let shift = Mat2::new(
        C64::from_polar(1.0, kdx),
        C64::default(),
        C64::default(),
        C64::from_polar(1.0, -kdx),
    );
    coin * shift
}

/// Continuum generator `i (k c sigma_3 - m c^2 sigma_2)`.
pub fn dirac_generator(config: &LatticeConfig, k: f64) -> Mat2 {
    let cl = config.light_speed();
    let mc2 = config.mass() * cl * cl;
    (linalg::sigma_z() * C64::new(k * cl, 0.0) - linalg::sigma_y() * C64::new(mc2, 0.0)) * C64::new(0.0, 1.0)
}

/// `|| (W(k) - I) / dt - G(k) ||` in operator norm.
pub fn generator_residual(config: &LatticeConfig, k: f64) -> f64 {
    let w = walk_momentum_step(config, k);
    let lhs = (w - Mat2::identity()) / C64::new(config.dt, 0.0);
    linalg::op_norm(&(lhs - dirac_generator(config, k)))
}

/// Largest `|walk - automaton|` amplitude difference over every site and every
/// step `0..=nsteps`, starting from one particle at `init`.
pub fn compare_one_particle(config: &LatticeConfig, init: Site, nsteps: usize) -> Result<f64> {
    let mut walk = WalkState::localized(config, init.cell, init.eps)?;
    let mut qca = FockState::from_particles(config, &[init])?;
    let mut worst = deviation(&walk, &qca)?;
    for _ in 0..nsteps {
        walk = walk_step(&walk);
        qca = crate::evolution::step(&qca);
        worst = worst.max(deviation(&walk, &qca)?);
    }
    Ok(worst)
}

fn deviation(walk: &WalkState, qca: &FockState) -> Result<f64> {
    if walk.config != *qca.config() {
        return Err(Error::ConfigMismatch);
    }
    let mut worst: f64 = 0.0;
    for cell in 0..walk.config.cells {
        for eps in [Eps::Minus, Eps::Plus] {
            let w = BasisState(1u128 << Site::new(cell, eps).bit());
            worst = worst.max((walk.amplitude(cell, eps) - qca.amplitude(w)).norm());
        }
    }
    // anything outside the one-particle sector is a deviation too
    let stray: f64 = qca
        .iter()
        .filter(|(b, _)| b.particle_count() != 1)
        .map(|(_, a)| a.norm())
        .fold(0.0, f64::max);
    Ok(worst.max(stray))
}

/// Wavepacket trace `step,cell,prob` for steps `0..=nsteps`.
pub fn wavepacket_trace(state: &WalkState, nsteps: usize) -> Csv {
    let mut csv = Csv::new(&["step", "cell", "prob"]);
    let mut s = state.clone();
    for t in 0..=nsteps {
        if t > 0 {
            s = walk_step(&s);
        }
        for (cell, p) in s.probabilities().iter().enumerate() {
            csv.row(&[t.to_string(), cell.to_string(), fmt_f64(*p)]);
        }
    }
    csv
}
