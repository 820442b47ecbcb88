//! Finite-lattice Fock space of the automaton.
//!
//! Every cell `j` carries two fermionic sites, `(j, -)` and `(j, +)`. A basis
//! state is an occupation word with bit `2j` for `(j, -)` and bit `2j + 1` for
//! `(j, +)`, so ascending bit index is exactly the canonical site order (cell
//! ascending, `-` before `+` within a cell). States are sparse maps from
//! occupation words to complex amplitudes.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Amplitudes with modulus at or below this are dropped after each linear operation.
pub const PRUNE_THRESHOLD: f64 = 1e-14;

/// Largest supported lattice: two sites per cell in a 128-bit word.
pub const MAX_CELLS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    #[default]
    Periodic,
    Open,
}

/// Physical and discretization parameters of the lattice.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeConfig {
    #[serde(rename = "L")]
    pub cells: usize,
    #[serde(default = "one")]
    pub dx: f64,
    #[serde(default = "one")]
    pub dt: f64,
    pub theta: f64,
    #[serde(default)]
    pub boundary: Boundary,
}

fn one() -> f64 {
    1.0
}

impl LatticeConfig {
    /// Unit spacing and unit time step.
    pub fn new(cells: usize, theta: f64, boundary: Boundary) -> Result<Self> {
        Self::with_spacing(cells, 1.0, 1.0, theta, boundary)
    }

    pub fn with_spacing(cells: usize, dx: f64, dt: f64, theta: f64, boundary: Boundary) -> Result<Self> {
        let config = LatticeConfig {
            cells,
            dx,
            dt,
            theta,
            boundary,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if self.cells < 2 {
            return Err(Error::InvalidConfig(format!("L = {} (need L >= 2)", self.cells)));
        }
        if self.cells > MAX_CELLS {
            return Err(Error::InvalidConfig(format!(
                "L = {} exceeds the {MAX_CELLS}-cell word size",
                self.cells
            )));
        }
        if !(self.dx > 0.0 && self.dx.is_finite()) {
            return Err(Error::InvalidConfig(format!("dx = {} (need dx > 0)", self.dx)));
        }
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::InvalidConfig(format!("dt = {} (need dt > 0)", self.dt)));
        }
        if !self.theta.is_finite() {
            return Err(Error::InvalidConfig("theta must be finite".into()));
        }
        Ok(())
    }

    /// Speed of light `c = dx / dt`.
    pub fn light_speed(&self) -> f64 {
        self.dx / self.dt
    }

    /// Mass `m = theta * dt / dx^2`, with hbar = 1.
    pub fn mass(&self) -> f64 {
        self.theta * self.dt / (self.dx * self.dx)
    }

    pub fn sites(&self) -> usize {
        2 * self.cells
    }

    pub fn with_theta(&self, theta: f64) -> Self {
        LatticeConfig { theta, ..*self }
    }

    pub fn with_boundary(&self, boundary: Boundary) -> Self {
        LatticeConfig { boundary, ..*self }
    }

    /// Cell distance, measured around the ring under periodic boundary.
    pub fn cell_distance(&self, a: usize, b: usize) -> usize {
        let d = a.abs_diff(b);
        match self.boundary {
            Boundary::Periodic => d.min(self.cells - d),
            Boundary::Open => d,
        }
    }
}

/// Internal label of a site.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Eps {
    #[serde(rename = "-")]
    Minus,
    #[serde(rename = "+")]
    Plus,
}

impl Eps {
    pub fn sign(self) -> f64 {
        match self {
            Eps::Minus => -1.0,
            Eps::Plus => 1.0,
        }
    }

    pub fn flip(self) -> Eps {
        match self {
            Eps::Minus => Eps::Plus,
            Eps::Plus => Eps::Minus,
        }
    }
}

impl fmt::Display for Eps {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Eps::Minus => "-",
            Eps::Plus => "+",
        })
    }
}

/// A (cell, label) pair. The derived order is the canonical order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Site {
    pub cell: usize,
    pub eps: Eps,
}

impl Site {
    pub fn new(cell: usize, eps: Eps) -> Self {
        Site { cell, eps }
    }

    pub fn bit(self) -> u32 {
        (2 * self.cell + usize::from(self.eps == Eps::Plus)) as u32
    }

    pub fn from_bit(bit: u32) -> Self {
        let eps = if bit.is_multiple_of(2) { Eps::Minus } else { Eps::Plus };
        Site {
            cell: (bit / 2) as usize,
            eps,
        }
    }
}

impl fmt::Display for Site {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.cell, self.eps)
    }
}

/// Occupation word over the `2L` sites.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct BasisState(pub u128);

impl BasisState {
    pub const EMPTY: BasisState = BasisState(0);

    pub fn is_occupied(self, bit: u32) -> bool {
        self.0 >> bit & 1 == 1
    }

    pub fn particle_count(self) -> u32 {
        self.0.count_ones()
    }

    /// Number of occupied sites strictly before `bit` in canonical order.
    pub fn predecessors(self, bit: u32) -> u32 {
        (self.0 & ((1u128 << bit) - 1)).count_ones()
    }

    pub fn with(self, bit: u32) -> Self {
        BasisState(self.0 | 1u128 << bit)
    }

    pub fn without(self, bit: u32) -> Self {
        BasisState(self.0 & !(1u128 << bit))
    }

    /// Occupied bit indices, ascending.
    pub fn bits(self) -> impl Iterator<Item = u32> {
        let mut rest = self.0;
        std::iter::from_fn(move || {
            if rest == 0 {
                None
            } else {
                let b = rest.trailing_zeros();
                rest &= rest - 1;
                Some(b)
            }
        })
    }

    pub fn sites(self) -> impl Iterator<Item = Site> {
        self.bits().map(Site::from_bit)
    }

    /// Binary string with site `(0,-)` first.
    pub fn to_bit_string(self, cells: usize) -> String {
        (0..2 * cells as u32)
            .map(|b| if self.is_occupied(b) { '1' } else { '0' })
            .collect()
    }

    pub fn from_bit_string(s: &str) -> Result<Self> {
        let mut word = 0u128;
        for (i, ch) in s.chars().enumerate() {
            match ch {
                '0' => {}
                '1' if i < 128 => word |= 1u128 << i,
                _ => return Err(Error::Parse(format!("bad occupation string {s:?}"))),
            }
        }
        Ok(BasisState(word))
    }
}

/// Canonically ordered particle positions of a basis state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParticleList(Vec<Site>);

impl ParticleList {
    /// Sorts into canonical order; rejects repeated sites.
    pub fn new(mut sites: Vec<Site>) -> Result<Self> {
        sites.sort();
        if let Some(w) = sites.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateSite {
                cell: w[0].cell,
                eps: w[0].eps,
            });
        }
        Ok(ParticleList(sites))
    }

    pub fn sites(&self) -> &[Site] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

pub fn basis_from_particles(config: &LatticeConfig, particles: &[Site]) -> Result<BasisState> {
    if let Some(p) = particles.iter().find(|p| p.cell >= config.cells) {
        return Err(Error::OutOfRange {
            cell: p.cell,
            cells: config.cells,
        });
    }
    let list = ParticleList::new(particles.to_vec())?;
    Ok(list
        .sites()
        .iter()
        .fold(BasisState::EMPTY, |b, s| b.with(s.bit())))
}

pub fn particles_from_basis(b: BasisState) -> ParticleList {
    ParticleList(b.sites().collect())
}

/// Sparse Fock-space vector.
#[derive(Debug, Clone, PartialEq)]
pub struct FockState {
    config: LatticeConfig,
    amps: BTreeMap<BasisState, C64>,
}

impl FockState {
    pub fn zero(config: &LatticeConfig) -> Self {
        FockState {
            config: *config,
            amps: BTreeMap::new(),
        }
    }

    pub fn vacuum(config: &LatticeConfig) -> Self {
        Self::basis(config, BasisState::EMPTY)
    }

    pub fn basis(config: &LatticeConfig, b: BasisState) -> Self {
        let mut amps = BTreeMap::new();
        amps.insert(b, C64::new(1.0, 0.0));
        FockState { config: *config, amps }
    }

    pub fn from_particles(config: &LatticeConfig, particles: &[Site]) -> Result<Self> {
        Ok(Self::basis(config, basis_from_particles(config, particles)?))
    }

    /// Sums duplicate words, then prunes.
    pub fn from_amplitudes<I>(config: &LatticeConfig, entries: I) -> Self
    where
        I: IntoIterator<Item = (BasisState, C64)>,
    {
        let mut amps: BTreeMap<BasisState, C64> = BTreeMap::new();
        for (b, a) in entries {
            *amps.entry(b).or_default() += a;
        }
        let mut s = FockState { config: *config, amps };
        s.prune();
        s
    }

    pub(crate) fn from_map(config: &LatticeConfig, amps: BTreeMap<BasisState, C64>) -> Self {
        let mut s = FockState { config: *config, amps };
        s.prune();
        s
    }

    pub fn config(&self) -> &LatticeConfig {
        &self.config
    }

    pub fn amplitude(&self, b: BasisState) -> C64 {
        self.amps.get(&b).copied().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (BasisState, C64)> + '_ {
        self.amps.iter().map(|(b, a)| (*b, *a))
    }

    pub fn len(&self) -> usize {
        self.amps.len()
    }

    pub fn is_zero(&self) -> bool {
        self.amps.is_empty()
    }

    /// Same as [`FockState::is_zero`]: no stored amplitudes.
    pub fn is_empty(&self) -> bool {
        self.amps.is_empty()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.values().map(|a| a.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn normalized(&self) -> Self {
        let n = self.norm();
        if n == 0.0 {
            return self.clone();
        }
        self.scale(C64::new(1.0 / n, 0.0))
    }

    pub fn scale(&self, factor: C64) -> Self {
        let amps = self.amps.iter().map(|(b, a)| (*b, a * factor)).collect();
        Self::from_map(&self.config, amps)
    }

    /// `self + factor * other`.
    pub fn add_scaled(&self, factor: C64, other: &FockState) -> Result<Self> {
        if self.config != other.config {
            return Err(Error::ConfigMismatch);
        }
        let mut amps = self.amps.clone();
        for (b, a) in &other.amps {
            *amps.entry(*b).or_default() += a * factor;
        }
        Ok(Self::from_map(&self.config, amps))
    }

    pub fn prune(&mut self) {
        self.amps.retain(|_, a| a.norm() > PRUNE_THRESHOLD);
    }

    /// Largest amplitude difference over the union of supports.
    pub fn max_abs_diff(&self, other: &FockState) -> f64 {
        let mut m: f64 = 0.0;
        for (b, a) in &self.amps {
            m = m.max((a - other.amplitude(*b)).norm());
        }
        for (b, a) in &other.amps {
            if !self.amps.contains_key(b) {
                m = m.max(a.norm());
            }
        }
        m
    }

    pub fn sector_project(&self, n: u32) -> Self {
        let amps = self
            .amps
            .iter()
            .filter(|(b, _)| b.particle_count() == n)
            .map(|(b, a)| (*b, *a))
            .collect();
        FockState {
            config: self.config,
            amps,
        }
    }

    /// Particle numbers present in the support.
    pub fn particle_numbers(&self) -> Vec<u32> {
        let mut ns: Vec<u32> = self.amps.keys().map(|b| b.particle_count()).collect();
        ns.sort_unstable();
        ns.dedup();
        ns
    }

    /// JSON dump: `{"L": .., "amplitudes": [{"bits", "re", "im"}, ..]}`.
    pub fn to_json(&self) -> Value {
        let amplitudes: Vec<Value> = self
            .amps
            .iter()
            .map(|(b, a)| {
                json!({
                    "bits": b.to_bit_string(self.config.cells),
                    "re": a.re,
                    "im": a.im,
                })
            })
            .collect();
        json!({ "L": self.config.cells, "amplitudes": amplitudes })
    }

    /// Inverse of [`FockState::to_json`]; the dump carries only `L`, so the
    /// remaining parameters come from `config`.
    pub fn from_json(config: &LatticeConfig, value: &Value) -> Result<Self> {
        let cells = value["L"]
            .as_u64()
            .ok_or_else(|| Error::Parse("state dump lacks integer field \"L\"".into()))?;
        if cells as usize != config.cells {
            return Err(Error::ConfigMismatch);
        }
        let entries = value["amplitudes"]
            .as_array()
            .ok_or_else(|| Error::Parse("state dump lacks array field \"amplitudes\"".into()))?;
        let mut out = Vec::with_capacity(entries.len());
        for e in entries {
            let bits = e["bits"]
                .as_str()
                .ok_or_else(|| Error::Parse("amplitude entry lacks \"bits\"".into()))?;
            if bits.len() != 2 * config.cells {
                return Err(Error::Parse(format!("bit string {bits:?} has wrong length")));
            }
            let re = e["re"].as_f64().ok_or_else(|| Error::Parse("missing \"re\"".into()))?;
            let im = e["im"].as_f64().ok_or_else(|| Error::Parse("missing \"im\"".into()))?;
            out.push((BasisState::from_bit_string(bits)?, C64::new(re, im)));
        }
        Ok(Self::from_amplitudes(config, out))
    }
}

pub fn vacuum(config: &LatticeConfig) -> FockState {
    FockState::vacuum(config)
}

/// `<a|b>`, conjugate-linear in the first argument.
pub fn inner_product(a: &FockState, b: &FockState) -> Result<C64> {
    if a.config != b.config {
        return Err(Error::ConfigMismatch);
    }
    let (small, large, conj_small) = if a.amps.len() <= b.amps.len() {
        (a, b, true)
    } else {
        (b, a, false)
    };
    let mut acc = C64::default();
    for (k, x) in &small.amps {
        if let Some(y) = large.amps.get(k) {
            acc += if conj_small { x.conj() * y } else { y.conj() * x };
        }
    }
    Ok(acc)
}

pub fn sector_project(state: &FockState, n: u32) -> FockState {
    state.sector_project(n)
}

/// All occupation words on `sites` sites with exactly `n` particles, ascending.
pub fn sector_words(sites: u32, n: u32) -> Vec<BasisState> {
    fn rec(start: u32, sites: u32, left: u32, word: u128, out: &mut Vec<u128>) {
        if left == 0 {
            out.push(word);
            return;
        }
        for b in start..=sites - left {
            rec(b + 1, sites, left - 1, word | 1u128 << b, out);
        }
    }
    let mut out = Vec::new();
    if n <= sites {
        rec(0, sites, n, 0, &mut out);
    }
    out.sort_unstable();
    out.into_iter().map(BasisState).collect()
}
