//! Experiment configuration files.
//!
//! A config is one JSON object:
//!
//! ```json
//! {
//!   "experiment": "wavepacket",
//!   "lattice": { "L": 64, "dx": 1.0, "dt": 1.0, "theta": 0.1, "boundary": "periodic" },
//!   "params": { "init": { "cell": 32, "eps": "+" }, "nsteps": 100 },
//!   "output_dir": "out/wavepacket",
//!   "seed": 7
//! }
//! ```
//!
//! `params` is specific to the experiment and may be omitted when every
//! parameter has a default. Unknown keys are rejected.

use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::algebra::ANTICOMMUTATOR_MAX_CELLS;
use crate::error::{Error, Result};
use crate::lattice::{sector_words, Boundary, LatticeConfig, Site};
use crate::nogo::{FootprintSpec, Lattice2D, MAX_LABELS};
use crate::spectral::{MAX_CALIBRATION_CELLS, MAX_DENSE_DIM, MAX_SEA_CELLS};

/// Longest run of automaton steps accepted from a config.
pub const MAX_STEPS: usize = 100_000;
/// Largest side of a witness-search lattice.
pub const MAX_WITNESS_SIDE: usize = 101;
/// Most random states in a unitarity run.
pub const MAX_SAMPLES: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UnitarityParams {
    #[serde(default = "default_samples")]
    pub samples: usize,
    /// Basis words per random state, at most.
    #[serde(default = "default_max_terms")]
    pub max_terms: usize,
    #[serde(default = "default_max_particles")]
    pub max_particles: usize,
    /// Steps of the light-cone check from `(L/2, +)`.
    #[serde(default)]
    pub light_cone_steps: usize,
}

fn default_samples() -> usize {
    200
}
fn default_max_terms() -> usize {
    8
}
fn default_max_particles() -> usize {
    4
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WavepacketParams {
    pub init: Site,
    pub nsteps: usize,
    /// Coin angles to compare at; defaults to the lattice angle.
    #[serde(default)]
    pub thetas: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScatterParams {
    /// Cell `x` of the two worked examples: `(x,+; x+1,-)` and `(x-1,+; x+1,-)`.
    pub cell: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnticommutationParams {
    /// Fock space truncation; defaults to the full space.
    #[serde(default)]
    pub max_particles: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HeisenbergParams {
    pub thetas: Vec<f64>,
    /// Angle for the bosonic negative control; skipped when absent.
    #[serde(default)]
    pub bosonic_theta: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DispersionParams {
    /// Compare dense one-particle eigenphases against the dispersion.
    #[serde(default = "yes")]
    pub eigen_check: bool,
    /// Points `theta = k dx = eps` for the convergence fit.
    #[serde(default)]
    pub eps_values: Vec<f64>,
}

fn yes() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiracLimitParams {
    /// Random `(theta, k dx)` pairs for the exponential identity.
    #[serde(default = "default_random_points")]
    pub samples: usize,
    /// Small-parameter scale of the Hamiltonian comparison.
    pub eps: f64,
}

fn default_random_points() -> usize {
    100
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectrumParams {
    /// Particle number of the compared sector.
    pub n: usize,
    /// Angles at which the parity calibration is repeated.
    #[serde(default)]
    pub calibration_thetas: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpecName {
    Full,
    Minimal,
    Trivial,
    #[serde(rename = "chain_1d")]
    Chain1d,
}

impl SpecName {
    pub fn build(self, labels: u8) -> FootprintSpec {
        match self {
            SpecName::Full => FootprintSpec::full(labels),
            SpecName::Minimal => FootprintSpec::minimal(),
            SpecName::Trivial => FootprintSpec::trivial(),
            SpecName::Chain1d => FootprintSpec::chain_1d(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Expect {
    Witness,
    None,
    Sat,
    Unsat,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WitnessCase {
    pub width: usize,
    pub height: usize,
    pub spec: SpecName,
    #[serde(default = "two")]
    pub labels: u8,
    pub expect: Expect,
}

fn two() -> u8 {
    2
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WitnessParams {
    /// Exclusion radius.
    pub d: i32,
    pub cases: Vec<WitnessCase>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CspCase {
    pub dimension: u8,
    pub radius: i32,
    pub width: usize,
    pub height: usize,
    pub spec: SpecName,
    #[serde(default = "two")]
    pub labels: u8,
    pub expect: Expect,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CspParams {
    pub cases: Vec<CspCase>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct NoParams {}

/// The experiment and its parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum Experiment {
    Unitarity(UnitarityParams),
    Wavepacket(WavepacketParams),
    TwoParticleScatter(ScatterParams),
    Anticommutation(AnticommutationParams),
    HeisenbergCheck(HeisenbergParams),
    DispersionSweep(DispersionParams),
    DiracLimit(DiracLimitParams),
    Spectrum(SpectrumParams),
    DiracSea(NoParams),
    NogoWitness(WitnessParams),
    NogoCsp(CspParams),
}

/// Names accepted in the `experiment` field, with a one-line summary each.
pub const EXPERIMENTS: [(&str, &str); 11] = [
    ("unitarity", "norm preservation on random sparse states, vacuum invariance, light cone"),
    ("wavepacket", "one-particle automaton against the dense quantum walk"),
    ("two_particle_scatter", "two-particle worked examples: adjacent pair and head-on collision"),
    ("anticommutation", "canonical anticommutators of every ladder pair on a small lattice"),
    ("heisenberg_check", "fitted Heisenberg images of bulk ladder operators, with bosonic control"),
    ("dispersion_sweep", "dispersion table, dense one-particle spectrum, convergence order"),
    ("dirac_limit", "effective Hamiltonian against the Dirac Hamiltonian"),
    ("spectrum", "multi-particle spectrum against free-fermion pair sums on the calibrated grid"),
    ("dirac_sea", "filled negative band: eigenstate check and excitation gaps"),
    ("nogo_witness", "witness triple search on a grid"),
    ("nogo_csp", "satisfiability of local sign rules"),
];

impl Experiment {
    pub fn name(&self) -> &'static str {
        match self {
            Experiment::Unitarity(_) => "unitarity",
            Experiment::Wavepacket(_) => "wavepacket",
            Experiment::TwoParticleScatter(_) => "two_particle_scatter",
            Experiment::Anticommutation(_) => "anticommutation",
            Experiment::HeisenbergCheck(_) => "heisenberg_check",
            Experiment::DispersionSweep(_) => "dispersion_sweep",
            Experiment::DiracLimit(_) => "dirac_limit",
            Experiment::Spectrum(_) => "spectrum",
            Experiment::DiracSea(_) => "dirac_sea",
            Experiment::NogoWitness(_) => "nogo_witness",
            Experiment::NogoCsp(_) => "nogo_csp",
        }
    }

    fn params_json(&self) -> Value {
        let v = match self {
            Experiment::Unitarity(p) => serde_json::to_value(p),
            Experiment::Wavepacket(p) => serde_json::to_value(p),
            Experiment::TwoParticleScatter(p) => serde_json::to_value(p),
            Experiment::Anticommutation(p) => serde_json::to_value(p),
            Experiment::HeisenbergCheck(p) => serde_json::to_value(p),
            Experiment::DispersionSweep(p) => serde_json::to_value(p),
            Experiment::DiracLimit(p) => serde_json::to_value(p),
            Experiment::Spectrum(p) => serde_json::to_value(p),
            Experiment::DiracSea(p) => serde_json::to_value(p),
            Experiment::NogoWitness(p) => serde_json::to_value(p),
            Experiment::NogoCsp(p) => serde_json::to_value(p),
        };
        v.expect("parameters serialize")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub lattice: LatticeConfig,
    pub output_dir: Option<PathBuf>,
    pub seed: u64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Envelope<P> {
    #[allow(dead_code)]
    experiment: String,
    lattice: LatticeConfig,
    params: Option<P>,
    #[serde(default)]
    output_dir: Option<PathBuf>,
    #[serde(default)]
    seed: u64,
}

fn parse_error(e: serde_json::Error) -> Error {
    // serde_json appends "at line L column C" when the position is known
    Error::Parse(e.to_string())
}

type Parts<P> = (Option<P>, LatticeConfig, Option<PathBuf>, u64);

fn envelope<P: DeserializeOwned>(text: &str) -> Result<Parts<P>> {
    let env: Envelope<P> = serde_json::from_str(text).map_err(parse_error)?;
    Ok((env.params, env.lattice, env.output_dir, env.seed))
}

fn required<P>(params: Option<P>) -> Result<P> {
    params.ok_or_else(|| Error::Parse("missing field `params`".into()))
}

/// An absent `params` means `{}`: every field has a default.
fn defaulted<P: DeserializeOwned>(params: Option<P>) -> Result<P> {
    match params {
        Some(p) => Ok(p),
        None => serde_json::from_value(serde_json::json!({})).map_err(parse_error),
    }
}

impl ExperimentConfig {
    /// Parses a config, reporting the line and column of malformed input.
    pub fn parse(text: &str) -> Result<Self> {
        let head: Value = serde_json::from_str(text).map_err(parse_error)?;
        let name = head
            .get("experiment")
            .ok_or_else(|| Error::Parse("missing field `experiment`".into()))?
            .as_str()
            .ok_or_else(|| Error::Parse("field `experiment` must be a string".into()))?;
        macro_rules! with {
            ($variant:ident, $fill:ident) => {{
                let (p, lattice, output_dir, seed) = envelope(text)?;
                ExperimentConfig {
                    experiment: Experiment::$variant($fill(p)?),
                    lattice,
                    output_dir,
                    seed,
                }
            }};
        }
        let config = match name {
            "unitarity" => with!(Unitarity, defaulted),
            "wavepacket" => with!(Wavepacket, required),
            "two_particle_scatter" => with!(TwoParticleScatter, required),
            "anticommutation" => with!(Anticommutation, defaulted),
            "heisenberg_check" => with!(HeisenbergCheck, required),
            "dispersion_sweep" => with!(DispersionSweep, defaulted),
            "dirac_limit" => with!(DiracLimit, required),
            "spectrum" => with!(Spectrum, required),
            "dirac_sea" => with!(DiracSea, defaulted),
            "nogo_witness" => with!(NogoWitness, required),
            "nogo_csp" => with!(NogoCsp, required),
            other => {
                let known: Vec<&str> = EXPERIMENTS.iter().map(|(n, _)| *n).collect();
                return Err(Error::Parse(format!(
                    "unknown experiment `{other}`; expected one of {}",
                    known.join(", ")
                )));
            }
        };
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Canonical parameter echo, without the output directory.
    pub fn parameters(&self) -> Value {
        serde_json::json!({
            "experiment": self.experiment.name(),
            "lattice": serde_json::to_value(self.lattice).expect("lattice serializes"),
            "params": self.experiment.params_json(),
            "seed": self.seed,
        })
    }

    /// Bounds and resource checks, without running anything.
    pub fn validate(&self) -> Result<()> {
        let lat = &self.lattice;
        lat.validate()?;
        let in_range = |cell: usize| -> Result<()> {
            if cell < lat.cells {
                Ok(())
            } else {
                Err(Error::OutOfRange {
                    cell,
                    cells: lat.cells,
                })
            }
        };
        let finite = |xs: &[f64], what: &str| -> Result<()> {
            if xs.iter().all(|x| x.is_finite()) {
                Ok(())
            } else {
                Err(Error::InvalidConfig(format!("{what} must be finite")))
            }
        };
        let periodic = || -> Result<()> {
            if lat.boundary == Boundary::Periodic {
                Ok(())
            } else {
                Err(Error::BoundaryMode)
            }
        };
        match &self.experiment {
            Experiment::Unitarity(p) => {
                if p.samples > MAX_SAMPLES {
                    return Err(Error::Resource(format!("samples = {} exceeds the cap of {MAX_SAMPLES}", p.samples)));
                }
                if p.max_terms == 0 {
                    return Err(Error::InvalidConfig("max_terms must be at least 1".into()));
                }
                if p.max_particles > lat.sites() {
                    return Err(Error::InvalidConfig(format!(
                        "max_particles = {} exceeds the {} sites",
                        p.max_particles,
                        lat.sites()
                    )));
                }
                if p.light_cone_steps > MAX_STEPS {
                    return Err(Error::Resource(format!("light_cone_steps exceeds the cap of {MAX_STEPS}")));
                }
            }
            Experiment::Wavepacket(p) => {
                in_range(p.init.cell)?;
                finite(&p.thetas, "thetas")?;
                if p.nsteps > MAX_STEPS {
                    return Err(Error::Resource(format!("nsteps = {} exceeds the cap of {MAX_STEPS}", p.nsteps)));
                }
            }
            Experiment::TwoParticleScatter(p) => {
                if p.cell == 0 || p.cell + 1 >= lat.cells {
                    return Err(Error::InvalidConfig(format!(
                        "cell {} needs both neighbors inside the lattice of {} cells",
                        p.cell, lat.cells
                    )));
                }
            }
            Experiment::Anticommutation(p) => {
                if lat.cells > ANTICOMMUTATOR_MAX_CELLS {
                    return Err(Error::Resource(format!(
                        "anticommutators need L <= {ANTICOMMUTATOR_MAX_CELLS}, got L = {}",
                        lat.cells
                    )));
                }
                if let Some(n) = p.max_particles {
                    if n as usize > lat.sites() {
                        return Err(Error::InvalidConfig(format!("max_particles = {n} exceeds the {} sites", lat.sites())));
                    }
                }
            }
            Experiment::HeisenbergCheck(p) => {
                finite(&p.thetas, "thetas")?;
                finite(&p.bosonic_theta.into_iter().collect::<Vec<_>>(), "bosonic_theta")?;
                if p.thetas.is_empty() {
                    return Err(Error::InvalidConfig("thetas is empty".into()));
                }
                if lat.boundary != Boundary::Open {
                    // seam hops on a ring carry a parity-dependent sign
                    return Err(Error::InvalidConfig("Heisenberg fits need an open chain".into()));
                }
                if lat.cells < 5 {
                    return Err(Error::InvalidConfig("an open chain needs L >= 5 to have bulk cells".into()));
                }
                let dim: usize = (0..=3).map(|n| sector_words(lat.sites() as u32, n).len()).sum();
                if dim > 50_000 {
                    return Err(Error::Resource(format!(
                        "spanning set of {dim} words exceeds the cap of 50000"
                    )));
                }
            }
            Experiment::DispersionSweep(p) => {
                finite(&p.eps_values, "eps_values")?;
                if p.eps_values.iter().any(|e| *e <= 0.0) {
                    return Err(Error::InvalidConfig("eps_values must be positive".into()));
                }
                if p.eps_values.len() == 1 {
                    return Err(Error::InvalidConfig("a convergence fit needs at least two eps values".into()));
                }
                if p.eigen_check {
                    periodic()?;
                    if lat.sites() > MAX_DENSE_DIM {
                        return Err(Error::Resource(format!(
                            "one-particle dimension {} exceeds the cap of {MAX_DENSE_DIM}",
                            lat.sites()
                        )));
                    }
                }
            }
            Experiment::DiracLimit(p) => {
                if !(p.eps > 0.0 && p.eps.is_finite()) {
                    return Err(Error::InvalidConfig("eps must be positive".into()));
                }
                if p.samples > MAX_SAMPLES {
                    return Err(Error::Resource(format!("samples = {} exceeds the cap of {MAX_SAMPLES}", p.samples)));
                }
            }
            Experiment::Spectrum(p) => {
                periodic()?;
                finite(&p.calibration_thetas, "calibration_thetas")?;
                if p.n > lat.sites() {
                    return Err(Error::InvalidConfig(format!("n = {} exceeds the {} sites", p.n, lat.sites())));
                }
                let dim = sector_words(lat.sites() as u32, p.n as u32).len();
                if dim > MAX_DENSE_DIM {
                    return Err(Error::Resource(format!(
                        "sector dimension {dim} exceeds the cap of {MAX_DENSE_DIM}"
                    )));
                }
                if lat.cells > MAX_CALIBRATION_CELLS {
                    return Err(Error::Resource(format!(
                        "parity calibration needs L <= {MAX_CALIBRATION_CELLS}, got L = {}",
                        lat.cells
                    )));
                }
            }
            Experiment::DiracSea(_) => {
                periodic()?;
                if lat.cells > MAX_SEA_CELLS {
                    return Err(Error::Resource(format!(
                        "Dirac sea needs L <= {MAX_SEA_CELLS}, got L = {}",
                        lat.cells
                    )));
                }
            }
            Experiment::NogoWitness(p) => {
                if p.d < 0 {
                    return Err(Error::InvalidConfig("d must be non-negative".into()));
                }
                for c in &p.cases {
                    check_grid(c.width, c.height, c.labels)?;
                    if c.width > MAX_WITNESS_SIDE || c.height > MAX_WITNESS_SIDE {
                        return Err(Error::Resource(format!(
                            "witness lattice {}x{} exceeds the cap of {MAX_WITNESS_SIDE} per side",
                            c.width, c.height
                        )));
                    }
                    if !matches!(c.expect, Expect::Witness | Expect::None) {
                        return Err(Error::InvalidConfig("witness cases expect `witness` or `none`".into()));
                    }
                }
            }
            Experiment::NogoCsp(p) => {
                for c in &p.cases {
                    check_grid(c.width, c.height, c.labels)?;
                    if !matches!(c.expect, Expect::Sat | Expect::Unsat) {
                        return Err(Error::InvalidConfig("csp cases expect `sat` or `unsat`".into()));
                    }
                    if c.dimension == 1 {
                        // the automaton comparison runs on the lattice of the config
                        if lat.boundary != Boundary::Open {
                            return Err(Error::InvalidConfig("one-dimensional csp cases need an open lattice".into()));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

fn check_grid(width: usize, height: usize, labels: u8) -> Result<()> {
    if width == 0 || height == 0 {
        return Err(Error::InvalidConfig("grid sides must be positive".into()));
    }
    if labels == 0 || labels > MAX_LABELS {
        return Err(Error::InvalidConfig(format!("labels must be in 1..={MAX_LABELS}")));
    }
    let _ = Lattice2D::new(width, height);
    Ok(())
}
