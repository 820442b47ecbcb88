//! Experiment execution and file emission.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use super::config::*;
use super::manifest::{sha256_hex, Check, Manifest};
use crate::algebra::{anticommutator, deviation_from_scaled_identity, heisenberg_fit, is_bulk_cell, LadderKind, LadderOp};
use crate::error::{Error, Result};
use crate::evolution::{light_cone_check, step, StepRule};
use crate::io::{fmt_f64, to_json_string, Csv};
use crate::lattice::{basis_from_particles, BasisState, Eps, FockState, LatticeConfig, Site, C64};
use crate::linalg::{self, phase_multiset_distance};
use crate::nogo::{find_witness_triple, sign_csp, verify_rule_against_automaton, Certificate, CspOutcome, Lattice2D};
use crate::spectral::{
    build_dirac_sea, calibrate_parity_sector, dirac_hamiltonian, dispersion_csv, dispersion_error, effective_hamiltonian,
    eigenphase, loglog_slope, n_particle_eigenphases, permutation_eigenphases, predicted_eigenphases,
    sea_excitation_gaps, step_matrix, step_overlap, Excitation, MomentumGrid,
};
use crate::walk::{compare_one_particle, wavepacket_trace, WalkState};

/// Result of an experiment before anything touches the disk.
#[derive(Debug, Clone, Default)]
pub struct Outcome {
    pub checks: Vec<Check>,
    pub diagnostics: BTreeMap<String, f64>,
    /// File name and contents, in emission order.
    pub files: Vec<(String, String)>,
}

impl Outcome {
    fn check(&mut self, c: Check) {
        self.checks.push(c);
    }

    fn note(&mut self, key: impl Into<String>, value: f64) {
        self.diagnostics.insert(key.into(), value);
    }

    fn file(&mut self, name: impl Into<String>, contents: String) {
        self.files.push((name.into(), contents));
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Validates and runs an experiment in memory.
pub fn execute(config: &ExperimentConfig) -> Result<Outcome> {
    config.validate()?;
    let lat = &config.lattice;
    let mut out = Outcome::default();
    match &config.experiment {
        Experiment::Unitarity(p) => unitarity(lat, p, config.seed, &mut out),
        Experiment::Wavepacket(p) => wavepacket(lat, p, &mut out)?,
        Experiment::TwoParticleScatter(p) => scatter(lat, p, &mut out)?,
        Experiment::Anticommutation(p) => anticommutation(lat, p, &mut out)?,
        Experiment::HeisenbergCheck(p) => heisenberg(lat, p, &mut out)?,
        Experiment::DispersionSweep(p) => dispersion(lat, p, &mut out)?,
        Experiment::DiracLimit(p) => dirac_limit(lat, p, config.seed, &mut out),
        Experiment::Spectrum(p) => spectrum(lat, p, &mut out)?,
        Experiment::DiracSea(_) => dirac_sea(lat, &mut out)?,
        Experiment::NogoWitness(p) => nogo_witness(p, &mut out)?,
        Experiment::NogoCsp(p) => nogo_csp(lat, p, &mut out)?,
    }
    Ok(out)
}

/// Runs an experiment and writes its files plus `manifest.json` into `dir`.
/// `raw` is the config as read from disk; its digest goes into the manifest.
pub fn run(config: &ExperimentConfig, raw: &[u8], dir: &Path) -> Result<Manifest> {
    let outcome = execute(config)?;
    fs::create_dir_all(dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
    let mut outputs = Vec::with_capacity(outcome.files.len());
    for (name, contents) in &outcome.files {
        let path = dir.join(name);
        fs::write(&path, contents).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        outputs.push(name.clone());
    }
    let manifest = Manifest {
        experiment: config.experiment.name().to_string(),
        config_sha256: sha256_hex(raw),
        parameters: config.parameters(),
        passed: outcome.passed(),
        checks: outcome.checks,
        diagnostics: outcome.diagnostics,
        outputs,
    };
    let path = dir.join("manifest.json");
    fs::write(&path, to_json_string(&manifest)?).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    Ok(manifest)
}

/// Output directory: the override, else the config's own, else `out/<experiment>`.
pub fn output_dir(config: &ExperimentConfig, overridden: Option<&Path>) -> PathBuf {
    overridden
        .map(Path::to_path_buf)
        .or_else(|| config.output_dir.clone())
        .unwrap_or_else(|| Path::new("out").join(config.experiment.name()))
}

/// Loads, runs and writes the experiment described by the file at `path`.
pub fn run_file(path: &Path, overridden: Option<&Path>) -> Result<Manifest> {
    let raw = fs::read(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let text = std::str::from_utf8(&raw).map_err(|e| Error::Parse(format!("config is not UTF-8: {e}")))?;
    let config = ExperimentConfig::parse(text)?;
    run(&config, &raw, &output_dir(&config, overridden))
}

fn c64(re: f64) -> C64 {
    C64::new(re, 0.0)
}

fn random_state(config: &LatticeConfig, rng: &mut ChaCha8Rng, max_terms: usize, max_particles: usize) -> FockState {
    let terms = rng.random_range(1..=max_terms);
    let entries: Vec<(BasisState, C64)> = (0..terms)
        .map(|_| {
            let n = rng.random_range(0..=max_particles);
            let word = index::sample(rng, config.sites(), n)
                .iter()
                .fold(0u128, |w, b| w | (1u128 << b));
            let amp = C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            (BasisState(word), amp)
        })
        .collect();
    FockState::from_amplitudes(config, entries)
}

fn unitarity(lat: &LatticeConfig, p: &UnitarityParams, seed: u64, out: &mut Outcome) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut csv = Csv::new(&["sample", "terms", "norm_in", "norm_out", "ratio_minus_one"]);
    let mut worst: f64 = 0.0;
    for i in 0..p.samples {
        let psi = random_state(lat, &mut rng, p.max_terms, p.max_particles);
        let n0 = psi.norm();
        if n0 == 0.0 {
            continue;
        }
        let n1 = step(&psi).norm();
        let dev = n1 / n0 - 1.0;
        worst = worst.max(dev.abs());
        csv.row(&[i.to_string(), psi.len().to_string(), fmt_f64(n0), fmt_f64(n1), fmt_f64(dev)]);
    }
    out.check(Check::at_most("norm_ratio_deviation", worst, 1e-12));
    let vac = FockState::vacuum(lat);
    out.check(Check::at_most("vacuum_fixed", step(&vac).max_abs_diff(&vac), 0.0));
    if p.light_cone_steps > 0 {
        out.check(Check::at_most("light_cone_leakage", light_cone_check(lat, p.light_cone_steps), 0.0));
    }
    out.file("unitarity.csv", csv.as_str().to_string());
}

fn wavepacket(lat: &LatticeConfig, p: &WavepacketParams, out: &mut Outcome) -> Result<()> {
    let thetas = if p.thetas.is_empty() { vec![lat.theta] } else { p.thetas.clone() };
    for (i, theta) in thetas.iter().enumerate() {
        let cfg = lat.with_theta(*theta);
        let dev = compare_one_particle(&cfg, p.init, p.nsteps)?;
        out.check(Check::at_most(format!("oracle_deviation[theta={theta}]"), dev, 1e-12));
        let trace = wavepacket_trace(&WalkState::localized(&cfg, p.init.cell, p.init.eps)?, p.nsteps);
        out.file(format!("wavepacket_{i}.csv"), trace.as_str().to_string());
    }
    Ok(())
}

fn two_particle(lat: &LatticeConfig, terms: &[(Site, Site, f64)]) -> Result<FockState> {
    let mut entries = Vec::with_capacity(terms.len());
    for (a, b, amp) in terms {
        entries.push((basis_from_particles(lat, &[*a, *b])?, c64(*amp)));
    }
    Ok(FockState::from_amplitudes(lat, entries))
}

fn scatter(lat: &LatticeConfig, p: &ScatterParams, out: &mut Outcome) -> Result<()> {
    let x = p.cell;
    let (s, c) = lat.theta.sin_cos();
    let site = Site::new;
    let (m, pl) = (Eps::Minus, Eps::Plus);

    // neighbors moving apart: (x,+) and (x+1,-) pass each other
    let input = FockState::from_particles(lat, &[site(x, pl), site(x + 1, m)])?;
    let got = step(&input);
    let want = two_particle(
        lat,
        &[
            (site(x, m), site(x + 1, pl), -c * c),
            (site(x, m), site(x + 1, m), -c * s),
            (site(x, pl), site(x + 1, pl), c * s),
            (site(x, pl), site(x + 1, m), s * s),
        ],
    )?;
    out.check(Check::at_most("adjacent_pair_coefficients", got.max_abs_diff(&want), 1e-14));
    out.file(
        "scatter_adjacent.json",
        to_json_string(&json!({"input": input.to_json(), "output": got.to_json(), "expected": want.to_json()}))?,
    );

    // head-on collision onto the same cell
    let input = FockState::from_particles(lat, &[site(x - 1, pl), site(x + 1, m)])?;
    let got = step(&input);
    let want = two_particle(lat, &[(site(x, m), site(x, pl), -1.0)])?;
    let target = basis_from_particles(lat, &[site(x, m), site(x, pl)])?;
    out.check(Check::at_most("collision_phase", (got.amplitude(target) - c64(-1.0)).norm(), 1e-14));
    out.check(Check::at_most("collision_state", got.max_abs_diff(&want), 1e-14));
    out.note("collision_phase_over_pi", got.amplitude(target).arg() / std::f64::consts::PI);
    out.file(
        "scatter_collision.json",
        to_json_string(&json!({"input": input.to_json(), "output": got.to_json(), "expected": want.to_json()}))?,
    );
    Ok(())
}

fn anticommutation(lat: &LatticeConfig, p: &AnticommutationParams, out: &mut Outcome) -> Result<()> {
    let max_n = p.max_particles.unwrap_or(lat.sites() as u32);
    let mut ops = LadderOp::all(lat, LadderKind::Create);
    ops.extend(LadderOp::all(lat, LadderKind::Annihilate));
    let mut csv = Csv::new(&["op1", "op2", "expected", "max_dev"]);
    let mut worst: f64 = 0.0;
    for a in &ops {
        for b in &ops {
            let expected = if a.adjoint() == *b { 1.0 } else { 0.0 };
            let dev = deviation_from_scaled_identity(&anticommutator(lat, *a, *b, max_n)?, expected);
            worst = worst.max(dev);
            csv.row(&[a.to_string(), b.to_string(), expected.to_string(), fmt_f64(dev)]);
        }
    }
    out.check(Check::at_most("anticommutator_deviation", worst, 1e-13));
    out.note("pairs", (ops.len() * ops.len()) as f64);
    out.file("anticommutators.csv", csv.as_str().to_string());
    Ok(())
}

/// Expected Heisenberg image of a ladder operator: `(target, coefficient)`.
fn heisenberg_expected(lat: &LatticeConfig, op: LadderOp) -> Vec<(LadderOp, f64)> {
    let (s, c) = lat.theta.sin_cos();
    let n = lat.cells;
    let with = |cell: usize, eps: Eps| LadderOp { kind: op.kind, cell, eps };
    match op.eps {
        Eps::Plus => {
            let r = (op.cell + 1) % n;
            vec![(with(r, Eps::Plus), c), (with(r, Eps::Minus), s)]
        }
        Eps::Minus => {
            let l = (op.cell + n - 1) % n;
            vec![(with(l, Eps::Minus), c), (with(l, Eps::Plus), -s)]
        }
    }
}

fn heisenberg(lat: &LatticeConfig, p: &HeisenbergParams, out: &mut Outcome) -> Result<()> {
    let mut csv = Csv::new(&["rule", "theta", "op", "residual", "max_coefficient_error"]);
    let ops: Vec<LadderOp> = (0..lat.cells)
        .filter(|c| is_bulk_cell(lat, *c))
        .flat_map(|cell| {
            [LadderKind::Create, LadderKind::Annihilate]
                .into_iter()
                .flat_map(move |kind| [Eps::Minus, Eps::Plus].map(|eps| LadderOp { kind, cell, eps }))
        })
        .collect();
    for theta in &p.thetas {
        let cfg = lat.with_theta(*theta);
        let (mut coef_err, mut resid): (f64, f64) = (0.0, 0.0);
        for op in &ops {
            let fit = heisenberg_fit(&cfg, *op, StepRule::fermionic())?;
            let expected = heisenberg_expected(&cfg, *op);
            let err = fit
                .coefficients
                .iter()
                .map(|(cand, a)| {
                    let want = expected.iter().find(|(o, _)| o == cand).map_or(0.0, |(_, w)| *w);
                    (a - c64(want)).norm()
                })
                .fold(0.0, f64::max);
            coef_err = coef_err.max(err);
            resid = resid.max(fit.residual);
            csv.row(&["fermionic".into(), fmt_f64(*theta), op.to_string(), fmt_f64(fit.residual), fmt_f64(err)]);
        }
        out.check(Check::at_most(format!("coefficients[theta={theta}]"), coef_err, 1e-12));
        out.check(Check::at_most(format!("linear_residual[theta={theta}]"), resid, 1e-10));
    }
    if let Some(theta) = p.bosonic_theta {
        let cfg = lat.with_theta(theta);
        let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
        for op in &ops {
            let fit = heisenberg_fit(&cfg, *op, StepRule::bosonic())?;
            lo = lo.min(fit.residual);
            hi = hi.max(fit.residual);
            csv.row(&["bosonic".into(), fmt_f64(theta), op.to_string(), fmt_f64(fit.residual), String::new()]);
        }
        // the control must break linearity for at least one bulk operator
        out.check(Check::above(format!("bosonic_control_residual[theta={theta}]"), hi, 1e-3));
        out.note("bosonic_min_residual", lo);
    }
    out.file("heisenberg.csv", csv.as_str().to_string());
    Ok(())
}

fn dispersion(lat: &LatticeConfig, p: &DispersionParams, out: &mut Outcome) -> Result<()> {
    let grid = MomentumGrid::periodic(lat);
    out.file("dispersion.csv", dispersion_csv(lat, &grid).as_str().to_string());
    let kdx = grid.kdx_values();
    let max_err = kdx
        .iter()
        .map(|k| {
            let e = crate::spectral::energy(lat, k / lat.dx);
            (e.e_plus - e.dirac).abs()
        })
        .fold(0.0, f64::max);
    out.note("max_abs_err", max_err);
    let identity = kdx
        .iter()
        .map(|k| (eigenphase(lat.theta, *k).cos() - lat.theta.cos() * k.cos()).abs())
        .fold(0.0, f64::max);
    out.check(Check::at_most("cosine_identity", identity, 1e-14));
    if p.eigen_check {
        let measured = n_particle_eigenphases(lat, 1)?;
        let predicted = predicted_eigenphases(lat, &grid, 1);
        out.check(Check::at_most("one_particle_eigenphases", phase_multiset_distance(&measured, &predicted), 1e-10));
    }
    if !p.eps_values.is_empty() {
        let errs: Vec<f64> = p.eps_values.iter().map(|e| dispersion_error(*e, *e)).collect();
        let mut csv = Csv::new(&["eps", "abs_err"]);
        for (e, r) in p.eps_values.iter().zip(&errs) {
            csv.row(&[fmt_f64(*e), fmt_f64(*r)]);
        }
        out.file("convergence.csv", csv.as_str().to_string());
        out.check(Check::at_least("convergence_slope", loglog_slope(&p.eps_values, &errs), 2.9));
    }
    Ok(())
}

/// Points with `max(|theta|, |k dx|) = eps`.
fn small_parameter_points(eps: f64) -> Vec<(f64, f64)> {
    let h = eps / 2.0;
    vec![
        (eps, 0.0),
        (eps, h),
        (eps, -h),
        (eps, eps),
        (eps, -eps),
        (0.0, eps),
        (h, eps),
        (-eps, eps),
    ]
}

fn hamiltonian_deviation(lat: &LatticeConfig, theta: f64, kdx: f64) -> f64 {
    let cfg = lat.with_theta(theta);
    let k = kdx / lat.dx;
    linalg::op_norm(&(effective_hamiltonian(&cfg, k) - dirac_hamiltonian(&cfg, k)))
}

fn dirac_limit(lat: &LatticeConfig, p: &DiracLimitParams, seed: u64, out: &mut Outcome) {
    use std::f64::consts::PI;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..p.samples {
        let theta = rng.random_range(-PI..PI);
        let kdx = rng.random_range(-PI..PI);
        let cfg = lat.with_theta(theta);
        let k = kdx / lat.dx;
        let h = effective_hamiltonian(&cfg, k);
        let u = (h * C64::new(0.0, -lat.dt)).exp();
        worst = worst.max(linalg::op_norm(&(u - step_matrix(&cfg, k).m)));
    }
    out.check(Check::at_most("exponential_identity", worst, 1e-12));

    let mut csv = Csv::new(&["theta", "kdx", "deviation", "bound"]);
    let bound = 0.2 * p.eps.powi(3) / lat.dt;
    let mut dev: f64 = 0.0;
    for (theta, kdx) in small_parameter_points(p.eps) {
        let d = hamiltonian_deviation(lat, theta, kdx);
        dev = dev.max(d);
        csv.row(&[fmt_f64(theta), fmt_f64(kdx), fmt_f64(d), fmt_f64(bound)]);
    }
    out.check(Check::at_most("dirac_hamiltonian_deviation", dev, bound));
    // empirical order of the deviation, from eps and eps / 2
    let half = small_parameter_points(p.eps / 2.0)
        .into_iter()
        .map(|(t, k)| hamiltonian_deviation(lat, t, k))
        .fold(0.0, f64::max);
    out.note("dirac_hamiltonian_deviation_order", (dev / half).log2());
    out.file("dirac_limit.csv", csv.as_str().to_string());
}

fn spectrum(lat: &LatticeConfig, p: &SpectrumParams, out: &mut Outcome) -> Result<()> {
    let cal = calibrate_parity_sector(lat)?;
    out.note("calibration_even_offset", cal.even_offset);
    out.note("calibration_residual_periodic", cal.residual_periodic);
    out.note("calibration_residual_shifted", cal.residual_shifted);
    out.check(Check::holds("calibration_unambiguous", !cal.ambiguous));

    let grid = cal.grid_for(lat, p.n);
    let measured = n_particle_eigenphases(lat, p.n)?;
    let predicted = predicted_eigenphases(lat, &grid, p.n);
    out.check(Check::at_most(
        format!("pair_sum_spectrum[n={}]", p.n),
        phase_multiset_distance(&measured, &predicted),
        1e-10,
    ));
    let mut csv = Csv::new(&["index", "measured", "predicted"]);
    for (i, (m, q)) in measured.iter().zip(&predicted).enumerate() {
        csv.row(&[i.to_string(), fmt_f64(*m), fmt_f64(*q)]);
    }
    out.file("spectrum.csv", csv.as_str().to_string());

    let mut inconsistent = 0usize;
    for theta in &p.calibration_thetas {
        let other = calibrate_parity_sector(&lat.with_theta(*theta))?;
        if other.even_offset != cal.even_offset {
            inconsistent += 1;
        }
    }
    out.check(Check::at_most("calibration_consistent", inconsistent as f64, 0.0));

    // at theta = 0 the step is a signed permutation whose cycles give the spectrum exactly
    let free = lat.with_theta(0.0);
    let cal0 = calibrate_parity_sector(&free)?;
    let exact = permutation_eigenphases(&free, p.n)?;
    let pairs = predicted_eigenphases(&free, &cal0.grid_for(&free, p.n), p.n);
    out.check(Check::at_most(
        "free_translation_calibration",
        phase_multiset_distance(&exact, &pairs),
        1e-10,
    ));
    out.check(Check::holds("free_translation_offset_agrees", cal0.even_offset == cal.even_offset));
    Ok(())
}

fn dirac_sea(lat: &LatticeConfig, out: &mut Outcome) -> Result<()> {
    let sea = build_dirac_sea(lat)?.normalized();
    let (ov, _) = step_overlap(&sea, StepRule::fermionic());
    out.check(Check::at_most("sea_eigenstate", (ov.norm() - 1.0).abs(), 1e-10));
    out.note("sea_energy", -ov.arg() / lat.dt);
    out.note("sea_terms", sea.len() as f64);
    out.file("sea_state.json", to_json_string(&sea.to_json())?);

    let gaps = sea_excitation_gaps(lat)?;
    let mut csv = Csv::new(&["kind", "kdx", "gap", "expected", "abs_err"]);
    let (mut min_gap, mut err, mut defect) = (f64::INFINITY, 0.0f64, 0.0f64);
    for g in &gaps {
        min_gap = min_gap.min(g.gap);
        err = err.max((g.gap - g.expected).abs());
        defect = defect.max(g.defect);
        let kind = match g.kind {
            Excitation::Particle => "particle",
            Excitation::Hole => "hole",
        };
        csv.row(&[kind.into(), fmt_f64(g.kdx), fmt_f64(g.gap), fmt_f64(g.expected), fmt_f64((g.gap - g.expected).abs())]);
    }
    out.check(Check::holds("excitation_count", gaps.len() == 2 * lat.cells));
    out.check(Check::above("min_gap", min_gap, 0.0));
    out.check(Check::at_most("gap_error", err, 1e-10));
    out.check(Check::at_most("excitation_eigenstate_defect", defect, 1e-10));
    out.file("sea_gaps.csv", csv.as_str().to_string());
    Ok(())
}

fn nogo_witness(p: &WitnessParams, out: &mut Outcome) -> Result<()> {
    for (i, case) in p.cases.iter().enumerate() {
        let spec = case.spec.build(case.labels);
        let grid = Lattice2D::new(case.width, case.height);
        let found = find_witness_triple(&spec, &grid, p.d)?;
        let tag = format!("case{i}[{}x{}]", case.width, case.height);
        out.check(Check::holds(
            format!("{tag}_outcome"),
            found.is_some() == (case.expect == Expect::Witness),
        ));
        if let Some(w) = &found {
            let valid = w.validate(&spec, &grid, p.d);
            out.check(Check::holds(format!("{tag}_witness_valid"), valid.is_ok()));
            out.note(format!("{tag}_path_length"), w.path.len() as f64);
        }
        out.file(format!("witness_{i}.json"), to_json_string(&Certificate::from_witness(found.as_ref()))?);
    }
    Ok(())
}

fn nogo_csp(lat: &LatticeConfig, p: &CspParams, out: &mut Outcome) -> Result<()> {
    for (i, case) in p.cases.iter().enumerate() {
        let spec = case.spec.build(case.labels);
        let grid = Lattice2D::new(case.width, case.height);
        let outcome = sign_csp(case.dimension, case.radius, &spec, &grid)?;
        let tag = format!("case{i}[d={},r={}]", case.dimension, case.radius);
        out.check(Check::holds(format!("{tag}_outcome"), outcome.is_sat() == (case.expect == Expect::Sat)));
        match &outcome {
            CspOutcome::Sat { rules } => {
                let off_convention = rules.iter().filter(|r| (r.sign < 0) != r.crossing).count();
                out.note(format!("{tag}_rule_classes"), rules.len() as f64);
                if case.dimension == 1 {
                    out.check(Check::at_most(format!("{tag}_crossing_convention"), off_convention as f64, 0.0));
                    let dev = verify_rule_against_automaton(lat, rules, case.radius)?;
                    out.check(Check::at_most(format!("{tag}_automaton_agreement"), dev, 1e-12));
                }
            }
            CspOutcome::Unsat { core } => {
                out.check(Check::holds(format!("{tag}_core_nonempty"), !core.is_empty()));
                out.note(format!("{tag}_core_size"), core.len() as f64);
            }
        }
        out.file(format!("csp_{i}.json"), to_json_string(&Certificate::from_csp(&outcome))?);
    }
    Ok(())
}
