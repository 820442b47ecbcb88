//! Momentum modes, eigenphases, the effective Hamiltonian and the Dirac sea.
//!
//! Plane-wave ladders are `a^dagger_{k,e} = sum_j e^{-i j k dx} a^dagger_{j,e}`
//! for both labels. With this choice the Heisenberg step on
//! `(a_{k,+}, a_{k,-})` is the matrix
//!
//! ```text
//! M(k) = [[e^{-ik dx} cos t, -e^{ik dx} sin t],
//!         [e^{-ik dx} sin t,  e^{ik dx} cos t]]
//! ```
//!
//! and `b_{k,+-} = alpha a_{k,+} + beta a_{k,-}` with `(alpha, beta)` the
//! eigenvector of `M` for `e^{+-i phi}`, so that `U b_{k,+-} U^dagger =
//! e^{+-i phi} b_{k,+-}`. A one-particle state `b^dagger_{k,+}|0>` then picks up
//! `e^{-i phi}` per step: energy `+phi/dt`. The `-` band carries `-phi/dt`.
//!
//! On a ring the seam pair gate carries no string sign, so an `n`-particle
//! state sees fermions with boundary phase `(-1)^(n-1)`: odd `n` live on the
//! periodic grid, even `n` on the grid shifted by `pi / L`.

use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::PI;

use nalgebra::{DMatrix, Vector2};

use crate::algebra::LadderKind;
use crate::error::{Error, Result};
use crate::evolution::{step_with, StepRule};
use crate::io::{fmt_f64, Csv};
use crate::lattice::{inner_product, sector_words, BasisState, Boundary, Eps, FockState, LatticeConfig, Site, C64};
use crate::linalg::{self, phase_multiset_distance, unitary_eigenphases, Mat2};

/// Largest sector dimension that is diagonalized densely.
pub const MAX_DENSE_DIM: usize = 1024;

/// Largest ring accepted by the parity calibration.
pub const MAX_CALIBRATION_CELLS: usize = 6;

/// Largest ring on which the Dirac sea is built.
pub const MAX_SEA_CELLS: usize = 8;

/// Tolerance for deciding that a momentum lies on a grid, in units of `k dx`.
const GRID_TOLERANCE: f64 = 1e-9;

/// Spectral match tolerance used by the calibration.
pub const CALIBRATION_TOLERANCE: f64 = 1e-8;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// `k dx` values `2 pi n / L + offset`, folded into `(-pi, pi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentumGrid {
    pub cells: usize,
    pub dx: f64,
    /// Shift of every `k dx`, zero for the periodic grid.
    pub offset: f64,
}

impl MomentumGrid {
    pub fn periodic(config: &LatticeConfig) -> Self {
        Self::with_offset(config, 0.0)
    }

    pub fn antiperiodic(config: &LatticeConfig) -> Self {
        Self::with_offset(config, PI / config.cells as f64)
    }

    pub fn with_offset(config: &LatticeConfig, offset: f64) -> Self {
        MomentumGrid {
            cells: config.cells,
            dx: config.dx,
            offset,
        }
    }

    /// Grid seen by `n` particles on the ring.
    pub fn for_particle_number(config: &LatticeConfig, n: usize) -> Self {
        if n % 2 == 1 {
            Self::periodic(config)
        } else {
            Self::antiperiodic(config)
        }
    }

    /// `k dx` values in ascending order.
    pub fn kdx_values(&self) -> Vec<f64> {
        let l = self.cells as f64;
        let mut v: Vec<f64> = (0..self.cells)
            .map(|n| fold_kdx(2.0 * PI * n as f64 / l + self.offset))
            .collect();
        v.sort_by(f64::total_cmp);
        v
    }

    pub fn k_values(&self) -> Vec<f64> {
        self.kdx_values().iter().map(|x| x / self.dx).collect()
    }

    /// Returns `k dx` if `k` is on the grid.
    pub fn check(&self, k: f64) -> Result<f64> {
        let kdx = k * self.dx;
        let units = (kdx - self.offset) * self.cells as f64 / (2.0 * PI);
        if !kdx.is_finite() || (units - units.round()).abs() > GRID_TOLERANCE {
            return Err(Error::OffGrid { kdx });
        }
        Ok(kdx)
    }
}

/// Folds into `(-pi, pi]`.
fn fold_kdx(x: f64) -> f64 {
    let y = -linalg::wrap_phase(-x);
    if y <= -PI {
        y + 2.0 * PI
    } else {
        y
    }
}

/// `phi_k` with `cos phi = cos(theta) cos(k dx)`, evaluated without the
/// cancellation of `arccos` near 1.
pub fn eigenphase(theta: f64, kdx: f64) -> f64 {
    let (st, ct) = theta.sin_cos();
    let (sk, ck) = kdx.sin_cos();
    st.hypot(ct * sk).atan2(ct * ck)
}

/// The Heisenberg step matrix on `(a_{k,+}, a_{k,-})`, with its spectral data.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeMatrix {
    pub k: f64,
    pub kdx: f64,
    pub m: Mat2,
    /// `phi in [0, pi]`.
    pub phi: f64,
    /// Eigenvector for `e^{+i phi}`.
    pub vplus: Vector2<C64>,
    /// Eigenvector for `e^{-i phi}`.
    pub vminus: Vector2<C64>,
    /// Unit axis with `M = cos(phi) I - i sin(phi) n.sigma`.
    pub axis: [f64; 3],
    /// Set when `phi` is 0 or `pi`; the eigenvectors are then the standard basis.
    pub degenerate: bool,
}

impl ModeMatrix {
    pub fn eigenvalue_plus(&self) -> C64 {
        C64::from_polar(1.0, self.phi)
    }

    pub fn eigenvalue_minus(&self) -> C64 {
        C64::from_polar(1.0, -self.phi)
    }

    pub fn eigenvector(&self, band: Band) -> Vector2<C64> {
        match band {
            Band::Plus => self.vplus,
            Band::Minus => self.vminus,
        }
    }

    /// `T = [vplus, vminus]`.
    pub fn transform(&self) -> Mat2 {
        Mat2::from_columns(&[self.vplus, self.vminus])
    }
}

/// The two bands of a momentum mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Band {
    Plus,
    Minus,
}

impl Band {
    /// Per-step eigenphase of `b^dagger |0>` in units of `phi`.
    pub fn phase_sign(self) -> f64 {
        match self {
            Band::Plus => -1.0,
            Band::Minus => 1.0,
        }
    }
}

pub fn mode_matrix_kdx(theta: f64, kdx: f64) -> ModeMatrix {
    let (s, ct) = theta.sin_cos();
    let (sk, ck) = kdx.sin_cos();
    let em = C64::from_polar(1.0, -kdx);
    let ep = C64::from_polar(1.0, kdx);
    let m = Mat2::new(em * ct, -ep * s, em * s, ep * ct);
    let r = s.hypot(ct * sk);
    let phi = r.atan2(ct * ck);
    let axis = if r > 0.0 {
        [s * sk / r, s * ck / r, ct * sk / r]
    } else {
        [0.0, 0.0, 1.0]
    };

    let degenerate = s == 0.0 && sk == 0.0;
    let (vplus, vminus) = if degenerate {
        (Vector2::new(c(1.0, 0.0), c(0.0, 0.0)), Vector2::new(c(0.0, 0.0), c(1.0, 0.0)))
    } else {
        // v_+- ~ (ct sk -+ r, i e^{-ik dx} s); the first component is rewritten
        // through (ct sk + r)(ct sk - r) = -s^2 where it would cancel.
        let a = ct * sk;
        let (ap, am) = if a >= 0.0 {
            (-s * s / (a + r), a + r)
        } else {
            (a - r, -s * s / (a - r))
        };
        let beta = c(0.0, 1.0) * em * s;
        let build = |alpha: f64, target: C64| {
            let v = Vector2::new(c(alpha, 0.0), beta);
            let n = v.norm();
            if n > 0.0 {
                v / c(n, 0.0)
            } else {
                // sin(theta) = 0: M is diagonal, pick the matching basis vector
                let first = (m[(0, 0)] - target).norm() <= (m[(1, 1)] - target).norm();
                if first {
                    Vector2::new(c(1.0, 0.0), c(0.0, 0.0))
                } else {
                    Vector2::new(c(0.0, 0.0), c(1.0, 0.0))
                }
            }
        };
        (
            build(ap, C64::from_polar(1.0, phi)),
            build(am, C64::from_polar(1.0, -phi)),
        )
    };
    ModeMatrix {
        k: kdx,
        kdx,
        m,
        phi,
        vplus,
        vminus,
        axis,
        degenerate,
    }
}

/// Mode matrix at momentum `k` (units of inverse length).
pub fn step_matrix(config: &LatticeConfig, k: f64) -> ModeMatrix {
    let mut mm = mode_matrix_kdx(config.theta, k * config.dx);
    mm.k = k;
    mm
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Energies {
    pub e_plus: f64,
    pub e_minus: f64,
    /// `sqrt(p^2 c^2 + m^2 c^4)` with `p = k`.
    pub dirac: f64,
}

pub fn energy(config: &LatticeConfig, k: f64) -> Energies {
    let phi = eigenphase(config.theta, k * config.dx);
    let cl = config.light_speed();
    let mc2 = config.mass() * cl * cl;
    Energies {
        e_plus: phi / config.dt,
        e_minus: -phi / config.dt,
        dirac: (k * cl).hypot(mc2),
    }
}

/// `H(k)` with `exp(-i H dt) = M(k)`: `H = (phi / dt) n.sigma`.
pub fn effective_hamiltonian(config: &LatticeConfig, k: f64) -> Mat2 {
    let mm = step_matrix(config, k);
    let n = mm.axis;
    let ns = linalg::sigma_x() * c(n[0], 0.0) + linalg::sigma_y() * c(n[1], 0.0) + linalg::sigma_z() * c(n[2], 0.0);
    ns * c(mm.phi / config.dt, 0.0)
}

/// Long-wavelength limit `k c sigma_3 + m c^2 sigma_2`.
pub fn dirac_hamiltonian(config: &LatticeConfig, k: f64) -> Mat2 {
    let cl = config.light_speed();
    let mc2 = config.mass() * cl * cl;
    linalg::sigma_z() * c(k * cl, 0.0) + linalg::sigma_y() * c(mc2, 0.0)
}

fn require_periodic(config: &LatticeConfig) -> Result<()> {
    if config.boundary != Boundary::Periodic {
        return Err(Error::BoundaryMode);
    }
    Ok(())
}

/// Plane-wave ladder at `k dx` without grid or boundary checks.
fn plane_wave_ladder(state: &FockState, kdx: f64, eps: Eps, kind: LadderKind) -> FockState {
    let config = state.config();
    let mut out: BTreeMap<BasisState, C64> = BTreeMap::new();
    for j in 0..config.cells {
        let bit = Site::new(j, eps).bit();
        let sign_k = if kind == LadderKind::Create { -1.0 } else { 1.0 };
        let phase = C64::from_polar(1.0, sign_k * j as f64 * kdx);
        for (w, a) in state.iter() {
            let occ = w.is_occupied(bit);
            let target = match (kind, occ) {
                (LadderKind::Create, false) => w.with(bit),
                (LadderKind::Annihilate, true) => w.without(bit),
                _ => continue,
            };
            let s = if w.predecessors(bit) % 2 == 0 { 1.0 } else { -1.0 };
            *out.entry(target).or_default() += a * phase * s;
        }
    }
    FockState::from_amplitudes(config, out)
}

/// `a^dagger_{k,eps}` or `a_{k,eps}` on the periodic grid.
pub fn momentum_ladder(state: &FockState, k: f64, eps: Eps, kind: LadderKind) -> Result<FockState> {
    momentum_ladder_on(state, &MomentumGrid::periodic(state.config()), k, eps, kind)
}

pub fn momentum_ladder_on(
    state: &FockState,
    grid: &MomentumGrid,
    k: f64,
    eps: Eps,
    kind: LadderKind,
) -> Result<FockState> {
    require_periodic(state.config())?;
    let kdx = grid.check(k)?;
    Ok(plane_wave_ladder(state, kdx, eps, kind))
}

/// `b^dagger_{k,band}` or `b_{k,band}` on the periodic grid.
pub fn b_ladder(state: &FockState, k: f64, band: Band, kind: LadderKind) -> Result<FockState> {
    b_ladder_on(state, &MomentumGrid::periodic(state.config()), k, band, kind)
}

pub fn b_ladder_on(state: &FockState, grid: &MomentumGrid, k: f64, band: Band, kind: LadderKind) -> Result<FockState> {
    require_periodic(state.config())?;
    let kdx = grid.check(k)?;
    Ok(b_ladder_kdx(state, kdx, band, kind))
}

fn b_ladder_kdx(state: &FockState, kdx: f64, band: Band, kind: LadderKind) -> FockState {
    let mm = mode_matrix_kdx(state.config().theta, kdx);
    let v = mm.eigenvector(band);
    let (ca, cb) = match kind {
        LadderKind::Create => (v[0].conj(), v[1].conj()),
        LadderKind::Annihilate => (v[0], v[1]),
    };
    let plus = plane_wave_ladder(state, kdx, Eps::Plus, kind);
    let minus = plane_wave_ladder(state, kdx, Eps::Minus, kind);
    plus.scale(ca)
        .add_scaled(cb, &minus)
        .expect("both terms share the lattice")
}

/// Dense matrix of one step restricted to the `n`-particle sector, with its basis.
pub fn sector_matrix(config: &LatticeConfig, n: usize, rule: StepRule) -> Result<(Vec<BasisState>, DMatrix<C64>)> {
    let words = sector_words(config.sites() as u32, n as u32);
    if words.len() > MAX_DENSE_DIM {
        return Err(Error::DimensionTooLarge {
            dim: words.len(),
            cap: MAX_DENSE_DIM,
        });
    }
    let index: BTreeMap<BasisState, usize> = words.iter().enumerate().map(|(i, w)| (*w, i)).collect();
    let mut u = DMatrix::<C64>::zeros(words.len(), words.len());
    for (col, w) in words.iter().enumerate() {
        for (out, a) in step_with(&FockState::basis(config, *w), rule).iter() {
            u[(index[&out], col)] = a;
        }
    }
    Ok((words, u))
}

/// Eigenphases of one step on the `n`-particle sector, ascending in `[-pi, pi)`.
pub fn n_particle_eigenphases(config: &LatticeConfig, n: usize) -> Result<Vec<f64>> {
    let (_, u) = sector_matrix(config, n, StepRule::fermionic())?;
    unitary_eigenphases(&u)
}

/// Eigenphases of a step that permutes basis words up to sign, as at
/// `theta = 0`: a cycle of length `l` with sign product `s` contributes the
/// `l`-th roots of `s`. No diagonalization is involved.
pub fn permutation_eigenphases(config: &LatticeConfig, n: usize) -> Result<Vec<f64>> {
    let words = sector_words(config.sites() as u32, n as u32);
    let mut image: BTreeMap<BasisState, (BasisState, f64)> = BTreeMap::new();
    for w in &words {
        let out = step_with(&FockState::basis(config, *w), StepRule::fermionic());
        let mut terms = out.iter();
        match (terms.next(), terms.next()) {
            (Some((b, a)), None) if (a.norm() - 1.0).abs() < 1e-12 && a.im.abs() < 1e-12 => {
                image.insert(*w, (b, a.re.signum()));
            }
            _ => {
                return Err(Error::InvalidConfig(format!(
                    "step does not permute basis words at theta = {}",
                    config.theta
                )))
            }
        }
    }
    let mut seen: BTreeSet<BasisState> = BTreeSet::new();
    let mut out = Vec::with_capacity(words.len());
    for w in &words {
        if seen.contains(w) {
            continue;
        }
        let (mut len, mut sign, mut cur) = (0usize, 1.0, *w);
        loop {
            seen.insert(cur);
            let (next, s) = image[&cur];
            len += 1;
            sign *= s;
            cur = next;
            if cur == *w {
                break;
            }
        }
        let base = if sign < 0.0 { PI } else { 0.0 };
        out.extend((0..len).map(|j| linalg::wrap_phase((base + 2.0 * PI * j as f64) / len as f64)));
    }
    out.sort_by(f64::total_cmp);
    Ok(out)
}

/// Free-fermion prediction: sums over `n`-subsets of the `2L` modes of `grid`,
/// where `(k,+)` contributes `-phi_k` and `(k,-)` contributes `+phi_k`.
pub fn predicted_eigenphases(config: &LatticeConfig, grid: &MomentumGrid, n: usize) -> Vec<f64> {
    let modes: Vec<f64> = grid
        .kdx_values()
        .iter()
        .flat_map(|&kdx| {
            let phi = eigenphase(config.theta, kdx);
            [-phi, phi]
        })
        .collect();
    let mut out = Vec::new();
    subset_sums(&modes, n, 0, 0.0, &mut out);
    let mut out: Vec<f64> = out.into_iter().map(linalg::wrap_phase).collect();
    out.sort_by(f64::total_cmp);
    out
}

fn subset_sums(modes: &[f64], left: usize, start: usize, acc: f64, out: &mut Vec<f64>) {
    if left == 0 {
        out.push(acc);
        return;
    }
    for i in start..=modes.len().saturating_sub(left) {
        subset_sums(modes, left - 1, i + 1, acc + modes[i], out);
    }
}

/// Outcome of matching the two-particle spectrum against both candidate grids.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParityCalibration {
    /// Offset of the odd-`n` grid; zero by definition.
    pub odd_offset: f64,
    /// Offset of the even-`n` grid chosen by the match, in units of `k dx`.
    pub even_offset: f64,
    /// Spectral mismatch against the unshifted grid.
    pub residual_periodic: f64,
    /// Spectral mismatch against the grid shifted by `pi / L`.
    pub residual_shifted: f64,
    /// Both grids match; the spectrum cannot tell them apart.
    pub ambiguous: bool,
}

impl ParityCalibration {
    pub fn offset_for(&self, n: usize) -> f64 {
        if n % 2 == 1 {
            self.odd_offset
        } else {
            self.even_offset
        }
    }

    pub fn grid_for(&self, config: &LatticeConfig, n: usize) -> MomentumGrid {
        MomentumGrid::with_offset(config, self.offset_for(n))
    }

    pub fn best_residual(&self) -> f64 {
        self.residual_periodic.min(self.residual_shifted)
    }
}

/// Determines by dense diagonalization whether the two-particle sector lives
/// on the shifted momentum grid.
pub fn calibrate_parity_sector(config: &LatticeConfig) -> Result<ParityCalibration> {
    require_periodic(config)?;
    if config.cells > MAX_CALIBRATION_CELLS {
        return Err(Error::DimensionTooLarge {
            dim: sector_words(config.sites() as u32, 2).len(),
            cap: sector_words(2 * MAX_CALIBRATION_CELLS as u32, 2).len(),
        });
    }
    let measured = n_particle_eigenphases(config, 2)?;
    let shifted = PI / config.cells as f64;
    let r0 = phase_multiset_distance(&measured, &predicted_eigenphases(config, &MomentumGrid::with_offset(config, 0.0), 2));
    let r1 = phase_multiset_distance(&measured, &predicted_eigenphases(config, &MomentumGrid::with_offset(config, shifted), 2));
    Ok(ParityCalibration {
        odd_offset: 0.0,
        even_offset: if r1 < r0 { shifted } else { 0.0 },
        residual_periodic: r0,
        residual_shifted: r1,
        ambiguous: r0 < CALIBRATION_TOLERANCE && r1 < CALIBRATION_TOLERANCE,
    })
}

/// `<psi|U|psi>` under `rule`, with the modulus defect `| |<psi|U psi>| - <psi|psi> |`.
pub fn step_overlap(state: &FockState, rule: StepRule) -> (C64, f64) {
    let ov = inner_product(state, &step_with(state, rule)).expect("same lattice");
    (ov, (ov.norm() - state.norm_sqr()).abs())
}

/// Energy `-arg<psi|U psi> / dt` of an eigenstate.
pub fn state_energy(state: &FockState, rule: StepRule) -> f64 {
    let (ov, _) = step_overlap(state, rule);
    -ov.arg() / state.config().dt
}

fn sea_on_grid(config: &LatticeConfig, grid: &MomentumGrid) -> FockState {
    // b^dagger_{k1} b^dagger_{k2} ... |0> with k ascending: the rightmost acts first
    let mut s = FockState::vacuum(config);
    for kdx in grid.kdx_values().iter().rev() {
        s = b_ladder_kdx(&s, *kdx, Band::Minus, LadderKind::Create);
    }
    s
}

/// `prod_k b^dagger_{k,-} |0>` over the grid native to `L` particles.
pub fn build_dirac_sea(config: &LatticeConfig) -> Result<FockState> {
    require_periodic(config)?;
    if config.cells > MAX_SEA_CELLS {
        return Err(Error::DimensionTooLarge {
            dim: sector_words(config.sites() as u32, config.cells as u32).len(),
            cap: sector_words(2 * MAX_SEA_CELLS as u32, MAX_SEA_CELLS as u32).len(),
        });
    }
    Ok(sea_on_grid(config, &MomentumGrid::for_particle_number(config, config.cells)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Excitation {
    /// `b^dagger_{k,+}` added.
    Particle,
    /// `b_{k,-}` removed.
    Hole,
}

/// One excitation above the sea.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExcitationGap {
    pub kind: Excitation,
    pub kdx: f64,
    /// Measured `E(excited) - E(sea)`.
    pub gap: f64,
    /// `phi_k / dt`.
    pub expected: f64,
    /// Eigenstate defect of the excited state, `| |<psi|U psi>| - <psi|psi> |`.
    pub defect: f64,
}

/// Energies of all `2L` single excitations above the sea.
///
/// Adding or removing one particle flips the parity, so excitations are built
/// on the sea of the opposite-parity grid. That reference sea is an exact
/// eigenstate of the step with a sign-flipped seam hop, which is the dynamics
/// its own grid belongs to; its energy is measured there.
pub fn sea_excitation_gaps(config: &LatticeConfig) -> Result<Vec<ExcitationGap>> {
    build_dirac_sea(config)?;
    let grid = MomentumGrid::for_particle_number(config, config.cells + 1);
    let reference = sea_on_grid(config, &grid);
    let e_ref = state_energy(&reference, StepRule::twisted());
    let mut out = Vec::with_capacity(2 * config.cells);
    for kind in [Excitation::Particle, Excitation::Hole] {
        for kdx in grid.kdx_values() {
            let excited = match kind {
                Excitation::Particle => b_ladder_kdx(&reference, kdx, Band::Plus, LadderKind::Create),
                Excitation::Hole => b_ladder_kdx(&reference, kdx, Band::Minus, LadderKind::Annihilate),
            };
            let (ov, defect) = step_overlap(&excited, StepRule::fermionic());
            let e = -ov.arg() / config.dt;
            let gap = linalg::wrap_phase((e - e_ref) * config.dt) / config.dt;
            out.push(ExcitationGap {
                kind,
                kdx,
                gap,
                expected: eigenphase(config.theta, kdx) / config.dt,
                defect: defect / excited.norm_sqr().max(f64::MIN_POSITIVE),
            });
        }
    }
    Ok(out)
}

/// Dispersion table over a grid: `k,kdx,phi,E_lattice,E_dirac,abs_err`.
pub fn dispersion_csv(config: &LatticeConfig, grid: &MomentumGrid) -> Csv {
    let mut csv = Csv::new(&["k", "kdx", "phi", "E_lattice", "E_dirac", "abs_err"]);
    for k in grid.k_values() {
        let e = energy(config, k);
        let phi = eigenphase(config.theta, k * config.dx);
        csv.row(&[
            fmt_f64(k),
            fmt_f64(k * config.dx),
            fmt_f64(phi),
            fmt_f64(e.e_plus),
            fmt_f64(e.dirac),
            fmt_f64((e.e_plus - e.dirac).abs()),
        ]);
    }
    csv
}

/// `|phi - sqrt(theta^2 + (k dx)^2)|`.
pub fn dispersion_error(theta: f64, kdx: f64) -> f64 {
    (eigenphase(theta, kdx) - theta.hypot(kdx)).abs()
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}
