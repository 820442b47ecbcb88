//! Position-space ladder operators and their Heisenberg images.
//!
//! `a^dagger` at site `s` inserts `s` with sign `(-1)^m`, `m` being the number
//! of occupied sites before `s` in canonical order. Annihilation is the adjoint.

use std::collections::BTreeMap;
use std::fmt;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::evolution::{step_inverse_with, step_with, StepRule};
use crate::lattice::{sector_words, BasisState, Boundary, Eps, FockState, LatticeConfig, Site, C64};

/// Relative residual above which a Heisenberg image is declared nonlinear.
pub const LINEAR_FIT_TOLERANCE: f64 = 1e-10;

/// Dense anticommutators are materialized up to this many cells.
pub const ANTICOMMUTATOR_MAX_CELLS: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LadderKind {
    Create,
    Annihilate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LadderOp {
    pub kind: LadderKind,
    pub cell: usize,
    pub eps: Eps,
}

impl LadderOp {
    pub fn create(cell: usize, eps: Eps) -> Self {
        LadderOp {
            kind: LadderKind::Create,
            cell,
            eps,
        }
    }

    pub fn annihilate(cell: usize, eps: Eps) -> Self {
        LadderOp {
            kind: LadderKind::Annihilate,
            cell,
            eps,
        }
    }

    pub fn site(&self) -> Site {
        Site::new(self.cell, self.eps)
    }

    pub fn adjoint(&self) -> Self {
        let kind = match self.kind {
            LadderKind::Create => LadderKind::Annihilate,
            LadderKind::Annihilate => LadderKind::Create,
        };
        LadderOp { kind, ..*self }
    }

    pub fn validate(&self, config: &LatticeConfig) -> Result<()> {
        if self.cell >= config.cells {
            return Err(Error::OutOfRange {
                cell: self.cell,
                cells: config.cells,
            });
        }
        Ok(())
    }

    /// Every operator of the given kind on the lattice, in canonical site order.
    pub fn all(config: &LatticeConfig, kind: LadderKind) -> Vec<LadderOp> {
        (0..config.sites() as u32)
            .map(|b| {
                let s = Site::from_bit(b);
                LadderOp {
                    kind,
                    cell: s.cell,
                    eps: s.eps,
                }
            })
            .collect()
    }
}

impl fmt::Display for LadderOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let dag = if self.kind == LadderKind::Create { "+" } else { "" };
        write!(f, "a{dag}({},{})", self.cell, self.eps)
    }
}

/// Action of one ladder operator on a basis word: the new word and its sign.
pub fn ladder_on_word(op: LadderOp, word: BasisState) -> Option<(BasisState, f64)> {
    let bit = op.site().bit();
    let occupied = word.is_occupied(bit);
    let sign = if word.predecessors(bit).is_multiple_of(2) { 1.0 } else { -1.0 };
    match (op.kind, occupied) {
        (LadderKind::Create, false) => Some((word.with(bit), sign)),
        (LadderKind::Annihilate, true) => Some((word.without(bit), sign)),
        _ => None,
    }
}

/// Applies `op`. Panics if the operator lies outside the lattice; use
/// [`LadderOp::validate`] on untrusted input.
pub fn apply_ladder(state: &FockState, op: LadderOp) -> FockState {
    op.validate(state.config())
        .expect("ladder operator outside the lattice");
    let mapped = state
        .iter()
        .filter_map(|(w, a)| ladder_on_word(op, w).map(|(w2, s)| (w2, a * s)));
    FockState::from_amplitudes(state.config(), mapped)
}

/// Applies a product of operators written left to right, so the rightmost acts first.
pub fn apply_product(state: &FockState, ops: &[LadderOp]) -> FockState {
    ops.iter().rev().fold(state.clone(), |s, op| apply_ladder(&s, *op))
}

/// `ops[0] ops[1] ... ops[n-1] |vacuum>`.
pub fn build_state(config: &LatticeConfig, ops: &[LadderOp]) -> FockState {
    apply_product(&FockState::vacuum(config), ops)
}

/// Linear combination of ladder operators of a single kind.
#[derive(Debug, Clone, PartialEq)]
pub struct OpCombination {
    terms: Vec<(C64, LadderOp)>,
}

impl OpCombination {
    pub fn new(terms: Vec<(C64, LadderOp)>) -> Result<Self> {
        if let Some((_, first)) = terms.first() {
            if terms.iter().any(|(_, op)| op.kind != first.kind) {
                return Err(Error::InvalidConfig("mixed creation and annihilation terms".into()));
            }
        }
        if terms.iter().any(|(a, _)| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(Error::InvalidConfig("non-finite coefficient".into()));
        }
        Ok(OpCombination { terms })
    }

    pub fn terms(&self) -> &[(C64, LadderOp)] {
        &self.terms
    }

    pub fn kind(&self) -> Option<LadderKind> {
        self.terms.first().map(|(_, op)| op.kind)
    }

    /// Coefficient of `op`, zero if absent.
    pub fn coefficient(&self, op: LadderOp) -> C64 {
        self.terms
            .iter()
            .filter(|(_, o)| *o == op)
            .map(|(a, _)| *a)
            .sum()
    }

    pub fn apply(&self, state: &FockState) -> FockState {
        let mut out: BTreeMap<BasisState, C64> = BTreeMap::new();
        for (coef, op) in &self.terms {
            for (w, a) in state.iter() {
                if let Some((w2, s)) = ladder_on_word(*op, w) {
                    *out.entry(w2).or_default() += coef * a * s;
                }
            }
        }
        FockState::from_amplitudes(state.config(), out)
    }
}

impl fmt::Display for OpCombination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (a, op)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({:.6}{:+.6}i) {op}", a.re, a.im)?;
        }
        Ok(())
    }
}

/// Basis words with at most `max_n` particles, ordered by particle number then word.
pub fn truncated_basis(config: &LatticeConfig, max_n: u32) -> Vec<BasisState> {
    let sites = config.sites() as u32;
    (0..=max_n.min(sites))
        .flat_map(|n| sector_words(sites, n))
        .collect()
}

/// Dense matrix of `{op1, op2}` on the Fock space truncated to `n <= sector_max_n`.
///
/// The operators act on the full space before projecting, so the truncation
/// never cuts an intermediate state.
pub fn anticommutator(
    config: &LatticeConfig,
    op1: LadderOp,
    op2: LadderOp,
    sector_max_n: u32,
) -> Result<DMatrix<C64>> {
    if config.cells > ANTICOMMUTATOR_MAX_CELLS {
        return Err(Error::DimensionTooLarge {
            dim: 1usize << config.sites().min(63),
            cap: 1 << (2 * ANTICOMMUTATOR_MAX_CELLS),
        });
    }
    op1.validate(config)?;
    op2.validate(config)?;
    let basis = truncated_basis(config, sector_max_n);
    let index: BTreeMap<BasisState, usize> = basis.iter().enumerate().map(|(i, b)| (*b, i)).collect();
    let mut m = DMatrix::<C64>::zeros(basis.len(), basis.len());
    for (col, b) in basis.iter().enumerate() {
        let psi = FockState::basis(config, *b);
        let ab = apply_ladder(&apply_ladder(&psi, op2), op1);
        let ba = apply_ladder(&apply_ladder(&psi, op1), op2);
        for (w, a) in ab.iter().chain(ba.iter()) {
            if let Some(&row) = index.get(&w) {
                m[(row, col)] += a;
            }
        }
    }
    Ok(m)
}

/// Largest deviation of `m` from `scale * I`.
pub fn deviation_from_scaled_identity(m: &DMatrix<C64>, scale: f64) -> f64 {
    let mut d: f64 = 0.0;
    for r in 0..m.nrows() {
        for col in 0..m.ncols() {
            let target = if r == col { scale } else { 0.0 };
            d = d.max((m[(r, col)] - target).norm());
        }
    }
    d
}

/// Least-squares fit of `U op U^dagger` onto all ladder operators of the same kind.
#[derive(Debug, Clone)]
pub struct HeisenbergFit {
    pub op: LadderOp,
    /// Every candidate with its fitted coefficient, canonical order.
    pub coefficients: Vec<(LadderOp, C64)>,
    /// `||A c - y|| / ||y||` over the spanning set.
    pub residual: f64,
    pub spanning_states: usize,
}

impl HeisenbergFit {
    /// Terms whose coefficient exceeds `cutoff` in modulus.
    pub fn combination(&self, cutoff: f64) -> OpCombination {
        let terms = self
            .coefficients
            .iter()
            .filter(|(_, a)| a.norm() > cutoff)
            .map(|(op, a)| (*a, *op))
            .collect();
        OpCombination { terms }
    }

    pub fn coefficient(&self, op: LadderOp) -> C64 {
        self.coefficients
            .iter()
            .find(|(o, _)| *o == op)
            .map(|(_, a)| *a)
            .unwrap_or_default()
    }
}

/// Cells at distance at least two from both ends of an open chain.
pub fn is_bulk_cell(config: &LatticeConfig, cell: usize) -> bool {
    match config.boundary {
        Boundary::Periodic => cell < config.cells,
        Boundary::Open => cell >= 2 && cell + 2 < config.cells,
    }
}

/// Fits `U op U^dagger` on the spanning set of basis words with at most three
/// particles. Never fails on nonlinearity; the residual is reported instead.
pub fn heisenberg_fit(config: &LatticeConfig, op: LadderOp, rule: StepRule) -> Result<HeisenbergFit> {
    op.validate(config)?;
    if !is_bulk_cell(config, op.cell) {
        return Err(Error::InvalidConfig(format!(
            "cell {} is within two cells of an open boundary",
            op.cell
        )));
    }
    let candidates = LadderOp::all(config, op.kind);
    let spanning = truncated_basis(config, 3);

    // rows are (spanning word, output word) pairs
    let mut rows: BTreeMap<(usize, BasisState), usize> = BTreeMap::new();
    let mut lhs: Vec<(usize, C64)> = Vec::new();
    let mut cols: Vec<Vec<(usize, C64)>> = vec![Vec::new(); candidates.len()];
    let row_of = |key: (usize, BasisState), rows: &mut BTreeMap<(usize, BasisState), usize>| {
        let next = rows.len();
        *rows.entry(key).or_insert(next)
    };
    for (bi, b) in spanning.iter().enumerate() {
        let psi = FockState::basis(config, *b);
        let image = step_with(&apply_ladder(&step_inverse_with(&psi, rule), op), rule);
        for (w, a) in image.iter() {
            let r = row_of((bi, w), &mut rows);
            lhs.push((r, a));
        }
        for (ci, cand) in candidates.iter().enumerate() {
            if let Some((w, s)) = ladder_on_word(*cand, *b) {
                let r = row_of((bi, w), &mut rows);
                cols[ci].push((r, C64::new(s, 0.0)));
            }
        }
    }
    let nrows = rows.len();
    let mut a = DMatrix::<C64>::zeros(nrows, candidates.len());
    for (ci, col) in cols.iter().enumerate() {
        for (r, v) in col {
            a[(*r, ci)] += v;
        }
    }
    let mut y = DVector::<C64>::zeros(nrows);
    for (r, v) in &lhs {
        y[*r] += v;
    }
    let gram = a.adjoint() * &a;
    let rhs = a.adjoint() * &y;
    let coef = gram
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::InvalidConfig("singular normal equations".into()))?;
    let ynorm = y.norm();
    let residual = if ynorm == 0.0 {
        (&a * &coef).norm()
    } else {
        (&a * &coef - &y).norm() / ynorm
    };
    Ok(HeisenbergFit {
        op,
        coefficients: candidates.iter().copied().zip(coef.iter().copied()).collect(),
        residual,
        spanning_states: spanning.len(),
    })
}

/// `U op U^dagger` as a linear combination of ladder operators.
pub fn heisenberg_image(config: &LatticeConfig, op: LadderOp) -> Result<OpCombination> {
    heisenberg_image_with(config, op, StepRule::fermionic())
}

pub fn heisenberg_image_with(config: &LatticeConfig, op: LadderOp, rule: StepRule) -> Result<OpCombination> {
    let fit = heisenberg_fit(config, op, rule)?;
    if fit.residual > LINEAR_FIT_TOLERANCE {
        return Err(Error::NotLinear {
            residual: fit.residual,
        });
    }
    Ok(fit.combination(1e-13))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evolution::step;

    fn cfg(l: usize, theta: f64, b: Boundary) -> LatticeConfig {
        LatticeConfig::new(l, theta, b).unwrap()
    }

    fn one() -> C64 {
        C64::new(1.0, 0.0)
    }

    #[test]
    fn creation_on_vacuum_and_occupied() {
        let c = cfg(3, 0.0, Boundary::Open);
        let v = FockState::vacuum(&c);
        let s = apply_ladder(&v, LadderOp::create(1, Eps::Plus));
        assert_eq!(s, FockState::from_particles(&c, &[Site::new(1, Eps::Plus)]).unwrap());
        assert!(apply_ladder(&s, LadderOp::create(1, Eps::Plus)).is_zero());
        assert!(apply_ladder(&v, LadderOp::annihilate(0, Eps::Minus)).is_zero());
    }

    #[test]
    fn creation_sign_counts_predecessors() {
        let c = cfg(3, 0.0, Boundary::Open);
        let s = FockState::from_particles(&c, &[Site::new(0, Eps::Minus)]).unwrap();
        let out = apply_ladder(&s, LadderOp::create(1, Eps::Minus));
        let w = crate::lattice::basis_from_particles(&c, &[Site::new(0, Eps::Minus), Site::new(1, Eps::Minus)]).unwrap();
        assert_eq!(out.amplitude(w), -one());
    }

    #[test]
    fn build_state_ordering() {
        let c = cfg(2, 0.0, Boundary::Open);
        let w = crate::lattice::basis_from_particles(&c, &[Site::new(0, Eps::Minus), Site::new(1, Eps::Plus)]).unwrap();
        let a = LadderOp::create(0, Eps::Minus);
        let b = LadderOp::create(1, Eps::Plus);
        assert_eq!(build_state(&c, &[a, b]).amplitude(w), one());
        assert_eq!(build_state(&c, &[b, a]).amplitude(w), -one());
        assert!(build_state(&c, &[a, a]).is_zero());
    }

    #[test]
    fn anticommutator_examples() {
        let c = cfg(2, 0.0, Boundary::Open);
        let m = anticommutator(&c, LadderOp::create(0, Eps::Plus), LadderOp::create(1, Eps::Minus), 4).unwrap();
        assert_eq!(deviation_from_scaled_identity(&m, 0.0), 0.0);
        let m = anticommutator(&c, LadderOp::create(0, Eps::Plus), LadderOp::annihilate(0, Eps::Plus), 4).unwrap();
        assert_eq!(deviation_from_scaled_identity(&m, 1.0), 0.0);
        let m = anticommutator(&c, LadderOp::create(0, Eps::Plus), LadderOp::annihilate(1, Eps::Plus), 2).unwrap();
        assert_eq!(deviation_from_scaled_identity(&m, 0.0), 0.0);
        let big = cfg(5, 0.0, Boundary::Open);
        assert!(matches!(
            anticommutator(&big, LadderOp::create(0, Eps::Plus), LadderOp::create(1, Eps::Plus), 1),
            Err(Error::DimensionTooLarge { .. })
        ));
    }

    #[test]
    fn heisenberg_image_at_zero_angle() {
        let c = cfg(6, 0.0, Boundary::Open);
        let img = heisenberg_image(&c, LadderOp::create(2, Eps::Plus)).unwrap();
        assert_eq!(img.terms().len(), 1);
        assert!((img.coefficient(LadderOp::create(3, Eps::Plus)) - 1.0).norm() < 1e-12);
    }

    #[test]
    fn heisenberg_image_mixes_labels() {
        let theta: f64 = 0.3;
        let c = cfg(6, theta, Boundary::Open);
        let img = heisenberg_image(&c, LadderOp::create(3, Eps::Minus)).unwrap();
        assert!((img.coefficient(LadderOp::create(2, Eps::Minus)) - theta.cos()).norm() < 1e-12);
        assert!((img.coefficient(LadderOp::create(2, Eps::Plus)) + theta.sin()).norm() < 1e-12);
        let img = heisenberg_image(&c, LadderOp::annihilate(2, Eps::Plus)).unwrap();
        assert!((img.coefficient(LadderOp::annihilate(3, Eps::Plus)) - theta.cos()).norm() < 1e-12);
        assert!((img.coefficient(LadderOp::annihilate(3, Eps::Minus)) - theta.sin()).norm() < 1e-12);
    }

    #[test]
    fn bosonic_phases_break_linearity() {
        let c = cfg(6, 0.3, Boundary::Open);
        let r = heisenberg_image_with(&c, LadderOp::create(2, Eps::Plus), StepRule::bosonic());
        assert!(matches!(r, Err(Error::NotLinear { .. })));
    }

    #[test]
    fn image_acts_consistently() {
        let c = cfg(6, 0.45, Boundary::Open);
        let op = LadderOp::create(3, Eps::Plus);
        let img = heisenberg_image(&c, op).unwrap();
        let psi = FockState::from_amplitudes(
            &c,
            [
                (BasisState(0b0000_0001_0000), C64::new(0.6, 0.0)),
                (BasisState(0b0010_0000_0100), C64::new(0.0, 0.8)),
            ],
        );
        let lhs = step(&apply_ladder(&psi, op));
        let rhs = img.apply(&step(&psi));
        assert!(lhs.max_abs_diff(&rhs) < 1e-12);
    }

    #[test]
    fn open_edge_rejected() {
        let c = cfg(6, 0.3, Boundary::Open);
        assert!(heisenberg_image(&c, LadderOp::create(1, Eps::Plus)).is_err());
    }
}
