//! Invariants of the automaton, the ladder algebra and the output formats,
//! checked on random inputs.

mod common;

use proptest::prelude::*;

use common::{crossing_step, ring};
use qca_dirac::algebra::{apply_ladder, apply_product, heisenberg_image, LadderOp};
use qca_dirac::evolution::{evolve, step, step_inverse};
use qca_dirac::io::fmt_f64;
use qca_dirac::linalg::{op_norm, wrap_phase};
use qca_dirac::spectral::{eigenphase, mode_matrix_kdx};
use qca_dirac::{BasisState, Boundary, Eps, FockState, LatticeConfig, C64};

const PI: f64 = std::f64::consts::PI;

fn eps_of(plus: bool) -> Eps {
    if plus {
        Eps::Plus
    } else {
        Eps::Minus
    }
}

/// A random superposition of a few basis words on `cells` cells.
fn state(config: &LatticeConfig, terms: &[(u64, f64, f64)]) -> FockState {
    let mask = (1u128 << config.sites()) - 1;
    FockState::from_amplitudes(
        config,
        terms.iter().map(|&(w, re, im)| (BasisState(u128::from(w) & mask), C64::new(re, im))),
    )
}

fn terms() -> impl Strategy<Value = Vec<(u64, f64, f64)>> {
    prop::collection::vec((any::<u64>(), -1.0..1.0f64, -1.0..1.0f64), 1..6)
}

fn boundary() -> impl Strategy<Value = Boundary> {
    prop_oneof![Just(Boundary::Periodic), Just(Boundary::Open)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn step_preserves_norm(cells in 2usize..7, theta in -PI..PI, b in boundary(), t in terms()) {
        let cfg = LatticeConfig::new(cells, theta, b).unwrap();
        let psi = state(&cfg, &t);
        let out = evolve(&psi, 3);
        prop_assert!((out.norm_sqr() - psi.norm_sqr()).abs() <= 1e-12 * psi.norm_sqr().max(1e-300));
    }

    #[test]
    fn inverse_undoes_step(cells in 2usize..7, theta in -PI..PI, b in boundary(), t in terms()) {
        let cfg = LatticeConfig::new(cells, theta, b).unwrap();
        let psi = state(&cfg, &t);
        prop_assert!(step_inverse(&step(&psi)).max_abs_diff(&psi) < 1e-13);
        prop_assert!(step(&step_inverse(&psi)).max_abs_diff(&psi) < 1e-13);
    }

    #[test]
    fn particle_number_is_conserved(cells in 2usize..7, theta in -PI..PI, b in boundary(), w in any::<u64>()) {
        let cfg = LatticeConfig::new(cells, theta, b).unwrap();
        let word = BasisState(u128::from(w) & ((1u128 << cfg.sites()) - 1));
        let out = evolve(&FockState::basis(&cfg, word), 2);
        for (v, _) in out.iter() {
            prop_assert_eq!(v.particle_count(), word.particle_count());
        }
    }

    /// At theta = 0 the step is a signed permutation; compare with a hand count
    /// of reorderings and seam crossings.
    #[test]
    fn free_step_matches_hand_translation(cells in 2usize..6, w in any::<u64>()) {
        let cfg = ring(cells, 0.0);
        let word = u128::from(w) & ((1u128 << cfg.sites()) - 1);
        let (to, sign) = crossing_step(cells, word);
        let expect = FockState::from_amplitudes(&cfg, [(BasisState(to), C64::new(sign, 0.0))]);
        prop_assert!(step(&FockState::basis(&cfg, BasisState(word))).max_abs_diff(&expect) < 1e-15);
    }

    #[test]
    fn creation_squares_to_zero(cells in 2usize..6, cell in 0usize..6, plus: bool, t in terms()) {
        let cfg = ring(cells, 0.2);
        let op = LadderOp::create(cell % cells, eps_of(plus));
        let psi = state(&cfg, &t);
        prop_assert!(apply_product(&psi, &[op, op]).is_zero());
    }

    /// Two distinct creators anticommute on every input.
    #[test]
    fn creators_anticommute(cells in 2usize..6, a in 0usize..12, b in 0usize..12, t in terms()) {
        let cfg = ring(cells, 0.2);
        let (a, b) = (a % cfg.sites(), b % cfg.sites());
        prop_assume!(a != b);
        let site = |bit: usize| LadderOp::create(bit / 2, eps_of(bit % 2 == 1));
        let psi = state(&cfg, &t);
        let ab = apply_ladder(&apply_ladder(&psi, site(b)), site(a));
        let ba = apply_ladder(&apply_ladder(&psi, site(a)), site(b));
        prop_assert!(ab.add_scaled(C64::new(1.0, 0.0), &ba).unwrap().norm() < 1e-14);
    }

    /// `U a U^dagger` is fitted on at most three particles; it must still hold
    /// on words with more.
    #[test]
    fn heisenberg_image_holds_beyond_fit(theta in -PI..PI, cell in 2usize..5, plus: bool, create: bool, w in any::<u64>()) {
        let cfg = LatticeConfig::new(7, theta, Boundary::Open).unwrap();
        let op = if create {
            LadderOp::create(cell, eps_of(plus))
        } else {
            LadderOp::annihilate(cell, eps_of(plus))
        };
        let image = heisenberg_image(&cfg, op).unwrap();
        let psi = FockState::basis(&cfg, BasisState(u128::from(w) & ((1u128 << 14) - 1)));
        let lhs = step(&apply_ladder(&psi, op));
        let rhs = image.apply(&step(&psi));
        prop_assert!(lhs.max_abs_diff(&rhs) < 1e-12);
    }

    #[test]
    fn mode_matrix_is_unitary_with_conjugate_phases(theta in -PI..PI, kdx in -PI..PI) {
        let mm = mode_matrix_kdx(theta, kdx);
        let id = nalgebra::Matrix2::<C64>::identity();
        prop_assert!(op_norm(&(mm.m.adjoint() * mm.m - id)) < 1e-14);
        let phi = eigenphase(theta, kdx);
        let trace = mm.m.trace();
        prop_assert!((trace - C64::new(2.0 * phi.cos(), 0.0)).norm() < 1e-14);
        prop_assert!((mm.m.determinant() - C64::new(1.0, 0.0)).norm() < 1e-14);
        prop_assert!((mm.m * mm.vplus - mm.vplus * C64::from_polar(1.0, phi)).norm() < 1e-13);
        prop_assert!((mm.m * mm.vminus - mm.vminus * C64::from_polar(1.0, -phi)).norm() < 1e-13);
    }

    #[test]
    fn wrapped_phase_stays_in_range(x in -1e6..1e6f64) {
        let y = wrap_phase(x);
        prop_assert!((-PI..PI).contains(&y));
        let turns = (x - y) / (2.0 * PI);
        prop_assert!((turns - turns.round()).abs() < 1e-6);
    }

    #[test]
    fn formatted_floats_round_trip(x in any::<f64>().prop_filter("finite", |x| x.is_finite())) {
        let back: f64 = fmt_f64(x).parse().unwrap();
        prop_assert_eq!(back.to_bits(), x.to_bits());
    }

    #[test]
    fn state_dump_round_trips(cells in 2usize..8, theta in -PI..PI, t in terms()) {
        let cfg = ring(cells, theta);
        let psi = state(&cfg, &t);
        let text = qca_dirac::io::to_json_string(&psi.to_json()).unwrap();
        let value: serde_json::Value = serde_json::from_str(&text).unwrap();
        let back = FockState::from_json(&cfg, &value).unwrap();
        prop_assert_eq!(back.max_abs_diff(&psi), 0.0);
    }
}
