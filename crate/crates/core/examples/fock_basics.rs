//! Build a two-particle state from ladder operators, step it, and step back.
//!
//!     cargo run --example fock_basics

use qca_dirac::algebra::{build_state, LadderOp};
use qca_dirac::evolution::{evolve, step_inverse};
use qca_dirac::{Boundary, Eps, LatticeConfig};

fn main() -> qca_dirac::Result<()> {
    let config = LatticeConfig::new(6, 0.4, Boundary::Periodic)?;
    // a^dagger_{1,+} a^dagger_{4,-} |0>
    let psi = build_state(&config, &[LadderOp::create(1, Eps::Plus), LadderOp::create(4, Eps::Minus)]);

    let mut phi = evolve(&psi, 5);
    println!("after 5 steps: {} basis words, norm {:.15}", phi.len(), phi.norm());
    println!("particle numbers present: {:?}", phi.particle_numbers());

    let mut top: Vec<_> = phi.iter().collect();
    top.sort_by(|a, b| b.1.norm().total_cmp(&a.1.norm()));
    for (word, amp) in top.iter().take(4) {
        println!("  {}  {:+.6} {:+.6}i", word.to_bit_string(config.cells), amp.re, amp.im);
    }

    for _ in 0..5 {
        phi = step_inverse(&phi);
    }
    println!("round trip error: {:.1e}", phi.max_abs_diff(&psi));
    Ok(())
}
