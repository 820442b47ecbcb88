//! One particle in the automaton against the dense two-component walk.

use qca_dirac::walk::{compare_one_particle, walk_evolve, WalkState};
use qca_dirac::{Boundary, Eps, LatticeConfig, Site};

fn main() -> qca_dirac::Result<()> {
    let start = Site::new(32, Eps::Plus);
    for theta in [0.0, 0.1, 0.7] {
        let config = LatticeConfig::new(64, theta, Boundary::Periodic)?;
        let dev = compare_one_particle(&config, start, 100)?;

        let walk = walk_evolve(&WalkState::localized(&config, start.cell, start.eps)?, 100);
        let p = walk.probabilities();
        let mean: f64 = p.iter().enumerate().map(|(x, w)| x as f64 * w).sum();
        println!("theta {theta:.1}: max deviation {dev:.1e}, mean position after 100 steps {mean:.3}");
    }
    Ok(())
}
