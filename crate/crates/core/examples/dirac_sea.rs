//! Fill the negative band, confirm the sea is a step eigenstate, then list
//! the energy each particle or hole excitation costs.

use qca_dirac::evolution::StepRule;
use qca_dirac::spectral::{build_dirac_sea, sea_excitation_gaps, step_overlap, Excitation};
use qca_dirac::{Boundary, LatticeConfig};

fn main() -> qca_dirac::Result<()> {
    let config = LatticeConfig::new(6, 0.4, Boundary::Periodic)?;
    let sea = build_dirac_sea(&config)?;
    let (overlap, defect) = step_overlap(&sea, StepRule::fermionic());
    println!(
        "sea: {} words, |<U>| = {:.12} at angle {:+.6}, defect {:.1e}",
        sea.len(),
        overlap.norm() / sea.norm_sqr(),
        overlap.arg(),
        defect / sea.norm_sqr()
    );
    for g in sea_excitation_gaps(&config)? {
        let kind = match g.kind {
            Excitation::Particle => "particle",
            Excitation::Hole => "hole",
        };
        println!("{kind:<9} kdx {:+.4}  gap {:.10}  expected {:.10}", g.kdx, g.gap, g.expected);
    }
    Ok(())
}
