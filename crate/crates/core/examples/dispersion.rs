//! Lattice dispersion against the relativistic one, and how fast it converges.

use qca_dirac::spectral::{dispersion_error, energy, loglog_slope, MomentumGrid};
use qca_dirac::{Boundary, LatticeConfig};

fn main() -> qca_dirac::Result<()> {
    let config = LatticeConfig::new(16, 0.1, Boundary::Periodic)?;
    println!("{:>8} {:>12} {:>12}", "k", "E_lattice", "E_dirac");
    for k in MomentumGrid::periodic(&config).k_values().into_iter().step_by(2) {
        let e = energy(&config, k);
        println!("{k:>8.4} {:>12.8} {:>12.8}", e.e_plus, e.dirac);
    }

    // shrink theta and k dx together
    let eps = [0.2, 0.1, 0.05, 0.025];
    let errs: Vec<f64> = eps.iter().map(|&e| dispersion_error(e, e)).collect();
    for (e, d) in eps.iter().zip(&errs) {
        println!("eps {e:<6} |phi - sqrt(theta^2 + kdx^2)| = {d:.3e}");
    }
    println!("order {:.3}", loglog_slope(&eps, &errs));
    Ok(())
}
