//! Can local sign rules reproduce fermionic exchange signs? Yes on a chain,
//! no on a square grid, and trivially yes when nothing moves.

use qca_dirac::nogo::{sign_csp, CspOutcome, FootprintSpec, Lattice2D};

fn report(label: &str, outcome: &CspOutcome) {
    match outcome {
        CspOutcome::Sat { rules } => {
            let crossing = rules.iter().filter(|r| r.crossing).count();
            println!("{label}: satisfiable, {} rule classes ({crossing} crossing)", rules.len());
        }
        CspOutcome::Unsat { core } => {
            println!("{label}: unsatisfiable, core of {}", core.len());
            for c in core {
                println!("  {c:?}");
            }
        }
    }
}

fn main() -> qca_dirac::Result<()> {
    report("chain, radius 1", &sign_csp(1, 1, &FootprintSpec::chain_1d(), &Lattice2D::chain(9))?);
    report("5x5 grid", &sign_csp(2, 1, &FootprintSpec::full(2), &Lattice2D::square(5))?);
    report("5x5 grid, no moves", &sign_csp(2, 1, &FootprintSpec::trivial(), &Lattice2D::square(5))?);
    Ok(())
}
