//! Fit `U a U^dagger` onto single ladder operators. The fermionic step is
//! linear in them; the same gates without fermionic signs are not.

use qca_dirac::algebra::{heisenberg_fit, LadderOp};
use qca_dirac::evolution::StepRule;
use qca_dirac::{Boundary, Eps, LatticeConfig};

fn main() -> qca_dirac::Result<()> {
    let config = LatticeConfig::new(8, 0.3, Boundary::Open)?;
    for op in [LadderOp::annihilate(4, Eps::Plus), LadderOp::annihilate(4, Eps::Minus)] {
        let fit = heisenberg_fit(&config, op, StepRule::fermionic())?;
        println!("U a_({},{}) U^dagger, residual {:.1e}:", op.cell, op.eps, fit.residual);
        for (a, term) in fit.combination(1e-12).terms() {
            println!("  {:+.6} a_({},{})", a.re, term.cell, term.eps);
        }
        let bosonic = heisenberg_fit(&config, op, StepRule::bosonic())?;
        println!("  without fermionic signs the residual is {:.3}", bosonic.residual);
    }
    Ok(())
}
