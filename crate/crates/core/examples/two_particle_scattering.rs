//! Two fermions on an open chain: an adjacent pair after one step, then a
//! head-on collision at theta = 0 where the exchange shows up as a sign.

use qca_dirac::algebra::{build_state, LadderOp};
use qca_dirac::evolution::step;
use qca_dirac::{Boundary, Eps, LatticeConfig};

fn main() -> qca_dirac::Result<()> {
    let config = LatticeConfig::new(8, 0.3, Boundary::Open)?;
    let pair = build_state(&config, &[LadderOp::create(3, Eps::Plus), LadderOp::create(3, Eps::Minus)]);
    println!("a+_(3,+) a+_(3,-)|0> after one step:");
    for (w, a) in step(&pair).iter() {
        println!("  {}  {:+.6}", w.to_bit_string(config.cells), a.re);
    }

    // right mover at 2 and left mover at 4 meet and pass
    let free = config.with_theta(0.0);
    let mut psi = build_state(&free, &[LadderOp::create(2, Eps::Plus), LadderOp::create(4, Eps::Minus)]);
    for _ in 0..2 {
        psi = step(&psi);
    }
    let (w, a) = psi.iter().next().expect("one word at theta = 0");
    println!("head-on collision: {} with amplitude {:+.1}", w.to_bit_string(free.cells), a.re);
    Ok(())
}
