//! A witness triple on a square grid, and why a chain has none.

use qca_dirac::nogo::{find_witness_triple, FootprintSpec, Lattice2D};

fn main() -> qca_dirac::Result<()> {
    let d = 3;
    let spec = FootprintSpec::full(2);
    let grid = Lattice2D::square(15);
    match find_witness_triple(&spec, &grid, d)? {
        Some(w) => {
            println!("witness {:?} < {:?} < {:?}", w.s1, w.s2, w.s3);
            println!("path of {} sites, never within {d} of the middle site", w.path.len());
            w.validate(&spec, &grid, d).expect("witness checks out");
        }
        None => println!("no witness on the square grid"),
    }

    let chain = Lattice2D::chain(15);
    let found = find_witness_triple(&FootprintSpec::chain_1d(), &chain, d)?;
    println!("chain of 15: witness found = {}", found.is_some());
    Ok(())
}
