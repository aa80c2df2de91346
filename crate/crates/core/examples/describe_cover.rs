//! Coset data X/Λ for a few covers.

use std::sync::Arc;

use metawhit::metaplectic::MetaplecticStructure;
use metawhit::root_datum::RelativeRootDatum;

pub fn run_example() -> metawhit::Result<Vec<(String, i64, usize)>> {
    let mut out = Vec::new();
    for (t, n) in [("A1", 4), ("A2", 2), ("A2", 3), ("B2", 2), ("G2", 3)] {
        let m = MetaplecticStructure::new(Arc::new(RelativeRootDatum::build(t, None)?), n, &[1])?;
        out.push((t.to_string(), n, m.cosets().order()));
    }
    Ok(out)
}

#[allow(dead_code)]
fn main() -> metawhit::Result<()> {
    for (t, n, g) in run_example()? {
        println!("{t} n={n}: |Gamma| = {g}");
    }
    Ok(())
}
