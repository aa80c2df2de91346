//! Normalized Whittaker values on the double cover of SL2.

use std::sync::Arc;

use metawhit::metaplectic::MetaplecticStructure;
use metawhit::ring::serialize::ratfunc_latex;
use metawhit::ring::LatticeVector;
use metawhit::root_datum::RelativeRootDatum;
use metawhit::whittaker::whittaker_normalized;

pub fn run_example() -> metawhit::Result<Vec<(i64, String)>> {
    let m = MetaplecticStructure::new(Arc::new(RelativeRootDatum::build("A1", None)?), 2, &[1])?;
    (-1..=3)
        .map(|k| Ok((k, ratfunc_latex(&whittaker_normalized(&m, &LatticeVector(vec![k]))?.value))))
        .collect()
}

#[allow(dead_code)]
fn main() -> metawhit::Result<()> {
    for (k, v) in run_example()? {
        println!("W(pi^{k}) = {v}");
    }
    Ok(())
}
