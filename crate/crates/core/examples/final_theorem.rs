//! W(π^λ) against x^{w0λ} N(χ,λ) on A2.

use std::sync::Arc;

use metawhit::metaplectic::MetaplecticStructure;
use metawhit::ring::LatticeVector;
use metawhit::root_datum::RelativeRootDatum;
use metawhit::whittaker::check_final_theorem;

pub fn run_example() -> metawhit::Result<Vec<(Vec<i64>, bool)>> {
    let m = MetaplecticStructure::new(Arc::new(RelativeRootDatum::build("A2", None)?), 2, &[1])?;
    [[0, 0], [1, 1], [2, 1], [1, 2]]
        .into_iter()
        .map(|l| Ok((l.to_vec(), check_final_theorem(&m, &LatticeVector(l.to_vec()))?)))
        .collect()
}

#[allow(dead_code)]
fn main() -> metawhit::Result<()> {
    for (l, ok) in run_example()? {
        println!("lambda={l:?}: {ok}");
    }
    Ok(())
}
