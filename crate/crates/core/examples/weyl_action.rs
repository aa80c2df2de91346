//! The Chinta-Gunnells action on a monomial, and s∘s = id.

use std::sync::Arc;

use metawhit::cg_action::{act, act_simple};
use metawhit::metaplectic::MetaplecticStructure;
use metawhit::ring::serialize::ratfunc_latex;
use metawhit::ring::{LatticeVector, RatFunc};
use metawhit::root_datum::RelativeRootDatum;

pub fn run_example() -> metawhit::Result<(String, bool)> {
    let m = MetaplecticStructure::new(Arc::new(RelativeRootDatum::build("A2", None)?), 3, &[1])?;
    let f = RatFunc::x(LatticeVector(vec![1, 0]));
    let w = m.datum().from_word(&[0, 1])?;
    let g = act(&m, &w, &f)?;
    let back = act_simple(&m, 0, &act_simple(&m, 0, &f)?)?;
    Ok((ratfunc_latex(&g), back == f))
}

#[allow(dead_code)]
fn main() -> metawhit::Result<()> {
    let (g, inv) = run_example()?;
    println!("s1 s2 . x^(1,0) = {g}");
    println!("s1 s1 . x^(1,0) == x^(1,0): {inv}");
    Ok(())
}
