//! Canonical JSON of a rational function and back.

use std::sync::Arc;

use metawhit::cg_action::act_simple;
use metawhit::metaplectic::MetaplecticStructure;
use metawhit::ring::serialize::{ratfunc_from_json, ratfunc_to_json};
use metawhit::ring::{LatticeVector, RatFunc};
use metawhit::root_datum::RelativeRootDatum;

pub fn run_example() -> metawhit::Result<(String, bool)> {
    let m = MetaplecticStructure::new(Arc::new(RelativeRootDatum::build("A1", None)?), 3, &[1])?;
    let f = act_simple(&m, 0, &RatFunc::x(LatticeVector(vec![2])))?;
    let j = ratfunc_to_json(&f);
    let back = ratfunc_from_json(&j, 1)?;
    Ok((j.to_string(), back == f))
}

#[allow(dead_code)]
fn main() -> metawhit::Result<()> {
    let (j, ok) = run_example()?;
    println!("{j}");
    println!("round trip equal: {ok}");
    Ok(())
}
