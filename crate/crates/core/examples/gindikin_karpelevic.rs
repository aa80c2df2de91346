//! Rank-one c-functions for SL2 and SU3 pieces, and c_{w0} for A2.

use std::sync::Arc;

use metawhit::metaplectic::MetaplecticStructure;
use metawhit::ring::serialize::ratfunc_latex;
use metawhit::root_datum::{Marker, RelativeRootDatum};
use metawhit::whittaker::{c_simple, c_w};

pub fn run_example() -> metawhit::Result<Vec<String>> {
    let mut lines = Vec::new();
    for (marker, n) in [("SL2", 1), ("SL2", 2), ("SL2", 3), ("SU3", 1), ("SU3", 2)] {
        let d = RelativeRootDatum::build("A1", Some(vec![Marker::parse(marker)?]))?;
        let m = MetaplecticStructure::new(Arc::new(d), n, &[1])?;
        lines.push(format!("{marker} n_a={}: {}", m.simple(0).n_alpha, ratfunc_latex(&c_simple(&m, 0))));
    }
    let m = MetaplecticStructure::new(Arc::new(RelativeRootDatum::build("A2", None)?), 2, &[1])?;
    let w0 = m.datum().longest().clone();
    lines.push(format!("A2 n=2 c_w0: {}", ratfunc_latex(&c_w(&m, &w0)?)));
    Ok(lines)
}

#[allow(dead_code)]
fn main() -> metawhit::Result<()> {
    for l in run_example()? {
        println!("{l}");
    }
    Ok(())
}
