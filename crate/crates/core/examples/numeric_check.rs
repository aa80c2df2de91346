//! Closed form vs τ̃ matrix route at seeded random characters, SU3 included.

use std::sync::Arc;

use metawhit::checks::route_consistency;
use metawhit::metaplectic::MetaplecticStructure;
use metawhit::numeric::Su3Values;
use metawhit::root_datum::{Marker, RelativeRootDatum};

pub fn run_example() -> metawhit::Result<Vec<(String, f64)>> {
    let mut out = Vec::new();
    for (t, mk, n) in [("A2", "SL2", 2), ("A1", "SU3", 2), ("A1", "SU3", 3)] {
        let markers = vec![Marker::parse(mk)?; if t == "A2" { 2 } else { 1 }];
        let m = MetaplecticStructure::new(Arc::new(RelativeRootDatum::build(t, Some(markers))?), n, &[1])?;
        let o = route_consistency(&m, 25, 11, Su3Values::Model)?;
        out.push((format!("{t} {mk} n={n}"), o.max_deviation));
    }
    Ok(out)
}

#[allow(dead_code)]
fn main() -> metawhit::Result<()> {
    for (label, dev) in run_example()? {
        println!("{label}: max relative deviation {dev:e}");
    }
    Ok(())
}
