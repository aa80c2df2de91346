//! τ̃ matrices over the coset group and the cocycle relation.

use std::sync::Arc;

use metawhit::cg_action::dtilde;
use metawhit::metaplectic::MetaplecticStructure;
use metawhit::ring::serialize::ratfunc_latex;
use metawhit::root_datum::RelativeRootDatum;

pub fn run_example() -> metawhit::Result<(Vec<String>, bool)> {
    let m = MetaplecticStructure::new(Arc::new(RelativeRootDatum::build("A1", None)?), 4, &[1])?;
    let s = m.datum().from_word(&[0])?;
    let t = dtilde(&m, &s)?;
    let entries = t.entries.iter().map(|((a, b), e)| format!("[{a},{b}] {}", ratfunc_latex(e))).collect();

    let m2 = MetaplecticStructure::new(Arc::new(RelativeRootDatum::build("A2", None)?), 2, &[1])?;
    let d = m2.datum();
    let (w1, w2) = (d.from_word(&[0])?, d.from_word(&[1, 0])?);
    let lhs = dtilde(&m2, &d.mul(&w1, &w2))?;
    let rhs = dtilde(&m2, &w1)?.twist(&w2).mul(&dtilde(&m2, &w2)?, 2);
    Ok((entries, lhs.equals(&rhs, 2)))
}

#[allow(dead_code)]
fn main() -> metawhit::Result<()> {
    let (entries, ok) = run_example()?;
    for e in entries {
        println!("{e}");
    }
    println!("A2 n=2: D(s1 s2 s1) = D(s1)^(s2 s1) D(s2 s1): {ok}");
    Ok(())
}
