//! Numeric n-th power Gauss sums over F_q.

use metawhit::numeric::{gauss_sl2_numeric, Specialization};

pub fn run_example() -> metawhit::Result<Vec<(u32, i64, f64)>> {
    let mut out = Vec::new();
    for n in [2u32, 3] {
        let spec = Specialization::new(13, n, Vec::new())?;
        for t in 0..=n as i64 {
            out.push((n, t, gauss_sl2_numeric(t, &spec).norm()));
        }
    }
    Ok(out)
}

#[allow(dead_code)]
fn main() -> metawhit::Result<()> {
    for (n, t, a) in run_example()? {
        println!("q=13 n={n} |g({t})| = {a:.12}");
    }
    Ok(())
}
