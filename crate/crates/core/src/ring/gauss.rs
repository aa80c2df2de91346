use std::fmt;

use serde::{Deserialize, Serialize};

use super::scalar::GaussPoly;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum GaussKind {
    #[serde(rename = "SL2")]
    Sl2,
    #[serde(rename = "SU3")]
    Su3,
}

impl GaussKind {
    pub fn name(self) -> &'static str {
        match self {
            GaussKind::Sl2 => "SL2",
            GaussKind::Su3 => "SU3",
        }
    }
}

/// Formal Gauss sum g_kind(t) for the residue field of cardinality q^degree.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct GaussSym {
    pub kind: GaussKind,
    pub modulus: u32,
    pub degree: u32,
    pub residue: u32,
}

impl GaussSym {
    /// Builds the symbol with `t` reduced into `0..modulus`.
    pub fn new(kind: GaussKind, t: i64, modulus: u32, degree: u32) -> Self {
        assert!(modulus >= 1 && degree >= 1);
        let residue = t.rem_euclid(modulus as i64) as u32;
        GaussSym { kind, modulus, degree, residue }
    }

    /// The symbol with residue -t.
    pub fn conjugate(self) -> Self {
        GaussSym::new(self.kind, -(self.residue as i64), self.modulus, self.degree)
    }
}

impl fmt::Debug for GaussSym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "g_{}[d={}]({} mod {})",
            self.kind.name(),
            self.degree,
            self.residue,
            self.modulus
        )
    }
}

/// SL2 symbols of residue 0 become -1; everything else stays atomic.
pub fn gauss_reduce(s: GaussSym) -> GaussPoly {
    GaussPoly::gauss(s)
}

/// Canonical reduction of a product of symbols.
///
/// Returns the sign, the extra power of q and the reduced exponent list. SL2
/// symbols obey g(t) g(-t) = q^d; SU3 symbols are left alone.
pub(crate) fn reduce_symbols(mut syms: Vec<(GaussSym, u32)>) -> (bool, i64, Vec<(GaussSym, u32)>) {
    syms.sort_by_key(|a| a.0);
    let mut merged: Vec<(GaussSym, u32)> = Vec::with_capacity(syms.len());
    for (s, e) in syms {
        match merged.last_mut() {
            Some((t, f)) if *t == s => *f += e,
            _ => merged.push((s, e)),
        }
    }
    let mut negative = false;
    let mut qexp = 0i64;
    for i in 0..merged.len() {
        let (s, e) = merged[i];
        if s.kind != GaussKind::Sl2 || e == 0 {
            continue;
        }
        if s.residue == 0 {
            if e % 2 == 1 {
                negative = !negative;
            }
            merged[i].1 = 0;
            continue;
        }
        let partner = s.conjugate();
        if partner == s {
            qexp += s.degree as i64 * (e / 2) as i64;
            merged[i].1 = e % 2;
            continue;
        }
        if let Some(j) = merged.iter().position(|(t, _)| *t == partner) {
            let m = merged[i].1.min(merged[j].1);
            merged[i].1 -= m;
            merged[j].1 -= m;
            qexp += s.degree as i64 * m as i64;
        }
    }
    merged.retain(|(_, e)| *e > 0);
    (negative, qexp, merged)
}
