use std::collections::BTreeMap;
use std::fmt;

use super::lattice::{IntMatrix, LatticeVector};
use super::scalar::GaussPoly;

/// Finite sum of c_λ x^λ with coefficients in the scalar ring.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LaurentPoly {
    rank: usize,
    terms: BTreeMap<LatticeVector, GaussPoly>,
}

impl LaurentPoly {
    pub fn zero(rank: usize) -> Self {
        LaurentPoly { rank, terms: BTreeMap::new() }
    }

    pub fn one(rank: usize) -> Self {
        Self::constant(rank, GaussPoly::one())
    }

    pub fn constant(rank: usize, c: GaussPoly) -> Self {
        Self::monomial(LatticeVector::zero(rank), c)
    }

    pub fn monomial(exp: LatticeVector, c: GaussPoly) -> Self {
        let rank = exp.rank();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        LaurentPoly { rank, terms }
    }

    /// x^λ with coefficient 1.
    pub fn x(exp: LatticeVector) -> Self {
        Self::monomial(exp, GaussPoly::one())
    }

    pub fn from_terms<I: IntoIterator<Item = (LatticeVector, GaussPoly)>>(rank: usize, it: I) -> Self {
        let mut p = LaurentPoly::zero(rank);
        for (e, c) in it {
            assert_eq!(e.rank(), rank, "exponent rank mismatch");
            p.add_term(e, c);
        }
        p
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&LatticeVector, &GaussPoly)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self.terms.iter().all(|(e, c)| e.is_zero() && c.is_one())
    }

    pub fn coeff(&self, e: &LatticeVector) -> GaussPoly {
        self.terms.get(e).cloned().unwrap_or_default()
    }

    pub fn exponents(&self) -> impl Iterator<Item = &LatticeVector> {
        self.terms.keys()
    }

    pub(crate) fn add_term(&mut self, e: LatticeVector, c: GaussPoly) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get().add(&c);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, o: &LaurentPoly) -> LaurentPoly {
        let (big, small) = if self.len() >= o.len() { (self, o) } else { (o, self) };
        let mut out = big.clone();
        for (e, c) in &small.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> LaurentPoly {
        LaurentPoly {
            rank: self.rank,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c.neg())).collect(),
        }
    }

    pub fn sub(&self, o: &LaurentPoly) -> LaurentPoly {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &LaurentPoly) -> LaurentPoly {
        if self.is_one() {
            return o.clone();
        }
        if o.is_one() {
            return self.clone();
        }
        let mut out = LaurentPoly::zero(self.rank);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                out.add_term(e1 + e2, c1.mul(c2));
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> LaurentPoly {
        let mut out = LaurentPoly::one(self.rank);
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    pub fn scale(&self, c: &GaussPoly) -> LaurentPoly {
        if c.is_one() {
            return self.clone();
        }
        let mut out = LaurentPoly::zero(self.rank);
        for (e, d) in &self.terms {
            out.add_term(e.clone(), d.mul(c));
        }
        out
    }

    /// Multiplication by x^v.
    pub fn shift(&self, v: &LatticeVector) -> LaurentPoly {
        if v.is_zero() {
            return self.clone();
        }
        LaurentPoly {
            rank: self.rank,
            terms: self.terms.iter().map(|(e, c)| (e + v, c.clone())).collect(),
        }
    }

    /// x^λ ↦ x^{Mλ}.
    pub fn map_exponents(&self, m: &IntMatrix) -> LaurentPoly {
        let mut out = LaurentPoly::zero(self.rank);
        for (e, c) in &self.terms {
            out.add_term(m.apply(e), c.clone());
        }
        out
    }

    pub fn filter<F: Fn(&LatticeVector) -> bool>(&self, keep: F) -> LaurentPoly {
        LaurentPoly {
            rank: self.rank,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| keep(e))
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    /// The single term, if there is exactly one.
    pub fn as_monomial(&self) -> Option<(&LatticeVector, &GaussPoly)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    /// Exact quotient by 1 - c x^v for lexicographically positive v.
    pub fn div_binomial(&self, c: &GaussPoly, v: &LatticeVector) -> Option<LaurentPoly> {
        debug_assert!(v.is_lex_positive());
        let p = v.0.iter().position(|&a| a != 0)?;
        let step = v.0[p];
        let mut classes: BTreeMap<LatticeVector, BTreeMap<i64, GaussPoly>> = BTreeMap::new();
        for (e, coef) in &self.terms {
            let t = e.0[p].div_euclid(step);
            let key = e - &v.scale(t);
            classes.entry(key).or_default().insert(t, coef.clone());
        }
        let mut out = LaurentPoly::zero(self.rank);
        for (key, chain) in classes {
            let lo = *chain.keys().next()?;
            let hi = *chain.keys().next_back()?;
            let mut prev = GaussPoly::zero();
            for t in lo..=hi {
                let ft = chain.get(&t).cloned().unwrap_or_default();
                let gt = ft.add(&c.mul(&prev));
                if t == hi {
                    if !gt.is_zero() {
                        return None;
                    }
                } else {
                    out.add_term(&key + &v.scale(t), gt.clone());
                }
                prev = gt;
            }
        }
        Some(out)
    }

    /// General exact division; the divisor's leading coefficient must be a unit.
    pub fn div_exact(&self, d: &LaurentPoly) -> Option<LaurentPoly> {
        let (dlead_e, dlead_c) = d.terms.iter().next_back()?;
        let dlead_inv = dlead_c.unit_inverse()?;
        let dmin = d.terms.keys().next()?.clone();
        let mut rem = self.clone();
        let mut quot = LaurentPoly::zero(self.rank);
        let Some(fmin) = self.terms.keys().next().cloned() else {
            return Some(quot);
        };
        let floor = &fmin - &dmin;
        for _ in 0..1_000_000 {
            let Some((e, c)) = rem.terms.iter().next_back() else {
                return Some(quot);
            };
            let qe = e - dlead_e;
            if qe < floor {
                return None;
            }
            let qc = c.mul(&dlead_inv);
            let step = LaurentPoly::monomial(qe.clone(), qc.clone());
            rem = rem.sub(&d.mul(&step));
            quot.add_term(qe, qc);
        }
        None
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> =
            self.terms.iter().map(|(e, c)| format!("({c:?})x^{e}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}
