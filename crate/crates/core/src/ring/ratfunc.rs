use std::collections::BTreeMap;
use std::fmt;

use super::lattice::{IntMatrix, LatticeVector};
use super::laurent::LaurentPoly;
use super::scalar::GaussPoly;
use crate::error::{Error, Result};

/// The factor 1 - c x^v with c = ±q^k and v lexicographically positive.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Binomial {
    pub c: GaussPoly,
    pub v: LatticeVector,
}

impl Binomial {
    /// Normalizes 1 - c x^v; returns the binomial and the monomial u with
    /// 1 - c x^v = u * binomial.
    pub fn oriented(c: GaussPoly, v: LatticeVector) -> (Binomial, LaurentPoly) {
        debug_assert!(c.as_signed_q_power().is_some(), "binomial constant must be ±q^k");
        debug_assert!(!v.is_zero());
        let rank = v.rank();
        if v.is_lex_positive() {
            (Binomial { c, v }, LaurentPoly::one(rank))
        } else {
            let cinv = c.unit_inverse().expect("±q^k is a unit");
            let unit = LaurentPoly::monomial(v.clone(), c.neg());
            (Binomial { c: cinv, v: -&v }, unit)
        }
    }

    pub fn to_poly(&self) -> LaurentPoly {
        let rank = self.v.rank();
        LaurentPoly::one(rank).sub(&LaurentPoly::monomial(self.v.clone(), self.c.clone()))
    }

    /// Recognizes a polynomial of the form u * (1 - c x^v) with u a unit monomial.
    pub fn recognize(p: &LaurentPoly) -> Option<(Binomial, LaurentPoly)> {
        if p.len() != 2 {
            return None;
        }
        let mut it = p.terms();
        let (e0, a) = it.next()?;
        let (e1, b) = it.next()?;
        let ainv = a.unit_inverse()?;
        let c = b.mul(&ainv).neg();
        c.as_signed_q_power()?;
        let (bin, u) = Binomial::oriented(c, e1 - e0);
        Some((bin, u.mul(&LaurentPoly::monomial(e0.clone(), a.clone()))))
    }
}

/// Inverse of a unit monomial c x^v.
fn unit_monomial_inverse(u: &LaurentPoly) -> Option<LaurentPoly> {
    let (e, c) = u.as_monomial()?;
    Some(LaurentPoly::monomial(-e, c.unit_inverse()?))
}

/// Element of the fraction field: num / (den * prod binomials).
#[derive(Clone)]
pub struct RatFunc {
    num: LaurentPoly,
    den: LaurentPoly,
    factors: BTreeMap<Binomial, u32>,
}

impl RatFunc {
    pub fn zero(rank: usize) -> Self {
        Self::from_poly(LaurentPoly::zero(rank))
    }

    pub fn one(rank: usize) -> Self {
        Self::from_poly(LaurentPoly::one(rank))
    }

    pub fn from_poly(p: LaurentPoly) -> Self {
        let rank = p.rank();
        RatFunc { num: p, den: LaurentPoly::one(rank), factors: BTreeMap::new() }
    }

    pub fn x(exp: LatticeVector) -> Self {
        Self::from_poly(LaurentPoly::x(exp))
    }

    pub fn constant(rank: usize, c: GaussPoly) -> Self {
        Self::from_poly(LaurentPoly::constant(rank, c))
    }

    pub fn new(num: LaurentPoly, den: LaurentPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(RatFunc::from_poly(num).mul(&RatFunc::recip_poly(&den)))
    }

    /// 1 / p, keeping binomials factored where recognizable.
    fn recip_poly(p: &LaurentPoly) -> RatFunc {
        let rank = p.rank();
        if let Some(inv) = unit_monomial_inverse(p) {
            return RatFunc::from_poly(inv);
        }
        if let Some((bin, u)) = Binomial::recognize(p) {
            if let Some(uinv) = unit_monomial_inverse(&u) {
                let mut factors = BTreeMap::new();
                factors.insert(bin, 1);
                return RatFunc { num: uinv, den: LaurentPoly::one(rank), factors };
            }
        }
        RatFunc { num: LaurentPoly::one(rank), den: p.clone(), factors: BTreeMap::new() }
    }

    /// 1 / (1 - c x^v).
    pub fn inv_binomial(c: GaussPoly, v: LatticeVector) -> RatFunc {
        let rank = v.rank();
        let (bin, u) = Binomial::oriented(c, v);
        let mut factors = BTreeMap::new();
        factors.insert(bin, 1);
        RatFunc {
            num: unit_monomial_inverse(&u).expect("unit"),
            den: LaurentPoly::one(rank),
            factors,
        }
    }

    pub fn rank(&self) -> usize {
        self.num.rank()
    }

    pub fn num(&self) -> &LaurentPoly {
        &self.num
    }

    /// Non-binomial part of the denominator.
    pub fn den_poly(&self) -> &LaurentPoly {
        &self.den
    }

    pub fn den_factors(&self) -> &BTreeMap<Binomial, u32> {
        &self.factors
    }

    /// Full denominator as a polynomial.
    pub fn den(&self) -> LaurentPoly {
        let mut d = self.den.clone();
        for (b, m) in &self.factors {
            d = d.mul(&b.to_poly().pow(*m));
        }
        d
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one() && self.factors.is_empty()
    }

    pub fn as_polynomial(&self) -> Option<&LaurentPoly> {
        self.is_polynomial().then_some(&self.num)
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc { num: self.num.neg(), den: self.den.clone(), factors: self.factors.clone() }
    }

    pub fn mul(&self, o: &RatFunc) -> RatFunc {
        if self.is_zero() || o.is_zero() {
            return RatFunc::zero(self.rank());
        }
        let mut factors = self.factors.clone();
        for (b, m) in &o.factors {
            *factors.entry(b.clone()).or_insert(0) += m;
        }
        RatFunc { num: self.num.mul(&o.num), den: self.den.mul(&o.den), factors }
    }

    pub fn mul_poly(&self, p: &LaurentPoly) -> RatFunc {
        RatFunc { num: self.num.mul(p), den: self.den.clone(), factors: self.factors.clone() }
    }

    pub fn scale(&self, c: &GaussPoly) -> RatFunc {
        RatFunc { num: self.num.scale(c), den: self.den.clone(), factors: self.factors.clone() }
    }

    pub fn shift(&self, v: &LatticeVector) -> RatFunc {
        RatFunc { num: self.num.shift(v), den: self.den.clone(), factors: self.factors.clone() }
    }

    /// Numerator multiplier needed to bring `mine` up to `target`.
    fn missing(mine: &BTreeMap<Binomial, u32>, target: &BTreeMap<Binomial, u32>, rank: usize) -> LaurentPoly {
        let mut p = LaurentPoly::one(rank);
        for (b, m) in target {
            let have = mine.get(b).copied().unwrap_or(0);
            if *m > have {
                p = p.mul(&b.to_poly().pow(m - have));
            }
        }
        p
    }

    pub fn add(&self, o: &RatFunc) -> RatFunc {
        if o.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return o.clone();
        }
        let rank = self.rank();
        let mut lcm = self.factors.clone();
        for (b, m) in &o.factors {
            let e = lcm.entry(b.clone()).or_insert(0);
            *e = (*e).max(*m);
        }
        let a_num = self.num.mul(&Self::missing(&self.factors, &lcm, rank));
        let b_num = o.num.mul(&Self::missing(&o.factors, &lcm, rank));
        if self.den == o.den {
            RatFunc { num: a_num.add(&b_num), den: self.den.clone(), factors: lcm }
        } else {
            RatFunc {
                num: a_num.mul(&o.den).add(&b_num.mul(&self.den)),
                den: self.den.mul(&o.den),
                factors: lcm,
            }
        }
    }

    pub fn sub(&self, o: &RatFunc) -> RatFunc {
        self.add(&o.neg())
    }

    pub fn recip(&self) -> Result<RatFunc> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let rank = self.rank();
        let top = self.den.mul(&Self::missing(&BTreeMap::new(), &self.factors, rank));
        Ok(RatFunc::recip_poly(&self.num).mul_poly(&top))
    }

    pub fn div(&self, o: &RatFunc) -> Result<RatFunc> {
        Ok(self.mul(&o.recip()?))
    }

    /// x^λ ↦ x^{Mλ} everywhere.
    pub fn map_exponents(&self, m: &IntMatrix) -> RatFunc {
        let rank = self.rank();
        let mut num = self.num.map_exponents(m);
        let mut factors = BTreeMap::new();
        for (b, k) in &self.factors {
            let (nb, u) = Binomial::oriented(b.c.clone(), m.apply(&b.v));
            let uinv = unit_monomial_inverse(&u).expect("unit");
            if !uinv.is_one() {
                num = num.mul(&uinv.pow(*k));
            }
            *factors.entry(nb).or_insert(0) += k;
        }
        RatFunc { num, den: self.den.map_exponents(m), factors }.fold_den(rank)
    }

    fn fold_den(mut self, rank: usize) -> RatFunc {
        if let Some(inv) = unit_monomial_inverse(&self.den) {
            self.num = self.num.mul(&inv);
            self.den = LaurentPoly::one(rank);
        }
        self
    }

    /// Cancels binomial factors that divide the numerator exactly.
    pub fn simplify(&self) -> RatFunc {
        let rank = self.rank();
        if self.num.is_zero() {
            return RatFunc::zero(rank);
        }
        let mut num = self.num.clone();
        let mut factors = BTreeMap::new();
        for (b, m) in &self.factors {
            let mut left = *m;
            while left > 0 {
                match num.div_binomial(&b.c, &b.v) {
                    Some(q) => {
                        num = q;
                        left -= 1;
                    }
                    None => break,
                }
            }
            if left > 0 {
                factors.insert(b.clone(), left);
            }
        }
        let mut den = self.den.clone();
        if !den.is_one() {
            if let Some(q) = num.div_exact(&den) {
                num = q;
                den = LaurentPoly::one(rank);
            }
        }
        RatFunc { num, den, factors }.fold_den(rank)
    }

    /// Exponents of every denominator monomial (general part and binomials).
    pub fn den_exponents(&self) -> Vec<LatticeVector> {
        let mut out: Vec<LatticeVector> = self.den.exponents().cloned().collect();
        out.extend(self.factors.keys().map(|b| b.v.clone()));
        out
    }

    /// Splits off the numerator terms whose exponent satisfies `keep`.
    pub fn filter_num<F: Fn(&LatticeVector) -> bool>(&self, keep: F) -> RatFunc {
        RatFunc { num: self.num.filter(keep), den: self.den.clone(), factors: self.factors.clone() }
    }

    pub(crate) fn from_parts(num: LaurentPoly, den: LaurentPoly, factors: BTreeMap<Binomial, u32>) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let rank = num.rank();
        Ok(RatFunc { num, den, factors }.fold_den(rank))
    }
}

impl PartialEq for RatFunc {
    fn eq(&self, o: &RatFunc) -> bool {
        let rank = self.rank();
        let mut common = BTreeMap::new();
        for (b, m) in &self.factors {
            if let Some(k) = o.factors.get(b) {
                common.insert(b.clone(), (*m).min(*k));
            }
        }
        let strip = |f: &BTreeMap<Binomial, u32>| -> BTreeMap<Binomial, u32> {
            f.iter()
                .filter_map(|(b, m)| {
                    let k = m - common.get(b).copied().unwrap_or(0);
                    (k > 0).then(|| (b.clone(), k))
                })
                .collect()
        };
        let a_rest = Self::missing(&BTreeMap::new(), &strip(&self.factors), rank);
        let b_rest = Self::missing(&BTreeMap::new(), &strip(&o.factors), rank);
        let lhs = self.num.mul(&o.den).mul(&b_rest);
        let rhs = o.num.mul(&self.den).mul(&a_rest);
        lhs == rhs
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:?}] / [{:?}]", self.num, self.den)?;
        for (b, m) in &self.factors {
            write!(f, " / (1 - ({:?})x^{})^{}", b.c, b.v, m)?;
        }
        Ok(())
    }
}
