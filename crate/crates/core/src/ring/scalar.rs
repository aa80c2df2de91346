use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::gauss::{reduce_symbols, GaussKind, GaussSym};
use crate::error::{Error, Result};

/// Monomial q^k * prod g_i^{e_i}, kept in reduced form.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct SMono {
    pub q: i64,
    pub gauss: Vec<(GaussSym, u32)>,
}

impl SMono {
    pub fn one() -> Self {
        SMono { q: 0, gauss: Vec::new() }
    }

    pub fn q_pow(k: i64) -> Self {
        SMono { q: k, gauss: Vec::new() }
    }

    pub fn is_one(&self) -> bool {
        self.q == 0 && self.gauss.is_empty()
    }

    /// Product; the boolean is true when the reduction introduced a sign.
    fn mul(&self, other: &SMono) -> (bool, SMono) {
        let mut g = self.gauss.clone();
        g.extend(other.gauss.iter().copied());
        let (neg, dq, gauss) = reduce_symbols(g);
        (neg, SMono { q: self.q + other.q + dq, gauss })
    }

    /// Inverse when it exists in the ring (no SU3 symbols).
    fn inverse(&self) -> Option<SMono> {
        let mut q = -self.q;
        let mut g = Vec::new();
        for &(s, e) in &self.gauss {
            if s.kind == GaussKind::Su3 {
                return None;
            }
            // g(t)^{-1} = g(-t) q^{-d}
            g.push((s.conjugate(), e));
            q -= s.degree as i64 * e as i64;
        }
        let (neg, dq, gauss) = reduce_symbols(g);
        debug_assert!(!neg);
        Some(SMono { q: q + dq, gauss })
    }
}

/// Polynomial over Q in q^{±1} and Gauss symbols.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct GaussPoly {
    terms: BTreeMap<SMono, BigRational>,
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl GaussPoly {
    pub fn zero() -> Self {
        GaussPoly { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::term(c, SMono::one())
    }

    pub fn int(c: i64) -> Self {
        Self::constant(rat(c, 1))
    }

    pub fn term(c: BigRational, m: SMono) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        GaussPoly { terms }
    }

    /// c * q^k
    pub fn q_pow(c: i64, k: i64) -> Self {
        Self::term(rat(c, 1), SMono::q_pow(k))
    }

    pub fn gauss(s: GaussSym) -> Self {
        let (neg, dq, gauss) = reduce_symbols(vec![(s, 1)]);
        let c = if neg { -BigRational::one() } else { BigRational::one() };
        Self::term(c, SMono { q: dq, gauss })
    }

    pub fn from_terms<I: IntoIterator<Item = (SMono, BigRational)>>(it: I) -> Self {
        let mut p = GaussPoly::zero();
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    pub fn terms(&self) -> impl Iterator<Item = (&SMono, &BigRational)> {
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
        self.terms.len() == 1 && self.terms.iter().all(|(m, c)| m.is_one() && c.is_one())
    }

    fn add_term(&mut self, m: SMono, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &GaussPoly) -> GaussPoly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &GaussPoly) -> GaussPoly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> GaussPoly {
        GaussPoly { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }

    pub fn mul(&self, other: &GaussPoly) -> GaussPoly {
        if self.is_one() {
            return other.clone();
        }
        if other.is_one() {
            return self.clone();
        }
        let mut out = GaussPoly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let (neg, m) = m1.mul(m2);
                let c = c1 * c2;
                out.add_term(m, if neg { -c } else { c });
            }
        }
        out
    }

    pub fn scale(&self, c: &BigRational) -> GaussPoly {
        if c.is_zero() {
            return GaussPoly::zero();
        }
        GaussPoly { terms: self.terms.iter().map(|(m, d)| (m.clone(), d * c)).collect() }
    }

    /// Single invertible term, with its inverse.
    pub fn unit_inverse(&self) -> Option<GaussPoly> {
        if self.terms.len() != 1 {
            return None;
        }
        let (m, c) = self.terms.iter().next()?;
        let mi = m.inverse()?;
        Some(GaussPoly::term(c.recip(), mi))
    }

    /// The value when this is a plain rational constant.
    pub fn as_constant(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next()?;
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    /// (sign, k) when this equals ±q^k.
    pub fn as_signed_q_power(&self) -> Option<(bool, i64)> {
        if self.terms.len() != 1 {
            return None;
        }
        let (m, c) = self.terms.iter().next()?;
        if !m.gauss.is_empty() || c.abs() != BigRational::one() {
            return None;
        }
        Some((c.is_negative(), m.q))
    }

    pub fn leading(&self) -> Option<(&SMono, &BigRational)> {
        self.terms.iter().next_back()
    }

    pub fn symbols(&self) -> Vec<GaussSym> {
        let mut v: Vec<GaussSym> =
            self.terms.keys().flat_map(|m| m.gauss.iter().map(|(s, _)| *s)).collect();
        v.sort();
        v.dedup();
        v
    }
}

impl fmt::Debug for GaussPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut s = format!("{c}");
                if m.q != 0 {
                    s.push_str(&format!("*q^{}", m.q));
                }
                for (g, e) in &m.gauss {
                    s.push_str(&format!("*{g:?}^{e}"));
                }
                s
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Element of the fraction field of the scalar ring.
#[derive(Clone, Debug)]
pub struct Scalar {
    num: GaussPoly,
    den: GaussPoly,
}

impl Scalar {
    pub fn new(num: GaussPoly, den: GaussPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Scalar { num, den }.canonical())
    }

    pub fn from_poly(p: GaussPoly) -> Self {
        Scalar { num: p, den: GaussPoly::one() }
    }

    pub fn zero() -> Self {
        Self::from_poly(GaussPoly::zero())
    }

    pub fn one() -> Self {
        Self::from_poly(GaussPoly::one())
    }

    pub fn num(&self) -> &GaussPoly {
        &self.num
    }

    pub fn den(&self) -> &GaussPoly {
        &self.den
    }

    fn canonical(self) -> Self {
        if self.num.is_zero() {
            return Scalar::zero();
        }
        if let Some(inv) = self.den.unit_inverse() {
            return Scalar { num: self.num.mul(&inv), den: GaussPoly::one() };
        }
        let lead = self.den.leading().map(|(_, c)| c.recip()).unwrap_or_else(BigRational::one);
        Scalar { num: self.num.scale(&lead), den: self.den.scale(&lead) }
    }

    pub fn add(&self, o: &Scalar) -> Scalar {
        if self.den == o.den {
            return Scalar { num: self.num.add(&o.num), den: self.den.clone() }.canonical();
        }
        Scalar {
            num: self.num.mul(&o.den).add(&o.num.mul(&self.den)),
            den: self.den.mul(&o.den),
        }
        .canonical()
    }

    pub fn neg(&self) -> Scalar {
        Scalar { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn sub(&self, o: &Scalar) -> Scalar {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Scalar) -> Scalar {
        Scalar { num: self.num.mul(&o.num), den: self.den.mul(&o.den) }.canonical()
    }

    pub fn div(&self, o: &Scalar) -> Result<Scalar> {
        if o.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Scalar { num: self.num.mul(&o.den), den: self.den.mul(&o.num) }.canonical())
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl PartialEq for Scalar {
    fn eq(&self, o: &Scalar) -> bool {
        self.num.mul(&o.den) == o.num.mul(&self.den)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(t: i64, n: u32) -> GaussSym {
        GaussSym::new(GaussKind::Sl2, t, n, 1)
    }

    #[test]
    fn sl2_residue_zero_is_minus_one() {
        assert_eq!(GaussPoly::gauss(g(4, 4)), GaussPoly::int(-1));
        assert_eq!(GaussPoly::gauss(g(0, 1)), GaussPoly::int(-1));
    }

    #[test]
    fn sl2_symbol_times_conjugate_is_q() {
        let p = GaussPoly::gauss(g(1, 3)).mul(&GaussPoly::gauss(g(2, 3)));
        assert_eq!(p, GaussPoly::q_pow(1, 1));
        let h = GaussPoly::gauss(g(1, 2));
        assert_eq!(h.mul(&h), GaussPoly::q_pow(1, 1));
    }

    #[test]
    fn su3_symbols_stay_atomic() {
        let s = GaussSym::new(GaussKind::Su3, 0, 2, 1);
        let p = GaussPoly::gauss(s);
        assert_eq!(p.symbols(), vec![s]);
        assert!(p.mul(&p).unit_inverse().is_none());
    }

    #[test]
    fn scalar_field_ops() {
        let a = Scalar::new(GaussPoly::one().sub(&GaussPoly::q_pow(1, -1)), GaussPoly::int(1))
            .unwrap();
        let b = Scalar::new(GaussPoly::one(), GaussPoly::one().add(&GaussPoly::q_pow(1, -1)))
            .unwrap();
        let prod = a.mul(&b).mul(&Scalar::from_poly(GaussPoly::one().add(&GaussPoly::q_pow(1, -1))));
        assert_eq!(prod, a);
        assert!(a.div(&Scalar::zero()).is_err());
        assert_eq!(a.sub(&a), Scalar::zero());
        let inv = GaussPoly::gauss(g(1, 3)).unit_inverse().unwrap();
        assert_eq!(inv.mul(&GaussPoly::gauss(g(1, 3))), GaussPoly::one());
    }
}
