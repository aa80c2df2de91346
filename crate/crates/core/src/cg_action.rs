//! τ coefficients, the D̃ cocycle matrices and the twisted Weyl action.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::metaplectic::{MetaplecticStructure, SimpleData};
use crate::ring::{
    project_coset, subst_weyl, GaussKind, GaussPoly, GaussSym, LatticeVector, LaurentPoly, RatFunc,
};
use crate::root_datum::WeylElem;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum TauKind {
    Tau1,
    Tau2,
}

#[derive(Clone, Debug)]
pub struct TauPair {
    pub target: LatticeVector,
    pub coeff: RatFunc,
    pub kind: TauKind,
}

pub(crate) fn ceil_div(a: i64, b: i64) -> i64 {
    debug_assert!(b > 0);
    -((-a).div_euclid(b))
}

/// c * q^{k d}
pub(crate) fn qd(c: i64, k: i64, d: u32) -> GaussPoly {
    GaussPoly::q_pow(c, k * d as i64)
}

fn xa(rank: usize, i: usize, k: i64) -> LatticeVector {
    LatticeVector::basis(rank, i).scale(k)
}

/// 1 - c x^{kα} as a polynomial.
fn one_minus(rank: usize, c: GaussPoly, v: LatticeVector) -> LaurentPoly {
    LaurentPoly::one(rank).sub(&LaurentPoly::monomial(v, c))
}

fn simple_checked(m: &MetaplecticStructure, i: usize, kind: GaussKind) -> Result<SimpleData> {
    if i >= m.rank() {
        return Err(Error::InvalidField { field: "word".into(), reason: format!("no simple root {}", i + 1) });
    }
    let sd = m.simple(i);
    if sd.kind != kind {
        return Err(Error::MarkerMismatch { node: i + 1, expected: kind.name() });
    }
    Ok(sd)
}

/// The two τ coefficients for an SL2-marked simple root.
pub fn tau_sl2(m: &MetaplecticStructure, mu: &LatticeVector, i: usize) -> Result<(TauPair, TauPair)> {
    let sd = simple_checked(m, i, GaussKind::Sl2)?;
    m.datum().check_rank(mu)?;
    let r = m.rank();
    let alpha = LatticeVector::basis(r, i);
    let (b, q, n, d) = (m.bilinear(&alpha, mu), sd.q, sd.n_alpha, sd.degree);
    let s_mu = m.datum().reflect(i, mu);
    let den = RatFunc::inv_binomial(qd(1, -1, d), xa(r, i, n));
    let c1 = RatFunc::from_poly(LaurentPoly::monomial(
        xa(r, i, n * ceil_div(b, n * q)),
        GaussPoly::one().sub(&qd(1, -1, d)),
    ))
    .mul(&den);
    let g = GaussPoly::gauss(GaussSym::new(GaussKind::Sl2, b - q, m.n() as u32, d));
    let c2 = RatFunc::from_poly(one_minus(r, GaussPoly::one(), xa(r, i, n)).scale(&qd(1, -1, d).mul(&g))).mul(&den);
    Ok((
        TauPair { target: &s_mu + &alpha.scale(b / q), coeff: c1, kind: TauKind::Tau1 },
        TauPair { target: &s_mu + &alpha, coeff: c2, kind: TauKind::Tau2 },
    ))
}

/// The two τ coefficients for an SU3-marked simple root.
pub fn tau_su3(m: &MetaplecticStructure, mu: &LatticeVector, i: usize) -> Result<(TauPair, TauPair)> {
    let sd = simple_checked(m, i, GaussKind::Su3)?;
    m.datum().check_rank(mu)?;
    let r = m.rank();
    let alpha = LatticeVector::basis(r, i);
    let (b, q, n, d, eps) = (m.bilinear(&alpha, mu), sd.q, sd.n_alpha, sd.degree, sd.eps);
    if b % 2 != 0 {
        return Err(Error::OddPairing(b));
    }
    let s_mu = m.datum().reflect(i, mu);
    let den = su3_den(r, i, n, d, eps, 1);
    let e1 = 2 * n * ceil_div(b, 2 * n * q);
    let e2 = (2 * ceil_div(b + n * q - q, 2 * n * q) - 1) * n;
    let mid = qd(1, -1, d).sub(&qd(1, -2, d)).mul(&qd(1, (1 - eps) / 2, d));
    let top = LaurentPoly::monomial(xa(r, i, e1), GaussPoly::one().sub(&qd(1, -3, d)))
        .add(&LaurentPoly::monomial(xa(r, i, e2), mid));
    let g = GaussPoly::gauss(GaussSym::new(GaussKind::Su3, b / 2 - q, m.n() as u32, d));
    let c2 = one_minus(r, GaussPoly::one(), xa(r, i, 2 * n)).scale(&qd(1, -2, d).mul(&g));
    Ok((
        TauPair { target: &s_mu + &alpha.scale(b / q), coeff: RatFunc::from_poly(top).mul(&den), kind: TauKind::Tau1 },
        TauPair { target: &s_mu + &alpha.scale(2), coeff: RatFunc::from_poly(c2).mul(&den), kind: TauKind::Tau2 },
    ))
}

/// 1 / [(1 - ε q⁻¹ x^{σnα})(1 + ε q⁻² x^{σnα})]
fn su3_den(r: usize, i: usize, n: i64, d: u32, eps: i64, sigma: i64) -> RatFunc {
    RatFunc::inv_binomial(qd(eps, -1, d), xa(r, i, sigma * n))
        .mul(&RatFunc::inv_binomial(qd(-eps, -2, d), xa(r, i, sigma * n)))
}

pub fn tau(m: &MetaplecticStructure, mu: &LatticeVector, i: usize) -> Result<(TauPair, TauPair)> {
    match m.simple(i).kind {
        GaussKind::Sl2 => tau_sl2(m, mu, i),
        GaussKind::Su3 => tau_su3(m, mu, i),
    }
}

/// Γ×Γ matrix of τ̃ entries; rows index a, columns index b.
#[derive(Clone, Debug)]
pub struct TauMatrix {
    pub word: Vec<usize>,
    pub size: usize,
    pub entries: BTreeMap<(usize, usize), RatFunc>,
}

impl TauMatrix {
    pub fn identity(rank: usize, size: usize) -> Self {
        let entries = (0..size).map(|k| ((k, k), RatFunc::one(rank))).collect();
        TauMatrix { word: Vec::new(), size, entries }
    }

    pub fn get(&self, a: usize, b: usize, rank: usize) -> RatFunc {
        self.entries.get(&(a, b)).cloned().unwrap_or_else(|| RatFunc::zero(rank))
    }

    pub fn mul(&self, o: &TauMatrix, rank: usize) -> TauMatrix {
        let mut entries = BTreeMap::new();
        for a in 0..self.size {
            for b in 0..self.size {
                let mut acc = RatFunc::zero(rank);
                for k in 0..self.size {
                    if let (Some(x), Some(y)) = (self.entries.get(&(a, k)), o.entries.get(&(k, b))) {
                        acc = acc.add(&x.mul(y));
                    }
                }
                let acc = acc.simplify();
                if !acc.is_zero() {
                    entries.insert((a, b), acc);
                }
            }
        }
        let mut word = self.word.clone();
        word.extend_from_slice(&o.word);
        TauMatrix { word, size: self.size, entries }
    }

    /// Entrywise f ↦ f(wχ).
    pub fn twist(&self, w: &WeylElem) -> TauMatrix {
        TauMatrix {
            word: self.word.clone(),
            size: self.size,
            entries: self.entries.iter().map(|(k, v)| (*k, subst_weyl(v, w))).collect(),
        }
    }

    pub fn equals(&self, o: &TauMatrix, rank: usize) -> bool {
        self.size == o.size
            && (0..self.size).all(|a| (0..self.size).all(|b| self.get(a, b, rank) == o.get(a, b, rank)))
    }
}

/// D̃ for a simple reflection, using the canonical coset representatives.
pub fn dtilde_simple(m: &MetaplecticStructure, i: usize) -> Result<TauMatrix> {
    let reps = m.cosets().reps.clone();
    dtilde_simple_with_reps(m, i, &reps)
}

/// D̃ for a simple reflection with caller-chosen column representatives.
pub fn dtilde_simple_with_reps(m: &MetaplecticStructure, i: usize, reps: &[LatticeVector]) -> Result<TauMatrix> {
    let r = m.rank();
    let cs = m.cosets();
    let mut entries: BTreeMap<(usize, usize), RatFunc> = BTreeMap::new();
    for mu in reps {
        let col = cs.index_of(mu);
        let (p1, p2) = tau(m, mu, i)?;
        for p in [p1, p2] {
            let row = cs.index_of(&p.target);
            let shift = &m.datum().reflect(i, &p.target) - mu;
            let val = p.coeff.shift(&shift);
            let e = entries.entry((row, col)).or_insert_with(|| RatFunc::zero(r));
            *e = e.add(&val);
        }
    }
    entries.retain(|_, v| !v.is_zero());
    Ok(TauMatrix { word: vec![i], size: cs.order(), entries })
}

/// D̃_w built along the word via D̃_{s w'} = D̃_s^{(w'χ)} D̃_{w'}.
pub fn dtilde(m: &MetaplecticStructure, w: &WeylElem) -> Result<TauMatrix> {
    let r = m.rank();
    let d = m.datum();
    let mut out = TauMatrix::identity(r, m.cosets().order());
    let mut tail = d.identity();
    for &i in w.word.iter().rev() {
        let ds = dtilde_simple(m, i)?.twist(&tail);
        out = ds.mul(&out, r);
        let mut word = vec![i];
        word.extend_from_slice(&tail.word);
        tail = d.from_word(&word)?;
    }
    out.word = w.word.clone();
    Ok(out)
}

fn check_denominator(m: &MetaplecticStructure, f: &RatFunc) -> Result<()> {
    if f.den_exponents().iter().all(|e| m.in_lattice(e)) {
        Ok(())
    } else {
        Err(Error::DenominatorNotOnLattice)
    }
}

/// w∘f through the τ̃ matrix: project onto cosets, apply D̃_w, untwist.
pub fn matrix_act(m: &MetaplecticStructure, w: &WeylElem, f: &RatFunc) -> Result<RatFunc> {
    check_denominator(m, f)?;
    let r = m.rank();
    let dm = dtilde(m, w)?;
    let reps = &m.cosets().reps;
    let parts: Vec<RatFunc> = reps.iter().map(|g| project_coset(f, m.cosets(), g)).collect::<Result<_>>()?;
    let winv = m.datum().inverse(w);
    let mut out = RatFunc::zero(r);
    for a in 0..dm.size {
        let mut u = RatFunc::zero(r);
        for (b, part) in parts.iter().enumerate() {
            if part.is_zero() {
                continue;
            }
            if let Some(t) = dm.entries.get(&(a, b)) {
                u = u.add(&t.mul(part));
            }
        }
        out = out.add(&subst_weyl(&u, &winv));
    }
    Ok(out.simplify())
}

/// Numerator of s∘x^λ over the common denominator, for one SL2 node.
fn closed_sl2(m: &MetaplecticStructure, sd: &SimpleData, lam: &LatticeVector) -> LaurentPoly {
    let r = m.rank();
    let i = sd.index;
    let alpha = LatticeVector::basis(r, i);
    let (b, q, n, d) = (m.bilinear(&alpha, lam), sd.q, sd.n_alpha, sd.degree);
    let s_lam = m.datum().reflect(i, lam);
    let g = GaussPoly::gauss(GaussSym::new(GaussKind::Sl2, b - q, m.n() as u32, d));
    let first = LaurentPoly::monomial(
        xa(r, i, b / q - n * ceil_div(b, n * q)),
        GaussPoly::one().sub(&qd(1, -1, d)),
    );
    let second = one_minus(r, GaussPoly::one(), xa(r, i, -n)).shift(&alpha).scale(&qd(1, -1, d).mul(&g));
    first.add(&second).shift(&s_lam)
}

/// Numerator of s∘x^λ over the common denominator, for one SU3 node.
fn closed_su3(m: &MetaplecticStructure, sd: &SimpleData, lam: &LatticeVector) -> Result<LaurentPoly> {
    let r = m.rank();
    let i = sd.index;
    let alpha = LatticeVector::basis(r, i);
    let (b, q, n, d, eps) = (m.bilinear(&alpha, lam), sd.q, sd.n_alpha, sd.degree, sd.eps);
    if b % 2 != 0 {
        return Err(Error::OddPairing(b));
    }
    let s_lam = m.datum().reflect(i, lam);
    let g = GaussPoly::gauss(GaussSym::new(GaussKind::Su3, b / 2 - q, m.n() as u32, d));
    let k1 = b / q - 2 * n * ceil_div(b, 2 * n * q);
    let k2 = b / q - (2 * ceil_div(b + n * q - q, 2 * n * q) - 1) * n;
    let mid = qd(1, -1, d).sub(&qd(1, -2, d)).mul(&qd(1, (1 - eps) / 2, d));
    let p = LaurentPoly::monomial(xa(r, i, k1), GaussPoly::one().sub(&qd(1, -3, d)))
        .add(&LaurentPoly::monomial(xa(r, i, k2), mid))
        .add(&one_minus(r, GaussPoly::one(), xa(r, i, -2 * n)).shift(&alpha.scale(2)).scale(&qd(1, -2, d).mul(&g)));
    Ok(p.shift(&s_lam))
}

/// s_i∘f via the closed monomial formula, extended B-linearly.
pub fn act_simple(m: &MetaplecticStructure, i: usize, f: &RatFunc) -> Result<RatFunc> {
    if i >= m.rank() {
        return Err(Error::InvalidField { field: "word".into(), reason: format!("no simple root {}", i + 1) });
    }
    check_denominator(m, f)?;
    let r = m.rank();
    let sd = m.simple(i);
    let mut num = LaurentPoly::zero(r);
    for (lam, c) in f.num().terms() {
        let t = match sd.kind {
            GaussKind::Sl2 => closed_sl2(m, &sd, lam),
            GaussKind::Su3 => closed_su3(m, &sd, lam)?,
        };
        num = num.add(&t.scale(c));
    }
    let common = match sd.kind {
        GaussKind::Sl2 => RatFunc::inv_binomial(qd(1, -1, sd.degree), xa(r, i, -sd.n_alpha)),
        GaussKind::Su3 => su3_den(r, i, sd.n_alpha, sd.degree, sd.eps, -1),
    };
    let s = m.datum().from_word(&[i])?;
    let den_part = RatFunc::from_parts(LaurentPoly::one(r), f.den_poly().clone(), f.den_factors().clone())?;
    Ok(subst_weyl(&den_part, &s).mul(&common).mul_poly(&num).simplify())
}

/// w∘f along the word of w, rightmost letter first.
pub fn act(m: &MetaplecticStructure, w: &WeylElem, f: &RatFunc) -> Result<RatFunc> {
    let mut g = f.clone();
    for &i in w.word.iter().rev() {
        g = act_simple(m, i, &g)?;
    }
    Ok(g)
}

/// Σ n_β β over the positive coroots β with w⁻¹β < 0.
///
/// This is ρ_n - wρ_n, the cocycle that makes ∥ compose like ∘.
pub fn inversion_weight(m: &MetaplecticStructure, w: &WeylElem) -> LatticeVector {
    let d = m.datum();
    let mut out = LatticeVector::zero(m.rank());
    for beta in d.inversion_set(&d.inverse(w)) {
        out = &out + &beta.scale(m.n_alpha(&beta));
    }
    out
}

/// f∥w = sgn(w) (∏ x^{n_β β})⁻¹ c_{w0}(w⁻¹χ)/c_{w0}(χ) (w∘f)
pub fn double_bar(m: &MetaplecticStructure, w: &WeylElem, f: &RatFunc) -> Result<RatFunc> {
    let shift = -&inversion_weight(m, w);
    let ratio = crate::whittaker::c_w0_ratio(m, w)?;
    let acted = act(m, w, f)?;
    Ok(acted.mul(&ratio).shift(&shift).scale(&GaussPoly::int(w.sign())).simplify())
}

/// Monomial anchoring the |_λ action: x^{w0 λ}.
pub fn anchor(m: &MetaplecticStructure, lam: &LatticeVector) -> LatticeVector {
    m.datum().longest().act(lam)
}

/// f|_λ w = m_λ⁻¹ ((m_λ f)∥w) with m_λ = x^{w0λ}.
pub fn bar_lambda(m: &MetaplecticStructure, w: &WeylElem, f: &RatFunc, lam: &LatticeVector) -> Result<RatFunc> {
    bar_lambda_anchored(m, w, f, lam, &anchor(m, lam))
}

/// f|_λ w with an explicit anchor monomial x^{a}.
pub fn bar_lambda_anchored(
    m: &MetaplecticStructure,
    w: &WeylElem,
    f: &RatFunc,
    lam: &LatticeVector,
    a: &LatticeVector,
) -> Result<RatFunc> {
    m.datum().check_rank(lam)?;
    if !m.datum().is_dominant(lam) {
        return Err(Error::NotDominant(lam.coords().to_vec()));
    }
    Ok(double_bar(m, w, &f.shift(a))?.shift(&-a))
}

/// Applies `act` to every element of W in parallel, in group order.
pub fn act_all(m: &MetaplecticStructure, f: &RatFunc) -> Result<Vec<RatFunc>> {
    m.datum().weyl().elements().par_iter().map(|w| act(m, w, f)).collect()
}

