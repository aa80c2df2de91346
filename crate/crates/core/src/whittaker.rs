//! c-functions, normalized Whittaker values and the p-part N(χ,λ).

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::cg_action::{act, anchor, bar_lambda, inversion_weight, qd};
use crate::error::{Error, Result};
use crate::metaplectic::MetaplecticStructure;
use crate::ring::{Binomial, GaussKind, GaussPoly, IntMatrix, LatticeVector, LaurentPoly, RatFunc};
use crate::root_datum::{RelativeRootDatum, WeylElem};

/// ∏(1 - c x^v) / ∏(1 - c x^v), kept unexpanded.
#[derive(Clone, Debug, Default)]
pub struct BinomialRatio {
    pub num: Vec<(GaussPoly, LatticeVector)>,
    pub den: Vec<(GaussPoly, LatticeVector)>,
}

impl BinomialRatio {
    pub fn map_exponents(&self, m: &IntMatrix) -> BinomialRatio {
        let f = |v: &Vec<(GaussPoly, LatticeVector)>| v.iter().map(|(c, e)| (c.clone(), m.apply(e))).collect();
        BinomialRatio { num: f(&self.num), den: f(&self.den) }
    }

    pub fn extend(&mut self, o: BinomialRatio) {
        self.num.extend(o.num);
        self.den.extend(o.den);
    }

    pub fn inverse(&self) -> BinomialRatio {
        BinomialRatio { num: self.den.clone(), den: self.num.clone() }
    }

    /// Builds the rational function after cancelling equal oriented factors.
    pub fn to_ratfunc(&self, rank: usize) -> RatFunc {
        let orient = |list: &Vec<(GaussPoly, LatticeVector)>| {
            let mut unit = LaurentPoly::one(rank);
            let mut count: BTreeMap<Binomial, u32> = BTreeMap::new();
            for (c, v) in list {
                let (b, u) = Binomial::oriented(c.clone(), v.clone());
                unit = unit.mul(&u);
                *count.entry(b).or_insert(0) += 1;
            }
            (unit, count)
        };
        let (u_num, mut top) = orient(&self.num);
        let (u_den, mut bottom) = orient(&self.den);
        for (b, k) in top.iter_mut() {
            if let Some(j) = bottom.get_mut(b) {
                let c = (*k).min(*j);
                *k -= c;
                *j -= c;
            }
        }
        bottom.retain(|_, k| *k > 0);
        let (e, c) = u_den.as_monomial().expect("unit monomial");
        let mut num = u_num.mul(&LaurentPoly::monomial(-e, c.unit_inverse().expect("unit")));
        for (b, k) in top {
            if k > 0 {
                num = num.mul(&b.to_poly().pow(k));
            }
        }
        RatFunc::from_parts(num, LaurentPoly::one(rank), bottom).expect("nonzero denominator")
    }
}

/// Numerator and denominator binomials of c_s.
pub fn c_simple_factors(m: &MetaplecticStructure, i: usize) -> BinomialRatio {
    let r = m.rank();
    let sd = m.simple(i);
    let v = LatticeVector::basis(r, i).scale(sd.n_alpha);
    match sd.kind {
        GaussKind::Sl2 => BinomialRatio { num: vec![(qd(1, -1, sd.degree), v.clone())], den: vec![(GaussPoly::one(), v)] },
        GaussKind::Su3 => BinomialRatio {
            num: vec![(qd(-sd.eps, -1, sd.degree), v.clone()), (qd(sd.eps, -2, sd.degree), v.clone())],
            den: vec![(GaussPoly::one(), v.scale(2))],
        },
    }
}

pub fn c_simple(m: &MetaplecticStructure, i: usize) -> RatFunc {
    c_simple_factors(m, i).to_ratfunc(m.rank())
}

/// c_w as binomial factors: c_{s w'} = c_s(w'χ) c_{w'}.
pub fn c_w_factors(m: &MetaplecticStructure, w: &WeylElem) -> Result<BinomialRatio> {
    let d = m.datum();
    let mut out = BinomialRatio::default();
    let mut tail = d.identity();
    for &i in w.word.iter().rev() {
        out.extend(c_simple_factors(m, i).map_exponents(&tail.inverse_matrix));
        let mut word = vec![i];
        word.extend_from_slice(&tail.word);
        tail = d.from_word(&word)?;
    }
    Ok(out)
}

pub fn c_w(m: &MetaplecticStructure, w: &WeylElem) -> Result<RatFunc> {
    Ok(c_w_factors(m, w)?.to_ratfunc(m.rank()))
}

/// c_{w0}(w⁻¹χ) / c_{w0}(χ)
pub fn c_w0_ratio(m: &MetaplecticStructure, w: &WeylElem) -> Result<RatFunc> {
    let f = c_w_factors(m, m.datum().longest())?;
    let mut ratio = f.map_exponents(&w.matrix);
    ratio.extend(f.inverse());
    Ok(ratio.to_ratfunc(m.rank()))
}

#[derive(Clone, Debug)]
pub struct WhittakerTerm {
    pub w: WeylElem,
    pub value: RatFunc,
}

#[derive(Clone, Debug)]
pub struct WhittakerResult {
    pub lambda: LatticeVector,
    pub value: RatFunc,
    pub terms: Vec<WhittakerTerm>,
}

/// δ^{-1/2}W(π^λ) = Σ_w c_{w0}(w⁻¹χ) (w∘x^{w0λ}), zero off the dominant cone.
pub fn whittaker_normalized(m: &MetaplecticStructure, lam: &LatticeVector) -> Result<WhittakerResult> {
    let d = m.datum();
    d.check_rank(lam)?;
    let r = m.rank();
    if !d.is_dominant(lam) {
        return Ok(WhittakerResult { lambda: lam.clone(), value: RatFunc::zero(r), terms: Vec::new() });
    }
    let cw0 = c_w_factors(m, d.longest())?;
    let mt = RatFunc::x(anchor(m, lam));
    let terms: Vec<WhittakerTerm> = d
        .weyl()
        .elements()
        .par_iter()
        .map(|w| {
            let c = cw0.map_exponents(&w.matrix).to_ratfunc(r);
            Ok(WhittakerTerm { w: w.clone(), value: c.mul(&act(m, w, &mt)?).simplify() })
        })
        .collect::<Result<_>>()?;
    let mut value = RatFunc::zero(r);
    for t in &terms {
        value = value.add(&t.value);
    }
    Ok(WhittakerResult { lambda: lam.clone(), value: value.simplify(), terms })
}

fn require_split(d: &RelativeRootDatum) -> Result<()> {
    if d.is_split() {
        Ok(())
    } else {
        Err(Error::Requires("a split datum (all markers SL2, d=1)"))
    }
}

/// ∏_{β>0} (1 - q⁻¹ x^{n_β β}) / (1 - x^{n_β β})
pub fn positive_root_product(m: &MetaplecticStructure) -> BinomialRatio {
    let mut out = BinomialRatio::default();
    for beta in m.datum().positive_coroots() {
        let v = beta.scale(m.n_alpha(beta));
        out.num.push((GaussPoly::q_pow(1, -1), v.clone()));
        out.den.push((GaussPoly::one(), v));
    }
    out
}

/// N(χ,λ) = ∏ (1-q⁻¹x^{nβ})/(1-x^{nβ}) Σ_w sgn(w) ∏_{β∈Φ(w)} x^{n_β β} (1|_λ w)
pub fn n_poly(m: &MetaplecticStructure, lam: &LatticeVector) -> Result<RatFunc> {
    let d = m.datum();
    require_split(d)?;
    d.check_rank(lam)?;
    if !d.is_dominant(lam) {
        return Err(Error::NotDominant(lam.coords().to_vec()));
    }
    let r = m.rank();
    let one = RatFunc::one(r);
    let parts: Vec<RatFunc> = d
        .weyl()
        .elements()
        .par_iter()
        .map(|w| {
            Ok(bar_lambda(m, w, &one, lam)?.shift(&inversion_weight(m, w)).scale(&GaussPoly::int(w.sign())))
        })
        .collect::<Result<_>>()?;
    let mut sum = RatFunc::zero(r);
    for p in &parts {
        sum = sum.add(p);
    }
    Ok(positive_root_product(m).to_ratfunc(r).mul(&sum).simplify())
}

/// Exact check of δ^{-1/2}W(π^λ) = x^{w0λ} N(χ,λ).
pub fn check_final_theorem(m: &MetaplecticStructure, lam: &LatticeVector) -> Result<bool> {
    let w = whittaker_normalized(m, lam)?;
    let n = n_poly(m, lam)?;
    Ok(w.value == n.shift(&anchor(m, lam)))
}

/// Orientation of the classical oracle relative to the engine's variables.
pub const CLASSICAL_ORIENTATION: i64 = 1;

/// Weyl character χ_λ of the dual group, via the alternant quotient.
pub fn weyl_character(d: &RelativeRootDatum, lam: &LatticeVector) -> Result<LaurentPoly> {
    let r = d.rank();
    let two_rho = d.positive_coroots().iter().fold(LatticeVector::zero(r), |a, b| &a + b);
    let mut num = LaurentPoly::zero(r);
    let mut den = LaurentPoly::zero(r);
    for w in d.weyl().elements() {
        let shift = LatticeVector((&w.act(&two_rho) - &two_rho).coords().iter().map(|c| c / 2).collect());
        let s = GaussPoly::int(w.sign());
        num = num.add(&LaurentPoly::monomial(&w.act(lam) + &shift, s.clone()));
        den = den.add(&LaurentPoly::monomial(shift, s));
    }
    num.div_exact(&den).ok_or(Error::Requires("exact alternant division"))
}

/// ∏_{β>0}(1 - q⁻¹ x^{σβ}) χ_λ(x^σ) for the unramified, non-metaplectic case.
pub fn classical_cs_oracle(d: &RelativeRootDatum, lam: &LatticeVector, sigma: i64) -> Result<RatFunc> {
    require_split(d)?;
    d.check_rank(lam)?;
    if !d.is_dominant(lam) {
        return Err(Error::NotDominant(lam.coords().to_vec()));
    }
    let r = d.rank();
    let flip = IntMatrix::identity(r);
    let flip = IntMatrix { dim: r, data: flip.data.iter().map(|x| x * sigma).collect() };
    let mut p = weyl_character(d, lam)?.map_exponents(&flip);
    for beta in d.positive_coroots() {
        p = p.mul(&LaurentPoly::one(r).sub(&LaurentPoly::monomial(beta.scale(sigma), GaussPoly::q_pow(1, -1))));
    }
    Ok(RatFunc::from_poly(p))
}

/// Finds the orientation matching the engine at A1, n = 1, λ = 0.
pub fn calibrate_classical_orientation() -> Result<i64> {
    let d = std::sync::Arc::new(RelativeRootDatum::build("A1", None)?);
    let m = MetaplecticStructure::new(d.clone(), 1, &[1])?;
    let zero = LatticeVector::zero(1);
    let w = whittaker_normalized(&m, &zero)?.value;
    let hits: Vec<i64> = [1, -1]
        .into_iter()
        .filter(|&s| classical_cs_oracle(&d, &zero, s).map(|o| o == w).unwrap_or(false))
        .collect();
    match hits.as_slice() {
        [s] => Ok(*s),
        _ => Err(Error::Requires("a unique classical orientation")),
    }
}
