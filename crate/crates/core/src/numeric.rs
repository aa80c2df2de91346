//! Finite-field Gauss sums and complex specialization of symbolic values.

use std::collections::BTreeMap;
use std::f64::consts::TAU;

use num_complex::Complex64;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::metaplectic::MetaplecticStructure;
use crate::ring::{GaussKind, GaussPoly, GaussSym, LatticeVector, LaurentPoly, RatFunc};
use crate::root_datum::WeylElem;

pub const DEN_TOLERANCE: f64 = 1e-12;

pub fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|k| k * k <= p).all(|k| p % k != 0)
}

/// Primes q with q ≡ 1 mod 2n, in increasing order.
pub fn admissible_primes(n: u32) -> impl Iterator<Item = u64> {
    let m = 2 * n as u64;
    (1..).map(move |k| k * m + 1).filter(|&p| is_prime(p))
}

/// Prime field with a fixed primitive root and discrete logarithms.
#[derive(Clone, Debug)]
pub struct PrimeField {
    pub p: u64,
    pub generator: u64,
    log: Vec<u64>,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidField { field: "q".into(), reason: format!("{p} is not prime") });
        }
        for g in 1..p {
            let mut log = vec![u64::MAX; p as usize];
            let mut x = 1u64;
            let mut ok = true;
            for k in 0..p - 1 {
                if log[x as usize] != u64::MAX {
                    ok = false;
                    break;
                }
                log[x as usize] = k;
                x = x * g % p;
            }
            if ok {
                return Ok(PrimeField { p, generator: g, log });
            }
        }
        unreachable!("prime fields have primitive roots")
    }

    pub fn log(&self, u: u64) -> u64 {
        self.log[(u % self.p) as usize]
    }

    pub fn inv(&self, u: u64) -> u64 {
        pow_mod(u, self.p - 2, self.p)
    }
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

/// Residue field data: q, a character η of exact order n and ψ(u) = e^{2πiu/q}.
#[derive(Clone, Debug)]
pub struct Specialization {
    pub q_val: u64,
    pub n: u32,
    field: PrimeField,
    pub x_assign: Vec<Complex64>,
    pub gauss_values: BTreeMap<GaussSym, Complex64>,
}

impl Specialization {
    pub fn new(q_val: u64, n: u32, x_assign: Vec<Complex64>) -> Result<Self> {
        if n == 0 || q_val % (2 * n as u64) != 1 {
            return Err(Error::InvalidField { field: "q".into(), reason: format!("{q_val} is not 1 mod {}", 2 * n) });
        }
        let field = PrimeField::new(q_val)?;
        Ok(Specialization { q_val, n, field, x_assign, gauss_values: BTreeMap::new() })
    }

    pub fn field(&self) -> &PrimeField {
        &self.field
    }

    /// η(u)^t
    pub fn eta(&self, u: u64, t: i64) -> Complex64 {
        let k = (self.field.log(u) as i64 * t).rem_euclid(self.n as i64);
        Complex64::from_polar(1.0, TAU * k as f64 / self.n as f64)
    }

    pub fn psi(&self, u: u64) -> Complex64 {
        Complex64::from_polar(1.0, TAU * (u % self.q_val) as f64 / self.q_val as f64)
    }

    /// Fills every SL2 symbol of the given degrees from the character sums.
    pub fn with_sl2_values(mut self, degrees: &[u32]) -> Self {
        for &d in degrees {
            for t in 0..self.n {
                let s = GaussSym::new(GaussKind::Sl2, t as i64, self.n, d);
                let v = gauss_sl2_numeric_degree(t as i64, d, &self);
                self.gauss_values.insert(s, v);
            }
        }
        self
    }

    pub fn assign(&mut self, s: GaussSym, v: Complex64) {
        self.gauss_values.insert(s, v);
    }

    /// The character wχ: x_i ↦ χ(π^{w⁻¹ e_i}).
    pub fn twisted(&self, w: &WeylElem) -> Specialization {
        let r = self.x_assign.len();
        let x = (0..r)
            .map(|i| self.monomial(&w.inverse_matrix.apply(&LatticeVector::basis(r, i))))
            .collect();
        Specialization { x_assign: x, ..self.clone() }
    }

    pub fn monomial(&self, e: &LatticeVector) -> Complex64 {
        e.coords().iter().zip(&self.x_assign).fold(Complex64::new(1.0, 0.0), |acc, (&k, x)| acc * x.powi(k as i32))
    }

    pub fn scalar(&self, p: &GaussPoly) -> Result<Complex64> {
        let q = self.q_val as f64;
        let mut acc = Complex64::new(0.0, 0.0);
        for (m, c) in p.terms() {
            let mut v = Complex64::new(c.to_f64().unwrap_or(f64::NAN), 0.0) * q.powi(m.q as i32);
            for (s, e) in &m.gauss {
                let g = self.gauss_values.get(s).ok_or_else(|| Error::Unassigned(format!("{s:?}")))?;
                v *= g.powi(*e as i32);
            }
            acc += v;
        }
        Ok(acc)
    }

    pub fn laurent(&self, p: &LaurentPoly) -> Result<Complex64> {
        let mut acc = Complex64::new(0.0, 0.0);
        for (e, c) in p.terms() {
            acc += self.scalar(c)? * self.monomial(e);
        }
        Ok(acc)
    }
}

/// Ring-homomorphic evaluation of f.
pub fn specialize(f: &RatFunc, spec: &Specialization) -> Result<Complex64> {
    let num = spec.laurent(f.num())?;
    let mut den = spec.laurent(f.den_poly())?;
    for (b, k) in f.den_factors() {
        let v = Complex64::new(1.0, 0.0) - spec.scalar(&b.c)? * spec.monomial(&b.v);
        den *= v.powi(*k as i32);
    }
    if den.norm() < DEN_TOLERANCE {
        return Err(Error::Resample(den.norm()));
    }
    Ok(num / den)
}

/// Σ_{u∈F_q^×} η(u)^t ψ(u)
pub fn gauss_sl2_numeric(t: i64, spec: &Specialization) -> Complex64 {
    (1..spec.q_val).map(|u| spec.eta(u, t) * spec.psi(u)).sum()
}

/// Degree-d version through the Hasse-Davenport lifting relation.
pub fn gauss_sl2_numeric_degree(t: i64, d: u32, spec: &Specialization) -> Complex64 {
    let g = gauss_sl2_numeric(t, spec);
    -(-g).powi(d as i32)
}

/// Arithmetic in F_{q²} = F_q[√D] for a fixed non-residue D.
#[derive(Clone, Copy, Debug)]
struct Quadratic {
    p: u64,
    d: u64,
}

impl Quadratic {
    fn new(f: &PrimeField) -> Self {
        // the generator is a non-residue
        Quadratic { p: f.p, d: f.generator }
    }
    fn mul(&self, a: (u64, u64), b: (u64, u64)) -> (u64, u64) {
        let p = self.p;
        ((a.0 * b.0 + a.1 * b.1 % p * self.d) % p, (a.0 * b.1 + a.1 * b.0) % p)
    }
    fn norm(&self, a: (u64, u64)) -> u64 {
        let p = self.p;
        (a.0 * a.0 % p + p - a.1 * a.1 % p * self.d % p) % p
    }
    fn trace(&self, a: (u64, u64)) -> u64 {
        2 * a.0 % self.p
    }
    fn inv(&self, a: (u64, u64), f: &PrimeField) -> (u64, u64) {
        let ni = f.inv(self.norm(a));
        (a.0 * ni % self.p, (self.p - a.1) % self.p * ni % self.p)
    }
}

/// Experimental model of the SU3 Gauss sum over F_{q²}/F_q.
///
/// Sums η(N y)^t ψ(Tr(c x / y)) over x x̄ + y + ȳ = 0 with y ≠ 0 and c = 1.
pub fn gauss_su3_numeric(t: i64, spec: &Specialization) -> Complex64 {
    let f = spec.field();
    let k = Quadratic::new(f);
    let p = spec.q_val;
    let half = f.inv(2);
    let mut acc = Complex64::new(0.0, 0.0);
    for x0 in 0..p {
        for x1 in 0..p {
            let x = (x0, x1);
            let a = (p - k.norm(x)) % p * half % p;
            for b in 0..p {
                let y = (a, b);
                if y == (0, 0) {
                    continue;
                }
                let ratio = k.mul(x, k.inv(y, f));
                acc += spec.eta(k.norm(y), t) * spec.psi(k.trace(ratio));
            }
        }
    }
    acc
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Su3Values {
    /// Values from the finite-field model (degree 1 only).
    Model,
    /// Independent random unit multiples, treating the symbols as free.
    Random,
}

/// Deterministic RNG for trial `k` of a run with master seed `seed`.
pub fn trial_rng(seed: u64, k: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ k.wrapping_mul(0x9E37_79B9_7F4A_7C15).rotate_left(17))
}

/// Random unit-modulus character with every symbol the structure can produce assigned.
pub fn random_character(m: &MetaplecticStructure, rng: &mut ChaCha8Rng, su3: Su3Values) -> Result<Specialization> {
    let n = m.n() as u32;
    let pick = rng.gen_range(0..3);
    let q_val = admissible_primes(n).nth(pick).expect("infinitely many primes");
    let x = (0..m.rank()).map(|_| Complex64::from_polar(1.0, TAU * rng.gen::<f64>())).collect();
    let mut degrees: Vec<u32> = m.datum().markers().iter().filter(|mk| mk.kind == GaussKind::Sl2).map(|mk| mk.degree).collect();
    degrees.sort();
    degrees.dedup();
    let mut spec = Specialization::new(q_val, n, x)?.with_sl2_values(&degrees);
    for mk in m.datum().markers().iter().filter(|mk| mk.kind == GaussKind::Su3) {
        for t in 0..n {
            let s = GaussSym::new(GaussKind::Su3, t as i64, n, mk.degree);
            let v = match su3 {
                Su3Values::Model if mk.degree == 1 => gauss_su3_numeric(t as i64, &spec),
                _ => Complex64::from_polar((q_val as f64).powi(mk.degree as i32), TAU * rng.gen::<f64>()),
            };
            spec.assign(s, v);
        }
    }
    Ok(spec)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes() {
        assert_eq!(admissible_primes(2).take(3).collect::<Vec<_>>(), vec![5, 13, 17]);
        assert_eq!(admissible_primes(1).next(), Some(3));
    }

    #[test]
    fn quadratic_gauss_sum_q5() {
        let s = Specialization::new(5, 2, vec![]).unwrap();
        let g = gauss_sl2_numeric(1, &s);
        assert!((g.norm() - 5f64.sqrt()).abs() < 1e-12);
        // q ≡ 1 mod 4 makes the quadratic Gauss sum real
        assert!(g.im.abs() < 1e-12);
        assert!((gauss_sl2_numeric(0, &s) + 1.0).norm() < 1e-12);
    }

    #[test]
    fn su3_model_conjugation() {
        let s = Specialization::new(13, 3, vec![]).unwrap();
        for t in 0..3 {
            let a = gauss_su3_numeric(t, &s);
            let b = gauss_su3_numeric(-t, &s);
            assert!((a.conj() - b).norm() < 1e-9);
        }
    }
}
