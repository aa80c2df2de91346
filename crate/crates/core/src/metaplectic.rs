//! Combinatorial data of an n-fold cover: Q, B, n_alpha and the coset group.

use std::collections::HashMap;
use std::sync::Arc;

use num_integer::Integer;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ring::{GaussKind, LatticeVector};
use crate::root_datum::RelativeRootDatum;

/// Per-simple-root data entering the rank-one formulas.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SimpleData {
    pub index: usize,
    pub kind: GaussKind,
    pub degree: u32,
    pub q: i64,
    pub n_alpha: i64,
    pub eps: i64,
}

/// X / Λ with Λ = {λ : B(λ, α_j) ≡ 0 mod n_j}, n_j = n (SL2) or 2n (SU3).
#[derive(Clone, Debug, Serialize)]
pub struct CosetSpace {
    /// Upper-triangular Hermite basis of Λ, one vector per row.
    pub basis: Vec<LatticeVector>,
    pub reps: Vec<LatticeVector>,
    #[serde(skip)]
    index: HashMap<LatticeVector, usize>,
}

impl CosetSpace {
    fn from_basis(basis: Vec<LatticeVector>) -> Self {
        let r = basis.len();
        let diag: Vec<i64> = (0..r).map(|i| basis[i].coords()[i]).collect();
        let mut reps = vec![LatticeVector::zero(r)];
        for i in 0..r {
            let mut next = Vec::new();
            for v in &reps {
                for c in 0..diag[i] {
                    let mut w = v.clone();
                    w.0[i] = c;
                    next.push(w);
                }
            }
            reps = next;
        }
        reps.sort();
        let index = reps.iter().enumerate().map(|(k, v)| (v.clone(), k)).collect();
        CosetSpace { basis, reps, index }
    }

    pub fn order(&self) -> usize {
        self.reps.len()
    }

    /// Canonical representative of λ + Λ.
    pub fn reduce(&self, v: &LatticeVector) -> LatticeVector {
        let mut w = v.clone();
        for (i, b) in self.basis.iter().enumerate() {
            let k = w.0[i].div_euclid(b.0[i]);
            if k != 0 {
                w = &w - &b.scale(k);
            }
        }
        w
    }

    pub fn index_of(&self, v: &LatticeVector) -> usize {
        self.index[&self.reduce(v)]
    }

    pub fn contains(&self, v: &LatticeVector) -> bool {
        self.reduce(v).is_zero()
    }

    pub fn same_coset(&self, a: &LatticeVector, b: &LatticeVector) -> bool {
        self.contains(&(a - b))
    }
}

#[derive(Clone, Debug)]
pub struct MetaplecticStructure {
    datum: Arc<RelativeRootDatum>,
    n: i64,
    qvals: Vec<i64>,
    bmat: Vec<Vec<i64>>,
    cosets: CosetSpace,
}

/// Smallest positive W-invariant Q on each connected component.
pub fn basic_q(d: &RelativeRootDatum) -> Vec<i64> {
    let r = d.rank();
    let a = d.cartan();
    // rational values num/den, propagated along Dynkin edges
    let mut val: Vec<Option<(i64, i64)>> = vec![None; r];
    let mut comps: Vec<Vec<usize>> = Vec::new();
    for start in 0..r {
        if val[start].is_some() {
            continue;
        }
        val[start] = Some((1, 1));
        let mut comp = vec![start];
        let mut stack = vec![start];
        while let Some(i) = stack.pop() {
            let (p, q) = val[i].unwrap();
            for j in 0..r {
                if j != i && a[i][j] != 0 && val[j].is_none() {
                    // Q_j a_ji = Q_i a_ij
                    let (np, nq) = (p * a[i][j], q * a[j][i]);
                    let g = np.gcd(&nq);
                    let s = if nq / g < 0 { -1 } else { 1 };
                    val[j] = Some((s * np / g, s * nq / g));
                    comp.push(j);
                    stack.push(j);
                }
            }
        }
        comps.push(comp);
    }
    let mut out = vec![0i64; r];
    for comp in comps {
        let l = comp.iter().fold(1i64, |acc, &i| acc.lcm(&val[i].unwrap().1));
        let ints: Vec<i64> = comp.iter().map(|&i| val[i].unwrap().0 * (l / val[i].unwrap().1)).collect();
        let g = ints.iter().fold(0i64, |acc, &x| acc.gcd(&x));
        for (k, &i) in comp.iter().enumerate() {
            out[i] = ints[k] / g;
        }
    }
    out
}

/// Rejects Q values that are not W-invariant.
pub fn validate_q(d: &RelativeRootDatum, q: &[i64]) -> Result<()> {
    let bad = |reason: String| Error::InvalidField { field: "Q".into(), reason };
    if q.len() != d.rank() {
        return Err(bad(format!("expected {} values, got {}", d.rank(), q.len())));
    }
    if let Some(i) = q.iter().position(|&x| x <= 0) {
        return Err(bad(format!("Q on node {} must be positive", i + 1)));
    }
    let a = d.cartan();
    for i in 0..d.rank() {
        for j in 0..d.rank() {
            if q[i] * a[i][j] != q[j] * a[j][i] {
                return Err(bad(format!(
                    "Q({}) = {} and Q({}) = {} are not W-invariant",
                    i + 1,
                    q[i],
                    j + 1,
                    q[j]
                )));
            }
        }
    }
    Ok(())
}

/// Expands the Q argument: one value scales the basic form, r values are taken as given.
pub fn expand_q(d: &RelativeRootDatum, spec: &[i64]) -> Result<Vec<i64>> {
    let q = if spec.len() == 1 && d.rank() > 1 {
        basic_q(d).into_iter().map(|b| b * spec[0]).collect()
    } else {
        spec.to_vec()
    };
    validate_q(d, &q)?;
    Ok(q)
}

impl MetaplecticStructure {
    pub fn new(datum: Arc<RelativeRootDatum>, n: i64, q_spec: &[i64]) -> Result<Self> {
        if n < 1 {
            return Err(Error::InvalidField { field: "n".into(), reason: "cover degree must be positive".into() });
        }
        let qvals = expand_q(&datum, q_spec)?;
        let r = datum.rank();
        let a = datum.cartan();
        let bmat: Vec<Vec<i64>> = (0..r).map(|i| (0..r).map(|j| qvals[i] * a[i][j]).collect()).collect();
        // the SU3 formulas are only coset-independent when ⟨α_j, ·⟩ is even
        for j in (0..r).filter(|&j| datum.marker(j).kind == GaussKind::Su3) {
            if let Some(i) = (0..r).find(|&i| a[j][i] % 2 != 0) {
                return Err(Error::InvalidField {
                    field: "markers".into(),
                    reason: format!("SU3 node {} needs even pairings, but <alpha_{}, alpha_{}^vee> = {}", j + 1, j + 1, i + 1, a[j][i]),
                });
            }
        }
        let moduli = node_moduli(&datum, n);
        let l = moduli.iter().fold(1i64, |a, b| a.lcm(b));
        let scaled: Vec<Vec<i64>> =
            (0..r).map(|j| bmat[j].iter().map(|x| x * (l / moduli[j])).collect()).collect();
        let cosets = CosetSpace::from_basis(sublattice_basis(&scaled, l));
        let m = MetaplecticStructure { datum, n, qvals, bmat, cosets };
        // the rank-one denominators live in x^{n_α α}
        for i in 0..r {
            let v = LatticeVector::basis(r, i).scale(m.simple(i).n_alpha);
            if !m.in_lattice(&v) {
                return Err(Error::InvalidField {
                    field: "markers".into(),
                    reason: format!("n_alpha * alpha_{} = {v} is not in Lambda for this choice of markers and Q", i + 1),
                });
            }
        }
        Ok(m)
    }

    pub fn datum(&self) -> &RelativeRootDatum {
        &self.datum
    }

    pub fn datum_arc(&self) -> Arc<RelativeRootDatum> {
        self.datum.clone()
    }

    pub fn rank(&self) -> usize {
        self.datum.rank()
    }

    pub fn n(&self) -> i64 {
        self.n
    }

    pub fn q_values(&self) -> &[i64] {
        &self.qvals
    }

    pub fn b_matrix(&self) -> &[Vec<i64>] {
        &self.bmat
    }

    pub fn bilinear(&self, l: &LatticeVector, m: &LatticeVector) -> i64 {
        let r = self.rank();
        let mut s = 0;
        for i in 0..r {
            if l.0[i] == 0 {
                continue;
            }
            for j in 0..r {
                s += l.0[i] * self.bmat[i][j] * m.0[j];
            }
        }
        s
    }

    pub fn q_form(&self, l: &LatticeVector) -> i64 {
        self.bilinear(l, l) / 2
    }

    pub fn n_alpha(&self, beta: &LatticeVector) -> i64 {
        self.n / self.n.gcd(&self.q_form(beta))
    }

    pub fn epsilon(&self, beta: &LatticeVector) -> i64 {
        if self.n_alpha(beta) % 2 == 0 {
            1
        } else {
            -1
        }
    }

    pub fn simple(&self, i: usize) -> SimpleData {
        let m = self.datum.marker(i);
        let q = self.qvals[i];
        let n_alpha = self.n / self.n.gcd(&q);
        SimpleData {
            index: i,
            kind: m.kind,
            degree: m.degree,
            q,
            n_alpha,
            eps: if n_alpha % 2 == 0 { 1 } else { -1 },
        }
    }

    pub fn cosets(&self) -> &CosetSpace {
        &self.cosets
    }

    pub fn in_lattice(&self, v: &LatticeVector) -> bool {
        self.cosets.contains(v)
    }

    /// Congruence test straight from the definition.
    pub fn in_lattice_by_definition(&self, v: &LatticeVector) -> bool {
        let moduli = node_moduli(&self.datum, self.n);
        (0..self.rank()).all(|j| self.bilinear(v, &LatticeVector::basis(self.rank(), j)).rem_euclid(moduli[j]) == 0)
    }
}

/// Congruence modulus attached to each simple root: n, or 2n at SU3 nodes
/// (whose formulas see B(α, μ)/2 modulo n).
pub fn node_moduli(d: &RelativeRootDatum, n: i64) -> Vec<i64> {
    d.markers()
        .iter()
        .map(|m| match m.kind {
            GaussKind::Sl2 => n,
            GaussKind::Su3 => 2 * n,
        })
        .collect()
}

/// Basis of {λ : Bλ ≡ 0 mod n}, in Hermite normal form.
fn sublattice_basis(b: &[Vec<i64>], n: i64) -> Vec<LatticeVector> {
    let r = b.len();
    let mut a: Vec<Vec<i64>> = b.to_vec();
    // columns of v track the column operations: a = u * b * v
    let mut v: Vec<Vec<i64>> = (0..r).map(|i| (0..r).map(|j| i64::from(i == j)).collect()).collect();
    for t in 0..r {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..r {
                for j in t..r {
                    if a[i][j] != 0 && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else { break };
            a.swap(t, pi);
            for row in a.iter_mut() {
                row.swap(t, pj);
            }
            for row in v.iter_mut() {
                row.swap(t, pj);
            }
            let p = a[t][t];
            let mut clean = true;
            for i in t + 1..r {
                let k = a[i][t].div_euclid(p);
                if k != 0 {
                    for j in 0..r {
                        a[i][j] -= k * a[t][j];
                    }
                }
                clean &= a[i][t] == 0;
            }
            for j in t + 1..r {
                let k = a[t][j].div_euclid(p);
                if k != 0 {
                    for i in 0..r {
                        a[i][j] -= k * a[i][t];
                    }
                    for row in v.iter_mut() {
                        row[j] -= k * row[t];
                    }
                }
                clean &= a[t][j] == 0;
            }
            if clean {
                break;
            }
        }
    }
    let mut gens: Vec<Vec<i64>> = (0..r)
        .map(|i| {
            let m = n / n.gcd(&a[i][i]);
            (0..r).map(|k| v[k][i] * m).collect()
        })
        .collect();
    for i in 0..r {
        let mut e = vec![0; r];
        e[i] = n;
        gens.push(e);
    }
    hermite(gens, r)
}

/// Row Hermite normal form of a full-rank generating set.
fn hermite(mut rows: Vec<Vec<i64>>, r: usize) -> Vec<LatticeVector> {
    let mut out: Vec<Vec<i64>> = Vec::new();
    for c in 0..r {
        loop {
            let live: Vec<usize> = (0..rows.len()).filter(|&i| rows[i][c] != 0).collect();
            if live.len() <= 1 {
                break;
            }
            let piv = *live.iter().min_by_key(|&&i| rows[i][c].abs()).unwrap();
            for &i in &live {
                if i != piv {
                    let k = rows[i][c].div_euclid(rows[piv][c]);
                    let pr = rows[piv].clone();
                    for (x, y) in rows[i].iter_mut().zip(&pr) {
                        *x -= k * y;
                    }
                }
            }
        }
        let idx = (0..rows.len()).find(|&i| rows[i][c] != 0).expect("lattice has full rank");
        let mut row = rows.swap_remove(idx);
        if row[c] < 0 {
            row.iter_mut().for_each(|x| *x = -*x);
        }
        out.push(row);
    }
    for c in 0..r {
        for i in 0..c {
            let k = out[i][c].div_euclid(out[c][c]);
            if k != 0 {
                let pr = out[c].clone();
                for (x, y) in out[i].iter_mut().zip(&pr) {
                    *x -= k * y;
                }
            }
        }
    }
    out.into_iter().map(LatticeVector).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ms(t: &str, n: i64, q: &[i64]) -> MetaplecticStructure {
        MetaplecticStructure::new(Arc::new(RelativeRootDatum::build(t, None).unwrap()), n, q).unwrap()
    }

    #[test]
    fn a1_cosets() {
        assert_eq!(ms("A1", 2, &[1]).cosets().order(), 1);
        let m = ms("A1", 4, &[1]);
        assert_eq!(m.cosets().order(), 2);
        assert_eq!(m.cosets().basis, vec![LatticeVector(vec![2])]);
        assert_eq!(m.n_alpha(&LatticeVector(vec![1])), 4);
    }

    #[test]
    fn a2_bilinear() {
        let m = ms("A2", 1, &[1, 1]);
        assert_eq!(m.bilinear(&LatticeVector(vec![1, 0]), &LatticeVector(vec![0, 1])), -1);
        assert_eq!(m.q_form(&LatticeVector(vec![1, 1])), 1);
    }

    #[test]
    fn basic_forms() {
        let d = |t: &str| RelativeRootDatum::build(t, None).unwrap();
        assert_eq!(basic_q(&d("B2")), vec![1, 2]);
        assert_eq!(basic_q(&d("C3")), vec![2, 2, 1]);
        assert_eq!(basic_q(&d("G2")), vec![3, 1]);
        assert_eq!(basic_q(&d("A1xA1")), vec![1, 1]);
        assert!(validate_q(&d("A2"), &[1, 2]).is_err());
        assert!(validate_q(&d("B2"), &[1, 1]).is_err());
    }

    #[test]
    fn lattice_matches_definition() {
        for (t, q) in [("A2", vec![1]), ("B2", vec![1]), ("G2", vec![1]), ("A3", vec![2]), ("C3", vec![1])] {
            for n in 1..=6 {
                let m = ms(t, n, &q);
                let r = m.rank();
                let mut count = 0usize;
                let box_iter = (0..(n as usize).pow(r as u32)).map(|mut k| {
                    LatticeVector(
                        (0..r)
                            .map(|_| {
                                let c = (k % n as usize) as i64;
                                k /= n as usize;
                                c
                            })
                            .collect(),
                    )
                });
                for v in box_iter {
                    assert_eq!(m.in_lattice(&v), m.in_lattice_by_definition(&v), "{t} n={n} {v:?}");
                    count += m.in_lattice(&v) as usize;
                }
                // |Γ| = n^r / |Λ ∩ [0,n)^r|
                assert_eq!(count * m.cosets().order(), (n as usize).pow(r as u32), "{t} n={n}");
            }
        }
    }
}
