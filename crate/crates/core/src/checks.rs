//! Invariant checks shared by the `check` subcommand and the test suites.

use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::cg_action::{act, act_simple, double_bar, dtilde, dtilde_simple, dtilde_simple_with_reps, matrix_act, tau};
use crate::error::{Error, Result};
use crate::metaplectic::MetaplecticStructure;
use crate::numeric::{gauss_sl2_numeric, random_character, specialize, trial_rng, Specialization, Su3Values};
use crate::ring::{GaussKind, LatticeVector, RatFunc};
use crate::root_datum::{RelativeRootDatum, WeylElem};
use crate::whittaker::{
    c_w, calibrate_classical_orientation, check_final_theorem, classical_cs_oracle, whittaker_normalized,
    CLASSICAL_ORIENTATION,
};

pub const REL_TOLERANCE: f64 = 1e-9;
pub const ABS_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Debug, Serialize)]
pub struct CheckOutcome {
    pub name: String,
    pub cases: usize,
    pub max_deviation: f64,
    pub passed: bool,
    /// false for observed laws whose failure does not fail the suite
    pub required: bool,
    pub detail: String,
}

impl CheckOutcome {
    fn exact(name: &str, cases: usize, failures: Vec<String>) -> Self {
        CheckOutcome {
            name: name.into(),
            cases,
            max_deviation: if failures.is_empty() { 0.0 } else { 1.0 },
            passed: failures.is_empty(),
            required: true,
            detail: failures.into_iter().take(5).collect::<Vec<_>>().join("; "),
        }
    }
}

/// All vectors of the given rank with sup norm at most `radius`.
pub fn box_vectors(rank: usize, radius: i64) -> Vec<LatticeVector> {
    let mut out = vec![LatticeVector(Vec::new())];
    for _ in 0..rank {
        out = out
            .into_iter()
            .flat_map(|v| {
                (-radius..=radius).map(move |c| {
                    let mut w = v.0.clone();
                    w.push(c);
                    LatticeVector(w)
                })
            })
            .collect();
    }
    out
}

fn collect_failures<T: Send + Sync, F>(items: Vec<T>, f: F) -> Result<(usize, Vec<String>)>
where
    F: Fn(&T) -> Result<Option<String>> + Sync,
{
    let results: Vec<Option<String>> = items.par_iter().map(&f).collect::<Result<_>>()?;
    Ok((results.len(), results.into_iter().flatten().collect()))
}

/// s∘s∘x^λ = x^λ for every simple s.
pub fn involution(m: &MetaplecticStructure, radius: i64) -> Result<CheckOutcome> {
    let cases: Vec<(usize, LatticeVector)> = (0..m.rank())
        .flat_map(|i| box_vectors(m.rank(), radius).into_iter().map(move |v| (i, v)))
        .collect();
    let (n, fails) = collect_failures(cases, |(i, v)| {
        let f = RatFunc::x(v.clone());
        let g = act_simple(m, *i, &act_simple(m, *i, &f)?)?;
        Ok((g != f).then(|| format!("s{} on x^{v}", i + 1)))
    })?;
    Ok(CheckOutcome::exact("involution", n, fails))
}

/// s∘s∘f = f at random characters, SU3 symbols taken from the field model.
pub fn involution_numeric(m: &MetaplecticStructure, trials: usize, seed: u64, su3: Su3Values) -> Result<CheckOutcome> {
    let r = m.rank();
    let cases: Vec<(usize, usize)> = (0..r).flat_map(|i| (0..trials).map(move |t| (i, t))).collect();
    let results: Vec<(f64, Option<String>)> = cases
        .par_iter()
        .map(|&(i, t)| {
            let mut rng = trial_rng(seed ^ 0x5151, (i * trials + t) as u64);
            let f = random_test_function(m, &mut rng);
            let g = act_simple(m, i, &act_simple(m, i, &f)?)?;
            let spec = sample_until(m, &mut rng, su3, |c| Ok(specialize(&f, c).and(specialize(&g, c))))?;
            let (a, b) = (specialize(&g, &spec)?, specialize(&f, &spec)?);
            let dev = (a - b).norm() / b.norm().max(1.0);
            Ok((dev, (dev > REL_TOLERANCE).then(|| format!("s{} trial {t}: dev {dev:e}", i + 1))))
        })
        .collect::<Result<_>>()?;
    let max = results.iter().map(|x| x.0).fold(0.0, f64::max);
    let fails: Vec<String> = results.into_iter().filter_map(|x| x.1).collect();
    Ok(CheckOutcome {
        name: "involution_numeric".into(),
        cases: cases.len(),
        max_deviation: max,
        passed: fails.is_empty(),
        required: true,
        detail: fails.into_iter().take(5).collect::<Vec<_>>().join("; "),
    })
}

/// Order of s_i s_j.
pub fn braid_order(d: &RelativeRootDatum, i: usize, j: usize) -> usize {
    match d.cartan()[i][j] * d.cartan()[j][i] {
        0 => 2,
        1 => 3,
        2 => 4,
        3 => 6,
        _ => unreachable!("finite type"),
    }
}

/// Both alternating words of length m_ij act identically.
pub fn braid(m: &MetaplecticStructure, radius: i64) -> Result<CheckOutcome> {
    let d = m.datum();
    let mut cases = Vec::new();
    for i in 0..m.rank() {
        for j in i + 1..m.rank() {
            let k = braid_order(d, i, j);
            let a: Vec<usize> = (0..k).map(|t| if t % 2 == 0 { i } else { j }).collect();
            let b: Vec<usize> = (0..k).map(|t| if t % 2 == 0 { j } else { i }).collect();
            let (a, b) = (d.from_word(&a)?, d.from_word(&b)?);
            for v in box_vectors(m.rank(), radius) {
                cases.push((a.clone(), b.clone(), v));
            }
        }
    }
    let (n, fails) = collect_failures(cases, |(a, b, v)| {
        let f = RatFunc::x(v.clone());
        Ok((act(m, a, &f)? != act(m, b, &f)?).then(|| format!("{} vs {} on x^{v}", a.word_label(), b.word_label())))
    })?;
    Ok(CheckOutcome::exact("braid", n, fails))
}

/// D̃_{w1w2} = D̃_{w1}^{(w2χ)} D̃_{w2} whenever lengths add.
pub fn cocycle(m: &MetaplecticStructure) -> Result<CheckOutcome> {
    let d = m.datum();
    let els = d.weyl().elements();
    let mut pairs = Vec::new();
    for w1 in els {
        for w2 in els {
            let w = d.mul(w1, w2);
            if w.length() == w1.length() + w2.length() {
                pairs.push((w1.clone(), w2.clone(), w));
            }
        }
    }
    let r = m.rank();
    let (n, fails) = collect_failures(pairs, |(w1, w2, w)| {
        let lhs = dtilde(m, w)?;
        let rhs = dtilde(m, w1)?.twist(w2).mul(&dtilde(m, w2)?, r);
        Ok((!lhs.equals(&rhs, r)).then(|| format!("{} * {}", w1.word_label(), w2.word_label())))
    })?;
    Ok(CheckOutcome::exact("cocycle", n, fails))
}

/// Closed-form s∘f against the τ̃-matrix route at random characters.
pub fn route_consistency(m: &MetaplecticStructure, trials: usize, seed: u64, su3: Su3Values) -> Result<CheckOutcome> {
    let d = m.datum();
    let r = m.rank();
    let dms: Vec<_> = (0..r).map(|i| dtilde_simple(m, i)).collect::<Result<_>>()?;
    let cases: Vec<(usize, usize)> = (0..r).flat_map(|i| (0..trials).map(move |t| (i, t))).collect();
    let results: Vec<(f64, Option<String>)> = cases
        .par_iter()
        .map(|&(i, t)| {
            let mut rng = trial_rng(seed, (i * trials + t) as u64);
            let f = random_test_function(m, &mut rng);
            let s = d.from_word(&[i])?;
            let g = act_simple(m, i, &f)?;
            let spec = sample_until(m, &mut rng, su3, |c| Ok(specialize(&f, c).and(specialize(&g, &c.twisted(&s)))))?;
            let lhs = specialize(&g, &spec.twisted(&s))?;
            let dm = &dms[i];
            let cs = m.cosets();
            let mut rhs = num_complex::Complex64::new(0.0, 0.0);
            for (b, rep) in cs.reps.iter().enumerate() {
                let part = crate::ring::project_coset(&f, cs, rep)?;
                if part.is_zero() {
                    continue;
                }
                let pv = specialize(&part, &spec)?;
                for a in 0..dm.size {
                    if let Some(e) = dm.entries.get(&(a, b)) {
                        rhs += specialize(e, &spec)? * pv;
                    }
                }
            }
            let dev = (lhs - rhs).norm() / lhs.norm().max(1.0);
            Ok((dev, (dev > REL_TOLERANCE).then(|| format!("s{} trial {t}: dev {dev:e}", i + 1))))
        })
        .collect::<Result<_>>()?;
    let max = results.iter().map(|x| x.0).fold(0.0, f64::max);
    let fails: Vec<String> = results.into_iter().filter_map(|x| x.1).collect();
    Ok(CheckOutcome {
        name: "route_consistency".into(),
        cases: cases.len(),
        max_deviation: max,
        passed: fails.is_empty(),
        required: true,
        detail: fails.into_iter().take(5).collect::<Vec<_>>().join("; "),
    })
}

const MAX_RESAMPLES: usize = 1000;

/// Draws characters until `eval` stops hitting a pole; other errors propagate.
fn sample_until<F>(m: &MetaplecticStructure, rng: &mut rand_chacha::ChaCha8Rng, su3: Su3Values, eval: F) -> Result<Specialization>
where
    F: Fn(&Specialization) -> Result<Result<num_complex::Complex64>>,
{
    let mut last = 0.0;
    for _ in 0..MAX_RESAMPLES {
        let spec = random_character(m, rng, su3)?;
        match eval(&spec)? {
            Ok(_) => return Ok(spec),
            Err(Error::Resample(d)) => last = d,
            Err(e) => return Err(e),
        }
    }
    Err(Error::Resample(last))
}

/// A few monomials with small random exponents over a Λ-supported denominator.
fn random_test_function(m: &MetaplecticStructure, rng: &mut rand_chacha::ChaCha8Rng) -> RatFunc {
    use rand::Rng;
    let r = m.rank();
    let mut f = RatFunc::zero(r);
    let terms = rng.gen_range(1..=3);
    for _ in 0..terms {
        let v = LatticeVector((0..r).map(|_| rng.gen_range(-3..=3)).collect());
        let c = crate::ring::GaussPoly::int(rng.gen_range(1..=4));
        f = f.add(&RatFunc::x(v).scale(&c));
    }
    if rng.gen_bool(0.5) {
        let i = rng.gen_range(0..r);
        let beta = LatticeVector::basis(r, i);
        let na = m.simple(i).n_alpha * if m.simple(i).kind == GaussKind::Su3 { 2 } else { 1 };
        f = f.mul(&RatFunc::inv_binomial(crate::ring::GaussPoly::q_pow(1, -1), beta.scale(na)));
    }
    f
}

/// c_w does not depend on the reduced word.
pub fn reduced_word_independence(m: &MetaplecticStructure) -> Result<CheckOutcome> {
    let d = m.datum();
    let mut cases = Vec::new();
    for w in d.weyl().elements() {
        for word in reduced_words(d, w) {
            cases.push((w.clone(), d.from_word(&word)?));
        }
    }
    let (n, fails) = collect_failures(cases, |(w, alt)| {
        Ok((c_w(m, w)? != c_w(m, alt)?).then(|| format!("{} vs {}", w.word_label(), alt.word_label())))
    })?;
    Ok(CheckOutcome::exact("reduced_word_independence", n, fails))
}

/// Every reduced word of w.
pub fn reduced_words(d: &RelativeRootDatum, w: &WeylElem) -> Vec<Vec<usize>> {
    if w.is_identity() {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for i in 0..d.rank() {
        let s = d.from_word(&[i]).expect("valid index");
        let v = d.mul(&s, w);
        if v.length() + 1 == w.length() {
            for mut tail in reduced_words(d, &v) {
                tail.insert(0, i);
                out.push(tail);
            }
        }
    }
    out
}

/// τ̃ does not depend on the column representatives.
pub fn representative_independence(m: &MetaplecticStructure) -> Result<CheckOutcome> {
    let r = m.rank();
    let shifts: Vec<LatticeVector> = m.cosets().basis.clone();
    let mut cases = 0;
    let mut fails = Vec::new();
    for i in 0..r {
        let base = dtilde_simple(m, i)?;
        for h in &shifts {
            for k in [-1, 1] {
                let reps: Vec<LatticeVector> = m.cosets().reps.iter().map(|v| v + &h.scale(k)).collect();
                let alt = dtilde_simple_with_reps(m, i, &reps)?;
                cases += 1;
                if !base.equals(&alt, r) {
                    fails.push(format!("s{} shifted by {h}", i + 1));
                }
            }
        }
    }
    Ok(CheckOutcome::exact("representative_independence", cases, fails))
}

/// "0 unless" laws for τ, for the action on monomials and for W.
pub fn support_laws(m: &MetaplecticStructure, radius: i64) -> Result<CheckOutcome> {
    let d = m.datum();
    let r = m.rank();
    let cs = m.cosets();
    let mut cases = 0;
    let mut fails = Vec::new();
    for i in 0..r {
        let alpha = LatticeVector::basis(r, i);
        let two = if m.simple(i).kind == GaussKind::Su3 { 2 } else { 1 };
        let dm = dtilde_simple(m, i)?;
        for (b, mu) in cs.reps.iter().enumerate() {
            let (p1, p2) = tau(m, mu, i)?;
            let s_mu = d.reflect(i, mu);
            let b_over_q = m.bilinear(&alpha, mu) / m.simple(i).q;
            cases += 1;
            if p1.target != &s_mu + &alpha.scale(b_over_q) || p2.target != &s_mu + &alpha.scale(two) {
                fails.push(format!("tau targets at s{} mu={mu}", i + 1));
            }
            let allowed = [cs.index_of(&p1.target), cs.index_of(&p2.target)];
            for a in 0..dm.size {
                if !allowed.contains(&a) && dm.entries.contains_key(&(a, b)) {
                    fails.push(format!("tau support s{} ({a},{b})", i + 1));
                }
            }
        }
        for v in box_vectors(r, radius) {
            cases += 1;
            let g = act_simple(m, i, &RatFunc::x(v.clone()))?;
            let allowed = [cs.reduce(&v), cs.reduce(&(&d.reflect(i, &v) + &alpha.scale(two)))];
            if g.num().exponents().any(|e| !allowed.contains(&cs.reduce(e))) {
                fails.push(format!("action support s{} on x^{v}", i + 1));
            }
        }
    }
    for v in box_vectors(r, radius) {
        if d.is_dominant(&v) {
            continue;
        }
        cases += 1;
        if !whittaker_normalized(m, &v)?.value.is_zero() {
            fails.push(format!("nonzero value at non-dominant {v}"));
        }
    }
    Ok(CheckOutcome::exact("support_laws", cases, fails))
}

/// Numerator exponents of W(λ) in w0λ + Σ ℤ n_i α_i. Not required: the τ₂
/// target sμ+α already breaks it for A1, n=2, λ=1 (q⁻¹g(1)x² survives).
pub fn monomial_lattice_law(m: &MetaplecticStructure, radius: i64) -> Result<CheckOutcome> {
    let d = m.datum();
    let r = m.rank();
    let w0 = d.longest();
    let lams: Vec<LatticeVector> = box_vectors(r, radius).into_iter().filter(|v| d.is_dominant(v)).collect();
    let (n, fails) = collect_failures(lams, |v| {
        let anchor = w0.act(v);
        let value = whittaker_normalized(m, v)?.value;
        let bad: Vec<String> = value
            .num()
            .exponents()
            .filter(|e| {
                let diff = *e - &anchor;
                (0..r).any(|i| diff.0[i] % m.simple(i).n_alpha != 0)
            })
            .map(|e| e.to_string())
            .collect();
        Ok((!bad.is_empty()).then(|| format!("at {v}: exponents {}", bad.join(" "))))
    })?;
    let mut out = CheckOutcome::exact("monomial_lattice_law", n, fails);
    out.required = false;
    Ok(out)
}

/// n = 1 values against the Weyl character formula oracle.
pub fn classical_limit(type_spec: &str, radius: i64) -> Result<CheckOutcome> {
    let sigma = calibrate_classical_orientation()?;
    let d = Arc::new(RelativeRootDatum::build(type_spec, None)?);
    let m = MetaplecticStructure::new(d.clone(), 1, &[1])?;
    let lams: Vec<LatticeVector> = box_vectors(d.rank(), radius).into_iter().filter(|v| d.is_dominant(v)).collect();
    let (n, mut fails) = collect_failures(lams, |v| {
        let w = whittaker_normalized(&m, v)?.value;
        let o = classical_cs_oracle(&d, v, sigma)?;
        Ok((w != o).then(|| format!("{type_spec} at {v}")))
    })?;
    if sigma != CLASSICAL_ORIENTATION {
        fails.push(format!("calibrated orientation {sigma} differs from the frozen one"));
    }
    Ok(CheckOutcome::exact(&format!("classical_limit_{type_spec}"), n, fails))
}

/// δ^{-1/2}W(π^λ) = x^{w0λ} N(χ,λ) on dominant λ in a box.
pub fn final_theorem(m: &MetaplecticStructure, radius: i64) -> Result<CheckOutcome> {
    let d = m.datum();
    let lams: Vec<LatticeVector> = box_vectors(d.rank(), radius).into_iter().filter(|v| d.is_dominant(v)).collect();
    let (n, fails) = collect_failures(lams, |v| Ok((!check_final_theorem(m, v)?).then(|| format!("at {v}"))))?;
    Ok(CheckOutcome::exact("final_theorem", n, fails))
}

/// (f∥w₂)∥w₁ = f∥(w₁w₂) over all pairs, on the given monomials.
pub fn double_bar_composition(m: &MetaplecticStructure, monomials: &[LatticeVector]) -> Result<CheckOutcome> {
    let d = m.datum();
    let els = d.weyl().elements();
    let mut cases = Vec::new();
    for v in monomials {
        for w1 in els {
            for w2 in els {
                cases.push((v.clone(), w1.clone(), w2.clone()));
            }
        }
    }
    let (n, fails) = collect_failures(cases, |(v, w1, w2)| {
        let f = RatFunc::x(v.clone());
        let lhs = double_bar(m, w1, &double_bar(m, w2, &f)?)?;
        let rhs = double_bar(m, &d.mul(w1, w2), &f)?;
        Ok((lhs != rhs).then(|| format!("{} after {} on x^{v}", w1.word_label(), w2.word_label())))
    })?;
    Ok(CheckOutcome::exact("double_bar_composition", n, fails))
}

/// Agreement of the closed form with the matrix route, exactly.
pub fn routes_agree_symbolically(m: &MetaplecticStructure, radius: i64) -> Result<CheckOutcome> {
    let d = m.datum();
    let cases: Vec<(usize, LatticeVector)> = (0..m.rank())
        .flat_map(|i| box_vectors(m.rank(), radius).into_iter().map(move |v| (i, v)))
        .collect();
    let (n, fails) = collect_failures(cases, |(i, v)| {
        let f = RatFunc::x(v.clone());
        let s = d.from_word(&[*i])?;
        Ok((act_simple(m, *i, &f)? != matrix_act(m, &s, &f)?).then(|| format!("s{} on x^{v}", i + 1)))
    })?;
    Ok(CheckOutcome::exact("routes_agree_symbolically", n, fails))
}

/// g(t) = -1 for n | t and |g(t)| = √q otherwise.
pub fn gauss_facts(qs: &[u64], ns: &[u32]) -> Result<CheckOutcome> {
    let mut cases = 0;
    let mut max: f64 = 0.0;
    let mut fails = Vec::new();
    for &n in ns {
        for &q in qs {
            if q % (2 * n as u64) != 1 {
                continue;
            }
            let spec = Specialization::new(q, n, Vec::new())?;
            for t in -(n as i64)..=(2 * n as i64) {
                cases += 1;
                let g = gauss_sl2_numeric(t, &spec);
                let dev = if t.rem_euclid(n as i64) == 0 {
                    (g + 1.0).norm()
                } else {
                    (g.norm() - (q as f64).sqrt()).abs()
                };
                max = max.max(dev);
                if dev > ABS_TOLERANCE {
                    fails.push(format!("q={q} n={n} t={t}: dev {dev:e}"));
                }
            }
        }
    }
    Ok(CheckOutcome {
        name: "gauss_facts".into(),
        cases,
        max_deviation: max,
        passed: fails.is_empty(),
        required: true,
        detail: fails.join("; "),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteOptions {
    pub radius: i64,
    pub numeric: bool,
    pub seed: u64,
    pub trials: usize,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions { radius: 2, numeric: true, seed: 0, trials: 100 }
    }
}

/// Everything applicable to one configuration.
pub fn run_suite(m: &MetaplecticStructure, opts: &SuiteOptions) -> Result<Vec<CheckOutcome>> {
    let d = m.datum();
    let mut out = vec![
        involution(m, opts.radius)?,
        braid(m, opts.radius)?,
        cocycle(m)?,
        reduced_word_independence(m)?,
        representative_independence(m)?,
        routes_agree_symbolically(m, opts.radius)?,
        support_laws(m, opts.radius)?,
        monomial_lattice_law(m, opts.radius)?,
    ];
    if d.is_split() {
        out.push(final_theorem(m, opts.radius)?);
        if m.n() == 1 && d.rank() <= 2 {
            out.push(classical_limit(d.name(), opts.radius)?);
        }
    }
    if opts.numeric {
        out.push(route_consistency(m, opts.trials, opts.seed, Su3Values::Random)?);
        out.push(involution_numeric(m, opts.trials, opts.seed, Su3Values::Model)?);
        let qs: Vec<u64> = crate::numeric::admissible_primes(m.n() as u32).take(3).collect();
        out.push(gauss_facts(&qs, &[m.n() as u32])?);
    }
    Ok(out)
}
