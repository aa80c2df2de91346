//! Algebraic invariants over randomly generated inputs.

use std::sync::Arc;

use metawhit::cg_action::{act, act_simple};
use metawhit::metaplectic::MetaplecticStructure;
use metawhit::numeric::{specialize, Specialization};
use metawhit::ring::serialize::{ratfunc_from_json, ratfunc_to_json};
use metawhit::ring::{project_coset, subst_weyl, GaussKind, GaussPoly, GaussSym, LatticeVector, LaurentPoly, RatFunc};
use metawhit::root_datum::RelativeRootDatum;
use num_complex::Complex64;
use proptest::prelude::*;

const N: i64 = 2;

fn a2() -> MetaplecticStructure {
    MetaplecticStructure::new(Arc::new(RelativeRootDatum::build("A2", None).unwrap()), N, &[1]).unwrap()
}

fn coeff() -> impl Strategy<Value = GaussPoly> {
    prop_oneof![
        (-3i64..=3).prop_map(GaussPoly::int),
        (-2i64..=2).prop_map(|k| GaussPoly::q_pow(1, k)),
        (1i64..N).prop_map(|t| GaussPoly::gauss(GaussSym::new(GaussKind::Sl2, t, N as u32, 1))),
    ]
}

fn exponent() -> impl Strategy<Value = LatticeVector> {
    prop::collection::vec(-2i64..=2, 2).prop_map(LatticeVector)
}

fn laurent() -> impl Strategy<Value = LaurentPoly> {
    prop::collection::vec((exponent(), coeff()), 0..4).prop_map(|ts| {
        ts.into_iter().fold(LaurentPoly::zero(2), |p, (e, c)| p.add(&LaurentPoly::monomial(e, c)))
    })
}

/// Numerators over products of binomials with exponents in NX (inside Λ).
fn ratfunc() -> impl Strategy<Value = RatFunc> {
    let bin = (prop::collection::vec(-1i64..=1, 2), -1i64..=1).prop_filter_map("zero exponent", |(v, k)| {
        (v.iter().any(|&c| c != 0)).then(|| RatFunc::inv_binomial(GaussPoly::q_pow(1, k), LatticeVector(v).scale(N)))
    });
    (laurent(), prop::collection::vec(bin, 0..3))
        .prop_map(|(p, bs)| bs.iter().fold(RatFunc::from_poly(p), |f, b| f.mul(b)))
}

fn spec(x: (f64, f64)) -> Specialization {
    let xs = vec![Complex64::from_polar(1.0, x.0), Complex64::from_polar(1.0, x.1)];
    Specialization::new(5, N as u32, xs).unwrap().with_sl2_values(&[1])
}

fn close(a: Complex64, b: Complex64) -> bool {
    (a - b).norm() <= 1e-9 * a.norm().max(b.norm()).max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn laurent_ring_axioms(a in laurent(), b in laurent(), c in laurent()) {
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert!(a.sub(&a).is_zero());
    }

    #[test]
    fn ratfunc_field_operations(f in ratfunc(), g in ratfunc()) {
        prop_assert_eq!(f.add(&g).sub(&g), f.clone());
        prop_assert_eq!(f.add(&g), g.add(&f));
        if !g.is_zero() {
            prop_assert_eq!(f.mul(&g).div(&g).unwrap(), f.clone());
        }
    }

    #[test]
    fn equality_agrees_with_subtraction(f in ratfunc(), g in ratfunc()) {
        prop_assert_eq!(f == g, f.sub(&g).is_zero());
        prop_assert!(f == f.simplify());
    }

    #[test]
    fn simplify_is_idempotent(f in ratfunc()) {
        let s = f.simplify();
        let t = s.simplify();
        prop_assert_eq!(s.num(), t.num());
        prop_assert_eq!(s.den_factors(), t.den_factors());
    }

    #[test]
    fn coset_projections_partition(f in ratfunc()) {
        let m = a2();
        let cs = m.cosets();
        let mut total = RatFunc::zero(2);
        for rep in &cs.reps {
            total = total.add(&project_coset(&f, cs, rep).unwrap());
        }
        prop_assert_eq!(total, f);
    }

    #[test]
    fn substitution_is_a_homomorphism(f in ratfunc(), g in ratfunc(), i in 0usize..6, j in 0usize..6) {
        let m = a2();
        let d = m.datum();
        let (w1, w2) = (&d.weyl().elements()[i], &d.weyl().elements()[j]);
        prop_assert_eq!(subst_weyl(&f.mul(&g), w1), subst_weyl(&f, w1).mul(&subst_weyl(&g, w1)));
        prop_assert_eq!(subst_weyl(&f.add(&g), w1), subst_weyl(&f, w1).add(&subst_weyl(&g, w1)));
        prop_assert_eq!(subst_weyl(&subst_weyl(&f, w1), w2), subst_weyl(&f, &d.mul(w1, w2)));
    }

    #[test]
    fn specialization_is_a_homomorphism(f in ratfunc(), g in ratfunc(), x in (0.1f64..6.0, 0.1f64..6.0)) {
        let s = spec(x);
        if let (Ok(a), Ok(b)) = (specialize(&f, &s), specialize(&g, &s)) {
            prop_assert!(close(specialize(&f.mul(&g), &s).unwrap(), a * b));
            prop_assert!(close(specialize(&f.add(&g), &s).unwrap(), a + b));
        }
    }

    #[test]
    fn json_round_trip(f in ratfunc()) {
        let j = ratfunc_to_json(&f);
        prop_assert_eq!(ratfunc_from_json(&j, 2).unwrap(), f.clone());
        let m = a2();
        let g = act_simple(&m, 0, &f).unwrap();
        prop_assert_eq!(ratfunc_from_json(&ratfunc_to_json(&g), 2).unwrap(), g);
    }

    #[test]
    fn action_is_a_left_action(f in ratfunc(), i in 0usize..6, j in 0usize..6) {
        let m = a2();
        let d = m.datum();
        let (w1, w2) = (&d.weyl().elements()[i], &d.weyl().elements()[j]);
        let lhs = act(&m, w1, &act(&m, w2, &f).unwrap()).unwrap();
        prop_assert_eq!(lhs, act(&m, &d.mul(w1, w2), &f).unwrap());
    }

    #[test]
    fn lattice_scaling_lands_in_lambda(v in exponent()) {
        prop_assert!(a2().in_lattice(&v.scale(N)));
        prop_assert_eq!(a2().in_lattice(&v), a2().in_lattice_by_definition(&v));
    }
}
