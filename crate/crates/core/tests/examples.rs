//! Every example under examples/ runs and says something true.

#[path = "../examples/gindikin_karpelevic.rs"]
mod gindikin_karpelevic;
#[path = "../examples/weyl_action.rs"]
mod weyl_action;
#[path = "../examples/whittaker_values.rs"]
mod whittaker_values;
#[path = "../examples/cocycle_matrices.rs"]
mod cocycle_matrices;
#[path = "../examples/gauss_sums.rs"]
mod gauss_sums;
#[path = "../examples/describe_cover.rs"]
mod describe_cover;
#[path = "../examples/final_theorem.rs"]
mod final_theorem;
#[path = "../examples/numeric_check.rs"]
mod numeric_check;
#[path = "../examples/json_roundtrip.rs"]
mod json_roundtrip;

#[test]
fn gindikin_karpelevic_denominators_scale_with_n_alpha() {
    let lines = gindikin_karpelevic::run_example().unwrap();
    for k in 2..=3 {
        let l = lines.iter().find(|l| l.starts_with(&format!("SL2 n_a={k}"))).unwrap();
        assert!(l.contains(&format!("1 - x_{{1}}^{{{k}}}")), "{l}");
    }
    assert!(lines.last().unwrap().starts_with("A2 n=2 c_w0"));
}

#[test]
fn weyl_action_squares_to_identity() {
    let (latex, back) = weyl_action::run_example().unwrap();
    assert!(back);
    assert!(latex.contains("\\frac"));
}

#[test]
fn whittaker_values_start_at_zero() {
    let vals = whittaker_values::run_example().unwrap();
    assert_eq!(vals[0], (-1, "0".to_string()));
    assert!(vals.iter().skip(1).all(|(_, v)| v != "0"));
}

#[test]
fn cocycle_example_holds() {
    let (entries, ok) = cocycle_matrices::run_example().unwrap();
    assert_eq!(entries.len(), 4);
    assert!(ok);
}

#[test]
fn gauss_sums_have_root_q_modulus() {
    for (n, t, abs) in gauss_sums::run_example().unwrap() {
        let expect = if t % n as i64 == 0 { 1.0 } else { 13f64.sqrt() };
        assert!((abs - expect).abs() < 1e-9, "n={n} t={t} |g|={abs}");
    }
}

#[test]
fn describe_cover_orders() {
    let orders: Vec<usize> = describe_cover::run_example().unwrap().into_iter().map(|x| x.2).collect();
    assert_eq!(orders, vec![2, 4, 3, 1, 3]);
}

#[test]
fn final_theorem_example_holds() {
    assert!(final_theorem::run_example().unwrap().iter().all(|x| x.1));
}

#[test]
fn numeric_example_routes_agree() {
    for (label, dev) in numeric_check::run_example().unwrap() {
        assert!(dev <= 1e-9, "{label}: {dev:e}");
    }
}

#[test]
fn json_example_round_trips() {
    let (json, ok) = json_roundtrip::run_example().unwrap();
    assert!(ok);
    assert!(serde_json::from_str::<serde_json::Value>(&json).is_ok());
}
