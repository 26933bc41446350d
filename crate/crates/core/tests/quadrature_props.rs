use approx::assert_abs_diff_eq;
use hadamard_core::funcspace::{make_builtin_function, make_builtin_h};
use hadamard_core::inequalities::abs_linear_moment;
use hadamard_core::quadrature::{
    beta, incomplete_beta_half, incomplete_beta_half_quadrature, integrate, integrate_open,
    DEFAULT_TOL,
};
use hadamard_core::{FunctionFamily, HFamily, Interval};
use proptest::prelude::*;

const TOL: f64 = DEFAULT_TOL;

fn builtin(kind: u8, p: &[f64]) -> hadamard_core::DifferentiableFunction {
    let iv = Interval::unit();
    match kind % 3 {
        0 => make_builtin_function(FunctionFamily::Poly, p, iv).unwrap(),
        1 => make_builtin_function(FunctionFamily::ExpScale, &p[..2], iv).unwrap(),
        _ => make_builtin_function(FunctionFamily::AbsPower, &[1.0 + p[0].abs() * 2.0, p[1]], iv).unwrap(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 50, ..ProptestConfig::default() })]

    #[test]
    fn splitting_invariance(kind in 0u8..3, p in prop::collection::vec(-2.0f64..2.0, 4)) {
        let f = builtin(kind, &p);
        let whole = integrate(|x| f.eval(x), 0.0, 1.0, TOL).unwrap().value;
        let left = integrate(|x| f.eval(x), 0.0, 0.5, TOL).unwrap().value;
        let right = integrate(|x| f.eval(x), 0.5, 1.0, TOL).unwrap().value;
        prop_assert!((whole - left - right).abs() <= 2.0 * TOL, "{} vs {}", whole, left + right);
    }

    #[test]
    fn error_estimate_within_request(k in 0.1f64..5.0, tol_exp in 6i32..12) {
        let tol = 10f64.powi(-tol_exp);
        let r = integrate(|x: f64| (k * x).sin().abs(), 0.0, 3.0, tol).unwrap();
        prop_assert!(r.err_estimate <= tol);
    }
}

#[test]
fn half_beta_matches_full_beta() {
    for q in [1.1, 1.5, 2.0, 3.0, 5.0] {
        let half = incomplete_beta_half(q).unwrap();
        assert_abs_diff_eq!(half, beta(q + 1.0, q + 1.0).unwrap() / 2.0, epsilon = 1e-12);
        let quad = incomplete_beta_half_quadrature(q, TOL).unwrap().value;
        assert_abs_diff_eq!(half, quad, epsilon = 2.0 * TOL);
    }
    assert_abs_diff_eq!(incomplete_beta_half(2.0).unwrap(), 1.0 / 60.0, epsilon = 1e-14);
}

#[test]
fn half_beta_integrand_is_symmetric() {
    for q in [1.1, 1.5, 2.0, 3.0, 5.0] {
        let g = |t: f64| (t * (1.0 - t)).powf(q);
        let lower = integrate(g, 0.0, 0.5, TOL).unwrap().value;
        let upper = integrate(g, 0.5, 1.0, TOL).unwrap().value;
        assert_abs_diff_eq!(lower, upper, epsilon = 2.0 * TOL);
    }
}

#[test]
fn half_interval_powers() {
    for p in [1.5f64, 2.0, 4.0] {
        let v = integrate(|t: f64| t.powf(p), 0.0, 0.5, TOL).unwrap().value;
        assert_abs_diff_eq!(v, 1.0 / (2f64.powf(p + 1.0) * (p + 1.0)), epsilon = TOL);
    }
}

#[test]
fn reciprocal_weight_moment_grows_like_log() {
    // ∫_ε^{1/2} (1 − 2t)/t dt = ln(1/(2ε)) − 1 + 2ε
    let mut last = 0.0;
    for k in 2..=8 {
        let eps = 10f64.powi(-k);
        let v = integrate(|t: f64| (1.0 - 2.0 * t) / t, eps, 0.5, 1e-9).unwrap().value;
        let exact = (1.0 / (2.0 * eps)).ln() - 1.0 + 2.0 * eps;
        assert_abs_diff_eq!(v, exact, epsilon = 1e-8);
        assert!(v > last + 2.0, "no logarithmic growth at eps = {eps}");
        last = v;
    }
    let h = make_builtin_h(HFamily::HGodunova, None).unwrap();
    assert!(!h.moment_integrable());
    assert!(abs_linear_moment(&h, TOL).is_err());
    assert!(integrate_open(|t: f64| (2.0 * t - 1.0).abs() / t, 0.0, 1.0, TOL).is_err());
}
