use approx::assert_abs_diff_eq;
use hadamard_core::funcspace::{make_builtin_function, make_builtin_h, make_builtin_phi};
use hadamard_core::inequalities::{
    abs_linear_moment, corollary_bound, h_integral, lemma1_residual, lemma2_residual,
    midpoint_moment, thm1_bound, thm2_bound, thm3_bound, thm4_bound, CorollaryId,
    CorollaryParams,
};
use hadamard_core::quadrature::{integrate, DEFAULT_TOL};
use hadamard_core::{FunctionFamily, HFamily, Interval, PhiFamily, PhiMap, StrongParams};

const TOL: f64 = DEFAULT_TOL;

fn cross_product() -> Vec<(hadamard_core::DifferentiableFunction, PhiMap)> {
    let iv = Interval::unit();
    let fs = [
        make_builtin_function(FunctionFamily::Poly, &[0.0, 0.0, 1.0], iv).unwrap(),
        make_builtin_function(FunctionFamily::ExpScale, &[1.0], iv).unwrap(),
        make_builtin_function(FunctionFamily::AbsPower, &[1.5, 0.0, 0.0, 1.0], iv).unwrap(),
    ];
    let phis = [
        make_builtin_phi(PhiFamily::Identity, &[], iv).unwrap(),
        make_builtin_phi(PhiFamily::Affine, &[0.5, 0.25], iv).unwrap(),
        make_builtin_phi(PhiFamily::PowerWarp, &[2.0], iv).unwrap(),
    ];
    fs.iter()
        .flat_map(|f| phis.iter().map(move |p| (f.clone(), p.clone())))
        .collect()
}

#[test]
fn residuals_vanish_and_ignore_modulus() {
    for (f, phi) in cross_product() {
        let base1 = lemma1_residual(&f, &phi, 0.0, TOL).unwrap().residual;
        let base2 = lemma2_residual(&f, &phi, 0.0, TOL).unwrap().residual;
        for c in [0.0, 1.0, 10.0] {
            let r1 = lemma1_residual(&f, &phi, c, TOL).unwrap().residual;
            let r2 = lemma2_residual(&f, &phi, c, TOL).unwrap().residual;
            assert!(r1.abs() <= 10.0 * TOL && r2.abs() <= 10.0 * TOL);
            assert!((r1 - base1).abs() <= 2.0 * TOL, "{} {}", f.label(), phi.label());
            assert!((r2 - base2).abs() <= 2.0 * TOL, "{} {}", f.label(), phi.label());
        }
    }
}

#[test]
fn unit_weight_gives_looser_bounds() {
    let hlin = make_builtin_h(HFamily::HLinear, None).unwrap();
    let one = make_builtin_h(HFamily::HOne, None).unwrap();
    for (f, phi) in cross_product() {
        let tight = thm1_bound(&f, &phi, &hlin, TOL).unwrap();
        let loose = thm1_bound(&f, &phi, &one, TOL).unwrap();
        assert!(tight <= loose + 10.0 * TOL);
        let tight = thm3_bound(&f, &phi, &hlin, TOL).unwrap();
        let loose = thm3_bound(&f, &phi, &one, TOL).unwrap();
        assert!(tight <= loose + 10.0 * TOL);
    }
}

#[test]
fn reduces_to_classical_constants() {
    let iv = Interval::new(-1.0, 2.0).unwrap();
    let f = make_builtin_function(FunctionFamily::ExpScale, &[0.7, 1.3], iv).unwrap();
    let phi = PhiMap::identity(iv);
    let hlin = make_builtin_h(HFamily::HLinear, None).unwrap();
    let slopes = f.derivative(-1.0).abs() + f.derivative(2.0).abs();
    assert_abs_diff_eq!(thm1_bound(&f, &phi, &hlin, TOL).unwrap(), 3.0 * slopes / 8.0, epsilon = 1e-9);
    assert_abs_diff_eq!(thm3_bound(&f, &phi, &hlin, TOL).unwrap(), 3.0 * slopes / 8.0, epsilon = 1e-9);
}

#[test]
fn holder_bounds_have_no_jumps_in_q() {
    let iv = Interval::new(0.0, 1.5).unwrap();
    let f = make_builtin_function(FunctionFamily::ExpScale, &[0.8], iv).unwrap();
    let phi = make_builtin_phi(PhiFamily::PowerWarp, &[1.5], iv).unwrap();
    let h = make_builtin_h(HFamily::HPower, Some(0.4)).unwrap();
    let at = |q: f64| {
        let p = StrongParams::new(0.0, q).unwrap();
        let b4 = thm4_bound(&f, &phi, &h, &p, TOL).unwrap();
        [thm2_bound(&f, &phi, &h, &p, TOL).unwrap().bound, b4.bound_printed, b4.bound_proof]
    };
    let step = 1e-4;
    for q in [1.3, 2.5, 4.5] {
        let (lo, mid, hi) = (at(q - step), at(q), at(q + step));
        for k in 0..3 {
            // a smooth bound has second difference O(step²); a jump shows up at full size
            let second = hi[k] - 2.0 * mid[k] + lo[k];
            assert!(second.abs() <= 1e-6, "bound {k} jumps by {second} at q = {q}");
        }
    }
}

#[test]
fn q_at_most_one_is_rejected() {
    assert!(StrongParams::new(0.0, 1.0).is_err());
    assert!(StrongParams::new(0.0, 0.5).is_err());
    let p = StrongParams::new(0.0, 3.0).unwrap();
    assert_abs_diff_eq!(1.0 / p.p + 1.0 / p.q, 1.0, epsilon = 1e-12);
}

#[test]
fn power_weight_moments_match_oracle() {
    for s in [0.25, 0.5, 0.75] {
        let h = make_builtin_h(HFamily::HPower, Some(s)).unwrap();
        let trap = integrate(|t: f64| (2.0 * t - 1.0).abs() * t.powf(s), 0.0, 1.0, 1e-12).unwrap().value;
        let mid = integrate(|t: f64| t * (t.powf(s) + (1.0 - t).powf(s)), 0.0, 0.5, 1e-12).unwrap().value;
        let denom = (s + 1.0) * (s + 2.0);
        assert_abs_diff_eq!(trap, (s + 2f64.powf(-s)) / denom, epsilon = 1e-9);
        assert_abs_diff_eq!(mid, (1.0 - 2f64.powf(-(s + 1.0))) / denom, epsilon = 1e-9);
        assert_abs_diff_eq!(abs_linear_moment(&h, TOL).unwrap(), trap, epsilon = 1e-9);
        assert_abs_diff_eq!(midpoint_moment(&h, TOL).unwrap(), mid, epsilon = 1e-9);
        assert_abs_diff_eq!(h_integral(&h, TOL).unwrap(), 1.0 / (s + 1.0), epsilon = 1e-9);
    }
}

#[test]
fn power_weight_corollaries_approach_linear_ones() {
    let iv = Interval::unit();
    let f = make_builtin_function(FunctionFamily::ExpScale, &[1.0], iv).unwrap();
    let phi = make_builtin_phi(PhiFamily::Affine, &[0.5, 0.25], iv).unwrap();
    let params = |s| CorollaryParams {
        strong: StrongParams::new(0.0, 2.0).unwrap(),
        s,
    };
    let near = params(1.0 - 1e-9);
    for (power, linear) in [(CorollaryId::C2, CorollaryId::C1), (CorollaryId::C5, CorollaryId::C4)] {
        let a = corollary_bound(power, &f, &phi, &near, TOL).unwrap().theorem_value;
        let b = corollary_bound(linear, &f, &phi, &near, TOL).unwrap().theorem_value;
        assert_abs_diff_eq!(a, b, epsilon = 1e-6);
    }
}

#[test]
fn only_two_printed_corollaries_disagree() {
    let iv = Interval::unit();
    let f = make_builtin_function(FunctionFamily::ExpScale, &[1.0], iv).unwrap();
    let phi = make_builtin_phi(PhiFamily::Affine, &[0.5, 0.25], iv).unwrap();
    for s in [0.25, 0.5, 0.75] {
        let params = CorollaryParams {
            strong: StrongParams::new(0.0, 2.0).unwrap(),
            s,
        };
        let flagged: Vec<_> = CorollaryId::ALL
            .into_iter()
            .filter(|&id| corollary_bound(id, &f, &phi, &params, TOL).unwrap().flagged(TOL))
            .collect();
        assert_eq!(flagged, vec![CorollaryId::C2, CorollaryId::C5], "s = {s}");
    }
}
