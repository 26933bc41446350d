use hadamard_core::convexity::{certify, defect, max_modulus, sample_triples};
use hadamard_core::funcspace::{make_builtin_function, make_builtin_h, make_builtin_phi};
use hadamard_core::{FunctionFamily, HFamily, Interval, PhiFamily};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SAMPLES: usize = 512;

#[test]
fn verdicts_are_monotone_in_modulus() {
    let iv = Interval::new(0.0, 2.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let hlin = make_builtin_h(HFamily::HLinear, None).unwrap();
    for seed in 0..50u64 {
        let f = match seed % 2 {
            0 => make_builtin_function(FunctionFamily::ExpScale, &[rng.gen_range(0.1..1.5)], iv),
            _ => make_builtin_function(
                FunctionFamily::Poly,
                &[0.0, rng.gen_range(-1.0..1.0), rng.gen_range(0.1..2.0), rng.gen_range(0.0..0.5)],
                iv,
            ),
        }
        .unwrap();
        let phi = make_builtin_phi(PhiFamily::PowerWarp, &[rng.gen_range(0.5..2.0)], iv).unwrap();
        let mut previous = true;
        for step in 0..12 {
            let c = 0.25 * step as f64;
            let holds = certify(&f, &phi, &hlin, c, SAMPLES, seed).unwrap().holds;
            assert!(previous || !holds, "seed {seed}: certified at c = {c} after failing below");
            previous = holds;
        }
    }
}

#[test]
fn larger_weight_keeps_certificate() {
    let iv = Interval::unit();
    let phi = make_builtin_phi(PhiFamily::Identity, &[], iv).unwrap();
    let hlin = make_builtin_h(HFamily::HLinear, None).unwrap();
    let wider = [
        make_builtin_h(HFamily::HOne, None).unwrap(),
        make_builtin_h(HFamily::HPower, Some(0.5)).unwrap(),
    ];
    for k in [0.5, 1.0, 2.0] {
        let f = make_builtin_function(FunctionFamily::ExpScale, &[k], iv).unwrap();
        for c in [0.0, 0.05, 0.1] {
            let base = certify(&f, &phi, &hlin, c, SAMPLES, 3).unwrap();
            assert!(base.holds);
            for h in &wider {
                assert!(certify(&f, &phi, h, c, SAMPLES, 3).unwrap().holds, "{} at c = {c}", h.label());
            }
        }
    }
}

#[test]
fn unit_weight_modulus_dominates() {
    let iv = Interval::unit();
    let phi = make_builtin_phi(PhiFamily::Identity, &[], iv).unwrap();
    let square = make_builtin_function(FunctionFamily::Poly, &[0.0, 0.0, 1.0], iv).unwrap();
    let one = make_builtin_h(HFamily::HOne, None).unwrap();
    assert!(max_modulus(&square, &phi, &one, 4096, 42).unwrap() >= 1.0 - 1e-9);
}

#[test]
fn defect_shift_is_exact_in_modulus() {
    let iv = Interval::unit();
    let phi = make_builtin_phi(PhiFamily::Affine, &[0.5, 0.2], iv).unwrap();
    let h = make_builtin_h(HFamily::HPower, Some(0.3)).unwrap();
    let f = make_builtin_function(FunctionFamily::ExpScale, &[1.3], iv).unwrap();
    for s in sample_triples(&phi, 200, 9).into_iter().take(500) {
        let (px, py) = (phi.eval(s.x), phi.eval(s.y));
        let d1 = defect(&f, &phi, &h, 0.4, s).unwrap();
        let d2 = defect(&f, &phi, &h, 1.9, s).unwrap();
        let shift = 1.5 * s.t * (1.0 - s.t) * (px - py).powi(2);
        assert!((d2 - d1 - shift).abs() <= 1e-12 * (1.0 + d1.abs()), "{s:?}");
    }
}

#[test]
fn certificates_are_reproducible() {
    let iv = Interval::unit();
    let phi = make_builtin_phi(PhiFamily::PowerWarp, &[2.0], iv).unwrap();
    let h = make_builtin_h(HFamily::HLinear, None).unwrap();
    let f = make_builtin_function(FunctionFamily::ExpScale, &[1.0], iv).unwrap();
    let a = certify(&f, &phi, &h, 0.3, 1024, 5).unwrap();
    let b = certify(&f, &phi, &h, 0.3, 1024, 5).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.seed, 5);
}
