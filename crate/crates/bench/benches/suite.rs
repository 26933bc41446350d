use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use hadamard_core::funcspace::{make_builtin_function, make_builtin_h, make_builtin_phi};
use hadamard_core::harness::{run_suite, SuiteConfig};
use hadamard_core::{certify, FunctionFamily, HFamily, Interval, PhiFamily, RunOptions};

const SUITE: &str = r#"{"cases": [{
    "label": "exp-warp",
    "f": {"family": "exp_scale", "params": [1]},
    "phi": {"family": "power_warp", "params": [2]},
    "h": {"family": "h_linear"},
    "c": 1, "q": 2, "interval": [0, 1],
    "checks": ["lemma1", "lemma2", "thm1", "thm2", "thm3", "thm4", "hh_classical", "hh_phi", "corollaries"]
}]}"#;

fn certification(c: &mut Criterion) {
    let iv = Interval::unit();
    let f = make_builtin_function(FunctionFamily::ExpScale, &[1.5], iv).unwrap();
    let phi = make_builtin_phi(PhiFamily::Identity, &[], iv).unwrap();
    let h = make_builtin_h(HFamily::HLinear, None).unwrap();
    c.bench_function("certify 4096 samples", |b| {
        b.iter(|| certify(&f, &phi, &h, black_box(1.0), 4096, 42).unwrap())
    });
}

fn one_case(c: &mut Criterion) {
    let cases = SuiteConfig::from_json(SUITE).unwrap().cases;
    let opts = RunOptions {
        samples: 512,
        ..RunOptions::default()
    };
    let mut group = c.benchmark_group("suite");
    group.sample_size(10);
    group.bench_function("all checks, one case", |b| b.iter(|| run_suite(&cases, &opts).unwrap()));
    group.finish();
}

criterion_group!(benches, certification, one_case);
criterion_main!(benches);
