//! Globally adaptive Gauss–Kronrod (7/15) integration, plus the beta
//! functions needed by the Hölder-type bounds.
//!
//! The integrator keeps every subinterval in a max-heap keyed on its local
//! error estimate and bisects the worst one until the summed estimate drops
//! below the requested absolute tolerance. Nodes are strictly interior to
//! every subinterval, so integrands defined on open intervals are safe.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};

/// Default absolute tolerance.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Integrand evaluations allowed before reporting non-convergence.
pub const MAX_EVALUATIONS: usize = 1_000_000;

/// Distance kept from the endpoints by [`integrate_open`].
pub const ENDPOINT_CLIP: f64 = 1e-12;

// Kronrod abscissae on [0, 1); odd indices are the Gauss-7 nodes.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

const EVALS_PER_RULE: usize = 15;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadResult {
    pub value: f64,
    pub err_estimate: f64,
    pub subdivisions: usize,
}

struct Segment {
    lo: f64,
    hi: f64,
    value: f64,
    err: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Segment {}

impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        // ties broken on position so the bisection order is reproducible
        self.err
            .total_cmp(&other.err)
            .then_with(|| other.lo.total_cmp(&self.lo))
    }
}

fn finite_at(v: f64, x: f64) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Evaluation {
            label: "integrand".into(),
            x,
        })
    }
}

/// One 15-point Kronrod rule with its embedded 7-point Gauss estimate.
fn gauss_kronrod_15<F: Fn(f64) -> f64>(g: &F, lo: f64, hi: f64) -> Result<Segment> {
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);

    let fc = finite_at(g(center), center)?;
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    let mut res_abs = kronrod.abs();
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];

    for j in 0..7 {
        let dx = half * XGK[j];
        let (x1, x2) = (center - dx, center + dx);
        let f1 = finite_at(g(x1), x1)?;
        let f2 = finite_at(g(x2), x2)?;
        fv1[j] = f1;
        fv2[j] = f2;
        kronrod += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }

    let mean = 0.5 * kronrod;
    let mut res_asc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }

    let value = kronrod * half;
    let res_abs = res_abs * half.abs();
    let res_asc = res_asc * half.abs();
    let mut err = ((kronrod - gauss) * half).abs();

    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }

    Ok(Segment { lo, hi, value, err })
}

fn check_request(lo: f64, hi: f64, tol: f64) -> Result<()> {
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::InvalidQuadrature(format!(
            "bounds [{lo}, {hi}] must be finite with lo < hi"
        )));
    }
    if !(tol > 0.0) || !tol.is_finite() {
        return Err(Error::InvalidQuadrature(format!("tolerance {tol} must be positive")));
    }
    Ok(())
}

/// ∫_lo^hi g with absolute error at most `tol`.
///
/// Fails with [`Error::NonConvergence`] rather than returning an estimate
/// whose error bound exceeds `tol`.
pub fn integrate<F: Fn(f64) -> f64>(g: F, lo: f64, hi: f64, tol: f64) -> Result<QuadResult> {
    integrate_bounded(g, lo, hi, tol, MAX_EVALUATIONS)
}

/// Same as [`integrate`] with an explicit evaluation budget.
pub fn integrate_bounded<F: Fn(f64) -> f64>(
    g: F,
    lo: f64,
    hi: f64,
    tol: f64,
    max_evaluations: usize,
) -> Result<QuadResult> {
    check_request(lo, hi, tol)?;

    let first = gauss_kronrod_15(&g, lo, hi)?;
    let mut evaluations = EVALS_PER_RULE;
    let mut total_value = first.value;
    let mut total_err = first.err;
    let mut heap = BinaryHeap::new();
    heap.push(first);
    let mut subdivisions = 0usize;

    loop {
        if total_err <= tol {
            // the running sums drift, so confirm against a fresh sum
            let (value, err) = heap
                .iter()
                .fold((0.0, 0.0), |(v, e), s| (v + s.value, e + s.err));
            total_value = value;
            total_err = err;
            if total_err <= tol {
                return Ok(QuadResult {
                    value: total_value,
                    err_estimate: total_err,
                    subdivisions,
                });
            }
        }

        let stalled = || Error::NonConvergence {
            lo,
            hi,
            value: total_value,
            err_estimate: total_err,
            evaluations,
        };

        if evaluations + 2 * EVALS_PER_RULE > max_evaluations {
            return Err(stalled());
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.lo + worst.hi);
        // segments shrunk to rounding scale signal a non-integrable point
        let floor = (1.0 + 100.0 * f64::EPSILON) * (mid.abs() + 1000.0 * f64::MIN_POSITIVE);
        if !(mid > worst.lo && mid < worst.hi) || worst.lo.abs().max(worst.hi.abs()) <= floor {
            heap.push(worst);
            return Err(stalled());
        }
        let left = gauss_kronrod_15(&g, worst.lo, mid)?;
        let right = gauss_kronrod_15(&g, mid, worst.hi)?;
        evaluations += 2 * EVALS_PER_RULE;
        subdivisions += 1;

        total_value += left.value + right.value - worst.value;
        total_err += left.err + right.err - worst.err;
        heap.push(left);
        heap.push(right);
    }
}

/// Integrates over `[lo + ε, hi − ε]` with ε = [`ENDPOINT_CLIP`], for
/// integrands only defined on the open interval. Each clipped sliver is
/// approximated by ε times the nearest interior value, and the bound
/// ε·(|g(lo+ε)| + |g(hi−ε)|) is charged to the error estimate.
pub fn integrate_open<F: Fn(f64) -> f64>(g: F, lo: f64, hi: f64, tol: f64) -> Result<QuadResult> {
    check_request(lo, hi, tol)?;
    let (l, h) = (lo + ENDPOINT_CLIP, hi - ENDPOINT_CLIP);
    if !(l < h) {
        return Err(Error::InvalidQuadrature(format!(
            "interval [{lo}, {hi}] vanishes after endpoint clipping"
        )));
    }
    let (gl, gh) = (finite_at(g(l), l)?, finite_at(g(h), h)?);
    let clip_err = ENDPOINT_CLIP * (gl.abs() + gh.abs());
    if clip_err >= tol {
        return Err(Error::NonConvergence {
            lo,
            hi,
            value: f64::NAN,
            err_estimate: clip_err,
            evaluations: 2,
        });
    }
    let inner = integrate(g, l, h, tol - clip_err)?;
    Ok(QuadResult {
        value: inner.value + ENDPOINT_CLIP * (gl + gh),
        err_estimate: inner.err_estimate + clip_err,
        subdivisions: inner.subdivisions,
    })
}

/// B(x, y) = Γ(x)Γ(y)/Γ(x+y), evaluated through log-gamma.
pub fn beta(x: f64, y: f64) -> Result<f64> {
    if !(x > 0.0 && y > 0.0) || !x.is_finite() || !y.is_finite() {
        return Err(Error::InvalidParams {
            family: "beta".into(),
            reason: format!("arguments ({x}, {y}) must be positive and finite"),
        });
    }
    Ok((ln_gamma(x) + ln_gamma(y) - ln_gamma(x + y)).exp())
}

fn check_q(q: f64) -> Result<()> {
    if q > 0.0 && q.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParams {
            family: "incomplete beta".into(),
            reason: format!("q = {q} must be positive"),
        })
    }
}

/// B_{1/2}(q+1, q+1) = ∫₀^{1/2} t^q(1−t)^q dt via the reflection symmetry
/// of the integrand about t = 1/2.
pub fn incomplete_beta_half(q: f64) -> Result<f64> {
    check_q(q)?;
    Ok(0.5 * beta(q + 1.0, q + 1.0)?)
}

/// B_{1/2}(q+1, q+1) by direct quadrature, for cross-checking.
pub fn incomplete_beta_half_quadrature(q: f64, tol: f64) -> Result<QuadResult> {
    check_q(q)?;
    integrate(|t: f64| (t * (1.0 - t)).powf(q), 0.0, 0.5, tol)
}
