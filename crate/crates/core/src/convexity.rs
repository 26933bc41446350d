//! Sampled certification of strong φ_h-convexity with modulus `c`:
//!
//! ```text
//! g(tφ(x) + (1−t)φ(y)) ≤ h(t)g(φ(x)) + h(1−t)g(φ(y)) − c·t(1−t)(φ(x) − φ(y))²
//! ```
//!
//! for x, y in the domain of φ and t ∈ (0, 1). A certificate is evidence
//! gathered on a deterministic lattice plus seeded random triples. It is a
//! necessary-condition check, not a proof: a passing certificate only says
//! that no sampled triple violates the inequality beyond the slack.

use rand::distributions::{Distribution, Open01};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::funcspace::{DifferentiableFunction, HFunction, PhiMap};

/// Lattice points per spatial axis.
pub const GRID_XY: usize = 21;
/// Interior lattice points on the t axis: t = k/20, k = 1..19.
pub const GRID_T: usize = 19;
/// Relative slack applied to the sampled magnitude of g∘φ.
pub const RELATIVE_SLACK: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleTriple {
    pub x: f64,
    pub y: f64,
    pub t: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvexityCertificate {
    pub holds: bool,
    /// Largest sampled value of LHS − RHS.
    pub max_violation: f64,
    pub worst_point: SampleTriple,
    pub samples_used: usize,
    pub seed: u64,
    pub modulus: f64,
    pub slack: f64,
    /// max |g∘φ| over the sampled points.
    pub scale: f64,
    /// Whether every sampled g∘φ was ≥ 0. Reported, not required.
    pub nonnegative_range: bool,
    pub function: String,
    pub phi: String,
    pub h: String,
}

/// The lattice followed by `samples` random triples drawn from `seed`.
pub fn sample_triples(phi: &PhiMap, samples: usize, seed: u64) -> Vec<SampleTriple> {
    let dom = phi.domain();
    let xs: Vec<f64> = dom.grid(GRID_XY).collect();
    let mut out = Vec::with_capacity(GRID_XY * GRID_XY * GRID_T + samples);
    for &x in &xs {
        for &y in &xs {
            for k in 1..=GRID_T {
                let t = k as f64 / (GRID_T + 1) as f64;
                out.push(SampleTriple { x, y, t });
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let x = rng.gen_range(dom.a()..=dom.b());
        let y = rng.gen_range(dom.a()..=dom.b());
        let t: f64 = Open01.sample(&mut rng);
        out.push(SampleTriple { x, y, t });
    }
    out
}

/// Terms of the convexity inequality at one triple.
#[derive(Clone, Copy, Debug)]
struct Terms {
    /// g at the convex combination.
    lhs: f64,
    /// h(t)g(φx) + h(1−t)g(φy)
    chord: f64,
    /// t(1−t)(φx − φy)²
    weight: f64,
    /// magnitude of the summed terms, for rounding estimates
    size: f64,
    gx: f64,
    gy: f64,
}

fn terms(g: &DifferentiableFunction, phi: &PhiMap, h: &HFunction, s: SampleTriple) -> Result<Terms> {
    let (px, py) = (phi.eval(s.x), phi.eval(s.y));
    let m = s.t * px + (1.0 - s.t) * py;
    let gx = g.eval_checked(px)?;
    let gy = g.eval_checked(py)?;
    let gm = g.eval_checked(m)?;
    let (ht, hr) = (h.eval(s.t), h.eval_reflected(s.t));
    let a = ht * gx;
    let b = hr * gy;
    Ok(Terms {
        lhs: gm,
        chord: a + b,
        weight: s.t * (1.0 - s.t) * (px - py) * (px - py),
        size: gm.abs() + a.abs() + b.abs(),
        gx,
        gy,
    })
}

/// d(x, y, t; c) = g(tφx+(1−t)φy) − h(t)g(φx) − h(1−t)g(φy) + c·t(1−t)(φx−φy)².
pub fn defect(
    g: &DifferentiableFunction,
    phi: &PhiMap,
    h: &HFunction,
    c: f64,
    at: SampleTriple,
) -> Result<f64> {
    let tm = terms(g, phi, h, at)?;
    Ok(tm.lhs - tm.chord + c * tm.weight)
}

fn check_modulus(c: f64) -> Result<()> {
    if c.is_finite() && c >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParams {
            family: "certify".into(),
            reason: format!("modulus c = {c} must be finite and >= 0"),
        })
    }
}

pub fn certify(
    g: &DifferentiableFunction,
    phi: &PhiMap,
    h: &HFunction,
    c: f64,
    samples: usize,
    seed: u64,
) -> Result<ConvexityCertificate> {
    check_modulus(c)?;
    let triples = sample_triples(phi, samples, seed);
    let mut worst = (f64::NEG_INFINITY, triples[0]);
    let mut scale = 0.0f64;
    let mut nonnegative = true;
    for &s in &triples {
        let tm = terms(g, phi, h, s)?;
        scale = scale.max(tm.gx.abs()).max(tm.gy.abs()).max(tm.lhs.abs());
        nonnegative &= tm.gx >= 0.0 && tm.gy >= 0.0 && tm.lhs >= 0.0;
        let d = tm.lhs - tm.chord + c * tm.weight;
        if d > worst.0 {
            worst = (d, s);
        }
    }
    let slack = RELATIVE_SLACK * scale;
    Ok(ConvexityCertificate {
        holds: worst.0 <= slack,
        max_violation: worst.0,
        worst_point: worst.1,
        samples_used: triples.len(),
        seed,
        modulus: c,
        slack,
        scale,
        nonnegative_range: nonnegative,
        function: g.label().to_string(),
        phi: phi.label().to_string(),
        h: h.label().to_string(),
    })
}

/// Largest modulus the sampled triples admit, clamped below at 0.
///
/// Triples whose ratio is dominated by rounding (tiny `t(1−t)(φx−φy)²`
/// against the magnitude of the terms) are left out of the minimum; at such
/// triples the defect is itself at rounding level.
pub fn max_modulus(
    g: &DifferentiableFunction,
    phi: &PhiMap,
    h: &HFunction,
    samples: usize,
    seed: u64,
) -> Result<f64> {
    let triples = sample_triples(phi, samples, seed);
    let all: Vec<Terms> = triples
        .iter()
        .map(|&s| terms(g, phi, h, s))
        .collect::<Result<_>>()?;

    let scale = all
        .iter()
        .fold(0.0f64, |m, tm| m.max(tm.gx.abs()).max(tm.gy.abs()).max(tm.lhs.abs()));
    let width = phi.domain().width();
    // modulus resolution demanded of a ratio before it is trusted
    let resolution = 1e-9 * (scale / (width * width)).max(1.0);

    let mut best: Option<f64> = None;
    let mut any_distinct = false;
    for tm in &all {
        if tm.weight <= 0.0 {
            continue;
        }
        any_distinct = true;
        let noise = 8.0 * f64::EPSILON * tm.size;
        if noise > resolution * tm.weight {
            continue;
        }
        let ratio = (tm.chord - tm.lhs) / tm.weight;
        best = Some(best.map_or(ratio, |b: f64| b.min(ratio)));
    }
    if !any_distinct {
        return Err(Error::DegeneratePhi);
    }
    // every distinct pair was below rounding resolution
    let best = best.ok_or(Error::DegeneratePhi)?;
    Ok(best.max(0.0))
}
