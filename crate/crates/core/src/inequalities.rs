//! Both sides of the Hermite–Hadamard type identities and inequalities.
//!
//! Notation: for a warp map φ on `[a, b]` write `φa = φ(a)`, `φb = φ(b)`,
//! `Δφ = φb − φa`, and `mean = (1/Δφ)∫_{φa}^{φb} f`. The trapezoid-side
//! bounds control `|(f(φa) + f(φb))/2 − mean|`, the midpoint-side bounds
//! control `|mean − f((φa + φb)/2)|`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize};

use crate::convexity::ConvexityCertificate;
use crate::error::{Error, Result};
use crate::funcspace::{
    make_builtin_h, DifferentiableFunction, HFamily, HFunction, Interval, PhiMap, StrongParams,
};
use crate::quadrature::{beta, incomplete_beta_half, integrate, integrate_open};

/// Multiplier on the quadrature tolerance used for every numerical verdict.
pub const VERDICT_FACTOR: f64 = 10.0;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HhGaps {
    /// mean − f(midpoint)
    pub left_gap: f64,
    /// (f(left) + f(right))/2 − mean
    pub right_gap: f64,
}

/// The two sides of an integral identity.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
}

impl IdentityCheck {
    fn new(lhs: f64, rhs: f64) -> Self {
        Self {
            lhs,
            rhs,
            residual: lhs - rhs,
        }
    }
}

/// Integral mean of `f` between two points given in either order.
fn integral_mean(f: &DifferentiableFunction, from: f64, to: f64, tol: f64) -> Result<f64> {
    let (lo, hi) = if from < to { (from, to) } else { (to, from) };
    let r = integrate(|x| f.eval(x), lo, hi, tol)?;
    Ok(r.value / (hi - lo))
}

fn nonzero_delta(phi: &PhiMap) -> Result<f64> {
    let d = phi.delta();
    if d == 0.0 {
        Err(Error::Precondition(format!("{}: phi(a) = phi(b)", phi.label())))
    } else {
        Ok(d)
    }
}

fn gaps_on(f: &DifferentiableFunction, lo: f64, hi: f64, tol: f64) -> Result<HhGaps> {
    let mean = integral_mean(f, lo, hi, tol)?;
    let mid = f.eval_checked(0.5 * (lo + hi))?;
    let ends = 0.5 * (f.eval_checked(lo)? + f.eval_checked(hi)?);
    Ok(HhGaps {
        left_gap: mean - mid,
        right_gap: ends - mean,
    })
}

/// Classical Hermite–Hadamard gaps on `iv`.
pub fn hh_classical_gap(f: &DifferentiableFunction, iv: Interval, tol: f64) -> Result<HhGaps> {
    gaps_on(f, iv.a(), iv.b(), tol)
}

/// Hermite–Hadamard gaps on `[φ(a), φ(b)]`.
pub fn hh_phi_gap(f: &DifferentiableFunction, phi: &PhiMap, tol: f64) -> Result<HhGaps> {
    phi.require_increasing()?;
    gaps_on(f, phi.at_a(), phi.at_b(), tol)
}

/// Trapezoid-side identity: the endpoint average minus the mean equals
/// `(Δφ/2)∫₀¹(2t−1)[f′(tφb + (1−t)φa) + c·t(1−t)Δφ²]dt`.
pub fn lemma1_residual(
    f: &DifferentiableFunction,
    phi: &PhiMap,
    c: f64,
    tol: f64,
) -> Result<IdentityCheck> {
    let delta = nonzero_delta(phi)?;
    let (pa, pb) = (phi.at_a(), phi.at_b());
    let lhs = 0.5 * (f.eval_checked(pa)? + f.eval_checked(pb)?) - integral_mean(f, pa, pb, tol)?;
    let strong = c * delta * delta;
    let kernel = |t: f64| {
        (2.0 * t - 1.0) * (f.derivative(t * pb + (1.0 - t) * pa) + strong * t * (1.0 - t))
    };
    let rhs = 0.5 * delta * integrate(kernel, 0.0, 1.0, tol)?.value;
    Ok(IdentityCheck::new(lhs, rhs))
}

/// Midpoint-side identity: the mean minus the midpoint value equals
/// `Δφ[∫₀^{1/2} t·K(t)dt + ∫_{1/2}^1 (t−1)·K(t)dt]` with
/// `K(t) = f′(tφa + (1−t)φb) + c·t(1−t)Δφ²`.
pub fn lemma2_residual(
    f: &DifferentiableFunction,
    phi: &PhiMap,
    c: f64,
    tol: f64,
) -> Result<IdentityCheck> {
    let delta = nonzero_delta(phi)?;
    let (pa, pb) = (phi.at_a(), phi.at_b());
    let lhs = integral_mean(f, pa, pb, tol)? - f.eval_checked(0.5 * (pa + pb))?;
    let strong = c * delta * delta;
    let k = |t: f64| f.derivative(t * pa + (1.0 - t) * pb) + strong * t * (1.0 - t);
    let first = integrate(|t| t * k(t), 0.0, 0.5, 0.5 * tol)?.value;
    let second = integrate(|t| (t - 1.0) * k(t), 0.5, 1.0, 0.5 * tol)?.value;
    Ok(IdentityCheck::new(lhs, delta * (first + second)))
}

/// |(f(φa) + f(φb))/2 − mean|
pub fn trapezoid_defect(f: &DifferentiableFunction, phi: &PhiMap, tol: f64) -> Result<f64> {
    Ok(hh_phi_gap(f, phi, tol)?.right_gap.abs())
}

/// |mean − f((φa + φb)/2)|
pub fn midpoint_defect(f: &DifferentiableFunction, phi: &PhiMap, tol: f64) -> Result<f64> {
    Ok(hh_phi_gap(f, phi, tol)?.left_gap.abs())
}

/// ∫₀¹ |2t−1| h(t) dt
pub fn abs_linear_moment(h: &HFunction, tol: f64) -> Result<f64> {
    h.require_integrable()?;
    Ok(integrate_open(|t| (2.0 * t - 1.0).abs() * h.eval(t), 0.0, 1.0, tol)?.value)
}

/// ∫₀¹ h(t) dt
pub fn h_integral(h: &HFunction, tol: f64) -> Result<f64> {
    h.require_integrable()?;
    Ok(integrate_open(|t| h.eval(t), 0.0, 1.0, tol)?.value)
}

/// ∫₀^{1/2} t[h(t) + h(1−t)] dt
pub fn midpoint_moment(h: &HFunction, tol: f64) -> Result<f64> {
    h.require_integrable()?;
    Ok(integrate_open(|t| t * (h.eval(t) + h.eval_reflected(t)), 0.0, 0.5, tol)?.value)
}

/// Half-interval integrals of h and of its reflection.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HalfMoments {
    /// ∫₀^{1/2} h(t) dt
    pub lower: f64,
    /// ∫₀^{1/2} h(1−t) dt
    pub lower_reflected: f64,
    /// ∫_{1/2}^1 h(t) dt
    pub upper: f64,
    /// ∫_{1/2}^1 h(1−t) dt
    pub upper_reflected: f64,
}

pub fn half_moments(h: &HFunction, tol: f64) -> Result<HalfMoments> {
    h.require_integrable()?;
    let part = |g: &dyn Fn(f64) -> f64, lo: f64, hi: f64| -> Result<f64> {
        Ok(integrate_open(g, lo, hi, tol)?.value)
    };
    Ok(HalfMoments {
        lower: part(&|t| h.eval(t), 0.0, 0.5)?,
        lower_reflected: part(&|t| h.eval_reflected(t), 0.0, 0.5)?,
        upper: part(&|t| h.eval(t), 0.5, 1.0)?,
        upper_reflected: part(&|t| h.eval_reflected(t), 0.5, 1.0)?,
    })
}

/// |f′(φa)| and |f′(φb)|.
fn endpoint_slopes(f: &DifferentiableFunction, phi: &PhiMap) -> (f64, f64) {
    (
        f.derivative(phi.at_a()).abs(),
        f.derivative(phi.at_b()).abs(),
    )
}

/// Constants of the Hölder-type bounds.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundConstants {
    pub a: Option<f64>,
    pub g: Option<f64>,
    /// G with the modulus raised to q, as it appears inside the derivation.
    pub g_proof_variant: Option<f64>,
    pub delta_phi: f64,
}

/// A = c^q·Δφ^{2q}·B(q+1, q+1) − (c/6)·Δφ²
pub fn constant_a(params: &StrongParams, delta: f64) -> Result<f64> {
    let StrongParams { c, q, .. } = *params;
    Ok(c.powf(q) * delta.powf(2.0 * q) * beta(q + 1.0, q + 1.0)? - c / 6.0 * delta * delta)
}

/// G = c·Δφ^{2q}·B_{1/2}(q+1, q+1) − (c/12)·Δφ²
pub fn constant_g(params: &StrongParams, delta: f64) -> Result<f64> {
    let StrongParams { c, q, .. } = *params;
    Ok(c * delta.powf(2.0 * q) * incomplete_beta_half(q)? - c / 12.0 * delta * delta)
}

/// G with c^q in place of c.
pub fn constant_g_proof(params: &StrongParams, delta: f64) -> Result<f64> {
    let StrongParams { c, q, .. } = *params;
    Ok(c.powf(q) * delta.powf(2.0 * q) * incomplete_beta_half(q)? - c / 12.0 * delta * delta)
}

fn require_positive_constant(name: &str, value: f64, c: f64) -> Result<()> {
    if c > 0.0 && !(value > 0.0) {
        Err(Error::Precondition(format!(
            "constant {name} = {value} must be positive when c = {c} > 0"
        )))
    } else {
        Ok(())
    }
}

/// (1/(p+1))^{1/p}
fn holder_factor(params: &StrongParams) -> f64 {
    (1.0 / (params.p + 1.0)).powf(1.0 / params.p)
}

/// Trapezoid-side bound for |f′| strongly φ_h-convex:
/// `(Δφ/2)(|f′(φb)| + |f′(φa)|)∫₀¹|2t−1|h(t)dt`.
pub fn thm1_bound(f: &DifferentiableFunction, phi: &PhiMap, h: &HFunction, tol: f64) -> Result<f64> {
    h.require_integrable()?;
    let delta = phi.require_increasing()?;
    let (da, db) = endpoint_slopes(f, phi);
    Ok(0.5 * delta * (db + da) * abs_linear_moment(h, tol)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Thm2Bound {
    pub bound: f64,
    pub constants: BoundConstants,
}

/// Trapezoid-side bound for |f′|^q strongly φ_h-convex.
pub fn thm2_bound(
    f: &DifferentiableFunction,
    phi: &PhiMap,
    h: &HFunction,
    params: &StrongParams,
    tol: f64,
) -> Result<Thm2Bound> {
    h.require_integrable()?;
    let delta = phi.require_increasing()?;
    let a = constant_a(params, delta)?;
    require_positive_constant("A", a, params.c)?;
    let q = params.q;
    let (da, db) = endpoint_slopes(f, phi);
    let bracket = (db.powf(q) + da.powf(q)) * h_integral(h, tol)? + a;
    let bound = delta / 2f64.powf(1.0 / q) * holder_factor(params) * bracket.powf(1.0 / q);
    Ok(Thm2Bound {
        bound,
        constants: BoundConstants {
            a: Some(a),
            g: None,
            g_proof_variant: None,
            delta_phi: delta,
        },
    })
}

/// Midpoint-side bound for |f′| strongly φ_h-convex:
/// `Δφ(|f′(φa)| + |f′(φb)|)∫₀^{1/2} t[h(t) + h(1−t)]dt`.
pub fn thm3_bound(f: &DifferentiableFunction, phi: &PhiMap, h: &HFunction, tol: f64) -> Result<f64> {
    h.require_integrable()?;
    let delta = phi.require_increasing()?;
    let (da, db) = endpoint_slopes(f, phi);
    Ok(delta * (da + db) * midpoint_moment(h, tol)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Thm4Bound {
    /// Prefactor Δφ/2^{1/q} with the linear-in-c constant G.
    pub bound_printed: f64,
    /// Prefactor Δφ/2 with the c^q constant; NaN when a bracket is negative.
    pub bound_proof: f64,
    /// Lower and upper half brackets entering `bound_printed`.
    pub brackets: [f64; 2],
    pub constants: BoundConstants,
}

impl Thm4Bound {
    /// The looser of the two reported bounds.
    pub fn loosest(&self) -> f64 {
        self.bound_printed.max(self.bound_proof)
    }
}

fn root_or_nan(x: f64, q: f64) -> f64 {
    if x >= 0.0 {
        x.powf(1.0 / q)
    } else {
        f64::NAN
    }
}

/// Midpoint-side bound for |f′|^q strongly φ_h-convex, reported with both
/// prefactor/constant variants.
pub fn thm4_bound(
    f: &DifferentiableFunction,
    phi: &PhiMap,
    h: &HFunction,
    params: &StrongParams,
    tol: f64,
) -> Result<Thm4Bound> {
    h.require_integrable()?;
    let delta = phi.require_increasing()?;
    let g = constant_g(params, delta)?;
    require_positive_constant("G", g, params.c)?;
    let g_proof = constant_g_proof(params, delta)?;
    let q = params.q;
    let (da, db) = endpoint_slopes(f, phi);
    let (aq, bq) = (da.powf(q), db.powf(q));
    let m = half_moments(h, tol)?;
    let base0 = m.lower * aq + m.lower_reflected * bq;
    let base1 = m.upper * aq + m.upper_reflected * bq;
    let hf = holder_factor(params);

    let printed = [base0 + g, base1 + g];
    let bound_printed =
        delta / 2f64.powf(1.0 / q) * hf * (root_or_nan(printed[0], q) + root_or_nan(printed[1], q));
    let bound_proof = 0.5
        * delta
        * hf
        * (root_or_nan(base0 + g_proof, q) + root_or_nan(base1 + g_proof, q));

    Ok(Thm4Bound {
        bound_printed,
        bound_proof,
        brackets: printed,
        constants: BoundConstants {
            a: None,
            g: Some(g),
            g_proof_variant: Some(g_proof),
            delta_phi: delta,
        },
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Theorem {
    Trapezoid,
    TrapezoidHolder,
    Midpoint,
    MidpointHolder,
}

/// Special cases of the four bounds for h(t) = t, t^s and 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CorollaryId {
    C1,
    C2,
    C3,
    K1,
    K2,
    K3,
    C4,
    C5,
    C6,
    R10,
    R20,
    R30,
}

impl CorollaryId {
    pub const ALL: [CorollaryId; 12] = [
        Self::C1,
        Self::C2,
        Self::C3,
        Self::K1,
        Self::K2,
        Self::K3,
        Self::C4,
        Self::C5,
        Self::C6,
        Self::R10,
        Self::R20,
        Self::R30,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Self::C1 => "c1",
            Self::C2 => "c2",
            Self::C3 => "c3",
            Self::K1 => "k1",
            Self::K2 => "k2",
            Self::K3 => "k3",
            Self::C4 => "c4",
            Self::C5 => "c5",
            Self::C6 => "c6",
            Self::R10 => "r10",
            Self::R20 => "r20",
            Self::R30 => "r30",
        }
    }

    pub fn theorem(&self) -> Theorem {
        use CorollaryId::*;
        match self {
            C1 | C2 | C3 => Theorem::Trapezoid,
            K1 | K2 | K3 => Theorem::TrapezoidHolder,
            C4 | C5 | C6 => Theorem::Midpoint,
            R10 | R20 | R30 => Theorem::MidpointHolder,
        }
    }

    pub fn h_family(&self) -> HFamily {
        use CorollaryId::*;
        match self {
            C1 | K1 | C4 | R10 => HFamily::HLinear,
            C2 | K2 | C5 | R20 => HFamily::HPower,
            C3 | K3 | C6 | R30 => HFamily::HOne,
        }
    }

    /// The weight the corollary specialises to.
    pub fn builtin_h(&self, s: f64) -> Result<HFunction> {
        match self.h_family() {
            HFamily::HPower => make_builtin_h(HFamily::HPower, Some(s)),
            fam => make_builtin_h(fam, None),
        }
    }

    pub fn uses_holder(&self) -> bool {
        matches!(
            self.theorem(),
            Theorem::TrapezoidHolder | Theorem::MidpointHolder
        )
    }
}

impl fmt::Display for CorollaryId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CorollaryId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| Error::UnknownFamily(s.to_string()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorollaryParams {
    pub strong: StrongParams,
    /// Exponent of h(t) = t^s for the s-dependent corollaries.
    pub s: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorollaryEval {
    pub id: CorollaryId,
    pub printed_value: f64,
    pub theorem_value: f64,
    pub discrepancy: f64,
}

impl CorollaryEval {
    /// Whether the closed form disagrees with the parent theorem beyond
    /// numerical noise.
    pub fn flagged(&self, quad_tol: f64) -> bool {
        discrepancy_flagged(self.discrepancy, self.theorem_value, quad_tol)
    }
}

pub fn discrepancy_flagged(discrepancy: f64, reference: f64, quad_tol: f64) -> bool {
    discrepancy.abs() > VERDICT_FACTOR * quad_tol * reference.abs().max(1.0)
}

/// Evaluates a corollary twice: by its closed-form constant and through the
/// parent bound with the corresponding builtin weight.
pub fn corollary_bound(
    id: CorollaryId,
    f: &DifferentiableFunction,
    phi: &PhiMap,
    params: &CorollaryParams,
    tol: f64,
) -> Result<CorollaryEval> {
    let h = id.builtin_h(params.s)?;
    let theorem_value = match id.theorem() {
        Theorem::Trapezoid => thm1_bound(f, phi, &h, tol)?,
        Theorem::TrapezoidHolder => thm2_bound(f, phi, &h, &params.strong, tol)?.bound,
        Theorem::Midpoint => thm3_bound(f, phi, &h, tol)?,
        Theorem::MidpointHolder => thm4_bound(f, phi, &h, &params.strong, tol)?.bound_printed,
    };
    let printed_value = printed_corollary(id, f, phi, params)?;
    Ok(CorollaryEval {
        id,
        printed_value,
        theorem_value,
        discrepancy: printed_value - theorem_value,
    })
}

/// Closed-form right-hand sides exactly as stated for each special weight.
fn printed_corollary(
    id: CorollaryId,
    f: &DifferentiableFunction,
    phi: &PhiMap,
    params: &CorollaryParams,
) -> Result<f64> {
    use CorollaryId::*;
    let delta = phi.require_increasing()?;
    let (da, db) = endpoint_slopes(f, phi);
    let s = params.s;
    let StrongParams { q, p, .. } = params.strong;
    let (aq, bq) = (da.powf(q), db.powf(q));
    let lead = delta / 2f64.powf(1.0 / q) * (1.0 / (p + 1.0)).powf(1.0 / p);

    let value = match id {
        C1 => delta * (db + da) / 8.0,
        C2 => {
            0.5 * delta * (s + 1.0 / 2f64.powf(s + 1.0)) * (db + da) / ((s + 1.0) * (s + 2.0))
        }
        C3 => 0.5 * delta * (db + da) / 2.0,
        K1 | K2 | K3 => {
            let a = constant_a(&params.strong, delta)?;
            require_positive_constant("A", a, params.strong.c)?;
            let weight = match id {
                K1 => 0.5,
                K2 => 1.0 / (s + 1.0),
                _ => 1.0,
            };
            lead * ((bq + aq) * weight + a).powf(1.0 / q)
        }
        C4 => delta * (da + db) / 8.0,
        C5 => delta * (1.0 + (s + 3.0) / 2f64.powf(s + 2.0)) * (da + db) / ((s + 1.0) * (s + 2.0)),
        C6 => delta * (da + db) / 4.0,
        R10 => {
            let g = constant_g(&params.strong, delta)?;
            require_positive_constant("G", g, params.strong.c)?;
            lead * (((aq + 3.0 * bq) / 8.0 + g).powf(1.0 / q)
                + ((3.0 * aq + bq) / 8.0 + g).powf(1.0 / q))
        }
        R20 => {
            let g = constant_g(&params.strong, delta)?;
            require_positive_constant("G", g, params.strong.c)?;
            let near = 1.0 / (2f64.powf(s + 1.0) * (s + 1.0));
            let far = (1.0 - 1.0 / 2f64.powf(s + 1.0)) / (s + 1.0);
            lead * ((near * aq + far * bq + g).powf(1.0 / q) + (far * aq + near * bq + g).powf(1.0 / q))
        }
        R30 => {
            let g = constant_g(&params.strong, delta)?;
            require_positive_constant("G", g, params.strong.c)?;
            delta / 2f64.powf(1.0 / q - 1.0)
                * (1.0 / (p + 1.0)).powf(1.0 / p)
                * ((bq + aq) / 2.0 + g).powf(1.0 / q)
        }
    };
    Ok(value)
}

/// Tolerances a verdict was reached with.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub quad_tol: f64,
    pub slack: f64,
}

fn nan_if_null<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
    Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::NAN))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Passed,
    Failed,
    PreconditionSkip,
}

/// One inequality or identity check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationRecord {
    pub case_label: String,
    pub check: String,
    #[serde(deserialize_with = "nan_if_null")]
    pub lhs: f64,
    #[serde(deserialize_with = "nan_if_null")]
    pub bound: f64,
    pub holds: bool,
    #[serde(deserialize_with = "nan_if_null")]
    pub margin: f64,
    pub preconditions_ok: bool,
    pub reason: String,
    pub certificate: Option<ConvexityCertificate>,
    pub tolerances: Tolerances,
    pub discrepancy: Option<f64>,
    pub approximate_derivative: bool,
    pub seed: u64,
}

impl VerificationRecord {
    /// A record whose preconditions hold; `holds` is `lhs ≤ bound + slack`.
    pub fn evaluated(
        case_label: impl Into<String>,
        check: impl Into<String>,
        lhs: f64,
        bound: f64,
        tolerances: Tolerances,
    ) -> Self {
        Self {
            case_label: case_label.into(),
            check: check.into(),
            lhs,
            bound,
            holds: lhs <= bound + tolerances.slack,
            margin: bound - lhs,
            preconditions_ok: true,
            reason: String::new(),
            certificate: None,
            tolerances,
            discrepancy: None,
            approximate_derivative: false,
            seed: 0,
        }
    }

    pub fn skipped(
        case_label: impl Into<String>,
        check: impl Into<String>,
        reason: impl Into<String>,
        tolerances: Tolerances,
    ) -> Self {
        Self {
            case_label: case_label.into(),
            check: check.into(),
            lhs: f64::NAN,
            bound: f64::NAN,
            holds: false,
            margin: f64::NAN,
            preconditions_ok: false,
            reason: reason.into(),
            certificate: None,
            tolerances,
            discrepancy: None,
            approximate_derivative: false,
            seed: 0,
        }
    }

    /// A check whose preconditions held but whose evaluation failed.
    pub fn errored(
        case_label: impl Into<String>,
        check: impl Into<String>,
        reason: impl Into<String>,
        tolerances: Tolerances,
    ) -> Self {
        Self {
            preconditions_ok: true,
            ..Self::skipped(case_label, check, reason, tolerances)
        }
    }

    pub fn with_certificate(mut self, cert: Option<ConvexityCertificate>) -> Self {
        self.certificate = cert;
        self
    }

    pub fn with_discrepancy(mut self, d: Option<f64>) -> Self {
        self.discrepancy = d;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_approximate_derivative(mut self, approximate: bool) -> Self {
        self.approximate_derivative = approximate;
        self
    }

    pub fn status(&self) -> Status {
        match (self.preconditions_ok, self.holds) {
            (false, _) => Status::PreconditionSkip,
            (true, true) => Status::Passed,
            (true, false) => Status::Failed,
        }
    }
}
