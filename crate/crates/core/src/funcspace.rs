//! Scalar functions, warp maps and weight functions.
//!
//! Every value here is immutable after construction and cheap to clone: the
//! underlying closures sit behind `Arc`, so functions can be shared across
//! threads and evaluated concurrently.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Shared real-valued closure.
pub type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Number of equispaced points used for range and positivity checks.
pub const CHECK_GRID: usize = 1001;

/// A closed interval `[a, b]` with finite endpoints and `a < b`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 2]", into = "[f64; 2]")]
pub struct Interval {
    a: f64,
    b: f64,
}

impl Interval {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if a.is_finite() && b.is_finite() && a < b {
            Ok(Self { a, b })
        } else {
            Err(Error::InvalidInterval { a, b })
        }
    }

    pub fn unit() -> Self {
        Self { a: 0.0, b: 1.0 }
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn width(&self) -> f64 {
        self.b - self.a
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.a + self.b)
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.a && x <= self.b
    }

    /// `n` equispaced points covering both endpoints.
    pub fn grid(&self, n: usize) -> impl Iterator<Item = f64> + '_ {
        let last = n.saturating_sub(1).max(1) as f64;
        (0..n).map(move |i| {
            if i + 1 == n {
                self.b
            } else {
                self.a + self.width() * (i as f64 / last)
            }
        })
    }
}

impl TryFrom<[f64; 2]> for Interval {
    type Error = Error;

    fn try_from(v: [f64; 2]) -> Result<Self> {
        Interval::new(v[0], v[1])
    }
}

impl From<Interval> for [f64; 2] {
    fn from(iv: Interval) -> Self {
        [iv.a, iv.b]
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.a, self.b)
    }
}

/// Default central-difference step at `x`.
pub fn default_step(x: f64) -> f64 {
    1e-6 * x.abs().max(1.0)
}

/// A scalar function on an interval, optionally carrying its analytic derivative.
///
/// When no derivative is attached, [`DifferentiableFunction::derivative`] falls
/// back to finite differences and [`DifferentiableFunction::has_analytic_derivative`]
/// reports `false` so consumers can flag the result as approximate.
#[derive(Clone)]
pub struct DifferentiableFunction {
    eval: RealFn,
    deriv: Option<RealFn>,
    domain: Interval,
    label: String,
}

impl DifferentiableFunction {
    pub fn new(
        label: impl Into<String>,
        domain: Interval,
        eval: RealFn,
        deriv: Option<RealFn>,
    ) -> Self {
        Self {
            eval,
            deriv,
            domain,
            label: label.into(),
        }
    }

    pub fn from_fn<F>(label: impl Into<String>, domain: Interval, eval: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self::new(label, domain, Arc::new(eval), None)
    }

    pub fn with_derivative<F, D>(label: impl Into<String>, domain: Interval, eval: F, deriv: D) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
        D: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self::new(label, domain, Arc::new(eval), Some(Arc::new(deriv)))
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn domain(&self) -> Interval {
        self.domain
    }

    pub fn has_analytic_derivative(&self) -> bool {
        self.deriv.is_some()
    }

    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        (self.eval)(x)
    }

    /// Evaluates and rejects non-finite values.
    pub fn eval_checked(&self, x: f64) -> Result<f64> {
        let v = self.eval(x);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::Evaluation {
                label: self.label.clone(),
                x,
            })
        }
    }

    /// f'(x): analytic when available, otherwise a second-order finite
    /// difference that stays inside the domain near the endpoints.
    pub fn derivative(&self, x: f64) -> f64 {
        if let Some(d) = &self.deriv {
            return d(x);
        }
        let h = default_step(x);
        let (a, b) = (self.domain.a, self.domain.b);
        if x - h < a {
            (-3.0 * self.eval(x) + 4.0 * self.eval(x + h) - self.eval(x + 2.0 * h)) / (2.0 * h)
        } else if x + h > b {
            (3.0 * self.eval(x) - 4.0 * self.eval(x - h) + self.eval(x - 2.0 * h)) / (2.0 * h)
        } else {
            (self.eval(x + h) - self.eval(x - h)) / (2.0 * h)
        }
    }

    /// The function x ↦ |f'(x)|^q, used as the convexity hypothesis of the
    /// derivative-based bounds. It carries no analytic derivative.
    pub fn abs_derivative_pow(&self, q: f64) -> DifferentiableFunction {
        let inner = self.clone();
        let label = if q == 1.0 {
            format!("|{}'|", self.label)
        } else {
            format!("|{}'|^{}", self.label, q)
        };
        DifferentiableFunction::from_fn(label, self.domain, move |x| inner.derivative(x).abs().powf(q))
    }

    /// Checks finiteness on the [`CHECK_GRID`] grid.
    pub fn check_finite(&self) -> Result<()> {
        for x in self.domain.grid(CHECK_GRID) {
            self.eval_checked(x)?;
        }
        Ok(())
    }
}

impl fmt::Debug for DifferentiableFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DifferentiableFunction")
            .field("label", &self.label)
            .field("domain", &self.domain)
            .field("analytic_derivative", &self.deriv.is_some())
            .finish()
    }
}

/// Central difference `(f(x+step) − f(x−step)) / (2·step)`.
pub fn numeric_derivative(f: &DifferentiableFunction, x: f64, step: f64) -> Result<f64> {
    if !(step > 0.0) || !step.is_finite() {
        return Err(Error::InvalidParams {
            family: "numeric_derivative".into(),
            reason: format!("step must be positive, got {step}"),
        });
    }
    let dom = f.domain();
    for p in [x - step, x + step] {
        if !dom.contains(p) {
            return Err(Error::Evaluation {
                label: f.label().to_string(),
                x: p,
            });
        }
    }
    Ok((f.eval_checked(x + step)? - f.eval_checked(x - step)?) / (2.0 * step))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FunctionFamily {
    /// Polynomial with coefficients in increasing degree.
    Poly,
    /// `amp · e^{kx}` with params `[k]` or `[k, amp]`.
    ExpScale,
    /// `|x|^r + p(x)` with params `[r, c0, c1, ...]`, the polynomial tail optional.
    AbsPower,
}

impl FromStr for FunctionFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "poly" => Ok(Self::Poly),
            "exp_scale" => Ok(Self::ExpScale),
            "abs_power" => Ok(Self::AbsPower),
            other => Err(Error::UnknownFamily(other.to_string())),
        }
    }
}

fn invalid(family: &str, reason: impl Into<String>) -> Error {
    Error::InvalidParams {
        family: family.to_string(),
        reason: reason.into(),
    }
}

fn check_params_finite(family: &str, params: &[f64]) -> Result<()> {
    if params.iter().all(|p| p.is_finite()) {
        Ok(())
    } else {
        Err(invalid(family, "parameters must be finite"))
    }
}

fn horner(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

fn horner_deriv(coeffs: &[f64], x: f64) -> f64 {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .rev()
        .fold(0.0, |acc, (i, &c)| acc * x + i as f64 * c)
}

fn poly_label(coeffs: &[f64]) -> String {
    let terms: Vec<String> = coeffs
        .iter()
        .enumerate()
        .filter(|(_, &c)| c != 0.0)
        .map(|(i, c)| match i {
            0 => format!("{c}"),
            1 => format!("{c}x"),
            _ => format!("{c}x^{i}"),
        })
        .collect();
    if terms.is_empty() {
        "0".to_string()
    } else {
        terms.join("+")
    }
}

/// Builds one of the parametric function families with its analytic derivative.
pub fn make_builtin_function(
    family: FunctionFamily,
    params: &[f64],
    domain: Interval,
) -> Result<DifferentiableFunction> {
    match family {
        FunctionFamily::Poly => {
            check_params_finite("poly", params)?;
            if params.is_empty() {
                return Err(invalid("poly", "at least one coefficient is required"));
            }
            let c = params.to_vec();
            let d = params.to_vec();
            Ok(DifferentiableFunction::with_derivative(
                format!("poly({})", poly_label(params)),
                domain,
                move |x| horner(&c, x),
                move |x| horner_deriv(&d, x),
            ))
        }
        FunctionFamily::ExpScale => {
            check_params_finite("exp_scale", params)?;
            let (k, amp) = match params {
                [k] => (*k, 1.0),
                [k, amp] => (*k, *amp),
                _ => return Err(invalid("exp_scale", "expected [k] or [k, amp]")),
            };
            let label = if amp == 1.0 {
                format!("exp({k}x)")
            } else {
                format!("{amp}exp({k}x)")
            };
            Ok(DifferentiableFunction::with_derivative(
                label,
                domain,
                move |x| amp * (k * x).exp(),
                move |x| amp * k * (k * x).exp(),
            ))
        }
        FunctionFamily::AbsPower => {
            check_params_finite("abs_power", params)?;
            let Some((&r, tail)) = params.split_first() else {
                return Err(invalid("abs_power", "expected [r, c0, c1, ...]"));
            };
            if r < 1.0 {
                return Err(invalid(
                    "abs_power",
                    format!("exponent r = {r} < 1 has an unbounded derivative at 0"),
                ));
            }
            let label = if tail.iter().all(|&c| c == 0.0) {
                format!("|x|^{r}")
            } else {
                format!("|x|^{r}+{}", poly_label(tail))
            };
            let c = tail.to_vec();
            let d = tail.to_vec();
            Ok(DifferentiableFunction::with_derivative(
                label,
                domain,
                move |x| x.abs().powf(r) + horner(&c, x),
                move |x| {
                    let core = if x == 0.0 {
                        0.0
                    } else {
                        r * x.abs().powf(r - 1.0) * x.signum()
                    };
                    core + horner_deriv(&d, x)
                },
            ))
        }
    }
}

/// A continuous map φ: [a, b] → [a, b].
#[derive(Clone)]
pub struct PhiMap {
    eval: RealFn,
    domain: Interval,
    label: String,
}

impl PhiMap {
    /// Wraps a map and verifies range containment on the check grid.
    pub fn new(label: impl Into<String>, domain: Interval, eval: RealFn) -> Result<Self> {
        let phi = Self {
            eval,
            domain,
            label: label.into(),
        };
        phi.check_range()?;
        Ok(phi)
    }

    pub fn from_fn<F>(label: impl Into<String>, domain: Interval, eval: F) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self::new(label, domain, Arc::new(eval))
    }

    pub fn identity(domain: Interval) -> Self {
        Self {
            eval: Arc::new(|x| x),
            domain,
            label: "identity".into(),
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn domain(&self) -> Interval {
        self.domain
    }

    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        (self.eval)(x)
    }

    pub fn at_a(&self) -> f64 {
        self.eval(self.domain.a)
    }

    pub fn at_b(&self) -> f64 {
        self.eval(self.domain.b)
    }

    /// Δφ = φ(b) − φ(a).
    pub fn delta(&self) -> f64 {
        self.at_b() - self.at_a()
    }

    pub fn check_range(&self) -> Result<()> {
        let (a, b) = (self.domain.a, self.domain.b);
        // one ulp of the domain scale absorbs rounding in affine maps
        let fuzz = 4.0 * f64::EPSILON * a.abs().max(b.abs()).max(1.0);
        for x in self.domain.grid(CHECK_GRID) {
            let v = self.eval(x);
            if !v.is_finite() || v < a - fuzz || v > b + fuzz {
                return Err(Error::RangeViolation {
                    label: self.label.clone(),
                    x,
                    value: v,
                    a,
                    b,
                });
            }
        }
        Ok(())
    }

    /// Orientation precondition shared by all bound theorems.
    pub fn require_increasing(&self) -> Result<f64> {
        let d = self.delta();
        if d > 0.0 {
            Ok(d)
        } else {
            Err(Error::Precondition(format!(
                "{}: phi(a) = {} is not below phi(b) = {}",
                self.label,
                self.at_a(),
                self.at_b()
            )))
        }
    }
}

impl fmt::Debug for PhiMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PhiMap")
            .field("label", &self.label)
            .field("domain", &self.domain)
            .finish()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PhiFamily {
    Identity,
    /// `slope·x + offset`, params `[slope, offset]`.
    Affine,
    /// `a + (b−a)·((x−a)/(b−a))^k`, params `[k]` with k > 0.
    PowerWarp,
}

impl FromStr for PhiFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "identity" => Ok(Self::Identity),
            "affine" => Ok(Self::Affine),
            "power_warp" => Ok(Self::PowerWarp),
            other => Err(Error::UnknownFamily(other.to_string())),
        }
    }
}

pub fn make_builtin_phi(family: PhiFamily, params: &[f64], domain: Interval) -> Result<PhiMap> {
    match family {
        PhiFamily::Identity => {
            if !params.is_empty() {
                return Err(invalid("identity", "takes no parameters"));
            }
            Ok(PhiMap::identity(domain))
        }
        PhiFamily::Affine => {
            check_params_finite("affine", params)?;
            let [slope, offset] = params else {
                return Err(invalid("affine", "expected [slope, offset]"));
            };
            let (slope, offset) = (*slope, *offset);
            PhiMap::from_fn(format!("affine({slope}x+{offset})"), domain, move |x| {
                slope * x + offset
            })
        }
        PhiFamily::PowerWarp => {
            check_params_finite("power_warp", params)?;
            let [k] = params else {
                return Err(invalid("power_warp", "expected [k]"));
            };
            let k = *k;
            if k <= 0.0 {
                return Err(invalid("power_warp", format!("k = {k} must be positive")));
            }
            let (a, w) = (domain.a(), domain.width());
            PhiMap::from_fn(format!("power_warp({k})"), domain, move |x| {
                a + w * ((x - a) / w).clamp(0.0, 1.0).powf(k)
            })
        }
    }
}

/// A positive weight h on the open interval (0, 1).
#[derive(Clone)]
pub struct HFunction {
    eval: RealFn,
    moment_integrable: bool,
    label: String,
}

impl HFunction {
    /// Wraps a weight and checks positivity on the interior check grid.
    pub fn new(label: impl Into<String>, eval: RealFn, moment_integrable: bool) -> Result<Self> {
        let h = Self {
            eval,
            moment_integrable,
            label: label.into(),
        };
        let n = CHECK_GRID as f64 + 1.0;
        for i in 1..=CHECK_GRID {
            let t = i as f64 / n;
            let v = h.eval(t);
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::InvalidParams {
                    family: h.label.clone(),
                    reason: format!("h({t}) = {v} is not positive"),
                });
            }
        }
        Ok(h)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// True iff ∫₀¹|2t−1|h(t)dt and ∫₀^{1/2} t·h(t)dt are finite.
    pub fn moment_integrable(&self) -> bool {
        self.moment_integrable
    }

    #[inline]
    pub fn eval(&self, t: f64) -> f64 {
        (self.eval)(t)
    }

    /// h(1 − t).
    #[inline]
    pub fn eval_reflected(&self, t: f64) -> f64 {
        (self.eval)(1.0 - t)
    }

    pub fn require_integrable(&self) -> Result<()> {
        if self.moment_integrable {
            Ok(())
        } else {
            Err(Error::Precondition(format!(
                "{}: weighted moments of h diverge",
                self.label
            )))
        }
    }
}

impl fmt::Debug for HFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("HFunction")
            .field("label", &self.label)
            .field("moment_integrable", &self.moment_integrable)
            .finish()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HFamily {
    /// h(t) = t
    HLinear,
    /// h(t) = t^s, s ∈ (0, 1)
    HPower,
    /// h(t) = 1
    HOne,
    /// h(t) = 1/t
    HGodunova,
}

impl FromStr for HFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "h_linear" => Ok(Self::HLinear),
            "h_power" => Ok(Self::HPower),
            "h_one" => Ok(Self::HOne),
            "h_godunova" => Ok(Self::HGodunova),
            other => Err(Error::UnknownFamily(other.to_string())),
        }
    }
}

pub fn make_builtin_h(family: HFamily, s: Option<f64>) -> Result<HFunction> {
    match family {
        HFamily::HLinear => HFunction::new("h_linear", Arc::new(|t| t), true),
        HFamily::HPower => {
            let s = s.ok_or_else(|| invalid("h_power", "exponent s is required"))?;
            if !(s > 0.0 && s < 1.0) {
                return Err(invalid("h_power", format!("s = {s} must lie in (0, 1)")));
            }
            HFunction::new(format!("h_power({s})"), Arc::new(move |t: f64| t.powf(s)), true)
        }
        HFamily::HOne => HFunction::new("h_one", Arc::new(|_| 1.0), true),
        HFamily::HGodunova => HFunction::new("h_godunova", Arc::new(|t| 1.0 / t), false),
    }
}

/// Strong-convexity modulus with Hölder exponents.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StrongParams {
    pub c: f64,
    pub q: f64,
    pub p: f64,
}

impl StrongParams {
    /// `q` must exceed 1; `p` is its conjugate q/(q−1).
    pub fn new(c: f64, q: f64) -> Result<Self> {
        if !(c >= 0.0) || !c.is_finite() {
            return Err(invalid("strong params", format!("modulus c = {c} must be >= 0")));
        }
        if !(q > 1.0) || !q.is_finite() {
            return Err(invalid(
                "strong params",
                format!("Hoelder exponent q = {q} must exceed 1"),
            ));
        }
        Ok(Self { c, q, p: q / (q - 1.0) })
    }
}
