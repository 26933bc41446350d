use std::collections::{BTreeSet, HashMap};

use crate::convexity::{certify, max_modulus, ConvexityCertificate};
use crate::error::{Error, Result};
use crate::funcspace::{make_builtin_h, DifferentiableFunction, HFamily, HFunction, PhiMap};
use crate::harness::config::{CaseSpec, Check, ResolvedCase};
use crate::harness::report::{Report, Summary};
use crate::inequalities::{
    corollary_bound, discrepancy_flagged, hh_classical_gap, hh_phi_gap, lemma1_residual,
    lemma2_residual, midpoint_defect, thm1_bound, thm2_bound, thm3_bound, thm4_bound,
    trapezoid_defect, CorollaryId, CorollaryParams, Status, Theorem, Tolerances,
    VerificationRecord, VERDICT_FACTOR,
};
use crate::quadrature::DEFAULT_TOL;

pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_SAMPLES: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RunOptions {
    pub quad_tol: f64,
    pub samples: usize,
    /// Replaces every per-case seed when set.
    pub seed_override: Option<u64>,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            quad_tol: DEFAULT_TOL,
            samples: DEFAULT_SAMPLES,
            seed_override: None,
        }
    }
}

impl RunOptions {
    pub fn run_seed(&self) -> u64 {
        self.seed_override.unwrap_or(DEFAULT_SEED)
    }

    fn case_seed(&self, case: &CaseSpec) -> u64 {
        self.seed_override
            .or(case.seed)
            .unwrap_or(DEFAULT_SEED)
    }

    fn validate(&self) -> Result<()> {
        if !(self.quad_tol > 0.0) || !self.quad_tol.is_finite() {
            return Err(Error::Config(format!("tolerance {} must be positive", self.quad_tol)));
        }
        if self.samples == 0 {
            return Err(Error::Config("samples must be at least 1".into()));
        }
        Ok(())
    }
}

/// Which function a convexity certificate is about.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Hypothesis {
    /// f itself, for the Hermite–Hadamard gaps.
    Function,
    /// |f′|^q, with q = 1 encoded as `None`.
    AbsDerivative(Option<u64>),
}

struct CaseRun<'a> {
    spec: &'a CaseSpec,
    case: ResolvedCase,
    opts: RunOptions,
    seed: u64,
    certs: HashMap<(Hypothesis, String, u64, String), Result<ConvexityCertificate>>,
    records: Vec<VerificationRecord>,
}

impl<'a> CaseRun<'a> {
    fn identity_tolerances(&self) -> Tolerances {
        Tolerances {
            quad_tol: self.opts.quad_tol,
            slack: 0.0,
        }
    }

    fn verdict_tolerances(&self, cert: Option<&ConvexityCertificate>) -> Tolerances {
        Tolerances {
            quad_tol: self.opts.quad_tol,
            slack: VERDICT_FACTOR * self.opts.quad_tol + cert.map_or(0.0, |c| c.slack),
        }
    }

    fn push(&mut self, record: VerificationRecord) {
        let approx = !self.case.f.has_analytic_derivative();
        self.records
            .push(record.with_seed(self.seed).with_approximate_derivative(approx));
    }

    fn skip(&mut self, check: &str, reason: String, cert: Option<ConvexityCertificate>) {
        let tol = self.verdict_tolerances(cert.as_ref());
        let rec = VerificationRecord::skipped(&self.spec.label, check, reason, tol).with_certificate(cert);
        self.push(rec);
    }

    fn error(&mut self, check: &str, err: Error, cert: Option<ConvexityCertificate>) {
        if err.is_precondition() {
            return self.skip(check, err.to_string(), cert);
        }
        let tol = self.verdict_tolerances(cert.as_ref());
        let rec = VerificationRecord::errored(&self.spec.label, check, err.to_string(), tol)
            .with_certificate(cert);
        self.push(rec);
    }

    /// Certificate for the hypothesis function under (φ, h, c), cached per case.
    fn certificate(
        &mut self,
        hyp: Hypothesis,
        phi: &PhiMap,
        h: &HFunction,
        c: f64,
    ) -> Result<ConvexityCertificate> {
        let key = (hyp, phi.label().to_string(), c.to_bits(), h.label().to_string());
        if let Some(hit) = self.certs.get(&key) {
            return clone_result(hit);
        }
        let g = match hyp {
            Hypothesis::Function => self.case.f.clone(),
            Hypothesis::AbsDerivative(None) => self.case.f.abs_derivative_pow(1.0),
            Hypothesis::AbsDerivative(Some(bits)) => self.case.f.abs_derivative_pow(f64::from_bits(bits)),
        };
        let res = certify(&g, phi, h, c, self.opts.samples, self.seed);
        let out = clone_result(&res);
        self.certs.insert(key, res);
        out
    }

    fn identity(&mut self, check: Check) {
        let c = self.spec.c;
        let tol = self.opts.quad_tol;
        let res = match check {
            Check::Lemma1 => lemma1_residual(&self.case.f, &self.case.phi, c, tol),
            _ => lemma2_residual(&self.case.f, &self.case.phi, c, tol),
        };
        match res {
            Ok(r) => {
                let rec = VerificationRecord::evaluated(
                    &self.spec.label,
                    check.as_str(),
                    r.residual.abs(),
                    VERDICT_FACTOR * tol,
                    self.identity_tolerances(),
                );
                self.push(rec);
            }
            Err(e) => self.error(check.as_str(), e, None),
        }
    }

    fn hermite_hadamard(&mut self, check: Check) {
        let name = check.as_str();
        let phi = match check {
            Check::HhClassical => PhiMap::identity(self.spec.interval),
            _ => self.case.phi.clone(),
        };
        if let Err(e) = phi.require_increasing() {
            return self.error(name, e, None);
        }
        let hlin = make_builtin_h(HFamily::HLinear, None).expect("builtin weight");
        let cert = match self.certificate(Hypothesis::Function, &phi, &hlin, 0.0) {
            Ok(c) => c,
            Err(e) => return self.error(name, e, None),
        };
        if !cert.holds {
            let reason = format!(
                "{} not certified convex under {} (max violation {:e})",
                cert.function, cert.phi, cert.max_violation
            );
            for side in ["left", "right"] {
                self.skip(&format!("{name}.{side}"), reason.clone(), Some(cert.clone()));
            }
            return;
        }
        let gaps = match check {
            Check::HhClassical => hh_classical_gap(&self.case.f, self.spec.interval, self.opts.quad_tol),
            _ => hh_phi_gap(&self.case.f, &phi, self.opts.quad_tol),
        };
        match gaps {
            Ok(g) => {
                let tol = self.verdict_tolerances(Some(&cert));
                for (side, gap) in [("left", g.left_gap), ("right", g.right_gap)] {
                    let rec = VerificationRecord::evaluated(
                        &self.spec.label,
                        format!("{name}.{side}"),
                        -gap,
                        0.0,
                        tol,
                    )
                    .with_certificate(Some(cert.clone()));
                    self.push(rec);
                }
            }
            Err(e) => self.error(name, e, Some(cert)),
        }
    }

    /// Certificate gate shared by the four bounds. `None` means a record
    /// was already emitted.
    fn gate(&mut self, check: &str, theorem: Theorem, h: &HFunction) -> Option<ConvexityCertificate> {
        if let Err(e) = h.require_integrable() {
            self.error(check, e, None);
            return None;
        }
        let phi = self.case.phi.clone();
        if let Err(e) = phi.require_increasing() {
            self.error(check, e, None);
            return None;
        }
        let hyp = match theorem {
            Theorem::Trapezoid | Theorem::Midpoint => Hypothesis::AbsDerivative(None),
            Theorem::TrapezoidHolder | Theorem::MidpointHolder => match self.case.params {
                Some(p) => Hypothesis::AbsDerivative(Some(p.q.to_bits())),
                None => {
                    self.skip(check, "Hoelder exponent q not given".into(), None);
                    return None;
                }
            },
        };
        match self.certificate(hyp, &phi, h, self.spec.c) {
            Ok(cert) if cert.holds => Some(cert),
            Ok(cert) => {
                let reason = format!(
                    "{} not certified strongly phi_h-convex with c = {} under {} (max violation {:e})",
                    cert.function, self.spec.c, cert.h, cert.max_violation
                );
                self.skip(check, reason, Some(cert));
                None
            }
            Err(e) => {
                self.error(check, e, None);
                None
            }
        }
    }

    /// Defect and the bound it is judged against.
    fn evaluate_bound(&self, theorem: Theorem, h: &HFunction) -> Result<(f64, f64)> {
        let (f, phi, tol) = (&self.case.f, &self.case.phi, self.opts.quad_tol);
        let params = self.case.params;
        let need = || params.ok_or_else(|| Error::Precondition("Hoelder exponent q not given".into()));
        Ok(match theorem {
            Theorem::Trapezoid => (trapezoid_defect(f, phi, tol)?, thm1_bound(f, phi, h, tol)?),
            Theorem::TrapezoidHolder => (
                trapezoid_defect(f, phi, tol)?,
                thm2_bound(f, phi, h, &need()?, tol)?.bound,
            ),
            Theorem::Midpoint => (midpoint_defect(f, phi, tol)?, thm3_bound(f, phi, h, tol)?),
            Theorem::MidpointHolder => (
                midpoint_defect(f, phi, tol)?,
                thm4_bound(f, phi, h, &need()?, tol)?.loosest(),
            ),
        })
    }

    fn bound(&mut self, check: Check) {
        let theorem = match check {
            Check::Thm1 => Theorem::Trapezoid,
            Check::Thm2 => Theorem::TrapezoidHolder,
            Check::Thm3 => Theorem::Midpoint,
            _ => Theorem::MidpointHolder,
        };
        let h = self.case.h.clone();
        let Some(cert) = self.gate(check.as_str(), theorem, &h) else {
            return;
        };
        match self.evaluate_bound(theorem, &h) {
            Ok((defect, bound)) => {
                let tol = self.verdict_tolerances(Some(&cert));
                let rec = VerificationRecord::evaluated(&self.spec.label, check.as_str(), defect, bound, tol)
                    .with_certificate(Some(cert));
                self.push(rec);
            }
            Err(e) => self.error(check.as_str(), e, Some(cert)),
        }
    }

    fn corollaries(&mut self) {
        for id in CorollaryId::ALL {
            let name = format!("corollary.{id}");
            if id.uses_holder() && self.case.params.is_none() {
                self.skip(&name, "Hoelder exponent q not given".into(), None);
                continue;
            }
            let h = match id.builtin_h(self.case.corollary_s) {
                Ok(h) => h,
                Err(e) => {
                    self.error(&name, e, None);
                    continue;
                }
            };
            let params = CorollaryParams {
                strong: self
                    .case
                    .params
                    .unwrap_or_else(|| crate::funcspace::StrongParams::new(self.spec.c, 2.0).expect("valid modulus")),
                s: self.case.corollary_s,
            };
            // the closed form is compared whether or not the hypothesis certifies
            let discrepancy = corollary_bound(id, &self.case.f, &self.case.phi, &params, self.opts.quad_tol)
                .ok()
                .map(|ev| ev.discrepancy);

            let Some(cert) = self.gate(&name, id.theorem(), &h) else {
                if let Some(last) = self.records.last_mut() {
                    last.discrepancy = discrepancy;
                }
                continue;
            };
            match self.evaluate_bound(id.theorem(), &h) {
                Ok((defect, bound)) => {
                    let tol = self.verdict_tolerances(Some(&cert));
                    let rec = VerificationRecord::evaluated(&self.spec.label, name, defect, bound, tol)
                        .with_certificate(Some(cert))
                        .with_discrepancy(discrepancy);
                    self.push(rec);
                }
                Err(e) => {
                    self.error(&name, e, Some(cert));
                    if let Some(last) = self.records.last_mut() {
                        last.discrepancy = discrepancy;
                    }
                }
            }
        }
    }
}

fn clone_result(r: &Result<ConvexityCertificate>) -> Result<ConvexityCertificate> {
    match r {
        Ok(c) => Ok(c.clone()),
        Err(e) => Err(Error::Precondition(format!("certification failed: {e}"))),
    }
}

/// Runs every requested check of one case. Numerical failures become
/// records; they never abort the case.
pub fn run_case(spec: &CaseSpec, opts: &RunOptions) -> Result<Vec<VerificationRecord>> {
    let case = spec.resolve()?;
    let mut run = CaseRun {
        spec,
        case,
        opts: *opts,
        seed: opts.case_seed(spec),
        certs: HashMap::new(),
        records: Vec::new(),
    };
    if spec.checks.is_empty() {
        run.skip("none", "no checks requested".into(), None);
    }
    for &check in &spec.checks {
        match check {
            Check::Lemma1 | Check::Lemma2 => run.identity(check),
            Check::HhClassical | Check::HhPhi => run.hermite_hadamard(check),
            Check::Thm1 | Check::Thm2 | Check::Thm3 | Check::Thm4 => run.bound(check),
            Check::Corollaries => run.corollaries(),
        }
    }
    Ok(run.records)
}

fn build_report(records: Vec<VerificationRecord>, opts: &RunOptions) -> Report {
    let mut summary = Summary::default();
    let mut flagged = BTreeSet::new();
    for r in &records {
        summary.total += 1;
        match r.status() {
            Status::Passed => summary.passed += 1,
            Status::Failed => summary.failed += 1,
            Status::PreconditionSkip => summary.precondition_skips += 1,
        }
        if let Some(d) = r.discrepancy {
            if discrepancy_flagged(d, r.bound, opts.quad_tol) {
                flagged.insert(r.check.clone());
            }
        }
    }
    summary.discrepancies = flagged.len();
    Report {
        tool_version: crate::VERSION.to_string(),
        seed: opts.run_seed(),
        quad_tol: opts.quad_tol,
        samples: opts.samples,
        summary,
        records,
    }
}

/// Runs all cases in config order. Only invalid options or an empty case
/// list abort the run.
pub fn run_suite(cases: &[CaseSpec], opts: &RunOptions) -> Result<Report> {
    opts.validate()?;
    if cases.is_empty() {
        return Err(Error::Config("no cases to run".into()));
    }
    let per_case: Vec<Result<Vec<VerificationRecord>>> = std::thread::scope(|scope| {
        let handles: Vec<_> = cases
            .iter()
            .map(|case| scope.spawn(move || run_case(case, opts)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("case worker panicked"))
            .collect()
    });
    let mut records = Vec::new();
    for (case, res) in cases.iter().zip(per_case) {
        match res {
            Ok(rs) => records.extend(rs),
            Err(e) => {
                let tol = Tolerances {
                    quad_tol: opts.quad_tol,
                    slack: 0.0,
                };
                records.push(
                    VerificationRecord::errored(&case.label, "resolve", e.to_string(), tol)
                        .with_seed(opts.case_seed(case)),
                );
            }
        }
    }
    Ok(build_report(records, opts))
}

/// Certification-only pass: certifies |f′| and, when q is set, |f′|^q under
/// the case's (φ, h, c), and reports the largest sampled modulus for each.
pub fn certify_suite(cases: &[CaseSpec], opts: &RunOptions) -> Result<Report> {
    opts.validate()?;
    if cases.is_empty() {
        return Err(Error::Config("no cases to run".into()));
    }
    let mut records = Vec::new();
    for spec in cases {
        let seed = opts.case_seed(spec);
        let case = spec.resolve()?;
        let mut targets: Vec<DifferentiableFunction> = vec![case.f.abs_derivative_pow(1.0)];
        if let Some(p) = case.params {
            targets.push(case.f.abs_derivative_pow(p.q));
        }
        for g in targets {
            let check = format!("certify.{}", g.label());
            let modulus = max_modulus(&g, &case.phi, &case.h, opts.samples, seed);
            let rec = match certify(&g, &case.phi, &case.h, spec.c, opts.samples, seed) {
                Ok(cert) => {
                    let tol = Tolerances {
                        quad_tol: opts.quad_tol,
                        slack: cert.slack,
                    };
                    let mut rec =
                        VerificationRecord::evaluated(&spec.label, check, cert.max_violation, 0.0, tol);
                    rec.reason = match modulus {
                        Ok(m) => format!("max sampled modulus {m:e}"),
                        Err(e) => format!("max sampled modulus unavailable: {e}"),
                    };
                    rec.with_certificate(Some(cert))
                }
                Err(e) => {
                    let tol = Tolerances {
                        quad_tol: opts.quad_tol,
                        slack: 0.0,
                    };
                    VerificationRecord::errored(&spec.label, check, e.to_string(), tol)
                }
            };
            records.push(rec.with_seed(seed));
        }
    }
    Ok(build_report(records, opts))
}
