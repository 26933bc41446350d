use std::collections::HashSet;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::funcspace::{
    make_builtin_function, make_builtin_h, make_builtin_phi, DifferentiableFunction,
    FunctionFamily, HFamily, HFunction, Interval, PhiFamily, PhiMap, StrongParams,
};

/// Exponent used by the t^s corollaries when the case weight is not `h_power`.
pub const DEFAULT_COROLLARY_S: f64 = 0.5;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctionSpec {
    pub family: FunctionFamily,
    #[serde(default)]
    pub params: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhiSpec {
    pub family: PhiFamily,
    #[serde(default)]
    pub params: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HSpec {
    pub family: HFamily,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Check {
    Lemma1,
    Lemma2,
    Thm1,
    Thm2,
    Thm3,
    Thm4,
    HhClassical,
    HhPhi,
    Corollaries,
}

impl Check {
    pub const ALL: [Check; 9] = [
        Check::Lemma1,
        Check::Lemma2,
        Check::Thm1,
        Check::Thm2,
        Check::Thm3,
        Check::Thm4,
        Check::HhClassical,
        Check::HhPhi,
        Check::Corollaries,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Check::Lemma1 => "lemma1",
            Check::Lemma2 => "lemma2",
            Check::Thm1 => "thm1",
            Check::Thm2 => "thm2",
            Check::Thm3 => "thm3",
            Check::Thm4 => "thm4",
            Check::HhClassical => "hh_classical",
            Check::HhPhi => "hh_phi",
            Check::Corollaries => "corollaries",
        }
    }
}

/// One (f, φ, h, c) configuration and the checks to run on it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CaseSpec {
    pub label: String,
    pub f: FunctionSpec,
    pub phi: PhiSpec,
    pub h: HSpec,
    pub c: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<f64>,
    pub interval: Interval,
    #[serde(default)]
    pub checks: Vec<Check>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

/// The builtin objects a case refers to.
#[derive(Clone, Debug)]
pub struct ResolvedCase {
    pub f: DifferentiableFunction,
    pub phi: PhiMap,
    pub h: HFunction,
    pub params: Option<StrongParams>,
    pub corollary_s: f64,
}

impl CaseSpec {
    pub fn resolve(&self) -> Result<ResolvedCase> {
        if !(self.c >= 0.0) || !self.c.is_finite() {
            return Err(Error::Config(format!("c = {} must be finite and >= 0", self.c)));
        }
        let f = make_builtin_function(self.f.family, &self.f.params, self.interval)?;
        f.check_finite()?;
        let phi = make_builtin_phi(self.phi.family, &self.phi.params, self.interval)?;
        let h = make_builtin_h(self.h.family, self.h.s)?;
        let corollary_s = self.h.s.unwrap_or(DEFAULT_COROLLARY_S);
        if !(corollary_s > 0.0 && corollary_s < 1.0) {
            return Err(Error::Config(format!("s = {corollary_s} must lie in (0, 1)")));
        }
        let params = self.q.map(|q| StrongParams::new(self.c, q)).transpose()?;
        if params.is_none() {
            if let Some(chk) = self
                .checks
                .iter()
                .find(|c| matches!(c, Check::Thm2 | Check::Thm4))
            {
                return Err(Error::Config(format!("check `{}` requires q", chk.as_str())));
            }
        }
        Ok(ResolvedCase {
            f,
            phi,
            h,
            params,
            corollary_s,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParam {
    C,
    Q,
    S,
}

/// A one-parameter grid applied to every case by the `sweep` command.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub param: SweepParam,
    pub values: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteConfig {
    pub cases: Vec<CaseSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSpec>,
}

impl SuiteConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: SuiteConfig =
            serde_json::from_str(text).map_err(|e| Error::Config(format!("parse error: {e}")))?;
        validate_cases(&cfg.cases)?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_json(&text).map_err(|e| match e {
            Error::Config(msg) => Error::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    /// Expands every case over the sweep grid.
    pub fn expand_sweep(&self) -> Result<Vec<CaseSpec>> {
        let sweep = self
            .sweep
            .as_ref()
            .ok_or_else(|| Error::Config("config declares no `sweep` block".into()))?;
        if sweep.values.is_empty() {
            return Err(Error::Config("sweep.values is empty".into()));
        }
        let mut out = Vec::with_capacity(self.cases.len() * sweep.values.len());
        for case in &self.cases {
            for &v in &sweep.values {
                let mut c = case.clone();
                let name = match sweep.param {
                    SweepParam::C => {
                        c.c = v;
                        "c"
                    }
                    SweepParam::Q => {
                        c.q = Some(v);
                        "q"
                    }
                    SweepParam::S => {
                        c.h.s = Some(v);
                        "s"
                    }
                };
                c.label = format!("{}[{name}={v}]", case.label);
                out.push(c);
            }
        }
        validate_cases(&out)?;
        Ok(out)
    }
}

fn validate_cases(cases: &[CaseSpec]) -> Result<()> {
    if cases.is_empty() {
        return Err(Error::Config("config contains no cases".into()));
    }
    let mut seen = HashSet::new();
    for (i, case) in cases.iter().enumerate() {
        if !seen.insert(case.label.as_str()) {
            return Err(Error::Config(format!(
                "cases[{i}]: duplicate label `{}`",
                case.label
            )));
        }
        case.resolve()
            .map_err(|e| Error::Config(format!("cases[{i}] (`{}`): {e}", case.label)))?;
    }
    Ok(())
}

/// Reads and validates a case list.
pub fn load_config(path: impl AsRef<Path>) -> Result<Vec<CaseSpec>> {
    Ok(SuiteConfig::load(path)?.cases)
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{
        "cases": [{
            "label": "square",
            "f": {"family": "poly", "params": [0, 0, 1]},
            "phi": {"family": "identity"},
            "h": {"family": "h_linear"},
            "c": 0,
            "interval": [0, 1],
            "checks": ["lemma1"]
        }]
    }"#;

    #[test]
    fn minimal_config() {
        let cfg = SuiteConfig::from_json(MINIMAL).unwrap();
        assert_eq!(cfg.cases.len(), 1);
        let case = &cfg.cases[0];
        assert_eq!(case.checks, vec![Check::Lemma1]);
        assert_eq!(case.interval, Interval::unit());
        assert!(case.seed.is_none());
        let again: SuiteConfig =
            serde_json::from_str(&serde_json::to_string(&cfg).unwrap()).unwrap();
        assert_eq!(again, cfg);
    }

    #[test]
    fn h_power_out_of_range() {
        let text = MINIMAL.replace(r#"{"family": "h_linear"}"#, r#"{"family": "h_power", "s": 1.5}"#);
        let err = SuiteConfig::from_json(&text).unwrap_err().to_string();
        assert!(err.contains("cases[0]") && err.contains("s = 1.5"), "{err}");
    }

    #[test]
    fn duplicate_labels() {
        let mut cfg = SuiteConfig::from_json(MINIMAL).unwrap();
        cfg.cases.push(cfg.cases[0].clone());
        let text = serde_json::to_string(&cfg).unwrap();
        let err = SuiteConfig::from_json(&text).unwrap_err().to_string();
        assert!(err.contains("duplicate label"), "{err}");
    }

    #[test]
    fn unknown_family_reports_location() {
        let text = MINIMAL.replace("\"poly\"", "\"spline\"");
        let err = SuiteConfig::from_json(&text).unwrap_err().to_string();
        assert!(err.contains("unknown variant `spline`") && err.contains("line 4"), "{err}");
    }

    #[test]
    fn unknown_field_rejected() {
        let text = MINIMAL.replace("\"c\": 0,", "\"c\": 0, \"modulus\": 3,");
        assert!(SuiteConfig::from_json(&text).is_err());
    }

    #[test]
    fn bad_interval_and_params() {
        let text = MINIMAL.replace("[0, 1]", "[1, 0]");
        assert!(SuiteConfig::from_json(&text).is_err());
        let text = MINIMAL.replace("[0, 0, 1]", "[]");
        assert!(SuiteConfig::from_json(&text).is_err());
        let text = MINIMAL.replace("\"c\": 0", "\"c\": -1");
        assert!(SuiteConfig::from_json(&text).is_err());
    }

    #[test]
    fn holder_checks_need_q() {
        let text = MINIMAL.replace("[\"lemma1\"]", "[\"thm2\"]");
        let err = SuiteConfig::from_json(&text).unwrap_err().to_string();
        assert!(err.contains("requires q"), "{err}");
        let text = text.replace("\"c\": 0,", "\"c\": 0, \"q\": 1.0,");
        assert!(SuiteConfig::from_json(&text).is_err());
    }

    #[test]
    fn sweep_expansion() {
        let text = MINIMAL.replace(
            "}]\n    }",
            "}],\n \"sweep\": {\"param\": \"c\", \"values\": [0, 0.5, 2]}\n }",
        );
        let cfg = SuiteConfig::from_json(&text).unwrap();
        let cases = cfg.expand_sweep().unwrap();
        assert_eq!(cases.len(), 3);
        assert_eq!(cases[1].label, "square[c=0.5]");
        assert_eq!(cases[2].c, 2.0);
        assert!(SuiteConfig::from_json(MINIMAL).unwrap().expand_sweep().is_err());
    }

    #[test]
    fn missing_file() {
        assert!(matches!(load_config("/nonexistent/suite.json"), Err(Error::Config(_))));
    }
}
