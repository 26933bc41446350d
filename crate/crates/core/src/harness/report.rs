use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::ser::{Formatter, PrettyFormatter};

use crate::error::{Error, Result};
use crate::inequalities::VerificationRecord;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub precondition_skips: usize,
    /// Distinct corollaries whose closed form disagrees with its theorem.
    pub discrepancies: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub tool_version: String,
    pub seed: u64,
    pub quad_tol: f64,
    pub samples: usize,
    pub summary: Summary,
    pub records: Vec<VerificationRecord>,
}

impl Report {
    pub fn has_failures(&self) -> bool {
        self.summary.failed > 0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(Error::Config(format!("unknown format `{other}` (expected json or csv)"))),
        }
    }
}

/// Pretty JSON with every float written to 17 significant digits.
struct ExactFloats(PrettyFormatter<'static>);

impl Formatter for ExactFloats {
    fn write_f64<W: ?Sized + Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        write!(w, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(w, f64::from(value))
    }

    fn begin_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }

    fn end_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }

    fn begin_array_value<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }

    fn end_array_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }

    fn begin_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }

    fn end_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }

    fn begin_object_key<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }

    fn begin_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }

    fn end_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

pub const CSV_HEADER: [&str; 9] = [
    "label",
    "check",
    "lhs",
    "bound",
    "margin",
    "holds",
    "preconditions_ok",
    "discrepancy",
    "seed",
];

fn csv_float(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else {
        format!("{x:.16e}")
    }
}

pub fn write_json<W: Write>(report: &Report, w: W) -> Result<()> {
    let mut ser = serde_json::Serializer::with_formatter(w, ExactFloats(PrettyFormatter::new()));
    report.serialize(&mut ser)?;
    let mut w = ser.into_inner();
    writeln!(w)?;
    Ok(())
}

pub fn write_csv<W: Write>(report: &Report, w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(CSV_HEADER)?;
    for r in &report.records {
        out.write_record([
            r.case_label.clone(),
            r.check.clone(),
            csv_float(r.lhs),
            csv_float(r.bound),
            csv_float(r.margin),
            r.holds.to_string(),
            r.preconditions_ok.to_string(),
            r.discrepancy.map(csv_float).unwrap_or_default(),
            r.seed.to_string(),
        ])?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_report<W: Write>(report: &Report, format: Format, w: W) -> Result<()> {
    match format {
        Format::Json => write_json(report, w),
        Format::Csv => write_csv(report, w),
    }
}

/// Writes to `path`, or to stdout when `path` is `None`.
pub fn emit_report(report: &Report, format: Format, path: Option<&Path>) -> Result<()> {
    match path {
        Some(p) => {
            let mut w = BufWriter::new(File::create(p)?);
            write_report(report, format, &mut w)?;
            w.flush()?;
            Ok(())
        }
        None => write_report(report, format, io::stdout().lock()),
    }
}

pub fn read_report(path: impl AsRef<Path>) -> Result<Report> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: parse error: {e}", path.display())))
}
