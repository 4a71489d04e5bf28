use std::io::{self, Write};

use dwpf_core::verification::VerificationReport;
use dwpf_core::ModelKind;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::config::Emit;

/// One output line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub check: String,
    pub model: ModelKind,
    #[serde(rename = "L")]
    pub size: usize,
    pub seed: u64,
    pub residual: f64,
    pub ratio_re: Option<f64>,
    pub ratio_im: Option<f64>,
    pub phase: Option<f64>,
    pub tolerance: f64,
    pub passed: bool,
    pub runtime_ms: f64,
    pub zeros: Vec<[f64; 2]>,
    #[serde(rename = "Z_brute", default, skip_serializing_if = "Option::is_none")]
    pub z_brute: Option<[f64; 2]>,
    #[serde(rename = "Z_closed", default, skip_serializing_if = "Option::is_none")]
    pub z_closed: Option<[f64; 2]>,
}

fn pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

impl Record {
    pub fn from_report(r: &VerificationReport, model: ModelKind, size: usize, seed: u64, runtime_ms: f64) -> Self {
        Self {
            check: r.check.clone(),
            model,
            size,
            seed,
            residual: r.residual,
            ratio_re: r.ratio.map(|z| z.re),
            ratio_im: r.ratio.map(|z| z.im),
            phase: r.phase,
            tolerance: r.tolerance,
            passed: r.passed,
            runtime_ms,
            zeros: r.zeros.iter().copied().map(pair).collect(),
            z_brute: r.brute.map(pair),
            z_closed: r.closed.map(pair),
        }
    }

    /// Re-judges the record against a caller-supplied tolerance.
    pub fn override_tolerance(&mut self, tolerance: f64) {
        self.tolerance = tolerance;
        self.passed = self.residual <= tolerance;
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("records serialize")
    }
}

pub const CSV_HEADER: &str =
    "check,model,L,seed,residual,ratio_re,ratio_im,phase,tolerance,passed,runtime_ms,zeros,Z_brute,Z_closed";

fn opt(x: Option<f64>) -> String {
    x.map(|v| format!("{v:e}")).unwrap_or_default()
}

fn complex_text(z: [f64; 2]) -> String {
    format!("{:e}{:+e}i", z[0], z[1])
}

pub struct Emitter<W> {
    out: W,
    format: Emit,
    header_written: bool,
}

impl<W: Write> Emitter<W> {
    pub fn new(out: W, format: Emit) -> Self {
        Self {
            out,
            format,
            header_written: false,
        }
    }

    pub fn emit(&mut self, r: &Record) -> io::Result<()> {
        let line = match self.format {
            Emit::Json => r.to_json(),
            Emit::Csv => {
                if !self.header_written {
                    writeln!(self.out, "{CSV_HEADER}")?;
                    self.header_written = true;
                }
                let zeros: Vec<String> = r.zeros.iter().copied().map(complex_text).collect();
                format!(
                    "{},{},{},{},{:e},{},{},{},{:e},{},{:.3},{},{},{}",
                    r.check,
                    r.model,
                    r.size,
                    r.seed,
                    r.residual,
                    opt(r.ratio_re),
                    opt(r.ratio_im),
                    opt(r.phase),
                    r.tolerance,
                    r.passed,
                    r.runtime_ms,
                    zeros.join(";"),
                    r.z_brute.map(complex_text).unwrap_or_default(),
                    r.z_closed.map(complex_text).unwrap_or_default(),
                )
            }
            Emit::Text => {
                let mut s = format!(
                    "{:<5} {:<24} model={} L={} seed={} residual={:.3e} tol={:.1e}",
                    if r.passed { "PASS" } else { "FAIL" },
                    r.check,
                    r.model,
                    r.size,
                    r.seed,
                    r.residual,
                    r.tolerance
                );
                if let (Some(re), Some(im)) = (r.ratio_re, r.ratio_im) {
                    s += &format!(" ratio={}", complex_text([re, im]));
                }
                if !r.zeros.is_empty() {
                    let zs: Vec<String> = r.zeros.iter().copied().map(complex_text).collect();
                    s += &format!(" zeros=[{}]", zs.join(", "));
                }
                s
            }
        };
        // One write per record keeps lines whole.
        self.out.write_all(format!("{line}\n").as_bytes())
    }

    pub fn into_inner(self) -> W {
        self.out
    }
}
