//! Serialization of run results: JSON envelopes (`config`, `results`,
//! `residuals`) and fixed-header CSV. All floating-point CSV fields use
//! 17-significant-digit scientific notation, which round-trips IEEE-754
//! doubles exactly.

use std::f64::consts::LN_2;
use std::io::Write;
use std::path::Path;

use serde::Serialize;

/// 17 significant digits: one leading plus sixteen fractional.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// Entropy-like values are emitted in nats unless `--bits` rescales them.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Units {
    Nats,
    Bits,
}

impl Units {
    pub fn from_flag(bits: bool) -> Self {
        if bits {
            Units::Bits
        } else {
            Units::Nats
        }
    }

    /// Applied at the serialization boundary only.
    pub fn scale(&self, nats: f64) -> f64 {
        match self {
            Units::Nats => nats,
            Units::Bits => nats / LN_2,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Units::Nats => "nats",
            Units::Bits => "bits",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(format!("unknown format '{other}' (expected csv or json)")),
        }
    }
}

/// One residual entry of a check run.
#[derive(Clone, Debug, Serialize)]
pub struct Residual {
    pub case: String,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// The uniform JSON envelope: configuration, results, residuals.
#[derive(Serialize)]
pub struct Envelope<C: Serialize, R: Serialize> {
    pub config: C,
    pub results: R,
    pub residuals: Vec<Residual>,
}

pub fn to_json<C: Serialize, R: Serialize>(envelope: &Envelope<C, R>) -> String {
    let mut s = serde_json::to_string_pretty(envelope).expect("serializable");
    s.push('\n');
    s
}

pub fn residual_csv(residuals: &[Residual]) -> String {
    let mut out = String::from("case,residual,tolerance,pass\n");
    for r in residuals {
        out.push_str(&format!(
            "{},{},{},{}\n",
            r.case,
            fmt_f64(r.residual),
            fmt_f64(r.tolerance),
            r.pass
        ));
    }
    out
}

/// Writes to the path or, with no path, to stdout.
pub fn emit(path: Option<&Path>, content: &str) -> std::io::Result<()> {
    match path {
        Some(p) => std::fs::write(p, content),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(content.as_bytes())
        }
    }
}
