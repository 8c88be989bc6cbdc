use std::fmt;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;
use std::time::Duration;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::ExactRational;

use super::label::{ClassLabel, Tag};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Campaign {
    #[serde(rename = "theorem-a")]
    TheoremA,
    #[serde(rename = "theorem-b")]
    TheoremB,
    #[serde(rename = "interval")]
    Interval,
    #[serde(rename = "properties")]
    Properties,
}

impl Campaign {
    pub fn as_str(self) -> &'static str {
        match self {
            Campaign::TheoremA => "theorem-a",
            Campaign::TheoremB => "theorem-b",
            Campaign::Interval => "interval",
            Campaign::Properties => "properties",
        }
    }
}

impl fmt::Display for Campaign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Campaign {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "theorem-a" => Ok(Campaign::TheoremA),
            "theorem-b" => Ok(Campaign::TheoremB),
            "interval" => Ok(Campaign::Interval),
            "properties" => Ok(Campaign::Properties),
            other => Err(Error::Domain(format!("unknown campaign {other:?}"))),
        }
    }
}

/// Exact fraction with arbitrary-size parts rendered as decimal strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Fraction {
    pub num: String,
    pub den: String,
}

impl From<&ExactRational> for Fraction {
    fn from(r: &ExactRational) -> Self {
        Fraction { num: r.numer().to_string(), den: r.denom().to_string() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Params {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<u32>,
    pub m: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Record {
    pub order: usize,
    pub canonical_key: String,
    pub name: String,
    pub psi: String,
    pub psi_prime: Fraction,
    pub modular: bool,
    pub label: Tag,
    pub params: Params,
}

impl Record {
    pub fn class_label(&self) -> ClassLabel {
        ClassLabel::new(self.label, self.params.k, self.params.m)
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct VerificationReport {
    pub campaign: Campaign,
    pub max_order: usize,
    pub generated_at: String,
    /// Sorted by order, then canonical key.
    pub records: Vec<Record>,
    pub violations: Vec<String>,
    pub success: bool,
    /// Not serialized, so reports of identical runs differ only in `generatedAt`.
    #[serde(skip)]
    pub wall_time: Duration,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct Header<'a> {
    campaign: Campaign,
    max_order: usize,
    generated_at: &'a str,
}

#[derive(Serialize)]
struct Footer<'a> {
    violations: &'a [String],
    success: bool,
}

impl VerificationReport {
    /// Records carrying a family label.
    pub fn labeled(&self) -> impl Iterator<Item = &Record> {
        self.records.iter().filter(|r| r.label != Tag::None)
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Resource(format!("json: {e}")))
    }

    pub fn write_json(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()? + "\n").map_err(|e| Error::Resource(format!("{}: {e}", path.display())))
    }

    /// Header line, one line per record, then a footer with the violations.
    pub fn write_jsonl(&self, mut w: impl Write) -> Result<()> {
        let io = |e: std::io::Error| Error::Resource(format!("write: {e}"));
        let js = |e: serde_json::Error| Error::Resource(format!("json: {e}"));
        let header = Header { campaign: self.campaign, max_order: self.max_order, generated_at: &self.generated_at };
        writeln!(w, "{}", serde_json::to_string(&header).map_err(js)?).map_err(io)?;
        for r in &self.records {
            writeln!(w, "{}", serde_json::to_string(r).map_err(js)?).map_err(io)?;
        }
        let footer = Footer { violations: &self.violations, success: self.success };
        writeln!(w, "{}", serde_json::to_string(&footer).map_err(js)?).map_err(io)
    }

    pub fn write_csv(&self, w: impl Write) -> Result<()> {
        let err = |e: csv::Error| Error::Resource(format!("csv: {e}"));
        let mut out = csv::Writer::from_writer(w);
        out.write_record([
            "order",
            "canonicalKey",
            "name",
            "psi",
            "psiPrimeNum",
            "psiPrimeDen",
            "modular",
            "label",
            "k",
            "m",
        ])
        .map_err(err)?;
        for r in &self.records {
            out.write_record([
                r.order.to_string(),
                r.canonical_key.clone(),
                r.name.clone(),
                r.psi.clone(),
                r.psi_prime.num.clone(),
                r.psi_prime.den.clone(),
                r.modular.to_string(),
                r.label.to_string(),
                r.params.k.map(|k| k.to_string()).unwrap_or_default(),
                r.params.m.to_string(),
            ])
            .map_err(err)?;
        }
        out.flush().map_err(|e| Error::Resource(format!("csv: {e}")))
    }
}
