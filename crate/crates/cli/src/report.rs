use crate::Format;
use serde::{Serialize, Serializer};
use serde_json::value::RawValue;
use std::io::Write;
use std::path::Path;

/// A float printed with 17 significant digits; non-finite values become `null`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sci(pub f64);

impl Sci {
    fn text(self) -> String {
        if self.0 == 0.0 {
            "0.0000000000000000e0".into()
        } else if self.0.is_finite() {
            format!("{:.16e}", self.0)
        } else {
            "null".into()
        }
    }
}

impl Serialize for Sci {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return s.serialize_none();
        }
        RawValue::from_string(self.text()).map_err(serde::ser::Error::custom)?.serialize(s)
    }
}

/// Error bound of one result, or a marker naming how it was obtained.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Bound {
    Value(Sci),
    Marker(&'static str),
}

impl Bound {
    pub const RECURRENCE: Bound = Bound::Marker("exact: recurrence");
    pub const RESIDUAL: Bound = Bound::Marker("residual");

    fn text(&self) -> String {
        match self {
            Bound::Value(v) => v.text(),
            Bound::Marker(m) => (*m).into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Params {
    #[serde(rename = "L")]
    pub l: Sci,
    pub eta: Sci,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Provenance {
    pub truncation_order: Option<usize>,
    pub series_terms: Option<usize>,
}

/// Report emitted by every command; field order is the JSON key order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub command: String,
    pub params: Params,
    pub tol: Sci,
    pub results: Vec<Sci>,
    pub error_bounds: Vec<Bound>,
    pub provenance: Provenance,
    #[serde(skip)]
    pub labels: Vec<String>,
}

impl Report {
    pub fn new(command: &str, l: f64, eta: f64, tol: f64) -> Self {
        Report {
            command: command.into(),
            params: Params { l: Sci(l), eta: Sci(eta) },
            tol: Sci(tol),
            results: Vec::new(),
            error_bounds: Vec::new(),
            provenance: Provenance { truncation_order: None, series_terms: None },
            labels: Vec::new(),
        }
    }

    pub fn push(&mut self, label: impl Into<String>, value: f64, bound: Bound) {
        self.labels.push(label.into());
        self.results.push(Sci(value));
        self.error_bounds.push(bound);
    }
}

pub fn render(rep: &Report, format: Format) -> Result<Vec<u8>, Box<dyn std::error::Error>> {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(rep)?;
            s.push('\n');
            Ok(s.into_bytes())
        }
        Format::Csv => {
            let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
            w.write_record(["index", "value", "error_bound"])?;
            for ((label, v), b) in rep.labels.iter().zip(&rep.results).zip(&rep.error_bounds) {
                w.write_record([label.as_str(), &v.text(), &b.text()])?;
            }
            Ok(w.into_inner().map_err(|e| e.into_error())?)
        }
        Format::Text => {
            let mut out = format!("{} L={} eta={} tol={}\n", rep.command, rep.params.l.0, rep.params.eta.0, rep.tol.0);
            for ((label, v), b) in rep.labels.iter().zip(&rep.results).zip(&rep.error_bounds) {
                out.push_str(&format!("{label:>12}  {:>24}  ± {}\n", v.text(), b.text()));
            }
            if let Some(n) = rep.provenance.truncation_order {
                out.push_str(&format!("truncation order {n}\n"));
            }
            Ok(out.into_bytes())
        }
    }
}

pub fn emit(rep: &Report, format: Format, path: Option<&Path>) -> Result<(), Box<dyn std::error::Error>> {
    let bytes = render(rep, format)?;
    match path {
        Some(p) => std::fs::write(p, bytes)?,
        None => std::io::stdout().lock().write_all(&bytes)?,
    }
    Ok(())
}
