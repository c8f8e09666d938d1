use std::fs::File;
use std::io::{self, Write};
use std::path::Path;

use pslet::SpectrumRecord;

use crate::args::Format;

pub const RECORD_HEADER: [&str; 8] = [
    "label",
    "gamma",
    "gamma_d",
    "Gamma",
    "energy",
    "leading_fraction",
    "pade_spread",
    "converged",
];

pub fn open(path: Option<&Path>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(File::create(p)?),
        None => Box::new(io::stdout().lock()),
    })
}

pub fn writer(sink: Box<dyn Write>, format: Format) -> csv::Writer<Box<dyn Write>> {
    csv::WriterBuilder::new()
        .delimiter(format.delimiter())
        .flexible(true)
        .from_writer(sink)
}

pub fn header(oracle: bool, extra: &[&str]) -> Vec<String> {
    let mut h: Vec<String> = RECORD_HEADER.iter().map(|s| s.to_string()).collect();
    if oracle {
        h.push("oracle_delta".into());
    }
    h.extend(extra.iter().map(|s| s.to_string()));
    h
}

pub fn fixed(x: f64) -> String {
    format!("{x:.6}")
}

pub fn sci(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.3e}")
    } else {
        "inf".into()
    }
}

pub fn record_fields(r: &SpectrumRecord, oracle: bool) -> Vec<String> {
    let mut f = vec![
        r.label.clone(),
        fixed(r.dot.gamma),
        fixed(r.dot.gamma_d),
        fixed(r.dot.Gamma()),
        fixed(r.energy),
        fixed(r.leading_fraction),
        sci(r.pade_spread),
        r.converged.to_string(),
    ];
    if oracle {
        f.push(r.oracle_delta.map(sci).unwrap_or_default());
    }
    f
}

/// Row for a point the solver could not produce; numeric columns stay empty.
pub fn failed_fields(label: &str, dot: pslet::DotParams, oracle: bool) -> Vec<String> {
    let mut f = vec![
        label.to_string(),
        fixed(dot.gamma),
        fixed(dot.gamma_d),
        fixed(dot.Gamma()),
        String::new(),
        String::new(),
        String::new(),
        "false".into(),
    ];
    if oracle {
        f.push(String::new());
    }
    f
}
