//! Report documents and their two renderings.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use starforge::berezin::DiskSymbol;
use starforge::formats::{DiskSymbolJson, NuSeriesJson};
use starforge::algebra::NuSeries;

/// Where a result came from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub tool: String,
    pub version: String,
    pub operation: String,
    pub construction: String,
    pub order: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_degree: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl Provenance {
    pub fn new(operation: &str, construction: &str, order: usize) -> Self {
        Provenance {
            tool: "starforge".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            operation: operation.into(),
            construction: construction.into(),
            order,
            max_degree: None,
            seed: None,
        }
    }
}

/// `u ⋆ v` as a truncated series.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProductReport {
    pub provenance: Provenance,
    pub result: NuSeriesJson,
}

/// An exact disk composition and optionally its expansion in `1/κ`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BerezinReport {
    pub provenance: Provenance,
    pub result: DiskSymbolJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expansion: Option<Vec<DiskSymbolJson>>,
}

/// One nonzero defect, located at its lowest `ν`-order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Defect {
    pub source: String,
    pub order: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
    pub value: Value,
    #[serde(skip)]
    pub text: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub provenance: Provenance,
    pub check: String,
    pub passed: bool,
    pub summary: String,
    pub defects: Vec<Defect>,
}

impl CheckReport {
    pub fn new(provenance: Provenance, check: &str, mut defects: Vec<Defect>) -> Self {
        defects.sort_by_key(|d| d.order);
        let summary = match defects.first() {
            None => format!("defect: 0 through {}", nu_power(provenance.order)),
            Some(d) => format!("defect: first nonzero at {} ({})", nu_power(d.order), d.source),
        };
        CheckReport { passed: defects.is_empty(), check: check.into(), summary, defects, provenance }
    }
}

/// `ν`, `ν²`, `ν¹⁰`, ...
pub fn nu_power(k: usize) -> String {
    const SUP: [char; 10] = ['⁰', '¹', '²', '³', '⁴', '⁵', '⁶', '⁷', '⁸', '⁹'];
    match k {
        0 => "ν⁰".into(),
        1 => "ν".into(),
        _ => std::iter::once('ν').chain(k.to_string().bytes().map(|b| SUP[(b - b'0') as usize])).collect(),
    }
}

fn header(p: &Provenance) -> String {
    let mut s = format!("{} ({}), order {}", p.operation, p.construction, p.order);
    if let Some(d) = p.max_degree {
        s.push_str(&format!(", max degree {d}"));
    }
    if let Some(seed) = p.seed {
        s.push_str(&format!(", seed {seed}"));
    }
    s
}

pub fn pretty_series(s: &NuSeries) -> String {
    let mut lines = Vec::new();
    for (k, c) in s.coeffs().iter().enumerate() {
        if !c.is_zero() {
            lines.push(format!("  {}: {c}", nu_power(k)));
        }
    }
    if lines.is_empty() {
        lines.push("  0".into());
    }
    lines.join("\n")
}

pub fn pretty_disk(d: &DiskSymbol) -> String {
    if d.is_zero() {
        return "0".into();
    }
    let parts: Vec<String> = d.terms().iter().map(|((p, q), c)| format!("({c}) e({p},{q})")).collect();
    parts.join(" + ")
}

/// A finished report in both renderings.
pub struct Rendered {
    pub json: String,
    pub pretty: String,
    pub passed: bool,
}

impl Rendered {
    pub fn product(r: &ProductReport, s: &NuSeries) -> Self {
        Rendered { json: to_json(r), pretty: format!("{}\n{}\n", header(&r.provenance), pretty_series(s)), passed: true }
    }

    pub fn berezin(r: &BerezinReport, exact: &DiskSymbol, expansion: Option<&[DiskSymbol]>) -> Self {
        let mut pretty = format!("{}\n  exact: {}\n", header(&r.provenance), pretty_disk(exact));
        for (j, d) in expansion.into_iter().flatten().enumerate() {
            pretty.push_str(&format!("  κ^-{j}: {}\n", pretty_disk(d)));
        }
        Rendered { json: to_json(r), pretty, passed: true }
    }

    pub fn check(r: &CheckReport) -> Self {
        let mut pretty = format!("{}\n{}: {}\n  {}\n", header(&r.provenance), r.check, if r.passed { "passed" } else { "FAILED" }, r.summary);
        for d in &r.defects {
            pretty.push_str(&format!("  [{}] at {}: {}\n", d.source, nu_power(d.order), d.text));
        }
        Rendered { json: to_json(r), pretty, passed: r.passed }
    }
}

fn to_json<T: Serialize>(x: &T) -> String {
    let mut s = serde_json::to_string_pretty(x).expect("reports serialize");
    s.push('\n');
    s
}
