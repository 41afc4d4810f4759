//! Tidy CSV emission for sweeps of reports.

use crate::error::{LabError, Result};
use crate::report::BoundReport;
use std::collections::BTreeMap;
use std::io::Write;

/// Where a CSV column reads its value from.
#[derive(Debug, Clone, PartialEq)]
pub enum Source {
    Value,
    Error,
    Quantity(String),
    Param(String),
}

impl Source {
    /// `value`, `error`, `q:name` or `p:name`; a bare name is looked up as
    /// a quantity first, then as a parameter.
    pub fn parse(s: &str) -> Source {
        match s.split_once(':') {
            _ if s == "value" => Source::Value,
            _ if s == "error" => Source::Error,
            Some(("q", k)) => Source::Quantity(k.to_string()),
            Some(("p", k)) => Source::Param(k.to_string()),
            _ => Source::Quantity(s.to_string()),
        }
    }

    fn read(&self, r: &BoundReport) -> Option<String> {
        match self {
            Source::Value => Some(fmt_f64(r.value())),
            Source::Error => Some(fmt_f64(r.error())),
            Source::Quantity(k) => r
                .quantity(k)
                .map(fmt_f64)
                .or_else(|| r.params.get(k).map(fmt_json)),
            Source::Param(k) => r.params.get(k).map(fmt_json),
        }
    }
}

/// Layout of a plot table: the sweep axis, an optional grouping parameter
/// for long format, and the value columns as `(header, source)`.
#[derive(Debug, Clone)]
pub struct PlotSpec {
    pub axis: String,
    pub group: Option<String>,
    pub columns: Vec<(String, Source)>,
}

impl PlotSpec {
    pub fn new(axis: &str) -> Self {
        PlotSpec { axis: axis.to_string(), group: None, columns: Vec::new() }
    }

    pub fn group_by(mut self, key: &str) -> Self {
        self.group = Some(key.to_string());
        self
    }

    pub fn column(mut self, header: &str, source: Source) -> Self {
        self.columns.push((header.to_string(), source));
        self
    }
}

fn fmt_f64(v: f64) -> String {
    if v.is_finite() {
        // Shortest round-trip representation.
        format!("{v:?}")
    } else if v.is_nan() {
        "NAN".into()
    } else if v > 0.0 {
        "INFINITE".into()
    } else {
        "-INFINITE".into()
    }
}

fn fmt_json(v: &serde_json::Value) -> String {
    match v {
        serde_json::Value::String(s) => s.clone(),
        serde_json::Value::Number(n) => match n.as_f64() {
            Some(f) if !n.is_i64() && !n.is_u64() => fmt_f64(f),
            _ => n.to_string(),
        },
        other => other.to_string(),
    }
}

fn axis_value(r: &BoundReport, axis: &str) -> Option<f64> {
    r.params
        .get(axis)
        .and_then(|v| v.as_f64())
        .or_else(|| r.quantity(axis))
}

/// Builds the header and rows of a tidy table.
///
/// Every report must carry the axis as a numeric parameter or quantity.
/// Within a group the axis values must be distinct, and every group must
/// cover the same axis values.
pub fn plot_rows(reports: &[BoundReport], spec: &PlotSpec) -> Result<(Vec<String>, Vec<Vec<String>>)> {
    if reports.is_empty() {
        return Err(LabError::invalid("no reports to emit"));
    }
    let mut groups: BTreeMap<String, Vec<(f64, &BoundReport)>> = BTreeMap::new();
    for (i, r) in reports.iter().enumerate() {
        let x = axis_value(r, &spec.axis).ok_or_else(|| {
            LabError::invalid(format!("report {i} ({}) has no numeric axis {:?}", r.name, spec.axis))
        })?;
        let g = match &spec.group {
            Some(key) => r
                .params
                .get(key)
                .map(fmt_json)
                .ok_or_else(|| LabError::invalid(format!("report {i} has no group key {key:?}")))?,
            None => String::new(),
        };
        groups.entry(g).or_default().push((x, r));
    }
    let mut reference: Option<Vec<f64>> = None;
    for (g, rows) in groups.iter_mut() {
        rows.sort_by(|a, b| a.0.total_cmp(&b.0));
        if rows.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(LabError::invalid(format!("repeated {} value in group {g:?}", spec.axis)));
        }
        let xs: Vec<f64> = rows.iter().map(|r| r.0).collect();
        match &reference {
            None => reference = Some(xs),
            Some(want) if *want != xs => {
                return Err(LabError::invalid(format!("group {g:?} does not share the {} axis", spec.axis)))
            }
            _ => {}
        }
    }

    let mut header = vec![spec.axis.clone()];
    if let Some(key) = &spec.group {
        header.push(key.clone());
    }
    header.extend(spec.columns.iter().map(|c| c.0.clone()));

    let mut out = Vec::new();
    for (g, rows) in &groups {
        for (x, r) in rows {
            let mut row = vec![match r.params.get(&spec.axis) {
                Some(v) => fmt_json(v),
                None => fmt_f64(*x),
            }];
            if spec.group.is_some() {
                row.push(g.clone());
            }
            for (h, src) in &spec.columns {
                row.push(src.read(r).ok_or_else(|| {
                    LabError::invalid(format!("report {} lacks column {h:?}", r.name))
                })?);
            }
            out.push(row);
        }
    }
    Ok((header, out))
}

/// Writes a tidy CSV, one row per report.
pub fn emit_plotdata<W: Write>(reports: &[BoundReport], spec: &PlotSpec, w: W) -> Result<()> {
    let (header, rows) = plot_rows(reports, spec)?;
    let mut out = csv::Writer::from_writer(w);
    out.write_record(&header)?;
    for row in rows {
        out.write_record(&row)?;
    }
    out.flush()?;
    Ok(())
}

/// The usual layout for certifier sweeps over `k`.
pub fn certifier_sweep_spec() -> PlotSpec {
    PlotSpec::new("k")
        .column("lower_bound", Source::Value)
        .column("slack_min", Source::Quantity("min_slack".into()))
}

/// Long format for `W_n` bound sweeps, one group per model.
pub fn wn_sweep_spec() -> PlotSpec {
    PlotSpec::new("n").group_by("fd").column("bound", Source::Value)
}
