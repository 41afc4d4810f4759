//! Empirical compression curves `k -> ε(2^-k)` and the `C / |log δ|` fit.

use super::anneal::{optimize_from, AnnealSchedule};
use super::keich::keich_family;
use super::separated::separated_direction_family;
use crate::error::{LabError, Result};
use crate::geometry::{compression_ratio, tube::DEFAULT_WINDOW, TubeFamily};
use crate::report::FLAG_CERTIFIED;
use serde::{Deserialize, Serialize};
use std::io::Write;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CurveMode {
    Keich,
    /// Keich start refined by annealing.
    Optimized { iters: usize, seed: u64 },
    Separated,
}

impl CurveMode {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "keich" => Ok(CurveMode::Keich),
            "optimized" => Ok(CurveMode::Optimized { iters: 200, seed: 0 }),
            "separated" => Ok(CurveMode::Separated),
            _ => Err(LabError::invalid(format!("unknown curve mode {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FPoint {
    pub k: u32,
    pub delta: f64,
    pub epsilon: f64,
    pub err: f64,
    pub certificate: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveFit {
    /// `C` in `ε ≈ C / (k ln 2)`.
    pub c: f64,
    pub form: String,
    /// `(ε - fit) / ε` per point.
    pub residuals: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FCurve {
    pub points: Vec<FPoint>,
    pub fit: Option<CurveFit>,
    pub flags: Vec<String>,
}

/// Least squares through the origin of `ε` against `1 / (k ln 2)`.
pub fn fit_inverse_log(points: &[FPoint]) -> Option<CurveFit> {
    if points.len() < 2 {
        return None;
    }
    let xs: Vec<f64> = points.iter().map(|p| 1.0 / (p.k as f64 * std::f64::consts::LN_2)).collect();
    let sxy: f64 = xs.iter().zip(points).map(|(x, p)| x * p.epsilon).sum();
    let sxx: f64 = xs.iter().map(|x| x * x).sum();
    let c = sxy / sxx;
    let residuals = xs.iter().zip(points).map(|(x, p)| (p.epsilon - c * x) / p.epsilon).collect();
    Some(CurveFit { c, form: "C/|log delta|".into(), residuals })
}

pub fn family_for(k: u32, mode: CurveMode) -> Result<TubeFamily> {
    match mode {
        CurveMode::Keich => keich_family(k, DEFAULT_WINDOW),
        CurveMode::Optimized { iters, seed } => {
            let start = keich_family(k, DEFAULT_WINDOW)?;
            let mut f = optimize_from(start.tubes().to_vec(), seed, iters, AnnealSchedule::default())?;
            f.meta_mut().name = format!("keich-annealed-k{k}");
            Ok(f)
        }
        CurveMode::Separated => separated_direction_family(2f64.powi(-(k as i32))),
    }
}

/// Evaluates `ε(2^-k)` for each `k` with cell size `δ / subdivisions`.
pub fn f_curve(ks: &[u32], mode: CurveMode, subdivisions: f64) -> Result<FCurve> {
    if ks.is_empty() {
        return Err(LabError::invalid("need at least one k"));
    }
    if ks.windows(2).any(|w| w[1] <= w[0]) {
        return Err(LabError::invalid("k values must increase"));
    }
    if !(subdivisions > 4.0) {
        return Err(LabError::ResolutionTooCoarse("need more than 4 cells per width".into()));
    }
    let mut points = Vec::with_capacity(ks.len());
    for &k in ks {
        let fam = family_for(k, mode)?;
        let enforce = !matches!(mode, CurveMode::Separated);
        let r = compression_ratio(&fam, fam.delta() / subdivisions, enforce)?;
        points.push(FPoint {
            k,
            delta: fam.delta(),
            epsilon: r.value(),
            err: r.error(),
            certificate: r.has_flag(FLAG_CERTIFIED),
        });
    }
    let fit = fit_inverse_log(&points);
    let mut flags = Vec::new();
    if fit.is_none() {
        flags.push("DEGENERATE_FIT".to_string());
    }
    Ok(FCurve { points, fit, flags })
}

impl FCurve {
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(w);
        wtr.write_record(["k", "delta", "epsilon", "err", "certificate"])?;
        for p in &self.points {
            wtr.write_record([
                p.k.to_string(),
                p.delta.to_string(),
                p.epsilon.to_string(),
                p.err.to_string(),
                p.certificate.to_string(),
            ])?;
        }
        wtr.flush()?;
        Ok(())
    }

    pub fn read_csv<R: std::io::Read>(r: R) -> Result<Self> {
        let mut rdr = csv::Reader::from_reader(r);
        let mut points = Vec::new();
        for rec in rdr.deserialize() {
            let p: FPoint = rec?;
            points.push(p);
        }
        if points.is_empty() {
            return Err(LabError::Parse("empty curve".into()));
        }
        let fit = fit_inverse_log(&points);
        let flags = if fit.is_none() { vec!["DEGENERATE_FIT".to_string()] } else { Vec::new() };
        Ok(FCurve { points, fit, flags })
    }
}
