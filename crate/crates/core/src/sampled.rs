//! Uniformly sampled functions of one real variable.

use crate::error::{LabError, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::io::{Read, Write};

/// Samples `values[i]` of a function at `start + i * spacing`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampledFunction {
    start: f64,
    spacing: f64,
    values: Vec<Complex64>,
}

impl SampledFunction {
    pub fn new(start: f64, spacing: f64, values: Vec<Complex64>) -> Result<Self> {
        if !(spacing > 0.0) || !spacing.is_finite() || !start.is_finite() {
            return Err(LabError::invalid(format!("spacing must be positive, got {spacing}")));
        }
        if values.is_empty() {
            return Err(LabError::invalid("a sampled function needs at least one value"));
        }
        if let Some(i) = values.iter().position(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(LabError::invalid(format!("non-finite sample at index {i}")));
        }
        Ok(SampledFunction { start, spacing, values })
    }

    pub fn from_real(start: f64, spacing: f64, values: &[f64]) -> Result<Self> {
        Self::new(start, spacing, values.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }

    /// Samples `f` at `n` points starting from `start`.
    pub fn from_fn(start: f64, spacing: f64, n: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        let vals: Vec<f64> = (0..n).map(|i| f(start + i as f64 * spacing)).collect();
        Self::from_real(start, spacing, &vals)
    }

    pub fn from_complex_fn(
        start: f64,
        spacing: f64,
        n: usize,
        f: impl Fn(f64) -> Complex64,
    ) -> Result<Self> {
        Self::new(start, spacing, (0..n).map(|i| f(start + i as f64 * spacing)).collect())
    }

    pub fn start(&self) -> f64 {
        self.start
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn x(&self, i: usize) -> f64 {
        self.start + i as f64 * self.spacing
    }

    pub fn end(&self) -> f64 {
        self.x(self.len() - 1)
    }

    pub fn re(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.re).collect()
    }

    pub fn abs(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.norm()).collect()
    }

    pub fn is_real(&self) -> bool {
        self.values.iter().all(|v| v.im == 0.0)
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.norm()))
    }

    /// Same grid, new values.
    pub fn with_values(&self, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != self.len() {
            return Err(LabError::invalid("value count does not match the grid"));
        }
        Self::new(self.start, self.spacing, values)
    }

    /// Linear interpolation; zero outside the sampled range.
    pub fn eval(&self, x: f64) -> Complex64 {
        let u = (x - self.start) / self.spacing;
        if !(u >= 0.0) || u > (self.len() - 1) as f64 {
            return Complex64::new(0.0, 0.0);
        }
        let i = (u.floor() as usize).min(self.len().saturating_sub(2));
        if self.len() == 1 {
            return self.values[0];
        }
        let t = u - i as f64;
        self.values[i] * (1.0 - t) + self.values[i + 1] * t
    }

    /// Trapezoid rule over the sampled range.
    pub fn integral(&self) -> Complex64 {
        let n = self.len();
        if n < 2 {
            return Complex64::new(0.0, 0.0);
        }
        let inner: Complex64 = self.values[1..n - 1].iter().sum();
        (inner + (self.values[0] + self.values[n - 1]) * 0.5) * self.spacing
    }

    /// Cumulative trapezoid primitive, zero at the first sample.
    pub fn primitive(&self) -> SampledFunction {
        let mut out = Vec::with_capacity(self.len());
        let mut acc = Complex64::new(0.0, 0.0);
        out.push(acc);
        for w in self.values.windows(2) {
            acc += (w[0] + w[1]) * (0.5 * self.spacing);
            out.push(acc);
        }
        SampledFunction { start: self.start, spacing: self.spacing, values: out }
    }

    /// Reads `x,re[,im]` rows; a header line is allowed and the grid must be uniform.
    pub fn read_csv<R: Read>(r: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(false)
            .flexible(true)
            .trim(csv::Trim::All)
            .from_reader(r);
        let mut xs = Vec::new();
        let mut vals = Vec::new();
        for rec in rdr.records() {
            let rec = rec?;
            if rec.is_empty() || rec.get(0).map_or(true, |s| s.is_empty() || s.starts_with('#')) {
                continue;
            }
            let x: f64 = match rec[0].parse() {
                Ok(x) => x,
                Err(_) if xs.is_empty() => continue, // header
                Err(e) => return Err(LabError::Parse(format!("bad x value {:?}: {e}", &rec[0]))),
            };
            let re: f64 = rec
                .get(1)
                .ok_or_else(|| LabError::Parse("missing re column".into()))?
                .parse()
                .map_err(|e| LabError::Parse(format!("bad re value: {e}")))?;
            let im: f64 = match rec.get(2) {
                Some(s) if !s.is_empty() => {
                    s.parse().map_err(|e| LabError::Parse(format!("bad im value: {e}")))?
                }
                _ => 0.0,
            };
            xs.push(x);
            vals.push(Complex64::new(re, im));
        }
        if xs.len() < 2 {
            return Err(LabError::Parse("need at least two samples".into()));
        }
        let h = (xs[xs.len() - 1] - xs[0]) / (xs.len() - 1) as f64;
        for (i, &x) in xs.iter().enumerate() {
            if (x - (xs[0] + i as f64 * h)).abs() > 1e-6 * h.abs().max(1e-300) {
                return Err(LabError::Parse(format!("grid is not uniform at row {i}")));
            }
        }
        Self::new(xs[0], h, vals)
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(w);
        wtr.write_record(["x", "re", "im"])?;
        for (i, v) in self.values.iter().enumerate() {
            wtr.write_record([self.x(i).to_string(), v.re.to_string(), v.im.to_string()])?;
        }
        wtr.flush()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_grids() {
        assert!(SampledFunction::from_real(0.0, 0.0, &[1.0]).is_err());
        assert!(SampledFunction::from_real(0.0, 1.0, &[f64::NAN]).is_err());
        assert!(SampledFunction::from_real(0.0, 1.0, &[]).is_err());
    }

    #[test]
    fn trapezoid_and_primitive() {
        let f = SampledFunction::from_fn(0.0, 0.001, 1001, |x| x).unwrap();
        assert!((f.integral().re - 0.5).abs() < 1e-12);
        let p = f.primitive();
        assert!((p.values()[1000].re - 0.5).abs() < 1e-12);
        assert!((p.eval(0.5).re - 0.125).abs() < 1e-6);
    }

    #[test]
    fn csv_round_trip() {
        let f = SampledFunction::from_fn(-1.0, 0.25, 9, |x| x * x - 0.1).unwrap();
        let mut buf = Vec::new();
        f.write_csv(&mut buf).unwrap();
        let g = SampledFunction::read_csv(&buf[..]).unwrap();
        assert_eq!(f, g);
    }
}
