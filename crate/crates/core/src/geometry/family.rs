//! Finite families of same-width tubes and their JSON form.

use super::tube::{make_tube, translate_tube, Tube};
use crate::error::{LabError, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct FamilyMeta {
    pub name: String,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub params: BTreeMap<String, serde_json::Value>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TubeFamily {
    tubes: Vec<Tube>,
    meta: FamilyMeta,
}

#[derive(Serialize, Deserialize)]
struct TubeJson {
    origin: Vec<f64>,
    direction: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct FamilyJson {
    d: usize,
    delta: f64,
    window: [f64; 2],
    tubes: Vec<TubeJson>,
    meta: FamilyMeta,
}

impl TubeFamily {
    pub fn new(tubes: Vec<Tube>, meta: FamilyMeta) -> Result<Self> {
        let first = tubes
            .first()
            .ok_or_else(|| LabError::invalid("a tube family cannot be empty"))?;
        for (i, t) in tubes.iter().enumerate() {
            if t.dim() != first.dim()
                || t.delta() != first.delta()
                || t.window() != first.window()
                || t.length() != 1.0
            {
                return Err(LabError::invalid(format!(
                    "tube {i} does not share dimension, width, window and unit length with tube 0"
                )));
            }
        }
        Ok(TubeFamily { tubes, meta })
    }

    pub fn named(tubes: Vec<Tube>, name: &str) -> Result<Self> {
        Self::new(tubes, FamilyMeta { name: name.to_string(), ..Default::default() })
    }

    pub fn tubes(&self) -> &[Tube] {
        &self.tubes
    }

    pub fn len(&self) -> usize {
        self.tubes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tubes.is_empty()
    }

    pub fn delta(&self) -> f64 {
        self.tubes[0].delta()
    }

    pub fn dim(&self) -> usize {
        self.tubes[0].dim()
    }

    pub fn window(&self) -> (f64, f64) {
        self.tubes[0].window()
    }

    pub fn meta(&self) -> &FamilyMeta {
        &self.meta
    }

    pub fn meta_mut(&mut self) -> &mut FamilyMeta {
        &mut self.meta
    }

    pub fn translates(&self) -> Vec<Tube> {
        self.tubes.iter().map(translate_tube).collect()
    }

    pub fn total_measure(&self) -> f64 {
        self.tubes.iter().map(|t| t.measure()).sum()
    }

    /// Planar rigid motion: rotate by `angle` about the origin, then shift.
    pub fn rigid_motion(&self, angle: f64, shift: [f64; 2]) -> Result<TubeFamily> {
        if self.dim() != 2 {
            return Err(LabError::invalid("rigid_motion is planar only"));
        }
        let (c, s) = (angle.cos(), angle.sin());
        let rot = |p: &[f64]| [c * p[0] - s * p[1], s * p[0] + c * p[1]];
        let tubes = self
            .tubes
            .iter()
            .map(|t| {
                let o = rot(t.origin());
                let v = rot(t.direction());
                make_tube(2, &[o[0] + shift[0], o[1] + shift[1]], &v, t.delta(), t.window())
            })
            .collect::<Result<Vec<_>>>()?;
        TubeFamily::new(tubes, self.meta.clone())
    }

    /// Union of the bounding boxes of tubes and translates.
    pub fn bbox(&self) -> (Vec<f64>, Vec<f64>) {
        let d = self.dim();
        let mut lo = vec![f64::INFINITY; d];
        let mut hi = vec![f64::NEG_INFINITY; d];
        for t in self.tubes.iter().chain(self.translates().iter()) {
            let (a, b) = t.bbox();
            for i in 0..d {
                lo[i] = lo[i].min(a[i]);
                hi[i] = hi[i].max(b[i]);
            }
        }
        (lo, hi)
    }

    pub fn to_json(&self) -> Result<String> {
        let fj = FamilyJson {
            d: self.dim(),
            delta: self.delta(),
            window: [self.window().0, self.window().1],
            tubes: self
                .tubes
                .iter()
                .map(|t| TubeJson { origin: t.origin().to_vec(), direction: t.direction().to_vec() })
                .collect(),
            meta: self.meta.clone(),
        };
        Ok(serde_json::to_string_pretty(&fj)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let fj: FamilyJson = serde_json::from_str(s)?;
        let tubes = fj
            .tubes
            .iter()
            .map(|t| make_tube(fj.d, &t.origin, &t.direction, fj.delta, (fj.window[0], fj.window[1])))
            .collect::<Result<Vec<_>>>()?;
        // keep stored directions exactly as written so the round trip is bitwise
        let tubes = tubes
            .into_iter()
            .zip(&fj.tubes)
            .map(|(t, tj)| {
                let n: f64 = tj.direction.iter().map(|v| v * v).sum::<f64>().sqrt();
                if (n - 1.0).abs() <= 1e-12 {
                    t.with_direction_unchecked(&tj.direction)
                } else {
                    t
                }
            })
            .collect();
        TubeFamily::new(tubes, fj.meta)
    }
}

impl Tube {
    pub(crate) fn with_direction_unchecked(&self, dir: &[f64]) -> Tube {
        let mut t = self.clone();
        t.set_direction(dir);
        t
    }
}
