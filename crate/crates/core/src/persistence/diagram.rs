use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::io::write_atomic;

/// A persistence diagram of one homology dimension.
///
/// Finite points are `(birth, death)` with `birth < death`; classes that
/// never die are kept apart as their birth values. The diagonal is implicit.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PersistenceDiagram {
    pub q: usize,
    pub points: Vec<[f64; 2]>,
    pub essential: Vec<f64>,
}

impl PersistenceDiagram {
    pub fn new(q: usize) -> Self {
        PersistenceDiagram {
            q,
            ..Default::default()
        }
    }

    pub fn len(&self) -> usize {
        self.points.len() + self.essential.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Sort points and essential births so equal multisets compare equal.
    pub fn canonicalize(&mut self) {
        self.points
            .sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
        self.essential.sort_by(f64::total_cmp);
    }

    pub fn canonical(mut self) -> Self {
        self.canonicalize();
        self
    }

    /// Classes alive at `t`: `birth <= t < death`.
    pub fn alive_at(&self, t: f64) -> usize {
        self.points.iter().filter(|p| p[0] <= t && t < p[1]).count()
            + self.essential.iter().filter(|&&b| b <= t).count()
    }

    pub fn validate(&self) -> Result<()> {
        for p in &self.points {
            if !(p[0].is_finite() && p[1].is_finite() && p[0] < p[1]) {
                return Err(Error::Metric(format!(
                    "diagram point {p:?} must satisfy birth < death"
                )));
            }
        }
        if self.essential.iter().any(|b| !b.is_finite()) {
            return Err(Error::Metric("essential births must be finite".into()));
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("diagram serializes")
    }

    pub fn from_json(text: &str) -> std::result::Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let d = Self::from_json(&text)
            .map_err(|e| Error::parse(path, format!("malformed diagram: {e}")))?;
        d.validate()
            .map_err(|e| Error::parse(path, e.to_string()))?;
        Ok(d)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let json = self.to_json();
        write_atomic(path, |w| {
            use std::io::Write;
            w.write_all(json.as_bytes())?;
            w.write_all(b"\n")
        })
    }
}
