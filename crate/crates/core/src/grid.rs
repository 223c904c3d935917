//! Grid geometry, per-cell scalar fields and excursion sets.
//!
//! Cells are addressed by a linear index in x-fastest order (then y, then z),
//! the usual GSLIB layout. Triples `(i, j, k)` are zero-based here; file
//! formats that use one-based triples convert at the boundary.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An axis-aligned box split into `nx * ny * nz` elementary cubes.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridGeometry {
    origin: [f64; 3],
    counts: [usize; 3],
    spacing: [f64; 3],
}

impl GridGeometry {
    pub fn new(counts: [usize; 3], spacing: [f64; 3], origin: [f64; 3]) -> Result<Self> {
        if counts.contains(&0) {
            return Err(Error::InvalidGeometry(format!(
                "cell counts must be at least 1, got {counts:?}"
            )));
        }
        if spacing.iter().any(|&d| !(d.is_finite() && d > 0.0)) {
            return Err(Error::InvalidGeometry(format!(
                "spacings must be positive and finite, got {spacing:?}"
            )));
        }
        if origin.iter().any(|o| !o.is_finite()) {
            return Err(Error::InvalidGeometry(format!(
                "origin must be finite, got {origin:?}"
            )));
        }
        counts[0]
            .checked_mul(counts[1])
            .and_then(|n| n.checked_mul(counts[2]))
            .ok_or_else(|| Error::InvalidGeometry(format!("{counts:?} cells overflow")))?;
        Ok(GridGeometry {
            origin,
            counts,
            spacing,
        })
    }

    /// Unit spacing, origin at zero.
    pub fn unit(counts: [usize; 3]) -> Result<Self> {
        Self::new(counts, [1.0; 3], [0.0; 3])
    }

    pub fn counts(&self) -> [usize; 3] {
        self.counts
    }

    pub fn spacing(&self) -> [f64; 3] {
        self.spacing
    }

    pub fn origin(&self) -> [f64; 3] {
        self.origin
    }

    pub fn len(&self) -> usize {
        self.counts.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn cell_volume(&self) -> f64 {
        self.spacing.iter().product()
    }

    #[inline]
    pub fn index(&self, [i, j, k]: [usize; 3]) -> usize {
        debug_assert!(i < self.counts[0] && j < self.counts[1] && k < self.counts[2]);
        i + self.counts[0] * (j + self.counts[1] * k)
    }

    #[inline]
    pub fn triple(&self, index: usize) -> [usize; 3] {
        let [nx, ny, _] = self.counts;
        [index % nx, (index / nx) % ny, index / (nx * ny)]
    }

    pub fn contains(&self, [i, j, k]: [i64; 3]) -> bool {
        let [nx, ny, nz] = self.counts;
        i >= 0 && j >= 0 && k >= 0 && (i as usize) < nx && (j as usize) < ny && (k as usize) < nz
    }

    /// Physical position of the centre of a cell.
    pub fn center(&self, index: usize) -> [f64; 3] {
        let t = self.triple(index);
        std::array::from_fn(|a| self.origin[a] + (t[a] as f64 + 0.5) * self.spacing[a])
    }

    /// Euclidean distance between two cell centres.
    pub fn distance(&self, a: usize, b: usize) -> f64 {
        let (ta, tb) = (self.triple(a), self.triple(b));
        (0..3)
            .map(|ax| {
                let d = (ta[ax] as f64 - tb[ax] as f64) * self.spacing[ax];
                d * d
            })
            .sum::<f64>()
            .sqrt()
    }
}

/// What the numbers in a [`ScalarField`] mean.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ValueKind {
    /// Gamma-logging readings, uncalibrated.
    RawGl,
    /// A simulated or interpolated value in arbitrary units.
    ZValue,
    /// Normalized double-difference parameter, nominally in `[0, 1]`.
    Alpha,
}

impl ValueKind {
    pub fn name(self) -> &'static str {
        match self {
            ValueKind::RawGl => "raw_gl",
            ValueKind::ZValue => "z_value",
            ValueKind::Alpha => "alpha",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name.trim().to_ascii_lowercase().as_str() {
            "raw_gl" | "gl" => Some(ValueKind::RawGl),
            "z_value" | "z" => Some(ValueKind::ZValue),
            "alpha" => Some(ValueKind::Alpha),
            _ => None,
        }
    }
}

/// One value per cell of a [`GridGeometry`].
#[derive(Clone, Debug, PartialEq)]
pub struct ScalarField {
    geometry: GridGeometry,
    values: Vec<f64>,
    kind: ValueKind,
}

impl ScalarField {
    pub fn new(geometry: GridGeometry, values: Vec<f64>, kind: ValueKind) -> Result<Self> {
        if values.len() != geometry.len() {
            return Err(Error::InvalidGeometry(format!(
                "expected {} values for a {:?} grid, got {}",
                geometry.len(),
                geometry.counts(),
                values.len()
            )));
        }
        Ok(ScalarField {
            geometry,
            values,
            kind,
        })
    }

    pub fn from_fn(
        geometry: GridGeometry,
        kind: ValueKind,
        mut f: impl FnMut([usize; 3]) -> f64,
    ) -> Self {
        let values = (0..geometry.len()).map(|c| f(geometry.triple(c))).collect();
        ScalarField {
            geometry,
            values,
            kind,
        }
    }

    pub fn geometry(&self) -> &GridGeometry {
        &self.geometry
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn kind(&self) -> ValueKind {
        self.kind
    }

    pub fn value(&self, index: usize) -> f64 {
        self.values[index]
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// Relabel the values, e.g. to treat a simulated field already in
    /// `[0, 1]` as alpha.
    pub fn with_kind(mut self, kind: ValueKind) -> Self {
        self.kind = kind;
        self
    }

    pub fn min_max(&self) -> (f64, f64) {
        self.values
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
                (lo.min(v), hi.max(v))
            })
    }

    fn require(&self, kind: ValueKind) -> Result<()> {
        if self.kind == kind {
            Ok(())
        } else {
            Err(Error::WrongValueKind {
                expected: kind,
                found: self.kind,
            })
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClampPolicy {
    /// Clamp alpha into `[0, 1]` so the top of the filtration is the whole grid.
    #[default]
    Clamp,
    /// Keep raw values; useful for inspecting calibration problems.
    Keep,
}

/// Cells that fell outside `[0, 1]` during normalization.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct RangeReport {
    pub below_zero: usize,
    pub above_one: usize,
}

/// Convert gamma-logging readings to the double-difference parameter
/// `alpha = (GL - gl_min) / (gl_max - gl_min)`.
///
/// `gl_min` and `gl_max` are calibration values (clean reservoir and clay),
/// not necessarily the extremes of the field.
pub fn normalize_gl(
    field: &ScalarField,
    gl_min: f64,
    gl_max: f64,
    clamp: ClampPolicy,
) -> Result<(ScalarField, RangeReport)> {
    field.require(ValueKind::RawGl)?;
    if !(gl_max > gl_min) || !gl_min.is_finite() || !gl_max.is_finite() {
        return Err(Error::InvalidCalibration { gl_min, gl_max });
    }
    let width = gl_max - gl_min;
    let mut report = RangeReport::default();
    let values = field
        .values
        .iter()
        .map(|&gl| {
            let alpha = (gl - gl_min) / width;
            if alpha < 0.0 {
                report.below_zero += 1;
            } else if alpha > 1.0 {
                report.above_one += 1;
            }
            match clamp {
                ClampPolicy::Clamp => alpha.clamp(0.0, 1.0),
                ClampPolicy::Keep => alpha,
            }
        })
        .collect();
    Ok((
        ScalarField {
            geometry: field.geometry,
            values,
            kind: ValueKind::Alpha,
        },
        report,
    ))
}

/// A subset of the cells of a grid.
#[derive(Clone, Debug, PartialEq)]
pub struct CellSet {
    geometry: GridGeometry,
    members: Vec<bool>,
    threshold: Option<f64>,
}

impl CellSet {
    pub fn new(geometry: GridGeometry, members: Vec<bool>) -> Result<Self> {
        if members.len() != geometry.len() {
            return Err(Error::InvalidGeometry(format!(
                "expected {} membership flags, got {}",
                geometry.len(),
                members.len()
            )));
        }
        Ok(CellSet {
            geometry,
            members,
            threshold: None,
        })
    }

    pub fn empty(geometry: GridGeometry) -> Self {
        CellSet {
            members: vec![false; geometry.len()],
            geometry,
            threshold: None,
        }
    }

    pub fn full(geometry: GridGeometry) -> Self {
        CellSet {
            members: vec![true; geometry.len()],
            geometry,
            threshold: None,
        }
    }

    pub fn from_fn(geometry: GridGeometry, mut f: impl FnMut([usize; 3]) -> bool) -> Self {
        let members = (0..geometry.len()).map(|c| f(geometry.triple(c))).collect();
        CellSet {
            geometry,
            members,
            threshold: None,
        }
    }

    pub fn geometry(&self) -> &GridGeometry {
        &self.geometry
    }

    pub fn members(&self) -> &[bool] {
        &self.members
    }

    pub fn threshold(&self) -> Option<f64> {
        self.threshold
    }

    #[inline]
    pub fn contains(&self, index: usize) -> bool {
        self.members[index]
    }

    /// Membership test for a possibly out-of-grid triple.
    #[inline]
    pub fn contains_triple(&self, t: [i64; 3]) -> bool {
        self.geometry.contains(t)
            && self.members[self
                .geometry
                .index([t[0] as usize, t[1] as usize, t[2] as usize])]
    }

    pub fn insert(&mut self, index: usize) {
        self.members[index] = true;
    }

    pub fn remove(&mut self, index: usize) {
        self.members[index] = false;
    }

    pub fn len(&self) -> usize {
        self.members.iter().filter(|&&m| m).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.members.iter().any(|&m| m)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.members
            .iter()
            .enumerate()
            .filter_map(|(i, &m)| m.then_some(i))
    }

    pub fn is_subset(&self, other: &CellSet) -> bool {
        self.members
            .iter()
            .zip(&other.members)
            .all(|(&a, &b)| !a || b)
    }
}

/// Cells whose alpha does not exceed `alpha0`.
pub fn excursion_set(field: &ScalarField, alpha0: f64) -> Result<CellSet> {
    field.require(ValueKind::Alpha)?;
    Ok(CellSet {
        geometry: field.geometry,
        members: field.values.iter().map(|&v| v <= alpha0).collect(),
        threshold: Some(alpha0),
    })
}
