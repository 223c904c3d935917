//! Sequential Gaussian simulation on a regular grid.
//!
//! Unconditioned cells are visited along a seeded random path. Each one is
//! kriged from the nearest already-known cells (conditioning data and
//! earlier draws) and then drawn from a normal distribution centred on the
//! kriging estimate with the kriging variance.

use std::fs;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use super::kriging::{KrigingMode, KrigingSystem};
use super::variogram::VariogramModel;
use crate::error::{Error, Result};
use crate::grid::{GridGeometry, ScalarField, ValueKind};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MarginalTransform {
    /// Simulate in normal space and report `alpha = Phi((z - m) / sqrt(sill))`.
    #[default]
    GaussianCdf,
    /// Report the simulated values as they are.
    None,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SgsConfig {
    pub seed: u64,
    pub max_points: usize,
    /// Neighbour search radius in metres; `None` means twice the variogram
    /// range.
    pub search_radius: Option<f64>,
    pub mode: KrigingMode,
    pub marginal_transform: MarginalTransform,
    /// Relative diagonal regularization of each kriging matrix.
    pub jitter: f64,
}

impl Default for SgsConfig {
    fn default() -> Self {
        SgsConfig {
            seed: 0,
            max_points: 16,
            search_radius: None,
            mode: KrigingMode::Ordinary,
            marginal_transform: MarginalTransform::GaussianCdf,
            jitter: 1e-9,
        }
    }
}

impl SgsConfig {
    pub fn with_seed(seed: u64) -> Self {
        SgsConfig {
            seed,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_points == 0 {
            return Err(Error::InvalidConfig("max_points must be at least 1".into()));
        }
        if let Some(r) = self.search_radius {
            if !(r.is_finite() && r > 0.0) {
                return Err(Error::InvalidConfig(format!(
                    "search radius must be positive, got {r}"
                )));
            }
        }
        if !(self.jitter.is_finite() && self.jitter >= 0.0) {
            return Err(Error::InvalidConfig("jitter must be nonnegative".into()));
        }
        Ok(())
    }
}

/// A known value at a grid cell (zero-based linear index).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConditioningPoint {
    pub cell: usize,
    pub value: f64,
}

/// Read `kx,ky,kz,value` rows with one-based cell triples.
pub fn read_conditioning(path: &Path, geometry: &GridGeometry) -> Result<Vec<ConditioningPoint>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut out = Vec::new();
    for (row, record) in reader.deserialize::<(i64, i64, i64, f64)>().enumerate() {
        let (kx, ky, kz, value) =
            record.map_err(|e| Error::parse(path, format!("row {}: {e}", row + 1)))?;
        let t = [kx - 1, ky - 1, kz - 1];
        if !geometry.contains(t) {
            return Err(Error::parse(
                path,
                format!(
                    "row {}: cell ({kx},{ky},{kz}) lies outside the grid",
                    row + 1
                ),
            ));
        }
        if !value.is_finite() {
            return Err(Error::parse(
                path,
                format!("row {}: non-finite value", row + 1),
            ));
        }
        out.push(ConditioningPoint {
            cell: geometry.index([t[0] as usize, t[1] as usize, t[2] as usize]),
            value,
        });
    }
    Ok(out)
}

/// Neighbour offsets within a radius, nearest first.
struct SearchTemplate {
    offsets: Vec<[i32; 3]>,
}

impl SearchTemplate {
    fn new(geometry: &GridGeometry, radius: f64) -> Self {
        let counts = geometry.counts();
        let spacing = geometry.spacing();
        let reach: [i32; 3] = std::array::from_fn(|a| {
            let cells = (radius / spacing[a]).floor() as i64;
            cells.min(counts[a] as i64 - 1) as i32
        });
        let mut offsets = Vec::new();
        for dk in -reach[2]..=reach[2] {
            for dj in -reach[1]..=reach[1] {
                for di in -reach[0]..=reach[0] {
                    if (di, dj, dk) == (0, 0, 0) {
                        continue;
                    }
                    let d2 = offset_dist2([di, dj, dk], spacing);
                    if d2 <= radius * radius {
                        offsets.push(([di, dj, dk], d2));
                    }
                }
            }
        }
        offsets.sort_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)));
        SearchTemplate {
            offsets: offsets.into_iter().map(|(o, _)| o).collect(),
        }
    }
}

fn offset_dist2(o: [i32; 3], spacing: [f64; 3]) -> f64 {
    (0..3)
        .map(|a| {
            let d = o[a] as f64 * spacing[a];
            d * d
        })
        .sum()
}

/// Draw one realization.
pub fn sgs_realize(
    geometry: &GridGeometry,
    model: &VariogramModel,
    conditioning: &[ConditioningPoint],
    config: &SgsConfig,
) -> Result<ScalarField> {
    model.validate()?;
    config.validate()?;
    let n = geometry.len();
    let std_normal = Normal::new(0.0, 1.0).expect("valid normal");
    let scale = model.sill.sqrt();

    // Working values live in simulation space; NaN marks unknown cells.
    let mut work = vec![f64::NAN; n];
    let mut fixed = vec![None; n];
    for p in conditioning {
        if p.cell >= n {
            return Err(Error::InvalidConfig(format!(
                "conditioning cell {} outside a grid of {n} cells",
                p.cell
            )));
        }
        if fixed[p.cell].is_some() {
            return Err(Error::InvalidConfig(format!(
                "cell {} is conditioned twice",
                p.cell
            )));
        }
        let z = match config.marginal_transform {
            MarginalTransform::None => p.value,
            MarginalTransform::GaussianCdf => {
                if !(p.value > 0.0 && p.value < 1.0) {
                    return Err(Error::InvalidConfig(format!(
                        "conditioning value {} at cell {} is outside (0, 1)",
                        p.value, p.cell
                    )));
                }
                model.mean + scale * std_normal.inverse_cdf(p.value)
            }
        };
        work[p.cell] = z;
        fixed[p.cell] = Some(p.value);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut path: Vec<usize> = (0..n).filter(|&c| fixed[c].is_none()).collect();
    path.shuffle(&mut rng);

    let radius = config.search_radius.unwrap_or(2.0 * model.range);
    let template = SearchTemplate::new(geometry, radius);
    let spacing = geometry.spacing();
    let mut system = KrigingSystem::default();
    let mut near: Vec<([i32; 3], f64)> = Vec::with_capacity(config.max_points);

    for &cell in &path {
        let t = geometry.triple(cell);
        near.clear();
        for o in &template.offsets {
            let q = [
                t[0] as i64 + o[0] as i64,
                t[1] as i64 + o[1] as i64,
                t[2] as i64 + o[2] as i64,
            ];
            if !geometry.contains(q) {
                continue;
            }
            let v = work[geometry.index([q[0] as usize, q[1] as usize, q[2] as usize])];
            if !v.is_nan() {
                near.push((*o, v));
                if near.len() == config.max_points {
                    break;
                }
            }
        }
        let k = system.solve(
            model,
            near.len(),
            |i, j| {
                let (a, b) = (near[i].0, near[j].0);
                offset_dist2([a[0] - b[0], a[1] - b[1], a[2] - b[2]], spacing).sqrt()
            },
            |i| offset_dist2(near[i].0, spacing).sqrt(),
            |i| near[i].1,
            config.mode,
            config.jitter,
        )?;
        let xi: f64 = rng.sample(StandardNormal);
        work[cell] = k.estimate + k.variance.sqrt() * xi;
    }

    let (values, kind) = match config.marginal_transform {
        MarginalTransform::None => (
            (0..n).map(|c| fixed[c].unwrap_or(work[c])).collect(),
            ValueKind::ZValue,
        ),
        MarginalTransform::GaussianCdf => (
            (0..n)
                .map(|c| fixed[c].unwrap_or_else(|| std_normal.cdf((work[c] - model.mean) / scale)))
                .collect(),
            ValueKind::Alpha,
        ),
    };
    ScalarField::new(*geometry, values, kind)
}
