//! Covariance models, kriging and sequential Gaussian simulation.

mod kriging;
mod sgs;
mod variogram;

pub use kriging::{krige, KrigingMode, KrigingResult};
pub use sgs::{read_conditioning, sgs_realize, ConditioningPoint, MarginalTransform, SgsConfig};
pub use variogram::{VariogramKind, VariogramModel};

use crate::grid::ScalarField;

/// Experimental semivariogram along one grid axis: for each lag `1..=max_lag`
/// (in cells) returns `(distance, gamma)` with
/// `gamma = mean((z(p) - z(p + h))^2) / 2` over all pairs inside the grid.
pub fn axis_variogram(field: &ScalarField, axis: usize, max_lag: usize) -> Vec<(f64, f64)> {
    assert!(axis < 3, "axis must be 0, 1 or 2");
    let g = field.geometry();
    let counts = g.counts();
    let spacing = g.spacing()[axis];
    (1..=max_lag.min(counts[axis].saturating_sub(1)))
        .map(|lag| {
            let mut sum = 0.0;
            let mut pairs = 0usize;
            for c in 0..g.len() {
                let mut t = g.triple(c);
                if t[axis] + lag >= counts[axis] {
                    continue;
                }
                let a = field.value(c);
                t[axis] += lag;
                let d = a - field.value(g.index(t));
                sum += d * d;
                pairs += 1;
            }
            (lag as f64 * spacing, 0.5 * sum / pairs as f64)
        })
        .collect()
}
