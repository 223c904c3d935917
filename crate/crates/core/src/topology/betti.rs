use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use super::complex::cell_counts;
use super::components::{complement_components, foreground_components};
use crate::error::Result;
use crate::grid::{excursion_set, CellSet, ScalarField};

/// Betti numbers over Z2, the Euler characteristic and volume-weighted
/// Betti numbers of one cell set.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BettiSummary {
    pub b0: usize,
    pub b1: usize,
    pub b2: usize,
    pub chi: i64,
    /// Number of filled cells.
    pub volume: usize,
    /// `b_i / volume`, zero for an empty set.
    pub weighted: [f64; 3],
}

impl BettiSummary {
    pub fn betti(&self) -> [usize; 3] {
        [self.b0, self.b1, self.b2]
    }

    /// Weighted Betti numbers with the volume measured in physical units
    /// (cell count times `cell_volume`).
    pub fn weighted_by_cell_volume(&self, cell_volume: f64) -> [f64; 3] {
        self.weighted.map(|w| w / cell_volume)
    }
}

/// Betti numbers of the face-glued complex of `set`.
///
/// Only component counts are needed: `b0` counts face-connected pieces,
/// `b2` counts bounded components of the complement, `chi` comes from the
/// cell counts, and `b1 = b0 + b0(complement) - 1 - chi`.
pub fn betti_numbers(set: &CellSet) -> BettiSummary {
    let volume = set.len();
    let b0 = foreground_components(set);
    let outside = complement_components(set);
    let chi = cell_counts(set).euler_characteristic();
    let b1 = b0 as i64 + outside as i64 - 1 - chi;
    debug_assert!(b1 >= 0, "negative b1 = {b1}");
    let b1 = b1.max(0) as usize;
    let b2 = outside - 1;
    let weighted = if volume == 0 {
        [0.0; 3]
    } else {
        [b0, b1, b2].map(|b| b as f64 / volume as f64)
    };
    BettiSummary {
        b0,
        b1,
        b2,
        chi,
        volume,
        weighted,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BettiRow {
    pub alpha: f64,
    pub summary: BettiSummary,
}

/// Betti numbers of the excursion sets of a field at each threshold,
/// computed in parallel.
pub fn betti_table(field: &ScalarField, alphas: &[f64]) -> Result<Vec<BettiRow>> {
    alphas
        .par_iter()
        .map(|&alpha| {
            let set = excursion_set(field, alpha)?;
            Ok(BettiRow {
                alpha,
                summary: betti_numbers(&set),
            })
        })
        .collect()
}

pub const BETTI_CSV_HEADER: &str = "alpha,b0,b1,b2,chi,volume,b0w,b1w,b2w";

/// Write rows as `alpha,b0,b1,b2,chi,volume,b0w,b1w,b2w`.
///
/// `volume_scale` multiplies the cell count (1 for cube units, the cell
/// volume for physical units).
pub fn write_betti_csv(
    rows: &[BettiRow],
    volume_scale: f64,
    mut w: impl Write,
) -> std::io::Result<()> {
    writeln!(w, "{BETTI_CSV_HEADER}")?;
    for row in rows {
        let s = &row.summary;
        let weighted = if volume_scale == 1.0 {
            s.weighted
        } else {
            s.weighted_by_cell_volume(volume_scale)
        };
        let volume = s.volume as f64 * volume_scale;
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{}",
            row.alpha, s.b0, s.b1, s.b2, s.chi, volume, weighted[0], weighted[1], weighted[2]
        )?;
    }
    Ok(())
}
