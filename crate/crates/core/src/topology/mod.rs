//! Unstacked cubic complexes of cell sets and their Betti numbers.
//!
//! Two cubes of an excursion set are connected only through a shared
//! 2-face. The complex is therefore built by gluing cubes along faces alone;
//! cubes that share just an edge or a corner are pulled apart.

mod betti;
pub mod cells;
mod complex;
mod components;

pub use betti::{
    betti_numbers, betti_table, write_betti_csv, BettiRow, BettiSummary, BETTI_CSV_HEADER,
};
pub use complex::{build_complex, cell_counts, CellCounts, CubicComplex};
pub use components::{
    complement_components, complement_components_with, foreground_components, Connectivity,
};

/// `c0 - c1 + c2 - c3` of a complex.
pub fn euler_characteristic(cx: &CubicComplex) -> i64 {
    cx.counts().euler_characteristic()
}
