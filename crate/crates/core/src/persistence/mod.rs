//! Excursion filtrations, persistence diagrams and the bottleneck distance.

mod bottleneck;
mod diagram;
mod filtration;
mod matrix;
mod q0;

pub use bottleneck::{bottleneck_distance, bottleneck_matrix, write_matrix_csv, PlaneNorm};
pub use diagram::PersistenceDiagram;
pub use filtration::{uniform_grid, Filtration, DEFAULT_STEP};
pub use matrix::{persistence_matrix, CELL_BUDGET};
pub use q0::persistence_q0;
