//! Topological characteristics of stochastic 3D reservoir models.
//!
//! The crate covers the whole pipeline:
//!
//! * [`grid`]: grid geometry, per-cell fields, alpha normalization and
//!   excursion sets; [`io`] reads and writes gridded fields.
//! * [`geostat`]: exponential and Gaussian covariance models, kriging and
//!   sequential Gaussian simulation.
//! * [`topology`]: the face-glued cubic complex of an excursion set, its
//!   Euler characteristic and Betti numbers.
//! * [`persistence`]: excursion filtrations, persistence diagrams and the
//!   bottleneck distance.
//! * [`homology_oracle`]: an independent boundary-matrix computation of
//!   Betti numbers used to check [`topology`].

pub mod error;
pub mod geostat;
pub mod grid;
pub mod homology_oracle;
pub mod io;
pub mod persistence;
pub mod topology;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/grids.md")]
    mod grids {}
    #[doc = include_str!("../../../book/src/simulation.md")]
    mod simulation {}
    #[doc = include_str!("../../../book/src/complexes.md")]
    mod complexes {}
    #[doc = include_str!("../../../book/src/betti.md")]
    mod betti {}
    #[doc = include_str!("../../../book/src/persistence.md")]
    mod persistence {}
    #[doc = include_str!("../../../book/src/bottleneck.md")]
    mod bottleneck {}
}
