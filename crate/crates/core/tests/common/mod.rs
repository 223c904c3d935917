#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use reservoir_topo::geostat::{sgs_realize, SgsConfig, VariogramModel};
use reservoir_topo::grid::{CellSet, GridGeometry, ScalarField, ValueKind};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_set(rng: &mut ChaCha8Rng, counts: [usize; 3], density: f64) -> CellSet {
    let g = GridGeometry::unit(counts).unwrap();
    CellSet::from_fn(g, |_| rng.gen_bool(density))
}

pub fn random_alpha(rng: &mut ChaCha8Rng, counts: [usize; 3]) -> ScalarField {
    let g = GridGeometry::unit(counts).unwrap();
    let values = (0..g.len()).map(|_| rng.gen::<f64>()).collect();
    ScalarField::new(g, values, ValueKind::Alpha).unwrap()
}

/// Unit-spaced SGS realization in alpha form.
pub fn sgs_field(n: usize, range: f64, gaussian: bool, seed: u64) -> ScalarField {
    let g = GridGeometry::unit([n, n, n]).unwrap();
    let model = if gaussian {
        VariogramModel::gaussian(range)
    } else {
        VariogramModel::exponential(range)
    }
    .unwrap();
    sgs_realize(&g, &model, &[], &SgsConfig::with_seed(seed)).unwrap()
}
