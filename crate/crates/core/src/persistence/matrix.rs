//! Persistence in every degree by Z2 boundary-matrix reduction.
//!
//! The face-glued complexes of consecutive excursion sets are not nested:
//! when a new cube fills the gap around an edge, copies of that edge which
//! were apart become one cell. The step from one complex to the next is a
//! quotient map, not an inclusion. To get an honest filtration the maps are
//! replaced by their mapping telescope: each stage contributes its own copy
//! of the complex plus a cylinder `sigma x [0, 1]` for every cell of the
//! previous stage, glued to `sigma` at one end and to its image at the
//! other. Each telescope prefix deformation retracts onto the latest
//! complex, so the reduction yields the persistence of the original
//! sequence of maps.

use super::diagram::PersistenceDiagram;
use super::filtration::Filtration;
use crate::error::{Error, Result};
use crate::topology::{build_complex, cell_counts, cells, CubicComplex};

/// Largest telescope (total cells) accepted.
pub const CELL_BUDGET: usize = 2_000_000;

/// One stage of the telescope: its complex, boundary tables and the column
/// assigned to each of its cells.
struct Stage {
    cx: CubicComplex,
    bounds: Boundaries,
    ids: [Vec<u32>; 4],
}

/// Boundary tables of one complex, by class.
struct Boundaries {
    edges: Vec<[usize; 2]>,
    faces: Vec<[usize; 4]>,
    cubes: Vec<[usize; 6]>,
}

impl Boundaries {
    fn new(cx: &CubicComplex) -> Self {
        Boundaries {
            edges: cx.edge_boundaries(),
            faces: cx.face_boundaries(),
            cubes: cx.cube_boundaries(),
        }
    }

    fn of(&self, dim: usize, class: usize) -> &[usize] {
        match dim {
            1 => &self.edges[class],
            2 => &self.faces[class],
            3 => &self.cubes[class],
            _ => &[],
        }
    }
}

struct Columns {
    columns: Vec<Vec<u32>>,
    dims: Vec<u8>,
    stage: Vec<u32>,
}

impl Columns {
    fn push(&mut self, mut col: Vec<u32>, dim: usize, stage: usize) -> u32 {
        col.sort_unstable();
        debug_assert!(col.windows(2).all(|w| w[0] < w[1]));
        self.columns.push(col);
        self.dims.push(dim as u8);
        self.stage.push(stage as u32);
        (self.columns.len() - 1) as u32
    }
}

pub fn persistence_matrix(filtration: &Filtration<'_>, q: usize) -> Result<PersistenceDiagram> {
    if q > 2 {
        return Err(Error::InvalidConfig(format!(
            "homology degree must be 0, 1 or 2, got {q}"
        )));
    }
    let thresholds = filtration.thresholds();
    let mut stages: Vec<usize> = filtration.cell_stages().into_iter().flatten().collect();
    stages.sort_unstable();
    stages.dedup();

    let sets: Vec<_> = stages.iter().map(|&s| filtration.set_at(s)).collect();
    let sizes: Vec<usize> = sets
        .iter()
        .map(|s| cell_counts(s).as_array().iter().sum())
        .collect();
    // Every stage but the last also contributes one cylinder per cell.
    let total = 2 * sizes.iter().sum::<usize>() - sizes.last().copied().unwrap_or(0);
    if total > CELL_BUDGET {
        return Err(Error::SizeBudget {
            cells: total,
            budget: CELL_BUDGET,
        });
    }

    let mut cols = Columns {
        columns: Vec::with_capacity(total),
        dims: Vec::with_capacity(total),
        stage: Vec::with_capacity(total),
    };
    let mut prev: Option<Stage> = None;
    for (k, set) in sets.iter().enumerate() {
        let cx = build_complex(set);
        let counts = cx.counts().as_array();
        let bounds = Boundaries::new(&cx);
        let mut ids: [Vec<u32>; 4] = std::array::from_fn(|d| vec![u32::MAX; counts[d]]);
        let images = prev.as_ref().map(|p| class_images(&p.cx, &cx));
        let mut cyl: [Vec<u32>; 4] = match &prev {
            Some(p) => std::array::from_fn(|d| vec![u32::MAX; p.ids[d].len()]),
            None => Default::default(),
        };

        // Within a stage, lower dimensions first: every boundary cell of a
        // column then has a smaller index.
        for dim in 0..=4 {
            if dim <= 3 {
                for class in 0..counts[dim] {
                    let col = bounds
                        .of(dim, class)
                        .iter()
                        .map(|&b| ids[dim - 1][b])
                        .collect();
                    ids[dim][class] = cols.push(col, dim, k);
                }
            }
            if let (Some(p), Some(images)) = (&prev, &images) {
                if dim == 0 {
                    continue;
                }
                // Cylinder over a previous cell of dimension dim - 1:
                // both ends plus the cylinders over its boundary.
                let d = dim - 1;
                for class in 0..p.ids[d].len() {
                    let mut col = vec![p.ids[d][class], ids[d][images[d][class] as usize]];
                    col.extend(p.bounds.of(d, class).iter().map(|&b| cyl[d - 1][b]));
                    cyl[d][class] = cols.push(col, dim, k);
                }
            }
        }
        prev = Some(Stage { cx, bounds, ids });
    }

    let Columns {
        mut columns,
        dims,
        stage,
    } = cols;
    let pairs = reduce(&mut columns, &dims);

    let value = |col: u32| thresholds[stages[stage[col as usize] as usize]];
    let mut diagram = PersistenceDiagram::new(q);
    let mut paired = vec![false; columns.len()];
    for &(birth, death) in &pairs {
        paired[birth as usize] = true;
        paired[death as usize] = true;
        if dims[birth as usize] as usize == q && stage[birth as usize] < stage[death as usize] {
            diagram.points.push([value(birth), value(death)]);
        }
    }
    for (cell, &dim) in dims.iter().enumerate() {
        if dim as usize == q && !paired[cell] {
            diagram.essential.push(value(cell as u32));
        }
    }
    Ok(diagram.canonical())
}

/// Where each class of `from` lands in `to` (a superset complex).
fn class_images(from: &CubicComplex, to: &CubicComplex) -> [Vec<u32>; 4] {
    let fc = from.counts().as_array();
    let mut out: [Vec<u32>; 4] = std::array::from_fn(|d| vec![u32::MAX; fc[d]]);
    for (cube, &cell) in from.cubes().iter().enumerate() {
        let target = to.cube_of_cell(cell).expect("filtration sets are nested");
        for v in 0..cells::VERTICES {
            out[0][from.vertex(cube, v)] = to.vertex(target, v) as u32;
        }
        for e in 0..cells::EDGES {
            out[1][from.edge(cube, e)] = to.edge(target, e) as u32;
        }
        for f in 0..cells::FACES {
            out[2][from.face(cube, f)] = to.face(target, f) as u32;
        }
        out[3][cube] = target as u32;
    }
    out
}

/// Standard column reduction with clearing. Returns `(birth, death)` column
/// pairs.
fn reduce(columns: &mut [Vec<u32>], dims: &[u8]) -> Vec<(u32, u32)> {
    let n = columns.len();
    let mut pivot_owner = vec![u32::MAX; n];
    let mut cleared = vec![false; n];
    let mut pairs = Vec::new();
    let max_dim = dims.iter().copied().max().unwrap_or(0);
    let mut scratch = Vec::new();
    for dim in (1..=max_dim).rev() {
        for j in 0..n {
            if dims[j] != dim || cleared[j] {
                continue;
            }
            while let Some(&low) = columns[j].last() {
                let owner = pivot_owner[low as usize];
                if owner == u32::MAX {
                    break;
                }
                add_into(&mut scratch, &columns[owner as usize], &columns[j]);
                std::mem::swap(&mut columns[j], &mut scratch);
            }
            if let Some(&low) = columns[j].last() {
                pivot_owner[low as usize] = j as u32;
                pairs.push((low, j as u32));
                // The birth column is a cycle; it cannot create a pivot.
                cleared[low as usize] = true;
                columns[low as usize].clear();
            }
        }
    }
    pairs
}

/// `out = a + b` over Z2 for sorted index lists.
fn add_into(out: &mut Vec<u32>, a: &[u32], b: &[u32]) {
    out.clear();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
}
