use petgraph::unionfind::UnionFind;
use serde::{Deserialize, Serialize};

use crate::grid::CellSet;

/// Which neighbours of a cell count as touching.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Connectivity {
    /// Shared face only.
    Face6,
    /// Shared face or edge.
    Edge18,
    /// Shared face, edge or corner.
    Vertex26,
}

impl Connectivity {
    /// Half of the neighbourhood (the lexicographically positive offsets);
    /// enough for union-find over a scan.
    pub fn forward_offsets(self) -> Vec<[i64; 3]> {
        let mut out = Vec::new();
        for dz in -1i64..=1 {
            for dy in -1i64..=1 {
                for dx in -1i64..=1 {
                    let o = [dx, dy, dz];
                    let nonzero = o.iter().filter(|&&d| d != 0).count();
                    let keep = match self {
                        Connectivity::Face6 => nonzero == 1,
                        Connectivity::Edge18 => nonzero == 1 || nonzero == 2,
                        Connectivity::Vertex26 => nonzero >= 1,
                    };
                    if keep && [dz, dy, dx] > [0, 0, 0] {
                        out.push(o);
                    }
                }
            }
        }
        out
    }
}

/// Connected components of the filled cells under face adjacency, which is
/// the only contact through which fluid can pass between cubes.
pub fn foreground_components(set: &CellSet) -> usize {
    count_components(
        set.geometry().counts(),
        |t| set.contains_triple(t),
        Connectivity::Face6,
    )
}

/// Components of the complement of the set in all of space.
///
/// The grid is padded with a one-cell shell of background so that the
/// unbounded component is counted exactly once. Background cells touching
/// along a face or an edge are connected: this is the pairing under which
/// the duality count matches the homology of the face-glued complex.
pub fn complement_components(set: &CellSet) -> usize {
    complement_components_with(set, Connectivity::Edge18)
}

/// [`complement_components`] with an explicit background connectivity.
pub fn complement_components_with(set: &CellSet, connectivity: Connectivity) -> usize {
    let [nx, ny, nz] = set.geometry().counts();
    count_components(
        [nx + 2, ny + 2, nz + 2],
        |[i, j, k]| !set.contains_triple([i - 1, j - 1, k - 1]),
        connectivity,
    )
}

fn count_components(
    counts: [usize; 3],
    member: impl Fn([i64; 3]) -> bool,
    connectivity: Connectivity,
) -> usize {
    let [nx, ny, nz] = counts;
    let n = nx * ny * nz;
    let index = |t: [i64; 3]| t[0] as usize + nx * (t[1] as usize + ny * t[2] as usize);
    let inside = |t: [i64; 3]| {
        t[0] >= 0
            && t[1] >= 0
            && t[2] >= 0
            && (t[0] as usize) < nx
            && (t[1] as usize) < ny
            && (t[2] as usize) < nz
    };
    let mask: Vec<bool> = (0..n)
        .map(|c| {
            member([
                (c % nx) as i64,
                ((c / nx) % ny) as i64,
                (c / (nx * ny)) as i64,
            ])
        })
        .collect();
    let offsets = connectivity.forward_offsets();
    let mut uf = UnionFind::<u32>::new(n);
    let mut members = 0usize;
    let mut merges = 0usize;
    for c in 0..n {
        if !mask[c] {
            continue;
        }
        members += 1;
        let t = [
            (c % nx) as i64,
            ((c / nx) % ny) as i64,
            (c / (nx * ny)) as i64,
        ];
        for o in &offsets {
            let q = [t[0] + o[0], t[1] + o[1], t[2] + o[2]];
            if inside(q) && mask[index(q)] && uf.union(c as u32, index(q) as u32) {
                merges += 1;
            }
        }
    }
    members - merges
}
