use petgraph::unionfind::UnionFind;
use serde::Serialize;

use super::cells::{self, EDGES, FACES, VERTICES};
use crate::grid::{CellSet, GridGeometry};

/// Cell counts `(c0, c1, c2, c3)` of an unstacked cubic complex.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CellCounts {
    pub vertices: usize,
    pub edges: usize,
    pub faces: usize,
    pub cubes: usize,
}

impl CellCounts {
    pub fn as_array(&self) -> [usize; 4] {
        [self.vertices, self.edges, self.faces, self.cubes]
    }

    /// `c0 - c1 + c2 - c3`
    pub fn euler_characteristic(&self) -> i64 {
        self.vertices as i64 - self.edges as i64 + self.faces as i64 - self.cubes as i64
    }
}

/// The abstract complex obtained by gluing the filled cubes of a cell set
/// only along shared 2-faces.
///
/// Every filled cube starts with its own 8 vertices, 12 edges and 6 faces.
/// For each face-adjacent pair the shared face and its four edges and four
/// corners are identified, and identifications are closed transitively.
/// Cubes that touch only along an edge or at a corner stay apart unless a
/// chain of face contacts forces the identification.
#[derive(Clone, Debug)]
pub struct CubicComplex {
    geometry: GridGeometry,
    cubes: Vec<usize>,
    vertex_class: Vec<u32>,
    edge_class: Vec<u32>,
    face_class: Vec<u32>,
    counts: CellCounts,
}

impl CubicComplex {
    pub fn geometry(&self) -> &GridGeometry {
        &self.geometry
    }

    pub fn counts(&self) -> CellCounts {
        self.counts
    }

    /// Grid indices of the filled cubes, ascending. Position in this list is
    /// the cube's id in the complex.
    pub fn cubes(&self) -> &[usize] {
        &self.cubes
    }

    /// Class of local vertex `v` (0..8) of cube number `cube`.
    #[inline]
    pub fn vertex(&self, cube: usize, v: usize) -> usize {
        self.vertex_class[cube * VERTICES + v] as usize
    }

    #[inline]
    pub fn edge(&self, cube: usize, e: usize) -> usize {
        self.edge_class[cube * EDGES + e] as usize
    }

    #[inline]
    pub fn face(&self, cube: usize, f: usize) -> usize {
        self.face_class[cube * FACES + f] as usize
    }

    /// The two vertex classes bounding every edge class, indexed by class.
    pub fn edge_boundaries(&self) -> Vec<[usize; 2]> {
        let mut out = vec![[0; 2]; self.counts.edges];
        for cube in 0..self.cubes.len() {
            for e in 0..EDGES {
                let [p, q] = cells::edge_endpoints(e);
                out[self.edge(cube, e)] = [self.vertex(cube, p), self.vertex(cube, q)];
            }
        }
        out
    }

    pub fn face_boundaries(&self) -> Vec<[usize; 4]> {
        let mut out = vec![[0; 4]; self.counts.faces];
        for cube in 0..self.cubes.len() {
            for f in 0..FACES {
                out[self.face(cube, f)] = cells::face_edges(f).map(|e| self.edge(cube, e));
            }
        }
        out
    }

    pub fn cube_boundaries(&self) -> Vec<[usize; 6]> {
        (0..self.cubes.len())
            .map(|cube| std::array::from_fn(|f| self.face(cube, f)))
            .collect()
    }

    /// Cube number of a grid cell, if it is filled.
    pub fn cube_of_cell(&self, cell: usize) -> Option<usize> {
        self.cubes.binary_search(&cell).ok()
    }
}

/// Build the unstacked complex of a cell set with an explicit union-find
/// over every local cell.
pub fn build_complex(set: &CellSet) -> CubicComplex {
    let geometry = *set.geometry();
    let cubes: Vec<usize> = set.iter().collect();
    let m = cubes.len();
    let counts_grid = geometry.counts();

    let mut verts = UnionFind::<u32>::new(m * VERTICES);
    let mut edges = UnionFind::<u32>::new(m * EDGES);
    let mut faces = UnionFind::<u32>::new(m * FACES);

    for (slot, &cell) in cubes.iter().enumerate() {
        let t = geometry.triple(cell);
        for axis in 0..3 {
            if t[axis] + 1 >= counts_grid[axis] {
                continue;
            }
            let mut nt = t;
            nt[axis] += 1;
            let Ok(other) = cubes.binary_search(&geometry.index(nt)) else {
                continue;
            };
            let (a, b) = (slot as u32, other as u32);
            faces.union(
                a * FACES as u32 + cells::face(axis, 1) as u32,
                b * FACES as u32 + cells::face(axis, 0) as u32,
            );
            for v in 0..VERTICES {
                if v >> axis & 1 == 1 {
                    let w = v & !(1 << axis);
                    verts.union(
                        a * VERTICES as u32 + v as u32,
                        b * VERTICES as u32 + w as u32,
                    );
                }
            }
            for e in 0..EDGES {
                if cells::edge_axis(e) != axis && cells::edge_offset(e, axis) == 1 {
                    let f = cells::edge_flip(e, axis);
                    edges.union(a * EDGES as u32 + e as u32, b * EDGES as u32 + f as u32);
                }
            }
        }
    }

    let (vertex_class, nv) = dense_labels(verts);
    let (edge_class, ne) = dense_labels(edges);
    let (face_class, nf) = dense_labels(faces);
    CubicComplex {
        geometry,
        cubes,
        vertex_class,
        edge_class,
        face_class,
        counts: CellCounts {
            vertices: nv,
            edges: ne,
            faces: nf,
            cubes: m,
        },
    }
}

/// Renumber union-find roots as `0..k` in order of first appearance.
fn dense_labels(uf: UnionFind<u32>) -> (Vec<u32>, usize) {
    let roots = uf.into_labeling();
    let mut map = vec![u32::MAX; roots.len()];
    let mut next = 0u32;
    let labels = roots
        .into_iter()
        .map(|r| {
            let slot = &mut map[r as usize];
            if *slot == u32::MAX {
                *slot = next;
                next += 1;
            }
            *slot
        })
        .collect();
    (labels, next as usize)
}

/// Cell counts of the unstacked complex without materializing it.
///
/// Identification of a vertex, edge or face only ever happens between cubes
/// that contain it, so each grid vertex contributes one class per
/// face-connected group among its eight surrounding cubes, each grid edge one
/// class per group in the ring of four cubes around it, and each grid face
/// one class if either neighbour is filled.
pub fn cell_counts(set: &CellSet) -> CellCounts {
    let g = set.geometry();
    let [nx, ny, nz] = g.counts();
    let filled = |i: i64, j: i64, k: i64| -> bool { set.contains_triple([i, j, k]) };

    let cubes = set.len();
    let mut adjacent_pairs = 0usize;
    for c in set.iter() {
        let t = g.triple(c);
        for axis in 0..3 {
            let mut n = t.map(|x| x as i64);
            n[axis] += 1;
            if set.contains_triple(n) {
                adjacent_pairs += 1;
            }
        }
    }
    let faces = 6 * cubes - adjacent_pairs;

    // Edge along `axis` at lattice point p: the four cubes around it sit at
    // p - (0|1) along each of the two other axes.
    let mut edges = 0usize;
    for axis in 0..3 {
        let [a, b] = cells::others(axis);
        let mut extent = [nx + 1, ny + 1, nz + 1];
        extent[axis] -= 1;
        for k in 0..extent[2] {
            for j in 0..extent[1] {
                for i in 0..extent[0] {
                    let p = [i as i64, j as i64, k as i64];
                    let ring = [(1, 1), (0, 1), (0, 0), (1, 0)];
                    let mut mask = 0usize;
                    for (bit, (da, db)) in ring.iter().enumerate() {
                        let mut q = p;
                        q[a] -= da;
                        q[b] -= db;
                        if filled(q[0], q[1], q[2]) {
                            mask |= 1 << bit;
                        }
                    }
                    edges += cells::RING_COMPONENTS[mask] as usize;
                }
            }
        }
    }

    let mut vertices = 0usize;
    for k in 0..=nz as i64 {
        for j in 0..=ny as i64 {
            for i in 0..=nx as i64 {
                let mut mask = 0usize;
                for o in 0..8 {
                    if filled(i - 1 + (o & 1), j - 1 + (o >> 1 & 1), k - 1 + (o >> 2 & 1)) {
                        mask |= 1 << o;
                    }
                }
                vertices += cells::OCTANT_COMPONENTS[mask] as usize;
            }
        }
    }

    CellCounts {
        vertices,
        edges,
        faces,
        cubes,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set_of(counts: [usize; 3], filled: &[[usize; 3]]) -> CellSet {
        let g = GridGeometry::unit(counts).unwrap();
        CellSet::from_fn(g, |t| filled.contains(&t))
    }

    #[test]
    fn single_cube() {
        let s = set_of([1, 1, 1], &[[0, 0, 0]]);
        let cx = build_complex(&s);
        assert_eq!(cx.counts().as_array(), [8, 12, 6, 1]);
        assert_eq!(cx.counts().euler_characteristic(), 1);
        assert_eq!(cell_counts(&s), cx.counts());
    }

    #[test]
    fn two_face_adjacent_cubes() {
        let s = set_of([2, 1, 1], &[[0, 0, 0], [1, 0, 0]]);
        assert_eq!(build_complex(&s).counts().as_array(), [12, 20, 11, 2]);
        assert_eq!(cell_counts(&s).as_array(), [12, 20, 11, 2]);
    }

    #[test]
    fn two_edge_adjacent_cubes_stay_apart() {
        let s = set_of([2, 2, 1], &[[0, 0, 0], [1, 1, 0]]);
        let cx = build_complex(&s);
        assert_eq!(cx.counts().as_array(), [16, 24, 12, 2]);
        assert_eq!(cx.counts().euler_characteristic(), 2);
        assert_eq!(cell_counts(&s).as_array(), [16, 24, 12, 2]);
    }

    #[test]
    fn l_shape_glues_the_diagonal_edge() {
        // (1,0) and (0,1) touch along an edge that (0,0) shares with both.
        let s = set_of([2, 2, 1], &[[0, 0, 0], [1, 0, 0], [0, 1, 0]]);
        let cx = build_complex(&s);
        let a = cx.cube_of_cell(s.geometry().index([1, 0, 0])).unwrap();
        let b = cx.cube_of_cell(s.geometry().index([0, 1, 0])).unwrap();
        let e_a = cx.edge(a, cells::edge(2, [0, 1, 0]));
        let e_b = cx.edge(b, cells::edge(2, [1, 0, 0]));
        assert_eq!(e_a, e_b);
        assert_eq!(cx.counts(), cell_counts(&s));
    }

    #[test]
    fn empty_set() {
        let s = set_of([2, 2, 2], &[]);
        assert_eq!(build_complex(&s).counts(), CellCounts::default());
        assert_eq!(cell_counts(&s), CellCounts::default());
    }

    #[test]
    fn boundary_tables_have_class_counts() {
        let s = set_of([3, 3, 1], &[[0, 0, 0], [1, 0, 0], [2, 1, 0]]);
        let cx = build_complex(&s);
        assert_eq!(cx.edge_boundaries().len(), cx.counts().edges);
        assert_eq!(cx.face_boundaries().len(), cx.counts().faces);
        assert_eq!(cx.cube_boundaries().len(), 3);
    }
}
