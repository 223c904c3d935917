//! Local cell numbering for one unit cube.
//!
//! Vertices are numbered by their corner bits `x | y << 1 | z << 2`.
//! Edges are `axis * 4 + p`, where `p` holds the corner bits of the two
//! other axes (lower axis first). Faces are `axis * 2 + side`.

pub const VERTICES: usize = 8;
pub const EDGES: usize = 12;
pub const FACES: usize = 6;

/// The two axes orthogonal to `axis`, in increasing order.
#[inline]
pub const fn others(axis: usize) -> [usize; 2] {
    match axis {
        0 => [1, 2],
        1 => [0, 2],
        _ => [0, 1],
    }
}

#[inline]
pub fn edge_axis(edge: usize) -> usize {
    edge / 4
}

/// Bit of `axis` inside the corner code of an edge running along another
/// axis.
#[inline]
fn edge_bit(edge_axis: usize, axis: usize) -> usize {
    if others(edge_axis)[0] == axis {
        0
    } else {
        1
    }
}

/// Corner offset of the edge start along `axis` (which must differ from the
/// edge direction).
#[inline]
pub fn edge_offset(edge: usize, axis: usize) -> usize {
    ((edge % 4) >> edge_bit(edge / 4, axis)) & 1
}

pub fn edge(axis: usize, offsets: [usize; 3]) -> usize {
    let [a, b] = others(axis);
    axis * 4 + offsets[a] + 2 * offsets[b]
}

/// The same edge moved to the opposite side along `axis`.
#[inline]
pub fn edge_flip(edge: usize, axis: usize) -> usize {
    edge ^ (1 << edge_bit(edge / 4, axis))
}

pub fn edge_endpoints(edge: usize) -> [usize; 2] {
    let axis = edge / 4;
    let [a, b] = others(axis);
    let base = (edge_offset(edge, a) << a) | (edge_offset(edge, b) << b);
    [base, base | (1 << axis)]
}

pub fn face(axis: usize, side: usize) -> usize {
    axis * 2 + side
}

pub fn face_edges(face: usize) -> [usize; 4] {
    let (axis, side) = (face / 2, face % 2);
    let [a, b] = others(axis);
    let mut out = [0; 4];
    let mut n = 0;
    for (dir, across) in [(a, b), (b, a)] {
        for t in 0..2 {
            let mut offsets = [0; 3];
            offsets[axis] = side;
            offsets[across] = t;
            out[n] = edge(dir, offsets);
            n += 1;
        }
    }
    out
}

pub fn face_vertices(face: usize) -> [usize; 4] {
    let (axis, side) = (face / 2, face % 2);
    let [a, b] = others(axis);
    let base = side << axis;
    [base, base | 1 << a, base | 1 << b, base | 1 << a | 1 << b]
}

/// Number of face-connected groups among the occupied octants of a
/// 2x2x2 block (bit `o` set when octant `o` is filled).
pub static OCTANT_COMPONENTS: [u8; 256] = octant_components();

const fn octant_components() -> [u8; 256] {
    let mut table = [0u8; 256];
    let mut mask = 0;
    while mask < 256 {
        let mut label = [0usize; 8];
        let mut o = 0;
        while o < 8 {
            label[o] = o;
            o += 1;
        }
        // Relax labels to the minimum over face neighbours until stable.
        let mut changed = true;
        while changed {
            changed = false;
            let mut p = 0;
            while p < 8 {
                if mask & (1 << p) != 0 {
                    let mut bit = 0;
                    while bit < 3 {
                        let q = p ^ (1 << bit);
                        if mask & (1 << q) != 0 && label[q] < label[p] {
                            label[p] = label[q];
                            changed = true;
                        }
                        bit += 1;
                    }
                }
                p += 1;
            }
        }
        let mut count = 0;
        let mut p = 0;
        while p < 8 {
            if mask & (1 << p) != 0 && label[p] == p {
                count += 1;
            }
            p += 1;
        }
        table[mask] = count;
        mask += 1;
    }
    table
}

/// Face-connected groups among the four cubes around an edge, given as a
/// 4-bit mask in cyclic order.
pub static RING_COMPONENTS: [u8; 16] = ring_components();

const fn ring_components() -> [u8; 16] {
    let mut table = [0u8; 16];
    let mut mask = 0;
    while mask < 16 {
        table[mask] = if mask == 15 {
            1
        } else {
            // Count runs: filled positions whose cyclic predecessor is empty.
            let mut runs = 0;
            let mut i = 0;
            while i < 4 {
                let prev = (i + 3) % 4;
                if mask & (1 << i) != 0 && mask & (1 << prev) == 0 {
                    runs += 1;
                }
                i += 1;
            }
            runs
        };
        mask += 1;
    }
    table
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edges_are_distinct_and_well_formed() {
        let mut seen = std::collections::HashSet::new();
        for e in 0..EDGES {
            let [p, q] = edge_endpoints(e);
            assert_eq!((p ^ q).count_ones(), 1);
            assert_eq!(p ^ q, 1 << edge_axis(e));
            assert!(seen.insert((p, q)));
        }
    }

    #[test]
    fn faces_bound_four_edges_on_the_face() {
        for f in 0..FACES {
            let verts = face_vertices(f);
            let mut incidence = [0; 8];
            for e in face_edges(f) {
                for v in edge_endpoints(e) {
                    assert!(verts.contains(&v));
                    incidence[v] += 1;
                }
            }
            // Each corner of a square meets two of its edges.
            for v in verts {
                assert_eq!(incidence[v], 2);
            }
        }
    }

    #[test]
    fn flip_moves_across() {
        for e in 0..EDGES {
            for axis in others(edge_axis(e)) {
                let f = edge_flip(e, axis);
                assert_ne!(edge_offset(e, axis), edge_offset(f, axis));
                assert_eq!(edge_flip(f, axis), e);
            }
        }
    }

    #[test]
    fn component_tables() {
        assert_eq!(OCTANT_COMPONENTS[0], 0);
        assert_eq!(OCTANT_COMPONENTS[255], 1);
        assert_eq!(OCTANT_COMPONENTS[0b1000_0001], 2);
        // Six octants around a removed antipodal pair form one ring.
        assert_eq!(OCTANT_COMPONENTS[0b0111_1110], 1);
        assert_eq!(RING_COMPONENTS[0b0101], 2);
        assert_eq!(RING_COMPONENTS[0b0111], 1);
        assert_eq!(RING_COMPONENTS[0b1001], 1);
        assert_eq!(RING_COMPONENTS[0b1111], 1);
    }
}
