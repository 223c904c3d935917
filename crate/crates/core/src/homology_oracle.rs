//! Brute-force Z2 homology of a [`CubicComplex`] from its boundary matrices.
//!
//! This is deliberately independent of the component-counting route in
//! [`crate::topology::betti_numbers`]; the two are checked against each other
//! in tests.

use crate::error::{Error, Result};
use crate::topology::CubicComplex;

/// Largest complex (total cells) the dense elimination accepts.
pub const CELL_BUDGET: usize = 60_000;

/// A dense matrix over Z2, one bitset per row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    bits: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = cols.div_ceil(64);
        BitMatrix {
            rows,
            cols,
            stride,
            bits: vec![0; rows * stride],
        }
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.bits[r * self.stride + c / 64] >> (c % 64) & 1 == 1
    }

    /// Add one to entry `(r, c)` modulo two.
    pub fn toggle(&mut self, r: usize, c: usize) {
        self.bits[r * self.stride + c / 64] ^= 1 << (c % 64);
    }

    fn row(&self, r: usize) -> &[u64] {
        &self.bits[r * self.stride..(r + 1) * self.stride]
    }

    /// `self * other` over Z2.
    pub fn mul(&self, other: &BitMatrix) -> BitMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = BitMatrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                if self.get(r, k) {
                    let src = other.row(k).to_vec();
                    let dst = &mut out.bits[r * out.stride..(r + 1) * out.stride];
                    for (d, s) in dst.iter_mut().zip(src) {
                        *d ^= s;
                    }
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    /// Rank over Z2 by Gaussian elimination.
    pub fn rank(&self) -> usize {
        let mut m = self.bits.clone();
        let s = self.stride;
        let mut rank = 0;
        for c in 0..self.cols {
            let (w, b) = (c / 64, 1u64 << (c % 64));
            let Some(p) = (rank..self.rows).find(|&r| m[r * s + w] & b != 0) else {
                continue;
            };
            if p != rank {
                for i in 0..s {
                    m.swap(p * s + i, rank * s + i);
                }
            }
            for r in 0..self.rows {
                if r != rank && m[r * s + w] & b != 0 {
                    for i in w..s {
                        let v = m[rank * s + i];
                        m[r * s + i] ^= v;
                    }
                }
            }
            rank += 1;
            if rank == self.rows {
                break;
            }
        }
        rank
    }
}

/// Boundary maps of the complex, rows indexed by the higher-dimensional
/// cell: `d1` is edges x vertices, `d2` faces x edges, `d3` cubes x faces.
#[derive(Clone, Debug)]
pub struct BoundaryMatrices {
    pub d1: BitMatrix,
    pub d2: BitMatrix,
    pub d3: BitMatrix,
}

impl BoundaryMatrices {
    /// Both compositions `d2 * d1` and `d3 * d2` vanish.
    pub fn is_chain_complex(&self) -> bool {
        self.d2.mul(&self.d1).is_zero() && self.d3.mul(&self.d2).is_zero()
    }
}

fn check_budget(cx: &CubicComplex) -> Result<()> {
    let cells: usize = cx.counts().as_array().iter().sum();
    if cells > CELL_BUDGET {
        return Err(Error::SizeBudget {
            cells,
            budget: CELL_BUDGET,
        });
    }
    Ok(())
}

pub fn boundaries(cx: &CubicComplex) -> Result<BoundaryMatrices> {
    check_budget(cx)?;
    let c = cx.counts();
    let mut d1 = BitMatrix::zeros(c.edges, c.vertices);
    for (e, ends) in cx.edge_boundaries().into_iter().enumerate() {
        for v in ends {
            d1.toggle(e, v);
        }
    }
    let mut d2 = BitMatrix::zeros(c.faces, c.edges);
    for (f, edges) in cx.face_boundaries().into_iter().enumerate() {
        for e in edges {
            d2.toggle(f, e);
        }
    }
    let mut d3 = BitMatrix::zeros(c.cubes, c.faces);
    for (q, faces) in cx.cube_boundaries().into_iter().enumerate() {
        for f in faces {
            d3.toggle(q, f);
        }
    }
    let m = BoundaryMatrices { d1, d2, d3 };
    debug_assert!(m.is_chain_complex());
    Ok(m)
}

/// `(b0, b1, b2)` from `b_q = dim ker d_q - rank d_{q+1}`.
pub fn homology_ranks(cx: &CubicComplex) -> Result<[usize; 3]> {
    let m = boundaries(cx)?;
    let c = cx.counts();
    let (r1, r2, r3) = (m.d1.rank(), m.d2.rank(), m.d3.rank());
    Ok([c.vertices - r1, c.edges - r1 - r2, c.faces - r2 - r3])
}
