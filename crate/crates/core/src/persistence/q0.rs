use petgraph::unionfind::UnionFind;

use super::diagram::PersistenceDiagram;
use super::filtration::Filtration;

/// Degree-0 persistence by union-find over cells in filtration order.
///
/// Cells entering at the same threshold are added together, in increasing
/// cell index, each merging with face neighbours already present. When two
/// components meet, the one born later dies (ties go to the component whose
/// first cell has the larger index). Points born and killed at the same
/// threshold are dropped.
pub fn persistence_q0(filtration: &Filtration<'_>) -> PersistenceDiagram {
    let field = filtration.field();
    let g = field.geometry();
    let thresholds = filtration.thresholds();
    let stages = filtration.cell_stages();

    let mut order: Vec<usize> = (0..g.len()).filter(|&c| stages[c].is_some()).collect();
    order.sort_by_key(|&c| (stages[c], c));

    let mut uf = UnionFind::<u32>::new(g.len());
    // Elder key (birth stage, first cell) stored at each root.
    let mut elder: Vec<(usize, usize)> = vec![(usize::MAX, usize::MAX); g.len()];
    let mut present = vec![false; g.len()];
    let mut diagram = PersistenceDiagram::new(0);

    for &c in &order {
        let stage = stages[c].unwrap();
        present[c] = true;
        elder[c] = (stage, c);
        let t = g.triple(c);
        for axis in 0..3 {
            for dir in [-1i64, 1] {
                let mut q = t.map(|x| x as i64);
                q[axis] += dir;
                if !g.contains(q) {
                    continue;
                }
                let n = g.index([q[0] as usize, q[1] as usize, q[2] as usize]);
                if !present[n] {
                    continue;
                }
                let (ra, rb) = (
                    uf.find_mut(c as u32) as usize,
                    uf.find_mut(n as u32) as usize,
                );
                if ra == rb {
                    continue;
                }
                let (old, young) = if elder[ra] <= elder[rb] {
                    (elder[ra], elder[rb])
                } else {
                    (elder[rb], elder[ra])
                };
                if young.0 < stage {
                    diagram
                        .points
                        .push([thresholds[young.0], thresholds[stage]]);
                }
                uf.union(ra as u32, rb as u32);
                let root = uf.find_mut(ra as u32) as usize;
                elder[root] = old;
            }
        }
    }

    for &c in &order {
        let root = uf.find_mut(c as u32) as usize;
        if elder[root].1 == c {
            diagram.essential.push(thresholds[elder[root].0]);
        }
    }
    diagram.canonical()
}
