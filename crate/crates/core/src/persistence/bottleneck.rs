use std::collections::VecDeque;
use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::diagram::PersistenceDiagram;
use crate::error::{Error, Result};

/// Norm on the birth-death plane used for point costs.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PlaneNorm {
    /// `|x| + |y|`. A point reaches the diagonal at cost `death - birth`.
    #[default]
    L1,
    /// `max(|x|, |y|)`. A point reaches the diagonal at cost `(death - birth) / 2`.
    Linf,
}

impl PlaneNorm {
    pub fn name(self) -> &'static str {
        match self {
            PlaneNorm::L1 => "l1",
            PlaneNorm::Linf => "linf",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        match s.to_ascii_lowercase().as_str() {
            "l1" => Some(PlaneNorm::L1),
            "linf" | "l_inf" | "inf" => Some(PlaneNorm::Linf),
            _ => None,
        }
    }

    pub fn point_cost(self, a: [f64; 2], b: [f64; 2]) -> f64 {
        let (dx, dy) = ((a[0] - b[0]).abs(), (a[1] - b[1]).abs());
        match self {
            PlaneNorm::L1 => dx + dy,
            PlaneNorm::Linf => dx.max(dy),
        }
    }

    pub fn diagonal_cost(self, p: [f64; 2]) -> f64 {
        match self {
            PlaneNorm::L1 => p[1] - p[0],
            PlaneNorm::Linf => (p[1] - p[0]) / 2.0,
        }
    }
}

/// Cost of matching the essential classes: sorted births against sorted
/// births, which is optimal for a bottleneck on the line.
fn essential_cost(u: &PersistenceDiagram, v: &PersistenceDiagram) -> Result<f64> {
    if u.essential.len() != v.essential.len() {
        return Err(Error::Metric(format!(
            "diagrams have {} and {} essential classes; they cannot be matched",
            u.essential.len(),
            v.essential.len()
        )));
    }
    let mut a = u.essential.clone();
    let mut b = v.essential.clone();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    Ok(a.iter()
        .zip(&b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max))
}

fn check(u: &PersistenceDiagram, v: &PersistenceDiagram) -> Result<()> {
    if u.q != v.q {
        return Err(Error::Metric(format!(
            "cannot compare a q={} diagram with a q={} diagram",
            u.q, v.q
        )));
    }
    u.validate()?;
    v.validate()
}

/// Bottleneck distance between two diagrams of the same degree.
///
/// Finite points may be matched to each other or sent to the diagonal.
/// Essential classes are matched among themselves by birth.
pub fn bottleneck_distance(
    u: &PersistenceDiagram,
    v: &PersistenceDiagram,
    norm: PlaneNorm,
) -> Result<f64> {
    check(u, v)?;
    let ess = essential_cost(u, v)?;
    let (a, b) = (&u.points, &v.points);
    let da: Vec<f64> = a.iter().map(|&p| norm.diagonal_cost(p)).collect();
    let db: Vec<f64> = b.iter().map(|&p| norm.diagonal_cost(p)).collect();
    let cost: Vec<f64> = a
        .iter()
        .flat_map(|&p| b.iter().map(move |&q| norm.point_cost(p, q)))
        .collect();

    let mut candidates: Vec<f64> = cost.iter().chain(&da).chain(&db).copied().collect();
    candidates.push(0.0);
    candidates.retain(|&c| c >= ess);
    candidates.push(ess);
    candidates.sort_by(f64::total_cmp);
    candidates.dedup();

    // Sending everything to the diagonal is always feasible, so the largest
    // candidate passes.
    let feasible = |t: f64| {
        let adj: Vec<Vec<u32>> = (0..a.len())
            .map(|i| {
                (0..b.len())
                    .filter(|&j| cost[i * b.len() + j] <= t)
                    .map(|j| j as u32)
                    .collect()
            })
            .collect();
        let forced_a: Vec<bool> = da.iter().map(|&c| c > t).collect();
        let forced_b: Vec<bool> = db.iter().map(|&c| c > t).collect();
        if !covers(&adj, b.len(), &forced_a) {
            return false;
        }
        let mut adj_t = vec![Vec::new(); b.len()];
        for (i, row) in adj.iter().enumerate() {
            for &j in row {
                adj_t[j as usize].push(i as u32);
            }
        }
        covers(&adj_t, a.len(), &forced_b)
    };
    let (mut lo, mut hi) = (0, candidates.len() - 1);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if feasible(candidates[mid]) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Ok(candidates[lo])
}

/// Whether some matching saturates every left vertex marked `required`.
///
/// Points that may stay unmatched pair with the diagonal; by the
/// Mendelsohn-Dulmage theorem a matching covering both forced sets exists
/// exactly when each side can be covered on its own.
fn covers(adj: &[Vec<u32>], right: usize, required: &[bool]) -> bool {
    let need = required.iter().filter(|&&r| r).count();
    if need == 0 {
        return true;
    }
    let adj: Vec<&[u32]> = adj
        .iter()
        .zip(required)
        .filter(|(_, &r)| r)
        .map(|(row, _)| row.as_slice())
        .collect();
    if adj.iter().any(|row| row.is_empty()) || need > right {
        return false;
    }
    hopcroft_karp(&adj, right) == need
}

/// Size of a maximum matching in a bipartite graph.
fn hopcroft_karp(adj: &[&[u32]], right: usize) -> usize {
    const FREE: u32 = u32::MAX;
    let n = adj.len();
    let mut match_l = vec![FREE; n];
    let mut match_r = vec![FREE; right];
    let mut dist = vec![u32::MAX; n];
    let mut size = 0;
    loop {
        // Layer the free left vertices and grow alternating paths.
        let mut queue = VecDeque::new();
        for l in 0..n {
            if match_l[l] == FREE {
                dist[l] = 0;
                queue.push_back(l);
            } else {
                dist[l] = u32::MAX;
            }
        }
        let mut found = false;
        while let Some(l) = queue.pop_front() {
            for &r in adj[l] {
                let m = match_r[r as usize];
                if m == FREE {
                    found = true;
                } else if dist[m as usize] == u32::MAX {
                    dist[m as usize] = dist[l] + 1;
                    queue.push_back(m as usize);
                }
            }
        }
        if !found {
            return size;
        }
        let mut next = vec![0usize; n];
        for l in 0..n {
            if match_l[l] == FREE
                && augment(l, adj, &mut match_l, &mut match_r, &mut dist, &mut next)
            {
                size += 1;
            }
        }
    }
}

/// Iterative DFS along the layered graph from a free left vertex.
fn augment(
    start: usize,
    adj: &[&[u32]],
    match_l: &mut [u32],
    match_r: &mut [u32],
    dist: &mut [u32],
    next: &mut [usize],
) -> bool {
    let mut stack = vec![start];
    while let Some(&l) = stack.last() {
        if next[l] == adj[l].len() {
            dist[l] = u32::MAX;
            stack.pop();
            continue;
        }
        let r = adj[l][next[l]] as usize;
        next[l] += 1;
        let m = match_r[r];
        if m == u32::MAX {
            // Flip the path: each stacked vertex takes the edge it is exploring.
            for &x in stack.iter().rev() {
                let r = adj[x][next[x] - 1] as usize;
                match_l[x] = r as u32;
                match_r[r] = x as u32;
            }
            return true;
        }
        if dist[m as usize] == dist[l] + 1 {
            stack.push(m as usize);
        }
    }
    false
}

/// Bottleneck distances between every pair, computed in parallel.
pub fn bottleneck_matrix(
    diagrams: &[PersistenceDiagram],
    norm: PlaneNorm,
) -> Result<Vec<Vec<f64>>> {
    let n = diagrams.len();
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect();
    let values = pairs
        .par_iter()
        .map(|&(i, j)| bottleneck_distance(&diagrams[i], &diagrams[j], norm))
        .collect::<Result<Vec<f64>>>()?;
    let mut m = vec![vec![0.0; n]; n];
    for (&(i, j), d) in pairs.iter().zip(values) {
        m[i][j] = d;
        m[j][i] = d;
    }
    Ok(m)
}

/// Labeled square CSV: a header row of labels, then one row per label.
pub fn write_matrix_csv<W: Write>(labels: &[String], matrix: &[Vec<f64>], w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    let io = |e: csv::Error| Error::Io {
        path: "<matrix>".into(),
        source: e.into(),
    };
    let mut header = vec![String::new()];
    header.extend(labels.iter().cloned());
    out.write_record(&header).map_err(io)?;
    for (label, row) in labels.iter().zip(matrix) {
        let mut rec = vec![label.clone()];
        rec.extend(row.iter().map(|d| d.to_string()));
        out.write_record(&rec).map_err(io)?;
    }
    out.flush().map_err(|e| Error::Io {
        path: "<matrix>".into(),
        source: e,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag(points: &[[f64; 2]], essential: &[f64]) -> PersistenceDiagram {
        PersistenceDiagram {
            q: 0,
            points: points.to_vec(),
            essential: essential.to_vec(),
        }
    }

    #[test]
    fn single_point_against_empty() {
        let u = diag(&[[0.0, 1.0]], &[]);
        let v = diag(&[], &[]);
        assert_eq!(bottleneck_distance(&u, &v, PlaneNorm::L1).unwrap(), 1.0);
        assert_eq!(bottleneck_distance(&u, &v, PlaneNorm::Linf).unwrap(), 0.5);
    }

    #[test]
    fn nearby_points_match_each_other() {
        let u = diag(&[[0.0, 1.0]], &[0.1]);
        let v = diag(&[[0.1, 0.9]], &[0.3]);
        assert!((bottleneck_distance(&u, &v, PlaneNorm::L1).unwrap() - 0.2).abs() < 1e-15);
        assert!((bottleneck_distance(&u, &v, PlaneNorm::Linf).unwrap() - 0.2).abs() < 1e-15);
    }

    #[test]
    fn essential_mismatch_is_an_error() {
        let u = diag(&[], &[0.1]);
        let v = diag(&[], &[0.1, 0.2]);
        assert!(matches!(
            bottleneck_distance(&u, &v, PlaneNorm::L1),
            Err(Error::Metric(_))
        ));
        let mut w = diag(&[], &[0.1]);
        w.q = 1;
        assert!(bottleneck_distance(&u, &w, PlaneNorm::L1).is_err());
    }

    #[test]
    fn matrix_is_symmetric() {
        let ds = vec![
            diag(&[[0.1, 0.5]], &[0.0]),
            diag(&[], &[0.05]),
            diag(&[[0.2, 0.3], [0.4, 0.9]], &[0.0]),
        ];
        let m = bottleneck_matrix(&ds, PlaneNorm::L1).unwrap();
        for i in 0..3 {
            assert_eq!(m[i][i], 0.0);
            for j in 0..3 {
                assert_eq!(m[i][j], m[j][i]);
            }
        }
        let mut buf = Vec::new();
        write_matrix_csv(&["a".into(), "b".into(), "c".into()], &m, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with(",a,b,c\na,0,"));
    }
}
