use std::fmt;

use crate::network::Point;
use crate::{Error, Result};

/// Largest distance from `points[center]` to any point of the set.
pub fn set_radius(points: &[Point], center: usize) -> f64 {
    let c = points[center];
    points.iter().map(|p| c.distance(p)).fold(0.0, f64::max)
}

/// Minimax radius of the subset `members` of `points`: the smallest
/// [`set_radius`] over all member centers.
pub fn minimax_radius(points: &[Point], members: &[usize]) -> f64 {
    members
        .iter()
        .map(|&c| members.iter().map(|&j| points[c].distance(&points[j])).fold(0.0, f64::max))
        .fold(f64::INFINITY, f64::min)
}

/// Minimax linkage between two point sets: the minimax radius of their union.
pub fn minimax_linkage(s1: &[Point], s2: &[Point]) -> f64 {
    let union: Vec<Point> = s1.iter().chain(s2).copied().collect();
    let idx: Vec<usize> = (0..union.len()).collect();
    minimax_radius(&union, &idx)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Merge {
    pub a: usize,
    pub b: usize,
    pub linkage: f64,
    pub id: usize,
}

/// Merge history of an agglomerative clustering.
///
/// Leaves are clusters `0..n_leaves`; the `k`-th merge creates cluster
/// `n_leaves + k`.
#[derive(Debug, Clone, PartialEq)]
pub struct Dendrogram {
    pub merges: Vec<Merge>,
    pub n_leaves: usize,
}

impl fmt::Display for Dendrogram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for m in &self.merges {
            writeln!(f, "merge {} {} -> {} linkage={:.6}", m.a, m.b, m.id, m.linkage)?;
        }
        Ok(())
    }
}

/// Greedy agglomerative clustering under minimax linkage.
///
/// Each step merges the pair of current clusters with the smallest linkage;
/// ties go to the lexicographically smallest pair of cluster ids.
pub fn hierarchical_cluster(points: &[Point]) -> Dendrogram {
    let n = points.len();
    let total = (2 * n).saturating_sub(1);
    let mut members: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
    members.resize(total, Vec::new());
    let mut link = vec![vec![f64::NAN; total]; total];
    for i in 0..n {
        for j in i + 1..n {
            let d = points[i].distance(&points[j]);
            link[i][j] = d;
            link[j][i] = d;
        }
    }

    // Kept sorted: new ids are always the largest.
    let mut active: Vec<usize> = (0..n).collect();
    let mut merges = Vec::with_capacity(n.saturating_sub(1));
    for step in 0..n.saturating_sub(1) {
        let mut best = (usize::MAX, usize::MAX, f64::INFINITY);
        for (ii, &i) in active.iter().enumerate() {
            for &j in &active[ii + 1..] {
                if link[i][j] < best.2 {
                    best = (i, j, link[i][j]);
                }
            }
        }
        let (a, b, linkage) = best;
        let id = n + step;
        let mut merged = std::mem::take(&mut members[a]);
        merged.append(&mut members[b]);
        merged.sort_unstable();
        members[id] = merged;
        active.retain(|&c| c != a && c != b);
        for &g in &active {
            let mut union = members[id].clone();
            union.extend_from_slice(&members[g]);
            let d = minimax_radius(points, &union);
            link[id][g] = d;
            link[g][id] = d;
        }
        active.push(id);
        merges.push(Merge { a, b, linkage, id });
    }
    Dendrogram { merges, n_leaves: n }
}

/// Cluster state with `v` clusters: the dendrogram with its last `v - 1`
/// merges undone. Blocks are in canonical order.
pub fn cut_dendrogram(dend: &Dendrogram, v: usize) -> Result<Vec<Vec<usize>>> {
    let n = dend.n_leaves;
    if v == 0 || v > n {
        return Err(Error::CutOutOfRange { leaves: n, requested: v });
    }
    let mut members: Vec<Option<Vec<usize>>> = (0..n).map(|i| Some(vec![i])).collect();
    members.resize(n + dend.merges.len(), None);
    for m in &dend.merges[..n - v] {
        let mut merged = members[m.a].take().expect("merge of a retired cluster");
        merged.extend(members[m.b].take().expect("merge of a retired cluster"));
        members[m.id] = Some(merged);
    }
    Ok(super::canonicalize(members.into_iter().flatten().collect()))
}
