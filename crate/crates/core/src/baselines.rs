//! Comparison groupings: kNN-graph components, ε-neighborhood components and
//! nearest-center assignment around density peaks.

use crate::data::DataSet;
use crate::density::{DensityProfile, DistanceMatrix};
use crate::error::{Error, Result};
use crate::partition::{Group, Label, Partition, Provenance};

/// Neighbor rank used for the k-distance curve that sets ε.
pub const EPSILON_K: usize = 4;

struct DisjointSet {
    parent: Vec<usize>,
}

impl DisjointSet {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            // keep the smaller index as root
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }
}

/// Connected components of an undirected graph, numbered by their smallest
/// member.
pub fn connected_components(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Vec<usize> {
    let mut set = DisjointSet::new(n);
    for (a, b) in edges {
        set.union(a, b);
    }
    let mut id_of_root = vec![usize::MAX; n];
    let mut next = 0;
    (0..n)
        .map(|i| {
            let root = set.find(i);
            if id_of_root[root] == usize::MAX {
                id_of_root[root] = next;
                next += 1;
            }
            id_of_root[root]
        })
        .collect()
}

/// The `k` nearest other points of each point (lower index on ties).
pub fn knn_lists(dist: &DistanceMatrix, k: usize) -> Vec<Vec<usize>> {
    let n = dist.len();
    (0..n)
        .map(|i| {
            let row = dist.row(i);
            let mut others: Vec<usize> = (0..n).filter(|&j| j != i).collect();
            others.sort_by(|&a, &b| row[a].total_cmp(&row[b]).then(a.cmp(&b)));
            others.truncate(k);
            others
        })
        .collect()
}

/// `k = round(fraction · n)` clamped to `[1, n-1]`.
pub fn knn_k(k_fraction: f64, n: usize) -> Result<usize> {
    if !(k_fraction > 0.0 && k_fraction < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "k fraction must lie in (0, 1), got {k_fraction}"
        )));
    }
    Ok(((k_fraction * n as f64).round() as usize).clamp(1, n - 1))
}

fn partition_from_components(component: &[usize], outlier_singletons: bool) -> Result<Partition> {
    let n = component.len();
    let count = component.iter().max().map_or(0, |m| m + 1);
    let mut size = vec![0usize; count];
    for &c in component {
        size[c] += 1;
    }
    let mut group_of = vec![None; count];
    let mut groups = Vec::new();
    for c in 0..count {
        if !(outlier_singletons && size[c] == 1) {
            group_of[c] = Some(groups.len());
            groups.push(Group {
                id: groups.len(),
                target: None,
                region: None,
            });
        }
    }
    let mut assignments = Vec::with_capacity(n);
    let mut provenance = Vec::with_capacity(n);
    for &c in component {
        match group_of[c] {
            Some(g) => {
                assignments.push(Label::Group(g));
                provenance.push(Provenance::Member);
            }
            None => {
                assignments.push(Label::Outlier);
                provenance.push(Provenance::Outlier);
            }
        }
    }
    Partition::new(assignments, groups, provenance)
}

/// Components of the union-symmetrized kNN graph; never reports outliers.
pub fn knn_graph_groups_with_distances(dist: &DistanceMatrix, k_fraction: f64) -> Result<Partition> {
    let k = knn_k(k_fraction, dist.len())?;
    let lists = knn_lists(dist, k);
    let edges = lists
        .iter()
        .enumerate()
        .flat_map(|(i, l)| l.iter().map(move |&j| (i, j)));
    partition_from_components(&connected_components(dist.len(), edges), false)
}

pub fn knn_graph_groups(data: &DataSet, k_fraction: f64) -> Result<Partition> {
    knn_graph_groups_with_distances(&DistanceMatrix::from_dataset(data), k_fraction)
}

/// ε from the k-distance curve: sort every point's distance to its
/// [`EPSILON_K`]-th nearest neighbor and return the value just below the
/// largest consecutive gap (the largest value when the curve is flat).
pub fn auto_epsilon(dist: &DistanceMatrix) -> f64 {
    let n = dist.len();
    let k = EPSILON_K.min(n - 1);
    let mut kdist: Vec<f64> = (0..n)
        .map(|i| {
            let mut others: Vec<f64> = dist
                .row(i)
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, &d)| d)
                .collect();
            let (_, kth, _) = others.select_nth_unstable_by(k - 1, f64::total_cmp);
            *kth
        })
        .collect();
    kdist.sort_unstable_by(f64::total_cmp);
    let mut best = (0.0, kdist[n - 1]);
    for w in kdist.windows(2) {
        let gap = w[1] - w[0];
        if gap > best.0 {
            best = (gap, w[0]);
        }
    }
    best.1
}

/// Components of the graph linking points within `epsilon` (inclusive).
/// Components of two or more points are groups; isolated points are
/// outliers. `None` picks ε with [`auto_epsilon`].
pub fn epsilon_groups_with_distances(dist: &DistanceMatrix, epsilon: Option<f64>) -> Result<Partition> {
    let eps = match epsilon {
        Some(e) if e > 0.0 && e.is_finite() => e,
        Some(e) => {
            return Err(Error::InvalidParameter(format!("epsilon must be positive, got {e}")))
        }
        None => auto_epsilon(dist),
    };
    let n = dist.len();
    let edges = (0..n).flat_map(|i| {
        let row = dist.row(i);
        (i + 1..n).filter(move |&j| row[j] <= eps).map(move |j| (i, j))
    });
    partition_from_components(&connected_components(n, edges), true)
}

pub fn epsilon_groups(data: &DataSet, epsilon: Option<f64>) -> Result<Partition> {
    epsilon_groups_with_distances(&DistanceMatrix::from_dataset(data), epsilon)
}

/// Assigns every point to its nearest center (lower center index on ties).
/// Centers are the `center_count` best density-peak scores.
pub fn dpc_nearest_center_with_distances(dist: &DistanceMatrix, p: f64, center_count: usize) -> Result<Partition> {
    let profile = DensityProfile::compute(dist, p)?;
    let mut centers = profile.select_targets(Some(center_count))?;
    centers.sort_unstable();
    let n = dist.len();
    let mut assignments = Vec::with_capacity(n);
    let mut provenance = Vec::with_capacity(n);
    for i in 0..n {
        if let Ok(g) = centers.binary_search(&i) {
            assignments.push(Label::Group(g));
            provenance.push(Provenance::Target);
            continue;
        }
        let row = dist.row(i);
        let g = (0..centers.len())
            .min_by(|&a, &b| row[centers[a]].total_cmp(&row[centers[b]]).then(a.cmp(&b)))
            .expect("at least one center");
        assignments.push(Label::Group(g));
        provenance.push(Provenance::Member);
    }
    let groups = centers
        .iter()
        .enumerate()
        .map(|(id, &c)| Group {
            id,
            target: Some(c),
            region: None,
        })
        .collect();
    Partition::new(assignments, groups, provenance)
}

pub fn dpc_nearest_center(data: &DataSet, p: f64, center_count: usize) -> Result<Partition> {
    dpc_nearest_center_with_distances(&DistanceMatrix::from_dataset(data), p, center_count)
}
