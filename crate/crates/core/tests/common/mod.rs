//! Brute-force oracles shared by the property tests and the acceptance run.
//! They recompute everything from coordinates without touching the library's
//! distance matrix or helpers.

#![allow(dead_code)]

use std::collections::VecDeque;

use ncar::data::{DataSet, Source};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    let mut s = 0.0;
    for i in 0..a.len() {
        let t = a[i] - b[i];
        s += t * t;
    }
    s.sqrt()
}

pub fn dataset(rows: &[Vec<f64>]) -> DataSet {
    DataSet::from_rows("oracle", rows.to_vec(), Source::Fixture).unwrap()
}

/// Random instance: 2..=max_n points in 1..=4 dimensions. Half the instances
/// use small integer coordinates so that distance ties actually occur.
pub fn random_rows(rng: &mut ChaCha8Rng, max_n: usize) -> Vec<Vec<f64>> {
    let n = rng.random_range(2..=max_n);
    let dim = rng.random_range(1..=4);
    let lattice = rng.random_bool(0.5);
    loop {
        let rows: Vec<Vec<f64>> = (0..n)
            .map(|_| {
                (0..dim)
                    .map(|_| {
                        if lattice {
                            rng.random_range(-4i32..=4) as f64
                        } else {
                            rng.random_range(-10.0..10.0)
                        }
                    })
                    .collect()
            })
            .collect();
        // the pipeline needs at least two distinct points
        if rows.iter().any(|r| r != &rows[0]) {
            return rows;
        }
    }
}

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `-(1/r) Σ d²` over the r nearest others, r = clamp(round(p n), 1, n - 1).
pub fn log_density(rows: &[Vec<f64>], p: f64) -> Vec<f64> {
    let n = rows.len();
    let r = ((p * n as f64).round() as usize).clamp(1, n - 1);
    (0..n)
        .map(|i| {
            let mut sq: Vec<f64> = (0..n)
                .filter(|&j| j != i)
                .map(|j| {
                    let d = dist(&rows[i], &rows[j]);
                    d * d
                })
                .collect();
            sq.sort_by(f64::total_cmp);
            let mut s = 0.0;
            for v in &sq[..r] {
                s += v;
            }
            -s / r as f64
        })
        .collect()
}

/// (delta, nearest higher-density index, score) by exhaustive search.
pub fn delta_score(rows: &[Vec<f64>], p: f64) -> (Vec<f64>, Vec<Option<usize>>, Vec<f64>) {
    let n = rows.len();
    let logd = log_density(rows, p);
    let mut delta = Vec::new();
    let mut nearest = Vec::new();
    let mut score = Vec::new();
    for i in 0..n {
        let mut best: Option<(f64, usize)> = None;
        for j in 0..n {
            if logd[j] > logd[i] {
                let d = dist(&rows[i], &rows[j]);
                best = match best {
                    Some((bd, bj)) if bd < d || (bd == d && bj < j) => Some((bd, bj)),
                    _ => Some((d, j)),
                };
            }
        }
        let (d, nh) = match best {
            Some((d, j)) => (d, Some(j)),
            None => ((0..n).map(|j| dist(&rows[i], &rows[j])).fold(0.0, f64::max), None),
        };
        delta.push(d);
        nearest.push(nh);
        score.push(d * logd[i].exp());
    }
    (delta, nearest, score)
}

/// Exhaustive farthest admissible point of `target` (paired with `partner`):
/// non-targets M with d(T,M) < d(T,partner) and d(T,M) < d(L,M) for every
/// other target L; the farthest wins, lower index on ties.
pub fn farthest_admissible(rows: &[Vec<f64>], targets: &[usize], target: usize, partner: usize) -> Option<usize> {
    let pair = dist(&rows[target], &rows[partner]);
    let mut best: Option<(f64, usize)> = None;
    for m in 0..rows.len() {
        if targets.contains(&m) {
            continue;
        }
        let d = dist(&rows[target], &rows[m]);
        if d >= pair {
            continue;
        }
        if targets.iter().any(|&l| l != target && dist(&rows[l], &rows[m]) <= d) {
            continue;
        }
        if best.is_none_or(|(bd, _)| d > bd) {
            best = Some((d, m));
        }
    }
    best.map(|(_, m)| m)
}

/// Nearest other target, lower index on ties.
pub fn partner_of(rows: &[Vec<f64>], targets: &[usize], t: usize) -> usize {
    let mut best: Option<(f64, usize)> = None;
    for &u in targets {
        if u == t {
            continue;
        }
        let d = dist(&rows[t], &rows[u]);
        if best.is_none_or(|(bd, bu)| d < bd || (d == bd && u < bu)) {
            best = Some((d, u));
        }
    }
    best.unwrap().1
}

/// Breadth-first components of an adjacency matrix.
pub fn bfs_components(adj: &[Vec<bool>]) -> Vec<usize> {
    let n = adj.len();
    let mut comp = vec![usize::MAX; n];
    let mut next = 0;
    for s in 0..n {
        if comp[s] != usize::MAX {
            continue;
        }
        comp[s] = next;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for v in 0..n {
                if adj[u][v] && comp[v] == usize::MAX {
                    comp[v] = next;
                    queue.push_back(v);
                }
            }
        }
        next += 1;
    }
    comp
}

/// Symmetrized kNN adjacency; neighbors sorted by (distance, index).
pub fn knn_adjacency(rows: &[Vec<f64>], k: usize) -> Vec<Vec<bool>> {
    let n = rows.len();
    let mut adj = vec![vec![false; n]; n];
    for i in 0..n {
        let mut others: Vec<(f64, usize)> = (0..n).filter(|&j| j != i).map(|j| (dist(&rows[i], &rows[j]), j)).collect();
        others.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        for &(_, j) in others.iter().take(k) {
            adj[i][j] = true;
            adj[j][i] = true;
        }
    }
    adj
}

pub fn epsilon_adjacency(rows: &[Vec<f64>], eps: f64) -> Vec<Vec<bool>> {
    let n = rows.len();
    (0..n)
        .map(|i| (0..n).map(|j| i != j && dist(&rows[i], &rows[j]) <= eps).collect())
        .collect()
}

/// Whether two labellings induce the same partition of indices.
pub fn same_partition<A: PartialEq, B: PartialEq>(x: &[A], y: &[B]) -> bool {
    let n = x.len();
    n == y.len() && (0..n).all(|i| (0..n).all(|j| (x[i] == x[j]) == (y[i] == y[j])))
}

/// Rand index by enumerating every unordered pair.
pub fn rand_index_pairs(x: &[usize], y: &[usize]) -> (u64, u64, u64, u64, f64) {
    let n = x.len();
    let (mut a, mut b, mut c, mut d) = (0u64, 0u64, 0u64, 0u64);
    for i in 0..n {
        for j in i + 1..n {
            match (x[i] == x[j], y[i] == y[j]) {
                (true, true) => a += 1,
                (true, false) => b += 1,
                (false, true) => c += 1,
                (false, false) => d += 1,
            }
        }
    }
    (a, b, c, d, (a + d) as f64 / (a + b + c + d) as f64)
}

/// Cluster ids with every outlier turned into its own singleton.
pub fn singleton_ids(labels: &[ncar::Label]) -> Vec<usize> {
    let base = labels.iter().filter_map(|l| l.group()).max().map_or(0, |g| g + 1);
    labels
        .iter()
        .enumerate()
        .map(|(i, l)| l.group().unwrap_or(base + i))
        .collect()
}
