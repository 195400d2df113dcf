//! Rand index, similarity neighborhood (SN) and variability neighborhood (VN).

use std::collections::HashMap;

use crate::density::DistanceMatrix;
use crate::error::{Error, Result};
use crate::partition::{Label, Partition};

/// Pair counts over all unordered point pairs.
///
/// `a`: same cluster, same class; `b`: same cluster, different class;
/// `c`: different cluster, same class; `d`: different in both.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct PairCounts {
    pub a: u64,
    pub b: u64,
    pub c: u64,
    pub d: u64,
}

impl PairCounts {
    pub fn total(&self) -> u64 {
        self.a + self.b + self.c + self.d
    }

    pub fn rand_index(&self) -> f64 {
        let total = self.total();
        if total == 0 {
            return 1.0;
        }
        (self.a + self.d) as f64 / total as f64
    }
}

fn choose2(x: u64) -> u64 {
    x * x.saturating_sub(1) / 2
}

/// Pair counts between two labellings via a contingency table.
pub fn pair_counts(clusters: &[usize], classes: &[usize]) -> Result<PairCounts> {
    if clusters.len() != classes.len() {
        return Err(Error::LengthMismatch {
            left: clusters.len(),
            right: classes.len(),
        });
    }
    let n = clusters.len() as u64;
    let mut joint: HashMap<(usize, usize), u64> = HashMap::new();
    let mut by_cluster: HashMap<usize, u64> = HashMap::new();
    let mut by_class: HashMap<usize, u64> = HashMap::new();
    for (&k, &c) in clusters.iter().zip(classes) {
        *joint.entry((k, c)).or_default() += 1;
        *by_cluster.entry(k).or_default() += 1;
        *by_class.entry(c).or_default() += 1;
    }
    let a: u64 = joint.values().map(|&x| choose2(x)).sum();
    let same_cluster: u64 = by_cluster.values().map(|&x| choose2(x)).sum();
    let same_class: u64 = by_class.values().map(|&x| choose2(x)).sum();
    let b = same_cluster - a;
    let c = same_class - a;
    let d = choose2(n) - a - b - c;
    Ok(PairCounts { a, b, c, d })
}

/// Rand index of predicted labels against class labels. Outliers count as
/// singleton clusters.
pub fn rand_index(predicted: &[Label], truth: &[usize]) -> Result<f64> {
    if predicted.len() != truth.len() {
        return Err(Error::LengthMismatch {
            left: predicted.len(),
            right: truth.len(),
        });
    }
    if predicted.len() < 2 {
        return Err(Error::TooFewPoints {
            required: 2,
            found: predicted.len(),
        });
    }
    let mut next = predicted.iter().filter_map(|l| l.group()).max().map_or(0, |g| g + 1);
    let ids: Vec<usize> = predicted
        .iter()
        .map(|l| match l {
            Label::Group(g) => *g,
            Label::Outlier => {
                next += 1;
                next - 1
            }
        })
        .collect();
    Ok(pair_counts(&ids, truth)?.rand_index())
}

/// Mean over all points of the fraction of group-mates sharing the point's
/// class. Points without group-mates (including outliers) score 1.
pub fn similarity_neighborhood(partition: &Partition, truth: &[usize]) -> Result<f64> {
    if partition.len() != truth.len() {
        return Err(Error::LengthMismatch {
            left: partition.len(),
            right: truth.len(),
        });
    }
    let n = partition.len();
    if n == 0 {
        return Ok(1.0);
    }
    // per group: size and per-class counts
    let mut size = vec![0u64; partition.group_count()];
    let mut class_count: HashMap<(usize, usize), u64> = HashMap::new();
    for (label, &c) in partition.assignments().iter().zip(truth) {
        if let Label::Group(g) = label {
            size[*g] += 1;
            *class_count.entry((*g, c)).or_default() += 1;
        }
    }
    let total: f64 = partition
        .assignments()
        .iter()
        .zip(truth)
        .map(|(label, &c)| match label {
            Label::Group(g) if size[*g] > 1 => {
                let same = class_count[&(*g, c)] - 1;
                same as f64 / (size[*g] - 1) as f64
            }
            _ => 1.0,
        })
        .sum();
    Ok(total / n as f64)
}

/// Mean over points with at least two group-mates of the population standard
/// deviation of their distances to those mates; zero when no point qualifies.
pub fn variability_neighborhood(partition: &Partition, dist: &DistanceMatrix) -> Result<f64> {
    if partition.len() != dist.len() {
        return Err(Error::LengthMismatch {
            left: partition.len(),
            right: dist.len(),
        });
    }
    let members = partition.members();
    let mut sum = 0.0;
    let mut count = 0usize;
    for group in &members {
        if group.len() < 3 {
            continue;
        }
        let mates = (group.len() - 1) as f64;
        for &i in group {
            let row = dist.row(i);
            // shifted by the first mate's distance so equal distances give exactly zero
            let mut others = group.iter().filter(|&&j| j != i).map(|&j| row[j]);
            let shift = others.clone().next().expect("at least two mates");
            let (s, s2) = others.by_ref().fold((0.0, 0.0), |(s, s2), d| {
                let x = d - shift;
                (s + x, s2 + x * x)
            });
            let var = ((s2 - s * s / mates) / mates).max(0.0);
            sum += var.sqrt();
            count += 1;
        }
    }
    Ok(if count == 0 { 0.0 } else { sum / count as f64 })
}
