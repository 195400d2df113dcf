//! Local density, separation distance and target selection.
//!
//! Density of point `i` is `exp(-(1/r) Σ d(i, j)²)` over its `r` nearest
//! neighbors; separation `delta[i]` is the distance to the nearest point of
//! strictly higher density (or the distance to the farthest point when none
//! exists); the ranking score is `delta · rho`.
//!
//! Densities are compared in log space. `exp` underflows to zero for widely
//! spread raw features, and comparing the exponents keeps the ordering intact
//! in that regime while agreeing with `rho` everywhere else.

use rayon::prelude::*;

use crate::data::DataSet;
use crate::error::{Error, Result};
use crate::geometry::euclidean;

/// Dense symmetric pairwise Euclidean distances.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    n: usize,
    values: Vec<f64>,
}

impl DistanceMatrix {
    /// Computes all pairwise distances, one row per rayon task.
    pub fn from_points<P: AsRef<[f64]> + Sync>(points: &[P]) -> Result<Self> {
        let n = points.len();
        if n < 2 {
            return Err(Error::TooFewPoints {
                required: 2,
                found: n,
            });
        }
        let dim = points[0].as_ref().len();
        if let Some(p) = points.iter().find(|p| p.as_ref().len() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: p.as_ref().len(),
            });
        }
        let mut values = vec![0.0; n * n];
        values.par_chunks_mut(n).enumerate().for_each(|(i, row)| {
            let pi = points[i].as_ref();
            for (j, v) in row.iter_mut().enumerate() {
                if i != j {
                    *v = euclidean(pi, points[j].as_ref());
                }
            }
        });
        Ok(Self { n, values })
    }

    pub fn from_dataset(data: &DataSet) -> Self {
        let rows: Vec<&[f64]> = data.rows().collect();
        Self::from_points(&rows).expect("datasets hold at least two points of one dimension")
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.n + j]
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.n..(i + 1) * self.n]
    }

    /// Largest pairwise distance.
    pub fn diameter(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }
}

pub fn distance_matrix<P: AsRef<[f64]> + Sync>(points: &[P]) -> Result<DistanceMatrix> {
    DistanceMatrix::from_points(points)
}

/// Neighbor count `r = round(p·n)` clamped to `[1, n-1]`.
pub fn neighbor_count(p: f64, n: usize) -> usize {
    let r = (p * n as f64).round() as usize;
    r.clamp(1, n.saturating_sub(1).max(1))
}

fn check_fraction(p: f64) -> Result<()> {
    if p > 0.0 && p < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "neighbor fraction must lie in (0, 1), got {p}"
        )))
    }
}

/// Log-density `-(1/r) Σ d²` over the `r` nearest neighbors of each point.
///
/// The `r` smallest squared distances are summed in ascending order so that
/// the result does not depend on point order.
pub fn log_local_density(dist: &DistanceMatrix, p: f64) -> Result<(Vec<f64>, usize)> {
    check_fraction(p)?;
    let n = dist.len();
    let r = neighbor_count(p, n);
    let log_rho = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut others: Vec<f64> = dist
                .row(i)
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, d)| d * d)
                .collect();
            others.select_nth_unstable_by(r - 1, f64::total_cmp);
            let nearest = &mut others[..r];
            nearest.sort_unstable_by(f64::total_cmp);
            -nearest.iter().sum::<f64>() / r as f64
        })
        .collect();
    Ok((log_rho, r))
}

/// Local density `rho ∈ (0, 1]` and the neighbor count used.
pub fn local_density(dist: &DistanceMatrix, p: f64) -> Result<(Vec<f64>, usize)> {
    let (log_rho, r) = log_local_density(dist, p)?;
    Ok((log_rho.into_iter().map(f64::exp).collect(), r))
}

/// Separation and nearest-higher-density index for each point, given any
/// density ordering key (`rho` or its logarithm).
///
/// Ties are not "higher": points sharing the maximal key all fall back to
/// their farthest distance.
pub fn separation(dist: &DistanceMatrix, density: &[f64]) -> Result<(Vec<f64>, Vec<Option<usize>>)> {
    if density.len() != dist.len() {
        return Err(Error::LengthMismatch {
            left: dist.len(),
            right: density.len(),
        });
    }
    let n = dist.len();
    let (delta, nearest): (Vec<f64>, Vec<Option<usize>>) = (0..n)
        .into_par_iter()
        .map(|i| {
            let row = dist.row(i);
            let mut best: Option<(usize, f64)> = None;
            for j in 0..n {
                if density[j] > density[i] && best.is_none_or(|(_, d)| row[j] < d) {
                    best = Some((j, row[j]));
                }
            }
            match best {
                Some((j, d)) => (d, Some(j)),
                None => (row.iter().copied().fold(0.0, f64::max), None),
            }
        })
        .unzip();
    Ok((delta, nearest))
}

/// `(delta, score, nearest_higher)`.
pub type DeltaScore = (Vec<f64>, Vec<f64>, Vec<Option<usize>>);

/// `delta`, `score = delta · rho` and nearest-higher indices.
pub fn delta_and_score(
    dist: &DistanceMatrix,
    rho: &[f64],
) -> Result<DeltaScore> {
    let (delta, nearest) = separation(dist, rho)?;
    let score = delta.iter().zip(rho).map(|(d, r)| d * r).collect();
    Ok((delta, score, nearest))
}

/// Per-point density peaks quantities.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityProfile {
    pub rho: Vec<f64>,
    /// `ln rho`; finite even where `rho` underflows.
    pub log_rho: Vec<f64>,
    pub delta: Vec<f64>,
    pub score: Vec<f64>,
    /// `ln score`, `-inf` where `delta` is zero.
    pub log_score: Vec<f64>,
    pub nearest_higher: Vec<Option<usize>>,
    /// Neighbor count used for the density.
    pub r: usize,
}

impl DensityProfile {
    pub fn compute(dist: &DistanceMatrix, p: f64) -> Result<Self> {
        let (log_rho, r) = log_local_density(dist, p)?;
        let (delta, nearest_higher) = separation(dist, &log_rho)?;
        let rho: Vec<f64> = log_rho.iter().map(|l| l.exp()).collect();
        let score = delta.iter().zip(&rho).map(|(d, r)| d * r).collect();
        let log_score = delta.iter().zip(&log_rho).map(|(d, l)| d.ln() + l).collect();
        Ok(Self {
            rho,
            log_rho,
            delta,
            score,
            log_score,
            nearest_higher,
            r,
        })
    }

    pub fn len(&self) -> usize {
        self.rho.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rho.is_empty()
    }

    /// Selects targets by score; see [`select_targets`].
    pub fn select_targets(&self, count: Option<usize>) -> Result<Vec<usize>> {
        select_by_log_score(&self.log_score, count)
    }
}

/// Picks target points from non-negative scores, highest first.
///
/// With `count`, the `count` best scores are returned (ties go to the lower
/// index). Without it, the sorted scores are cut at the largest ratio
/// `score[i] / score[i+1]` among the first `min(n-1, ⌈√n⌉)` positions.
/// The result is in rank order.
pub fn select_targets(score: &[f64], count: Option<usize>) -> Result<Vec<usize>> {
    let logs: Vec<f64> = score.iter().map(|s| s.ln()).collect();
    select_by_log_score(&logs, count)
}

/// [`select_targets`] on logarithms of the scores; ratio gaps become
/// differences.
pub fn select_by_log_score(log_score: &[f64], count: Option<usize>) -> Result<Vec<usize>> {
    let n = log_score.len();
    if n == 0 {
        return Err(Error::EmptySelection);
    }
    if let Some(bad) = log_score.iter().find(|v| v.is_nan()) {
        return Err(Error::InvalidParameter(format!("score logarithm is {bad}")));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| log_score[b].total_cmp(&log_score[a]).then(a.cmp(&b)));

    let take = match count {
        Some(c) if c == 0 || c > n => return Err(Error::InvalidTargetCount { count: c, n }),
        Some(c) => c,
        None => {
            if log_score[order[0]] == f64::NEG_INFINITY {
                return Err(Error::EmptySelection);
            }
            let window = (n - 1).min((n as f64).sqrt().ceil() as usize);
            let mut cut = 1;
            let mut best_gap = f64::NEG_INFINITY;
            for i in 0..window {
                let (hi, lo) = (log_score[order[i]], log_score[order[i + 1]]);
                if hi == f64::NEG_INFINITY {
                    break;
                }
                let gap = hi - lo;
                if gap > best_gap {
                    best_gap = gap;
                    cut = i + 1;
                }
            }
            cut
        }
    };
    order.truncate(take);
    Ok(order)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(v: &[&[f64]]) -> Vec<Vec<f64>> {
        v.iter().map(|p| p.to_vec()).collect()
    }

    #[test]
    fn distance_examples() {
        let d = distance_matrix(&pts(&[&[0.0, 0.0], &[3.0, 4.0]])).unwrap();
        assert_eq!(d.row(0), &[0.0, 5.0]);
        assert_eq!(d.row(1), &[5.0, 0.0]);

        let d = distance_matrix(&pts(&[&[1.0, 1.0], &[1.0, 1.0]])).unwrap();
        assert_eq!(d.diameter(), 0.0);

        let d = distance_matrix(&pts(&[&[0.0, 0.0], &[1.0, 0.0], &[0.0, 1.0]])).unwrap();
        assert_eq!(d.get(0, 1), 1.0);
        assert_eq!(d.get(0, 2), 1.0);
        assert!((d.get(1, 2) - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(d.get(2, 1), d.get(1, 2));
    }

    #[test]
    fn distance_rejects_mismatch() {
        assert!(matches!(
            distance_matrix(&pts(&[&[0.0, 0.0], &[3.0]])),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(
            distance_matrix(&pts(&[&[0.0]])),
            Err(Error::TooFewPoints { .. })
        ));
    }

    #[test]
    fn density_examples() {
        let d = distance_matrix(&pts(&[&[0.0], &[1.0]])).unwrap();
        let (rho, r) = local_density(&d, 0.05).unwrap();
        assert_eq!(r, 1);
        assert!((rho[0] - (-1f64).exp()).abs() < 1e-15);
        assert_eq!(rho[0], rho[1]);

        let d = distance_matrix(&pts(&[&[0.0], &[1.0], &[3.0]])).unwrap();
        let (rho, r) = local_density(&d, 0.05).unwrap();
        assert_eq!(r, 1);
        let e1 = (-1f64).exp();
        assert_eq!(rho, vec![e1, e1, (-4f64).exp()]);

        let d = distance_matrix(&pts(&[&[2.0], &[2.0], &[2.0]])).unwrap();
        let (rho, _) = local_density(&d, 0.5).unwrap();
        assert_eq!(rho, vec![1.0; 3]);
    }

    #[test]
    fn neighbor_count_is_clamped() {
        assert_eq!(neighbor_count(0.05, 10), 1);
        assert_eq!(neighbor_count(0.05, 150), 8);
        assert_eq!(neighbor_count(0.99, 4), 3);
        assert_eq!(neighbor_count(0.01, 2), 1);
    }

    #[test]
    fn density_rejects_bad_fraction() {
        let d = distance_matrix(&pts(&[&[0.0], &[1.0]])).unwrap();
        assert!(local_density(&d, 0.0).is_err());
        assert!(local_density(&d, 1.0).is_err());
    }

    #[test]
    fn delta_examples() {
        let d = distance_matrix(&pts(&[&[0.0], &[2.0]])).unwrap();
        let (delta, score, nh) = delta_and_score(&d, &[0.9, 0.5]).unwrap();
        assert_eq!(delta, vec![2.0, 2.0]);
        assert_eq!(score, vec![1.8, 1.0]);
        assert_eq!(nh, vec![None, Some(0)]);

        let (delta, _, nh) = delta_and_score(&d, &[0.5, 0.5]).unwrap();
        assert_eq!(delta, vec![2.0, 2.0]);
        assert_eq!(nh, vec![None, None]);
    }

    #[test]
    fn densest_point_takes_max_distance() {
        let d = distance_matrix(&pts(&[&[0.0], &[0.1], &[0.2], &[5.0]])).unwrap();
        let profile = DensityProfile::compute(&d, 0.5).unwrap();
        let top = (0..4)
            .max_by(|&a, &b| profile.log_rho[a].total_cmp(&profile.log_rho[b]))
            .unwrap();
        assert_eq!(top, 1);
        assert_eq!(profile.nearest_higher[1], None);
        assert_eq!(profile.delta[1], 4.9);
        for i in 0..4 {
            assert_eq!(profile.score[i], profile.delta[i] * profile.rho[i]);
        }
    }

    #[test]
    fn log_ordering_survives_underflow() {
        let d = distance_matrix(&pts(&[&[0.0], &[100.0], &[150.0], &[400.0]])).unwrap();
        let profile = DensityProfile::compute(&d, 0.3).unwrap();
        assert!(profile.rho.iter().all(|&r| r == 0.0));
        assert_eq!(profile.select_targets(Some(1)).unwrap(), vec![1]);
    }

    #[test]
    fn select_examples() {
        assert_eq!(
            select_targets(&[9.0, 8.0, 0.1, 0.09], None).unwrap(),
            vec![0, 1]
        );
        assert_eq!(select_targets(&[5.0, 1.0, 1.0], Some(1)).unwrap(), vec![0]);
        assert_eq!(select_targets(&[5.0, 3.0, 3.0], Some(2)).unwrap(), vec![0, 1]);
        assert_eq!(select_targets(&[3.0, 5.0, 3.0], Some(2)).unwrap(), vec![1, 0]);
    }

    #[test]
    fn select_errors() {
        assert!(matches!(
            select_targets(&[0.0, 0.0], None),
            Err(Error::EmptySelection)
        ));
        assert!(matches!(
            select_targets(&[1.0, 2.0], Some(3)),
            Err(Error::InvalidTargetCount { .. })
        ));
        assert!(matches!(
            select_targets(&[1.0, 2.0], Some(0)),
            Err(Error::InvalidTargetCount { .. })
        ));
        assert_eq!(select_targets(&[0.0, 0.0], Some(1)).unwrap(), vec![0]);
    }

    #[test]
    fn zero_tail_is_the_largest_gap() {
        assert_eq!(select_targets(&[1.0, 2.0, 0.0, 0.0], None).unwrap(), vec![1, 0]);
    }
}
