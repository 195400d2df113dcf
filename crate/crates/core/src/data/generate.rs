//! Seeded synthetic datasets.
//!
//! All generators draw from ChaCha8 seeded with `seed_from_u64`, so output is
//! identical across platforms for the same parameters.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::{DataSet, Source};
use crate::error::{Error, Result};

/// Class name given to planted outliers.
pub const OUTLIER_CLASS: &str = "outlier";

/// One isotropic Gaussian blob.
#[derive(Debug, Clone, PartialEq)]
pub struct BlobSpec {
    pub center: Vec<f64>,
    pub sigma: f64,
    pub count: usize,
}

fn gaussian_around(rng: &mut ChaCha8Rng, center: &[f64], sigma: f64) -> Vec<f64> {
    center
        .iter()
        .map(|c| c + sigma * rng.sample::<f64, _>(StandardNormal))
        .collect()
}

/// Cluster centers for the ring layout: one ring for up to four clusters,
/// otherwise a center cluster, an inner ring at half the radius and an outer
/// ring (offset by half a step) at the full radius.
pub(crate) fn ring_centers(count: usize, radius: f64) -> Vec<[f64; 2]> {
    let ring = |m: usize, r: f64, phase: f64| -> Vec<[f64; 2]> {
        (0..m)
            .map(|j| {
                let a = phase + 2.0 * PI * j as f64 / m as f64;
                [r * a.cos(), r * a.sin()]
            })
            .collect()
    };
    match count {
        0 => Vec::new(),
        1 => vec![[0.0, 0.0]],
        2..=4 => ring(count, radius, 0.0),
        _ => {
            let inner = (count - 1).div_ceil(2);
            let outer = count - 1 - inner;
            let mut centers = vec![[0.0, 0.0]];
            centers.extend(ring(inner, radius / 2.0, 0.0));
            centers.extend(ring(outer, radius, PI / outer as f64));
            centers
        }
    }
}

/// Gaussian clusters laid out on concentric rings, R15 style.
pub fn generate_gaussian_rings(
    cluster_count: usize,
    points_per_cluster: usize,
    ring_radius: f64,
    sigma: f64,
    seed: u64,
) -> Result<DataSet> {
    if cluster_count == 0 || points_per_cluster == 0 {
        return Err(Error::InvalidParameter(
            "cluster_count and points_per_cluster must be at least 1".into(),
        ));
    }
    if sigma.is_nan() || sigma <= 0.0 || ring_radius.is_nan() || ring_radius <= 0.0 {
        return Err(Error::InvalidParameter("sigma and ring_radius must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::with_capacity(cluster_count * points_per_cluster);
    let mut labels = Vec::with_capacity(rows.capacity());
    for (j, c) in ring_centers(cluster_count, ring_radius).iter().enumerate() {
        for _ in 0..points_per_cluster {
            rows.push(gaussian_around(&mut rng, c, sigma));
            labels.push(j);
        }
    }
    let names = (0..cluster_count).map(|j| format!("c{j}")).collect();
    DataSet::from_rows(
        format!("rings{cluster_count}x{points_per_cluster}"),
        rows,
        Source::Generator,
    )?
    .with_labels(labels, names)
}

/// Gaussian blobs followed by `outlier_count` planted outliers.
///
/// Each outlier sits at distance `placement_distance + max_offset` from the
/// centroid of the blob centers, where `max_offset` is the largest
/// centroid-to-center distance, so it is at least `placement_distance` from
/// every blob center. Outliers are labelled [`OUTLIER_CLASS`].
pub fn generate_blobs_with_outliers(
    blobs: &[BlobSpec],
    outlier_count: usize,
    placement_distance: f64,
    seed: u64,
) -> Result<DataSet> {
    let Some(first) = blobs.first() else {
        return Err(Error::InvalidParameter("at least one blob is required".into()));
    };
    let dim = first.center.len();
    if dim == 0 {
        return Err(Error::InvalidParameter("blob centers must be non-empty".into()));
    }
    for b in blobs {
        if b.center.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: b.center.len(),
            });
        }
        if b.sigma.is_nan() || b.sigma <= 0.0 {
            return Err(Error::InvalidParameter("blob sigma must be positive".into()));
        }
    }
    if outlier_count > 0 && (placement_distance.is_nan() || placement_distance <= 0.0) {
        return Err(Error::InvalidParameter("placement_distance must be positive".into()));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::new();
    let mut labels = Vec::new();
    for (j, b) in blobs.iter().enumerate() {
        for _ in 0..b.count {
            rows.push(gaussian_around(&mut rng, &b.center, b.sigma));
            labels.push(j);
        }
    }

    let centroid: Vec<f64> = (0..dim)
        .map(|d| blobs.iter().map(|b| b.center[d]).sum::<f64>() / blobs.len() as f64)
        .collect();
    let max_offset = blobs
        .iter()
        .map(|b| crate::geometry::euclidean(&b.center, &centroid))
        .fold(0.0, f64::max);
    let reach = placement_distance + max_offset;
    for _ in 0..outlier_count {
        let dir = loop {
            let v: Vec<f64> = (0..dim).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm > 1e-12 {
                break v.into_iter().map(|x| x / norm).collect::<Vec<_>>();
            }
        };
        rows.push(centroid.iter().zip(&dir).map(|(c, u)| c + reach * u).collect());
        labels.push(blobs.len());
    }

    let mut names: Vec<String> = (0..blobs.len()).map(|j| format!("c{j}")).collect();
    names.push(OUTLIER_CLASS.to_string());
    DataSet::from_rows(
        format!("blobs{}+{}", blobs.len(), outlier_count),
        rows,
        Source::Generator,
    )?
    .with_labels(labels, names)
}
