//! Textual generator specs used by the CLI and bench manifests.
//!
//! ```text
//! rings:15x40[,radius=10][,sigma=0.5][,seed=1]
//! blobs:3x50[,radius=10][,sigma=0.5][,outliers=0][,placement=30][,seed=1]
//! fig8
//! ```
//!
//! `blobs` centers follow the same ring layout as `rings`. Without an explicit
//! `placement`, outliers sit at ten times the nominal blob diameter (6σ).

use std::fmt;
use std::str::FromStr;

use super::fixture::fig8_fixture;
use super::generate::{generate_blobs_with_outliers, generate_gaussian_rings, ring_centers, BlobSpec};
use super::DataSet;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum GeneratorSpec {
    Rings {
        clusters: usize,
        per_cluster: usize,
        radius: f64,
        sigma: f64,
        seed: u64,
    },
    Blobs {
        blobs: usize,
        per_blob: usize,
        radius: f64,
        sigma: f64,
        outliers: usize,
        placement: Option<f64>,
        seed: u64,
    },
    Fig8,
}

impl GeneratorSpec {
    pub fn generate(&self) -> Result<DataSet> {
        match *self {
            Self::Rings {
                clusters,
                per_cluster,
                radius,
                sigma,
                seed,
            } => generate_gaussian_rings(clusters, per_cluster, radius, sigma, seed),
            Self::Blobs {
                blobs,
                per_blob,
                radius,
                sigma,
                outliers,
                placement,
                seed,
            } => {
                let specs: Vec<BlobSpec> = ring_centers(blobs, radius)
                    .into_iter()
                    .map(|c| BlobSpec {
                        center: c.to_vec(),
                        sigma,
                        count: per_blob,
                    })
                    .collect();
                let placement = placement.unwrap_or(60.0 * sigma);
                let mut data = generate_blobs_with_outliers(&specs, outliers, placement, seed)?;
                data.set_name(format!("blobs{blobs}x{per_blob}"));
                Ok(data)
            }
            Self::Fig8 => Ok(fig8_fixture()),
        }
    }
}

fn bad(spec: &str, why: impl fmt::Display) -> Error {
    Error::InvalidParameter(format!("generator `{spec}`: {why}"))
}

fn parse_size(spec: &str, size: &str) -> Result<(usize, usize)> {
    let (a, b) = size
        .split_once('x')
        .ok_or_else(|| bad(spec, "expected COUNTxPOINTS"))?;
    let a = a.trim().parse().map_err(|_| bad(spec, format!("bad count `{a}`")))?;
    let b = b.trim().parse().map_err(|_| bad(spec, format!("bad point count `{b}`")))?;
    Ok((a, b))
}

fn value<T: FromStr>(spec: &str, key: &str, v: &str) -> Result<T> {
    v.trim().parse().map_err(|_| bad(spec, format!("bad value for `{key}`: `{v}`")))
}

impl FromStr for GeneratorSpec {
    type Err = Error;

    fn from_str(spec: &str) -> Result<Self> {
        let spec = spec.trim();
        if spec == "fig8" {
            return Ok(Self::Fig8);
        }
        let (kind, rest) = spec
            .split_once(':')
            .ok_or_else(|| bad(spec, "expected KIND:COUNTxPOINTS"))?;
        let mut parts = rest.split(',');
        let (count, per) = parse_size(spec, parts.next().unwrap_or(""))?;
        let (mut radius, mut sigma, mut seed) = (10.0, 0.5, 1u64);
        let (mut outliers, mut placement) = (0usize, None);
        for part in parts {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| bad(spec, format!("expected key=value, found `{part}`")))?;
            match (kind, k.trim()) {
                (_, "radius") => radius = value(spec, k, v)?,
                (_, "sigma") => sigma = value(spec, k, v)?,
                (_, "seed") => seed = value(spec, k, v)?,
                ("blobs", "outliers") => outliers = value(spec, k, v)?,
                ("blobs", "placement") => placement = Some(value(spec, k, v)?),
                (_, other) => return Err(bad(spec, format!("unknown option `{other}`"))),
            }
        }
        match kind {
            "rings" => Ok(Self::Rings {
                clusters: count,
                per_cluster: per,
                radius,
                sigma,
                seed,
            }),
            "blobs" => Ok(Self::Blobs {
                blobs: count,
                per_blob: per,
                radius,
                sigma,
                outliers,
                placement,
                seed,
            }),
            other => Err(bad(spec, format!("unknown generator `{other}`"))),
        }
    }
}
