//! Metrics reports and the line-oriented run-result file.
//!
//! ```text
//! ncar-result v1
//! algorithm=ncar
//! dataset=fig8
//! params=p=0.2;targets=3
//! n=10
//! dim=2
//! groups=3
//! runtime_seconds=0.000041
//! ri=1
//! sn=1
//! vn=0.0123
//! targets=0 4 7
//! circle=0 -0.31 0.02 0.44
//! points
//! point_id,group,x0,x1
//! 0,0,0,0
//! 9,outlier,1.93,2.4
//! ```
//!
//! Metadata is `key=value` (split at the first `=`). `ri` and `sn` are
//! omitted for unlabelled data and `targets` for algorithms without seeds.
//! Each `circle` line is `group cx cy radius` and only appears for 2D data.
//! Every `point_id,group` row carries the point's coordinates after the
//! group. Floats use the shortest round-trip representation.

use std::fmt::Write as _;
use std::path::Path;

use crate::data::DataSet;
use crate::density::DistanceMatrix;
use crate::error::{Error, Result};
use crate::geometry::RegionForm;
use crate::metrics::{rand_index, similarity_neighborhood, variability_neighborhood};
use crate::partition::{Label, Partition};

pub const RESULT_HEADER: &str = "ncar-result v1";

/// Evaluation of one algorithm on one dataset.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricsReport {
    pub algorithm: String,
    pub dataset: String,
    pub params: String,
    /// `None` without class labels.
    pub ri: Option<f64>,
    pub sn: Option<f64>,
    pub vn: f64,
    pub runtime_seconds: f64,
}

impl MetricsReport {
    pub fn evaluate(
        algorithm: &str,
        params: &str,
        data: &DataSet,
        dist: &DistanceMatrix,
        partition: &Partition,
        runtime_seconds: f64,
    ) -> Result<Self> {
        let (ri, sn) = match data.labels() {
            Some(truth) => (
                Some(rand_index(partition.assignments(), truth)?),
                Some(similarity_neighborhood(partition, truth)?),
            ),
            None => (None, None),
        };
        Ok(Self {
            algorithm: algorithm.to_string(),
            dataset: data.name().to_string(),
            params: params.to_string(),
            ri,
            sn,
            vn: variability_neighborhood(partition, dist)?,
            runtime_seconds,
        })
    }
}

/// A 2D Apollonius circle of one group.
#[derive(Debug, Clone, PartialEq)]
pub struct Circle {
    pub group: usize,
    pub center: [f64; 2],
    pub radius: f64,
}

/// Everything a run writes to disk.
#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    pub report: MetricsReport,
    pub dim: usize,
    pub group_count: usize,
    pub assignments: Vec<Label>,
    pub targets: Vec<usize>,
    pub circles: Vec<Circle>,
    pub coords: Vec<Vec<f64>>,
}

impl RunResult {
    pub fn new(report: MetricsReport, data: &DataSet, partition: &Partition) -> Self {
        let circles = if data.dim() == 2 {
            partition
                .groups()
                .iter()
                .filter_map(|g| {
                    let region = g.region.as_ref()?;
                    if region.form() == RegionForm::BisectorLine {
                        return None;
                    }
                    let c = region.center()?;
                    Some(Circle {
                        group: g.id,
                        center: [c[0], c[1]],
                        radius: region.radius()?,
                    })
                })
                .collect()
        } else {
            Vec::new()
        };
        Self {
            report,
            dim: data.dim(),
            group_count: partition.group_count(),
            assignments: partition.assignments().to_vec(),
            targets: partition.targets(),
            circles,
            coords: data.rows().map(<[f64]>::to_vec).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.assignments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignments.is_empty()
    }

    pub fn outlier_count(&self) -> usize {
        self.assignments.iter().filter(|l| **l == Label::Outlier).count()
    }

    pub fn to_text(&self) -> String {
        let r = &self.report;
        let mut s = String::new();
        let _ = writeln!(s, "{RESULT_HEADER}");
        let _ = writeln!(s, "algorithm={}", r.algorithm);
        let _ = writeln!(s, "dataset={}", r.dataset);
        let _ = writeln!(s, "params={}", r.params);
        let _ = writeln!(s, "n={}", self.len());
        let _ = writeln!(s, "dim={}", self.dim);
        let _ = writeln!(s, "groups={}", self.group_count);
        let _ = writeln!(s, "runtime_seconds={}", r.runtime_seconds);
        if let Some(ri) = r.ri {
            let _ = writeln!(s, "ri={ri}");
        }
        if let Some(sn) = r.sn {
            let _ = writeln!(s, "sn={sn}");
        }
        let _ = writeln!(s, "vn={}", r.vn);
        if !self.targets.is_empty() {
            let t: Vec<String> = self.targets.iter().map(usize::to_string).collect();
            let _ = writeln!(s, "targets={}", t.join(" "));
        }
        for c in &self.circles {
            let _ = writeln!(s, "circle={} {} {} {}", c.group, c.center[0], c.center[1], c.radius);
        }
        let _ = writeln!(s, "points");
        let mut header = String::from("point_id,group");
        for d in 0..self.dim {
            let _ = write!(header, ",x{d}");
        }
        let _ = writeln!(s, "{header}");
        for (i, (label, coords)) in self.assignments.iter().zip(&self.coords).enumerate() {
            let _ = write!(s, "{i},{label}");
            for v in coords {
                let _ = write!(s, ",{v}");
            }
            s.push('\n');
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
        let err = |line: usize, message: String| Error::Format { line, message };

        match lines.next() {
            Some((_, RESULT_HEADER)) => {}
            Some((line, other)) => return Err(err(line, format!("expected `{RESULT_HEADER}`, found `{other}`"))),
            None => return Err(err(1, "empty result file".into())),
        }

        let mut algorithm = None;
        let mut dataset = None;
        let mut params = None;
        let mut n: Option<usize> = None;
        let mut dim: Option<usize> = None;
        let mut groups: Option<usize> = None;
        let mut runtime = None;
        let mut ri = None;
        let mut sn = None;
        let mut vn = None;
        let mut targets = Vec::new();
        let mut circles = Vec::new();

        fn num<T: std::str::FromStr>(line: usize, key: &str, v: &str) -> Result<T> {
            v.parse().map_err(|_| Error::Format {
                line,
                message: format!("bad value for `{key}`: `{v}`"),
            })
        }

        let mut saw_points = false;
        for (line, l) in lines.by_ref() {
            if l == "points" {
                saw_points = true;
                break;
            }
            let (key, value) = l
                .split_once('=')
                .ok_or_else(|| err(line, format!("expected key=value, found `{l}`")))?;
            match key {
                "algorithm" => algorithm = Some(value.to_string()),
                "dataset" => dataset = Some(value.to_string()),
                "params" => params = Some(value.to_string()),
                "n" => n = Some(num(line, key, value)?),
                "dim" => dim = Some(num(line, key, value)?),
                "groups" => groups = Some(num(line, key, value)?),
                "runtime_seconds" => runtime = Some(num(line, key, value)?),
                "ri" => ri = Some(num(line, key, value)?),
                "sn" => sn = Some(num(line, key, value)?),
                "vn" => vn = Some(num(line, key, value)?),
                "targets" => {
                    targets = value
                        .split_whitespace()
                        .map(|t| num(line, key, t))
                        .collect::<Result<_>>()?
                }
                "circle" => {
                    let f: Vec<&str> = value.split_whitespace().collect();
                    if f.len() != 4 {
                        return Err(err(line, "circle needs `group cx cy radius`".into()));
                    }
                    circles.push(Circle {
                        group: num(line, key, f[0])?,
                        center: [num(line, key, f[1])?, num(line, key, f[2])?],
                        radius: num(line, key, f[3])?,
                    });
                }
                _ => return Err(err(line, format!("unknown key `{key}`"))),
            }
        }
        if !saw_points {
            return Err(err(0, "missing `points` section".into()));
        }
        let missing = |k: &str| Error::Format {
            line: 0,
            message: format!("missing `{k}`"),
        };
        let n = n.ok_or_else(|| missing("n"))?;
        let dim = dim.ok_or_else(|| missing("dim"))?;

        match lines.next() {
            Some((_, h)) if h.starts_with("point_id,group") => {}
            Some((line, h)) => return Err(err(line, format!("expected point header, found `{h}`"))),
            None => return Err(err(0, "missing point header".into())),
        }
        let mut assignments = Vec::with_capacity(n);
        let mut coords = Vec::with_capacity(n);
        for (line, l) in lines {
            if l.is_empty() {
                continue;
            }
            let fields: Vec<&str> = l.split(',').collect();
            if fields.len() != dim + 2 {
                return Err(err(line, format!("expected {} fields, found {}", dim + 2, fields.len())));
            }
            let id: usize = num(line, "point_id", fields[0])?;
            if id != assignments.len() {
                return Err(err(line, format!("point ids must be sequential, found {id}")));
            }
            let label = if fields[1] == "outlier" {
                Label::Outlier
            } else {
                Label::Group(num(line, "group", fields[1])?)
            };
            assignments.push(label);
            coords.push(
                fields[2..]
                    .iter()
                    .map(|v| num(line, "coordinate", v))
                    .collect::<Result<Vec<f64>>>()?,
            );
        }
        if assignments.len() != n {
            return Err(err(0, format!("expected {n} points, found {}", assignments.len())));
        }

        Ok(Self {
            report: MetricsReport {
                algorithm: algorithm.ok_or_else(|| missing("algorithm"))?,
                dataset: dataset.ok_or_else(|| missing("dataset"))?,
                params: params.unwrap_or_default(),
                ri,
                sn,
                vn: vn.ok_or_else(|| missing("vn"))?,
                runtime_seconds: runtime.ok_or_else(|| missing("runtime_seconds"))?,
            },
            dim,
            group_count: groups.ok_or_else(|| missing("groups"))?,
            assignments,
            targets,
            circles,
            coords,
        })
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }
}
