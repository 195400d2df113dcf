//! Datasets: in-memory representation, CSV I/O, generators and fixtures.

mod csv_io;
mod fixture;
mod gen_spec;
mod generate;

pub use csv_io::{load_csv, save_csv, write_csv, CsvOptions, Header, LabelColumn};
pub use fixture::{fig8_fixture, FIG8_P, FIG8_TARGET_COUNT};
pub use gen_spec::GeneratorSpec;
pub use generate::{
    generate_blobs_with_outliers, generate_gaussian_rings, BlobSpec, OUTLIER_CLASS,
};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Source {
    CsvFile,
    Generator,
    Fixture,
}

/// A single row of a [`DataSet`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point<'a> {
    pub id: usize,
    pub coords: &'a [f64],
}

/// An `n × m` point matrix with optional class labels.
///
/// Labels are dense ids into `label_names`.
#[derive(Debug, Clone, PartialEq)]
pub struct DataSet {
    name: String,
    dim: usize,
    values: Vec<f64>,
    labels: Option<Vec<usize>>,
    label_names: Vec<String>,
    source: Source,
}

impl DataSet {
    /// Builds a dataset from rows, validating shape and finiteness.
    pub fn from_rows(name: impl Into<String>, rows: Vec<Vec<f64>>, source: Source) -> Result<Self> {
        if rows.len() < 2 {
            return Err(Error::TooFewPoints {
                required: 2,
                found: rows.len(),
            });
        }
        let dim = rows[0].len();
        if dim == 0 {
            return Err(Error::InvalidParameter("points must have at least one feature".into()));
        }
        let mut values = Vec::with_capacity(rows.len() * dim);
        for (row, coords) in rows.iter().enumerate() {
            if coords.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: coords.len(),
                });
            }
            if let Some(column) = coords.iter().position(|v| !v.is_finite()) {
                return Err(Error::NonFinite { row, column });
            }
            values.extend_from_slice(coords);
        }
        Ok(Self {
            name: name.into(),
            dim,
            values,
            labels: None,
            label_names: Vec::new(),
            source,
        })
    }

    /// Attaches labels given as dense ids with their names.
    pub fn with_labels(mut self, labels: Vec<usize>, names: Vec<String>) -> Result<Self> {
        if labels.len() != self.len() {
            return Err(Error::LengthMismatch {
                left: self.len(),
                right: labels.len(),
            });
        }
        if let Some(&bad) = labels.iter().find(|&&l| l >= names.len()) {
            return Err(Error::InvalidParameter(format!(
                "label id {bad} has no name ({} names)",
                names.len()
            )));
        }
        self.labels = Some(labels);
        self.label_names = names;
        Ok(self)
    }

    /// Attaches string labels, mapping them to dense ids in first-seen order.
    pub fn with_named_labels<S: AsRef<str>>(self, labels: &[S]) -> Result<Self> {
        let mut names: Vec<String> = Vec::new();
        let ids = labels
            .iter()
            .map(|l| {
                let l = l.as_ref();
                match names.iter().position(|n| n == l) {
                    Some(i) => i,
                    None => {
                        names.push(l.to_string());
                        names.len() - 1
                    }
                }
            })
            .collect();
        self.with_labels(ids, names)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn set_name(&mut self, name: impl Into<String>) {
        self.name = name.into();
    }

    pub fn len(&self) -> usize {
        self.values.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn source(&self) -> Source {
        self.source
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.dim..(i + 1) * self.dim]
    }

    pub fn point(&self, i: usize) -> Point<'_> {
        Point {
            id: i,
            coords: self.row(i),
        }
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> + '_ {
        self.values.chunks_exact(self.dim)
    }

    pub fn labels(&self) -> Option<&[usize]> {
        self.labels.as_deref()
    }

    pub fn label_names(&self) -> &[String] {
        &self.label_names
    }

    /// Column-wise z-score standardization with population standard deviation.
    ///
    /// Zero-variance columns become all zeros.
    pub fn normalize_zscore(&self) -> DataSet {
        let n = self.len();
        let mut out = self.clone();
        for col in 0..self.dim {
            let mean = self.rows().map(|r| r[col]).sum::<f64>() / n as f64;
            let var = self.rows().map(|r| (r[col] - mean).powi(2)).sum::<f64>() / n as f64;
            let sd = var.sqrt();
            for i in 0..n {
                let v = &mut out.values[i * self.dim + col];
                *v = if sd > 0.0 { (*v - mean) / sd } else { 0.0 };
            }
        }
        out
    }

    /// Keeps only the first `k` features.
    pub fn project(&self, k: usize) -> Result<DataSet> {
        if k == 0 || k > self.dim {
            return Err(Error::InvalidParameter(format!(
                "cannot project {}-dimensional data onto {k} features",
                self.dim
            )));
        }
        let rows = self.rows().map(|r| r[..k].to_vec()).collect();
        let mut out = DataSet::from_rows(self.name.clone(), rows, self.source)?;
        out.labels = self.labels.clone();
        out.label_names = self.label_names.clone();
        Ok(out)
    }
}

/// Free-function form of [`DataSet::normalize_zscore`].
pub fn normalize_zscore(dataset: &DataSet) -> DataSet {
    dataset.normalize_zscore()
}
