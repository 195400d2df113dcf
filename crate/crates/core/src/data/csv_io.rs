use std::fs::File;
use std::io::Write;
use std::path::Path;

use super::{DataSet, Source};
use crate::error::{Error, Result};

/// Which column of a CSV file holds the class label.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LabelColumn {
    None,
    Last,
    /// Zero-based column index.
    Index(usize),
}

/// Whether the first record is a header line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Header {
    /// A header is assumed when a feature field of the first record is not
    /// numeric.
    Auto,
    Present,
    Absent,
}

#[derive(Debug, Clone, Copy)]
pub struct CsvOptions {
    pub label_column: LabelColumn,
    pub delimiter: u8,
    pub header: Header,
}

impl Default for CsvOptions {
    fn default() -> Self {
        Self {
            label_column: LabelColumn::Last,
            delimiter: b',',
            header: Header::Auto,
        }
    }
}

/// Loads a dataset; the name is the file stem. Rows and columns in error
/// messages are 1-based file positions.
pub fn load_csv(path: impl AsRef<Path>, options: &CsvOptions) -> Result<DataSet> {
    let path = path.as_ref();
    let file = File::open(path)?;
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(options.delimiter)
        .has_headers(false)
        .flexible(false)
        .trim(csv::Trim::All)
        .from_reader(file);

    let mut rows = Vec::new();
    let mut labels = Vec::new();
    let mut first = true;
    for record in reader.records() {
        let record = record.map_err(|e| {
            let row = e.position().map(|p| p.line() as usize).unwrap_or(0);
            Error::Parse {
                path: path.to_path_buf(),
                row,
                message: e.to_string(),
            }
        })?;
        let line = record.position().map(|p| p.line() as usize).unwrap_or(0);
        if record.iter().all(|f| f.is_empty()) {
            continue;
        }
        let label_idx = match options.label_column {
            LabelColumn::None => None,
            LabelColumn::Last => Some(record.len() - 1),
            LabelColumn::Index(i) if i < record.len() => Some(i),
            LabelColumn::Index(i) => {
                return Err(Error::Parse {
                    path: path.to_path_buf(),
                    row: line,
                    message: format!("label column {} out of range ({} fields)", i + 1, record.len()),
                })
            }
        };
        if std::mem::take(&mut first) {
            let is_header = match options.header {
                Header::Present => true,
                Header::Absent => false,
                Header::Auto => record
                    .iter()
                    .enumerate()
                    .any(|(col, f)| Some(col) != label_idx && f.parse::<f64>().is_err()),
            };
            if is_header {
                continue;
            }
        }
        let mut coords = Vec::with_capacity(record.len());
        for (col, field) in record.iter().enumerate() {
            if Some(col) == label_idx {
                labels.push(field.to_string());
                continue;
            }
            let value: f64 = field.parse().map_err(|_| Error::NonNumericFeature {
                path: path.to_path_buf(),
                row: line,
                column: col + 1,
                value: field.to_string(),
            })?;
            if !value.is_finite() {
                return Err(Error::NonNumericFeature {
                    path: path.to_path_buf(),
                    row: line,
                    column: col + 1,
                    value: field.to_string(),
                });
            }
            coords.push(value);
        }
        rows.push(coords);
    }

    if rows.is_empty() {
        return Err(Error::EmptyDataset {
            path: path.to_path_buf(),
        });
    }
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "dataset".into());
    let dataset = DataSet::from_rows(name, rows, Source::CsvFile)?;
    if options.label_column == LabelColumn::None {
        Ok(dataset)
    } else {
        dataset.with_named_labels(&labels)
    }
}

/// Writes the dataset with a header line, labels (when present) in the last
/// column. Values use the shortest round-trip decimal form.
pub fn write_csv<W: Write>(dataset: &DataSet, out: W) -> Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    let mut header: Vec<String> = (0..dataset.dim()).map(|i| format!("x{i}")).collect();
    if dataset.labels().is_some() {
        header.push("label".into());
    }
    writer.write_record(&header).map_err(csv_to_io)?;
    for i in 0..dataset.len() {
        let mut record: Vec<String> = dataset.row(i).iter().map(|v| v.to_string()).collect();
        if let Some(labels) = dataset.labels() {
            record.push(dataset.label_names()[labels[i]].clone());
        }
        writer.write_record(&record).map_err(csv_to_io)?;
    }
    writer.flush()?;
    Ok(())
}

pub fn save_csv(dataset: &DataSet, path: impl AsRef<Path>) -> Result<()> {
    let file = File::create(path)?;
    write_csv(dataset, std::io::BufWriter::new(file))
}

fn csv_to_io(e: csv::Error) -> Error {
    Error::Io(std::io::Error::other(e))
}
