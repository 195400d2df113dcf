//! Benchmark harness: datasets × algorithms from a TOML manifest, one CSV row
//! per pair.
//!
//! ```toml
//! repeats = 3
//!
//! [[dataset]]
//! path = "iris.csv"        # relative to the manifest
//! targets = 3
//! scaling = "both"         # raw | zscore | both
//!
//! [[dataset]]
//! gen = "rings:15x40"
//! targets = 15
//!
//! [[algorithm]]
//! name = "ncar"
//! p = 0.05
//!
//! [[algorithm]]
//! name = "knn1"
//! ```
//!
//! `targets` on an algorithm overrides the dataset's. z-scored variants are
//! reported under `<name>+z`.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Deserialize;

use crate::data::{load_csv, CsvOptions, DataSet, GeneratorSpec, Header, LabelColumn};
use crate::density::DistanceMatrix;
use crate::error::{Error, Result};
use crate::partition::Partition;
use crate::registry::{AlgorithmParams, GroupingAlgorithm, Registry};
use crate::report::MetricsReport;

pub const DEFAULT_REPEATS: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scaling {
    #[default]
    Both,
    Raw,
    Zscore,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum LabelSpec {
    Named(String),
    Index(usize),
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatasetEntry {
    pub name: Option<String>,
    pub path: Option<PathBuf>,
    pub gen: Option<String>,
    /// `"last"`, `"none"` or a zero-based column index.
    pub label_column: Option<LabelSpec>,
    /// `true`, `false`; absent means auto-detect.
    pub header: Option<bool>,
    pub delimiter: Option<char>,
    #[serde(default)]
    pub scaling: Scaling,
    pub targets: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgorithmEntry {
    pub name: String,
    pub p: Option<f64>,
    pub targets: Option<usize>,
    pub k_fraction: Option<f64>,
    pub epsilon: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    #[serde(default = "default_repeats")]
    pub repeats: usize,
    #[serde(default, rename = "dataset")]
    pub datasets: Vec<DatasetEntry>,
    #[serde(default, rename = "algorithm")]
    pub algorithms: Vec<AlgorithmEntry>,
    /// Directory that relative dataset paths resolve against.
    #[serde(skip)]
    pub base_dir: PathBuf,
}

fn default_repeats() -> usize {
    DEFAULT_REPEATS
}

impl Manifest {
    pub fn parse(text: &str, path: &Path) -> Result<Self> {
        let manifest_err = |message: String| Error::Manifest {
            path: path.to_path_buf(),
            message,
        };
        let mut manifest: Manifest = toml::from_str(text).map_err(|e| manifest_err(e.to_string()))?;
        manifest.base_dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        if manifest.datasets.is_empty() || manifest.algorithms.is_empty() {
            return Err(manifest_err("manifest needs at least one dataset and one algorithm".into()));
        }
        if manifest.repeats == 0 {
            return Err(manifest_err("repeats must be at least 1".into()));
        }
        for (i, d) in manifest.datasets.iter().enumerate() {
            if d.path.is_some() == d.gen.is_some() {
                return Err(manifest_err(format!("dataset {} needs exactly one of `path` or `gen`", i + 1)));
            }
        }
        Ok(manifest)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        Self::parse(&std::fs::read_to_string(path)?, path)
    }

    /// Rejects algorithm names the registry does not know.
    pub fn check_algorithms(&self, registry: &Registry) -> Result<()> {
        match self.algorithms.iter().find(|a| !registry.contains(&a.name)) {
            Some(a) => Err(Error::UnknownAlgorithm(a.name.clone())),
            None => Ok(()),
        }
    }
}

impl DatasetEntry {
    fn display_name(&self) -> String {
        if let Some(name) = &self.name {
            return name.clone();
        }
        match (&self.path, &self.gen) {
            (Some(p), _) => p
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| p.display().to_string()),
            (None, Some(g)) => g.clone(),
            (None, None) => "dataset".into(),
        }
    }

    fn load(&self, base_dir: &Path) -> Result<DataSet> {
        let mut data = match (&self.path, &self.gen) {
            (Some(path), _) => {
                let label_column = match &self.label_column {
                    None => LabelColumn::Last,
                    Some(LabelSpec::Index(i)) => LabelColumn::Index(*i),
                    Some(LabelSpec::Named(s)) if s == "last" => LabelColumn::Last,
                    Some(LabelSpec::Named(s)) if s == "none" => LabelColumn::None,
                    Some(LabelSpec::Named(s)) => {
                        return Err(Error::InvalidParameter(format!("label_column `{s}`")))
                    }
                };
                let delimiter = self.delimiter.unwrap_or(',');
                if !delimiter.is_ascii() {
                    return Err(Error::InvalidParameter(format!("delimiter `{delimiter}` is not ASCII")));
                }
                let options = CsvOptions {
                    label_column,
                    delimiter: delimiter as u8,
                    header: match self.header {
                        None => Header::Auto,
                        Some(true) => Header::Present,
                        Some(false) => Header::Absent,
                    },
                };
                load_csv(base_dir.join(path), &options)?
            }
            (None, Some(spec)) => spec.parse::<GeneratorSpec>()?.generate()?,
            (None, None) => unreachable!("validated when parsing the manifest"),
        };
        data.set_name(self.display_name());
        Ok(data)
    }
}

/// Runs `f` `repeats` times, timing only the call. Returns the last result
/// and every wall-clock duration in seconds.
pub fn timed_runs<T>(repeats: usize, mut f: impl FnMut() -> Result<T>) -> Result<(T, Vec<f64>)> {
    let mut times = Vec::with_capacity(repeats);
    let mut last = None;
    for _ in 0..repeats.max(1) {
        let start = Instant::now();
        let out = f()?;
        times.push(start.elapsed().as_secs_f64());
        last = Some(out);
    }
    Ok((last.expect("at least one repeat"), times))
}

pub fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    match n {
        0 => f64::NAN,
        _ if n % 2 == 1 => v[n / 2],
        _ => (v[n / 2 - 1] + v[n / 2]) / 2.0,
    }
}

pub fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// Runs the algorithm (distance computation included) and returns the
/// partition with per-repeat timings.
pub fn run_timed(algorithm: &dyn GroupingAlgorithm, data: &DataSet, repeats: usize) -> Result<(Partition, Vec<f64>)> {
    timed_runs(repeats, || algorithm.group(data))
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub dataset: String,
    pub algorithm: String,
    pub outcome: std::result::Result<BenchOk, String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchOk {
    pub n: usize,
    pub groups: usize,
    pub outliers: usize,
    pub report: MetricsReport,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct BenchTable {
    pub rows: Vec<BenchRow>,
}

pub const BENCH_HEADER: &str = "dataset,algorithm,params,n,groups,outliers,ri,sn,vn,runtime_seconds,status";

impl BenchTable {
    pub fn succeeded(&self) -> usize {
        self.rows.iter().filter(|r| r.outcome.is_ok()).count()
    }

    /// CSV text. Without timing the runtime column is left empty so repeated
    /// runs produce identical bytes.
    pub fn to_csv(&self, include_timing: bool) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{BENCH_HEADER}");
        let opt = |v: Option<f64>| v.map(|x| format!("{x:.6}")).unwrap_or_default();
        for row in &self.rows {
            match &row.outcome {
                Ok(ok) => {
                    let r = &ok.report;
                    let runtime = if include_timing {
                        format!("{:.6}", r.runtime_seconds)
                    } else {
                        String::new()
                    };
                    let _ = writeln!(
                        s,
                        "{},{},{},{},{},{},{},{},{:.6},{},ok",
                        csv_field(&row.dataset),
                        csv_field(&row.algorithm),
                        csv_field(&r.params),
                        ok.n,
                        ok.groups,
                        ok.outliers,
                        opt(r.ri),
                        opt(r.sn),
                        r.vn,
                        runtime
                    );
                }
                Err(message) => {
                    let _ = writeln!(
                        s,
                        "{},{},,,,,,,,,{}",
                        csv_field(&row.dataset),
                        csv_field(&row.algorithm),
                        csv_field(&format!("error: {message}"))
                    );
                }
            }
        }
        s
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn bench_one(
    registry: &Registry,
    entry: &AlgorithmEntry,
    dataset_targets: Option<usize>,
    data: &DataSet,
    repeats: usize,
) -> Result<BenchOk> {
    let params = AlgorithmParams {
        p: entry.p,
        targets: entry.targets.or(dataset_targets),
        k_fraction: entry.k_fraction,
        epsilon: entry.epsilon,
    };
    let algorithm = registry.build(&entry.name, &params)?;
    let (partition, times) = run_timed(algorithm.as_ref(), data, repeats)?;
    let dist = DistanceMatrix::from_dataset(data);
    let report = MetricsReport::evaluate(algorithm.name(), &algorithm.params(), data, &dist, &partition, mean(&times))?;
    Ok(BenchOk {
        n: data.len(),
        groups: partition.group_count(),
        outliers: partition.outliers().len(),
        report,
    })
}

/// Runs every (dataset, algorithm) pair in manifest order. Failures become
/// error rows.
pub fn run_bench(manifest: &Manifest, registry: &Registry) -> BenchTable {
    let mut rows = Vec::new();
    for entry in &manifest.datasets {
        let name = entry.display_name();
        let data = match entry.load(&manifest.base_dir) {
            Ok(d) => d,
            Err(e) => {
                for algo in &manifest.algorithms {
                    rows.push(BenchRow {
                        dataset: name.clone(),
                        algorithm: algo.name.clone(),
                        outcome: Err(e.to_string()),
                    });
                }
                continue;
            }
        };
        let mut variants = Vec::new();
        if matches!(entry.scaling, Scaling::Raw | Scaling::Both) {
            variants.push(data.clone());
        }
        if matches!(entry.scaling, Scaling::Zscore | Scaling::Both) {
            let mut z = data.normalize_zscore();
            z.set_name(format!("{name}+z"));
            variants.push(z);
        }
        for variant in &variants {
            for algo in &manifest.algorithms {
                rows.push(BenchRow {
                    dataset: variant.name().to_string(),
                    algorithm: algo.name.clone(),
                    outcome: bench_one(registry, algo, entry.targets, variant, manifest.repeats)
                        .map_err(|e| e.to_string()),
                });
            }
        }
    }
    BenchTable { rows }
}
