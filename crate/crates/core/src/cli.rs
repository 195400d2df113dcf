//! Command-line surface: `run`, `bench`, `plot` and `gen`.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::bench::{median, run_bench, run_timed, Manifest, DEFAULT_REPEATS};
use crate::data::{load_csv, save_csv, CsvOptions, DataSet, GeneratorSpec, Header, LabelColumn};
use crate::density::DistanceMatrix;
use crate::error::{Error, Result};
use crate::plot::{render_svg, PlotOptions};
use crate::registry::{AlgorithmParams, Registry};
use crate::report::{MetricsReport, RunResult};

pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DATA: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "ncar", version, about = "Neighborhood construction with Apollonius regions")]
pub struct Cli {
    /// Directory for outputs written without an explicit --out.
    #[arg(long, global = true, env = "NCAR_OUT_DIR", value_name = "DIR")]
    pub out_dir: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one algorithm on one dataset and write a result file.
    Run(RunArgs),
    /// Run every dataset × algorithm pair of a TOML manifest.
    Bench(BenchArgs),
    /// Render a 2D result file as SVG.
    Plot(PlotArgs),
    /// Write a generated dataset as CSV.
    Gen(GenArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum HeaderArg {
    Auto,
    Present,
    Absent,
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("input").required(true).args(["data", "gen"])))]
pub struct RunArgs {
    /// CSV file of features, label in the last column by default.
    #[arg(long, value_name = "CSV")]
    pub data: Option<PathBuf>,

    /// Generator spec, e.g. `rings:15x40`, `blobs:2x50,outliers=10` or `fig8`.
    #[arg(long, value_name = "SPEC")]
    pub gen: Option<String>,

    /// ncar, knn1, knn2, epsilon or dpc.
    #[arg(long, default_value = "ncar")]
    pub algo: String,

    /// Fraction of points used as density neighbors.
    #[arg(long)]
    pub p: Option<f64>,

    /// Number of targets (ncar) or centers (dpc); automatic when omitted.
    #[arg(long)]
    pub targets: Option<usize>,

    #[arg(long)]
    pub k_fraction: Option<f64>,

    /// ε for the epsilon baseline; picked from the 4-distance curve when omitted.
    #[arg(long)]
    pub epsilon: Option<f64>,

    /// z-score every feature before running.
    #[arg(long)]
    pub normalize: bool,

    /// `last`, `none` or a zero-based column index.
    #[arg(long, default_value = "last")]
    pub label_column: String,

    #[arg(long, value_enum, default_value_t = HeaderArg::Auto)]
    pub header: HeaderArg,

    #[arg(long, default_value_t = ',')]
    pub delimiter: char,

    /// Timed repetitions; the median is reported.
    #[arg(long, default_value_t = DEFAULT_REPEATS)]
    pub repeats: usize,

    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    pub manifest: PathBuf,

    #[arg(long, short)]
    pub out: Option<PathBuf>,

    /// Leave the runtime column empty so tables are reproducible byte for byte.
    #[arg(long)]
    pub omit_timing: bool,
}

#[derive(Debug, Args)]
pub struct PlotArgs {
    pub result: PathBuf,

    #[arg(long, short)]
    pub out: Option<PathBuf>,

    /// Plot the first two features of higher-dimensional results.
    #[arg(long)]
    pub project: bool,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    pub spec: String,

    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

/// Exit code for a failed command.
pub fn exit_code(error: &Error) -> i32 {
    match error {
        Error::UnknownAlgorithm(_)
        | Error::InvalidParameter(_)
        | Error::InvalidTargetCount { .. }
        | Error::InvalidRatio(_)
        | Error::Manifest { .. }
        | Error::Dimension { .. } => EXIT_USAGE,
        _ => EXIT_DATA,
    }
}

fn output_path(explicit: Option<PathBuf>, out_dir: Option<&Path>, default_name: &str) -> Result<PathBuf> {
    if let Some(p) = explicit {
        return Ok(p);
    }
    let dir = out_dir.map(Path::to_path_buf).unwrap_or_else(|| PathBuf::from("."));
    std::fs::create_dir_all(&dir)?;
    Ok(dir.join(default_name))
}

fn file_safe(name: &str) -> String {
    name.chars()
        .map(|c| if c.is_ascii_alphanumeric() || "-_+.".contains(c) { c } else { '_' })
        .collect()
}

fn parse_label_column(s: &str) -> Result<LabelColumn> {
    match s {
        "last" => Ok(LabelColumn::Last),
        "none" => Ok(LabelColumn::None),
        other => other
            .parse()
            .map(LabelColumn::Index)
            .map_err(|_| Error::InvalidParameter(format!("label column `{other}`: expected last, none or an index"))),
    }
}

fn load_input(args: &RunArgs) -> Result<DataSet> {
    let data = match (&args.data, &args.gen) {
        (Some(path), _) => {
            if !args.delimiter.is_ascii() {
                return Err(Error::InvalidParameter(format!("delimiter `{}` is not ASCII", args.delimiter)));
            }
            let options = CsvOptions {
                label_column: parse_label_column(&args.label_column)?,
                delimiter: args.delimiter as u8,
                header: match args.header {
                    HeaderArg::Auto => Header::Auto,
                    HeaderArg::Present => Header::Present,
                    HeaderArg::Absent => Header::Absent,
                },
            };
            load_csv(path, &options)?
        }
        (None, Some(spec)) => spec.parse::<GeneratorSpec>()?.generate()?,
        (None, None) => return Err(Error::InvalidParameter("either --data or --gen is required".into())),
    };
    if args.normalize {
        let mut z = data.normalize_zscore();
        z.set_name(format!("{}+z", data.name()));
        Ok(z)
    } else {
        Ok(data)
    }
}

pub fn cmd_run(args: &RunArgs, out_dir: Option<&Path>, registry: &Registry) -> Result<(PathBuf, RunResult)> {
    // validate arguments before touching the data
    let params = AlgorithmParams {
        p: args.p,
        targets: args.targets,
        k_fraction: args.k_fraction,
        epsilon: args.epsilon,
    };
    let algorithm = registry.build(&args.algo, &params)?;
    if args.repeats == 0 {
        return Err(Error::InvalidParameter("--repeats must be at least 1".into()));
    }
    let data = load_input(args)?;
    let (partition, times) = run_timed(algorithm.as_ref(), &data, args.repeats)?;
    let dist = DistanceMatrix::from_dataset(&data);
    let report = MetricsReport::evaluate(algorithm.name(), &algorithm.params(), &data, &dist, &partition, median(&times))?;
    let result = RunResult::new(report, &data, &partition);
    let name = format!("{}-{}.result", file_safe(data.name()), file_safe(algorithm.name()));
    let path = output_path(args.out.clone(), out_dir, &name)?;
    result.write(&path)?;
    Ok((path, result))
}

pub fn cmd_bench(args: &BenchArgs, out_dir: Option<&Path>, registry: &Registry) -> Result<(PathBuf, usize, usize)> {
    let manifest = Manifest::load(&args.manifest)?;
    manifest.check_algorithms(registry)?;
    let table = run_bench(&manifest, registry);
    let stem = args
        .manifest
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "bench".into());
    let path = output_path(args.out.clone(), out_dir, &format!("{}.bench.csv", file_safe(&stem)))?;
    std::fs::write(&path, table.to_csv(!args.omit_timing))?;
    Ok((path, table.succeeded(), table.rows.len()))
}

pub fn cmd_plot(args: &PlotArgs, out_dir: Option<&Path>) -> Result<PathBuf> {
    let result = RunResult::read(&args.result)?;
    let svg = render_svg(&result, PlotOptions { project: args.project })?;
    let stem = args
        .result
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "plot".into());
    let path = output_path(args.out.clone(), out_dir, &format!("{}.svg", file_safe(&stem)))?;
    std::fs::write(&path, svg)?;
    Ok(path)
}

pub fn cmd_gen(args: &GenArgs, out_dir: Option<&Path>) -> Result<PathBuf> {
    let data = args.spec.parse::<GeneratorSpec>()?.generate()?;
    let path = output_path(args.out.clone(), out_dir, &format!("{}.csv", file_safe(data.name())))?;
    save_csv(&data, &path)?;
    Ok(path)
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.4}")).unwrap_or_else(|| "n/a".into())
}

/// Runs a parsed command line and returns the process exit code.
pub fn execute(cli: Cli) -> i32 {
    let registry = Registry::with_builtins();
    let out_dir = cli.out_dir.as_deref();
    let outcome = match &cli.command {
        Command::Run(args) => cmd_run(args, out_dir, &registry).map(|(path, r)| {
            println!(
                "{}: {} groups, {} outliers, RI {}, SN {}, VN {:.4}, {:.6} s",
                path.display(),
                r.group_count,
                r.outlier_count(),
                fmt_opt(r.report.ri),
                fmt_opt(r.report.sn),
                r.report.vn,
                r.report.runtime_seconds
            );
            0
        }),
        Command::Bench(args) => cmd_bench(args, out_dir, &registry).map(|(path, ok, total)| {
            println!("{}: {ok} of {total} rows succeeded", path.display());
            if ok == 0 {
                EXIT_DATA
            } else {
                0
            }
        }),
        Command::Plot(args) => cmd_plot(args, out_dir).map(|path| {
            println!("{}", path.display());
            0
        }),
        Command::Gen(args) => cmd_gen(args, out_dir).map(|path| {
            println!("{}", path.display());
            0
        }),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            let code = exit_code(&e);
            if code == EXIT_USAGE {
                let names: Vec<&str> = registry.names().collect();
                eprintln!("usage: ncar run (--data CSV | --gen SPEC) --algo <{}> [--p P] [--targets N]", names.join("|"));
                eprintln!("       ncar bench MANIFEST [--out CSV]");
                eprintln!("       ncar plot RESULT [--out SVG] [--project]");
                eprintln!("       ncar gen SPEC [--out CSV]");
            }
            code
        }
    }
}
