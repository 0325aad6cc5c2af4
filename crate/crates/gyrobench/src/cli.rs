//! Command-line front end.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error, 3 runtime error.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use gyrobench_core::fftplan::BackendSemantics;
use gyrobench_core::inputs::{catalog, lookup, scale_input, BenchmarkInput, Scale};
use gyrobench_core::kernels::KernelError;
use gyrobench_core::report::{figure_table, relative_performance, Norm, SectionSet};
use gyrobench_core::timing::Section;

use crate::catalog_file::parse_catalog;
use crate::harness::snapshot::{read_snapshot, MAGIC};
use crate::harness::{run, HarnessError, RunConfig};
use crate::records::{ingest, parse_records, RecordError, HEADER};
use crate::render::{render, Format};

pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATA: i32 = 2;
pub const EXIT_RUNTIME: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "gyrobench",
    version,
    about = "Section-timed gyrokinetic benchmark surrogate"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct CatalogArg {
    /// Catalog file to use instead of the built-in inputs.
    #[arg(long, value_name = "FILE")]
    catalog: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List catalog inputs with their grids.
    List {
        #[command(flatten)]
        catalog: CatalogArg,
    },
    /// Show grid, FFT shape, batch and collision memory of one input.
    Describe {
        #[arg(value_name = "INPUT", required_unless_present = "input")]
        name: Option<String>,
        #[arg(long, conflicts_with = "name")]
        input: Option<String>,
        /// Shrink factor such as 1/8.
        #[arg(long, default_value = "1", value_parser = parse_scale)]
        scale: Scale,
        #[command(flatten)]
        catalog: CatalogArg,
    },
    /// Run the harness and write one timing record per reporting step.
    Run {
        #[arg(long)]
        input: String,
        #[arg(long, default_value = "1", value_parser = parse_scale)]
        scale: Scale,
        /// Steps per reporting step.
        #[arg(long, default_value_t = 10)]
        steps: u32,
        #[arg(long, default_value_t = 1)]
        reports: u32,
        /// natural or reversed.
        #[arg(long, default_value = "natural")]
        semantics: BackendSemantics,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value = "gyrobench-timing.dsv")]
        out: PathBuf,
        #[command(flatten)]
        catalog: CatalogArg,
    },
    /// Compare timing records against a baseline processor.
    Report {
        /// Record files; `bundled` is the published dataset.
        #[arg(long, num_args = 1.., default_value = "bundled")]
        data: Vec<PathBuf>,
        /// Restrict to one input; all inputs otherwise.
        #[arg(long)]
        input: Option<String>,
        /// nl, maintained, memory, all, or sections joined by `+`.
        #[arg(long, default_value = "all")]
        sections: SectionSet,
        #[arg(long, default_value = "a100-80g")]
        baseline: String,
        /// raw, per_node or per_xpu.
        #[arg(long, default_value = "per_xpu")]
        norm: Norm,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        /// Write here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a timing-record, catalog or snapshot file.
    Validate { path: PathBuf },
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Data(String),
    Runtime(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Usage(_) => EXIT_USAGE,
            Failure::Data(_) => EXIT_DATA,
            Failure::Runtime(_) => EXIT_RUNTIME,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Data(m) | Failure::Runtime(m) => m,
        }
    }
}

impl From<HarnessError> for Failure {
    fn from(e: HarnessError) -> Self {
        let msg = e.to_string();
        match e {
            HarnessError::Config(_) => Failure::Usage(msg),
            HarnessError::Input(_) => Failure::Data(msg),
            HarnessError::Kernel(KernelError::Input(_)) => Failure::Data(msg),
            _ => Failure::Runtime(msg),
        }
    }
}

impl From<RecordError> for Failure {
    fn from(e: RecordError) -> Self {
        match e {
            RecordError::Io { .. } => Failure::Runtime(e.to_string()),
            RecordError::Malformed { .. } => Failure::Data(e.to_string()),
        }
    }
}

fn parse_scale(s: &str) -> Result<Scale, String> {
    s.trim()
        .parse()
        .map_err(|_| format!("'{s}' is not a ratio such as 1/8"))
}

fn io_failure(path: &Path) -> impl Fn(std::io::Error) -> Failure + '_ {
    move |e| Failure::Runtime(format!("{}: {e}", path.display()))
}

fn load_catalog(arg: &CatalogArg) -> Result<Vec<BenchmarkInput>, Failure> {
    let Some(path) = &arg.catalog else {
        return Ok(catalog());
    };
    let text = std::fs::read_to_string(path).map_err(io_failure(path))?;
    parse_catalog(&text).map_err(|e| Failure::Data(format!("{}: {e}", path.display())))
}

fn find_input(
    inputs: &[BenchmarkInput],
    name: &str,
    scale: Scale,
) -> Result<BenchmarkInput, Failure> {
    let input = lookup(inputs, name).ok_or_else(|| {
        let names: Vec<&str> = inputs.iter().map(|i| i.name.as_str()).collect();
        Failure::Data(format!(
            "unknown input '{name}', expected one of {}",
            names.join(", ")
        ))
    })?;
    scale_input(input, scale).map_err(|e| Failure::Data(e.to_string()))
}

fn gib(bytes: u64) -> f64 {
    bytes as f64 / (1u64 << 30) as f64
}

fn list(out: &mut dyn Write, inputs: &[BenchmarkInput]) -> std::io::Result<()> {
    let width = inputs.iter().map(|i| i.name.len()).max().unwrap_or(0);
    for i in inputs {
        writeln!(
            out,
            "{:<width$}  {:<32}  {:>12}  {}",
            i.name,
            i.grid.to_string(),
            i.grid.total(),
            i.collision
        )?;
    }
    Ok(())
}

fn describe(out: &mut dyn Write, input: &BenchmarkInput) -> Result<(), Failure> {
    let fft = input
        .fft_shape()
        .map_err(|e| Failure::Data(e.to_string()))?;
    let memory = input
        .collision_memory()
        .map_err(|e| Failure::Data(e.to_string()))?;
    let mut lines = vec![
        ("input", input.name.clone()),
        ("scale", input.scale.to_string()),
        ("grid", input.grid.to_string()),
        ("points", input.grid.total().to_string()),
        ("fft", fft.to_string()),
        ("batch", fft.batch.to_string()),
        ("collision", input.collision.to_string()),
    ];
    lines.push((
        "memory",
        if input.collision.is_full() {
            format!("{:.2} GiB ({memory} bytes)", gib(memory))
        } else {
            "no collision constants".into()
        },
    ));
    for (k, v) in lines {
        writeln!(out, "{k:<10} {v}").map_err(|e| Failure::Runtime(e.to_string()))?;
    }
    Ok(())
}

fn validate(out: &mut dyn Write, path: &Path) -> Result<(), Failure> {
    let bytes = std::fs::read(path).map_err(io_failure(path))?;
    let say = |out: &mut dyn Write, msg: String| {
        writeln!(out, "{}: {msg}", path.display()).map_err(|e| Failure::Runtime(e.to_string()))
    };
    if bytes.starts_with(&MAGIC) {
        let state = read_snapshot(path).map_err(|e| Failure::Data(e.to_string()))?;
        let kind = if state.is_empty() {
            "header only"
        } else {
            "full state"
        };
        return say(
            out,
            format!(
                "snapshot ok, grid {}, seed {}, {kind}",
                state.grid, state.seed
            ),
        );
    }
    let text = String::from_utf8(bytes).map_err(|_| {
        Failure::Data(format!(
            "{}: not a snapshot and not UTF-8 text",
            path.display()
        ))
    })?;
    let first = text
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#'))
        .unwrap_or("");
    if first.starts_with(&format!("{},", HEADER[0])) {
        let records = parse_records(&text, &path.display().to_string())?;
        return say(out, format!("timing records ok, {} rows", records.len()));
    }
    if first.contains('=') {
        let inputs =
            parse_catalog(&text).map_err(|e| Failure::Data(format!("{}: {e}", path.display())))?;
        return say(out, format!("catalog ok, {} inputs", inputs.len()));
    }
    Err(Failure::Data(format!(
        "{}: not a timing-record, catalog or snapshot file",
        path.display()
    )))
}

fn write_out(out: &mut dyn Write, text: &str, path: Option<&Path>) -> Result<(), Failure> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(io_failure(p)),
        None => out
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Runtime(e.to_string())),
    }
}

fn execute(command: Command, out: &mut dyn Write) -> Result<(), Failure> {
    let io = |e: std::io::Error| Failure::Runtime(e.to_string());
    match command {
        Command::List { catalog } => list(out, &load_catalog(&catalog)?).map_err(io),
        Command::Describe {
            name,
            input,
            scale,
            catalog,
        } => {
            let inputs = load_catalog(&catalog)?;
            let name = name.or(input).expect("clap requires a name");
            describe(out, &find_input(&inputs, &name, scale)?)
        }
        Command::Run {
            input,
            scale,
            steps,
            reports,
            semantics,
            workers,
            seed,
            out: path,
            catalog,
        } => {
            let input = find_input(&load_catalog(&catalog)?, &input, scale)?;
            let mut cfg = RunConfig::new(input, path);
            cfg.steps_per_report = steps;
            cfg.reports = reports;
            cfg.semantics = semantics;
            cfg.workers = workers;
            cfg.seed = seed;
            let summary = run(&cfg)?;
            for (k, (t, wall)) in summary.timings.iter().zip(&summary.wall).enumerate() {
                let parts: Vec<String> = Section::ALL
                    .iter()
                    .map(|&s| format!("{s} {:.4}", t[s]))
                    .collect();
                writeln!(
                    out,
                    "report {}: {}  total {:.4}  wall {:.4}",
                    k + 1,
                    parts.join("  "),
                    t.total(),
                    wall
                )
                .map_err(io)?;
            }
            writeln!(out, "checksum {:.15e}", summary.checksum).map_err(io)?;
            writeln!(out, "records  {}", cfg.out_path.display()).map_err(io)?;
            writeln!(
                out,
                "snapshot {} ({} bytes)",
                cfg.snapshot_path().display(),
                summary.snapshot_bytes
            )
            .map_err(io)
        }
        Command::Report {
            data,
            input,
            sections,
            baseline,
            norm,
            format,
            out: path,
        } => {
            let records = ingest(&data)?;
            let data_err = |e: gyrobench_core::report::ReportError| Failure::Data(e.to_string());
            let table = match input {
                Some(name) => {
                    let group: Vec<_> = records.into_iter().filter(|r| r.input == name).collect();
                    if group.is_empty() {
                        return Err(Failure::Data(format!("no records for input '{name}'")));
                    }
                    relative_performance(&group, &name, &sections, &baseline, norm)
                        .map_err(data_err)?
                }
                None => {
                    let names: Vec<String> = catalog().into_iter().map(|i| i.name).collect();
                    let order: Vec<&str> = names.iter().map(String::as_str).collect();
                    figure_table(&records, &order, &sections, &baseline, norm).map_err(data_err)?
                }
            };
            write_out(out, &render(&table, format), path.as_deref())
        }
        Command::Validate { path } => validate(out, &path),
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// exit code. Normal output goes to `out`, diagnostics to `err`.
pub fn main_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    0
                }
                _ => {
                    let _ = write!(err, "{}", e.render());
                    EXIT_USAGE
                }
            };
        }
    };
    match execute(cli.command, out) {
        Ok(()) => 0,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message());
            f.code()
        }
    }
}
