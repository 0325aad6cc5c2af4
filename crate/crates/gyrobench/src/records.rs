//! Timing-record files: one comma-separated row per reporting step.
//!
//! ```text
//! # semantics=natural
//! system,xpu_type,n_xpu,n_nodes,input,nl,coll,str,field,shear,mem,io,comm,steps_per_report,seed
//! local,reference CPU,2,1,n102,0.012,0.004,...,10,42
//! ```
//!
//! Lines starting with `#` carry free-form metadata and are skipped on
//! ingest. `steps_per_report` and `seed` may be empty.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use gyrobench_core::report::TimingRecord;
use gyrobench_core::timing::{Section, SectionTiming};
use thiserror::Error;

pub const HEADER: [&str; 15] = [
    "system",
    "xpu_type",
    "n_xpu",
    "n_nodes",
    "input",
    "nl",
    "coll",
    "str",
    "field",
    "shear",
    "mem",
    "io",
    "comm",
    "steps_per_report",
    "seed",
];

/// Metadata lines heading the bundled record file.
pub const BUNDLED_METADATA: [(&str, &str); 2] = [
    (
        "dataset",
        "published per-reporting-step section timings, 28 records",
    ),
    ("units", "seconds per reporting step"),
];

/// The bundled dataset in record-file form.
pub const BUNDLED_DSV: &str = include_str!("../data/bundled.dsv");

#[derive(Debug, Error)]
pub enum RecordError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("{source_name}, line {line}: {message}")]
    Malformed {
        source_name: String,
        line: u64,
        message: String,
    },
}

/// Seconds with at least three decimals and no precision lost.
pub fn format_seconds(t: f64) -> String {
    let mut s = format!("{t}");
    let decimals = s.find('.').map(|dot| s.len() - dot - 1);
    match decimals {
        None => s.push_str(".000"),
        Some(n) if n < 3 => s.extend(std::iter::repeat_n('0', 3 - n)),
        Some(_) => {}
    }
    s
}

fn row(r: &TimingRecord) -> Vec<String> {
    let mut out = vec![
        r.system.clone(),
        r.xpu_type.clone(),
        r.n_xpu.to_string(),
        r.n_nodes.to_string(),
        r.input.clone(),
    ];
    out.extend(r.sections.to_array().iter().map(|&t| format_seconds(t)));
    out.push(
        r.steps_per_report
            .map(|n| n.to_string())
            .unwrap_or_default(),
    );
    out.push(r.seed.map(|n| n.to_string()).unwrap_or_default());
    out
}

/// Incremental writer used by the harness: metadata and header first,
/// then one flushed row per call to [`RecordWriter::append`].
pub struct RecordWriter<W: Write> {
    inner: csv::Writer<W>,
}

impl<W: Write> RecordWriter<W> {
    pub fn new(mut out: W, metadata: &[(&str, String)]) -> io::Result<Self> {
        for (key, value) in metadata {
            writeln!(out, "# {key}={value}")?;
        }
        let mut inner = csv::Writer::from_writer(out);
        inner.write_record(HEADER).map_err(io::Error::from)?;
        inner.flush()?;
        Ok(Self { inner })
    }

    pub fn append(&mut self, record: &TimingRecord) -> io::Result<()> {
        self.inner
            .write_record(row(record))
            .map_err(io::Error::from)?;
        self.inner.flush()
    }
}

impl RecordWriter<BufWriter<File>> {
    pub fn create(path: &Path, metadata: &[(&str, String)]) -> Result<Self, RecordError> {
        let io_err = |source| RecordError::Io {
            path: path.to_owned(),
            source,
        };
        let file = File::create(path).map_err(io_err)?;
        Self::new(BufWriter::new(file), metadata).map_err(io_err)
    }
}

/// Full record file as a string.
pub fn to_dsv(records: &[TimingRecord], metadata: &[(&str, String)]) -> String {
    let mut buf = Vec::new();
    let mut w = RecordWriter::new(&mut buf, metadata).expect("writing to memory");
    for r in records {
        w.append(r).expect("writing to memory");
    }
    drop(w);
    String::from_utf8(buf).expect("csv output is UTF-8")
}

/// Parses one record file. `source_name` labels error messages.
pub fn parse_records(text: &str, source_name: &str) -> Result<Vec<TimingRecord>, RecordError> {
    let malformed = |line: u64, message: String| RecordError::Malformed {
        source_name: source_name.into(),
        line,
        message,
    };
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .has_headers(true)
        .from_reader(text.as_bytes());
    let header = reader
        .headers()
        .map_err(|e| malformed(csv_line(&e), e.to_string()))?
        .clone();
    if header.iter().ne(HEADER) {
        let line = reader.position().line().max(1);
        return Err(malformed(
            line,
            format!("header must be {}", HEADER.join(",")),
        ));
    }
    let mut out = Vec::new();
    for result in reader.records() {
        let rec = result.map_err(|e| malformed(csv_line(&e), e.to_string()))?;
        let line = rec.position().map_or(0, |p| p.line());
        out.push(parse_row(&rec).map_err(|m| malformed(line, m))?);
    }
    Ok(out)
}

fn csv_line(e: &csv::Error) -> u64 {
    e.position().map_or(0, |p| p.line())
}

fn parse_row(rec: &csv::StringRecord) -> Result<TimingRecord, String> {
    let field = |i: usize| rec.get(i).unwrap_or("").trim();
    let ident = |i: usize| {
        let v = field(i);
        if v.is_empty() {
            Err(format!("{} is empty", HEADER[i]))
        } else {
            Ok(v.to_string())
        }
    };
    let count = |i: usize| {
        field(i)
            .parse::<u32>()
            .map_err(|_| format!("{} '{}' is not a count", HEADER[i], field(i)))
    };
    let optional = |i: usize| -> Result<Option<u64>, String> {
        match field(i) {
            "" => Ok(None),
            v => v
                .parse()
                .map(Some)
                .map_err(|_| format!("{} '{v}' is not an integer", HEADER[i])),
        }
    };
    let mut sections = SectionTiming::default();
    for (k, s) in Section::ALL.into_iter().enumerate() {
        let i = 5 + k;
        let t: f64 = field(i)
            .parse()
            .map_err(|_| format!("{} '{}' is not a number", HEADER[i], field(i)))?;
        if !t.is_finite() || t < 0.0 {
            return Err(format!(
                "{} time {} is negative or not finite",
                HEADER[i],
                field(i)
            ));
        }
        sections[s] = t;
    }
    let (n_xpu, n_nodes) = (count(2)?, count(3)?);
    if n_nodes == 0 || n_xpu < n_nodes {
        return Err(format!(
            "need n_xpu >= n_nodes >= 1, got {n_xpu} and {n_nodes}"
        ));
    }
    let steps = optional(13)?
        .map(|n| u32::try_from(n).map_err(|_| "steps_per_report out of range".to_string()))
        .transpose()?;
    Ok(TimingRecord {
        system: ident(0)?,
        xpu_type: ident(1)?,
        n_xpu,
        n_nodes,
        input: ident(4)?,
        sections,
        steps_per_report: steps,
        seed: optional(14)?,
    })
}

fn same_run(a: &TimingRecord, b: &TimingRecord) -> bool {
    a.system == b.system
        && a.xpu_type == b.xpu_type
        && a.n_xpu == b.n_xpu
        && a.n_nodes == b.n_nodes
        && a.input == b.input
        && a.steps_per_report == b.steps_per_report
        && a.seed == b.seed
}

/// Collapses records of the same run (same system, processor, counts,
/// input, steps per report and seed) into one with mean section times.
/// Groups keep the order of their first record.
pub fn average_reports(records: Vec<TimingRecord>) -> Vec<TimingRecord> {
    let mut groups: Vec<(TimingRecord, SectionTiming, usize)> = Vec::new();
    for r in records {
        match groups.iter_mut().find(|(first, _, _)| same_run(first, &r)) {
            Some((_, sum, n)) => {
                *sum = *sum + r.sections;
                *n += 1;
            }
            None => {
                let s = r.sections;
                groups.push((r, s, 1));
            }
        }
    }
    groups
        .into_iter()
        .map(|(mut r, sum, n)| {
            r.sections = sum.scaled(1.0 / n as f64);
            r
        })
        .collect()
}

/// Reads and averages record files. The name `bundled` stands for the
/// bundled dataset.
pub fn ingest<P: AsRef<Path>>(paths: &[P]) -> Result<Vec<TimingRecord>, RecordError> {
    let mut all = Vec::new();
    for p in paths {
        let p = p.as_ref();
        if p.as_os_str() == "bundled" {
            all.extend(parse_records(BUNDLED_DSV, "bundled")?);
            continue;
        }
        let text = std::fs::read_to_string(p).map_err(|source| RecordError::Io {
            path: p.to_owned(),
            source,
        })?;
        all.extend(parse_records(&text, &p.display().to_string())?);
    }
    Ok(average_reports(all))
}
