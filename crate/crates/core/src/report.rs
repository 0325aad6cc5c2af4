//! Comparison arithmetic over timing records.
//!
//! A record's time for a [`SectionSet`] is the sum of its member sections.
//! Relative performance of record `r` against a baseline `b` is
//! `rate(r) / rate(b)` with `rate = 1 / (seconds · divisor)`, where the
//! divisor is 1, the node count or the accelerator count depending on
//! [`Norm`]. Ratios above 1 mean faster than the baseline.

use alloc::borrow::ToOwned;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use thiserror::Error;

use crate::timing::{Section, SectionMask, SectionTiming};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReportError {
    #[error("unknown section set '{0}'")]
    UnknownSectionSet(String),
    #[error("section set is empty")]
    EmptySectionSet,
    #[error("unknown normalization '{0}', expected raw, per_node or per_xpu")]
    UnknownNorm(String),
    #[error("no record for baseline '{baseline}' on input {input}")]
    MissingBaseline { input: String, baseline: String },
    #[error("baseline '{baseline}' matches {count} records on input {input}")]
    AmbiguousBaseline {
        input: String,
        baseline: String,
        count: usize,
    },
    #[error("record for input {found} in a comparison of {expected}")]
    MixedInputs { expected: String, found: String },
}

/// One benchmark observation of one system on one input.
#[derive(Debug, Clone, PartialEq)]
pub struct TimingRecord {
    pub system: String,
    pub xpu_type: String,
    pub n_xpu: u32,
    pub n_nodes: u32,
    pub input: String,
    pub sections: SectionTiming,
    /// Substeps per reporting step, when known.
    pub steps_per_report: Option<u32>,
    pub seed: Option<u64>,
}

impl TimingRecord {
    /// Short lowercase label for the processor: vendor and device class
    /// dropped, words joined with `-`. "NVIDIA A100 80G GPU" becomes
    /// `a100-80g`.
    pub fn label(&self) -> String {
        const VENDORS: [&str; 3] = ["intel", "amd", "nvidia"];
        const CLASSES: [&str; 2] = ["gpu", "cpu"];
        let lower = self.xpu_type.to_ascii_lowercase();
        let words: Vec<&str> = lower.split_whitespace().collect();
        let start = usize::from(words.first().is_some_and(|w| VENDORS.contains(w)));
        let end = if words.len() > start + 1 && words.last().is_some_and(|w| CLASSES.contains(w)) {
            words.len() - 1
        } else {
            words.len()
        };
        words[start..end].join("-")
    }

    /// Whether `name` designates this record's processor: its label, its
    /// full processor name, or the label with dashes removed.
    pub fn matches(&self, name: &str) -> bool {
        let label = self.label();
        name.eq_ignore_ascii_case(&label)
            || name.eq_ignore_ascii_case(&self.xpu_type)
            || name.eq_ignore_ascii_case(&label.replace('-', ""))
    }

    pub fn total_time(&self, set: &SectionSet) -> f64 {
        total_time(self, set)
    }
}

/// A named group of sections compared together.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SectionSet {
    pub name: String,
    pub members: SectionMask,
}

impl SectionSet {
    pub fn new(name: impl Into<String>, members: SectionMask) -> Result<Self, ReportError> {
        if members.is_empty() {
            return Err(ReportError::EmptySectionSet);
        }
        Ok(Self {
            name: name.into(),
            members,
        })
    }

    /// The FFT-dominated nonlinear section alone.
    pub fn nl() -> Self {
        Self::builtin("nl", &[Section::Nl])
    }

    /// Code maintained by the application itself: everything except the
    /// FFT library time, io and communication.
    pub fn maintained() -> Self {
        Self::builtin(
            "maintained",
            &[
                Section::Coll,
                Section::Str,
                Section::Field,
                Section::Shear,
                Section::Mem,
            ],
        )
    }

    /// Memory-bound sections.
    pub fn memory() -> Self {
        Self::builtin("memory", &[Section::Mem])
    }

    pub fn all() -> Self {
        Self::builtin("all", &Section::ALL)
    }

    pub fn builtins() -> [SectionSet; 4] {
        [Self::nl(), Self::maintained(), Self::memory(), Self::all()]
    }

    fn builtin(name: &str, members: &[Section]) -> Self {
        Self {
            name: name.to_owned(),
            members: SectionMask::of(members),
        }
    }

    pub fn describe(&self) -> String {
        let names: Vec<&str> = self.members.iter().map(Section::name).collect();
        names.join("+")
    }
}

impl FromStr for SectionSet {
    type Err = ReportError;

    /// A built-in name, or a list of section names separated by `,` or `+`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if let Some(b) = Self::builtins()
            .into_iter()
            .find(|b| b.name.eq_ignore_ascii_case(s))
        {
            return Ok(b);
        }
        let mut members = Vec::new();
        for part in s.split([',', '+']).filter(|p| !p.trim().is_empty()) {
            let section: Section = part
                .parse()
                .map_err(|_| ReportError::UnknownSectionSet(s.to_string()))?;
            members.push(section);
        }
        Self::new(s, SectionMask::of(&members))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Norm {
    Raw,
    PerNode,
    #[default]
    PerXpu,
}

impl Norm {
    pub fn name(self) -> &'static str {
        match self {
            Norm::Raw => "raw",
            Norm::PerNode => "per_node",
            Norm::PerXpu => "per_xpu",
        }
    }

    fn divisor(self, r: &TimingRecord) -> f64 {
        match self {
            Norm::Raw => 1.0,
            Norm::PerNode => r.n_nodes as f64,
            Norm::PerXpu => r.n_xpu as f64,
        }
    }
}

impl fmt::Display for Norm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Norm {
    type Err = ReportError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "raw" => Ok(Norm::Raw),
            "per_node" | "node" => Ok(Norm::PerNode),
            "per_xpu" | "xpu" => Ok(Norm::PerXpu),
            _ => Err(ReportError::UnknownNorm(s.into())),
        }
    }
}

pub fn total_time(r: &TimingRecord, set: &SectionSet) -> f64 {
    set.members.iter().map(|s| r.sections[s]).sum()
}

#[derive(Debug, Clone, PartialEq)]
pub struct RatioRow {
    pub input: String,
    pub system: String,
    pub xpu_type: String,
    pub label: String,
    pub n_xpu: u32,
    pub n_nodes: u32,
    /// Summed seconds of the compared sections.
    pub seconds: f64,
    /// `None` when either side summed to zero.
    pub ratio: Option<f64>,
}

/// Result of a relative-performance comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct RatioTable {
    pub sections: SectionSet,
    pub baseline: String,
    pub norm: Norm,
    pub rows: Vec<RatioRow>,
}

impl RatioTable {
    pub fn empty(sections: SectionSet, baseline: impl Into<String>, norm: Norm) -> Self {
        Self {
            sections,
            baseline: baseline.into(),
            norm,
            rows: Vec::new(),
        }
    }

    pub fn row(&self, input: &str, system: &str) -> Option<&RatioRow> {
        self.rows.iter().find(|r| {
            r.input.eq_ignore_ascii_case(input)
                && (r.label.eq_ignore_ascii_case(system) || r.xpu_type.eq_ignore_ascii_case(system))
        })
    }

    /// Inputs in row order, without repeats.
    pub fn inputs(&self) -> Vec<&str> {
        let mut out: Vec<&str> = Vec::new();
        for r in &self.rows {
            if !out.contains(&r.input.as_str()) {
                out.push(&r.input);
            }
        }
        out
    }
}

/// Relative performance of every record on `input` against `baseline`.
pub fn relative_performance(
    records: &[TimingRecord],
    input: &str,
    set: &SectionSet,
    baseline: &str,
    norm: Norm,
) -> Result<RatioTable, ReportError> {
    if let Some(r) = records.iter().find(|r| r.input != input) {
        return Err(ReportError::MixedInputs {
            expected: input.into(),
            found: r.input.clone(),
        });
    }
    let candidates: Vec<&TimingRecord> = records.iter().filter(|r| r.matches(baseline)).collect();
    let base = match candidates.as_slice() {
        [one] => *one,
        [] => {
            return Err(ReportError::MissingBaseline {
                input: input.into(),
                baseline: baseline.into(),
            })
        }
        many => {
            return Err(ReportError::AmbiguousBaseline {
                input: input.into(),
                baseline: baseline.into(),
                count: many.len(),
            })
        }
    };
    let base_cost = total_time(base, set) * norm.divisor(base);
    let rows = records
        .iter()
        .map(|r| {
            let seconds = total_time(r, set);
            let cost = seconds * norm.divisor(r);
            let ratio = (cost > 0.0 && base_cost > 0.0).then(|| base_cost / cost);
            RatioRow {
                input: r.input.clone(),
                system: r.system.clone(),
                xpu_type: r.xpu_type.clone(),
                label: r.label(),
                n_xpu: r.n_xpu,
                n_nodes: r.n_nodes,
                seconds,
                ratio,
            }
        })
        .collect();
    Ok(RatioTable {
        sections: set.clone(),
        baseline: baseline.into(),
        norm,
        rows,
    })
}

/// Relative performance for every input present in `records`, grouped by
/// input. Inputs listed in `order` come first in that order; any others
/// follow in order of first appearance.
pub fn figure_table(
    records: &[TimingRecord],
    order: &[&str],
    set: &SectionSet,
    baseline: &str,
    norm: Norm,
) -> Result<RatioTable, ReportError> {
    let mut inputs: Vec<&str> = order
        .iter()
        .copied()
        .filter(|i| records.iter().any(|r| r.input == *i))
        .collect();
    for r in records {
        if !inputs.contains(&r.input.as_str()) {
            inputs.push(&r.input);
        }
    }
    let mut table = RatioTable::empty(set.clone(), baseline, norm);
    for input in inputs {
        let group: Vec<TimingRecord> = records
            .iter()
            .filter(|r| r.input == input)
            .cloned()
            .collect();
        table
            .rows
            .extend(relative_performance(&group, input, set, baseline, norm)?.rows);
    }
    Ok(table)
}
