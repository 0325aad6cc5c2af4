//! The eight timed code sections and per-reporting-step timings.

use core::fmt;
use core::ops::{Add, Index, IndexMut};
use core::str::FromStr;

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Section {
    Nl,
    Coll,
    Str,
    Field,
    Shear,
    Mem,
    Io,
    Comm,
}

impl Section {
    /// Column order of timing tables.
    pub const ALL: [Section; 8] = [
        Section::Nl,
        Section::Coll,
        Section::Str,
        Section::Field,
        Section::Shear,
        Section::Mem,
        Section::Io,
        Section::Comm,
    ];

    pub const fn name(self) -> &'static str {
        match self {
            Section::Nl => "nl",
            Section::Coll => "coll",
            Section::Str => "str",
            Section::Field => "field",
            Section::Shear => "shear",
            Section::Mem => "mem",
            Section::Io => "io",
            Section::Comm => "comm",
        }
    }

    const fn bit(self) -> u8 {
        1 << self as u8
    }
}

impl fmt::Display for Section {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown section '{0}'")]
pub struct UnknownSection(pub alloc::string::String);

impl FromStr for Section {
    type Err = UnknownSection;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Section::ALL
            .into_iter()
            .find(|sec| sec.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| UnknownSection(s.into()))
    }
}

/// Seconds spent in each section during one reporting step.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SectionTiming {
    pub nl: f64,
    pub coll: f64,
    pub str: f64,
    pub field: f64,
    pub shear: f64,
    pub mem: f64,
    pub io: f64,
    pub comm: f64,
}

impl SectionTiming {
    pub fn from_array(values: [f64; 8]) -> Self {
        let [nl, coll, str, field, shear, mem, io, comm] = values;
        Self {
            nl,
            coll,
            str,
            field,
            shear,
            mem,
            io,
            comm,
        }
    }

    pub fn to_array(&self) -> [f64; 8] {
        Section::ALL.map(|s| self[s])
    }

    pub fn total(&self) -> f64 {
        self.to_array().iter().sum()
    }

    /// True when every entry is finite and non-negative.
    pub fn is_valid(&self) -> bool {
        self.to_array().iter().all(|t| t.is_finite() && *t >= 0.0)
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self::from_array(self.to_array().map(|t| t * factor))
    }
}

impl Index<Section> for SectionTiming {
    type Output = f64;

    fn index(&self, s: Section) -> &f64 {
        match s {
            Section::Nl => &self.nl,
            Section::Coll => &self.coll,
            Section::Str => &self.str,
            Section::Field => &self.field,
            Section::Shear => &self.shear,
            Section::Mem => &self.mem,
            Section::Io => &self.io,
            Section::Comm => &self.comm,
        }
    }
}

impl IndexMut<Section> for SectionTiming {
    fn index_mut(&mut self, s: Section) -> &mut f64 {
        match s {
            Section::Nl => &mut self.nl,
            Section::Coll => &mut self.coll,
            Section::Str => &mut self.str,
            Section::Field => &mut self.field,
            Section::Shear => &mut self.shear,
            Section::Mem => &mut self.mem,
            Section::Io => &mut self.io,
            Section::Comm => &mut self.comm,
        }
    }
}

impl Add for SectionTiming {
    type Output = SectionTiming;

    fn add(self, rhs: Self) -> Self {
        let (a, b) = (self.to_array(), rhs.to_array());
        Self::from_array(core::array::from_fn(|i| a[i] + b[i]))
    }
}

/// Set of sections, stored as a bitmask.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct SectionMask(u8);

impl SectionMask {
    pub const EMPTY: SectionMask = SectionMask(0);

    pub fn of(sections: &[Section]) -> Self {
        Self(sections.iter().fold(0, |m, s| m | s.bit()))
    }

    pub fn all() -> Self {
        Self::of(&Section::ALL)
    }

    pub fn contains(self, s: Section) -> bool {
        self.0 & s.bit() != 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = Section> {
        Section::ALL.into_iter().filter(move |s| self.contains(*s))
    }
}
