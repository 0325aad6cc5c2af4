//! Catalog files: blocks of `KEY=VALUE` lines separated by blank lines.
//!
//! ```text
//! # desk-sized variant
//! NAME=tiny
//! D1=8
//! D2=2
//! D3=4
//! D4=2
//! D5=1
//! D6=1
//! COLLISION=FULL
//! ENTRY_BYTES=8
//! ```
//!
//! `ENTRY_BYTES` defaults to 4 and is only meaningful for `FULL`.

use gyrobench_core::inputs::{BenchmarkInput, CollisionMode, GridShape};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct CatalogError {
    pub line: usize,
    pub message: String,
}

const KEYS: [&str; 9] = [
    "NAME",
    "D1",
    "D2",
    "D3",
    "D4",
    "D5",
    "D6",
    "COLLISION",
    "ENTRY_BYTES",
];

#[derive(Default)]
struct Block {
    start: usize,
    values: [Option<(usize, String)>; 9],
}

impl Block {
    fn finish(self) -> Result<BenchmarkInput, CatalogError> {
        let err = |line, message: String| CatalogError { line, message };
        let get = |k: usize| {
            self.values[k]
                .clone()
                .ok_or_else(|| err(self.start, format!("entry is missing {}", KEYS[k])))
        };
        let number = |k: usize| -> Result<usize, CatalogError> {
            let (line, v) = get(k)?;
            v.parse()
                .map_err(|_| err(line, format!("{} '{v}' is not a count", KEYS[k])))
        };
        let (_, name) = get(0)?;
        let mut dims = [0; 6];
        for (i, d) in dims.iter_mut().enumerate() {
            *d = number(1 + i)?;
        }
        let grid = GridShape::new(dims).map_err(|e| err(self.start, e.to_string()))?;
        let (line, mode) = get(7)?;
        let collision = match mode.to_ascii_uppercase().as_str() {
            "FULL" => {
                let bytes = match &self.values[8] {
                    None => 4,
                    Some((l, v)) => v
                        .parse()
                        .map_err(|_| err(*l, format!("ENTRY_BYTES '{v}' is not a byte count")))?,
                };
                CollisionMode::full(bytes).map_err(|e| err(line, e.to_string()))?
            }
            "SIMPLIFIED" => CollisionMode::Simplified,
            _ => {
                return Err(err(
                    line,
                    format!("COLLISION '{mode}' must be FULL or SIMPLIFIED"),
                ))
            }
        };
        Ok(BenchmarkInput::new(name, grid, collision))
    }
}

pub fn parse_catalog(text: &str) -> Result<Vec<BenchmarkInput>, CatalogError> {
    let mut out = Vec::new();
    let mut block: Option<Block> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.starts_with('#') {
            continue;
        }
        if trimmed.is_empty() {
            if let Some(b) = block.take() {
                out.push(b.finish()?);
            }
            continue;
        }
        let (key, value) = trimmed.split_once('=').ok_or_else(|| CatalogError {
            line,
            message: format!("expected KEY=VALUE, got '{trimmed}'"),
        })?;
        let key = key.trim().to_ascii_uppercase();
        let k = KEYS
            .iter()
            .position(|&x| x == key)
            .ok_or_else(|| CatalogError {
                line,
                message: format!("unknown key '{key}'"),
            })?;
        let b = block.get_or_insert_with(|| Block {
            start: line,
            ..Block::default()
        });
        if b.values[k].is_some() {
            return Err(CatalogError {
                line,
                message: format!("{key} given twice in one entry"),
            });
        }
        b.values[k] = Some((line, value.trim().to_string()));
    }
    if let Some(b) = block {
        out.push(b.finish()?);
    }
    for (i, a) in out.iter().enumerate() {
        if out[..i]
            .iter()
            .any(|b| b.name.eq_ignore_ascii_case(&a.name))
        {
            return Err(CatalogError {
                line: 0,
                message: format!("input '{}' defined twice", a.name),
            });
        }
    }
    Ok(out)
}

pub fn write_catalog(inputs: &[BenchmarkInput]) -> String {
    let mut out = String::new();
    for (i, input) in inputs.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        out.push_str(&format!("NAME={}\n", input.name));
        for (k, d) in input.grid.dims().iter().enumerate() {
            out.push_str(&format!("D{}={d}\n", k + 1));
        }
        match input.collision {
            CollisionMode::Full { entry_bytes } => {
                out.push_str(&format!("COLLISION=FULL\nENTRY_BYTES={entry_bytes}\n"))
            }
            CollisionMode::Simplified => out.push_str("COLLISION=SIMPLIFIED\n"),
        }
    }
    out
}
