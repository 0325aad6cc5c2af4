//! Binary state snapshots.
//!
//! Layout, all little-endian:
//!
//! | bytes | field |
//! |---|---|
//! | 4 | magic `GBNC` |
//! | 4 | format version (u32) |
//! | 24 | grid dimensions d1..d6 (u32 each) |
//! | 4 | batch count (u32) |
//! | 8 | seed (u64) |
//!
//! followed by `f`, `g` (re, im pairs) and `v` as f64. A header with no
//! payload stands for an empty state.

use std::fs::File;
use std::io::{self, BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use gyrobench_core::inputs::GridShape;
use gyrobench_core::kernels::SpectralState;
use gyrobench_core::Complex64;
use thiserror::Error;

pub const MAGIC: [u8; 4] = *b"GBNC";
pub const VERSION: u32 = 1;
pub const HEADER_LEN: usize = 4 + 4 + 6 * 4 + 4 + 8;

#[derive(Debug, Error)]
pub enum SnapshotError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("{path}: {message}")]
    Format { path: PathBuf, message: String },
}

fn u32_of(n: usize, path: &Path) -> Result<[u8; 4], SnapshotError> {
    u32::try_from(n)
        .map(u32::to_le_bytes)
        .map_err(|_| SnapshotError::Format {
            path: path.to_owned(),
            message: format!("{n} does not fit the 32-bit header field"),
        })
}

/// Writes `state` to `path`, returning the byte count.
pub fn write_snapshot(state: &SpectralState, path: &Path) -> Result<u64, SnapshotError> {
    let io_err = |source| SnapshotError::Io {
        path: path.to_owned(),
        source,
    };
    let mut header = Vec::with_capacity(HEADER_LEN);
    header.extend_from_slice(&MAGIC);
    header.extend_from_slice(&VERSION.to_le_bytes());
    for d in state.grid.dims() {
        header.extend_from_slice(&u32_of(d, path)?);
    }
    header.extend_from_slice(&u32_of(SpectralState::batch(&state.grid), path)?);
    header.extend_from_slice(&state.seed.to_le_bytes());

    let mut w = BufWriter::new(File::create(path).map_err(io_err)?);
    w.write_all(&header).map_err(io_err)?;
    let reals = state
        .f
        .iter()
        .chain(&state.g)
        .flat_map(|z| [z.re, z.im])
        .chain(state.v.iter().copied());
    for x in reals {
        w.write_all(&x.to_le_bytes()).map_err(io_err)?;
    }
    w.flush().map_err(io_err)?;
    let payload = 8 * (2 * (state.f.len() + state.g.len()) + state.v.len());
    Ok((HEADER_LEN + payload) as u64)
}

pub fn read_snapshot(path: &Path) -> Result<SpectralState, SnapshotError> {
    let io_err = |source| SnapshotError::Io {
        path: path.to_owned(),
        source,
    };
    let bad = |message: String| SnapshotError::Format {
        path: path.to_owned(),
        message,
    };
    let mut bytes = Vec::new();
    BufReader::new(File::open(path).map_err(io_err)?)
        .read_to_end(&mut bytes)
        .map_err(io_err)?;
    if bytes.len() < HEADER_LEN {
        return Err(bad(format!(
            "{} bytes is shorter than the header",
            bytes.len()
        )));
    }
    if bytes[..4] != MAGIC {
        return Err(bad("missing GBNC magic".into()));
    }
    let word = |at: usize| u32::from_le_bytes(bytes[at..at + 4].try_into().unwrap());
    if word(4) != VERSION {
        return Err(bad(format!("unsupported format version {}", word(4))));
    }
    let mut dims = [0usize; 6];
    for (k, d) in dims.iter_mut().enumerate() {
        *d = word(8 + 4 * k) as usize;
    }
    let grid = GridShape::new(dims).map_err(|e| bad(e.to_string()))?;
    let batch = word(32) as usize;
    if batch != SpectralState::batch(&grid) {
        return Err(bad(format!(
            "batch {batch} disagrees with grid {grid}, expected {}",
            SpectralState::batch(&grid)
        )));
    }
    let seed = u64::from_le_bytes(bytes[36..44].try_into().unwrap());
    let payload = &bytes[HEADER_LEN..];
    if payload.is_empty() {
        return Ok(SpectralState::empty(grid, seed));
    }
    let (nf, ng, nv) = SpectralState::expected_lens(&grid);
    let expected = 8 * (2 * (nf + ng) + nv);
    if payload.len() != expected {
        return Err(bad(format!(
            "payload holds {} bytes, expected {expected}",
            payload.len()
        )));
    }
    let mut reals = payload
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()));
    let mut complex = |n: usize| -> Vec<Complex64> {
        (0..n)
            .map(|_| Complex64::new(reals.next().unwrap(), reals.next().unwrap()))
            .collect()
    };
    let f = complex(nf);
    let g = complex(ng);
    let v = reals.collect();
    Ok(SpectralState {
        grid,
        seed,
        f,
        g,
        v,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_is_44_bytes() {
        assert_eq!(HEADER_LEN, 44);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("empty.gbnc");
        let state = SpectralState::empty(GridShape::new([4, 2, 3, 2, 1, 1]).unwrap(), 9);
        assert_eq!(write_snapshot(&state, &path).unwrap(), 44);
        let bytes = std::fs::read(&path).unwrap();
        assert_eq!(bytes.len(), 44);
        assert_eq!(&bytes[..4], b"GBNC");
        assert_eq!(bytes[32..36], 4u32.to_le_bytes());
        assert_eq!(read_snapshot(&path).unwrap(), state);
    }

    #[test]
    fn round_trip_is_exact() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("s.gbnc");
        let state = SpectralState::seeded(GridShape::new([4, 2, 3, 2, 1, 2]).unwrap(), 5);
        let n = write_snapshot(&state, &path).unwrap();
        assert_eq!(n, std::fs::metadata(&path).unwrap().len());
        assert_eq!(read_snapshot(&path).unwrap(), state);
    }

    #[test]
    fn corrupt_files_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("s.gbnc");
        let state = SpectralState::seeded(GridShape::new([2, 1, 2, 1, 1, 1]).unwrap(), 5);
        write_snapshot(&state, &path).unwrap();
        let good = std::fs::read(&path).unwrap();
        let cases: [(Vec<u8>, &str); 4] = [
            (good[..good.len() - 1].to_vec(), "payload"),
            (good[..20].to_vec(), "shorter"),
            ([b"XXXX", &good[4..]].concat(), "magic"),
            (
                [&good[..4], &7u32.to_le_bytes()[..], &good[8..]].concat(),
                "version",
            ),
        ];
        for (bytes, needle) in cases {
            std::fs::write(&path, bytes).unwrap();
            let e = read_snapshot(&path).unwrap_err().to_string();
            assert!(e.contains(needle), "{e}");
        }
    }

    #[test]
    fn unwritable_path_is_io_error() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("missing").join("s.gbnc");
        let state = SpectralState::empty(GridShape::new([2, 1, 1, 1, 1, 1]).unwrap(), 0);
        match write_snapshot(&state, &path) {
            Err(SnapshotError::Io { path: p, .. }) => assert_eq!(p, path),
            other => panic!("unexpected {other:?}"),
        }
    }
}
