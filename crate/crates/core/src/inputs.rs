//! Benchmark-input catalog and the shape arithmetic derived from it.
//!
//! A benchmark input is a six-dimensional grid plus a collision mode. The
//! dimensions are stored positionally; the conventional reading is
//! (radial, poloidal, toroidal, energy, pitch-angle, species) but nothing in
//! this module depends on that interpretation.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_rational::Ratio;
use thiserror::Error;

/// Rational factor used to shrink a benchmark input to desk scale.
pub type Scale = Ratio<u64>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InputError {
    #[error("grid dimension d{index} must be at least 1")]
    ZeroDimension { index: usize },
    #[error("radial extent d1={d1} must be even for the 3/2 padded extent to be integral")]
    OddRadial { d1: usize },
    #[error("collision entry size must be 4 or 8 bytes, got {0}")]
    InvalidEntryBytes(u8),
    #[error("byte count overflows 64 bits")]
    Overflow,
    #[error("scale factor {numer}/{denom} must be positive and at most 1")]
    ScaleOutOfRange { numer: u64, denom: u64 },
    #[error("scaling {dim}={value} by {numer}/{denom} does not give {requirement}")]
    NonIntegralScale {
        dim: &'static str,
        value: usize,
        numer: u64,
        denom: u64,
        requirement: &'static str,
    },
}

/// Six-dimensional benchmark grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GridShape {
    dims: [usize; 6],
}

impl GridShape {
    pub fn new(dims: [usize; 6]) -> Result<Self, InputError> {
        if let Some(i) = dims.iter().position(|&d| d == 0) {
            return Err(InputError::ZeroDimension { index: i + 1 });
        }
        Ok(Self { dims })
    }

    pub const fn dims(&self) -> [usize; 6] {
        self.dims
    }

    /// Radial extent.
    pub const fn d1(&self) -> usize {
        self.dims[0]
    }
    /// Poloidal extent.
    pub const fn d2(&self) -> usize {
        self.dims[1]
    }
    /// Toroidal mode count.
    pub const fn d3(&self) -> usize {
        self.dims[2]
    }
    /// Energy nodes.
    pub const fn d4(&self) -> usize {
        self.dims[3]
    }
    /// Pitch-angle nodes.
    pub const fn d5(&self) -> usize {
        self.dims[4]
    }
    /// Species.
    pub const fn d6(&self) -> usize {
        self.dims[5]
    }

    /// Number of grid points, `None` on overflow.
    pub fn checked_total(&self) -> Option<u64> {
        self.dims
            .iter()
            .try_fold(1u64, |acc, &d| acc.checked_mul(d as u64))
    }

    pub fn total(&self) -> u64 {
        self.checked_total()
            .expect("grid point count overflows u64")
    }

    /// Spatial points per velocity-species block: d1·d2·d3.
    pub const fn spatial(&self) -> usize {
        self.dims[0] * self.dims[1] * self.dims[2]
    }

    /// Velocity-species block size: d4·d5·d6.
    pub const fn velocity(&self) -> usize {
        self.dims[3] * self.dims[4] * self.dims[5]
    }
}

impl fmt::Display for GridShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d, e, g] = self.dims;
        write!(f, "({a} x {b} x {c} x {d} x {e} x {g})")
    }
}

/// Extents of the padded real grid and the number of batched 2D transforms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FftShape {
    pub fft_x: usize,
    pub fft_y: usize,
    pub batch: usize,
}

impl fmt::Display for FftShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} x {})", self.fft_x, self.fft_y)
    }
}

/// Storage of the collision constants.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CollisionMode {
    /// Dense per-point velocity-space matrices with the given entry size.
    Full { entry_bytes: u8 },
    /// Diagonal treatment, negligible memory.
    Simplified,
}

impl CollisionMode {
    pub fn full(entry_bytes: u8) -> Result<Self, InputError> {
        match entry_bytes {
            4 | 8 => Ok(Self::Full { entry_bytes }),
            other => Err(InputError::InvalidEntryBytes(other)),
        }
    }

    pub fn is_full(&self) -> bool {
        matches!(self, Self::Full { .. })
    }
}

impl fmt::Display for CollisionMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Full { entry_bytes: 4 } => f.write_str("Full, fp32"),
            Self::Full { entry_bytes } => write!(f, "Full, {}-byte", entry_bytes),
            Self::Simplified => f.write_str("Simplified"),
        }
    }
}

/// Named catalog entry.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BenchmarkInput {
    pub name: String,
    pub grid: GridShape,
    pub collision: CollisionMode,
    /// Cumulative factor applied to the original grid.
    pub scale: Scale,
}

impl BenchmarkInput {
    pub fn new(name: impl Into<String>, grid: GridShape, collision: CollisionMode) -> Self {
        Self {
            name: name.into(),
            grid,
            collision,
            scale: Scale::from_integer(1),
        }
    }

    pub fn fft_shape(&self) -> Result<FftShape, InputError> {
        derive_fft_shape(&self.grid)
    }

    pub fn collision_memory(&self) -> Result<u64, InputError> {
        estimate_collision_memory(&self.grid, self.collision)
    }
}

const TABLE: [(&str, [usize; 6], Option<u8>); 6] = [
    ("n102", [192, 24, 32, 16, 8, 2], Some(4)),
    ("sh03s", [480, 32, 48, 24, 8, 3], Some(4)),
    ("n103", [512, 32, 64, 24, 8, 3], None),
    ("bg03n", [864, 24, 96, 18, 8, 2], None),
    ("sh04n", [1152, 16, 128, 16, 8, 3], None),
    ("bg04n", [1344, 16, 192, 16, 4, 2], None),
];

/// The six reference inputs, in publication order.
pub fn catalog() -> Vec<BenchmarkInput> {
    TABLE
        .iter()
        .map(|&(name, dims, entry)| {
            let collision = match entry {
                Some(entry_bytes) => CollisionMode::Full { entry_bytes },
                None => CollisionMode::Simplified,
            };
            BenchmarkInput::new(name, GridShape { dims }, collision)
        })
        .collect()
}

/// Looks up a catalog entry by name, ignoring ASCII case.
pub fn lookup<'a>(inputs: &'a [BenchmarkInput], name: &str) -> Option<&'a BenchmarkInput> {
    inputs.iter().find(|i| i.name.eq_ignore_ascii_case(name))
}

/// Padded FFT extents: x is 3/2 of the radial extent, y is three times the
/// toroidal mode count, and every other dimension goes into the batch.
pub fn derive_fft_shape(grid: &GridShape) -> Result<FftShape, InputError> {
    if grid.d1() % 2 != 0 {
        return Err(InputError::OddRadial { d1: grid.d1() });
    }
    Ok(FftShape {
        fft_x: grid.d1() / 2 * 3,
        fft_y: 3 * grid.d3(),
        batch: grid.d2() * grid.d4() * grid.d5() * grid.d6(),
    })
}

/// Bytes needed for the full collision constants:
/// `d1·d2·d3 · (d4·d5·d6)² · entry_bytes`. Simplified mode needs none.
pub fn estimate_collision_memory(grid: &GridShape, mode: CollisionMode) -> Result<u64, InputError> {
    let entry_bytes = match mode {
        CollisionMode::Simplified => return Ok(0),
        CollisionMode::Full { entry_bytes } => entry_bytes as u64,
    };
    let d = grid.dims.map(|x| x as u64);
    let spatial = d[0]
        .checked_mul(d[1])
        .and_then(|x| x.checked_mul(d[2]))
        .ok_or(InputError::Overflow)?;
    let nv = d[3]
        .checked_mul(d[4])
        .and_then(|x| x.checked_mul(d[5]))
        .ok_or(InputError::Overflow)?;
    nv.checked_mul(nv)
        .and_then(|m| m.checked_mul(spatial))
        .and_then(|m| m.checked_mul(entry_bytes))
        .ok_or(InputError::Overflow)
}

fn scale_dim(
    dim: &'static str,
    value: usize,
    factor: Scale,
    even: bool,
) -> Result<usize, InputError> {
    let scaled = factor * Scale::from_integer(value as u64);
    let bad = |requirement| InputError::NonIntegralScale {
        dim,
        value,
        numer: *factor.numer(),
        denom: *factor.denom(),
        requirement,
    };
    if !scaled.is_integer() || scaled.to_integer() == 0 {
        return Err(bad(if even {
            "a positive even integer"
        } else {
            "a positive integer"
        }));
    }
    let out = scaled.to_integer() as usize;
    if even && out % 2 != 0 {
        return Err(bad("a positive even integer"));
    }
    Ok(out)
}

/// Shrinks d1, d3 and d4 by `factor`, leaving the other dimensions alone.
pub fn scale_input(input: &BenchmarkInput, factor: Scale) -> Result<BenchmarkInput, InputError> {
    if *factor.numer() == 0 || factor > Scale::from_integer(1) {
        return Err(InputError::ScaleOutOfRange {
            numer: *factor.numer(),
            denom: *factor.denom(),
        });
    }
    let [d1, d2, d3, d4, d5, d6] = input.grid.dims;
    let dims = [
        scale_dim("d1", d1, factor, true)?,
        d2,
        scale_dim("d3", d3, factor, false)?,
        scale_dim("d4", d4, factor, false)?,
        d5,
        d6,
    ];
    Ok(BenchmarkInput {
        name: input.name.clone(),
        grid: GridShape { dims },
        collision: input.collision,
        scale: input.scale * factor,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(d: [usize; 6]) -> GridShape {
        GridShape::new(d).unwrap()
    }

    #[test]
    fn catalog_rows() {
        let cat = catalog();
        assert_eq!(cat.len(), 6);
        assert_eq!(cat[0].name, "n102");
        assert_eq!(cat[0].grid.dims(), [192, 24, 32, 16, 8, 2]);
        assert!(cat[0].collision.is_full());
        assert_eq!(cat[1].name, "sh03s");
        assert_eq!(cat[1].grid.dims(), [480, 32, 48, 24, 8, 3]);
        assert_eq!(cat[1].collision, CollisionMode::Full { entry_bytes: 4 });
        assert_eq!(cat[5].name, "bg04n");
        assert_eq!(cat[5].grid.dims(), [1344, 16, 192, 16, 4, 2]);
        assert_eq!(cat[5].collision, CollisionMode::Simplified);
    }

    #[test]
    fn zero_dimension_rejected() {
        assert_eq!(
            GridShape::new([2, 1, 0, 1, 1, 1]),
            Err(InputError::ZeroDimension { index: 3 })
        );
    }

    #[test]
    fn fft_shape_examples() {
        let s = derive_fft_shape(&grid([512, 32, 64, 24, 8, 3])).unwrap();
        assert_eq!((s.fft_x, s.fft_y, s.batch), (768, 192, 18432));
        let s = derive_fft_shape(&grid([2, 1, 1, 1, 1, 1])).unwrap();
        assert_eq!((s.fft_x, s.fft_y, s.batch), (3, 3, 1));
        let s = derive_fft_shape(&grid([864, 24, 96, 18, 8, 2])).unwrap();
        assert_eq!((s.fft_x, s.fft_y, s.batch), (1296, 288, 6912));
    }

    #[test]
    fn odd_radial_rejected() {
        assert_eq!(
            derive_fft_shape(&grid([3, 1, 1, 1, 1, 1])),
            Err(InputError::OddRadial { d1: 3 })
        );
    }

    #[test]
    fn collision_memory_examples() {
        let cat = catalog();
        let full4 = CollisionMode::full(4).unwrap();
        assert_eq!(
            estimate_collision_memory(&cat[0].grid, full4),
            Ok(38_654_705_664)
        );
        assert_eq!(
            estimate_collision_memory(&cat[1].grid, full4),
            Ok(978_447_237_120)
        );
        assert_eq!(
            estimate_collision_memory(&grid([1; 6]), CollisionMode::full(8).unwrap()),
            Ok(8)
        );
        assert_eq!(
            estimate_collision_memory(&cat[2].grid, CollisionMode::Simplified),
            Ok(0)
        );
    }

    #[test]
    fn collision_memory_overflow() {
        let g = grid([1 << 20, 1 << 20, 1 << 20, 1 << 10, 1, 1]);
        assert_eq!(
            estimate_collision_memory(&g, CollisionMode::full(8).unwrap()),
            Err(InputError::Overflow)
        );
    }

    #[test]
    fn entry_bytes_validated() {
        assert_eq!(
            CollisionMode::full(2),
            Err(InputError::InvalidEntryBytes(2))
        );
    }

    #[test]
    fn scale_identity() {
        let n102 = &catalog()[0];
        assert_eq!(&scale_input(n102, Scale::from_integer(1)).unwrap(), n102);
    }

    #[test]
    fn scale_eighth_of_n102() {
        let n102 = &catalog()[0];
        let s = scale_input(n102, Scale::new(1, 8)).unwrap();
        assert_eq!(s.grid.dims(), [24, 24, 4, 2, 8, 2]);
        let f = s.fft_shape().unwrap();
        assert_eq!((f.fft_x, f.fft_y, f.batch), (36, 12, 768));
        assert_eq!(s.scale, Scale::new(1, 8));
    }

    #[test]
    fn scale_third_of_sh03s() {
        let sh03s = &catalog()[1];
        let s = scale_input(sh03s, Scale::new(1, 3)).unwrap();
        assert_eq!(s.grid.dims(), [160, 32, 16, 8, 8, 3]);
    }

    #[test]
    fn scale_names_offending_dimension() {
        let n102 = &catalog()[0];
        // 192/5 is not an integer
        match scale_input(n102, Scale::new(1, 5)) {
            Err(InputError::NonIntegralScale { dim, .. }) => assert_eq!(dim, "d1"),
            other => panic!("unexpected {other:?}"),
        }
        // 192/64 = 3 is odd
        match scale_input(n102, Scale::new(1, 64)) {
            Err(InputError::NonIntegralScale { dim, value, .. }) => {
                assert_eq!((dim, value), ("d1", 192))
            }
            other => panic!("unexpected {other:?}"),
        }
        // d1 ok (192/32 = 6) but d4 = 16/32 is not
        match scale_input(n102, Scale::new(1, 32)) {
            Err(InputError::NonIntegralScale { dim, .. }) => assert_eq!(dim, "d4"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn scale_out_of_range() {
        let n102 = &catalog()[0];
        assert!(matches!(
            scale_input(n102, Scale::new(2, 1)),
            Err(InputError::ScaleOutOfRange { .. })
        ));
        assert!(matches!(
            scale_input(n102, Scale::new(0, 1)),
            Err(InputError::ScaleOutOfRange { .. })
        ));
    }
}
