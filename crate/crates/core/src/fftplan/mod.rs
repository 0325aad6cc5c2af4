//! Batched 2D real/complex FFT planning across vendor plan conventions.
//!
//! A [`LogicalPlanSpec`] describes the transform the caller wants: `nffts`
//! independent `nx × ny` real grids, each paired with an `nx × ny2`
//! half-spectrum. [`normalize`] turns it into the argument arrays a
//! plan-many style library expects under a given [`BackendSemantics`].
//! Libraries differ in whether the rank array is listed slow-to-fast
//! (cuFFT, hipFFT) or reversed (oneMKL offload), and in how the embed arrays
//! are filled; the mathematics of the transform does not change.
//!
//! Layout of one batch member:
//!
//! * complex side: `nx` rows of `ny2` values, member stride `idist` complex
//!   elements;
//! * real side: `nx` rows of pitch `2·ny2` reals (only the first `ny` are
//!   meaningful), member stride `2·odist` reals, i.e. `odist` complex-sized
//!   slots. Both sides of a member therefore occupy the same bytes.
//!
//! Transforms are unnormalized: C2R followed by R2C multiplies by `nx·ny`.

mod dealias;
pub mod fft1d;
mod reference;

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_complex::Complex64;
use thiserror::Error;

use crate::inputs::FftShape;

pub use dealias::{dealias_pad, pad_modes, truncate, truncate_modes};
pub use reference::{ReferenceBackend, ReferencePlan};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    /// Half-spectrum to real grid.
    C2R,
    /// Real grid to half-spectrum.
    R2C,
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::C2R => "C2R",
            Direction::R2C => "R2C",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FftError {
    #[error("invalid plan spec: {0}")]
    InvalidSpec(&'static str),
    #[error("rank order and embed/dispatch settings do not form a known profile")]
    InconsistentSemantics,
    #[error("unknown plan semantics '{0}', expected natural or reversed")]
    UnknownSemantics(String),
    #[error("backend cannot plan {direction} transforms")]
    UnsupportedDirection { direction: Direction },
    #[error("backend rejected descriptor {descriptor}: {reason}")]
    Unsupported {
        descriptor: PlanDescriptor,
        reason: &'static str,
    },
    #[error("{what} buffer holds {actual} elements, plan expects {expected}")]
    ShapeMismatch {
        what: &'static str,
        expected: usize,
        actual: usize,
    },
    #[error("plan was built for {planned}, not {requested}")]
    DirectionMismatch {
        planned: Direction,
        requested: Direction,
    },
    #[error("{modes_x} x {modes_y} modes do not fit a {padded_x} x {padded_y} padded spectrum")]
    ModesExceedPadding {
        modes_x: usize,
        modes_y: usize,
        padded_x: usize,
        padded_y: usize,
    },
}

/// The transform as the caller thinks of it, before any library convention.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LogicalPlanSpec {
    pub direction: Direction,
    /// Slow logical extent.
    pub nx: usize,
    /// Fast logical extent of the real grid.
    pub ny: usize,
    /// Fast extent of the half-spectrum, `ny/2 + 1`.
    pub ny2: usize,
    pub nffts: usize,
    pub idist: usize,
    pub odist: usize,
}

impl LogicalPlanSpec {
    pub fn new(direction: Direction, nx: usize, ny: usize, nffts: usize) -> Self {
        let ny2 = ny / 2 + 1;
        Self {
            direction,
            nx,
            ny,
            ny2,
            nffts,
            idist: ny2 * nx,
            odist: ny2 * nx,
        }
    }

    pub fn for_shape(direction: Direction, shape: &FftShape) -> Self {
        Self::new(direction, shape.fft_x, shape.fft_y, shape.batch)
    }

    pub fn validate(&self) -> Result<(), FftError> {
        if self.nx == 0 || self.ny == 0 || self.nffts == 0 {
            return Err(FftError::InvalidSpec("extents and batch must be positive"));
        }
        if self.ny2 != self.ny / 2 + 1 {
            return Err(FftError::InvalidSpec("ny2 must equal ny/2 + 1"));
        }
        if self.idist != self.ny2 * self.nx || self.odist != self.ny2 * self.nx {
            return Err(FftError::InvalidSpec("idist and odist must equal ny2*nx"));
        }
        Ok(())
    }

    /// Complex elements in a full batched half-spectrum buffer.
    pub fn complex_len(&self) -> usize {
        self.nffts * self.idist
    }

    /// Real elements in a full batched real buffer, padding included.
    pub fn real_len(&self) -> usize {
        self.nffts * 2 * self.odist
    }

    /// Storage pitch of one real row.
    pub fn real_pitch(&self) -> usize {
        2 * self.ny2
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RankOrder {
    Natural,
    Reversed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EmbedStyle {
    /// Only the fast-dimension embed entry is read.
    FastDimOnly,
    /// Every embed entry is an allocated extent.
    FullPerDim,
}

/// How the library gets the transform onto the device.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DispatchKind {
    /// Device pointers handed to the library inside a data region.
    DevicePointerRegion,
    /// The host call is wrapped in a dispatch construct.
    DispatchRegion,
}

/// A library's planning convention.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BackendSemantics {
    rank_order: RankOrder,
    embed_style: EmbedStyle,
    dispatch: DispatchKind,
}

impl BackendSemantics {
    /// cuFFT / hipFFT style.
    pub const fn natural() -> Self {
        Self {
            rank_order: RankOrder::Natural,
            embed_style: EmbedStyle::FastDimOnly,
            dispatch: DispatchKind::DevicePointerRegion,
        }
    }

    /// oneMKL offload style.
    pub const fn reversed() -> Self {
        Self {
            rank_order: RankOrder::Reversed,
            embed_style: EmbedStyle::FullPerDim,
            dispatch: DispatchKind::DispatchRegion,
        }
    }

    pub fn new(
        rank_order: RankOrder,
        embed_style: EmbedStyle,
        dispatch: DispatchKind,
    ) -> Result<Self, FftError> {
        let sem = Self {
            rank_order,
            embed_style,
            dispatch,
        };
        if sem == Self::natural() || sem == Self::reversed() {
            Ok(sem)
        } else {
            Err(FftError::InconsistentSemantics)
        }
    }

    pub fn rank_order(&self) -> RankOrder {
        self.rank_order
    }

    pub fn embed_style(&self) -> EmbedStyle {
        self.embed_style
    }

    pub fn dispatch(&self) -> DispatchKind {
        self.dispatch
    }
}

impl Default for BackendSemantics {
    fn default() -> Self {
        Self::natural()
    }
}

impl fmt::Display for BackendSemantics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self.rank_order {
            RankOrder::Natural => "natural",
            RankOrder::Reversed => "reversed",
        })
    }
}

impl FromStr for BackendSemantics {
    type Err = FftError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "natural" | "cufft" | "hipfft" => Ok(Self::natural()),
            "reversed" | "onemkl" | "mkl" => Ok(Self::reversed()),
            _ => Err(FftError::UnknownSemantics(s.into())),
        }
    }
}

/// Arguments of a plan-many call as a particular library wants them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PlanDescriptor {
    pub ndim: [usize; 2],
    pub inembed: [usize; 2],
    pub onembed: [usize; 2],
    pub idist: usize,
    pub odist: usize,
    pub nffts: usize,
}

impl fmt::Display for PlanDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "ndim=({},{}) inembed=({},{}) onembed=({},{}) idist={} odist={} nffts={}",
            self.ndim[0],
            self.ndim[1],
            self.inembed[0],
            self.inembed[1],
            self.onembed[0],
            self.onembed[1],
            self.idist,
            self.odist,
            self.nffts
        )
    }
}

impl PlanDescriptor {
    /// Recovers `(nx, ny, ny2)` from the descriptor as a library with the
    /// given semantics would read it.
    pub fn logical_extents(
        &self,
        sem: BackendSemantics,
    ) -> Result<(usize, usize, usize), FftError> {
        let reject = |reason| FftError::Unsupported {
            descriptor: *self,
            reason,
        };
        let (nx, ny, fast_in, fast_out) = match sem.rank_order {
            RankOrder::Natural => (self.ndim[0], self.ndim[1], self.inembed[1], self.onembed[1]),
            RankOrder::Reversed => {
                if self.inembed[1] != self.ndim[1] || self.onembed[1] != self.ndim[1] {
                    return Err(reject("slow embed entry must equal the slow extent"));
                }
                (self.ndim[1], self.ndim[0], self.inembed[0], self.onembed[0])
            }
        };
        if nx == 0 || ny == 0 || self.nffts == 0 {
            return Err(reject("zero extent"));
        }
        if fast_in != ny / 2 + 1 || fast_out != fast_in {
            return Err(reject("fast embed entry must be ny/2 + 1"));
        }
        if self.idist != fast_in * nx || self.odist != fast_in * nx {
            return Err(reject("distances must equal ny2*nx"));
        }
        Ok((nx, ny, fast_in))
    }
}

/// Builds the plan-many arguments for `spec` under `sem`.
pub fn normalize(spec: &LogicalPlanSpec, sem: BackendSemantics) -> PlanDescriptor {
    let (ndim, embed) = match sem.rank_order {
        RankOrder::Natural => ([spec.nx, spec.ny], [spec.ny2, spec.ny2]),
        RankOrder::Reversed => ([spec.ny, spec.nx], [spec.ny2, spec.nx]),
    };
    PlanDescriptor {
        ndim,
        inembed: embed,
        onembed: embed,
        idist: spec.idist,
        odist: spec.odist,
        nffts: spec.nffts,
    }
}

/// A library plan. Implementations must be usable from several threads on
/// disjoint buffers.
pub trait BackendPlan: Send + Sync {
    fn execute_c2r(&self, input: &[Complex64], output: &mut [f64]) -> Result<(), FftError>;
    fn execute_r2c(&self, input: &[f64], output: &mut [Complex64]) -> Result<(), FftError>;
}

/// Adapter over an FFT library. Dropping the plan releases it.
pub trait FftBackend {
    type Plan: BackendPlan;

    fn name(&self) -> &'static str;

    fn supports(&self, direction: Direction) -> bool;

    fn plan(
        &self,
        descriptor: &PlanDescriptor,
        semantics: BackendSemantics,
        direction: Direction,
    ) -> Result<Self::Plan, FftError>;
}

/// A plan created once and executed any number of times.
#[derive(Debug, Clone)]
pub struct PlanHandle<P> {
    spec: LogicalPlanSpec,
    semantics: BackendSemantics,
    descriptor: PlanDescriptor,
    inner: P,
}

pub fn plan<B: FftBackend>(
    spec: &LogicalPlanSpec,
    semantics: BackendSemantics,
    backend: &B,
) -> Result<PlanHandle<B::Plan>, FftError> {
    spec.validate()?;
    if !backend.supports(spec.direction) {
        return Err(FftError::UnsupportedDirection {
            direction: spec.direction,
        });
    }
    let descriptor = normalize(spec, semantics);
    let inner = backend.plan(&descriptor, semantics, spec.direction)?;
    Ok(PlanHandle {
        spec: *spec,
        semantics,
        descriptor,
        inner,
    })
}

impl<P: BackendPlan> PlanHandle<P> {
    pub fn spec(&self) -> &LogicalPlanSpec {
        &self.spec
    }

    pub fn semantics(&self) -> BackendSemantics {
        self.semantics
    }

    pub fn descriptor(&self) -> &PlanDescriptor {
        &self.descriptor
    }

    fn check(
        &self,
        requested: Direction,
        input_len: usize,
        output_len: usize,
    ) -> Result<(), FftError> {
        if self.spec.direction != requested {
            return Err(FftError::DirectionMismatch {
                planned: self.spec.direction,
                requested,
            });
        }
        let (cplx, real) = (self.spec.complex_len(), self.spec.real_len());
        let (want_in, want_out) = match requested {
            Direction::C2R => (cplx, real),
            Direction::R2C => (real, cplx),
        };
        if input_len != want_in {
            return Err(FftError::ShapeMismatch {
                what: "input",
                expected: want_in,
                actual: input_len,
            });
        }
        if output_len != want_out {
            return Err(FftError::ShapeMismatch {
                what: "output",
                expected: want_out,
                actual: output_len,
            });
        }
        Ok(())
    }

    pub fn execute_c2r_into(
        &self,
        input: &[Complex64],
        output: &mut [f64],
    ) -> Result<(), FftError> {
        self.check(Direction::C2R, input.len(), output.len())?;
        self.inner.execute_c2r(input, output)
    }

    pub fn execute_c2r(&self, input: &[Complex64]) -> Result<Vec<f64>, FftError> {
        let mut out = vec![0.0; self.spec.real_len()];
        self.execute_c2r_into(input, &mut out)?;
        Ok(out)
    }

    pub fn execute_r2c_into(
        &self,
        input: &[f64],
        output: &mut [Complex64],
    ) -> Result<(), FftError> {
        self.check(Direction::R2C, input.len(), output.len())?;
        self.inner.execute_r2c(input, output)
    }

    pub fn execute_r2c(&self, input: &[f64]) -> Result<Vec<Complex64>, FftError> {
        let mut out = vec![Complex64::new(0.0, 0.0); self.spec.complex_len()];
        self.execute_r2c_into(input, &mut out)?;
        Ok(out)
    }
}
