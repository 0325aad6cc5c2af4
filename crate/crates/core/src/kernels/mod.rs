//! Surrogate kernels, one per timed section.
//!
//! The surrogates keep the performance character of each section (FFT-bound
//! nonlinear term, matvec-bound collisions, bandwidth-bound sweeps) and each
//! has a small-instance oracle. None of them models gyrokinetic physics.
//!
//! Layouts used throughout:
//!
//! * spectral planes `[batch × d1 × d3]`, batch index `b = i2·nv + iv` with
//!   `nv = d4·d5·d6`;
//! * velocity vectors `[spatial × nv]`, spatial index `s = (i2·d1 + i1)·d3 + i3`.

mod collision;
mod nonlinear;
mod sections;

use alloc::vec::Vec;

use num_complex::Complex64;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use thiserror::Error;

use crate::fftplan::FftError;
use crate::inputs::{GridShape, InputError};

pub use collision::{coll_step, CollisionOperator, DEFAULT_COLLISION_BUDGET};
pub use nonlinear::{bracket, nl_step, wavenumber, NlPlans};
pub use sections::{
    field_broadcast, field_reduce, field_step, mem_step, mem_triad, shear_shift, shear_step,
    str_step, stream_shift, ShearConfig, StreamConfig,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KernelError {
    #[error(transparent)]
    Fft(#[from] FftError),
    #[error(transparent)]
    Input(#[from] InputError),
    #[error("{what} holds {actual} elements, expected {expected}")]
    ShapeMismatch {
        what: &'static str,
        expected: usize,
        actual: usize,
    },
    #[error("collision constants need {estimate} bytes, budget is {budget} bytes")]
    BudgetExceeded { estimate: u64, budget: u64 },
}

pub(crate) fn expect_len(
    what: &'static str,
    actual: usize,
    expected: usize,
) -> Result<(), KernelError> {
    if actual != expected {
        return Err(KernelError::ShapeMismatch {
            what,
            expected,
            actual,
        });
    }
    Ok(())
}

/// Uniform draws from a seeded ChaCha stream.
pub struct SeededStream(ChaCha8Rng);

impl SeededStream {
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Self(rng)
    }

    pub fn unit(&mut self) -> f64 {
        (self.0.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn symmetric(&mut self) -> f64 {
        2.0 * self.unit() - 1.0
    }

    pub fn complex(&mut self) -> Complex64 {
        Complex64::new(self.symmetric(), self.symmetric())
    }
}

/// Makes a `[d1 × d3]` half-spectrum plane the transform of a real field:
/// the `ky = 0` column becomes Hermitian in `kx` and the unpaired radial
/// Nyquist entry of that column is cleared.
pub fn make_hermitian(plane: &mut [Complex64], d1: usize, d3: usize) {
    let at = |i: usize| i * d3;
    plane[at(0)].im = 0.0;
    for i in 1..d1 {
        let j = d1 - i;
        if i < j {
            plane[at(j)] = plane[at(i)].conj();
        } else if i == j {
            plane[at(i)] = Complex64::new(0.0, 0.0);
        }
    }
}

/// Benchmark state: two spectral fields and the velocity vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralState {
    pub grid: GridShape,
    /// Provenance: the seed that generated the initial state.
    pub seed: u64,
    pub f: Vec<Complex64>,
    pub g: Vec<Complex64>,
    pub v: Vec<f64>,
}

impl SpectralState {
    pub fn batch(grid: &GridShape) -> usize {
        grid.d2() * grid.velocity()
    }

    pub fn plane_len(grid: &GridShape) -> usize {
        grid.d1() * grid.d3()
    }

    /// State with the right header but no field data.
    pub fn empty(grid: GridShape, seed: u64) -> Self {
        Self {
            grid,
            seed,
            f: Vec::new(),
            g: Vec::new(),
            v: Vec::new(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.f.is_empty() && self.g.is_empty() && self.v.is_empty()
    }

    pub fn seeded(grid: GridShape, seed: u64) -> Self {
        let plane = Self::plane_len(&grid);
        let batch = Self::batch(&grid);
        let fill = |stream| {
            let mut rng = SeededStream::new(seed, stream);
            let mut data: Vec<Complex64> = (0..batch * plane).map(|_| rng.complex()).collect();
            for p in data.chunks_mut(plane) {
                make_hermitian(p, grid.d1(), grid.d3());
            }
            data
        };
        let f = fill(0);
        let g = fill(1);
        let mut rng = SeededStream::new(seed, 2);
        let v = (0..grid.spatial() * grid.velocity())
            .map(|_| rng.symmetric())
            .collect();
        Self {
            grid,
            seed,
            f,
            g,
            v,
        }
    }

    /// Expected lengths of `(f, g, v)` for a populated state.
    pub fn expected_lens(grid: &GridShape) -> (usize, usize, usize) {
        let n = Self::batch(grid) * Self::plane_len(grid);
        (n, n, grid.spatial() * grid.velocity())
    }

    /// Rescales `f` and `v` to unit root-mean-square, leaving zero fields alone.
    pub fn renormalize(&mut self) {
        let rms_f = rms(self.f.iter().map(|z| z.norm_sqr()), self.f.len());
        if rms_f > 0.0 {
            let s = 1.0 / rms_f;
            self.f.iter_mut().for_each(|z| *z *= s);
        }
        let rms_v = rms(self.v.iter().map(|x| x * x), self.v.len());
        if rms_v > 0.0 {
            let s = 1.0 / rms_v;
            self.v.iter_mut().for_each(|x| *x *= s);
        }
    }

    /// Order-sensitive weighted sum over every stored value.
    pub fn checksum(&self) -> f64 {
        let weight = |i: usize| 1.0 + (i % 97) as f64 / 97.0;
        let complex = |data: &[Complex64]| -> f64 {
            data.iter()
                .enumerate()
                .map(|(i, z)| weight(i) * (z.re + 2.0 * z.im))
                .sum()
        };
        let real: f64 = self.v.iter().enumerate().map(|(i, x)| weight(i) * x).sum();
        complex(&self.f) + 0.5 * complex(&self.g) + 0.25 * real
    }
}

fn rms(squares: impl Iterator<Item = f64>, n: usize) -> f64 {
    if n == 0 {
        return 0.0;
    }
    libm::sqrt(squares.sum::<f64>() / n as f64)
}
