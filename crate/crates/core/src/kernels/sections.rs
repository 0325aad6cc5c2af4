use alloc::vec;
use alloc::vec::Vec;
use core::ops::Range;

use num_complex::Complex64;

use super::{expect_len, KernelError, SpectralState};
use crate::inputs::GridShape;

/// Velocity-space reduction `field[s] = Σ_v weights[v]·v[s, v]`.
pub fn field_reduce(v: &[f64], weights: &[f64]) -> Result<Vec<f64>, KernelError> {
    let nv = weights.len();
    if nv == 0 || v.len() % nv != 0 {
        return Err(KernelError::ShapeMismatch {
            what: "velocity vectors",
            expected: nv,
            actual: v.len(),
        });
    }
    Ok(v.chunks_exact(nv)
        .map(|row| row.iter().zip(weights).map(|(x, w)| x * w).sum())
        .collect())
}

/// Multiplies every plane in `f` (batch members `batch.start..batch.end`)
/// by the field values at its spatial points.
pub fn field_broadcast(
    f: &mut [Complex64],
    field: &[f64],
    grid: &GridShape,
    batch: Range<usize>,
) -> Result<(), KernelError> {
    let (d1, d3, nv) = (grid.d1(), grid.d3(), grid.velocity());
    let plane = d1 * d3;
    expect_len("field", field.len(), grid.spatial())?;
    expect_len("f planes", f.len(), batch.len() * plane)?;
    for (b, p) in batch.zip(f.chunks_exact_mut(plane)) {
        let i2 = b / nv;
        let slab = &field[i2 * plane..(i2 + 1) * plane];
        p.iter_mut().zip(slab).for_each(|(z, s)| *z *= s);
    }
    Ok(())
}

/// Reduces the velocity vectors and scales `f` by the result.
pub fn field_step(state: &mut SpectralState, weights: &[f64]) -> Result<Vec<f64>, KernelError> {
    let field = field_reduce(&state.v, weights)?;
    let batch = SpectralState::batch(&state.grid);
    field_broadcast(&mut state.f, &field, &state.grid, 0..batch)?;
    Ok(field)
}

/// Periodic upwind update along the poloidal grouping of the batch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StreamConfig {
    pub shift: usize,
    /// Weight of the upwind neighbour; 1 is a pure shift.
    pub upwind: f64,
}

impl StreamConfig {
    pub fn pure_shift(shift: usize) -> Self {
        Self { shift, upwind: 1.0 }
    }
}

/// `data` viewed as `[outer × period × inner]`; each period slot becomes
/// `(1 − c)·x[p] + c·x[(p − shift) mod period]`.
pub fn stream_shift(
    data: &mut [Complex64],
    period: usize,
    inner: usize,
    cfg: StreamConfig,
) -> Result<(), KernelError> {
    let block = period * inner;
    if block == 0 || data.len() % block != 0 {
        return Err(KernelError::ShapeMismatch {
            what: "stream data",
            expected: block,
            actual: data.len(),
        });
    }
    let shift = cfg.shift % period;
    let c = cfg.upwind;
    let mut src = vec![Complex64::new(0.0, 0.0); block];
    for chunk in data.chunks_exact_mut(block) {
        src.copy_from_slice(chunk);
        for p in 0..period {
            let from = (p + period - shift) % period;
            let dst = &mut chunk[p * inner..(p + 1) * inner];
            let up = &src[from * inner..(from + 1) * inner];
            if c == 1.0 {
                dst.copy_from_slice(up);
            } else {
                let here = &src[p * inner..(p + 1) * inner];
                for ((d, h), u) in dst.iter_mut().zip(here).zip(up) {
                    *d = *h * (1.0 - c) + *u * c;
                }
            }
        }
    }
    Ok(())
}

/// Streaming update of the whole state in its batch layout.
pub fn str_step(state: &mut SpectralState, cfg: StreamConfig) -> Result<(), KernelError> {
    let grid = state.grid;
    let inner = grid.velocity() * SpectralState::plane_len(&grid);
    stream_shift(&mut state.f, grid.d2(), inner, cfg)
}

/// Radial mode shift mixed into the field at `rate`; 1 is a pure shift.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShearConfig {
    pub rate: f64,
}

impl Default for ShearConfig {
    fn default() -> Self {
        Self { rate: 1.0 }
    }
}

/// `data` viewed as `[outer × len × inner]`; along `len`, moves every slot
/// by one toward higher (`up`) or lower indices, dropping the edge slot and
/// zero-filling the vacated one, then blends with the original at `rate`.
pub fn shear_shift(
    data: &mut [Complex64],
    len: usize,
    inner: usize,
    up: bool,
    cfg: ShearConfig,
) -> Result<(), KernelError> {
    let block = len * inner;
    if block == 0 || data.len() % block != 0 {
        return Err(KernelError::ShapeMismatch {
            what: "shear data",
            expected: block,
            actual: data.len(),
        });
    }
    let zero = Complex64::new(0.0, 0.0);
    let r = cfg.rate;
    let mut shifted = vec![zero; block];
    for chunk in data.chunks_exact_mut(block) {
        if up {
            shifted[inner..].copy_from_slice(&chunk[..block - inner]);
            shifted[..inner].fill(zero);
        } else {
            shifted[..block - inner].copy_from_slice(&chunk[inner..]);
            shifted[block - inner..].fill(zero);
        }
        if r == 1.0 {
            chunk.copy_from_slice(&shifted);
        } else {
            for (d, s) in chunk.iter_mut().zip(&shifted) {
                *d = *d * (1.0 - r) + *s * r;
            }
        }
    }
    Ok(())
}

/// Shifts radial modes by +1 in every plane of the state.
pub fn shear_step(state: &mut SpectralState, cfg: ShearConfig) -> Result<(), KernelError> {
    let (d1, d3) = (state.grid.d1(), state.grid.d3());
    shear_shift(&mut state.f, d1, d3, true, cfg)
}

/// Streaming triad `dst ← keep·dst + (1 − keep)·src`.
pub fn mem_triad(dst: &mut [Complex64], src: &[Complex64], keep: f64) -> Result<(), KernelError> {
    expect_len("triad source", src.len(), dst.len())?;
    let mix = 1.0 - keep;
    dst.iter_mut()
        .zip(src)
        .for_each(|(d, s)| *d = *d * keep + *s * mix);
    Ok(())
}

/// Relaxes `g` toward `f`.
pub fn mem_step(state: &mut SpectralState, keep: f64) -> Result<(), KernelError> {
    mem_triad(&mut state.g, &state.f, keep)
}
