use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::fft1d::{Fft1d, Sign};
use super::{BackendPlan, BackendSemantics, Direction, FftBackend, FftError, PlanDescriptor};

/// Portable backend that accepts every shape and both directions.
#[derive(Debug, Clone, Copy, Default)]
pub struct ReferenceBackend;

#[derive(Debug, Clone)]
pub struct ReferencePlan {
    nx: usize,
    ny: usize,
    ny2: usize,
    nffts: usize,
    cols: Fft1d,
    rows: Fft1d,
}

impl FftBackend for ReferenceBackend {
    type Plan = ReferencePlan;

    fn name(&self) -> &'static str {
        "reference"
    }

    fn supports(&self, _direction: Direction) -> bool {
        true
    }

    fn plan(
        &self,
        descriptor: &PlanDescriptor,
        semantics: BackendSemantics,
        direction: Direction,
    ) -> Result<ReferencePlan, FftError> {
        let (nx, ny, ny2) = descriptor.logical_extents(semantics)?;
        let sign = match direction {
            Direction::C2R => Sign::Inverse,
            Direction::R2C => Sign::Forward,
        };
        Ok(ReferencePlan {
            nx,
            ny,
            ny2,
            nffts: descriptor.nffts,
            cols: Fft1d::new(nx, sign),
            rows: Fft1d::new(ny, sign),
        })
    }
}

impl ReferencePlan {
    fn transform_columns(
        &self,
        slab: &mut [Complex64],
        col: &mut [Complex64],
        scratch: &mut Vec<Complex64>,
    ) {
        for k in 0..self.ny2 {
            for x in 0..self.nx {
                col[x] = slab[x * self.ny2 + k];
            }
            self.cols.process(col, scratch);
            for x in 0..self.nx {
                slab[x * self.ny2 + k] = col[x];
            }
        }
    }
}

impl BackendPlan for ReferencePlan {
    fn execute_c2r(&self, input: &[Complex64], output: &mut [f64]) -> Result<(), FftError> {
        let (nx, ny, ny2) = (self.nx, self.ny, self.ny2);
        let cdist = nx * ny2;
        let pitch = 2 * ny2;
        let mut slab = vec![Complex64::new(0.0, 0.0); cdist];
        let mut col = vec![Complex64::new(0.0, 0.0); nx];
        let mut row = vec![Complex64::new(0.0, 0.0); ny];
        let mut scratch = Vec::new();
        for b in 0..self.nffts {
            slab.copy_from_slice(&input[b * cdist..(b + 1) * cdist]);
            self.transform_columns(&mut slab, &mut col, &mut scratch);
            let out = &mut output[b * nx * pitch..(b + 1) * nx * pitch];
            for x in 0..nx {
                let half = &slab[x * ny2..(x + 1) * ny2];
                row[..ny2.min(ny)].copy_from_slice(&half[..ny2.min(ny)]);
                for k in ny2..ny {
                    row[k] = half[ny - k].conj();
                }
                self.rows.process(&mut row, &mut scratch);
                let dst = &mut out[x * pitch..(x + 1) * pitch];
                for (d, r) in dst.iter_mut().zip(&row) {
                    *d = r.re;
                }
                dst[ny..].fill(0.0);
            }
        }
        Ok(())
    }

    fn execute_r2c(&self, input: &[f64], output: &mut [Complex64]) -> Result<(), FftError> {
        let (nx, ny, ny2) = (self.nx, self.ny, self.ny2);
        let cdist = nx * ny2;
        let pitch = 2 * ny2;
        let mut col = vec![Complex64::new(0.0, 0.0); nx];
        let mut row = vec![Complex64::new(0.0, 0.0); ny];
        let mut scratch = Vec::new();
        for b in 0..self.nffts {
            let src = &input[b * nx * pitch..(b + 1) * nx * pitch];
            let slab = &mut output[b * cdist..(b + 1) * cdist];
            for x in 0..nx {
                for (r, &v) in row.iter_mut().zip(&src[x * pitch..x * pitch + ny]) {
                    *r = Complex64::new(v, 0.0);
                }
                self.rows.process(&mut row, &mut scratch);
                let n = ny2.min(ny);
                slab[x * ny2..x * ny2 + n].copy_from_slice(&row[..n]);
            }
            self.transform_columns(slab, &mut col, &mut scratch);
        }
        Ok(())
    }
}
