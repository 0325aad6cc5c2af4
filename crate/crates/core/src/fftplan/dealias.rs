use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::FftError;
use crate::inputs::{derive_fft_shape, GridShape, InputError};

fn check(modes_x: usize, modes_y: usize, padded_x: usize, padded_y: usize) -> Result<(), FftError> {
    if modes_x > padded_x || modes_y > padded_y {
        return Err(FftError::ModesExceedPadding {
            modes_x,
            modes_y,
            padded_x,
            padded_y,
        });
    }
    Ok(())
}

/// Slot on the padded x axis holding radial mode `i` of `modes_x`.
/// Modes are in FFT order: the first `ceil(modes_x/2)` are the non-negative
/// wavenumbers, the rest wrap to the tail.
#[inline]
fn padded_row(i: usize, modes_x: usize, padded_x: usize) -> usize {
    if i < modes_x.div_ceil(2) {
        i
    } else {
        padded_x - (modes_x - i)
    }
}

/// Copies a `modes_x × modes_y` block of modes into a zeroed
/// `padded_x × padded_y` half-spectrum.
pub fn pad_modes(
    modes: &[Complex64],
    modes_x: usize,
    modes_y: usize,
    out: &mut [Complex64],
    padded_x: usize,
    padded_y: usize,
) -> Result<(), FftError> {
    check(modes_x, modes_y, padded_x, padded_y)?;
    out.fill(Complex64::new(0.0, 0.0));
    for i in 0..modes_x {
        let r = padded_row(i, modes_x, padded_x);
        out[r * padded_y..r * padded_y + modes_y]
            .copy_from_slice(&modes[i * modes_y..(i + 1) * modes_y]);
    }
    Ok(())
}

/// Left inverse of [`pad_modes`].
pub fn truncate_modes(
    padded: &[Complex64],
    padded_x: usize,
    padded_y: usize,
    out: &mut [Complex64],
    modes_x: usize,
    modes_y: usize,
) -> Result<(), FftError> {
    check(modes_x, modes_y, padded_x, padded_y)?;
    for i in 0..modes_x {
        let r = padded_row(i, modes_x, padded_x);
        out[i * modes_y..(i + 1) * modes_y]
            .copy_from_slice(&padded[r * padded_y..r * padded_y + modes_y]);
    }
    Ok(())
}

fn padded_extents(grid: &GridShape) -> Result<(usize, usize), FftError> {
    let shape = derive_fft_shape(grid).map_err(|e| match e {
        InputError::OddRadial { .. } => FftError::InvalidSpec("radial extent must be even"),
        _ => FftError::InvalidSpec("grid has no padded shape"),
    })?;
    Ok((shape.fft_x, shape.fft_y / 2 + 1))
}

/// Pads a `d1 × d3` mode plane onto the `fft_x × (fft_y/2 + 1)` half-spectrum
/// implied by `grid`.
pub fn dealias_pad(modes: &[Complex64], grid: &GridShape) -> Result<Vec<Complex64>, FftError> {
    let (px, py) = padded_extents(grid)?;
    let (mx, my) = (grid.d1(), grid.d3());
    if modes.len() != mx * my {
        return Err(FftError::ShapeMismatch {
            what: "modes",
            expected: mx * my,
            actual: modes.len(),
        });
    }
    let mut out = vec![Complex64::new(0.0, 0.0); px * py];
    pad_modes(modes, mx, my, &mut out, px, py)?;
    Ok(out)
}

pub fn truncate(padded: &[Complex64], grid: &GridShape) -> Result<Vec<Complex64>, FftError> {
    let (px, py) = padded_extents(grid)?;
    if padded.len() != px * py {
        return Err(FftError::ShapeMismatch {
            what: "padded spectrum",
            expected: px * py,
            actual: padded.len(),
        });
    }
    let (mx, my) = (grid.d1(), grid.d3());
    let mut out = vec![Complex64::new(0.0, 0.0); mx * my];
    truncate_modes(padded, px, py, &mut out, mx, my)?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::inputs::catalog;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn zero_modes_pad_to_zero() {
        let grid = GridShape::new([4, 1, 2, 1, 1, 1]).unwrap();
        let out = dealias_pad(&[c(0.0, 0.0); 8], &grid).unwrap();
        assert_eq!(out.len(), 6 * 4);
        assert!(out.iter().all(|z| *z == c(0.0, 0.0)));
    }

    #[test]
    fn n102_padded_extent() {
        let grid = catalog()[0].grid;
        let modes = vec![c(1.0, -1.0); 192 * 32];
        let out = dealias_pad(&modes, &grid).unwrap();
        assert_eq!(out.len(), 288 * 49);
        assert_eq!(truncate(&out, &grid).unwrap(), modes);
    }

    #[test]
    fn wraparound_placement() {
        // d1 = 4: modes 0,1 are k=0,1; modes 2,3 are k=-2,-1
        let grid = GridShape::new([4, 1, 1, 1, 1, 1]).unwrap();
        let modes = [c(0.0, 0.0), c(1.0, 0.0), c(-2.0, 0.0), c(-1.0, 0.0)];
        let out = dealias_pad(&modes, &grid).unwrap();
        // fft_x = 6, ny2 = 2
        let col0: Vec<f64> = (0..6).map(|r| out[r * 2].re).collect();
        assert_eq!(col0, [0.0, 1.0, 0.0, 0.0, -2.0, -1.0]);
        assert!(out.iter().skip(1).step_by(2).all(|z| *z == c(0.0, 0.0)));
    }

    #[test]
    fn oversized_modes_rejected() {
        let mut out = vec![c(0.0, 0.0); 4];
        assert!(matches!(
            pad_modes(&[c(1.0, 0.0); 6], 3, 2, &mut out, 2, 2),
            Err(FftError::ModesExceedPadding { .. })
        ));
    }
}
