use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::{expect_len, KernelError};
use crate::fftplan::{
    pad_modes, plan, truncate_modes, BackendPlan, BackendSemantics, Direction, FftBackend,
    LogicalPlanSpec, PlanHandle,
};
use crate::inputs::{derive_fft_shape, GridShape};

/// Signed wavenumber of mode `i` out of `n` in FFT order.
pub fn wavenumber(i: usize, n: usize) -> f64 {
    if i < n.div_ceil(2) {
        i as f64
    } else {
        i as f64 - n as f64
    }
}

/// The pair of batched plans the nonlinear term runs through.
#[derive(Debug, Clone)]
pub struct NlPlans<P> {
    pub c2r: PlanHandle<P>,
    pub r2c: PlanHandle<P>,
    modes_x: usize,
    modes_y: usize,
}

impl<P: BackendPlan> NlPlans<P> {
    /// Plans for `nffts` planes of the padded shape of `grid`.
    pub fn new<B: FftBackend<Plan = P>>(
        backend: &B,
        grid: &GridShape,
        nffts: usize,
        semantics: BackendSemantics,
    ) -> Result<Self, KernelError> {
        let mut shape = derive_fft_shape(grid)?;
        shape.batch = nffts;
        let c2r = plan(
            &LogicalPlanSpec::for_shape(Direction::C2R, &shape),
            semantics,
            backend,
        )?;
        let r2c = plan(
            &LogicalPlanSpec::for_shape(Direction::R2C, &shape),
            semantics,
            backend,
        )?;
        Ok(Self {
            c2r,
            r2c,
            modes_x: grid.d1(),
            modes_y: grid.d3(),
        })
    }

    pub fn nffts(&self) -> usize {
        self.c2r.spec().nffts
    }

    fn plane_len(&self) -> usize {
        self.modes_x * self.modes_y
    }
}

fn derivative(modes: &[Complex64], out: &mut Vec<Complex64>, mx: usize, my: usize, along_x: bool) {
    out.clear();
    out.extend(modes.iter().enumerate().map(|(idx, &z)| {
        let (i, j) = ((idx / my) % mx, idx % my);
        let k = if along_x { wavenumber(i, mx) } else { j as f64 };
        z * Complex64::new(0.0, k)
    }));
}

/// Dealiased Poisson bracket `∂x f·∂y g − ∂y f·∂x g` of every plane pair,
/// returned as `[nffts × d1 × d3]` spectral coefficients.
pub fn bracket<P: BackendPlan>(
    f: &[Complex64],
    g: &[Complex64],
    plans: &NlPlans<P>,
) -> Result<Vec<Complex64>, KernelError> {
    let nffts = plans.nffts();
    let plane = plans.plane_len();
    expect_len("f planes", f.len(), nffts * plane)?;
    expect_len("g planes", g.len(), nffts * plane)?;
    let spec = *plans.c2r.spec();
    let (mx, my) = (plans.modes_x, plans.modes_y);
    let (px, py) = (spec.nx, spec.ny2);
    let cdist = spec.idist;

    let mut deriv = Vec::with_capacity(f.len());
    let mut padded = vec![Complex64::new(0.0, 0.0); spec.complex_len()];
    let mut to_real = |src: &[Complex64],
                       along_x: bool,
                       deriv: &mut Vec<Complex64>|
     -> Result<Vec<f64>, KernelError> {
        derivative(src, deriv, mx, my, along_x);
        for (d, p) in deriv.chunks(plane).zip(padded.chunks_mut(cdist)) {
            pad_modes(d, mx, my, p, px, py)?;
        }
        Ok(plans.c2r.execute_c2r(&padded)?)
    };

    let mut product = to_real(f, true, &mut deriv)?;
    let gy = to_real(g, false, &mut deriv)?;
    product.iter_mut().zip(&gy).for_each(|(a, b)| *a *= b);
    drop(gy);
    let fy = to_real(f, false, &mut deriv)?;
    let gx = to_real(g, true, &mut deriv)?;
    product
        .iter_mut()
        .zip(fy.iter().zip(&gx))
        .for_each(|(a, (b, c))| *a -= b * c);

    let spectrum = plans.r2c.execute_r2c(&product)?;
    let norm = 1.0 / (spec.nx * spec.ny) as f64;
    let mut out = vec![Complex64::new(0.0, 0.0); nffts * plane];
    for (s, o) in spectrum.chunks(cdist).zip(out.chunks_mut(plane)) {
        truncate_modes(s, px, py, o, mx, my)?;
    }
    out.iter_mut().for_each(|z| *z *= norm);
    Ok(out)
}

/// Explicit Euler update `f ← f + dt·{f, g}`.
pub fn nl_step<P: BackendPlan>(
    f: &mut [Complex64],
    g: &[Complex64],
    plans: &NlPlans<P>,
    dt: f64,
) -> Result<(), KernelError> {
    let b = bracket(f, g, plans)?;
    f.iter_mut().zip(&b).for_each(|(x, y)| *x += dt * y);
    Ok(())
}
