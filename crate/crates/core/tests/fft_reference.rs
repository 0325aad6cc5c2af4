//! Reference backend against brute-force DFT sums.

use std::f64::consts::PI;

use gyrobench_core::fftplan::{
    plan, BackendSemantics, Direction, LogicalPlanSpec, PlanHandle, ReferenceBackend, ReferencePlan,
};
use gyrobench_core::kernels::SeededStream;
use gyrobench_core::Complex64;
use proptest::prelude::*;

fn handle(
    dir: Direction,
    nx: usize,
    ny: usize,
    nffts: usize,
    sem: BackendSemantics,
) -> PlanHandle<ReferencePlan> {
    plan(
        &LogicalPlanSpec::new(dir, nx, ny, nffts),
        sem,
        &ReferenceBackend,
    )
    .unwrap()
}

/// Exponential table `exp(sign·2πi m/n)` for m in 0..n.
fn roots(n: usize, sign: f64) -> Vec<Complex64> {
    (0..n)
        .map(|m| {
            let a = 2.0 * PI * m as f64 / n as f64;
            Complex64::new(a.cos(), sign * a.sin())
        })
        .collect()
}

/// Direct double sum over every grid point: `[nx × ny]` real → `[nx × ny2]`.
fn dft_r2c(f: &[f64], nx: usize, ny: usize) -> Vec<Complex64> {
    let ny2 = ny / 2 + 1;
    let (rx, ry) = (roots(nx, -1.0), roots(ny, -1.0));
    let mut out = vec![Complex64::new(0.0, 0.0); nx * ny2];
    for kx in 0..nx {
        for ky in 0..ny2 {
            let mut acc = Complex64::new(0.0, 0.0);
            for x in 0..nx {
                for y in 0..ny {
                    acc += f[x * ny + y] * rx[(kx * x) % nx] * ry[(ky * y) % ny];
                }
            }
            out[kx * ny2 + ky] = acc;
        }
    }
    out
}

/// Direct double sum over the Hermitian-extended spectrum.
fn dft_c2r(s: &[Complex64], nx: usize, ny: usize) -> Vec<f64> {
    let ny2 = ny / 2 + 1;
    let full = |kx: usize, ky: usize| {
        if ky < ny2 {
            s[kx * ny2 + ky]
        } else {
            s[((nx - kx) % nx) * ny2 + (ny - ky)].conj()
        }
    };
    let (rx, ry) = (roots(nx, 1.0), roots(ny, 1.0));
    let mut out = vec![0.0; nx * ny];
    for x in 0..nx {
        for y in 0..ny {
            let mut acc = Complex64::new(0.0, 0.0);
            for kx in 0..nx {
                for ky in 0..ny {
                    acc += full(kx, ky) * rx[(kx * x) % nx] * ry[(ky * y) % ny];
                }
            }
            out[x * ny + y] = acc.re;
        }
    }
    out
}

fn random_real(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = SeededStream::new(seed, 0);
    (0..n).map(|_| rng.symmetric()).collect()
}

/// Packed `[nx × ny]` rows into the padded real layout of a plan.
fn pad_rows(packed: &[f64], nx: usize, ny: usize) -> Vec<f64> {
    let pitch = 2 * (ny / 2 + 1);
    let mut out = vec![0.0; nx * pitch];
    for x in 0..nx {
        out[x * pitch..x * pitch + ny].copy_from_slice(&packed[x * ny..(x + 1) * ny]);
    }
    out
}

fn unpad_rows(padded: &[f64], nx: usize, ny: usize) -> Vec<f64> {
    let pitch = 2 * (ny / 2 + 1);
    (0..nx)
        .flat_map(|x| padded[x * pitch..x * pitch + ny].iter().copied())
        .collect()
}

fn max_abs_diff_c(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// Every shape up to 32×32 in both directions, batch 1..=8.
#[test]
fn matches_direct_sums_on_all_small_shapes() {
    let mut worst: f64 = 0.0;
    for nx in 1..=32 {
        for ny in 1..=32 {
            let nffts = 1 + (nx * 7 + ny * 3) % 8;
            let seed = (nx * 100 + ny) as u64;
            let fields: Vec<Vec<f64>> = (0..nffts)
                .map(|b| random_real(nx * ny, seed * 10 + b as u64))
                .collect();
            let spectra: Vec<Vec<Complex64>> = fields.iter().map(|f| dft_r2c(f, nx, ny)).collect();

            let r2c = handle(Direction::R2C, nx, ny, nffts, BackendSemantics::natural());
            let input: Vec<f64> = fields.iter().flat_map(|f| pad_rows(f, nx, ny)).collect();
            let got = r2c.execute_r2c(&input).unwrap();
            let want: Vec<Complex64> = spectra.concat();
            let e = max_abs_diff_c(&got, &want);
            assert!(e <= 1e-10, "r2c {nx}x{ny}: {e}");
            worst = worst.max(e);

            let c2r = handle(Direction::C2R, nx, ny, nffts, BackendSemantics::reversed());
            let got = c2r.execute_c2r(&want).unwrap();
            for (b, s) in spectra.iter().enumerate() {
                let stride = nx * 2 * (ny / 2 + 1);
                let got_b = unpad_rows(&got[b * stride..(b + 1) * stride], nx, ny);
                let e = max_abs_diff(&got_b, &dft_c2r(s, nx, ny));
                assert!(e <= 1e-10, "c2r {nx}x{ny}: {e}");
                worst = worst.max(e);
            }
        }
    }
    eprintln!("worst abs error vs direct sums: {worst:e}");
}

#[test]
fn dc_mode_gives_constant_field() {
    let (nx, ny) = (6, 10);
    let h = handle(Direction::C2R, nx, ny, 1, BackendSemantics::natural());
    let mut s = vec![Complex64::new(0.0, 0.0); h.spec().complex_len()];
    s[0] = Complex64::new(1.0, 0.0);
    let f = unpad_rows(&h.execute_c2r(&s).unwrap(), nx, ny);
    assert!(f.iter().all(|&v| (v - 1.0).abs() < 1e-15));
}

#[test]
fn constant_field_gives_dc_mode() {
    let (nx, ny) = (5, 8);
    let h = handle(Direction::R2C, nx, ny, 2, BackendSemantics::natural());
    let packed = vec![1.0; nx * ny];
    let input = [pad_rows(&packed, nx, ny), pad_rows(&packed, nx, ny)].concat();
    let s = h.execute_r2c(&input).unwrap();
    for (i, z) in s.iter().enumerate() {
        let want = if i % (nx * 5) == 0 {
            (nx * ny) as f64
        } else {
            0.0
        };
        assert!((z - Complex64::new(want, 0.0)).norm() < 1e-12, "{i}: {z}");
    }
}

#[test]
fn random_8x8_batch_4_c2r() {
    let (nx, ny, nffts) = (8, 8, 4);
    let spectra: Vec<Vec<Complex64>> = (0..nffts)
        .map(|b| dft_r2c(&random_real(nx * ny, 500 + b), nx, ny))
        .collect();
    let h = handle(
        Direction::C2R,
        nx,
        ny,
        nffts as usize,
        BackendSemantics::natural(),
    );
    let out = h.execute_c2r(&spectra.concat()).unwrap();
    let stride = nx * 2 * (ny / 2 + 1);
    for (b, s) in spectra.iter().enumerate() {
        let got = unpad_rows(&out[b * stride..(b + 1) * stride], nx, ny);
        assert!(max_abs_diff(&got, &dft_c2r(s, nx, ny)) <= 1e-10);
    }
}

#[test]
fn random_6x10_r2c() {
    let (nx, ny) = (6, 10);
    let f = random_real(nx * ny, 77);
    let h = handle(Direction::R2C, nx, ny, 1, BackendSemantics::natural());
    let got = h.execute_r2c(&pad_rows(&f, nx, ny)).unwrap();
    assert!(max_abs_diff_c(&got, &dft_r2c(&f, nx, ny)) <= 1e-10);
}

#[test]
fn plan_once_execute_many() {
    let (nx, ny) = (12, 9);
    let h = handle(Direction::C2R, nx, ny, 3, BackendSemantics::reversed());
    let s: Vec<Complex64> = (0..3)
        .flat_map(|b| dft_r2c(&random_real(nx * ny, 900 + b), nx, ny))
        .collect();
    let first = h.execute_c2r(&s).unwrap();
    for _ in 0..100 {
        assert_eq!(h.execute_c2r(&s).unwrap(), first);
    }
}

#[test]
fn plans_are_shareable_across_threads() {
    let (nx, ny) = (16, 12);
    let h = handle(Direction::R2C, nx, ny, 2, BackendSemantics::natural());
    let inputs: Vec<Vec<f64>> = (0..4)
        .map(|t| {
            let a = pad_rows(&random_real(nx * ny, 40 + t), nx, ny);
            let b = pad_rows(&random_real(nx * ny, 80 + t), nx, ny);
            [a, b].concat()
        })
        .collect();
    let serial: Vec<_> = inputs.iter().map(|i| h.execute_r2c(i).unwrap()).collect();
    let parallel: Vec<_> = std::thread::scope(|scope| {
        let jobs: Vec<_> = inputs
            .iter()
            .map(|i| scope.spawn(|| h.execute_r2c(i).unwrap()))
            .collect();
        jobs.into_iter().map(|j| j.join().unwrap()).collect()
    });
    assert_eq!(serial, parallel);
}

fn semantics_agree(nx: usize, ny: usize, nffts: usize, seed: u64) {
    let input: Vec<f64> = (0..nffts as u64)
        .flat_map(|b| pad_rows(&random_real(nx * ny, seed + b), nx, ny))
        .collect();
    let nat = handle(Direction::R2C, nx, ny, nffts, BackendSemantics::natural());
    let rev = handle(Direction::R2C, nx, ny, nffts, BackendSemantics::reversed());
    assert_ne!(nat.descriptor(), rev.descriptor());
    let (a, b) = (
        nat.execute_r2c(&input).unwrap(),
        rev.execute_r2c(&input).unwrap(),
    );
    assert!(max_abs_diff_c(&a, &b) <= 1e-12);
    let nat = handle(Direction::C2R, nx, ny, nffts, BackendSemantics::natural());
    let rev = handle(Direction::C2R, nx, ny, nffts, BackendSemantics::reversed());
    let (x, y) = (nat.execute_c2r(&a).unwrap(), rev.execute_c2r(&a).unwrap());
    assert!(max_abs_diff(&x, &y) <= 1e-12);
}

#[test]
fn natural_and_reversed_execute_identically() {
    semantics_agree(36, 12, 4, 1);
    semantics_agree(7, 30, 3, 2);
    semantics_agree(1, 5, 2, 3);
}

fn hermitian_spectrum(nx: usize, ny: usize, nffts: usize, seed: u64) -> (Vec<f64>, Vec<Complex64>) {
    let real: Vec<f64> = (0..nffts as u64)
        .flat_map(|b| {
            pad_rows(
                &random_real(nx * ny, seed.wrapping_mul(31).wrapping_add(b)),
                nx,
                ny,
            )
        })
        .collect();
    let r2c = handle(Direction::R2C, nx, ny, nffts, BackendSemantics::natural());
    let s = r2c.execute_r2c(&real).unwrap();
    (real, s)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn round_trip_scales_by_grid_size(
        nx in 1usize..=64,
        ny in 1usize..=64,
        nffts in 1usize..=16,
        seed in any::<u64>(),
    ) {
        let (_, s) = hermitian_spectrum(nx, ny, nffts, seed);
        let c2r = handle(Direction::C2R, nx, ny, nffts, BackendSemantics::natural());
        let r2c = handle(Direction::R2C, nx, ny, nffts, BackendSemantics::natural());
        let back = r2c.execute_r2c(&c2r.execute_c2r(&s).unwrap()).unwrap();
        let n = (nx * ny) as f64;
        for (a, b) in back.iter().zip(&s) {
            prop_assert!((a - b * n).norm() <= 1e-10 * n.max(1.0) * (1.0 + b.norm()));
        }
    }

    #[test]
    fn parseval_with_half_spectrum_weights(
        nx in 1usize..=64,
        ny in 1usize..=64,
        seed in any::<u64>(),
    ) {
        let (real, s) = hermitian_spectrum(nx, ny, 1, seed);
        let energy: f64 = unpad_rows(&real, nx, ny).iter().map(|v| v * v).sum();
        let ny2 = ny / 2 + 1;
        let spectral: f64 = s
            .iter()
            .enumerate()
            .map(|(i, z)| {
                let ky = i % ny2;
                let self_conjugate = ky == 0 || (ny % 2 == 0 && ky == ny / 2);
                let w = if self_conjugate { 1.0 } else { 2.0 };
                w * z.norm_sqr()
            })
            .sum::<f64>()
            / (nx * ny) as f64;
        prop_assert!((energy - spectral).abs() <= 1e-9 * energy);
    }

    #[test]
    fn r2c_is_linear(
        nx in 1usize..=24,
        ny in 1usize..=24,
        a in -3.0f64..3.0,
        b in -3.0f64..3.0,
        seed in any::<u64>(),
    ) {
        let h = handle(Direction::R2C, nx, ny, 1, BackendSemantics::natural());
        let f = pad_rows(&random_real(nx * ny, seed), nx, ny);
        let g = pad_rows(&random_real(nx * ny, seed ^ 0x5555), nx, ny);
        let mix: Vec<f64> = f.iter().zip(&g).map(|(x, y)| a * x + b * y).collect();
        let (sf, sg, sm) = (
            h.execute_r2c(&f).unwrap(),
            h.execute_r2c(&g).unwrap(),
            h.execute_r2c(&mix).unwrap(),
        );
        for i in 0..sm.len() {
            let want = sf[i] * a + sg[i] * b;
            prop_assert!((sm[i] - want).norm() <= 1e-12 * (1.0 + want.norm()) * (nx * ny) as f64);
        }
    }
}
