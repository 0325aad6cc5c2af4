//! One-dimensional complex FFT used by the reference backend.
//!
//! Mixed-radix decimation in time for sizes whose prime factors are small,
//! Bluestein's chirp-z reduction otherwise. Any length >= 1 is accepted.

use alloc::boxed::Box;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

/// Primes above this go through Bluestein instead of a direct butterfly.
const MAX_DIRECT_RADIX: usize = 32;

/// Sign of the exponent in the transform kernel.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    /// `exp(-2πi jk/n)`
    Forward,
    /// `exp(+2πi jk/n)`, unnormalized
    Inverse,
}

impl Sign {
    fn value(self) -> f64 {
        match self {
            Sign::Forward => -1.0,
            Sign::Inverse => 1.0,
        }
    }
}

#[derive(Debug, Clone)]
enum Algorithm {
    MixedRadix {
        factors: Vec<usize>,
        twiddles: Vec<Complex64>,
        max_radix: usize,
    },
    Bluestein(Box<Bluestein>),
}

#[derive(Debug, Clone)]
pub struct Fft1d {
    len: usize,
    sign: Sign,
    algorithm: Algorithm,
}

fn factorize(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    // radix 4 first keeps the recursion shallow on power-of-two sizes
    while n % 4 == 0 {
        out.push(4);
        n /= 4;
    }
    let mut p = 2;
    while p * p <= n {
        while n % p == 0 {
            out.push(p);
            n /= p;
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn root(sign: Sign, num: u128, den: u128) -> Complex64 {
    // num/den reduced into [0, 1) before scaling keeps the angle accurate
    let frac = (num % den) as f64 / den as f64;
    let angle = 2.0 * PI * frac;
    Complex64::new(libm::cos(angle), sign.value() * libm::sin(angle))
}

impl Fft1d {
    pub fn new(len: usize, sign: Sign) -> Self {
        assert!(len > 0, "FFT length must be positive");
        let factors = factorize(len);
        let max_radix = factors.iter().copied().max().unwrap_or(1);
        let algorithm = if max_radix > MAX_DIRECT_RADIX {
            Algorithm::Bluestein(Box::new(Bluestein::new(len, sign)))
        } else {
            let twiddles = (0..len)
                .map(|j| root(sign, j as u128, len as u128))
                .collect();
            Algorithm::MixedRadix {
                factors,
                twiddles,
                max_radix,
            }
        };
        Self {
            len,
            sign,
            algorithm,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    /// Transforms `buf` in place. `scratch` is resized as needed and may be
    /// reused across calls.
    pub fn process(&self, buf: &mut [Complex64], scratch: &mut Vec<Complex64>) {
        assert_eq!(buf.len(), self.len, "buffer length does not match plan");
        match &self.algorithm {
            Algorithm::MixedRadix {
                factors,
                twiddles,
                max_radix,
            } => {
                if self.len == 1 {
                    return;
                }
                scratch.clear();
                scratch.extend_from_slice(buf);
                let mut tmp = vec![Complex64::new(0.0, 0.0); *max_radix];
                recurse(scratch, 1, buf, factors, twiddles, 1, &mut tmp);
            }
            Algorithm::Bluestein(b) => b.process(buf, scratch),
        }
    }
}

fn recurse(
    input: &[Complex64],
    stride: usize,
    out: &mut [Complex64],
    factors: &[usize],
    twiddles: &[Complex64],
    tw_stride: usize,
    tmp: &mut [Complex64],
) {
    let n = out.len();
    let Some((&p, rest)) = factors.split_first() else {
        out[0] = input[0];
        return;
    };
    let m = n / p;
    for q in 0..p {
        recurse(
            &input[q * stride..],
            stride * p,
            &mut out[q * m..(q + 1) * m],
            rest,
            twiddles,
            tw_stride * p,
            tmp,
        );
    }
    let total = twiddles.len();
    let root_step = total / p;
    for k in 0..m {
        for q in 0..p {
            tmp[q] = out[q * m + k] * twiddles[q * k * tw_stride];
        }
        match p {
            2 => {
                out[k] = tmp[0] + tmp[1];
                out[k + m] = tmp[0] - tmp[1];
            }
            _ => {
                for s in 0..p {
                    let mut acc = tmp[0];
                    for q in 1..p {
                        acc += tmp[q] * twiddles[((q * s) % p) * root_step];
                    }
                    out[k + s * m] = acc;
                }
            }
        }
    }
}

#[derive(Debug, Clone)]
struct Bluestein {
    len: usize,
    chirp: Vec<Complex64>,
    kernel: Vec<Complex64>,
    forward: Fft1d,
    inverse: Fft1d,
}

impl Bluestein {
    fn new(len: usize, sign: Sign) -> Self {
        let inner = (2 * len - 1).next_power_of_two();
        // chirp_k = exp(sign·πi k²/n), with k² reduced mod 2n
        let chirp: Vec<Complex64> = (0..len)
            .map(|k| {
                let k2 = (k as u128 * k as u128) % (2 * len as u128);
                root(sign, k2, 2 * len as u128)
            })
            .collect();
        let forward = Fft1d::new(inner, Sign::Forward);
        let inverse = Fft1d::new(inner, Sign::Inverse);
        let mut kernel = vec![Complex64::new(0.0, 0.0); inner];
        kernel[0] = chirp[0].conj();
        for k in 1..len {
            kernel[k] = chirp[k].conj();
            kernel[inner - k] = chirp[k].conj();
        }
        let mut scratch = Vec::new();
        forward.process(&mut kernel, &mut scratch);
        let norm = 1.0 / inner as f64;
        for c in kernel.iter_mut() {
            *c *= norm;
        }
        Self {
            len,
            chirp,
            kernel,
            forward,
            inverse,
        }
    }

    fn process(&self, buf: &mut [Complex64], scratch: &mut Vec<Complex64>) {
        let inner = self.kernel.len();
        let mut work = vec![Complex64::new(0.0, 0.0); inner];
        for k in 0..self.len {
            work[k] = buf[k] * self.chirp[k];
        }
        self.forward.process(&mut work, scratch);
        for (w, k) in work.iter_mut().zip(&self.kernel) {
            *w *= k;
        }
        self.inverse.process(&mut work, scratch);
        for k in 0..self.len {
            buf[k] = work[k] * self.chirp[k];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive(x: &[Complex64], sign: Sign) -> Vec<Complex64> {
        let n = x.len();
        (0..n)
            .map(|k| {
                x.iter()
                    .enumerate()
                    .map(|(j, &v)| {
                        let a = 2.0 * PI * ((j * k) % n) as f64 / n as f64;
                        v * Complex64::new(libm::cos(a), sign.value() * libm::sin(a))
                    })
                    .sum()
            })
            .collect()
    }

    fn signal(n: usize) -> Vec<Complex64> {
        (0..n)
            .map(|i| {
                let t = i as f64;
                Complex64::new(
                    libm::sin(0.37 * t + 0.1) + 0.2 * t / n as f64,
                    libm::cos(1.3 * t),
                )
            })
            .collect()
    }

    #[test]
    fn matches_naive_dft_over_many_lengths() {
        let lengths = [
            1, 2, 3, 4, 5, 6, 7, 8, 9, 12, 16, 27, 31, 32, 36, 37, 49, 64, 96, 97, 101, 144, 288,
        ];
        let mut scratch = Vec::new();
        for &n in &lengths {
            for sign in [Sign::Forward, Sign::Inverse] {
                let x = signal(n);
                let expected = naive(&x, sign);
                let mut got = x.clone();
                Fft1d::new(n, sign).process(&mut got, &mut scratch);
                for (a, b) in got.iter().zip(&expected) {
                    assert!((a - b).norm() < 1e-9 * n as f64, "n={n} {a} vs {b}");
                }
            }
        }
    }

    #[test]
    fn bluestein_selected_for_large_primes() {
        assert!(matches!(
            Fft1d::new(97, Sign::Forward).algorithm,
            Algorithm::Bluestein(_)
        ));
        assert!(matches!(
            Fft1d::new(96, Sign::Forward).algorithm,
            Algorithm::MixedRadix { .. }
        ));
    }

    #[test]
    fn forward_then_inverse_scales_by_length() {
        let n = 2016;
        let x = signal(n);
        let mut y = x.clone();
        let mut scratch = Vec::new();
        Fft1d::new(n, Sign::Forward).process(&mut y, &mut scratch);
        Fft1d::new(n, Sign::Inverse).process(&mut y, &mut scratch);
        for (a, b) in y.iter().zip(&x) {
            assert!((a / n as f64 - b).norm() < 1e-12);
        }
    }
}
