//! Algorithmic core of the gyrokinetic benchmark harness.
//!
//! Everything here is `no_std` + `alloc`: the benchmark-input catalog and its
//! shape arithmetic, batched 2D FFT planning with a portable reference
//! backend, the per-section surrogate kernels, and the arithmetic behind
//! cross-system comparison reports. Clocks, threads, files and the CLI live
//! in the `gyrobench` crate.
#![cfg_attr(not(any(test, feature = "std")), no_std)]

extern crate alloc;

pub mod dataset;
pub mod fftplan;
pub mod inputs;
pub mod kernels;
pub mod report;
pub mod timing;

pub use num_complex::Complex64;
