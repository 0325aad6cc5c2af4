//! Benchmark harness, timing-record files, report rendering and the
//! command-line front end, built on `gyrobench-core`.

pub mod catalog_file;
pub mod cli;
pub mod harness;
pub mod records;
pub mod render;
