//! Reporting-step loop: runs every section kernel, times each on the
//! orchestrating thread and appends one record per reporting step.
//!
//! Workers own disjoint batch partitions for the spectral sections and
//! disjoint spatial ranges for the velocity-space sections. Streaming runs
//! in a row partition reached through [`comm::Exchange`]; both transposes
//! are charged to `comm`.

pub mod comm;
pub mod snapshot;

use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use gyrobench_core::fftplan::{BackendSemantics, ReferenceBackend, ReferencePlan};
use gyrobench_core::inputs::{derive_fft_shape, BenchmarkInput, InputError};
use gyrobench_core::kernels::{
    coll_step, field_broadcast, field_reduce, mem_triad, nl_step, shear_shift, stream_shift,
    CollisionOperator, KernelError, NlPlans, ShearConfig, SpectralState, StreamConfig,
    DEFAULT_COLLISION_BUDGET,
};
use gyrobench_core::report::TimingRecord;
use gyrobench_core::timing::{Section, SectionTiming};
use thiserror::Error;

use crate::records::{RecordError, RecordWriter};
use comm::{balanced, Exchange};
use snapshot::{write_snapshot, SnapshotError};

pub const LOCAL_SYSTEM: &str = "local";
pub const LOCAL_XPU: &str = "reference CPU";

const DT: f64 = 1e-3;
const STREAM: StreamConfig = StreamConfig {
    shift: 1,
    upwind: 0.5,
};
const SHEAR: ShearConfig = ShearConfig { rate: 0.25 };
const MEM_KEEP: f64 = 0.75;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("invalid run configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Input(#[from] InputError),
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error("run needs about {estimate} bytes of working memory, budget is {budget} bytes")]
    Budget { estimate: u64, budget: u64 },
    #[error(transparent)]
    Snapshot(#[from] SnapshotError),
    #[error(transparent)]
    Records(#[from] RecordError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    /// Input at the size to run, usually scaled down from the catalog.
    pub input: BenchmarkInput,
    pub steps_per_report: u32,
    pub reports: u32,
    pub semantics: BackendSemantics,
    pub workers: usize,
    /// Timing records go here.
    pub out_path: PathBuf,
    /// Snapshot target; defaults to `out_path` with a `.gbnc` extension.
    pub snapshot_path: Option<PathBuf>,
    pub seed: u64,
    /// Ceiling on state, FFT buffers and collision constants together.
    pub memory_budget: u64,
}

impl RunConfig {
    pub fn new(input: BenchmarkInput, out_path: impl Into<PathBuf>) -> Self {
        Self {
            input,
            steps_per_report: 10,
            reports: 1,
            semantics: BackendSemantics::natural(),
            workers: 1,
            out_path: out_path.into(),
            snapshot_path: None,
            seed: 42,
            memory_budget: DEFAULT_COLLISION_BUDGET,
        }
    }

    pub fn snapshot_path(&self) -> PathBuf {
        self.snapshot_path
            .clone()
            .unwrap_or_else(|| self.out_path.with_extension("gbnc"))
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        let batch = SpectralState::batch(&self.input.grid);
        if self.steps_per_report == 0 {
            return Err(HarnessError::Config(
                "steps per report must be at least 1".into(),
            ));
        }
        if self.reports == 0 {
            return Err(HarnessError::Config(
                "report count must be at least 1".into(),
            ));
        }
        if self.workers == 0 || batch % self.workers != 0 {
            return Err(HarnessError::Config(format!(
                "worker count {} must be at least 1 and divide the batch count {batch}",
                self.workers
            )));
        }
        derive_fft_shape(&self.input.grid)?;
        Ok(())
    }

    /// Record for one reporting step of this run.
    pub fn record(&self, sections: SectionTiming) -> TimingRecord {
        TimingRecord {
            system: LOCAL_SYSTEM.into(),
            xpu_type: LOCAL_XPU.into(),
            n_xpu: self.workers as u32,
            n_nodes: 1,
            input: self.input.name.clone(),
            sections,
            steps_per_report: Some(self.steps_per_report),
            seed: Some(self.seed),
        }
    }
}

/// Bytes the run holds at peak: both spectral fields, velocity vectors,
/// padded FFT buffers for the whole batch and the collision constants.
pub fn estimate_run_memory(input: &BenchmarkInput) -> Result<u64, InputError> {
    let grid = &input.grid;
    let shape = derive_fft_shape(grid)?;
    let (nf, ng, nv) = SpectralState::expected_lens(grid);
    let padded_complex = shape.batch as u64 * shape.fft_x as u64 * (shape.fft_y as u64 / 2 + 1);
    let spectral = (nf + ng) as u64 * 16 + nv as u64 * 8;
    // one padded spectrum and three padded real fields live at once
    let fft = padded_complex * 16 * 4;
    spectral
        .checked_add(fft)
        .and_then(|x| x.checked_add(input.collision_memory().ok()?))
        .ok_or(InputError::Overflow)
}

/// Smallest nonzero step of the monotonic clock, in seconds.
pub fn timer_resolution() -> f64 {
    let mut best = Duration::MAX;
    for _ in 0..200 {
        let a = Instant::now();
        let mut b = Instant::now();
        while b == a {
            b = Instant::now();
        }
        best = best.min(b - a);
    }
    best.as_secs_f64()
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    /// One entry per reporting step.
    pub timings: Vec<SectionTiming>,
    /// Wall time of each reporting step.
    pub wall: Vec<f64>,
    pub checksum: f64,
    pub timer_resolution: f64,
    pub snapshot_bytes: u64,
}
/// Runs each job on its own scoped thread, inline when there is only one.
/// Runs `jobs` on up to `workers` scoped threads, inline for one worker.
fn par<T, F>(jobs: Vec<T>, f: F) -> Result<(), KernelError>
where
    T: Send,
    F: Fn(T) -> Result<(), KernelError> + Sync,
{
    if jobs.len() <= 1 {
        return jobs.into_iter().try_for_each(f);
    }
    std::thread::scope(|scope| {
        let handles: Vec<_> = jobs
            .into_iter()
            .map(|job| {
                let f = &f;
                scope.spawn(move || f(job))
            })
            .collect();
        handles
            .into_iter()
            .try_for_each(|h| h.join().expect("worker panicked"))
    })
}

/// Splits `data` into `parts` balanced runs of `unit`-sized items,
/// returning each run with its first item index.
fn split_units<T>(
    mut data: &mut [T],
    units: usize,
    unit: usize,
    parts: usize,
) -> Vec<(usize, &mut [T])> {
    let mut out = Vec::with_capacity(parts);
    for k in 0..parts {
        let r = balanced(units, parts, k);
        let (head, tail) = data.split_at_mut(r.len() * unit);
        out.push((r.start, head));
        data = tail;
    }
    out
}

struct Engine {
    ex: Exchange,
    nv: usize,
    d2: usize,
    spatial: usize,
    plans: NlPlans<ReferencePlan>,
    collision: CollisionOperator,
    weights: Vec<f64>,
}

impl Engine {
    fn new(cfg: &RunConfig) -> Result<Self, HarnessError> {
        let grid = cfg.input.grid;
        let batch = SpectralState::batch(&grid);
        let nv = grid.velocity();
        let plans = NlPlans::new(&ReferenceBackend, &grid, batch / cfg.workers, cfg.semantics)?;
        let collision =
            CollisionOperator::build(&grid, cfg.input.collision, cfg.seed, cfg.memory_budget)?;
        Ok(Self {
            ex: Exchange {
                batch,
                d1: grid.d1(),
                d3: grid.d3(),
                workers: cfg.workers,
            },
            nv,
            d2: grid.d2(),
            spatial: grid.spatial(),
            plans,
            collision,
            weights: vec![1.0 / nv as f64; nv],
        })
    }

    fn batch_chunk(&self) -> usize {
        self.ex.batch / self.ex.workers * self.ex.d1 * self.ex.d3
    }

    fn step(
        &self,
        state: &mut SpectralState,
        t: &mut SectionTiming,
        snapshot: &Path,
    ) -> Result<u64, HarnessError> {
        let w = self.ex.workers;
        let chunk = self.batch_chunk();
        let timed = |t: &mut SectionTiming, s: Section, start: Instant| {
            t[s] += start.elapsed().as_secs_f64();
        };

        let start = Instant::now();
        let jobs: Vec<_> = state
            .f
            .chunks_mut(chunk)
            .zip(state.g.chunks(chunk))
            .collect();
        par(jobs, |(f, g)| nl_step(f, g, &self.plans, DT))?;
        timed(t, Section::Nl, start);

        let start = Instant::now();
        let jobs = split_units(&mut state.v, self.spatial, self.nv, w);
        par(jobs, |(first, v)| coll_step(v, &self.collision, first))?;
        timed(t, Section::Coll, start);

        let start = Instant::now();
        let mut rows = self
            .ex
            .to_rows(self.ex.scatter(std::mem::take(&mut state.f)));
        timed(t, Section::Comm, start);

        let start = Instant::now();
        let jobs: Vec<_> = rows
            .iter_mut()
            .enumerate()
            .filter(|(_, r)| !r.is_empty())
            .collect();
        par(jobs, |(k, r)| {
            let inner = self.nv * self.ex.row_range(k).len() * self.ex.d3;
            stream_shift(r, self.d2, inner, STREAM)
        })?;
        timed(t, Section::Str, start);

        let start = Instant::now();
        state.f = self.ex.gather(self.ex.to_batches(rows));
        timed(t, Section::Comm, start);

        let start = Instant::now();
        let mut field = vec![0.0; self.spatial];
        {
            let weights = &self.weights;
            let jobs: Vec<_> = split_units(&mut state.v, self.spatial, self.nv, w)
                .into_iter()
                .zip(split_units(&mut field, self.spatial, 1, w))
                .collect();
            par(jobs, |((_, v), (_, out))| {
                out.copy_from_slice(&field_reduce(v, weights)?);
                Ok(())
            })?;
        }
        let grid = state.grid;
        let planes = self.ex.batch / w;
        let jobs: Vec<_> = state.f.chunks_mut(chunk).enumerate().collect();
        par(jobs, |(k, f)| {
            field_broadcast(f, &field, &grid, k * planes..(k + 1) * planes)
        })?;
        timed(t, Section::Field, start);

        let start = Instant::now();
        let (d1, d3) = (self.ex.d1, self.ex.d3);
        par(state.f.chunks_mut(chunk).collect(), |f| {
            shear_shift(f, d1, d3, true, SHEAR)
        })?;
        timed(t, Section::Shear, start);

        let start = Instant::now();
        let jobs: Vec<_> = state
            .g
            .chunks_mut(chunk)
            .zip(state.f.chunks(chunk))
            .collect();
        par(jobs, |(g, f)| mem_triad(g, f, MEM_KEEP))?;
        timed(t, Section::Mem, start);

        let start = Instant::now();
        let bytes = write_snapshot(state, snapshot)?;
        timed(t, Section::Io, start);

        state.renormalize();
        Ok(bytes)
    }
}

/// Drops section sums the clock cannot resolve and rounds the rest to
/// whole nanoseconds.
fn floor_below(t: SectionTiming, resolution: f64) -> SectionTiming {
    SectionTiming::from_array(t.to_array().map(|x| {
        if x < resolution {
            0.0
        } else {
            (x * 1e9).round() / 1e9
        }
    }))
}

pub fn run(cfg: &RunConfig) -> Result<RunSummary, HarnessError> {
    cfg.validate()?;
    let estimate = estimate_run_memory(&cfg.input)?;
    if estimate > cfg.memory_budget {
        return Err(HarnessError::Budget {
            estimate,
            budget: cfg.memory_budget,
        });
    }
    let resolution = timer_resolution();
    let engine = Engine::new(cfg)?;
    let metadata = [
        ("grid", cfg.input.grid.to_string()),
        ("scale", cfg.input.scale.to_string()),
        ("collision", cfg.input.collision.to_string()),
        ("semantics", cfg.semantics.to_string()),
        ("timer_resolution_s", format!("{resolution:e}")),
    ];
    let mut writer = RecordWriter::create(&cfg.out_path, &metadata)?;
    let snapshot = cfg.snapshot_path();
    let mut state = SpectralState::seeded(cfg.input.grid, cfg.seed);
    let mut summary = RunSummary {
        timings: Vec::new(),
        wall: Vec::new(),
        checksum: 0.0,
        timer_resolution: resolution,
        snapshot_bytes: 0,
    };
    for _ in 0..cfg.reports {
        let mut t = SectionTiming::default();
        let wall = Instant::now();
        for _ in 0..cfg.steps_per_report {
            summary.snapshot_bytes = engine.step(&mut state, &mut t, &snapshot)?;
        }
        let wall = wall.elapsed().as_secs_f64();
        let t = floor_below(t, resolution);
        writer
            .append(&cfg.record(t))
            .map_err(|source| RecordError::Io {
                path: cfg.out_path.clone(),
                source,
            })?;
        summary.timings.push(t);
        summary.wall.push(wall);
    }
    summary.checksum = state.checksum();
    Ok(summary)
}

/// Runs the kernels without timing or files and returns the final state;
/// used to check that worker counts do not change results.
pub fn run_state(cfg: &RunConfig, snapshot: &Path) -> Result<SpectralState, HarnessError> {
    cfg.validate()?;
    let engine = Engine::new(cfg)?;
    let mut state = SpectralState::seeded(cfg.input.grid, cfg.seed);
    let mut t = SectionTiming::default();
    for _ in 0..cfg.reports * cfg.steps_per_report {
        engine.step(&mut state, &mut t, snapshot)?;
    }
    Ok(state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use gyrobench_core::inputs::{CollisionMode, GridShape};
    use gyrobench_core::Complex64;

    fn tiny(workers: usize) -> RunConfig {
        let grid = GridShape::new([6, 2, 3, 2, 2, 1]).unwrap();
        let input = BenchmarkInput::new("tiny", grid, CollisionMode::full(8).unwrap());
        let mut cfg = RunConfig::new(input, "unused.dsv");
        cfg.workers = workers;
        cfg.steps_per_report = 3;
        cfg
    }

    #[test]
    fn split_units_is_balanced() {
        let mut data: Vec<u32> = (0..10).collect();
        let parts = split_units(&mut data, 5, 2, 3);
        let firsts: Vec<usize> = parts.iter().map(|(f, _)| *f).collect();
        let lens: Vec<usize> = parts.iter().map(|(_, s)| s.len()).collect();
        assert_eq!(firsts, [0, 2, 4]);
        assert_eq!(lens, [4, 4, 2]);
    }

    #[test]
    fn workers_must_divide_batch() {
        assert!(tiny(3).validate().is_err());
        assert!(tiny(0).validate().is_err());
        assert!(tiny(4).validate().is_ok());
        let mut c = tiny(1);
        c.steps_per_report = 0;
        assert!(c.validate().is_err());
    }

    #[test]
    fn worker_counts_agree_bitwise() {
        let dir = tempfile::tempdir().unwrap();
        let snap = dir.path().join("s.gbnc");
        let one = run_state(&tiny(1), &snap).unwrap();
        for w in [2, 4, 8] {
            let many = run_state(&tiny(w), &snap).unwrap();
            assert_eq!(many, one, "workers={w}");
        }
        assert!(one.checksum().is_finite());
    }

    #[test]
    fn budget_refused_before_allocating() {
        let mut cfg = tiny(1);
        cfg.memory_budget = 1000;
        assert!(matches!(run(&cfg), Err(HarnessError::Budget { .. })));
    }

    #[test]
    fn sub_resolution_sections_are_zero() {
        let t = SectionTiming::from_array([1e-9, 0.5, 0.0, 2e-6, 1.0, 0.0, 0.0, 3.0]);
        let f = floor_below(t, 1e-6);
        assert_eq!(f.to_array(), [0.0, 0.5, 0.0, 2e-6, 1.0, 0.0, 0.0, 3.0]);
    }

    #[test]
    fn clock_resolves_something() {
        let r = timer_resolution();
        assert!(r > 0.0 && r < 1e-2);
    }

    #[test]
    fn state_estimate_counts_constants() {
        let cfg = tiny(1);
        let with = estimate_run_memory(&cfg.input).unwrap();
        let mut simple = cfg.input.clone();
        simple.collision = CollisionMode::Simplified;
        let without = estimate_run_memory(&simple).unwrap();
        assert_eq!(with - without, cfg.input.collision_memory().unwrap());
    }

    #[test]
    fn exchange_is_a_permutation() {
        let ex = Exchange {
            batch: 4,
            d1: 6,
            d3: 2,
            workers: 4,
        };
        let data: Vec<Complex64> = (0..48)
            .map(|i| Complex64::new(i as f64, -(i as f64)))
            .collect();
        let back = ex.gather(ex.to_batches(ex.to_rows(ex.scatter(data.clone()))));
        assert_eq!(back, data);
    }
}
