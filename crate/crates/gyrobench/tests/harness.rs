use std::path::Path;

use gyrobench::harness::comm::Exchange;
use gyrobench::harness::snapshot::read_snapshot;
use gyrobench::harness::{run, run_state, HarnessError, RunConfig};
use gyrobench::records::ingest;
use gyrobench_core::fftplan::BackendSemantics;
use gyrobench_core::inputs::{catalog, lookup, scale_input, BenchmarkInput, Scale};
use gyrobench_core::kernels::SeededStream;
use gyrobench_core::Complex64;
use proptest::prelude::*;

fn n102_eighth() -> BenchmarkInput {
    let cat = catalog();
    scale_input(lookup(&cat, "n102").unwrap(), Scale::new(1, 8)).unwrap()
}

fn config(dir: &Path, tag: &str) -> RunConfig {
    let mut cfg = RunConfig::new(n102_eighth(), dir.join(format!("{tag}.dsv")));
    cfg.steps_per_report = 2;
    cfg
}

#[test]
fn repeated_runs_match() {
    let dir = tempfile::tempdir().unwrap();
    let a = run(&config(dir.path(), "a")).unwrap();
    let b = run(&config(dir.path(), "b")).unwrap();
    assert_eq!(a.checksum.to_bits(), b.checksum.to_bits());
}

#[test]
fn semantics_workers_and_chunking_leave_state_alone() {
    let dir = tempfile::tempdir().unwrap();
    let snap = dir.path().join("s.gbnc");
    let mut base = config(dir.path(), "x");
    base.steps_per_report = 4;
    let reference = run_state(&base, &snap).unwrap();

    let mut reversed = base.clone();
    reversed.semantics = BackendSemantics::reversed();
    assert_eq!(run_state(&reversed, &snap).unwrap(), reference);

    for workers in [2, 4] {
        let mut cfg = base.clone();
        cfg.workers = workers;
        assert_eq!(
            run_state(&cfg, &snap).unwrap(),
            reference,
            "workers={workers}"
        );
    }

    let mut rechunked = base.clone();
    rechunked.steps_per_report = 1;
    rechunked.reports = 4;
    assert_eq!(run_state(&rechunked, &snap).unwrap(), reference);
}

#[test]
fn two_workers_spend_longer_in_comm() {
    let dir = tempfile::tempdir().unwrap();
    let comm = |workers| {
        let mut cfg = config(dir.path(), &format!("w{workers}"));
        cfg.workers = workers;
        cfg.steps_per_report = 3;
        let s = run(&cfg).unwrap();
        (s.checksum, s.timings.iter().map(|t| t.comm).sum::<f64>())
    };
    let (c1, t1) = comm(1);
    let (c2, t2) = comm(2);
    assert_eq!(c1.to_bits(), c2.to_bits());
    assert!(t2 > t1, "comm {t2} with two workers vs {t1} with one");
}

#[test]
fn timings_are_accounted() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = config(dir.path(), "acct");
    cfg.reports = 2;
    cfg.workers = 2;
    let s = run(&cfg).unwrap();
    assert_eq!(s.timings.len(), 2);
    for (t, wall) in s.timings.iter().zip(&s.wall) {
        assert!(t.is_valid());
        assert!(
            t.total() <= wall + s.timer_resolution,
            "{} > {wall}",
            t.total()
        );
        assert!(t.nl > 0.0);
    }
    let text = std::fs::read_to_string(&cfg.out_path).unwrap();
    assert!(text.contains("# semantics=natural"));
    assert!(text.contains("# scale=1/8"));
    // per-report records of one run average into one
    let recs = ingest(&[&cfg.out_path]).unwrap();
    assert_eq!(recs.len(), 1);
    let mean = (s.timings[0].nl + s.timings[1].nl) / 2.0;
    assert!((recs[0].sections.nl - mean).abs() <= 1e-12);
    assert_eq!(recs[0].n_xpu, 2);
    assert_eq!(recs[0].steps_per_report, Some(2));
    assert_eq!(recs[0].seed, Some(42));
}

#[test]
fn snapshot_holds_final_state() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(dir.path(), "snap");
    let s = run(&cfg).unwrap();
    let state = read_snapshot(&cfg.snapshot_path()).unwrap();
    assert_eq!(state.grid, cfg.input.grid);
    assert_eq!(state.seed, 42);
    assert_eq!(
        s.snapshot_bytes,
        std::fs::metadata(cfg.snapshot_path()).unwrap().len()
    );
}

#[test]
fn unwritable_output_is_reported_with_path() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = config(dir.path(), "x");
    cfg.out_path = dir.path().join("no").join("such").join("t.dsv");
    let err = run(&cfg).unwrap_err();
    assert!(matches!(err, HarnessError::Records(_)), "{err:?}");
    assert!(err.to_string().contains("no/such"), "{err}");
}

#[test]
fn full_collisions_refused_over_budget() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = config(dir.path(), "x");
    let need = cfg.input.collision_memory().unwrap();
    cfg.memory_budget = need - 1;
    match run(&cfg) {
        Err(HarnessError::Budget { estimate, budget }) => {
            assert!(estimate > need);
            assert_eq!(budget, need - 1);
        }
        other => panic!("unexpected {other:?}"),
    }
    assert!(!cfg.out_path.exists());
}

#[test]
fn four_worker_transpose_lands_every_block() {
    let ex = Exchange {
        batch: 8,
        d1: 6,
        d3: 3,
        workers: 4,
    };
    // value encodes (plane, row, column)
    let tag = |b: usize, i1: usize, i3: usize| Complex64::new((b * 100 + i1 * 10 + i3) as f64, 0.0);
    let data: Vec<Complex64> = (0..8)
        .flat_map(|b| (0..6).flat_map(move |i1| (0..3).map(move |i3| tag(b, i1, i3))))
        .collect();
    let rows = ex.to_rows(ex.scatter(data.clone()));
    for (w, part) in rows.iter().enumerate() {
        let r = ex.row_range(w);
        let want: Vec<Complex64> = (0..8)
            .flat_map(|b| {
                r.clone()
                    .flat_map(move |i1| (0..3).map(move |i3| tag(b, i1, i3)))
            })
            .collect();
        assert_eq!(part, &want, "worker {w}");
    }
    assert_eq!(ex.gather(ex.to_batches(rows)), data);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn transpose_round_trip_is_byte_exact(
        workers in 1usize..=6,
        planes_per in 1usize..=3,
        d1 in 1usize..=9,
        d3 in 1usize..=4,
        seed in any::<u64>(),
    ) {
        let ex = Exchange { batch: workers * planes_per, d1, d3, workers };
        let mut rng = SeededStream::new(seed, 0);
        let data: Vec<Complex64> = (0..ex.batch * d1 * d3).map(|_| rng.complex()).collect();
        let back = ex.gather(ex.to_batches(ex.to_rows(ex.scatter(data.clone()))));
        let bits = |v: &[Complex64]| v.iter().map(|z| (z.re.to_bits(), z.im.to_bits())).collect::<Vec<_>>();
        prop_assert_eq!(bits(&back), bits(&data));
    }
}
