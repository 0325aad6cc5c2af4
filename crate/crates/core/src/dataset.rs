//! Published per-reporting-step timings for the six catalog inputs on five
//! processor types: 28 observations in total.

use alloc::vec::Vec;

use crate::report::TimingRecord;
use crate::timing::SectionTiming;

const MAX9480: (&str, &str) = ("Stampede3", "Intel Max 9480 CPU");
const MAX1550: (&str, &str) = ("Stampede3", "Intel Max 1550 GPU");
const MI250X: (&str, &str) = ("Frontier", "AMD MI250X GPU");
const A100_80: (&str, &str) = ("Perlmutter", "NVIDIA A100 80G GPU");
const A100_40: (&str, &str) = ("Perlmutter", "NVIDIA A100 40G GPU");

type Row = (
    &'static str,
    (&'static str, &'static str),
    u32,
    u32,
    [f64; 8],
);

// input, (system, xpu), n_xpu, n_nodes, [nl, coll, str, field, shear, mem, io, comm]
#[rustfmt::skip]
const ROWS: [Row; 28] = [
    ("n102", MAX9480, 16, 8, [3.1, 1.8, 2.3, 0.5, 0.0, 0.3, 0.1, 5.2]),
    ("n102", MAX1550, 4, 1, [3.6, 1.1, 1.1, 0.8, 0.0, 0.6, 0.3, 2.5]),
    ("n102", MI250X, 4, 1, [3.8, 0.8, 1.5, 0.5, 0.0, 0.4, 0.3, 1.3]),
    ("n102", A100_80, 4, 1, [4.2, 1.2, 1.2, 0.4, 0.0, 0.4, 0.4, 1.3]),
    ("n102", A100_40, 4, 1, [4.5, 1.5, 1.4, 0.4, 0.0, 0.5, 0.4, 1.3]),

    ("sh03s", MAX9480, 48, 24, [16.1, 6.8, 9.8, 2.2, 3.6, 1.7, 0.2, 35.5]),
    ("sh03s", MAX1550, 24, 6, [14.4, 3.6, 4.6, 1.9, 0.5, 1.9, 0.7, 36.9]),
    ("sh03s", MI250X, 24, 6, [12.9, 2.3, 5.4, 0.8, 0.3, 1.3, 0.4, 10.4]),
    ("sh03s", A100_80, 24, 6, [15.5, 3.6, 4.4, 1.1, 0.7, 1.2, 1.0, 12.3]),

    ("n103", MAX9480, 64, 32, [17.1, 1.4, 9.6, 2.2, 0.0, 1.7, 0.2, 22.8]),
    ("n103", MAX1550, 16, 4, [15.6, 0.7, 4.6, 2.2, 0.0, 2.4, 0.8, 44.2]),
    ("n103", MI250X, 16, 4, [14.4, 1.3, 5.9, 0.8, 0.0, 1.5, 0.8, 12.0]),
    ("n103", A100_80, 16, 4, [14.6, 0.8, 4.8, 1.1, 0.0, 1.4, 1.7, 14.1]),
    ("n103", A100_40, 16, 4, [17.4, 0.8, 5.5, 1.3, 0.0, 1.6, 1.8, 15.0]),

    ("bg03n", MAX9480, 64, 32, [29.5, 0.9, 14.3, 4.1, 5.8, 2.4, 0.2, 32.3]),
    ("bg03n", MAX1550, 16, 4, [36.4, 0.5, 7.2, 2.8, 0.7, 3.3, 0.7, 49.3]),
    ("bg03n", MI250X, 16, 4, [19.7, 0.7, 8.7, 1.0, 0.5, 2.0, 1.4, 15.9]),
    ("bg03n", A100_80, 16, 4, [20.2, 0.4, 6.0, 1.1, 1.2, 2.1, 1.2, 22.7]),
    ("bg03n", A100_40, 16, 4, [22.8, 0.3, 6.8, 1.2, 1.5, 2.4, 1.1, 23.8]),

    ("sh04n", MAX9480, 64, 32, [34.2, 1.6, 13.8, 3.9, 6.1, 2.6, 0.3, 36.4]),
    ("sh04n", MAX1550, 16, 4, [47.6, 0.8, 7.0, 3.1, 0.7, 4.0, 1.0, 70.6]),
    ("sh04n", MI250X, 16, 4, [21.6, 1.5, 8.9, 1.3, 0.5, 2.3, 1.6, 18.8]),
    ("sh04n", A100_80, 16, 4, [24.0, 0.5, 5.6, 1.4, 0.8, 2.0, 1.3, 30.4]),

    ("bg04n", MAX9480, 64, 32, [48.3, 0.8, 13.6, 6.6, 5.4, 2.6, 0.2, 51.8]),
    ("bg04n", MAX1550, 16, 4, [42.5, 0.4, 6.8, 2.9, 0.6, 3.0, 0.7, 56.3]),
    ("bg04n", MI250X, 16, 4, [27.2, 0.6, 8.3, 1.3, 0.4, 2.1, 1.2, 15.7]),
    ("bg04n", A100_80, 16, 4, [23.7, 0.2, 5.1, 1.4, 0.7, 1.9, 1.0, 25.6]),
    ("bg04n", A100_40, 16, 4, [27.4, 0.3, 5.8, 1.8, 0.8, 2.1, 1.0, 26.9]),
];

pub fn bundled_dataset() -> Vec<TimingRecord> {
    ROWS.iter()
        .map(|&(input, (system, xpu), n_xpu, n_nodes, t)| TimingRecord {
            system: system.into(),
            xpu_type: xpu.into(),
            n_xpu,
            n_nodes,
            input: input.into(),
            sections: SectionTiming::from_array(t),
            steps_per_report: None,
            seed: None,
        })
        .collect()
}
