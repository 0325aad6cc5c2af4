//! All-to-all transpose between batch-partitioned and row-partitioned
//! spectral planes.
//!
//! Batch layout: worker `w` owns planes `batch_range(w)`, each `[d1 × d3]`.
//! Row layout: worker `w` owns rows `row_range(w)` of every plane, stored
//! `[batch × rows × d3]`.

use std::ops::Range;
use std::sync::mpsc;

use gyrobench_core::Complex64;

/// Partition geometry shared by every worker.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Exchange {
    pub batch: usize,
    pub d1: usize,
    pub d3: usize,
    pub workers: usize,
}

/// `n` items split into `parts` contiguous ranges whose sizes differ by at
/// most one, larger ranges first.
pub fn balanced(n: usize, parts: usize, k: usize) -> Range<usize> {
    let (q, r) = (n / parts, n % parts);
    let start = k * q + k.min(r);
    start..start + q + usize::from(k < r)
}

impl Exchange {
    pub fn batch_range(&self, w: usize) -> Range<usize> {
        balanced(self.batch, self.workers, w)
    }

    pub fn row_range(&self, w: usize) -> Range<usize> {
        balanced(self.d1, self.workers, w)
    }

    /// Splits a batch-layout field into per-worker batch partitions. A
    /// single worker takes the buffer as is.
    pub fn scatter(&self, data: Vec<Complex64>) -> Vec<Vec<Complex64>> {
        if self.workers == 1 {
            return vec![data];
        }
        let plane = self.d1 * self.d3;
        (0..self.workers)
            .map(|w| {
                let r = self.batch_range(w);
                data[r.start * plane..r.end * plane].to_vec()
            })
            .collect()
    }

    /// Inverse of [`Exchange::scatter`].
    pub fn gather(&self, mut parts: Vec<Vec<Complex64>>) -> Vec<Complex64> {
        if parts.len() == 1 {
            return parts.pop().unwrap();
        }
        parts.concat()
    }

    /// Batch partitions to row partitions.
    pub fn to_rows(&self, parts: Vec<Vec<Complex64>>) -> Vec<Vec<Complex64>> {
        self.all_to_all(
            parts,
            |ex, _src, dst, data| {
                let rows = ex.row_range(dst);
                data.chunks_exact(ex.d1 * ex.d3)
                    .flat_map(|plane| &plane[rows.start * ex.d3..rows.end * ex.d3])
                    .copied()
                    .collect()
            },
            // blocks arrive indexed by source, which is batch order
            |_, _, blocks| blocks.concat(),
        )
    }

    /// Row partitions back to batch partitions.
    pub fn to_batches(&self, parts: Vec<Vec<Complex64>>) -> Vec<Vec<Complex64>> {
        self.all_to_all(
            parts,
            |ex, src, dst, data| {
                let width = ex.row_range(src).len() * ex.d3;
                let b = ex.batch_range(dst);
                data[b.start * width..b.end * width].to_vec()
            },
            |ex, me, blocks| {
                let planes = ex.batch_range(me).len();
                let plane = ex.d1 * ex.d3;
                let mut out = vec![Complex64::new(0.0, 0.0); planes * plane];
                for (src, block) in blocks.iter().enumerate() {
                    let rows = ex.row_range(src);
                    let width = rows.len() * ex.d3;
                    if width == 0 {
                        continue;
                    }
                    for (p, piece) in block.chunks_exact(width).enumerate() {
                        let at = p * plane + rows.start * ex.d3;
                        out[at..at + width].copy_from_slice(piece);
                    }
                }
                out
            },
        )
    }

    /// Every worker cuts one block per destination, sends it over a
    /// channel, then assembles what it received. With one worker the
    /// partition loops back unchanged.
    fn all_to_all<C, A>(
        &self,
        parts: Vec<Vec<Complex64>>,
        cut: C,
        assemble: A,
    ) -> Vec<Vec<Complex64>>
    where
        C: Fn(&Exchange, usize, usize, &[Complex64]) -> Vec<Complex64> + Sync,
        A: Fn(&Exchange, usize, Vec<Vec<Complex64>>) -> Vec<Complex64> + Sync,
    {
        assert_eq!(parts.len(), self.workers, "one partition per worker");
        if self.workers == 1 {
            // one worker owns every row of every plane: the layouts coincide
            let (tx, rx) = mpsc::channel();
            tx.send(parts).expect("receiver alive");
            return rx.recv().expect("sender alive");
        }
        let (senders, receivers): (Vec<_>, Vec<_>) = (0..self.workers)
            .map(|_| mpsc::channel::<(usize, Vec<Complex64>)>())
            .unzip();
        let worker =
            |me: usize, data: Vec<Complex64>, rx: mpsc::Receiver<(usize, Vec<Complex64>)>| {
                for (dst, tx) in senders.iter().enumerate() {
                    tx.send((me, cut(self, me, dst, &data)))
                        .expect("receiver alive");
                }
                drop(data);
                let mut blocks = vec![Vec::new(); self.workers];
                for _ in 0..self.workers {
                    let (src, block) = rx.recv().expect("sender alive");
                    blocks[src] = block;
                }
                assemble(self, me, blocks)
            };
        std::thread::scope(|scope| {
            let handles: Vec<_> = parts
                .into_iter()
                .zip(receivers)
                .enumerate()
                .map(|(me, (data, rx))| {
                    let worker = &worker;
                    scope.spawn(move || worker(me, data, rx))
                })
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("exchange worker panicked"))
                .collect()
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn balanced_ranges_cover() {
        for n in 0..20 {
            for parts in 1..6 {
                let mut next = 0;
                for k in 0..parts {
                    let r = balanced(n, parts, k);
                    assert_eq!(r.start, next);
                    assert!(r.len() == n / parts || r.len() == n / parts + 1);
                    next = r.end;
                }
                assert_eq!(next, n);
            }
        }
    }

    #[test]
    fn single_worker_rows_equal_batches() {
        let ex = Exchange {
            batch: 3,
            d1: 4,
            d3: 2,
            workers: 1,
        };
        let data: Vec<Complex64> = (0..24).map(|i| Complex64::new(i as f64, 0.0)).collect();
        let rows = ex.to_rows(ex.scatter(data.clone()));
        assert_eq!(rows, [data.clone()]);
        assert_eq!(ex.gather(ex.to_batches(rows)), data);
    }
}
