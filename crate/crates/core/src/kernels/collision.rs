use alloc::vec::Vec;

use super::{KernelError, SeededStream};
use crate::inputs::{estimate_collision_memory, CollisionMode, GridShape};

/// Default ceiling on materialized collision constants: 1 GiB.
pub const DEFAULT_COLLISION_BUDGET: u64 = 1 << 30;

/// Constants at their stored precision.
#[derive(Debug, Clone, PartialEq)]
pub enum Matrices {
    F32(Vec<f32>),
    F64(Vec<f64>),
}

/// Velocity-space operator applied at every spatial point.
#[derive(Debug, Clone, PartialEq)]
pub enum CollisionOperator {
    /// One dense `nv × nv` row-major matrix per spatial point.
    Full { nv: usize, matrices: Matrices },
    /// One diagonal shared by every spatial point.
    Simplified { diagonal: Vec<f64> },
}

impl CollisionOperator {
    /// Seeded operator for `grid`. Full mode refuses to materialize more
    /// than `budget` bytes of constants.
    pub fn build(
        grid: &GridShape,
        mode: CollisionMode,
        seed: u64,
        budget: u64,
    ) -> Result<Self, KernelError> {
        let nv = grid.velocity();
        let mut rng = SeededStream::new(seed, 3);
        match mode {
            CollisionMode::Simplified => Ok(Self::Simplified {
                diagonal: (0..nv).map(|_| 1.0 - 0.05 * rng.unit()).collect(),
            }),
            CollisionMode::Full { entry_bytes } => {
                let estimate = estimate_collision_memory(grid, mode)?;
                if estimate > budget {
                    return Err(KernelError::BudgetExceeded { estimate, budget });
                }
                // identity plus a small coupling, so repeated application stays tame
                let eps = 0.1 / nv as f64;
                let mut entry = |idx: usize| {
                    let diag = if idx % nv == (idx / nv) % nv {
                        1.0
                    } else {
                        0.0
                    };
                    diag + eps * rng.symmetric()
                };
                let count = grid.spatial() * nv * nv;
                let matrices = if entry_bytes == 4 {
                    Matrices::F32((0..count).map(|i| entry(i) as f32).collect())
                } else {
                    Matrices::F64((0..count).map(entry).collect())
                };
                Ok(Self::Full { nv, matrices })
            }
        }
    }

    /// Full operator from explicit row-major matrices, one per spatial point.
    pub fn dense(nv: usize, matrices: Vec<f64>) -> Result<Self, KernelError> {
        if nv == 0 || matrices.len() % (nv * nv) != 0 {
            return Err(KernelError::ShapeMismatch {
                what: "collision matrices",
                expected: nv * nv,
                actual: matrices.len(),
            });
        }
        Ok(Self::Full {
            nv,
            matrices: Matrices::F64(matrices),
        })
    }

    pub fn diagonal(diagonal: Vec<f64>) -> Self {
        Self::Simplified { diagonal }
    }

    pub fn nv(&self) -> usize {
        match self {
            Self::Full { nv, .. } => *nv,
            Self::Simplified { diagonal } => diagonal.len(),
        }
    }

    /// Bytes of constants held.
    pub fn footprint(&self) -> usize {
        match self {
            Self::Full {
                matrices: Matrices::F32(m),
                ..
            } => m.len() * 4,
            Self::Full {
                matrices: Matrices::F64(m),
                ..
            } => m.len() * 8,
            Self::Simplified { diagonal } => diagonal.len() * 8,
        }
    }

    fn points(&self) -> Option<usize> {
        match self {
            Self::Full {
                nv,
                matrices: Matrices::F32(m),
            } => Some(m.len() / (nv * nv)),
            Self::Full {
                nv,
                matrices: Matrices::F64(m),
            } => Some(m.len() / (nv * nv)),
            Self::Simplified { .. } => None,
        }
    }
}

fn matvec<T: Copy + Into<f64>>(a: &[T], x: &mut [f64], tmp: &mut [f64]) {
    let n = x.len();
    for (row, t) in a.chunks_exact(n).zip(tmp.iter_mut()) {
        *t = row.iter().zip(x.iter()).map(|(&m, &v)| m.into() * v).sum();
    }
    x.copy_from_slice(tmp);
}

/// Applies the operator to `v`, which holds the vectors of spatial points
/// `first_point..first_point + v.len()/nv`.
pub fn coll_step(
    v: &mut [f64],
    op: &CollisionOperator,
    first_point: usize,
) -> Result<(), KernelError> {
    let nv = op.nv();
    if nv == 0 || v.len() % nv != 0 {
        return Err(KernelError::ShapeMismatch {
            what: "velocity vectors",
            expected: nv,
            actual: v.len(),
        });
    }
    let count = v.len() / nv;
    if let Some(points) = op.points() {
        if first_point + count > points {
            return Err(KernelError::ShapeMismatch {
                what: "spatial points",
                expected: points,
                actual: first_point + count,
            });
        }
    }
    match op {
        CollisionOperator::Simplified { diagonal } => {
            for vec in v.chunks_exact_mut(nv) {
                vec.iter_mut().zip(diagonal).for_each(|(x, d)| *x *= d);
            }
        }
        CollisionOperator::Full { matrices, .. } => {
            let mut tmp = alloc::vec![0.0; nv];
            let block = nv * nv;
            for (p, vec) in v.chunks_exact_mut(nv).enumerate() {
                let at = (first_point + p) * block;
                match matrices {
                    Matrices::F32(m) => matvec(&m[at..at + block], vec, &mut tmp),
                    Matrices::F64(m) => matvec(&m[at..at + block], vec, &mut tmp),
                }
            }
        }
    }
    Ok(())
}
