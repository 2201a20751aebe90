use alloc::vec::Vec;
use rand_core::RngCore;

use super::{validate, LieAlgebraSpec};

fn uniform(rng: &mut impl RngCore) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Random nilpotent algebra of dimension `dim` with at most `max_level` levels.
///
/// A nondecreasing level is drawn for every basis vector, then each bracket
/// `[X_i, X_j]` receives random small-integer components only on vectors whose
/// level is at least `lvl(i) + lvl(j)`, so the algebra is filtered and hence
/// nilpotent. Candidates failing the Jacobi identity are rejected and redrawn.
pub fn random_nilpotent(rng: &mut impl RngCore, dim: usize, max_level: usize) -> LieAlgebraSpec {
    assert!(dim >= 1 && max_level >= 1);
    loop {
        let mut levels: Vec<usize> = (0..dim)
            .map(|_| 1 + (rng.next_u32() as usize) % max_level)
            .collect();
        levels.sort_unstable();
        let density = 0.15 + 0.35 * uniform(rng);
        let mut spec = LieAlgebraSpec::new(dim);
        for i in 0..dim {
            for j in i + 1..dim {
                for m in 0..dim {
                    if levels[m] < levels[i] + levels[j] || uniform(rng) > density {
                        continue;
                    }
                    let v = (rng.next_u32() % 5) as i32 - 2;
                    if v != 0 {
                        spec = spec.with_bracket(i, j, m, v as f64);
                    }
                }
            }
        }
        if validate(&spec).is_ok() {
            return spec;
        }
    }
}
