use alloc::vec;
use alloc::vec::Vec;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

/// Square integer matrix, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct IntMatrix {
    pub size: usize,
    pub entries: Vec<i128>,
}

impl IntMatrix {
    pub fn identity(size: usize) -> Self {
        let mut entries = vec![0; size * size];
        for i in 0..size {
            entries[i * size + i] = 1;
        }
        Self { size, entries }
    }

    /// `I + E_{row,col}` (0-based).
    pub fn elementary(size: usize, row: usize, col: usize) -> Self {
        let mut m = Self::identity(size);
        m.entries[row * size + col] += 1;
        m
    }

    pub fn get(&self, row: usize, col: usize) -> i128 {
        self.entries[row * self.size + col]
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.size)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.size;
        let mut entries = vec![0i128; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.entries[i * n + k];
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    let v = a
                        .checked_mul(other.entries[k * n + j])
                        .expect("integer overflow");
                    entries[i * n + j] =
                        entries[i * n + j].checked_add(v).expect("integer overflow");
                }
            }
        }
        Self { size: n, entries }
    }

    /// Inverse of a unitriangular matrix `I + N`: `Σ (-N)^j`.
    pub fn unitriangular_inverse(&self) -> Self {
        let n = self.size;
        let mut neg_nil = self.clone();
        for (idx, e) in neg_nil.entries.iter_mut().enumerate() {
            *e = if idx / n == idx % n { 0 } else { -*e };
        }
        let mut acc = Self::identity(n);
        let mut power = Self::identity(n);
        for _ in 1..n {
            power = power.mul(&neg_nil);
            for (a, p) in acc.entries.iter_mut().zip(&power.entries) {
                *a += p;
            }
        }
        acc
    }

    fn is_upper_unitriangular(&self) -> bool {
        let n = self.size;
        (0..n).all(|i| (0..=i).all(|j| self.get(i, j) == i128::from(i == j)))
    }
}

/// `[a, b] = a b a⁻¹ b⁻¹`.
pub fn group_commutator(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    a.mul(b)
        .mul(&a.unitriangular_inverse())
        .mul(&b.unitriangular_inverse())
}

/// Result of the unitriangular group checks.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CommutatorWitness {
    pub size: usize,
    /// `I + E_{t,t+1}` for `t = 1..size-1`.
    pub generators: Vec<IntMatrix>,
    /// `[g₁, [g₂, [… , g_{size-1}]…]]`.
    pub witness: IntMatrix,
    pub witness_nontrivial: bool,
    /// Every right-nested `size`-fold commutator of the generators is `I`.
    pub higher_commutators_trivial: bool,
    /// Nontrivial partial commutators visited while checking the above.
    pub nodes_visited: usize,
    pub identity_trials: usize,
    /// `[a, bc] = [a, b]·[b, [a, c]]·[a, c]` held on every trial.
    pub identity_holds: bool,
}

fn random_unitriangular(rng: &mut impl RngCore, size: usize) -> IntMatrix {
    let mut m = IntMatrix::identity(size);
    for i in 0..size {
        for j in i + 1..size {
            m.entries[i * size + j] = (rng.next_u32() % 7) as i128 - 3;
        }
    }
    m
}

/// Checks, in the group of `size × size` upper unitriangular integer matrices,
/// the commutator expansion identity on `trials` random triples with entries in
/// `[-3, 3]`, and that the elementary generators have a nontrivial
/// `(size-1)`-fold commutator while all `size`-fold ones vanish.
pub fn unitriangular_commutator_check(size: usize, trials: usize, seed: u64) -> CommutatorWitness {
    assert!((2..=12).contains(&size), "size must lie in 2..=12");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut identity_holds = true;
    for _ in 0..trials {
        let a = random_unitriangular(&mut rng, size);
        let b = random_unitriangular(&mut rng, size);
        let c = random_unitriangular(&mut rng, size);
        debug_assert!(a.is_upper_unitriangular());
        let lhs = group_commutator(&a, &b.mul(&c));
        let ac = group_commutator(&a, &c);
        let rhs = group_commutator(&a, &b)
            .mul(&group_commutator(&b, &ac))
            .mul(&ac);
        identity_holds &= lhs == rhs;
    }
    // Degenerate triple.
    let id = IntMatrix::identity(size);
    identity_holds &= group_commutator(&id, &id.mul(&id)).is_identity();

    let generators: Vec<IntMatrix> = (0..size - 1)
        .map(|t| IntMatrix::elementary(size, t, t + 1))
        .collect();
    let mut witness = generators[size - 2].clone();
    for g in generators[..size - 2].iter().rev() {
        witness = group_commutator(g, &witness);
    }
    let witness_nontrivial = !witness.is_identity();

    let mut nodes_visited = 0;
    let mut higher_commutators_trivial = true;
    for g in &generators {
        nested_trivial(
            &generators,
            g.clone(),
            1,
            size,
            &mut nodes_visited,
            &mut higher_commutators_trivial,
        );
    }
    CommutatorWitness {
        size,
        generators,
        witness,
        witness_nontrivial,
        higher_commutators_trivial,
        nodes_visited,
        identity_trials: trials,
        identity_holds,
    }
}

/// Extends the right-nested commutator `inner` (already `depth`-fold) on the
/// left by every generator until `target` depth; `[g, I] = I` prunes.
fn nested_trivial(
    gens: &[IntMatrix],
    inner: IntMatrix,
    depth: usize,
    target: usize,
    visited: &mut usize,
    all_trivial: &mut bool,
) {
    if inner.is_identity() {
        return;
    }
    *visited += 1;
    if depth == target {
        *all_trivial = false;
        return;
    }
    for g in gens {
        nested_trivial(
            gens,
            group_commutator(g, &inner),
            depth + 1,
            target,
            visited,
            all_trivial,
        );
    }
}
