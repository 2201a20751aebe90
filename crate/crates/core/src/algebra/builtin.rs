use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use nalgebra::{DMatrix, DVector};

use super::{AlgebraError, LieAlgebraSpec};

/// Catalog of test algebras.
///
/// * `abelian:n`: `ℝⁿ` with zero bracket.
/// * `heis3`: `[X₁, X₂] = X₃`.
/// * `heis5`: `[X₁, X₂] = [X₃, X₄] = X₅`.
/// * `filiform:n`: `[X₁, X_i] = X_{i+1}` for `2 ≤ i < n` (`n ≥ 3`).
/// * `free2step:k`: free nilpotent algebra on two generators of step `k ≤ 5`,
///   in the Hall basis of [`hall_basis`].
pub fn builtin(name: &str) -> Result<LieAlgebraSpec, AlgebraError> {
    let unknown = || AlgebraError::UnknownBuiltin(name.to_string());
    let (family, arg) = match name.split_once(':') {
        Some((f, a)) => (f, Some(a.parse::<usize>().map_err(|_| unknown())?)),
        None => (name, None),
    };
    match (family, arg) {
        ("abelian", Some(n)) if (1..=64).contains(&n) => Ok(LieAlgebraSpec::new(n)),
        ("heis3", None) => Ok(LieAlgebraSpec::new(3).with_bracket(0, 1, 2, 1.0)),
        ("heis5", None) => Ok(LieAlgebraSpec::new(5)
            .with_bracket(0, 1, 4, 1.0)
            .with_bracket(2, 3, 4, 1.0)),
        ("filiform", Some(n)) if (3..=64).contains(&n) => Ok((1..n - 1)
            .fold(LieAlgebraSpec::new(n), |s, i| {
                s.with_bracket(0, i, i + 1, 1.0)
            })),
        ("free2step", Some(k)) if (1..=5).contains(&k) => Ok(free_nilpotent(2, k)),
        _ => Err(unknown()),
    }
}

/// One element of a Hall basis: a generator or a bracket of two earlier
/// elements (indices into the basis list).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HallWord {
    Letter(u8),
    Bracket(usize, usize),
}

/// Hall basis of the free Lie algebra on `generators` letters up to weight
/// `max_weight`, ordered by weight.
///
/// Elements of weight ≥ 2 are `[a, b]` with `a < b` and, when `b = [b₁, b₂]`,
/// `b₁ ≤ a`. Returns each element with its weight.
pub fn hall_basis(generators: usize, max_weight: usize) -> Vec<(HallWord, usize)> {
    let mut basis: Vec<(HallWord, usize)> = (0..generators)
        .map(|g| (HallWord::Letter(g as u8), 1))
        .collect();
    for w in 2..=max_weight {
        let existing = basis.len();
        for b in 0..existing {
            for a in 0..b {
                if basis[a].1 + basis[b].1 != w {
                    continue;
                }
                if let HallWord::Bracket(b1, _) = basis[b].0 {
                    if b1 > a {
                        continue;
                    }
                }
                basis.push((HallWord::Bracket(a, b), w));
            }
        }
    }
    basis
}

type Poly = BTreeMap<Vec<u8>, i64>;

fn poly_commutator(p: &Poly, q: &Poly) -> Poly {
    let mut out = Poly::new();
    for (wp, cp) in p {
        for (wq, cq) in q {
            let mut pq = wp.clone();
            pq.extend_from_slice(wq);
            *out.entry(pq).or_insert(0) += cp * cq;
            let mut qp = wq.clone();
            qp.extend_from_slice(wp);
            *out.entry(qp).or_insert(0) -= cp * cq;
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

/// Free nilpotent Lie algebra of the given step, with structure constants
/// obtained by expanding Hall elements in the free associative algebra.
fn free_nilpotent(generators: usize, step: usize) -> LieAlgebraSpec {
    let basis = hall_basis(generators, step);
    let mut polys: Vec<Poly> = Vec::with_capacity(basis.len());
    for (word, _) in &basis {
        let p = match *word {
            HallWord::Letter(l) => {
                let mut p = Poly::new();
                p.insert(alloc::vec![l], 1);
                p
            }
            HallWord::Bracket(a, b) => poly_commutator(&polys[a], &polys[b]),
        };
        polys.push(p);
    }

    let mut spec = LieAlgebraSpec::new(basis.len());
    for a in 0..basis.len() {
        for b in a + 1..basis.len() {
            let w = basis[a].1 + basis[b].1;
            if w > step {
                continue;
            }
            let target = poly_commutator(&polys[a], &polys[b]);
            if target.is_empty() {
                continue;
            }
            let same_weight: Vec<usize> = (0..basis.len()).filter(|&m| basis[m].1 == w).collect();
            let coeffs = express(
                &target,
                &same_weight.iter().map(|&m| &polys[m]).collect::<Vec<_>>(),
            );
            for (m, c) in same_weight.iter().zip(coeffs) {
                if c != 0 {
                    spec = spec.with_bracket(a, b, *m, c as f64);
                }
            }
        }
    }
    spec
}

/// Integer coefficients of `target` in the span of `columns`, verified exactly.
fn express(target: &Poly, columns: &[&Poly]) -> Vec<i64> {
    let mut words: Vec<&Vec<u8>> = target.keys().collect();
    for c in columns {
        words.extend(c.keys());
    }
    words.sort();
    words.dedup();
    let a = DMatrix::from_fn(words.len(), columns.len(), |r, c| {
        *columns[c].get(words[r]).unwrap_or(&0) as f64
    });
    let rhs = DVector::from_fn(words.len(), |r, _| {
        *target.get(words[r]).unwrap_or(&0) as f64
    });
    let normal = a.transpose() * &a;
    let solved = normal
        .cholesky()
        .expect("Hall elements of equal weight are linearly independent")
        .solve(&(a.transpose() * rhs));
    let coeffs: Vec<i64> = solved.iter().map(|x| libm::round(*x) as i64).collect();
    let mut check = Poly::new();
    for (c, p) in coeffs.iter().zip(columns) {
        for (w, v) in p.iter() {
            *check.entry(w.clone()).or_insert(0) += c * v;
        }
    }
    check.retain(|_, v| *v != 0);
    assert_eq!(
        &check, target,
        "bracket is not an integer combination of Hall elements"
    );
    coeffs
}

/// Human-readable form of a Hall element, e.g. `[x, [x, y]]`.
pub fn hall_word_string(basis: &[(HallWord, usize)], idx: usize) -> String {
    match basis[idx].0 {
        HallWord::Letter(l) => String::from(char::from(b'x' + l)),
        HallWord::Bracket(a, b) => {
            alloc::format!(
                "[{}, {}]",
                hall_word_string(basis, a),
                hall_word_string(basis, b)
            )
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::validate;

    #[test]
    fn hall_dimensions_follow_witt() {
        // Witt numbers for two generators: 2, 1, 2, 3, 6.
        let b = hall_basis(2, 5);
        let per_weight: Vec<usize> = (1..=5)
            .map(|w| b.iter().filter(|e| e.1 == w).count())
            .collect();
        assert_eq!(per_weight, [2, 1, 2, 3, 6]);
    }

    #[test]
    fn step3_words() {
        let b = hall_basis(2, 3);
        let words: Vec<String> = (0..b.len()).map(|i| hall_word_string(&b, i)).collect();
        assert_eq!(words, ["x", "y", "[x, y]", "[x, [x, y]]", "[y, [x, y]]"]);
    }

    #[test]
    fn free_step3_brackets() {
        let spec = builtin("free2step:3").unwrap();
        assert_eq!(spec.dim, 5);
        let alg = validate(&spec).unwrap();
        assert_eq!(alg.consts.get(0, 1, 2), 1.0);
        assert_eq!(alg.consts.get(0, 2, 3), 1.0);
        assert_eq!(alg.consts.get(1, 2, 4), 1.0);
        assert_eq!(alg.consts.entries().len(), 3);
    }

    #[test]
    fn free_algebras_satisfy_jacobi_exactly() {
        for k in 1..=5 {
            let alg = validate(&builtin(&alloc::format!("free2step:{k}")).unwrap()).unwrap();
            assert_eq!(alg.jacobi_residual, 0.0);
            assert!(alg.exact);
        }
    }

    #[test]
    fn catalog() {
        assert_eq!(builtin("heis3").unwrap().brackets.len(), 1);
        let ab = builtin("abelian:7").unwrap();
        assert_eq!((ab.dim, ab.brackets.len()), (7, 0));
        assert_eq!(builtin("heis5").unwrap().dim, 5);
        assert_eq!(builtin("filiform:5").unwrap().brackets.len(), 3);
        for bad in [
            "heis4",
            "abelian",
            "abelian:0",
            "free2step:6",
            "filiform:2",
            "abelian:x",
        ] {
            assert!(
                matches!(builtin(bad), Err(AlgebraError::UnknownBuiltin(_))),
                "{bad}"
            );
        }
    }
}
