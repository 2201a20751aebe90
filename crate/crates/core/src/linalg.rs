//! Small dense helpers shared by the algebra and curvature code.

use alloc::vec;
use alloc::vec::Vec;
use nalgebra::DMatrix;

/// Relative rank threshold used for every span computation.
pub const RANK_TOL: f64 = 1e-10;

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    libm::sqrt(dot(a, a))
}

pub fn max_abs(a: &[f64]) -> f64 {
    a.iter()
        .fold(0.0, |m, x| if x.abs() > m { x.abs() } else { m })
}

/// Orthonormal basis (as matrix columns) of the span of `vectors`.
///
/// Rank-revealing Gram–Schmidt with column pivoting: at every step the column
/// with the largest remaining norm is taken (first one on ties), and the
/// process stops once that norm drops below `rel_tol` times the first pivot
/// norm. Each accepted column is orthogonalized twice.
pub fn orthonormal_span(dim: usize, vectors: &[Vec<f64>], rel_tol: f64) -> DMatrix<f64> {
    let mut work: Vec<Vec<f64>> = vectors.to_vec();
    let mut basis: Vec<Vec<f64>> = Vec::new();
    let mut first_pivot = 0.0;
    while basis.len() < dim && !work.is_empty() {
        let mut best = 0;
        let mut best_norm = -1.0;
        for (idx, v) in work.iter().enumerate() {
            let n = norm(v);
            if n > best_norm {
                best = idx;
                best_norm = n;
            }
        }
        if basis.is_empty() {
            first_pivot = best_norm;
        }
        if best_norm <= 0.0 || best_norm <= rel_tol * first_pivot {
            break;
        }
        let mut q = work.remove(best);
        for _ in 0..2 {
            for b in &basis {
                let p = dot(&q, b);
                q.iter_mut().zip(b).for_each(|(x, y)| *x -= p * y);
            }
        }
        let n = norm(&q);
        if n <= rel_tol * first_pivot {
            continue;
        }
        q.iter_mut().for_each(|x| *x /= n);
        for v in work.iter_mut() {
            let p = dot(v, &q);
            v.iter_mut().zip(&q).for_each(|(x, y)| *x -= p * y);
        }
        basis.push(q);
    }
    columns_to_matrix(dim, &basis)
}

pub fn columns_to_matrix(rows: usize, cols: &[Vec<f64>]) -> DMatrix<f64> {
    DMatrix::from_fn(rows, cols.len(), |i, j| cols[j][i])
}

pub fn matrix_columns(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.ncols())
        .map(|j| m.column(j).iter().copied().collect())
        .collect()
}

/// Projects `v` onto the orthogonal complement of the column span of `q`
/// (columns assumed orthonormal).
pub fn project_out(q: &DMatrix<f64>, v: &[f64]) -> Vec<f64> {
    let mut out = v.to_vec();
    for j in 0..q.ncols() {
        let col = q.column(j);
        let p: f64 = col.iter().zip(v).map(|(a, b)| a * b).sum();
        out.iter_mut()
            .zip(col.iter())
            .for_each(|(x, c)| *x -= p * c);
    }
    out
}

/// Extreme eigenvalues and eigenvectors of a symmetric matrix, ascending.
pub fn symmetric_eigen(m: &DMatrix<f64>) -> Option<(Vec<f64>, DMatrix<f64>)> {
    let eig = m.clone().try_symmetric_eigen(1e-15, 10_000)?;
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(m.nrows(), order.len(), |r, c| {
        eig.eigenvectors[(r, order[c])]
    });
    Some((values, vectors))
}

pub fn zeros(n: usize) -> Vec<f64> {
    vec![0.0; n]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn span_of_dependent_vectors() {
        let v = vec![
            vec![1.0, 0.0, 0.0],
            vec![2.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0],
        ];
        let q = orthonormal_span(3, &v, RANK_TOL);
        assert_eq!(q.ncols(), 2);
        let gram = q.transpose() * &q;
        assert!((gram - DMatrix::identity(2, 2)).amax() < 1e-14);
    }

    #[test]
    fn span_keeps_identity_order() {
        let v: Vec<Vec<f64>> = (0..3)
            .map(|i| (0..3).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
            .collect();
        let q = orthonormal_span(3, &v, RANK_TOL);
        assert!((q - DMatrix::<f64>::identity(3, 3)).amax() == 0.0);
    }

    #[test]
    fn zero_vectors_span_nothing() {
        let q = orthonormal_span(4, &[vec![0.0; 4]], RANK_TOL);
        assert_eq!(q.ncols(), 0);
    }

    #[test]
    fn eigen_sorted() {
        let m = DMatrix::from_row_slice(2, 2, &[2.0, 1.0, 1.0, 2.0]);
        let (vals, _) = symmetric_eigen(&m).unwrap();
        assert!((vals[0] - 1.0).abs() < 1e-14 && (vals[1] - 3.0).abs() < 1e-14);
    }
}
