use alloc::vec;
use alloc::vec::Vec;
use nalgebra::DMatrix;

use super::{AlgebraError, StructureConstants, ValidatedAlgebra};
use crate::linalg::{self, orthonormal_span, RANK_TOL};

/// `L_1 ⊇ L_2 ⊇ … ⊇ L_{k+1} = 0` with `L_{i+1} = [L_1, L_i]`.
#[derive(Debug, Clone)]
pub struct LowerCentralSeries {
    /// Euclidean-orthonormal basis matrices of `L_1, …, L_{k+1}`.
    pub subspaces: Vec<DMatrix<f64>>,
    pub degree: usize,
}

impl LowerCentralSeries {
    pub fn dims(&self) -> Vec<usize> {
        self.subspaces.iter().map(|s| s.ncols()).collect()
    }
}

pub fn lower_central_series(alg: &ValidatedAlgebra) -> Result<LowerCentralSeries, AlgebraError> {
    let n = alg.dim();
    let mut subspaces = vec![DMatrix::<f64>::identity(n, n)];
    for _ in 0..=n {
        let current = subspaces.last().unwrap();
        let current_dim = current.ncols();
        if current_dim == 0 {
            let degree = subspaces.len() - 1;
            return Ok(LowerCentralSeries { subspaces, degree });
        }
        let mut spanning = Vec::with_capacity(n * current_dim);
        for j in 0..n {
            for col in 0..current_dim {
                let mut v = vec![0.0; n];
                for (q, &b) in current.column(col).iter().enumerate() {
                    if b != 0.0 {
                        for (o, c) in v.iter_mut().zip(alg.consts.basis_bracket(j, q)) {
                            *o += b * c;
                        }
                    }
                }
                spanning.push(v);
            }
        }
        let next = orthonormal_span(n, &spanning, RANK_TOL);
        if next.ncols() >= current_dim {
            return Err(AlgebraError::NotNilpotent {
                stable_dim: current_dim,
            });
        }
        subspaces.push(next);
    }
    let stable_dim = subspaces.last().map_or(0, |s| s.ncols());
    Err(AlgebraError::NotNilpotent { stable_dim })
}

/// Graded `⟨·,·⟩₀`-orthonormal frame adapted to the lower central series.
#[derive(Debug, Clone)]
pub struct GradedFrame {
    pub series: LowerCentralSeries,
    /// `F_i = L_i ⊖ L_{i+1}`, columns `⟨·,·⟩₀`-orthonormal, original coordinates.
    pub complements: Vec<DMatrix<f64>>,
    /// Adapted basis vectors as columns (original coordinates), grouped by level.
    pub basis: DMatrix<f64>,
    /// 1-based level of each adapted basis vector.
    pub levels: Vec<usize>,
    /// Structure constants re-expressed in the adapted basis.
    pub consts: StructureConstants,
    pub inner0: DMatrix<f64>,
}

impl GradedFrame {
    pub fn dim(&self) -> usize {
        self.levels.len()
    }

    /// Nilpotency degree `k`.
    pub fn degree(&self) -> usize {
        self.series.degree
    }

    pub fn level(&self, m: usize) -> usize {
        self.levels[m]
    }

    /// `dim F_i` for `i = 1..=k`.
    pub fn level_dims(&self) -> Vec<usize> {
        self.complements.iter().map(|f| f.ncols()).collect()
    }

    pub fn indices_at_level(&self, level: usize) -> impl Iterator<Item = usize> + '_ {
        self.levels
            .iter()
            .enumerate()
            .filter(move |(_, &l)| l == level)
            .map(|(m, _)| m)
    }

    /// Bracket in adapted coordinates.
    pub fn bracket(&self, x: &[f64], y: &[f64]) -> Vec<f64> {
        self.consts.bracket(x, y)
    }

    /// Largest operator norm of the bilinear bracket `F_i × F_j → L` over all
    /// level pairs, with respect to `⟨·,·⟩₀`.
    ///
    /// Each norm is obtained by alternating power iteration on the trilinear
    /// form `⟨[z, w], v⟩₀`, started from the best basis pair.
    pub fn bracket_constant(&self) -> f64 {
        let k = self.degree();
        let mut best = 0.0f64;
        for i in 1..=k {
            for j in 1..=k {
                best = best.max(self.pair_operator_norm(i, j));
            }
        }
        best
    }

    fn pair_operator_norm(&self, i: usize, j: usize) -> f64 {
        let n = self.dim();
        let left: Vec<usize> = self.indices_at_level(i).collect();
        let right: Vec<usize> = self.indices_at_level(j).collect();
        let mut start = None;
        let mut start_norm = 0.0;
        for &p in &left {
            for &q in &right {
                let v = linalg::norm(self.consts.basis_bracket(p, q));
                if v > start_norm {
                    start_norm = v;
                    start = Some((p, q));
                }
            }
        }
        let Some((p0, q0)) = start else {
            return 0.0;
        };
        let unit = |idx: usize| {
            let mut e = vec![0.0; n];
            e[idx] = 1.0;
            e
        };
        let mut z = unit(p0);
        let mut w = unit(q0);
        let mut value = start_norm;
        for _ in 0..500 {
            let b = self.bracket(&z, &w);
            let bn = linalg::norm(&b);
            if bn == 0.0 {
                break;
            }
            let v: Vec<f64> = b.iter().map(|x| x / bn).collect();
            // z ← ∇_z ⟨[z, w], v⟩ restricted to F_i, then w likewise.
            let mut gz = vec![0.0; n];
            for &p in &left {
                let bp = self.bracket(&unit(p), &w);
                gz[p] = linalg::dot(&bp, &v);
            }
            let nz = linalg::norm(&gz);
            if nz == 0.0 {
                break;
            }
            z = gz.iter().map(|x| x / nz).collect();
            let mut gw = vec![0.0; n];
            for &q in &right {
                let bq = self.bracket(&z, &unit(q));
                gw[q] = linalg::dot(&bq, &v);
            }
            let nw = linalg::norm(&gw);
            if nw == 0.0 {
                break;
            }
            w = gw.iter().map(|x| x / nw).collect();
            let next = linalg::norm(&self.bracket(&z, &w));
            let done = next - value <= 1e-15 * next.max(1.0);
            value = value.max(next);
            if done {
                break;
            }
        }
        value
    }
}

pub fn graded_frame(alg: &ValidatedAlgebra) -> Result<GradedFrame, AlgebraError> {
    let series = lower_central_series(alg)?;
    let n = alg.dim();
    let k = series.degree;
    let chol = alg
        .inner0
        .clone()
        .cholesky()
        .ok_or_else(|| AlgebraError::BadInnerProduct("Cholesky factorization failed".into()))?;
    // y = Lᵀ x turns ⟨·,·⟩₀ into the Euclidean product.
    let lt = chol.l().transpose();
    let to_y = |m: &DMatrix<f64>| -> DMatrix<f64> {
        orthonormal_span(n, &linalg::matrix_columns(&(&lt * m)), RANK_TOL)
    };
    let y_series: Vec<DMatrix<f64>> = series.subspaces.iter().map(to_y).collect();

    let mut complements = Vec::with_capacity(k);
    let mut y_basis: Vec<Vec<f64>> = Vec::with_capacity(n);
    let mut levels = Vec::with_capacity(n);
    for i in 0..k {
        let expected = y_series[i].ncols() - y_series[i + 1].ncols();
        let projected: Vec<Vec<f64>> = linalg::matrix_columns(&y_series[i])
            .iter()
            .map(|v| linalg::project_out(&y_series[i + 1], v))
            .collect();
        let f = orthonormal_span(n, &projected, RANK_TOL);
        debug_assert_eq!(f.ncols(), expected);
        let cols = linalg::matrix_columns(&f);
        levels.extend(core::iter::repeat_n(i + 1, cols.len()));
        y_basis.extend(cols);
        let x = lt
            .solve_upper_triangular(&f)
            .ok_or_else(|| AlgebraError::BadInnerProduct("singular Cholesky factor".into()))?;
        complements.push(x);
    }
    let y_mat = linalg::columns_to_matrix(n, &y_basis);
    let basis = lt
        .solve_upper_triangular(&y_mat)
        .ok_or_else(|| AlgebraError::BadInnerProduct("singular Cholesky factor".into()))?;

    // Coefficient of w on adapted vector x_p is ⟨w, x_p⟩₀.
    let coeff = basis.transpose() * &alg.inner0;
    let scale = 1.0 + alg.consts.max_abs();
    let mut consts = StructureConstants::zeros(n);
    let cols = linalg::matrix_columns(&basis);
    for p in 0..n {
        for q in p + 1..n {
            let w = alg.consts.bracket(&cols[p], &cols[q]);
            let wv = nalgebra::DVector::from_column_slice(&w);
            let c = &coeff * wv;
            for m in 0..n {
                let v = if c[m].abs() < 1e-13 * scale {
                    0.0
                } else {
                    c[m]
                };
                consts.set(p, q, m, v);
                consts.set(q, p, m, -v);
            }
        }
    }
    Ok(GradedFrame {
        series,
        complements,
        basis,
        levels,
        consts,
        inner0: alg.inner0.clone(),
    })
}

/// Deepest level reached by `[F_i, F_j]`.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ContainmentEntry {
    pub i: usize,
    pub j: usize,
    /// Largest `d` with `[F_i, F_j] ⊆ L_d`; `None` when the bracket vanishes.
    pub depth: Option<usize>,
    /// `[F_i, F_j] ⊆ L_{i+j}`.
    pub standard: bool,
    /// `[F_i, F_j] ⊆ L_{i+j+1}`.
    pub strong: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ContainmentReport {
    pub entries: Vec<ContainmentEntry>,
    pub all_standard: bool,
    pub all_strong: bool,
}

impl ContainmentReport {
    pub fn get(&self, i: usize, j: usize) -> Option<&ContainmentEntry> {
        self.entries.iter().find(|e| e.i == i && e.j == j)
    }
}

pub fn bracket_level_check(frame: &GradedFrame) -> Result<ContainmentReport, AlgebraError> {
    let k = frame.degree();
    let tol = 1e-9 * (1.0 + frame.consts.max_abs());
    let mut entries = Vec::with_capacity(k * k);
    for i in 1..=k {
        for j in 1..=k {
            let mut depth: Option<usize> = None;
            for p in frame.indices_at_level(i) {
                for q in frame.indices_at_level(j) {
                    for (m, c) in frame.consts.basis_bracket(p, q).iter().enumerate() {
                        if c.abs() > tol {
                            let l = frame.level(m);
                            depth = Some(depth.map_or(l, |d| d.min(l)));
                        }
                    }
                }
            }
            let standard = depth.is_none_or(|d| d >= i + j);
            if !standard {
                return Err(AlgebraError::ContainmentViolation {
                    i,
                    j,
                    depth: depth.unwrap(),
                });
            }
            let strong = depth.is_none_or(|d| d > i + j);
            entries.push(ContainmentEntry {
                i,
                j,
                depth,
                standard,
                strong,
            });
        }
    }
    let all_strong = entries.iter().all(|e| e.strong);
    Ok(ContainmentReport {
        entries,
        all_standard: true,
        all_strong,
    })
}

/// `k` adapted basis vectors with nonzero nested bracket `[Z₁,[Z₂,[…,Z_k]…]]`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct KFoldWitness {
    /// Adapted basis indices, outermost first.
    pub indices: Vec<usize>,
    /// The nested bracket in adapted coordinates.
    pub bracket: Vec<f64>,
    pub norm: f64,
}

/// Searches tuples of level-1 basis vectors in lexicographic order; level 1
/// generates the algebra, so some k-fold bracket of them spans into `L_k ≠ 0`.
pub fn kfold_bracket_witness(frame: &GradedFrame) -> Result<KFoldWitness, AlgebraError> {
    let k = frame.degree();
    let n = frame.dim();
    let gens: Vec<usize> = frame.indices_at_level(1).collect();
    if gens.is_empty() {
        return Err(AlgebraError::WitnessNotFound(k));
    }
    let mut choice = vec![0usize; k];
    loop {
        let indices: Vec<usize> = choice.iter().map(|&c| gens[c]).collect();
        let mut v = vec![0.0; n];
        v[indices[k - 1]] = 1.0;
        for &outer in indices[..k - 1].iter().rev() {
            let mut e = vec![0.0; n];
            e[outer] = 1.0;
            v = frame.bracket(&e, &v);
        }
        let norm = linalg::norm(&v);
        if norm > 1e-9 {
            return Ok(KFoldWitness {
                indices,
                bracket: v,
                norm,
            });
        }
        // Odometer increment, last position fastest.
        let mut pos = k;
        loop {
            if pos == 0 {
                return Err(AlgebraError::WitnessNotFound(k));
            }
            pos -= 1;
            choice[pos] += 1;
            if choice[pos] < gens.len() {
                break;
            }
            choice[pos] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{builtin, validate, LieAlgebraSpec};

    fn frame_of(name: &str) -> GradedFrame {
        graded_frame(&validate(&builtin(name).unwrap()).unwrap()).unwrap()
    }

    #[test]
    fn series_dims() {
        let cases: [(&str, &[usize], usize); 5] = [
            ("heis3", &[3, 1, 0], 2),
            ("abelian:4", &[4, 0], 1),
            ("filiform:4", &[4, 2, 1, 0], 3),
            ("free2step:3", &[5, 3, 2, 0], 3),
            ("heis5", &[5, 1, 0], 2),
        ];
        for (name, dims, k) in cases {
            let alg = validate(&builtin(name).unwrap()).unwrap();
            let s = lower_central_series(&alg).unwrap();
            assert_eq!(s.dims(), dims, "{name}");
            assert_eq!(s.degree, k, "{name}");
        }
    }

    #[test]
    fn so3_not_nilpotent() {
        let spec = LieAlgebraSpec::new(3)
            .with_bracket(0, 1, 2, 1.0)
            .with_bracket(1, 2, 0, 1.0)
            .with_bracket(2, 0, 1, 1.0);
        let alg = validate(&spec).unwrap();
        assert_eq!(
            lower_central_series(&alg).unwrap_err(),
            AlgebraError::NotNilpotent { stable_dim: 3 }
        );
        assert!(graded_frame(&alg).is_err());
    }

    #[test]
    fn heisenberg_frame() {
        let f = frame_of("heis3");
        assert_eq!(f.levels, [1, 1, 2]);
        assert_eq!(f.level_dims(), [2, 1]);
        assert!((&f.basis - DMatrix::<f64>::identity(3, 3)).amax() < 1e-15);
        assert_eq!(f.consts.get(0, 1, 2), 1.0);
    }

    #[test]
    fn abelian_frame_is_input_basis() {
        let f = frame_of("abelian:2");
        assert_eq!(f.levels, [1, 1]);
        assert_eq!(f.basis, DMatrix::<f64>::identity(2, 2));
    }

    #[test]
    fn free_step3_levels() {
        let f = frame_of("free2step:3");
        assert_eq!(f.level_dims(), [2, 1, 2]);
        assert_eq!(f.levels, [1, 1, 2, 3, 3]);
    }

    #[test]
    fn non_identity_inner_product_gives_orthonormal_frame() {
        let spec = builtin("filiform:4").unwrap().with_inner0(alloc::vec![
            2.0, 0.3, 0.1, 0.0, //
            0.3, 1.0, 0.2, 0.1, //
            0.1, 0.2, 1.5, 0.4, //
            0.0, 0.1, 0.4, 1.2,
        ]);
        let alg = validate(&spec).unwrap();
        let f = graded_frame(&alg).unwrap();
        let gram = f.basis.transpose() * &alg.inner0 * &f.basis;
        assert!((gram - DMatrix::<f64>::identity(4, 4)).amax() < 1e-12);
        assert_eq!(f.levels, [1, 1, 2, 3]);
        let report = bracket_level_check(&f).unwrap();
        assert!(report.all_standard);
    }

    #[test]
    fn containment_heisenberg_and_filiform() {
        let r = bracket_level_check(&frame_of("heis3")).unwrap();
        let e = r.get(1, 1).unwrap();
        assert_eq!(e.depth, Some(2));
        assert!(e.standard && !e.strong);
        assert!(!r.all_strong);

        let r = bracket_level_check(&frame_of("filiform:4")).unwrap();
        let e = r.get(1, 2).unwrap();
        assert_eq!(e.depth, Some(3));
        assert!(!e.strong);
    }

    #[test]
    fn containment_abelian_vacuous() {
        let r = bracket_level_check(&frame_of("abelian:3")).unwrap();
        assert!(r.all_standard && r.all_strong);
        assert_eq!(r.entries[0].depth, None);
    }

    #[test]
    fn witnesses() {
        let w = kfold_bracket_witness(&frame_of("heis3")).unwrap();
        assert_eq!(w.indices, [0, 1]);
        assert_eq!(w.bracket, [0.0, 0.0, 1.0]);

        let w = kfold_bracket_witness(&frame_of("filiform:4")).unwrap();
        assert_eq!(w.indices, [0, 0, 1]);
        assert_eq!(w.bracket, [0.0, 0.0, 0.0, 1.0]);

        let w = kfold_bracket_witness(&frame_of("abelian:3")).unwrap();
        assert_eq!(w.indices, [0]);
        assert_eq!(w.norm, 1.0);
    }

    #[test]
    fn bracket_constant_heisenberg() {
        // |[aX + bY, cX + dY]| = |ad - bc| ≤ 1 for unit vectors.
        let c = frame_of("heis3").bracket_constant();
        assert!((c - 1.0).abs() < 1e-12);
        assert_eq!(frame_of("abelian:3").bracket_constant(), 0.0);
    }
}
