use alloc::vec;
use alloc::vec::Vec;
use nalgebra::DMatrix;

/// Which computation produced a tensor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum TensorSource {
    Oracle,
    ClosedForm,
    Limit,
    Intrinsic,
}

/// Component families of the warped-product tensor, by where `∂/∂r` appears.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum ComponentClass {
    /// All indices along `G`, `{a,b} = {c,d}`.
    GDiagonal,
    /// All indices along `G`, `{a,b} ≠ {c,d}`.
    GOffPair,
    /// `R(Y_i, ∂r, ∂r, Y_i)` and images.
    RadialDiagonal,
    /// Two radial indices, distinct `G` indices (or more than two radial).
    RadialOffDiagonal,
    /// Exactly one radial index.
    MixedRadial,
}

impl ComponentClass {
    pub const ALL: [ComponentClass; 5] = [
        ComponentClass::GDiagonal,
        ComponentClass::GOffPair,
        ComponentClass::RadialDiagonal,
        ComponentClass::RadialOffDiagonal,
        ComponentClass::MixedRadial,
    ];

    pub fn classify(a: usize, b: usize, c: usize, d: usize) -> Self {
        let idx = [a, b, c, d];
        match idx.iter().filter(|&&x| x == 0).count() {
            0 if a != b && ((a == c && b == d) || (a == d && b == c)) => Self::GDiagonal,
            0 => Self::GOffPair,
            1 => Self::MixedRadial,
            2 => {
                let mut g = idx.iter().filter(|&&x| x != 0);
                if g.next() == g.next() {
                    Self::RadialDiagonal
                } else {
                    Self::RadialOffDiagonal
                }
            }
            _ => Self::RadialOffDiagonal,
        }
    }

    pub fn trusted(self) -> bool {
        self != Self::MixedRadial
    }

    fn slot(self) -> usize {
        Self::ALL.iter().position(|&c| c == self).unwrap()
    }
}

/// Largest violations of the algebraic curvature identities.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SymmetryResiduals {
    pub antisym_first: f64,
    pub antisym_second: f64,
    pub pair: f64,
    pub bianchi: f64,
}

impl SymmetryResiduals {
    pub fn max(&self) -> f64 {
        self.antisym_first
            .max(self.antisym_second)
            .max(self.pair)
            .max(self.bianchi)
    }
}

/// Dense `N⁴` tensor `R_{abcd} = ⟨R(E_a, E_b) E_c, E_d⟩`, row-major in
/// `(a, b, c, d)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureTensor {
    dim: usize,
    data: Vec<f64>,
    pub source: TensorSource,
    /// Level of each index; 0 marks `∂/∂r`.
    pub levels: Vec<usize>,
}

impl CurvatureTensor {
    pub fn zeros(dim: usize, source: TensorSource, levels: Vec<usize>) -> Self {
        Self {
            dim,
            data: vec![0.0; dim * dim * dim * dim],
            source,
            levels,
        }
    }

    pub fn from_data(dim: usize, data: Vec<f64>, source: TensorSource, levels: Vec<usize>) -> Self {
        assert_eq!(data.len(), dim * dim * dim * dim);
        Self {
            dim,
            data,
            source,
            levels,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Flat components in `(a, b, c, d)` row-major order.
    pub fn data(&self) -> &[f64] {
        &self.data
    }

    #[inline]
    fn idx(&self, a: usize, b: usize, c: usize, d: usize) -> usize {
        ((a * self.dim + b) * self.dim + c) * self.dim + d
    }

    #[inline]
    pub fn get(&self, a: usize, b: usize, c: usize, d: usize) -> f64 {
        self.data[self.idx(a, b, c, d)]
    }

    #[inline]
    pub fn set(&mut self, a: usize, b: usize, c: usize, d: usize, v: f64) {
        let k = self.idx(a, b, c, d);
        self.data[k] = v;
    }

    /// Sets the coordinate-plane value `R_{abba} = sec` together with its
    /// antisymmetric images.
    pub fn set_plane(&mut self, a: usize, b: usize, sec: f64) {
        self.set(a, b, b, a, sec);
        self.set(b, a, a, b, sec);
        self.set(a, b, a, b, -sec);
        self.set(b, a, b, a, -sec);
    }

    /// Sectional curvature of the coordinate plane `E_a ∧ E_b`.
    pub fn sectional(&self, a: usize, b: usize) -> f64 {
        self.get(a, b, b, a)
    }

    /// `R(U, V, V, U)`; the sectional curvature when `U, V` are orthonormal.
    pub fn quadruple(&self, u: &[f64], v: &[f64]) -> f64 {
        let n = self.dim;
        let mut total = 0.0;
        for a in 0..n {
            if u[a] == 0.0 {
                continue;
            }
            for b in 0..n {
                if v[b] == 0.0 {
                    continue;
                }
                let uv = u[a] * v[b];
                for (c, &vc) in v.iter().enumerate().take(n) {
                    let w = uv * vc;
                    if w == 0.0 {
                        continue;
                    }
                    let base = self.idx(a, b, c, 0);
                    let row = &self.data[base..base + n];
                    total += w * row.iter().zip(u).map(|(r, x)| r * x).sum::<f64>();
                }
            }
        }
        total
    }

    pub fn max_abs(&self) -> f64 {
        crate::linalg::max_abs(&self.data)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// Per-class `max |self - other|`, ordered as [`ComponentClass::ALL`].
    pub fn class_deviation(&self, other: &Self) -> [f64; 5] {
        let mut out = [0.0f64; 5];
        let n = self.dim;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        let slot = ComponentClass::classify(a, b, c, d).slot();
                        let dev = (self.get(a, b, c, d) - other.get(a, b, c, d)).abs();
                        out[slot] = out[slot].max(dev);
                    }
                }
            }
        }
        out
    }

    /// Largest component outside the coordinate-plane pattern
    /// `(a,b,b,a)`, `(a,b,a,b)` with `a ≠ b`.
    pub fn max_off_pattern(&self) -> f64 {
        let n = self.dim;
        let mut best = 0.0f64;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        let diagonal = a != b && ((a == d && b == c) || (a == c && b == d));
                        if !diagonal {
                            best = best.max(self.get(a, b, c, d).abs());
                        }
                    }
                }
            }
        }
        best
    }

    pub fn symmetry_residuals(&self) -> SymmetryResiduals {
        let n = self.dim;
        let mut res = SymmetryResiduals {
            antisym_first: 0.0,
            antisym_second: 0.0,
            pair: 0.0,
            bianchi: 0.0,
        };
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        let v = self.get(a, b, c, d);
                        res.antisym_first = res.antisym_first.max((v + self.get(b, a, c, d)).abs());
                        res.antisym_second =
                            res.antisym_second.max((v + self.get(a, b, d, c)).abs());
                        res.pair = res.pair.max((v - self.get(c, d, a, b)).abs());
                        let bianchi = v + self.get(b, c, a, d) + self.get(c, a, b, d);
                        res.bianchi = res.bianchi.max(bianchi.abs());
                    }
                }
            }
        }
        res
    }

    /// Index pairs `(a, b)`, `a < b`, labelling the bivector basis.
    pub fn bivector_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.dim;
        (0..n)
            .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
            .collect()
    }

    /// Curvature operator on `Λ²`, `⟨ℛ(E_a ∧ E_b), E_c ∧ E_d⟩ = R_{abdc}`, so the
    /// diagonal holds coordinate-plane sectional curvatures. Symmetrized.
    pub fn curvature_operator(&self) -> DMatrix<f64> {
        let pairs = self.bivector_pairs();
        let m = pairs.len();
        DMatrix::from_fn(m, m, |p, q| {
            let (a, b) = pairs[p];
            let (c, d) = pairs[q];
            0.5 * (self.get(a, b, d, c) + self.get(c, d, b, a))
        })
    }
}
