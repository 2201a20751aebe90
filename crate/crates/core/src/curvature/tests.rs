use super::*;
use crate::algebra::{builtin, graded_frame, validate};
use crate::warp::uniform_grid;

fn metric(name: &str, eps: f64, s: f64) -> FramedMetric {
    let frame = graded_frame(&validate(&builtin(name).unwrap()).unwrap()).unwrap();
    let profile = WarpProfile::build(frame.degree(), eps).unwrap();
    FramedMetric::new(frame, profile, s).unwrap()
}

#[test]
fn degree_mismatch_rejected() {
    let frame = graded_frame(&validate(&builtin("heis3").unwrap()).unwrap()).unwrap();
    let profile = WarpProfile::build(3, 0.25).unwrap();
    assert!(matches!(
        FramedMetric::new(frame.clone(), profile, 1.0),
        Err(MetricError::DegreeMismatch { .. })
    ));
    let profile = WarpProfile::build(2, 0.25).unwrap();
    assert!(matches!(
        FramedMetric::new(frame, profile, 0.0),
        Err(MetricError::BadScale(_))
    ));
}

#[test]
fn structure_functions_heisenberg() {
    let m = metric("heis3", 0.25, 4.0);
    let rho = m.profile.rho;
    let t = structure_functions(&m, rho + 1.5);
    assert!((t.get(1, 2, 3) - 0.25).abs() < 1e-15);
    assert!((t.get(2, 1, 3) + 0.25).abs() < 1e-15);
    assert!((t.get(0, 3, 3) - 2.0).abs() < 1e-15);
    // r ≤ -ρ: all h = e^{-2r}, so γ = e^{2r}/s.
    let r = -rho - 3.0;
    let t = structure_functions(&m, r);
    assert!((t.get(1, 2, 3) - libm::exp(2.0 * r) / 4.0).abs() < 1e-15);
}

#[test]
fn structure_functions_abelian() {
    let m = metric("abelian:3", 0.25, 2.0);
    let t = structure_functions(&m, 0.3);
    for a in 1..4 {
        assert_eq!(t.get(0, a, a), 1.0);
        for b in 1..4 {
            for c in 1..4 {
                assert_eq!(t.get(a, b, c), 0.0);
            }
        }
    }
}

/// Constant curvature κ: R_{abcd} = κ(δ_bc δ_ad - δ_ac δ_bd).
fn constant_curvature(dim: usize, kappa: f64) -> CurvatureTensor {
    let mut t = CurvatureTensor::zeros(dim, TensorSource::Limit, vec![0; dim]);
    for a in 0..dim {
        for b in 0..dim {
            for c in 0..dim {
                for d in 0..dim {
                    let v = f64::from(u8::from(b == c && a == d))
                        - f64::from(u8::from(a == c && b == d));
                    t.set(a, b, c, d, kappa * v);
                }
            }
        }
    }
    t
}

#[test]
fn abelian_is_hyperbolic() {
    for n in [1, 2, 4] {
        for s in [0.5, 1.0, 32.0] {
            let m = metric(&alloc::format!("abelian:{n}"), 0.3, s);
            let expected = constant_curvature(n + 1, -1.0);
            for r in [-7.0, -1.0, 0.0, 0.4, 9.0] {
                let oracle = full_curvature(&m, r);
                assert!(oracle.max_abs_diff(&expected) < 1e-12, "n={n} s={s} r={r}");
                assert!(closed_form_curvature(&m, r).max_abs_diff(&expected) < 1e-12);
                assert!(limit_tensor(&m, r).max_abs_diff(&expected) < 1e-12);
            }
        }
    }
}

#[test]
fn heisenberg_closed_forms() {
    for s in [1.0, 3.0, 32.0] {
        let m = metric("heis3", 0.25, s);
        let r = m.profile.rho + 1.0;
        let oracle = full_curvature(&m, r);
        // Milnor: sec(X, Y) = -3λ²/4 with λ = 1/s, plus the warping term -1.
        assert!((oracle.sectional(1, 2) - (-0.75 / (s * s) - 1.0)).abs() < 1e-12);
        assert!((oracle.sectional(3, 0) + 4.0).abs() < 1e-12);
        // sec(X, Z) = λ²/4 - u₁'u₂'.
        assert!((oracle.sectional(1, 3) - (0.25 / (s * s) - 2.0)).abs() < 1e-12);
    }
}

#[test]
fn intrinsic_heisenberg() {
    let m = metric("heis3", 0.25, 7.0);
    let rho = m.profile.rho;
    let t = gr_curvature(&m, rho);
    assert!((t.sectional(0, 1) + 0.75).abs() < 1e-14);
    assert!((t.sectional(0, 2) - 0.25).abs() < 1e-14);
    assert!((t.sectional(1, 2) - 0.25).abs() < 1e-14);
    let far = gr_curvature(&m, rho + 10.0);
    assert!(t.max_abs_diff(&far) < 1e-12);
    assert_eq!(
        gr_curvature(&metric("abelian:3", 0.25, 1.0), 0.0).max_abs(),
        0.0
    );
}

#[test]
fn limit_tensor_heisenberg() {
    let m = metric("heis3", 0.25, 1.0);
    let t = limit_tensor(&m, m.profile.rho + 0.5);
    assert_eq!(
        [t.sectional(1, 2), t.sectional(1, 3), t.sectional(2, 3)],
        [-1.0, -2.0, -2.0]
    );
    assert_eq!(
        [t.sectional(1, 0), t.sectional(2, 0), t.sectional(3, 0)],
        [-1.0, -1.0, -4.0]
    );
    let left = limit_tensor(&m, -m.profile.rho - 0.5);
    for (a, b) in left.bivector_pairs() {
        assert_eq!(left.sectional(a, b), -4.0);
    }
}

#[test]
fn closed_form_radial_in_ramp() {
    let m = metric("heis3", 0.25, 2.0);
    let d = m.profile.log_derivs(1, 0.0);
    let p = closed_form_curvature(&m, 0.0);
    assert!((p.sectional(1, 0) + (d.du * d.du - d.d2u)).abs() < 1e-15);
    let o = full_curvature(&m, 0.0);
    assert!((o.sectional(1, 0) - p.sectional(1, 0)).abs() < 1e-12);
}

#[test]
fn symmetries_of_oracle_on_builtins() {
    for name in [
        "abelian:3",
        "heis3",
        "heis5",
        "filiform:4",
        "free2step:3",
        "free2step:4",
    ] {
        let m = metric(name, 0.25, 3.0);
        for r in [-m.profile.rho - 1.0, -0.7, 0.0, 1.3, m.profile.rho + 2.0] {
            let res = full_curvature(&m, r).symmetry_residuals();
            assert!(res.max() < 1e-10, "{name} r={r}: {res:?}");
        }
    }
}

#[test]
fn analytic_r_derivative_matches_central_difference() {
    let m = metric("free2step:3", 0.5, 2.0);
    let delta = 1e-4;
    for r in [-2.0, -0.3, 0.0, 0.9, 2.2] {
        let (_, dconn) = connection(&m, r);
        let (plus, _) = connection(&m, r + delta);
        let (minus, _) = connection(&m, r - delta);
        for (idx, d) in dconn.iter().enumerate() {
            let fd = (plus[idx] - minus[idx]) / (2.0 * delta);
            assert!(
                (fd - d).abs() <= 1e-6 * d.abs().max(1.0),
                "r={r} idx={idx}: {fd} vs {d}"
            );
        }
    }
}

#[test]
fn trusted_classes_agree_in_exponential_regions() {
    for name in ["heis3", "heis5", "filiform:4", "free2step:3"] {
        let m = metric(name, 0.25, 2.0);
        let rho = m.profile.rho;
        let mut grid = uniform_grid(rho, rho + 3.0, 0.5);
        grid.extend(uniform_grid(-rho - 3.0, -rho, 0.5));
        let rep = compare_formulas(&m, &grid);
        for c in &rep.classes {
            if c.class != ComponentClass::MixedRadial {
                assert!(c.max_abs < 1e-8, "{name}: {c:?}");
            }
        }
        assert!(!rep.class(ComponentClass::MixedRadial).trusted);
    }
}

#[test]
fn abelian_all_classes_agree() {
    let m = metric("abelian:4", 0.25, 1.0);
    let rep = compare_formulas(&m, &uniform_grid(-5.0, 5.0, 0.5));
    assert!(rep.classes.iter().all(|c| c.max_abs < 1e-12));
    assert!(rep.limit_decay_ratio.is_none());
}

#[test]
fn limit_deviation_halves_with_doubled_scale() {
    let m = metric("heis3", 0.25, 64.0);
    let rho = m.profile.rho;
    let rep = compare_formulas(&m, &uniform_grid(-rho - 2.0, rho + 2.0, 0.25));
    let ratio = rep.limit_decay_ratio.unwrap();
    assert!((ratio - 0.5).abs() < 0.05, "ratio {ratio}");
}

#[test]
fn classification() {
    use ComponentClass::*;
    assert_eq!(ComponentClass::classify(1, 2, 2, 1), GDiagonal);
    assert_eq!(ComponentClass::classify(1, 2, 1, 3), GOffPair);
    assert_eq!(ComponentClass::classify(0, 1, 2, 3), MixedRadial);
    assert_eq!(ComponentClass::classify(2, 0, 0, 2), RadialDiagonal);
    assert_eq!(ComponentClass::classify(0, 2, 0, 3), RadialOffDiagonal);
    assert_eq!(ComponentClass::classify(0, 0, 1, 1), RadialDiagonal);
}

#[test]
fn curvature_operator_diagonal_is_sectional() {
    let m = metric("heis5", 0.25, 2.0);
    let t = full_curvature(&m, 0.4);
    let op = t.curvature_operator();
    for (p, (a, b)) in t.bivector_pairs().into_iter().enumerate() {
        assert_eq!(op[(p, p)], t.sectional(a, b));
    }
    let mut u = vec![0.0; t.dim()];
    let mut v = vec![0.0; t.dim()];
    u[1] = 1.0;
    v[4] = 1.0;
    assert!((t.quadruple(&u, &v) - t.sectional(1, 4)).abs() < 1e-15);
}
