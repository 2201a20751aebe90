use pinchwarp_core::certify::{
    certification_grid, certify_pinching, evaluate_row, find_s, CertifyError, CertifyOptions,
    EvaluatedRow, RowEvaluator, SectionalOptions, Sequential,
};
use pinchwarp_core::{builtin, graded_frame, validate, FramedMetric, Verdict, WarpProfile};

fn metric(name: &str, eps: f64, s: f64) -> FramedMetric {
    let frame = graded_frame(&validate(&builtin(name).unwrap()).unwrap()).unwrap();
    let profile = WarpProfile::build(frame.degree(), eps).unwrap();
    FramedMetric::new(frame, profile, s).unwrap()
}

fn light() -> CertifyOptions {
    CertifyOptions {
        sectional: SectionalOptions {
            restarts: 4,
            ..Default::default()
        },
        ..Default::default()
    }
}

/// Evaluates grid points last to first.
struct Reversed;

impl RowEvaluator for Reversed {
    fn evaluate(
        &self,
        metric: &FramedMetric,
        grid: &[f64],
        opts: &SectionalOptions,
    ) -> Result<Vec<EvaluatedRow>, CertifyError> {
        let mut rows = grid
            .iter()
            .enumerate()
            .rev()
            .map(|(i, &r)| evaluate_row(metric, r, i, opts))
            .collect::<Result<Vec<_>, _>>()?;
        rows.reverse();
        Ok(rows)
    }
}

#[test]
fn evaluation_order_does_not_matter() {
    let m = metric("heis5", 0.25, 16.0);
    let grid = certification_grid(&m.profile, 4.0);
    let a = certify_pinching(&m, &grid, &light(), &Sequential).unwrap();
    let b = certify_pinching(&m, &grid, &light(), &Reversed).unwrap();
    assert_eq!(a, b);
}

#[test]
fn seed_changes_only_sampled_values() {
    let m = metric("heis3", 0.25, 8.0);
    let grid = certification_grid(&m.profile, 4.0);
    let a = certify_pinching(&m, &grid, &light(), &Sequential).unwrap();
    let mut opts = light();
    opts.sectional.seed = 17;
    let b = certify_pinching(&m, &grid, &opts, &Sequential).unwrap();
    assert_eq!(a.global.min, b.global.min);
    assert_eq!(a.global.max, b.global.max);
    assert_eq!(a.verdict, b.verdict);
    assert!((a.global.sampled_max - b.global.sampled_max).abs() < 1e-9);
}

#[test]
fn passing_scale_keeps_passing_when_doubled() {
    for (name, eps) in [("abelian:3", 0.5), ("heis3", 0.25), ("heis5", 0.5)] {
        let template = metric(name, eps, 1.0);
        let grid = certification_grid(&template.profile, 4.0);
        let (s, _) = find_s(&template, &grid, 4096.0, &light(), &Sequential).unwrap();
        for factor in [2.0, 4.0] {
            let cert = certify_pinching(
                &template.with_scale(s * factor).unwrap(),
                &grid,
                &light(),
                &Sequential,
            )
            .unwrap();
            assert_eq!(cert.verdict, Verdict::Pass, "{name} at {}", s * factor);
        }
    }
}

#[test]
fn passing_certificate_structure() {
    let m = metric("heis3", 0.25, 1024.0);
    let grid = certification_grid(&m.profile, 4.0);
    let cert = certify_pinching(&m, &grid, &CertifyOptions::default(), &Sequential).unwrap();
    assert!(cert.passed());
    assert_eq!(cert.theoretical_lower_bound, 4.0);
    assert!(cert.sampling.sandwich_ok);
    assert!(cert.sampling.restart_gap < 1e-6);
    for row in &cert.rows {
        assert!(row.sec_max <= -1.0 + cert.tol);
        assert!(row.lambda_min >= -5.0625 - cert.tol);
    }
    for tail in cert.tails.iter() {
        assert!(tail.monotone && tail.limit_within_targets);
        assert!(tail
            .deviation
            .windows(2)
            .all(|w| w[1] <= w[0] * (1.0 + 1e-9) + 1e-12));
    }
    // Left tail limit is −k² on every plane.
    assert_eq!(cert.tails.left.limit_min, -4.0);
    assert_eq!(cert.tails.left.limit_max, -4.0);
    assert!(cert.global.ratio >= 4.0 && cert.global.ratio <= 5.0625);
}

#[test]
fn filiform_sweep_row_in_range() {
    let frame = graded_frame(&validate(&builtin("filiform:4").unwrap()).unwrap()).unwrap();
    assert_eq!(frame.degree(), 3);
    let row =
        pinchwarp_core::certify::sweep_row(&frame, 0.5, 4096.0, &light(), &Sequential).unwrap();
    assert!(row.pass, "{row:?}");
    let ratio = row.ratio.unwrap();
    assert!((9.0 - 1e-6..=12.25 + 1e-6).contains(&ratio), "{ratio}");
    assert!(row.within_bounds);
}
