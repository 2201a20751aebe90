use pinchwarp_core::certify::{
    evaluate_row, CertifyError, EvaluatedRow, RowEvaluator, SectionalOptions,
};
use pinchwarp_core::FramedMetric;
use rayon::prelude::*;

/// Evaluates grid rows on the rayon pool. Results come back in grid order and
/// each row's random streams depend only on its index, so the outcome matches
/// sequential evaluation bit for bit.
#[derive(Debug, Clone, Copy, Default)]
pub struct Parallel;

impl RowEvaluator for Parallel {
    fn evaluate(
        &self,
        metric: &FramedMetric,
        grid: &[f64],
        opts: &SectionalOptions,
    ) -> Result<Vec<EvaluatedRow>, CertifyError> {
        grid.par_iter()
            .enumerate()
            .map(|(i, &r)| evaluate_row(metric, r, i, opts))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use pinchwarp_core::certify::{
        certification_grid, certify_pinching, CertifyOptions, Sequential,
    };
    use pinchwarp_core::{builtin, graded_frame, validate, WarpProfile};

    #[test]
    fn matches_sequential() {
        let frame = graded_frame(&validate(&builtin("filiform:4").unwrap()).unwrap()).unwrap();
        let profile = WarpProfile::build(frame.degree(), 0.5).unwrap();
        let m = FramedMetric::new(frame, profile, 8.0).unwrap();
        let grid = certification_grid(&profile, 4.0);
        let opts = CertifyOptions {
            sectional: SectionalOptions {
                restarts: 3,
                ..Default::default()
            },
            ..Default::default()
        };
        let a = certify_pinching(&m, &grid, &opts, &Sequential).unwrap();
        let b = certify_pinching(&m, &grid, &opts, &Parallel).unwrap();
        assert_eq!(a, b);
    }
}
