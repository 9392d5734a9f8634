use serde::Serialize;

use super::OperatorMean;
use crate::error::{Error, Result};
use crate::hermitian::{HermitianMatrix, PsdMatrix, ToleranceConfig};

pub const DEFAULT_EPS_SCHEDULE: [f64; 3] = [1e-4, 1e-6, 1e-8];

/// Result of evaluating `(A+εI) σ (B+εI)` along a decreasing `ε` schedule.
#[derive(Debug, Clone, Serialize)]
pub struct PsdExtension {
    /// Value at the last (smallest) `ε`.
    pub value: HermitianMatrix,
    /// Spectral-norm gaps between consecutive iterates.
    pub gaps: Vec<f64>,
    /// Gap between the last two iterates.
    pub gap: f64,
    pub schedule: Vec<f64>,
}

impl PsdExtension {
    pub fn as_psd(&self) -> Result<PsdMatrix> {
        PsdMatrix::new(self.value.clone())
    }
}

/// Extends a mean to PSD arguments by evaluating at `A + εI`, `B + εI`.
///
/// The schedule must be strictly decreasing and positive. A gap that grows
/// between the last two steps (beyond rounding level) is reported as
/// non-convergence.
pub fn psd_extend(
    sigma: &OperatorMean,
    a: &PsdMatrix,
    b: &PsdMatrix,
    schedule: &[f64],
) -> Result<PsdExtension> {
    a.check_same_dim(b)?;
    if schedule.is_empty() {
        return Err(Error::InvalidParameter("empty epsilon schedule".into()));
    }
    if schedule.iter().any(|&e| !(e > 0.0)) || schedule.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::InvalidParameter(
            "epsilon schedule must be positive and strictly decreasing".into(),
        ));
    }
    let mut iterates = Vec::with_capacity(schedule.len());
    for &eps in schedule {
        let v = sigma.apply(&a.shifted(eps)?, &b.shifted(eps)?)?;
        iterates.push(v.into_hermitian());
    }
    let gaps: Vec<f64> = iterates.windows(2).map(|w| w[0].dist(&w[1])).collect();
    let scale = ToleranceConfig::scale(&[a.norm(), b.norm()]);
    if gaps.len() >= 2 {
        let (prev, last) = (gaps[gaps.len() - 2], gaps[gaps.len() - 1]);
        if last > prev && last > 1e-12 * scale {
            return Err(Error::NonConvergence {
                what: "psd extension",
                iterations: schedule.len(),
                gap: last,
            });
        }
    }
    let gap = gaps.last().copied().unwrap_or(0.0);
    Ok(PsdExtension {
        value: iterates.pop().expect("nonempty schedule"),
        gaps,
        gap,
        schedule: schedule.to_vec(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermitian::random_pd;
    use crate::means::SymmetricMeanMeasure;

    fn projections(theta: f64) -> (PsdMatrix, PsdMatrix) {
        let (c, s) = (theta.cos(), theta.sin());
        let p = PsdMatrix::new(HermitianMatrix::diag(&[1.0, 0.0])).unwrap();
        let q = PsdMatrix::new(
            HermitianMatrix::from_rows(&[vec![c * c, c * s], vec![c * s, s * s]]).unwrap(),
        )
        .unwrap();
        (p, q)
    }

    #[test]
    fn pd_inputs_reproduce_the_mean() {
        let a = random_pd(3, 1, 10.0).unwrap();
        let b = random_pd(3, 2, 10.0).unwrap();
        for sigma in [OperatorMean::arith(), OperatorMean::harm(), OperatorMean::geom()] {
            let ext = psd_extend(&sigma, &a.to_psd(), &b.to_psd(), &DEFAULT_EPS_SCHEDULE).unwrap();
            assert!(ext.value.dist(&sigma.apply(&a, &b).unwrap()) < 1e-6);
        }
    }

    #[test]
    fn harmonic_of_transversal_projections_vanishes() {
        let (p, q) = projections(0.7);
        let ext = psd_extend(&OperatorMean::harm(), &p, &q, &DEFAULT_EPS_SCHEDULE).unwrap();
        assert!(ext.value.norm() < 1e-5);
        assert!(ext.gaps.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn geometric_with_zero() {
        let a = PsdMatrix::new(HermitianMatrix::diag(&[2.0, 1.0])).unwrap();
        let ext = psd_extend(&OperatorMean::geom(), &a, &PsdMatrix::zeros(2), &DEFAULT_EPS_SCHEDULE)
            .unwrap();
        assert!(ext.value.norm() < 1e-3);
    }

    #[test]
    fn measure_mean_without_alpha_vanishes_on_projections() {
        let m = SymmetricMeanMeasure::new(0.0, vec![(0.5, 0.4), (2.0, 0.6)]).unwrap();
        let (p, q) = projections(0.4);
        let ext = psd_extend(&OperatorMean::from_measure(m), &p, &q, &DEFAULT_EPS_SCHEDULE).unwrap();
        assert!(ext.value.norm() < 1e-5);

        // with alpha > 0 the limit is alpha/2 (P + Q)
        let m = SymmetricMeanMeasure::new(0.4, vec![(2.0, 0.6)]).unwrap();
        let ext = psd_extend(&OperatorMean::from_measure(m), &p, &q, &DEFAULT_EPS_SCHEDULE).unwrap();
        let expected = (&*p + &*q) * 0.2;
        assert!(ext.value.dist(&expected) < 1e-5);
    }

    #[test]
    fn bad_schedule() {
        let (p, q) = projections(0.3);
        assert!(psd_extend(&OperatorMean::harm(), &p, &q, &[]).is_err());
        assert!(psd_extend(&OperatorMean::harm(), &p, &q, &[1e-6, 1e-4]).is_err());
    }
}
