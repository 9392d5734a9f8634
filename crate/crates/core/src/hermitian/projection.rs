use std::ops::Deref;

use super::calculus::spectral_decompose;
use super::{HermitianMatrix, PsdMatrix, ToleranceConfig};
use crate::error::{Error, Result};

/// An orthogonal projection `P = P² = P*`.
#[derive(Debug, Clone, PartialEq)]
pub struct OrthProjection {
    base: HermitianMatrix,
}

impl OrthProjection {
    pub fn new(base: HermitianMatrix, cfg: &ToleranceConfig) -> Result<Self> {
        let idem = base.square().max_abs_diff(&base);
        let ev = base.eigenvalues()?;
        let spectral = ev
            .iter()
            .map(|&l| l.abs().min((l - 1.0).abs()))
            .fold(0.0, f64::max);
        let defect = idem.max(spectral);
        if defect > cfg.tol_proj {
            return Err(Error::NotProjection { defect });
        }
        Ok(Self { base })
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            base: HermitianMatrix::zeros(n),
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            base: HermitianMatrix::identity(n),
        }
    }

    /// Dimension of the range.
    pub fn rank(&self) -> usize {
        self.base.trace().round() as usize
    }

    pub fn as_hermitian(&self) -> &HermitianMatrix {
        &self.base
    }

    pub fn into_hermitian(self) -> HermitianMatrix {
        self.base
    }
}

impl Deref for OrthProjection {
    type Target = HermitianMatrix;
    fn deref(&self) -> &HermitianMatrix {
        &self.base
    }
}

/// Projection onto the span of eigenvectors whose eigenvalue exceeds
/// `tol_proj · λ_max`. The zero matrix has zero support.
pub fn support_projection(x: &PsdMatrix, cfg: &ToleranceConfig) -> Result<OrthProjection> {
    let dec = spectral_decompose(x)?;
    let top = *dec.eigenvalues.last().expect("nonempty");
    if top <= 0.0 {
        return Ok(OrthProjection::zeros(x.dim()));
    }
    let threshold = cfg.tol_proj * top;
    Ok(OrthProjection {
        base: dec.projector(|l| l > threshold),
    })
}

/// Jordan decomposition `S = S₊ − S₋` with `S₊ S₋ = 0`.
pub fn jordan_decompose(s: &HermitianMatrix) -> Result<(PsdMatrix, PsdMatrix)> {
    let dec = spectral_decompose(s)?;
    let plus: Vec<f64> = dec.eigenvalues.iter().map(|&l| l.max(0.0)).collect();
    let minus: Vec<f64> = dec.eigenvalues.iter().map(|&l| (-l).max(0.0)).collect();
    let min_plus = plus.iter().cloned().fold(f64::INFINITY, f64::min);
    let min_minus = minus.iter().cloned().fold(f64::INFINITY, f64::min);
    Ok((
        PsdMatrix {
            base: dec.recompose(&plus),
            min_eig: min_plus,
        },
        PsdMatrix {
            base: dec.recompose(&minus),
            min_eig: min_minus,
        },
    ))
}

/// `P ∧ Q`, the projection onto `range(P) ∩ range(Q)`, computed as the
/// spectral projection of `P + Q` for the eigenvalue 2.
pub fn projection_meet(
    p: &OrthProjection,
    q: &OrthProjection,
    cfg: &ToleranceConfig,
) -> Result<OrthProjection> {
    p.check_same_dim(q)?;
    let sum = p.as_hermitian() + q.as_hermitian();
    let dec = spectral_decompose(&sum)?;
    let threshold = 2.0 - 4.0 * cfg.tol_proj;
    Ok(OrthProjection {
        base: dec.projector(|l| l >= threshold),
    })
}
