use serde::{Deserialize, Serialize};

use super::geometric;
use crate::error::{Error, Result};
use crate::hermitian::{inv_pd, HermitianMatrix, PdMatrix, ToleranceConfig};

fn check_list(list: &[PdMatrix]) -> Result<usize> {
    let first = list.first().ok_or(Error::Empty)?;
    for m in &list[1..] {
        first.check_same_dim(m)?;
    }
    Ok(first.dim())
}

/// `(A₁ + … + Aₙ)/n`
pub fn n_arithmetic(list: &[PdMatrix]) -> Result<PdMatrix> {
    let n = check_list(list)?;
    let sum = list
        .iter()
        .fold(HermitianMatrix::zeros(n), |acc, m| &acc + &**m);
    PdMatrix::new(sum * (1.0 / list.len() as f64))
}

/// `((A₁⁻¹ + … + Aₙ⁻¹)/n)⁻¹`
pub fn n_harmonic(list: &[PdMatrix]) -> Result<PdMatrix> {
    let n = check_list(list)?;
    let mut sum = HermitianMatrix::zeros(n);
    for m in list {
        sum = &sum + &*inv_pd(m)?;
    }
    inv_pd(&PdMatrix::new(sum * (1.0 / list.len() as f64))?)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlmConfig {
    /// Stop once every entry of the tuple moves less than `tol · max(1, scale)`
    /// in spectral norm.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for AlmConfig {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            max_iter: 500,
        }
    }
}

/// Recursive geometric mean of `n ≥ 2` positive definite matrices.
///
/// For `n = 2` this is `A # B`. For `n ≥ 3` the tuple is replaced by the
/// `(n−1)`-means of all leave-one-out sub-tuples until it stops moving; the
/// common limit is returned.
pub fn alm_geometric(list: &[PdMatrix], cfg: &AlmConfig) -> Result<PdMatrix> {
    check_list(list)?;
    match list.len() {
        0 => Err(Error::Empty),
        1 => Err(Error::InvalidParameter(
            "geometric mean needs at least two matrices".into(),
        )),
        2 => geometric(&list[0], &list[1], 0.5),
        k => {
            let scale = ToleranceConfig::scale(&list.iter().map(|m| m.norm()).collect::<Vec<_>>());
            let mut tuple = list.to_vec();
            let mut gap = f64::INFINITY;
            for _ in 0..cfg.max_iter {
                let next: Vec<PdMatrix> = (0..k)
                    .map(|skip| {
                        let rest: Vec<PdMatrix> = tuple
                            .iter()
                            .enumerate()
                            .filter(|(i, _)| *i != skip)
                            .map(|(_, m)| m.clone())
                            .collect();
                        alm_geometric(&rest, cfg)
                    })
                    .collect::<Result<_>>()?;
                gap = tuple
                    .iter()
                    .zip(&next)
                    .map(|(a, b)| a.dist(b))
                    .fold(0.0, f64::max);
                tuple = next;
                if gap < cfg.tol * scale {
                    let sum = tuple
                        .iter()
                        .fold(HermitianMatrix::zeros(tuple[0].dim()), |acc, m| &acc + &**m);
                    return PdMatrix::new(sum * (1.0 / k as f64));
                }
            }
            Err(Error::NonConvergence {
                what: "recursive geometric mean",
                iterations: cfg.max_iter,
                gap,
            })
        }
    }
}
