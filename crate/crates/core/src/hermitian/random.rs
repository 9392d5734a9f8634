use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::{CMatrix, CVector, HermitianMatrix, PdMatrix, PsdMatrix};
use crate::error::{Error, Result};

pub(crate) fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

fn gaussian_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> CMatrix {
    let mut m = CMatrix::zeros(rows, cols);
    // Fill row-major so the stream layout does not depend on storage order.
    for i in 0..rows {
        for j in 0..cols {
            m[(i, j)] = gaussian(rng);
        }
    }
    m
}

pub(crate) fn random_hermitian_with<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> HermitianMatrix {
    HermitianMatrix::symmetrized(gaussian_matrix(rng, dim, dim))
}

/// Random positive definite `G G* + δI`, normalized to unit spectral norm,
/// with `δ` chosen so the condition number does not exceed `cond_cap`.
pub fn random_pd_with<R: Rng + ?Sized>(rng: &mut R, dim: usize, cond_cap: f64) -> Result<PdMatrix> {
    if dim == 0 {
        return Err(Error::InvalidParameter("dim must be at least 1".into()));
    }
    if !(cond_cap > 1.0) {
        return Err(Error::InvalidParameter(format!(
            "cond_cap must exceed 1, got {cond_cap}"
        )));
    }
    let g = gaussian_matrix(rng, dim, dim);
    let gram = HermitianMatrix::symmetrized(&g * g.adjoint()) * (1.0 / dim as f64);
    let ev = gram.eigenvalues()?;
    let (lo, hi) = (ev[0].max(0.0), ev[dim - 1]);
    // The 1e-6 slack keeps the realized condition number strictly below the cap.
    let target = cond_cap * (1.0 - 1e-6);
    let delta = ((hi - target * lo) / (target - 1.0)).max(1e-12 * hi);
    let shifted = &gram + &HermitianMatrix::scaled_identity(dim, delta);
    let scaled = shifted * (1.0 / (hi + delta));
    let min_eig = (lo + delta) / (hi + delta);
    Ok(PdMatrix {
        base: scaled,
        min_eig,
    })
}

pub fn random_pd(dim: usize, seed: u64, cond_cap: f64) -> Result<PdMatrix> {
    random_pd_with(&mut seeded_rng(seed), dim, cond_cap)
}

/// Random PSD matrix `G G*` of the given rank (rank ≤ dim), unit norm.
pub fn random_psd_with<R: Rng + ?Sized>(rng: &mut R, dim: usize, rank: usize) -> Result<PsdMatrix> {
    if rank == 0 {
        return Ok(PsdMatrix::zeros(dim));
    }
    let g = gaussian_matrix(rng, dim, rank.min(dim));
    let gram = HermitianMatrix::symmetrized(&g * g.adjoint());
    let n = gram.norm();
    PsdMatrix::new(gram * (1.0 / n))
}

pub fn random_vector_with<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> CVector {
    CVector::from_iterator(dim, (0..dim).map(|_| gaussian(rng)))
}

pub fn random_vector(dim: usize, seed: u64) -> CVector {
    random_vector_with(&mut seeded_rng(seed), dim)
}
