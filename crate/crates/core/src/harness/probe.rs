use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::hermitian::{
    random_hermitian_with, random_pd_with, random_psd_with, random_vector_with, spectral_decompose, CMatrix, CVector,
    HermitianMatrix, PdMatrix,
};

/// Input of a single evaluation.
#[derive(Debug, Clone)]
pub(crate) enum Probe {
    Matrix(MatrixProbe),
    Scalar { x: f64, y: f64 },
}

#[derive(Debug, Clone)]
pub(crate) struct MatrixProbe {
    pub a: PdMatrix,
    pub b: PdMatrix,
    pub xi: CVector,
    pub eta: CVector,
    /// Weight of the functional `X ↦ tr(WX)`.
    pub weight: HermitianMatrix,
    pub family: &'static str,
}

/// Independent stream for trial `trial` at dimension `dim`.
pub(crate) fn trial_rng(seed: u64, dim: usize, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((dim as u64) << 32) | trial as u64);
    rng
}

fn log_uniform<R: Rng + ?Sized>(rng: &mut R, lo_exp: f64, hi_exp: f64) -> f64 {
    10f64.powf(rng.random_range(lo_exp..hi_exp))
}

fn random_unitary<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Result<CMatrix> {
    Ok(spectral_decompose(&random_hermitian_with(rng, dim))?.eigenvectors)
}

fn rotate(u: &CMatrix, d: &HermitianMatrix) -> HermitianMatrix {
    HermitianMatrix::symmetrized(u * d.as_matrix() * u.adjoint())
}

/// `P = diag(1, 0)` and the rank-one projection onto `(cos θ, sin θ)`.
pub(crate) fn projection_pair(theta: f64) -> (HermitianMatrix, HermitianMatrix) {
    let (c, s) = (theta.cos(), theta.sin());
    (
        HermitianMatrix::diag(&[1.0, 0.0]),
        HermitianMatrix::from_rows(&[vec![c * c, c * s], vec![c * s, s * s]])
            .expect("2x2 rows"),
    )
}

/// `s·(P + εI)` and `s·(Q(θ) + εI)` on `ℂ²`.
pub(crate) fn regularized_projections(theta: f64, eps: f64, scale: f64) -> Result<(PdMatrix, PdMatrix)> {
    let (p, q) = projection_pair(theta);
    let shift = HermitianMatrix::scaled_identity(2, eps);
    Ok((
        PdMatrix::new((&p + &shift) * scale)?,
        PdMatrix::new((&q + &shift) * scale)?,
    ))
}

/// Pair from the `lemma22` family embedded into `dim` dimensions: the 2×2
/// block carries the projection pair, the complement a shared diagonal, and
/// the whole pair is conjugated by a random unitary.
fn projection_family<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Result<(PdMatrix, PdMatrix)> {
    let theta = rng.random_range(0.05..1.5);
    let eps = log_uniform(rng, -2.9, -1.0);
    let scale = log_uniform(rng, -1.0, 1.0);
    let (p, q) = projection_pair(theta);
    let tail: Vec<f64> = (2..dim).map(|_| rng.random_range(0.0..1.0)).collect();
    let embed = |m: &HermitianMatrix| {
        let mut full = CMatrix::zeros(dim, dim);
        for i in 0..2 {
            for j in 0..2 {
                full[(i, j)] = m.get(i, j);
            }
        }
        for (k, &t) in tail.iter().enumerate() {
            full[(k + 2, k + 2)] = Complex64::new(t, 0.0);
        }
        for i in 0..dim {
            full[(i, i)] += Complex64::new(eps, 0.0);
        }
        HermitianMatrix::symmetrized(full) * scale
    };
    let u = random_unitary(rng, dim)?;
    Ok((PdMatrix::new(rotate(&u, &embed(&p)))?, PdMatrix::new(rotate(&u, &embed(&q)))?))
}

/// Eigenvalues log-spaced over the full condition budget, in independent
/// random bases.
fn spread_family<R: Rng + ?Sized>(rng: &mut R, dim: usize, cond_cap: f64) -> Result<(PdMatrix, PdMatrix)> {
    let scale = log_uniform(rng, -1.0, 1.0);
    let half = (cond_cap * (1.0 - 1e-6)).log10() / 2.0;
    let spectrum = |flip: bool| -> Vec<f64> {
        (0..dim)
            .map(|i| {
                let t = if dim == 1 { 0.5 } else { i as f64 / (dim - 1) as f64 };
                let t = if flip { 1.0 - t } else { t };
                scale * 10f64.powf(-half + 2.0 * half * t)
            })
            .collect()
    };
    let u = random_unitary(rng, dim)?;
    let v = random_unitary(rng, dim)?;
    Ok((
        PdMatrix::new(rotate(&u, &HermitianMatrix::diag(&spectrum(false))))?,
        PdMatrix::new(rotate(&v, &HermitianMatrix::diag(&spectrum(true))))?,
    ))
}

fn commuting_family<R: Rng + ?Sized>(rng: &mut R, dim: usize, cond_cap: f64) -> Result<(PdMatrix, PdMatrix)> {
    let half = (cond_cap * (1.0 - 1e-6)).log10() / 2.0;
    let mut spectrum = || -> Vec<f64> { (0..dim).map(|_| log_uniform(rng, -half, half)).collect() };
    let (da, db) = (spectrum(), spectrum());
    let u = random_unitary(rng, dim)?;
    Ok((
        PdMatrix::new(rotate(&u, &HermitianMatrix::diag(&da)))?,
        PdMatrix::new(rotate(&u, &HermitianMatrix::diag(&db)))?,
    ))
}

fn random_family<R: Rng + ?Sized>(rng: &mut R, dim: usize, cond_cap: f64) -> Result<(PdMatrix, PdMatrix)> {
    let a = random_pd_with(rng, dim, cond_cap)?;
    let b = random_pd_with(rng, dim, cond_cap)?;
    let (sa, sb) = (log_uniform(rng, -1.0, 1.0), log_uniform(rng, -1.0, 1.0));
    Ok((a.scaled(sa)?, b.scaled(sb)?))
}

/// Builds the probe of trial `trial` at dimension `dim`. Trials cycle
/// through random, projection, spread and commuting pairs. For `ordered`
/// probes the pair `(X, Y)` becomes `A = X + Y ≥ B = X`.
pub(crate) fn matrix_probe(
    seed: u64,
    dim: usize,
    trial: usize,
    cond_cap: f64,
    ordered: bool,
) -> Result<MatrixProbe> {
    let mut rng = trial_rng(seed, dim, trial);
    let (family, (x, y)) = match (trial % 4, dim) {
        (1, d) if d >= 2 => ("projection", projection_family(&mut rng, dim)?),
        (2, _) => ("spread", spread_family(&mut rng, dim, cond_cap)?),
        (3, _) => ("commuting", commuting_family(&mut rng, dim, cond_cap)?),
        _ => ("random", random_family(&mut rng, dim, cond_cap)?),
    };
    let xi = random_vector_with(&mut rng, dim);
    let eta = random_vector_with(&mut rng, dim);
    let weight = random_psd_with(&mut rng, dim, dim)?.into_hermitian();
    let (a, b) = if ordered {
        (PdMatrix::new(&*x + &*y)?, x)
    } else {
        (x, y)
    };
    Ok(MatrixProbe {
        a,
        b,
        xi,
        eta,
        weight,
        family,
    })
}

/// Structured probes tried before random search: regularized projection
/// pairs on `ℂ²` over grids of angle, regularization and scale.
pub(crate) fn structured_probes(ordered: bool) -> Result<Vec<MatrixProbe>> {
    let mut out = Vec::new();
    for &theta in &[0.05, 0.1, 0.2, 0.4, 0.8, 1.2] {
        for &eps in &[1e-2, 1e-3] {
            for &scale in &[1.0, 10.0, 0.1] {
                let (x, y) = regularized_projections(theta, eps, scale)?;
                let (a, b) = if ordered {
                    (PdMatrix::new(&*x + &*y)?, x)
                } else {
                    (x, y)
                };
                let e = |i: usize| {
                    let mut v = CVector::zeros(2);
                    v[i] = Complex64::new(1.0, 0.0);
                    v
                };
                out.push(MatrixProbe {
                    a,
                    b,
                    xi: e(0),
                    eta: e(1),
                    weight: HermitianMatrix::identity(2),
                    family: "lemma22",
                });
            }
        }
    }
    Ok(out)
}

/// Grid `2^{i/2}`, `i = −12..=12`, for scalar tests.
pub(crate) fn scalar_grid() -> Vec<f64> {
    (-12..=12).map(|i| 2f64.powf(i as f64 / 2.0)).collect()
}
