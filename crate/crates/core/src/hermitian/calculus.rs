use nalgebra::linalg::SymmetricEigen;

use super::{CMatrix, HermitianMatrix, PdMatrix, ToleranceConfig};
use crate::error::{Error, Result};

/// Condition-number cap for congruence transforms.
pub const CONGRUENCE_COND_CAP: f64 = 1e12;

/// Eigen-decomposition `A = U diag(λ) U*` with ascending eigenvalues.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    pub eigenvalues: Vec<f64>,
    /// Columns are orthonormal eigenvectors.
    pub eigenvectors: CMatrix,
}

impl SpectralDecomposition {
    /// `U diag(values) U*`.
    pub fn recompose(&self, values: &[f64]) -> HermitianMatrix {
        let u = &self.eigenvectors;
        let n = u.nrows();
        let mut scaled = u.clone();
        for (j, v) in values.iter().enumerate() {
            for i in 0..n {
                scaled[(i, j)] *= *v;
            }
        }
        HermitianMatrix::symmetrized(scaled * u.adjoint())
    }

    /// Spectral projection onto eigenvectors selected by `keep`.
    pub fn projector(&self, keep: impl Fn(f64) -> bool) -> HermitianMatrix {
        let values: Vec<f64> = self
            .eigenvalues
            .iter()
            .map(|&l| if keep(l) { 1.0 } else { 0.0 })
            .collect();
        self.recompose(&values)
    }
}

/// Hermitian eigen-decomposition with a reconstruction check.
pub fn spectral_decompose(a: &HermitianMatrix) -> Result<SpectralDecomposition> {
    let n = a.dim();
    let m = a.as_matrix().clone();
    let eig = SymmetricEigen::try_new(m, f64::EPSILON, 1000 * n.max(1)).ok_or_else(|| {
        Error::EigenFailure {
            dim: n,
            detail: "iteration limit reached".into(),
        }
    })?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let eigenvalues: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let eigenvectors = CMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
    let dec = SpectralDecomposition {
        eigenvalues,
        eigenvectors,
    };

    let tol = ToleranceConfig::default().tol_recon;
    let scale = dec
        .eigenvalues
        .iter()
        .fold(1.0f64, |acc, v| acc.max(v.abs()));
    let recon = dec.recompose(&dec.eigenvalues);
    let err = (recon.as_matrix() - a.as_matrix()).norm();
    if !(err <= tol * scale) {
        return Err(Error::EigenFailure {
            dim: n,
            detail: format!("reconstruction error {err:e} exceeds {:e}", tol * scale),
        });
    }
    let gram = dec.eigenvectors.adjoint() * &dec.eigenvectors;
    let orth = (gram - CMatrix::identity(n, n)).norm();
    if !(orth <= tol) {
        return Err(Error::EigenFailure {
            dim: n,
            detail: format!("eigenvectors not orthonormal (defect {orth:e})"),
        });
    }
    Ok(dec)
}

/// Where a scalar function may be evaluated on a spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Domain {
    /// Open half line `(0, ∞)`.
    Positive,
    /// Closed half line `[0, ∞)`; tiny negative eigenvalues from rounding are
    /// clamped to zero.
    NonNegative,
    /// Whole real line.
    Real,
}

impl Domain {
    fn describe(self) -> &'static str {
        match self {
            Domain::Positive => "a function on (0,inf)",
            Domain::NonNegative => "a function on [0,inf)",
            Domain::Real => "a function on R",
        }
    }
}

/// Functional calculus `f(A) = U diag(f(λᵢ)) U*`.
pub fn apply_function(
    a: &HermitianMatrix,
    domain: Domain,
    f: impl Fn(f64) -> f64,
) -> Result<HermitianMatrix> {
    let dec = spectral_decompose(a)?;
    apply_on_spectrum(&dec, domain, f)
}

pub(crate) fn apply_on_spectrum(
    dec: &SpectralDecomposition,
    domain: Domain,
    f: impl Fn(f64) -> f64,
) -> Result<HermitianMatrix> {
    let scale = dec
        .eigenvalues
        .iter()
        .fold(1.0f64, |acc, v| acc.max(v.abs()));
    let slack = ToleranceConfig::default().tol_psd * scale;
    let mut values = Vec::with_capacity(dec.eigenvalues.len());
    for &l in &dec.eigenvalues {
        let x = match domain {
            Domain::Positive if l <= 0.0 => {
                return Err(Error::Domain {
                    eigenvalue: l,
                    function: domain.describe().into(),
                })
            }
            Domain::NonNegative if l < -slack => {
                return Err(Error::Domain {
                    eigenvalue: l,
                    function: domain.describe().into(),
                })
            }
            Domain::NonNegative => l.max(0.0),
            _ => l,
        };
        let y = f(x);
        if !y.is_finite() {
            return Err(Error::Domain {
                eigenvalue: l,
                function: format!("{} (non-finite value {y})", domain.describe()),
            });
        }
        values.push(y);
    }
    Ok(dec.recompose(&values))
}

/// Positive square root of a positive definite matrix.
pub fn sqrt_pd(a: &PdMatrix) -> Result<PdMatrix> {
    let dec = spectral_decompose(a)?;
    let out = apply_on_spectrum(&dec, Domain::Positive, f64::sqrt)?;
    Ok(PdMatrix {
        base: out,
        min_eig: dec.eigenvalues[0].sqrt(),
    })
}

/// Inverse of a positive definite matrix via its spectrum.
pub fn inv_pd(a: &PdMatrix) -> Result<PdMatrix> {
    let dec = spectral_decompose(a)?;
    let out = apply_on_spectrum(&dec, Domain::Positive, f64::recip)?;
    let top = *dec.eigenvalues.last().expect("nonempty");
    Ok(PdMatrix {
        base: out,
        min_eig: 1.0 / top,
    })
}

/// Inverse square root `A^{-1/2}`.
pub(crate) fn inv_sqrt_pd(a: &PdMatrix) -> Result<PdMatrix> {
    let dec = spectral_decompose(a)?;
    let out = apply_on_spectrum(&dec, Domain::Positive, |x| 1.0 / x.sqrt())?;
    let top = *dec.eigenvalues.last().expect("nonempty");
    Ok(PdMatrix {
        base: out,
        min_eig: 1.0 / top.sqrt(),
    })
}

/// Congruence `X* A X` for an invertible (not necessarily Hermitian) `X`.
pub fn congruence(x: &CMatrix, a: &HermitianMatrix) -> Result<HermitianMatrix> {
    if x.nrows() != x.ncols() {
        return Err(Error::NotSquare {
            rows: x.nrows(),
            cols: x.ncols(),
        });
    }
    if x.nrows() != a.dim() {
        return Err(Error::DimensionMismatch {
            left: x.nrows(),
            right: a.dim(),
        });
    }
    let sv = x.clone().singular_values();
    let smax = sv.iter().cloned().fold(0.0f64, f64::max);
    let smin = sv.iter().cloned().fold(f64::INFINITY, f64::min);
    let cond = if smin > 0.0 { smax / smin } else { f64::INFINITY };
    if !(cond <= CONGRUENCE_COND_CAP) {
        return Err(Error::IllConditioned {
            cond,
            cap: CONGRUENCE_COND_CAP,
        });
    }
    Ok(HermitianMatrix::symmetrized(
        x.adjoint() * a.as_matrix() * x,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use crate::hermitian::random::{random_hermitian_with, seeded_rng};

    fn real_matrix(rows: &[&[f64]]) -> CMatrix {
        let n = rows.len();
        let m = rows.first().map_or(0, |r| r.len());
        CMatrix::from_fn(n, m, |i, j| Complex64::new(rows[i][j], 0.0))
    }

    #[test]
    fn diagonal_spectrum() {
        let d = spectral_decompose(&HermitianMatrix::diag(&[1.0, 2.0])).unwrap();
        assert_eq!(d.eigenvalues, vec![1.0, 2.0]);
        let id = CMatrix::identity(2, 2);
        assert!((d.eigenvectors.map(|z| z.norm()) - id.map(|z| z.norm())).norm() < 1e-14);
    }

    #[test]
    fn pauli_x_spectrum() {
        let x = HermitianMatrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let d = spectral_decompose(&x).unwrap();
        assert!((d.eigenvalues[0] + 1.0).abs() < 1e-14);
        assert!((d.eigenvalues[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn random_reconstruction() {
        let mut rng = seeded_rng(11);
        let a = random_hermitian_with(&mut rng, 5);
        let d = spectral_decompose(&a).unwrap();
        let r = d.recompose(&d.eigenvalues);
        assert!((r.as_matrix() - a.as_matrix()).norm() < 1e-10);
        assert!(d.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn identity_function_is_identity() {
        let mut rng = seeded_rng(3);
        let a = random_hermitian_with(&mut rng, 4);
        let fa = apply_function(&a, Domain::Real, |x| x).unwrap();
        assert!(fa.max_abs_diff(&a) < 1e-12);
    }

    #[test]
    fn reciprocal_on_diagonal() {
        let a = HermitianMatrix::diag(&[2.0, 4.0]);
        let fa = apply_function(&a, Domain::Positive, f64::recip).unwrap();
        assert!(fa.max_abs_diff(&HermitianMatrix::diag(&[0.5, 0.25])) < 1e-15);
    }

    #[test]
    fn sqrt_squares_back() {
        let a = HermitianMatrix::from_rows(&[vec![2.0, 1.0], vec![1.0, 2.0]]).unwrap();
        let s = apply_function(&a, Domain::Positive, f64::sqrt).unwrap();
        assert!(s.square().max_abs_diff(&a) < 1e-10);
    }

    #[test]
    fn function_commutes_with_argument() {
        let mut rng = seeded_rng(5);
        let a = random_hermitian_with(&mut rng, 4);
        let fa = apply_function(&a, Domain::Real, f64::exp).unwrap();
        let c = a.matmul(&fa) - fa.matmul(&a);
        assert!(c.norm() < 1e-9 * fa.norm());
    }

    #[test]
    fn domain_error_names_eigenvalue() {
        let a = HermitianMatrix::diag(&[-1.5, 2.0]);
        match apply_function(&a, Domain::Positive, f64::ln) {
            Err(Error::Domain { eigenvalue, .. }) => assert_eq!(eigenvalue, -1.5),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn sqrt_inv_examples() {
        let s = sqrt_pd(&PdMatrix::diag(&[4.0, 9.0]).unwrap()).unwrap();
        assert!(s.max_abs_diff(&HermitianMatrix::diag(&[2.0, 3.0])) < 1e-14);
        let i = inv_pd(&PdMatrix::scaled_identity(3, 2.0).unwrap()).unwrap();
        assert!(i.max_abs_diff(&HermitianMatrix::scaled_identity(3, 0.5)) < 1e-15);
    }

    #[test]
    fn congruence_of_identity_is_gram() {
        let x = real_matrix(&[&[1.0, 2.0], &[0.5, -1.0]]);
        let g = congruence(&x, &HermitianMatrix::identity(2)).unwrap();
        let expected = HermitianMatrix::new(x.adjoint() * &x).unwrap();
        assert!(g.max_abs_diff(&expected) < 1e-14);
        assert!(PdMatrix::new(g).is_ok());
    }

    #[test]
    fn congruence_rejects_singular() {
        let x = real_matrix(&[&[1.0, 2.0], &[2.0, 4.0]]);
        assert!(matches!(
            congruence(&x, &HermitianMatrix::identity(2)),
            Err(Error::IllConditioned { .. })
        ));
    }
}
