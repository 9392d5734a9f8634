//! Dense Hermitian matrices, the Löwner order, spectral functional calculus
//! and the projection machinery used by the witness constructions.
//!
//! Every matrix here is a finite complex self-adjoint matrix. Positivity is
//! tracked by the [`PsdMatrix`] / [`PdMatrix`] wrappers, which cache the
//! smallest eigenvalue observed at construction.

mod calculus;
mod json;
mod order;
mod projection;
mod random;

pub use calculus::{
    apply_function, congruence, inv_pd, spectral_decompose, sqrt_pd, Domain,
    SpectralDecomposition,
};
pub(crate) use calculus::inv_sqrt_pd;
pub(crate) use random::random_hermitian_with;
pub use json::MatrixJson;
pub use order::{block2_margin, block2_psd, lowner_compare, LownerVerdict, Relation};
pub use projection::{jordan_decompose, projection_meet, support_projection, OrthProjection};
pub use random::{random_pd, random_pd_with, random_psd_with, random_vector, random_vector_with};

use std::ops::{Add, Deref, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// Numerical tolerances shared by the order tests, projections and solvers.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct ToleranceConfig {
    /// Relative band for Löwner comparisons.
    pub tol_order: f64,
    /// Eigenvalue threshold (relative to the largest) for supports and meets.
    pub tol_proj: f64,
    /// Reconstruction tolerance for decompositions and round trips.
    pub tol_recon: f64,
    /// Bisection tolerance for scalar root finding.
    pub tol_root: f64,
    /// Relative slack allowed below zero for a PSD matrix.
    pub tol_psd: f64,
    /// Relative floor the smallest eigenvalue of a PD matrix must exceed.
    pub tol_pd: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self {
            tol_order: 1e-9,
            tol_proj: 1e-8,
            tol_recon: 1e-10,
            tol_root: 1e-12,
            tol_psd: 1e-10,
            tol_pd: 1e-14,
        }
    }
}

impl ToleranceConfig {
    pub fn validate(&self) -> Result<()> {
        let all = [
            ("tol_order", self.tol_order),
            ("tol_proj", self.tol_proj),
            ("tol_recon", self.tol_recon),
            ("tol_root", self.tol_root),
            ("tol_psd", self.tol_psd),
            ("tol_pd", self.tol_pd),
        ];
        for (name, v) in all {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidParameter(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(())
    }

    /// The scale rule `max(1, ‖A‖, ‖B‖)` used to normalize order margins.
    pub fn scale(norms: &[f64]) -> f64 {
        norms.iter().copied().fold(1.0, f64::max)
    }
}

/// A dense complex self-adjoint matrix.
///
/// Construction symmetrizes the input as `(M + M*)/2`, so stored entries are
/// exactly Hermitian and the diagonal is exactly real.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    m: CMatrix,
}

impl HermitianMatrix {
    pub fn new(m: CMatrix) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::NotSquare {
                rows: m.nrows(),
                cols: m.ncols(),
            });
        }
        if m.nrows() == 0 {
            return Err(Error::Empty);
        }
        if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidParameter("matrix has non-finite entries".into()));
        }
        Ok(Self::symmetrized(m))
    }

    /// Symmetrizes without validation. Used internally for products that are
    /// Hermitian in exact arithmetic.
    pub(crate) fn symmetrized(m: CMatrix) -> Self {
        let n = m.nrows();
        let mut out = CMatrix::zeros(n, n);
        for i in 0..n {
            out[(i, i)] = Complex64::new(m[(i, i)].re, 0.0);
            for j in (i + 1)..n {
                let v = (m[(i, j)] + m[(j, i)].conj()) * 0.5;
                out[(i, j)] = v;
                out[(j, i)] = v.conj();
            }
        }
        Self { m: out }
    }

    pub fn from_real(m: &DMatrix<f64>) -> Result<Self> {
        Self::new(m.map(|x| Complex64::new(x, 0.0)))
    }

    /// Builds from row-major real rows.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::NotSquare {
                rows: n,
                cols: rows.first().map_or(0, Vec::len),
            });
        }
        Self::from_real(&DMatrix::from_fn(n, n, |i, j| rows[i][j]))
    }

    pub fn identity(n: usize) -> Self {
        Self { m: CMatrix::identity(n, n) }
    }

    pub fn zeros(n: usize) -> Self {
        Self { m: CMatrix::zeros(n, n) }
    }

    pub fn scaled_identity(n: usize, c: f64) -> Self {
        Self::identity(n) * c
    }

    pub fn diag(d: &[f64]) -> Self {
        let n = d.len();
        Self {
            m: CMatrix::from_fn(n, n, |i, j| {
                if i == j {
                    Complex64::new(d[i], 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            }),
        }
    }

    /// The 1×1 matrix `[x]`.
    pub fn scalar(x: f64) -> Self {
        Self::diag(&[x])
    }

    /// Rank-one `v v*`.
    pub fn outer(v: &CVector) -> Self {
        Self::symmetrized(v * v.adjoint())
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn as_matrix(&self) -> &CMatrix {
        &self.m
    }

    pub fn into_matrix(self) -> CMatrix {
        self.m
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.m[(i, j)]
    }

    pub fn is_real(&self) -> bool {
        self.m.iter().all(|z| z.im == 0.0)
    }

    pub fn check_same_dim(&self, other: &Self) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        Ok(())
    }

    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        Ok(spectral_decompose(self)?.eigenvalues)
    }

    pub fn min_eig(&self) -> Result<f64> {
        Ok(self.eigenvalues()?[0])
    }

    pub fn max_eig(&self) -> Result<f64> {
        Ok(*self.eigenvalues()?.last().expect("nonempty spectrum"))
    }

    /// Spectral norm, i.e. the largest absolute eigenvalue.
    pub fn norm(&self) -> f64 {
        match self.eigenvalues() {
            Ok(ev) => ev.iter().fold(0.0f64, |acc, v| acc.max(v.abs())),
            // Frobenius bounds the spectral norm from above.
            Err(_) => self.m.norm(),
        }
    }

    /// Spectral norm of a general (not necessarily Hermitian) difference is
    /// not needed; for Hermitian differences this is exact.
    pub fn dist(&self, other: &Self) -> f64 {
        (self - other).norm()
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim()).map(|i| self.m[(i, i)].re).sum()
    }

    /// `⟨ξ, A ξ⟩`, real for Hermitian `A`.
    pub fn quadratic_form(&self, xi: &CVector) -> f64 {
        (xi.adjoint() * &self.m * xi)[(0, 0)].re
    }

    /// `X A X` for Hermitian `X`.
    pub fn sandwich(&self, x: &HermitianMatrix) -> HermitianMatrix {
        Self::symmetrized(&x.m * &self.m * &x.m)
    }

    /// `A B A⁻¹…` style products are not Hermitian in general; this returns
    /// `A B` as a raw matrix.
    pub fn matmul(&self, other: &Self) -> CMatrix {
        &self.m * &other.m
    }

    /// `(A B + B A)` which is Hermitian.
    pub fn anticommutator(&self, other: &Self) -> HermitianMatrix {
        Self::symmetrized(&self.m * &other.m + &other.m * &self.m)
    }

    pub fn square(&self) -> HermitianMatrix {
        Self::symmetrized(&self.m * &self.m)
    }

    /// Embeds `[[X, Z], [Z*, Y]]`.
    pub fn block2(x: &Self, z: &Self, y: &Self) -> Result<Self> {
        x.check_same_dim(y)?;
        x.check_same_dim(z)?;
        let n = x.dim();
        let mut m = CMatrix::zeros(2 * n, 2 * n);
        m.view_mut((0, 0), (n, n)).copy_from(&x.m);
        m.view_mut((0, n), (n, n)).copy_from(&z.m);
        m.view_mut((n, 0), (n, n)).copy_from(&z.m.adjoint());
        m.view_mut((n, n), (n, n)).copy_from(&y.m);
        Ok(Self::symmetrized(m))
    }

    /// Maximum absolute entry of `A − B`, used for exact-ish comparisons.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.m
            .iter()
            .zip(other.m.iter())
            .fold(0.0, |acc, (a, b)| acc.max((a - b).norm()))
    }
}

impl Add for &HermitianMatrix {
    type Output = HermitianMatrix;
    fn add(self, rhs: &HermitianMatrix) -> HermitianMatrix {
        HermitianMatrix { m: &self.m + &rhs.m }
    }
}

impl Sub for &HermitianMatrix {
    type Output = HermitianMatrix;
    fn sub(self, rhs: &HermitianMatrix) -> HermitianMatrix {
        HermitianMatrix { m: &self.m - &rhs.m }
    }
}

impl Add for HermitianMatrix {
    type Output = HermitianMatrix;
    fn add(self, rhs: HermitianMatrix) -> HermitianMatrix {
        &self + &rhs
    }
}

impl Sub for HermitianMatrix {
    type Output = HermitianMatrix;
    fn sub(self, rhs: HermitianMatrix) -> HermitianMatrix {
        &self - &rhs
    }
}

impl Mul<f64> for &HermitianMatrix {
    type Output = HermitianMatrix;
    fn mul(self, c: f64) -> HermitianMatrix {
        HermitianMatrix {
            m: self.m.map(|z| z * c),
        }
    }
}

impl Mul<f64> for HermitianMatrix {
    type Output = HermitianMatrix;
    fn mul(self, c: f64) -> HermitianMatrix {
        &self * c
    }
}

impl Neg for &HermitianMatrix {
    type Output = HermitianMatrix;
    fn neg(self) -> HermitianMatrix {
        self * -1.0
    }
}

/// A positive semidefinite matrix with its cached smallest eigenvalue.
#[derive(Debug, Clone, PartialEq)]
pub struct PsdMatrix {
    base: HermitianMatrix,
    min_eig: f64,
}

impl PsdMatrix {
    pub fn new(base: HermitianMatrix) -> Result<Self> {
        Self::with_tol(base, &ToleranceConfig::default())
    }

    pub fn with_tol(base: HermitianMatrix, tol: &ToleranceConfig) -> Result<Self> {
        let ev = base.eigenvalues()?;
        let min_eig = ev[0];
        let norm = ev.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        if min_eig < -tol.tol_psd * norm.max(1.0) {
            return Err(Error::NotPositiveSemidefinite { min_eig });
        }
        Ok(Self { base, min_eig })
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            base: HermitianMatrix::zeros(n),
            min_eig: 0.0,
        }
    }

    pub fn min_eig_cached(&self) -> f64 {
        self.min_eig
    }

    pub fn as_hermitian(&self) -> &HermitianMatrix {
        &self.base
    }

    pub fn into_hermitian(self) -> HermitianMatrix {
        self.base
    }

    /// `A + εI`, positive definite for `ε > 0`.
    pub fn shifted(&self, eps: f64) -> Result<PdMatrix> {
        let n = self.dim();
        PdMatrix::new(&self.base + &HermitianMatrix::scaled_identity(n, eps))
    }
}

impl Deref for PsdMatrix {
    type Target = HermitianMatrix;
    fn deref(&self) -> &HermitianMatrix {
        &self.base
    }
}

/// A positive definite matrix with its cached smallest eigenvalue.
#[derive(Debug, Clone, PartialEq)]
pub struct PdMatrix {
    base: HermitianMatrix,
    min_eig: f64,
}

impl PdMatrix {
    pub fn new(base: HermitianMatrix) -> Result<Self> {
        Self::with_tol(base, &ToleranceConfig::default())
    }

    pub fn with_tol(base: HermitianMatrix, tol: &ToleranceConfig) -> Result<Self> {
        let ev = base.eigenvalues()?;
        let min_eig = ev[0];
        let norm = ev.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        if !(min_eig > tol.tol_pd * norm.max(1.0)) {
            if min_eig > 0.0 {
                return Err(Error::IllConditioned {
                    cond: norm / min_eig,
                    cap: 1.0 / tol.tol_pd,
                });
            }
            return Err(Error::NotPositiveDefinite { min_eig });
        }
        Ok(Self { base, min_eig })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            base: HermitianMatrix::identity(n),
            min_eig: 1.0,
        }
    }

    pub fn scaled_identity(n: usize, c: f64) -> Result<Self> {
        Self::new(HermitianMatrix::scaled_identity(n, c))
    }

    pub fn diag(d: &[f64]) -> Result<Self> {
        Self::new(HermitianMatrix::diag(d))
    }

    pub fn scalar(x: f64) -> Result<Self> {
        Self::new(HermitianMatrix::scalar(x))
    }

    pub fn min_eig_cached(&self) -> f64 {
        self.min_eig
    }

    pub fn as_hermitian(&self) -> &HermitianMatrix {
        &self.base
    }

    pub fn into_hermitian(self) -> HermitianMatrix {
        self.base
    }

    pub fn to_psd(&self) -> PsdMatrix {
        PsdMatrix {
            base: self.base.clone(),
            min_eig: self.min_eig,
        }
    }

    /// Positive multiple `cA`.
    pub fn scaled(&self, c: f64) -> Result<PdMatrix> {
        if !(c > 0.0) {
            return Err(Error::InvalidParameter(format!("scale must be positive, got {c}")));
        }
        Ok(PdMatrix {
            base: &self.base * c,
            min_eig: self.min_eig * c,
        })
    }
}

impl Deref for PdMatrix {
    type Target = HermitianMatrix;
    fn deref(&self) -> &HermitianMatrix {
        &self.base
    }
}
