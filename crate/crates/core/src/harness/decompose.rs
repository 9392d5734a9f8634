use serde::Serialize;

use crate::error::{Error, Result};
use crate::hermitian::{
    inv_pd, inv_sqrt_pd, lowner_compare, spectral_decompose, sqrt_pd, HermitianMatrix, PdMatrix,
    ToleranceConfig,
};
use crate::means::{geometric_psd, kubo_ando, MeanKind, OperatorMean};
use crate::repr::ScalarFunction;

/// `γ₀ = 2·(1 σ 0) = 2h(0)`.
pub fn gamma0(sigma: &OperatorMean) -> f64 {
    2.0 * sigma.h().h_at_0()
}

/// `φ(t) = t σ (2 − t)` for `t ∈ [0, 1]`.
pub fn phi(sigma: &OperatorMean, t: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::InvalidParameter(format!("t must lie in [0, 1], got {t}")));
    }
    sigma.scalar(t, 2.0 - t)
}

/// Solves `φ(t) = y` on `[0, 1]` by bisection, run until the bracket stops
/// shrinking so that `t` is resolved to working precision.
pub fn phi_inverse(sigma: &OperatorMean, y: f64, tol_root: f64) -> Result<f64> {
    let g0 = gamma0(sigma);
    if !(y >= g0 - tol_root && y <= 1.0 + tol_root) {
        return Err(Error::InvalidParameter(format!(
            "y = {y} outside [gamma0, 1] = [{g0}, 1]"
        )));
    }
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if phi(sigma, mid)? < y {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let (flo, fhi) = (phi(sigma, lo)?, phi(sigma, hi)?);
    Ok(if (flo - y).abs() <= (fhi - y).abs() { lo } else { hi })
}

/// A pair `(A, B)` with `A∇B = X` and `AσB = Y`, with relative residuals.
#[derive(Debug, Clone, Serialize)]
pub struct Decomposition {
    pub method: &'static str,
    pub mean: String,
    pub a: HermitianMatrix,
    pub b: HermitianMatrix,
    /// `‖A∇B − X‖ / max(1, ‖X‖)`
    pub residual_arith: f64,
    /// `‖AσB − Y‖ / max(1, ‖Y‖)`, with `σ` evaluated generically.
    pub residual_mean: f64,
}

fn finish(
    method: &'static str,
    sigma: &OperatorMean,
    x: &PdMatrix,
    y: &PdMatrix,
    a: HermitianMatrix,
    b: HermitianMatrix,
) -> Result<Decomposition> {
    let (ap, bp) = (
        PdMatrix::new(a).map_err(|e| Error::Precondition(format!("A is not positive definite: {e}")))?,
        PdMatrix::new(b).map_err(|e| Error::Precondition(format!("B is not positive definite: {e}")))?,
    );
    let arith = (&*ap + &*bp) * 0.5;
    let mean = kubo_ando(sigma, &ap, &bp)?;
    Ok(Decomposition {
        method,
        mean: sigma.id().to_string(),
        residual_arith: arith.dist(x) / x.norm().max(1.0),
        residual_mean: mean.dist(y) / y.norm().max(1.0),
        a: ap.into_hermitian(),
        b: bp.into_hermitian(),
    })
}

/// Finds `A, B > 0` with `A∇B = X` and `AσB = Y` for `X ≥ Y ≥ γX`,
/// `γ > γ₀`: with `Y′ = X^{-1/2} Y X^{-1/2}`, `A′ = φ⁻¹(Y′)`, `B′ = 2I − A′`,
/// mapped back by congruence with `X^{1/2}`.
pub fn decompose_mean_pair(
    sigma: &OperatorMean,
    x: &PdMatrix,
    y: &PdMatrix,
    cfg: &ToleranceConfig,
) -> Result<Decomposition> {
    x.check_same_dim(y)?;
    let order = lowner_compare(x, y, cfg)?;
    if !order.is_geq() {
        return Err(Error::Precondition(format!(
            "X >= Y fails (margin {:e})",
            order.geq_margin
        )));
    }
    let g0 = gamma0(sigma);
    let half = sqrt_pd(x)?;
    let inv_half = inv_sqrt_pd(x)?;
    let reduced = y.sandwich(&inv_half);
    let low = reduced.min_eig()?;
    if !(low > g0) {
        return Err(Error::Precondition(format!(
            "Y >= gamma X needs gamma > gamma0 = {g0}, but the smallest eigenvalue of X^(-1/2) Y X^(-1/2) is {low:e}"
        )));
    }
    let dec = spectral_decompose(&reduced)?;
    let values: Vec<f64> = dec
        .eigenvalues
        .iter()
        .map(|&v| phi_inverse(sigma, v.clamp(g0, 1.0), cfg.tol_root))
        .collect::<Result<_>>()?;
    let a_red = dec.recompose(&values);
    let b_red = &HermitianMatrix::scaled_identity(x.dim(), 2.0) - &a_red;
    finish(
        "phi-inverse",
        sigma,
        x,
        y,
        a_red.sandwich(&half),
        b_red.sandwich(&half),
    )
}

/// Closed forms for `σ = !`: `A, B = X ∓ X#(X−Y)`, and for `σ = #`:
/// `A, B = X ∓ X#(X − Y X⁻¹ Y)`.
pub fn decompose_closed_form(
    sigma: &OperatorMean,
    x: &PdMatrix,
    y: &PdMatrix,
    cfg: &ToleranceConfig,
) -> Result<Decomposition> {
    x.check_same_dim(y)?;
    let (method, inner) = match sigma.kind() {
        MeanKind::Harmonic { weight } if *weight == 0.5 => ("closed-form-harm", &**x - &**y),
        MeanKind::Geometric { weight } if *weight == 0.5 => {
            let yxy = inv_pd(x)?.sandwich(y);
            ("closed-form-geom", &**x - &yxy)
        }
        _ => {
            return Err(Error::InvalidParameter(format!(
                "closed form exists only for harm and geom, not {}",
                sigma.id()
            )))
        }
    };
    let low = inner.min_eig()?;
    if low < -cfg.tol_psd * inner.norm().max(x.norm()).max(1.0) {
        return Err(Error::Precondition(format!(
            "inner argument is not positive semidefinite (smallest eigenvalue {low:e})"
        )));
    }
    let d = geometric_psd(x, &inner, 0.5)?.into_hermitian();
    finish(method, sigma, x, y, &**x - &d, &**x + &d)
}

/// One step `X_k → X_{k+1}` of the chain `X_k = γᵏX + (1−γᵏ)Y`.
#[derive(Debug, Clone, Serialize)]
pub struct ChainStep {
    pub k: usize,
    /// Margin of `X_k ≥ X_{k+1}`.
    pub upper_margin: f64,
    /// Margin of `X_{k+1} ≥ γX_k`.
    pub lower_margin: f64,
    /// Margin of `f(X_k) ≥ f(X_{k+1})`.
    pub f_margin: f64,
    pub residual_arith: f64,
    pub residual_mean: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ChainReport {
    pub mean: String,
    pub function: String,
    pub gamma: f64,
    pub iterates: Vec<HermitianMatrix>,
    pub steps: Vec<ChainStep>,
    /// `‖X_k − Y‖` for each iterate.
    pub distances: Vec<f64>,
    /// `max_k |‖X_k − Y‖ − γᵏ‖X − Y‖| / max(1, ‖X − Y‖)`.
    pub decay_error: f64,
    /// Smallest of all order margins.
    pub worst_margin: f64,
    pub max_residual_arith: f64,
    pub max_residual_mean: f64,
    pub pass: bool,
}

/// Builds `X_0, …, X_{k_max}`, checks the sandwich `X_k ≥ X_{k+1} ≥ γX_k`,
/// decomposes each step through [`decompose_mean_pair`], and checks
/// `f(X_k) ≥ f(X_{k+1})`.
pub fn prop41_chain(
    sigma: &OperatorMean,
    f: &ScalarFunction,
    x: &PdMatrix,
    y: &PdMatrix,
    gamma: f64,
    k_max: usize,
    cfg: &ToleranceConfig,
) -> Result<ChainReport> {
    x.check_same_dim(y)?;
    let g0 = gamma0(sigma);
    if !(gamma > g0 && gamma < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "gamma must lie in (gamma0, 1) = ({g0}, 1), got {gamma}"
        )));
    }
    let order = lowner_compare(x, y, cfg)?;
    if !order.is_geq() {
        return Err(Error::Precondition(format!(
            "X >= Y fails (margin {:e})",
            order.geq_margin
        )));
    }
    let iterates: Vec<PdMatrix> = (0..=k_max)
        .map(|k| {
            let g = gamma.powi(k as i32);
            PdMatrix::new(&(&**x * g) + &(&**y * (1.0 - g)))
        })
        .collect::<Result<_>>()?;
    let diff_norm = x.dist(y);
    let distances: Vec<f64> = iterates.iter().map(|m| m.dist(y)).collect();
    let decay_error = distances
        .iter()
        .enumerate()
        .map(|(k, d)| (d - gamma.powi(k as i32) * diff_norm).abs() / diff_norm.max(1.0))
        .fold(0.0, f64::max);

    let mut steps = Vec::with_capacity(k_max);
    for k in 0..k_max {
        let (cur, next) = (&iterates[k], &iterates[k + 1]);
        let upper = lowner_compare(cur, next, cfg)?.geq_margin;
        let lower = lowner_compare(next, &(&**cur * gamma), cfg)?.geq_margin;
        let dec = decompose_mean_pair(sigma, cur, next, cfg)?;
        let f_margin = lowner_compare(&f.lift(cur)?, &f.lift(next)?, cfg)?.geq_margin;
        steps.push(ChainStep {
            k,
            upper_margin: upper,
            lower_margin: lower,
            f_margin,
            residual_arith: dec.residual_arith,
            residual_mean: dec.residual_mean,
        });
    }
    let worst_margin = steps
        .iter()
        .flat_map(|s| [s.upper_margin, s.lower_margin, s.f_margin])
        .fold(f64::INFINITY, f64::min);
    let max_residual_arith = steps.iter().map(|s| s.residual_arith).fold(0.0, f64::max);
    let max_residual_mean = steps.iter().map(|s| s.residual_mean).fold(0.0, f64::max);
    let pass = worst_margin >= -cfg.tol_order
        && max_residual_arith <= cfg.tol_order
        && max_residual_mean <= 1e-7;
    Ok(ChainReport {
        mean: sigma.id().to_string(),
        function: f.id().to_string(),
        gamma,
        iterates: iterates.into_iter().map(PdMatrix::into_hermitian).collect(),
        steps,
        distances,
        decay_error,
        worst_margin,
        max_residual_arith,
        max_residual_mean,
        pass,
    })
}
