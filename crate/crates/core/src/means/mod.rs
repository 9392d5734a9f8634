//! Kubo–Ando operator means.
//!
//! A mean is identified by its representing function `h` (with `h(1) = 1`),
//! recovered from the mean as `h(x) = 1 σ x`. Built-in means have
//! closed-form evaluation routes; [`kubo_ando`] is the generic route
//! `A^{1/2} h(A^{-1/2} B A^{-1/2}) A^{1/2}` that works for any registered `h`.

mod binary;
mod extend;
mod id;
mod measure;
mod nary;

pub use binary::{arithmetic, geometric, geometric_psd, harmonic, kubo_ando, parallel_sum};
pub use extend::{psd_extend, PsdExtension, DEFAULT_EPS_SCHEDULE};
pub use id::parse_mean;
pub use measure::{mean_from_measure, SymmetricMeanMeasure};
pub use nary::{alm_geometric, n_arithmetic, n_harmonic, AlmConfig};

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::hermitian::{inv_pd, PdMatrix};

type Evaluator = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Grid `2^k`, `k = -10..=10`, used by the registration checks.
fn check_grid() -> impl Iterator<Item = f64> {
    (-10..=10).map(|k| 2f64.powi(k))
}

/// The scalar function `h` on `[0, ∞)` generating a mean.
#[derive(Clone)]
pub struct RepresentingFunction {
    name: String,
    eval: Evaluator,
    h_at_0: f64,
    /// `lim_{x→∞} h(x)`, possibly infinite.
    h_at_inf: f64,
    deriv_at_1: f64,
    is_symmetric: bool,
}

impl fmt::Debug for RepresentingFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RepresentingFunction")
            .field("name", &self.name)
            .field("h_at_0", &self.h_at_0)
            .field("h_at_inf", &self.h_at_inf)
            .field("deriv_at_1", &self.deriv_at_1)
            .field("is_symmetric", &self.is_symmetric)
            .finish()
    }
}

impl RepresentingFunction {
    /// Registers a user-supplied `h`, validating `h(1) = 1`, positivity and
    /// monotonicity on a grid, `h'(1) ∈ [0, 1]`, and for symmetric `h` the
    /// sandwich `(x+1)/2 ≥ h(x) ≥ 2x/(x+1)`.
    pub fn register(
        name: impl Into<String>,
        eval: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Result<Self> {
        let name = name.into();
        let eval: Evaluator = Arc::new(eval);
        let bad = |msg: String| Error::InvalidRepresentingFunction(format!("{name}: {msg}"));

        let h1 = eval(1.0);
        if !((h1 - 1.0).abs() <= 1e-12) {
            return Err(bad(format!("h(1) = {h1}, expected 1")));
        }
        let h_at_0 = eval(0.0);
        if !(h_at_0 >= 0.0 && h_at_0.is_finite()) {
            return Err(bad(format!("h(0) = {h_at_0} must be finite and nonnegative")));
        }
        let mut prev = h_at_0;
        for x in check_grid() {
            let v = eval(x);
            if !(v.is_finite() && v >= 0.0) {
                return Err(bad(format!("h({x}) = {v} is not a finite nonnegative value")));
            }
            if v < prev - 1e-12 * prev.max(1.0) {
                return Err(bad(format!("h is decreasing near x = {x}")));
            }
            prev = v;
        }

        let step = 1e-6;
        let deriv_at_1 = (eval(1.0 + step) - eval(1.0 - step)) / (2.0 * step);
        if !(-1e-6..=1.0 + 1e-6).contains(&deriv_at_1) {
            return Err(bad(format!("h'(1) = {deriv_at_1} outside [0, 1]")));
        }
        let deriv_at_1 = deriv_at_1.clamp(0.0, 1.0);

        let is_symmetric = check_grid().all(|x| {
            let (a, b) = (eval(x), x * eval(1.0 / x));
            (a - b).abs() <= 1e-10 * a.max(1.0)
        });
        if is_symmetric {
            for x in check_grid() {
                let v = eval(x);
                let (upper, lower) = ((x + 1.0) / 2.0, 2.0 * x / (x + 1.0));
                let slack = 1e-12 * upper;
                if v > upper + slack || v < lower - slack {
                    return Err(bad(format!(
                        "symmetric h violates (x+1)/2 >= h(x) >= 2x/(x+1) at x = {x}"
                    )));
                }
            }
        }

        let far = eval(1e16);
        let h_at_inf = if !far.is_finite() || far > 1.5 * eval(1e12) {
            f64::INFINITY
        } else {
            far
        };

        Ok(Self {
            name,
            eval,
            h_at_0,
            h_at_inf,
            deriv_at_1,
            is_symmetric,
        })
    }

    fn builtin(
        name: String,
        eval: Evaluator,
        h_at_0: f64,
        h_at_inf: f64,
        deriv_at_1: f64,
        is_symmetric: bool,
    ) -> Self {
        Self {
            name,
            eval,
            h_at_0,
            h_at_inf,
            deriv_at_1,
            is_symmetric,
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        if x == 0.0 {
            self.h_at_0
        } else {
            (self.eval)(x)
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn h_at_0(&self) -> f64 {
        self.h_at_0
    }

    pub fn h_at_inf(&self) -> f64 {
        self.h_at_inf
    }

    pub fn deriv_at_1(&self) -> f64 {
        self.deriv_at_1
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_symmetric
    }
}

/// How a mean is evaluated on matrices.
#[derive(Debug, Clone)]
pub enum MeanKind {
    /// `(1−λ)A + λB`
    Arithmetic { weight: f64 },
    /// `((1−λ)A⁻¹ + λB⁻¹)⁻¹`
    Harmonic { weight: f64 },
    /// `A^{1/2}(A^{-1/2}BA^{-1/2})^λ A^{1/2}`
    Geometric { weight: f64 },
    /// Symmetric mean given by an atomic representing measure.
    Measure(SymmetricMeanMeasure),
    /// `(A⁻¹ σ B⁻¹)⁻¹`
    Adjoint(Box<OperatorMean>),
    /// Only the representing function is known.
    Custom,
}

/// A Kubo–Ando operator mean.
#[derive(Debug, Clone)]
pub struct OperatorMean {
    id: String,
    kind: MeanKind,
    h: RepresentingFunction,
}

fn check_weight(weight: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&weight) {
        return Err(Error::InvalidParameter(format!(
            "mean weight must lie in [0, 1], got {weight}"
        )));
    }
    Ok(())
}

fn weighted_id(base: &str, weight: f64) -> String {
    if weight == 0.5 {
        base.to_string()
    } else {
        format!("{base}:{weight}")
    }
}

impl OperatorMean {
    pub fn arithmetic(weight: f64) -> Result<Self> {
        check_weight(weight)?;
        let eval: Evaluator = Arc::new(move |x| (1.0 - weight) + weight * x);
        let h_inf = if weight > 0.0 { f64::INFINITY } else { 1.0 };
        Ok(Self {
            id: weighted_id("arith", weight),
            kind: MeanKind::Arithmetic { weight },
            h: RepresentingFunction::builtin(
                weighted_id("arith", weight),
                eval,
                1.0 - weight,
                h_inf,
                weight,
                weight == 0.5,
            ),
        })
    }

    pub fn harmonic(weight: f64) -> Result<Self> {
        check_weight(weight)?;
        let eval: Evaluator = Arc::new(move |x| x / ((1.0 - weight) * x + weight));
        let h0 = if weight > 0.0 { 0.0 } else { 1.0 };
        let h_inf = if weight < 1.0 { 1.0 / (1.0 - weight) } else { f64::INFINITY };
        Ok(Self {
            id: weighted_id("harm", weight),
            kind: MeanKind::Harmonic { weight },
            h: RepresentingFunction::builtin(
                weighted_id("harm", weight),
                eval,
                h0,
                h_inf,
                weight,
                weight == 0.5,
            ),
        })
    }

    pub fn geometric(weight: f64) -> Result<Self> {
        check_weight(weight)?;
        let eval: Evaluator = Arc::new(move |x: f64| x.powf(weight));
        let h0 = if weight > 0.0 { 0.0 } else { 1.0 };
        let h_inf = if weight > 0.0 { f64::INFINITY } else { 1.0 };
        Ok(Self {
            id: weighted_id("geom", weight),
            kind: MeanKind::Geometric { weight },
            h: RepresentingFunction::builtin(
                weighted_id("geom", weight),
                eval,
                h0,
                h_inf,
                weight,
                weight == 0.5,
            ),
        })
    }

    /// `∇`
    pub fn arith() -> Self {
        Self::arithmetic(0.5).expect("valid weight")
    }

    /// `!`
    pub fn harm() -> Self {
        Self::harmonic(0.5).expect("valid weight")
    }

    /// `#`
    pub fn geom() -> Self {
        Self::geometric(0.5).expect("valid weight")
    }

    pub fn from_measure(m: SymmetricMeanMeasure) -> Self {
        let h = m.representing_function();
        Self {
            id: format!("measure:{}", m.to_json()),
            kind: MeanKind::Measure(m),
            h,
        }
    }

    /// Mean from a registered representing function, evaluated generically.
    pub fn custom(h: RepresentingFunction) -> Self {
        Self {
            id: format!("custom:{}", h.name()),
            kind: MeanKind::Custom,
            h,
        }
    }

    /// Adjoint mean `A σ* B = (A⁻¹ σ B⁻¹)⁻¹` with `h*(x) = 1/h(1/x)`.
    pub fn adjoint(&self) -> Result<Self> {
        if self.h.h_at_inf == 0.0 || (1..=8).any(|k| self.h.eval(2f64.powi(k)) <= 0.0) {
            return Err(Error::InvalidRepresentingFunction(format!(
                "{}: h vanishes on (0, inf), adjoint undefined",
                self.id
            )));
        }
        let inner = self.h.clone();
        let eval: Evaluator = Arc::new(move |x: f64| 1.0 / inner.eval(1.0 / x));
        let h0 = 1.0 / self.h.h_at_inf;
        let h_inf = if self.h.h_at_0 == 0.0 {
            f64::INFINITY
        } else {
            1.0 / self.h.h_at_0
        };
        let id = format!("adjoint:{}", self.id);
        let h = RepresentingFunction::builtin(
            id.clone(),
            eval,
            h0,
            h_inf,
            self.h.deriv_at_1,
            self.h.is_symmetric,
        );
        Ok(Self {
            id,
            kind: MeanKind::Adjoint(Box::new(self.clone())),
            h,
        })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn kind(&self) -> &MeanKind {
        &self.kind
    }

    pub fn h(&self) -> &RepresentingFunction {
        &self.h
    }

    pub fn is_symmetric(&self) -> bool {
        self.h.is_symmetric
    }

    /// True for `∇` itself (checked on the representing function).
    pub fn is_arithmetic(&self) -> bool {
        self.is_symmetric() && (self.h.h_at_0 - 0.5).abs() < 1e-12
    }

    /// Evaluates `A σ B` by the closed-form route for built-in kinds and by
    /// [`kubo_ando`] otherwise.
    pub fn apply(&self, a: &PdMatrix, b: &PdMatrix) -> Result<PdMatrix> {
        a.check_same_dim(b)?;
        match &self.kind {
            MeanKind::Arithmetic { weight } => arithmetic(a, b, *weight),
            MeanKind::Harmonic { weight } => harmonic(a, b, *weight),
            MeanKind::Geometric { weight } => geometric(a, b, *weight),
            MeanKind::Measure(m) => mean_from_measure(m, a, b),
            MeanKind::Adjoint(inner) => inv_pd(&inner.apply(&inv_pd(a)?, &inv_pd(b)?)?),
            MeanKind::Custom => kubo_ando(self, a, b),
        }
    }

    /// Scalar mean `a σ b` for `a, b ≥ 0` (not both zero).
    pub fn scalar(&self, a: f64, b: f64) -> Result<f64> {
        if !(a >= 0.0 && b >= 0.0) || (a == 0.0 && b == 0.0) {
            return Err(Error::ScalarDomain {
                value: a.min(b),
                function: format!("scalar mean {}", self.id),
            });
        }
        if a > 0.0 {
            return Ok(a * self.h.eval(b / a));
        }
        // 0 σ b = b · lim_{y→∞} h(y)/y
        let eps = 1e-200;
        Ok(b * self.h.eval(1.0 / eps) * eps)
    }
}

impl fmt::Display for OperatorMean {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.id)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_representing_functions() {
        let a = OperatorMean::arith();
        assert_eq!(a.h().eval(3.0), 2.0);
        assert!(a.is_symmetric());
        assert!(a.is_arithmetic());

        let h = OperatorMean::harm();
        assert!((h.h().eval(3.0) - 1.5).abs() < 1e-15);
        assert_eq!(h.h().h_at_0(), 0.0);
        assert!(!h.is_arithmetic());

        let g = OperatorMean::geom();
        assert_eq!(g.h().eval(4.0), 2.0);
        assert_eq!(g.h().deriv_at_1(), 0.5);

        let w = OperatorMean::geometric(0.25).unwrap();
        assert!(!w.is_symmetric());
        assert_eq!(w.id(), "geom:0.25");
    }

    #[test]
    fn weight_out_of_range() {
        assert!(OperatorMean::arithmetic(1.5).is_err());
        assert!(OperatorMean::harmonic(-0.1).is_err());
    }

    #[test]
    fn registration_checks() {
        // logarithmic mean (x-1)/log x is symmetric and lies between ! and ∇
        let lm = RepresentingFunction::register("logmean", |x: f64| {
            if (x - 1.0).abs() < 1e-8 {
                1.0 + (x - 1.0) / 2.0
            } else if x == 0.0 {
                0.0
            } else {
                (x - 1.0) / x.ln()
            }
        })
        .unwrap();
        assert!(lm.is_symmetric());
        assert!((lm.deriv_at_1() - 0.5).abs() < 1e-6);

        assert!(RepresentingFunction::register("bad-h1", |x| 2.0 * x).is_err());
        assert!(RepresentingFunction::register("decreasing", |x: f64| 1.0 / x.max(1e-300)).is_err());
        // quadratic mean: symmetric and increasing but above the arithmetic mean
        let r = RepresentingFunction::register("quadratic", |x: f64| ((1.0 + x * x) / 2.0).sqrt());
        assert!(r.is_err());
    }

    #[test]
    fn scalar_means_and_zero_limits() {
        let g = OperatorMean::geom();
        assert!((g.scalar(4.0, 9.0).unwrap() - 6.0).abs() < 1e-14);
        assert_eq!(g.scalar(2.0, 0.0).unwrap(), 0.0);
        let a = OperatorMean::arith();
        assert!((a.scalar(0.0, 2.0).unwrap() - 1.0).abs() < 1e-14);
        assert!(a.scalar(0.0, 0.0).is_err());
        assert!((OperatorMean::harm().scalar(2.0, 1.0).unwrap() - 4.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn adjoint_of_arithmetic_is_harmonic() {
        let adj = OperatorMean::arith().adjoint().unwrap();
        assert!((adj.scalar(2.0, 1.0).unwrap() - 4.0 / 3.0).abs() < 1e-14);
        assert_eq!(adj.h().h_at_0(), 0.0);
        let back = adj.adjoint().unwrap();
        for x in [0.1, 0.7, 2.0, 13.0] {
            assert!((back.h().eval(x) - (1.0 + x) / 2.0).abs() < 1e-14);
        }
        assert_eq!(back.h().h_at_0(), 0.5);
    }

    #[test]
    fn adjoint_of_vanishing_h_is_rejected() {
        let zero_like = OperatorMean::geometric(0.0).unwrap();
        // h ≡ 1 is fine
        assert!(zero_like.adjoint().is_ok());
    }
}
