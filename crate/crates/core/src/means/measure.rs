use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{parallel_sum, RepresentingFunction};
use crate::error::{Error, Result};
use crate::hermitian::{HermitianMatrix, PdMatrix};

/// Atomic representing measure of a symmetric mean:
///
/// `A σ B = α/2 (A+B) + Σᵢ wᵢ (λᵢ+1)/(2λᵢ) {(λᵢA):B + A:(λᵢB)}`
///
/// with `α ≥ 0`, atoms `λᵢ > 0`, weights `wᵢ > 0` and `α + Σ wᵢ = 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymmetricMeanMeasure {
    pub alpha: f64,
    #[serde(default)]
    pub atoms: Vec<(f64, f64)>,
}

impl SymmetricMeanMeasure {
    pub fn new(alpha: f64, atoms: Vec<(f64, f64)>) -> Result<Self> {
        let m = Self { alpha, atoms };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha >= 0.0 && self.alpha.is_finite()) {
            return Err(Error::InvalidMeasure(format!(
                "alpha must be a finite nonnegative number, got {}",
                self.alpha
            )));
        }
        for &(l, w) in &self.atoms {
            if !(l > 0.0 && l.is_finite()) {
                return Err(Error::InvalidMeasure(format!("atom {l} must be positive")));
            }
            if !(w > 0.0 && w.is_finite()) {
                return Err(Error::InvalidMeasure(format!("weight {w} must be positive")));
            }
        }
        let total = self.alpha + self.atoms.iter().map(|a| a.1).sum::<f64>();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidMeasure(format!(
                "alpha + total weight = {total}, expected 1"
            )));
        }
        Ok(())
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let m: Self = serde_json::from_str(s).map_err(|e| Error::Parse(format!("measure: {e}")))?;
        m.validate()?;
        Ok(m)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("measure serializes")
    }

    /// Scalar evaluation of `h(x) = 1 σ x`.
    pub fn h(&self, x: f64) -> f64 {
        let mut v = self.alpha * (1.0 + x) / 2.0;
        for &(l, w) in &self.atoms {
            v += w * (l + 1.0) / (2.0 * l) * (l * x / (l + x) + l * x / (1.0 + l * x));
        }
        v
    }

    pub(crate) fn representing_function(&self) -> RepresentingFunction {
        let me = self.clone();
        let h_inf = if self.alpha > 0.0 {
            f64::INFINITY
        } else {
            self.atoms
                .iter()
                .map(|&(l, w)| w * (l + 1.0) * (l + 1.0) / (2.0 * l))
                .sum()
        };
        RepresentingFunction::builtin(
            format!("measure:{}", self.to_json()),
            Arc::new(move |x| me.h(x)),
            self.alpha / 2.0,
            h_inf,
            0.5,
            true,
        )
    }
}

/// Evaluates the symmetric mean defined by `m` on positive definite inputs.
pub fn mean_from_measure(m: &SymmetricMeanMeasure, a: &PdMatrix, b: &PdMatrix) -> Result<PdMatrix> {
    m.validate()?;
    a.check_same_dim(b)?;
    let mut acc: HermitianMatrix = (&**a + &**b) * (m.alpha / 2.0);
    for &(l, w) in &m.atoms {
        let left = parallel_sum(&a.scaled(l)?, b)?;
        let right = parallel_sum(a, &b.scaled(l)?)?;
        let term = (&*left + &*right) * (w * (l + 1.0) / (2.0 * l));
        acc = &acc + &term;
    }
    PdMatrix::new(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermitian::random_pd;
    use crate::means::{arithmetic, harmonic, OperatorMean};

    #[test]
    fn normalization_is_enforced() {
        assert!(SymmetricMeanMeasure::new(0.5, vec![(1.0, 0.5)]).is_ok());
        assert!(SymmetricMeanMeasure::new(0.5, vec![(1.0, 0.6)]).is_err());
        assert!(SymmetricMeanMeasure::new(0.5, vec![(0.0, 0.5)]).is_err());
        assert!(SymmetricMeanMeasure::new(-0.1, vec![(1.0, 1.1)]).is_err());
    }

    #[test]
    fn pure_alpha_is_arithmetic() {
        let m = SymmetricMeanMeasure::new(1.0, vec![]).unwrap();
        let a = random_pd(3, 1, 20.0).unwrap();
        let b = random_pd(3, 2, 20.0).unwrap();
        let r = mean_from_measure(&m, &a, &b).unwrap();
        assert!(r.dist(&arithmetic(&a, &b, 0.5).unwrap()) < 1e-14);
    }

    #[test]
    fn unit_atom_is_harmonic() {
        let m = SymmetricMeanMeasure::new(0.0, vec![(1.0, 1.0)]).unwrap();
        assert!((m.h(1.0) - 1.0).abs() < 1e-15);
        let one = PdMatrix::scalar(1.0).unwrap();
        assert!((mean_from_measure(&m, &one, &one).unwrap().get(0, 0).re - 1.0).abs() < 1e-15);
        let a = random_pd(3, 3, 20.0).unwrap();
        let b = random_pd(3, 4, 20.0).unwrap();
        let r = mean_from_measure(&m, &a, &b).unwrap();
        assert!(r.dist(&harmonic(&a, &b, 0.5).unwrap()) < 1e-12);
    }

    #[test]
    fn measure_h_is_symmetric_and_registered() {
        let m = SymmetricMeanMeasure::new(0.2, vec![(0.5, 0.3), (3.0, 0.5)]).unwrap();
        let checked = RepresentingFunction::register("m", move |x| m.h(x)).unwrap();
        assert!(checked.is_symmetric());
        assert!((checked.h_at_0() - 0.1).abs() < 1e-15);
    }

    #[test]
    fn closed_form_agrees_with_generic_route() {
        let m = SymmetricMeanMeasure::new(0.25, vec![(0.5, 0.25), (4.0, 0.5)]).unwrap();
        let mean = OperatorMean::from_measure(m);
        let a = random_pd(4, 8, 50.0).unwrap();
        let b = random_pd(4, 9, 50.0).unwrap();
        let closed = mean.apply(&a, &b).unwrap();
        let generic = crate::means::kubo_ando(&mean, &a, &b).unwrap();
        assert!(closed.dist(&generic) < 1e-11);
    }

    #[test]
    fn json_round_trip() {
        let m = SymmetricMeanMeasure::new(0.5, vec![(2.0, 0.5)]).unwrap();
        let back = SymmetricMeanMeasure::from_json(&m.to_json()).unwrap();
        assert_eq!(back, m);
        assert!(SymmetricMeanMeasure::from_json(r#"{"alpha":2.0}"#).is_err());
    }
}
