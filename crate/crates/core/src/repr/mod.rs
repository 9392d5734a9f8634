//! Finite atomic integral representations of operator monotone, operator
//! monotone decreasing and operator convex functions on `(0, ∞)`, and a
//! catalog of classified scalar functions.

mod catalog;

pub use catalog::{catalog, parse_function, Flags, ScalarFunction};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hermitian::{apply_function, Domain, HermitianMatrix};

fn check_atoms(atoms: &[(f64, f64)], allow_zero_atom: bool) -> Result<()> {
    for &(l, w) in atoms {
        let ok_atom = l.is_finite() && (l > 0.0 || (allow_zero_atom && l == 0.0));
        if !ok_atom {
            return Err(Error::InvalidMeasure(format!("atom {l} out of range")));
        }
        if !(w > 0.0 && w.is_finite()) {
            return Err(Error::InvalidMeasure(format!("weight {w} must be positive")));
        }
    }
    Ok(())
}

fn check_nonneg(name: &str, v: f64) -> Result<()> {
    if !(v >= 0.0 && v.is_finite()) {
        return Err(Error::InvalidMeasure(format!(
            "{name} must be finite and nonnegative, got {v}"
        )));
    }
    Ok(())
}

fn check_point(x: f64) -> Result<()> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::ScalarDomain {
            value: x,
            function: "representation (x > 0)".into(),
        });
    }
    Ok(())
}

/// `f(x) = α + Σᵢ wᵢ (λᵢ+1)/(λᵢ+x)`, atoms `λᵢ ≥ 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecreasingRepr {
    pub alpha: f64,
    pub atoms: Vec<(f64, f64)>,
}

impl DecreasingRepr {
    pub fn new(alpha: f64, atoms: Vec<(f64, f64)>) -> Result<Self> {
        check_nonneg("alpha", alpha)?;
        check_atoms(&atoms, true)?;
        Ok(Self { alpha, atoms })
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        check_point(x)?;
        Ok(self.alpha
            + self
                .atoms
                .iter()
                .map(|&(l, w)| w * (l + 1.0) / (l + x))
                .sum::<f64>())
    }
}

/// `f(x) = α + βx + Σᵢ wᵢ (λᵢ+1)x/(λᵢ+x)`, atoms `λᵢ > 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonotoneRepr {
    pub alpha: f64,
    pub beta: f64,
    pub atoms: Vec<(f64, f64)>,
}

impl MonotoneRepr {
    pub fn new(alpha: f64, beta: f64, atoms: Vec<(f64, f64)>) -> Result<Self> {
        check_nonneg("alpha", alpha)?;
        check_nonneg("beta", beta)?;
        check_atoms(&atoms, false)?;
        Ok(Self { alpha, beta, atoms })
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        check_point(x)?;
        Ok(self.alpha
            + self.beta * x
            + self
                .atoms
                .iter()
                .map(|&(l, w)| w * (l + 1.0) * x / (l + x))
                .sum::<f64>())
    }
}

/// `f(x) = α + βx + γx² + Σᵢ wᵢ (λᵢ+1)x²/(λᵢ+x)`, `γ ≥ 0`, atoms `λᵢ > 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneralConvexRepr {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub atoms: Vec<(f64, f64)>,
}

impl GeneralConvexRepr {
    pub fn new(alpha: f64, beta: f64, gamma: f64, atoms: Vec<(f64, f64)>) -> Result<Self> {
        if !(alpha.is_finite() && beta.is_finite()) {
            return Err(Error::InvalidMeasure("alpha and beta must be finite".into()));
        }
        check_nonneg("gamma", gamma)?;
        check_atoms(&atoms, false)?;
        Ok(Self {
            alpha,
            beta,
            gamma,
            atoms,
        })
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        check_point(x)?;
        Ok(self.alpha
            + self.beta * x
            + self.gamma * x * x
            + self
                .atoms
                .iter()
                .map(|&(l, w)| w * (l + 1.0) * x * x / (l + x))
                .sum::<f64>())
    }
}

/// Any of the three representation shapes.
#[derive(Debug, Clone, PartialEq)]
pub enum Representation {
    Decreasing(DecreasingRepr),
    Monotone(MonotoneRepr),
    GeneralConvex(GeneralConvexRepr),
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ReprJson {
    kind: String,
    #[serde(default)]
    alpha: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    beta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    gamma: Option<f64>,
    #[serde(default)]
    atoms: Vec<(f64, f64)>,
}

impl Representation {
    /// Parses `{"kind": "decreasing" | "monotone" | "convex", "alpha", "beta",
    /// "gamma", "atoms": [[λ, w], …]}`.
    pub fn from_json(s: &str) -> Result<Self> {
        let raw: ReprJson =
            serde_json::from_str(s).map_err(|e| Error::Parse(format!("representation: {e}")))?;
        let unexpected = |field: &str| {
            Err(Error::Parse(format!(
                "representation kind {:?} has no field {field:?}",
                raw.kind
            )))
        };
        match raw.kind.as_str() {
            "decreasing" => {
                if raw.beta.is_some() {
                    return unexpected("beta");
                }
                if raw.gamma.is_some() {
                    return unexpected("gamma");
                }
                Ok(Self::Decreasing(DecreasingRepr::new(raw.alpha, raw.atoms)?))
            }
            "monotone" => {
                if raw.gamma.is_some() {
                    return unexpected("gamma");
                }
                Ok(Self::Monotone(MonotoneRepr::new(
                    raw.alpha,
                    raw.beta.unwrap_or(0.0),
                    raw.atoms,
                )?))
            }
            "convex" => Ok(Self::GeneralConvex(GeneralConvexRepr::new(
                raw.alpha,
                raw.beta.unwrap_or(0.0),
                raw.gamma.unwrap_or(0.0),
                raw.atoms,
            )?)),
            other => Err(Error::Parse(format!("unknown representation kind {other:?}"))),
        }
    }

    pub fn to_json(&self) -> String {
        let raw = match self {
            Self::Decreasing(r) => ReprJson {
                kind: "decreasing".into(),
                alpha: r.alpha,
                beta: None,
                gamma: None,
                atoms: r.atoms.clone(),
            },
            Self::Monotone(r) => ReprJson {
                kind: "monotone".into(),
                alpha: r.alpha,
                beta: Some(r.beta),
                gamma: None,
                atoms: r.atoms.clone(),
            },
            Self::GeneralConvex(r) => ReprJson {
                kind: "convex".into(),
                alpha: r.alpha,
                beta: Some(r.beta),
                gamma: Some(r.gamma),
                atoms: r.atoms.clone(),
            },
        };
        serde_json::to_string(&raw).expect("representation serializes")
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        match self {
            Self::Decreasing(r) => r.eval(x),
            Self::Monotone(r) => r.eval(x),
            Self::GeneralConvex(r) => r.eval(x),
        }
    }

    /// Matrix lift `f(A)` through the functional calculus.
    pub fn lift(&self, a: &HermitianMatrix) -> Result<HermitianMatrix> {
        let name = format!("repr:{}", self.to_json());
        apply_function(a, Domain::Positive, |x| self.eval(x).unwrap_or(f64::NAN)).map_err(
            |e| match e {
                Error::Domain { eigenvalue, .. } => Error::Domain {
                    eigenvalue,
                    function: name,
                },
                other => other,
            },
        )
    }
}

/// Converts data `(ν, α, β)` of `g(x) = α + βx + Σ wᵢ(λᵢ+1)x/(λᵢ+x)` into the
/// decreasing representation of `f(x) = g(1/x)`: each atom `λ` becomes `1/λ`
/// with the same weight, and `β` becomes an atom at `0`.
pub fn decreasing_to_monotone_transform(
    nu: &[(f64, f64)],
    alpha: f64,
    beta: f64,
) -> Result<DecreasingRepr> {
    let source = MonotoneRepr::new(alpha, beta, nu.to_vec())?;
    let mut atoms: Vec<(f64, f64)> = source.atoms.iter().map(|&(l, w)| (1.0 / l, w)).collect();
    if source.beta > 0.0 {
        atoms.push((0.0, source.beta));
    }
    DecreasingRepr::new(source.alpha, atoms)
}
