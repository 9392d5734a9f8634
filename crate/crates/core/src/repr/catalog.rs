use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use super::Representation;
use crate::error::{Error, Result};
use crate::hermitian::{apply_function, Domain, HermitianMatrix};

type Evaluator = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Operator classification of a scalar function on `(0, ∞)`; `None` means
/// unknown.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct Flags {
    pub op_monotone: Option<bool>,
    pub op_monotone_decreasing: Option<bool>,
    pub op_convex: Option<bool>,
    pub op_concave: Option<bool>,
    pub op_log_convex: Option<bool>,
    pub op_log_concave: Option<bool>,
}

impl Flags {
    fn all(v: bool) -> Self {
        Self {
            op_monotone: Some(v),
            op_monotone_decreasing: Some(v),
            op_convex: Some(v),
            op_concave: Some(v),
            op_log_convex: Some(v),
            op_log_concave: Some(v),
        }
    }

    fn constant() -> Self {
        Self::all(true)
    }

    /// Positive function that is operator monotone and not constant.
    fn increasing() -> Self {
        Self {
            op_monotone: Some(true),
            op_concave: Some(true),
            op_log_concave: Some(true),
            op_monotone_decreasing: Some(false),
            op_convex: Some(false),
            op_log_convex: Some(false),
        }
    }

    /// Positive function that is operator monotone decreasing and not constant.
    fn decreasing() -> Self {
        Self {
            op_monotone: Some(false),
            op_concave: Some(false),
            op_log_concave: Some(false),
            op_monotone_decreasing: Some(true),
            op_convex: Some(true),
            op_log_convex: Some(true),
        }
    }

    /// Classification of `x^α` on `(0, ∞)`.
    pub fn power(alpha: f64) -> Self {
        let monotone = (0.0..=1.0).contains(&alpha);
        let decreasing = (-1.0..=0.0).contains(&alpha);
        Self {
            op_monotone: Some(monotone),
            op_monotone_decreasing: Some(decreasing),
            op_convex: Some(decreasing || (1.0..=2.0).contains(&alpha)),
            op_concave: Some(monotone),
            op_log_convex: Some(decreasing),
            op_log_concave: Some(monotone),
        }
    }
}

/// A named scalar function on `(0, ∞)` with its operator classification.
#[derive(Clone)]
pub struct ScalarFunction {
    id: String,
    eval: Evaluator,
    flags: Flags,
    repr: Option<Representation>,
}

impl fmt::Debug for ScalarFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ScalarFunction")
            .field("id", &self.id)
            .field("flags", &self.flags)
            .field("repr", &self.repr)
            .finish()
    }
}

impl ScalarFunction {
    pub fn new(
        id: impl Into<String>,
        eval: impl Fn(f64) -> f64 + Send + Sync + 'static,
        flags: Flags,
    ) -> Self {
        Self {
            id: id.into(),
            eval: Arc::new(eval),
            flags,
            repr: None,
        }
    }

    pub fn from_representation(repr: Representation) -> Self {
        let flags = match &repr {
            Representation::Decreasing(r) if r.atoms.is_empty() && r.alpha > 0.0 => Flags::constant(),
            Representation::Decreasing(r) if !r.atoms.is_empty() => Flags::decreasing(),
            Representation::Monotone(r) if r.atoms.is_empty() && r.beta == 0.0 && r.alpha > 0.0 => {
                Flags::constant()
            }
            Representation::Monotone(r) if r.atoms.is_empty() && r.beta > 0.0 => Flags {
                op_convex: Some(true),
                ..Flags::increasing()
            },
            Representation::Monotone(r) if !r.atoms.is_empty() => Flags::increasing(),
            Representation::GeneralConvex(_) => Flags {
                op_convex: Some(true),
                ..Flags::default()
            },
            _ => Flags::default(),
        };
        let id = format!("repr:{}", repr.to_json());
        let r = repr.clone();
        Self {
            id,
            eval: Arc::new(move |x| r.eval(x).unwrap_or(f64::NAN)),
            flags,
            repr: Some(repr),
        }
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn flags(&self) -> Flags {
        self.flags
    }

    pub fn representation(&self) -> Option<&Representation> {
        self.repr.as_ref()
    }

    /// Scalar value; `NaN` outside the domain.
    pub fn eval(&self, x: f64) -> f64 {
        if x > 0.0 {
            (self.eval)(x)
        } else {
            f64::NAN
        }
    }

    /// `f(A)` for `A` with spectrum in `(0, ∞)`.
    pub fn lift(&self, a: &HermitianMatrix) -> Result<HermitianMatrix> {
        apply_function(a, Domain::Positive, |x| (self.eval)(x)).map_err(|e| match e {
            Error::Domain { eigenvalue, function } => Error::Domain {
                eigenvalue,
                function: format!("{} ({function})", self.id),
            },
            other => other,
        })
    }
}

impl fmt::Display for ScalarFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.id)
    }
}

fn parse_number(id: &str, raw: &str) -> Result<f64> {
    match raw.trim().parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(Error::Parse(format!("function id {id:?}: bad number {raw:?}"))),
    }
}

fn power(alpha: f64) -> impl Fn(f64) -> f64 + Send + Sync {
    let int = (alpha.fract() == 0.0 && alpha.abs() <= 64.0).then_some(alpha as i32);
    move |x: f64| match int {
        Some(k) => x.powi(k),
        None if alpha == 0.5 => x.sqrt(),
        None => x.powf(alpha),
    }
}

fn log_mean(x: f64) -> f64 {
    let u = x.ln();
    if u.abs() < 1e-8 {
        1.0 + u / 2.0
    } else {
        u.exp_m1() / u
    }
}

/// Resolves a function identifier: `pow:<α>`, `log1p`, `recip-shift:<λ>`,
/// `exp`, `const:<c>`, `logmean`, `repr:<json>`.
pub fn parse_function(id: &str) -> Result<ScalarFunction> {
    let id = id.trim();
    if let Some(json) = id.strip_prefix("repr:") {
        return Ok(ScalarFunction::from_representation(Representation::from_json(json)?));
    }
    let (head, arg) = match id.split_once(':') {
        Some((h, a)) => (h, Some(a)),
        None => (id, None),
    };
    match (head, arg) {
        ("pow", Some(a)) => {
            let alpha = parse_number(id, a)?;
            Ok(ScalarFunction::new(id, power(alpha), Flags::power(alpha)))
        }
        ("recip-shift", Some(a)) => {
            let lambda = parse_number(id, a)?;
            if lambda < 0.0 {
                return Err(Error::Parse(format!("function id {id:?}: shift must be >= 0")));
            }
            Ok(ScalarFunction::new(id, move |x| 1.0 / (x + lambda), Flags::decreasing()))
        }
        ("const", Some(a)) => {
            let c = parse_number(id, a)?;
            if c <= 0.0 {
                return Err(Error::Parse(format!("function id {id:?}: constant must be > 0")));
            }
            Ok(ScalarFunction::new(id, move |_| c, Flags::constant()))
        }
        ("log1p", None) => Ok(ScalarFunction::new(id, f64::ln_1p, Flags::increasing())),
        ("logmean", None) => Ok(ScalarFunction::new(id, log_mean, Flags::increasing())),
        ("exp", None) => Ok(ScalarFunction::new(id, f64::exp, Flags::all(false))),
        _ => Err(Error::UnknownFunction(id.to_string())),
    }
}

/// Identifiers of the built-in catalog.
const CATALOG_IDS: [&str; 14] = [
    "pow:-2",
    "pow:-1",
    "pow:-0.5",
    "pow:0",
    "pow:0.5",
    "pow:1",
    "pow:1.5",
    "pow:2",
    "pow:3",
    "log1p",
    "logmean",
    "recip-shift:1",
    "const:2",
    "exp",
];

/// Classified functions: powers across and outside the operator monotone,
/// decreasing and convex ranges, `log(1+x)`, the logarithmic mean,
/// `1/(x+1)`, a constant, and `eˣ` as a negative control.
pub fn catalog() -> Vec<ScalarFunction> {
    CATALOG_IDS
        .iter()
        .map(|id| parse_function(id).expect("catalog ids parse"))
        .collect()
}
