use std::fmt;
use std::str::FromStr;

use super::conditions::{evaluate_probe, params_for, probe_witness, random_probe, scalar_probes};
use super::lemmas::lemma24_witness;
use super::probe::{structured_probes, Probe};
use super::witness::Witness;
use super::{ConditionId, TrialConfig};
use crate::error::{Error, Result};
use crate::repr::ScalarFunction;

/// What to search a counterexample for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Template {
    Condition(ConditionId),
    /// `H ≥ K` without `s(H₊) ≥ s(K₊)`.
    SupportOrder,
}

impl FromStr for Template {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "support-order" => Ok(Self::SupportOrder),
            _ => s.parse().map(Self::Condition),
        }
    }
}

impl fmt::Display for Template {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Condition(c) => write!(f, "{c}"),
            Self::SupportOrder => f.write_str("support-order"),
        }
    }
}

const SUPPORT_ORDER_EPS: [f64; 4] = [0.1, 0.05, 0.2, 0.3];

/// Searches for a probe with margin below `-tol_order`: structured
/// projection pairs first, then the scalar grid, then the random trials in
/// `(dim, trial)` order. Returns the first hit, or `None`.
pub fn falsify(template: Template, f: Option<&ScalarFunction>, cfg: &TrialConfig) -> Result<Option<Witness>> {
    cfg.validate()?;
    let tol = cfg.tol.tol_order;
    let cond = match template {
        Template::SupportOrder => {
            for eps in SUPPORT_ORDER_EPS {
                let mut w = lemma24_witness(eps)?;
                if w.margin < -tol {
                    w.kind = "support-order".into();
                    return Ok(Some(w));
                }
            }
            return Ok(None);
        }
        Template::Condition(c) => c,
    };
    let f = f.ok_or_else(|| Error::InvalidParameter(format!("template {cond} needs a function")))?;
    let params = params_for(cond, f, cfg)?;
    let try_probe = |probe: &Probe| {
        let e = evaluate_probe(cond, f, probe, &params);
        (e.margin < -tol).then(|| probe_witness(cond, f, probe, &params, e.margin))
    };
    for p in structured_probes(cond.ordered())? {
        if let Some(w) = try_probe(&Probe::Matrix(p)) {
            return Ok(Some(w));
        }
    }
    for p in scalar_probes(cond) {
        if let Some(w) = try_probe(&p) {
            return Ok(Some(w));
        }
    }
    for &dim in &cfg.dims {
        for trial in 0..cfg.trials_per_dim {
            if let Some(w) = try_probe(&random_probe(cond, cfg, dim, trial)?) {
                return Ok(Some(w));
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::replay;
    use crate::repr::parse_function;

    #[test]
    fn template_parsing() {
        assert_eq!("support-order".parse::<Template>().unwrap(), Template::SupportOrder);
        assert_eq!("a3".parse::<Template>().unwrap(), Template::Condition(ConditionId::A3));
        assert!("zz".parse::<Template>().is_err());
    }

    #[test]
    fn support_order_counterexample() {
        let w = falsify(Template::SupportOrder, None, &TrialConfig::default()).unwrap().unwrap();
        assert_eq!(w.kind, "support-order");
        assert!(w.margin < 0.0);
        assert_eq!(replay(&w).unwrap(), w.margin);
    }

    #[test]
    fn square_is_not_log_convex() {
        let f = parse_function("pow:2").unwrap();
        let w = falsify(Template::Condition(ConditionId::A3), Some(&f), &TrialConfig::default())
            .unwrap()
            .unwrap();
        assert!(w.margin < -1e-9);
        assert_eq!(replay(&w).unwrap(), w.margin);
    }

    #[test]
    fn reciprocal_has_no_a3_counterexample() {
        let f = parse_function("pow:-1").unwrap();
        let cfg = TrialConfig {
            dims: vec![2, 3],
            trials_per_dim: 8,
            ..TrialConfig::default()
        };
        assert!(falsify(Template::Condition(ConditionId::A3), Some(&f), &cfg).unwrap().is_none());
    }
}
