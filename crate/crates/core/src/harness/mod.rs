//! Randomized and structured checks of the operator log-convexity /
//! log-concavity conditions, the explicit witness constructions, and the
//! mean-pair decomposition used for the monotonicity characterization.
//!
//! Every check reduces to a signed *margin*: nonnegative means the tested
//! inequality holds on that probe, and matrix margins are normalized by
//! `max(1, ‖L‖, ‖R‖)`. A report's verdict is derived from the worst margin
//! over all probes.

mod conditions;
mod decompose;
mod falsify;
mod lemmas;
mod probe;
mod witness;

pub use conditions::{check_condition, evaluate_witness};
pub use decompose::{
    decompose_closed_form, decompose_mean_pair, gamma0, phi, phi_inverse, prop41_chain,
    ChainReport, ChainStep, Decomposition,
};
pub use falsify::{falsify, Template};
pub use lemmas::{lemma22_witness, lemma24_witness};
pub use witness::{replay, VectorJson, Witness};

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hermitian::ToleranceConfig;

/// A checkable condition.
///
/// `a1`–`a13` and `b1`–`b9` follow the decreasing / monotone
/// characterizations; `b10` is midpoint concavity of `A ↦ log⟨ξ, f(A)ξ⟩`
/// (listed as `b8` in an extended labeling). `prop1_1` is convexity of
/// `log ω(f(A))` for positive functionals ω, `prop4_1_fwd` is
/// `f(A∇B) ≥ f(AσB)` for a chosen symmetric σ ≠ ∇, and `f2_14` is
/// `f(A∇_λB) ≤ f(A)#_λ f(B)` over the λ-grid. Operator convexity of `log f`
/// (`log f(A∇B) ≤ log f(A) ∇ log f(B)`) is part of `a11`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ConditionId {
    A1,
    A2,
    A3,
    A4,
    A5,
    A6,
    A7,
    A8,
    A9,
    A10,
    A11,
    A12,
    A13,
    B1,
    B2,
    B3,
    B4,
    B5,
    B6,
    B7,
    B8,
    B9,
    B10,
    Prop1_1,
    Prop41Fwd,
    F2_14,
}

impl ConditionId {
    pub const ALL: [ConditionId; 26] = [
        Self::A1,
        Self::A2,
        Self::A3,
        Self::A4,
        Self::A5,
        Self::A6,
        Self::A7,
        Self::A8,
        Self::A9,
        Self::A10,
        Self::A11,
        Self::A12,
        Self::A13,
        Self::B1,
        Self::B2,
        Self::B3,
        Self::B4,
        Self::B5,
        Self::B6,
        Self::B7,
        Self::B8,
        Self::B9,
        Self::B10,
        Self::Prop1_1,
        Self::Prop41Fwd,
        Self::F2_14,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::A1 => "a1",
            Self::A2 => "a2",
            Self::A3 => "a3",
            Self::A4 => "a4",
            Self::A5 => "a5",
            Self::A6 => "a6",
            Self::A7 => "a7",
            Self::A8 => "a8",
            Self::A9 => "a9",
            Self::A10 => "a10",
            Self::A11 => "a11",
            Self::A12 => "a12",
            Self::A13 => "a13",
            Self::B1 => "b1",
            Self::B2 => "b2",
            Self::B3 => "b3",
            Self::B4 => "b4",
            Self::B5 => "b5",
            Self::B6 => "b6",
            Self::B7 => "b7",
            Self::B8 => "b8",
            Self::B9 => "b9",
            Self::B10 => "b10",
            Self::Prop1_1 => "prop1_1",
            Self::Prop41Fwd => "prop4_1_fwd",
            Self::F2_14 => "f2_14",
        }
    }

    /// Probes for this condition use ordered pairs `A ≥ B`.
    pub(crate) fn ordered(self) -> bool {
        matches!(self, Self::A1 | Self::B1 | Self::A13 | Self::B9)
    }
}

impl fmt::Display for ConditionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ConditionId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .iter()
            .copied()
            .find(|c| c.as_str() == s.trim())
            .ok_or_else(|| Error::UnknownCondition(s.to_string()))
    }
}

impl Serialize for ConditionId {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

impl<'de> Deserialize<'de> for ConditionId {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Parameters of a randomized check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TrialConfig {
    pub dims: Vec<usize>,
    pub trials_per_dim: usize,
    pub seed: u64,
    /// Condition-number cap for random positive definite matrices.
    pub cond_cap: f64,
    pub tol: ToleranceConfig,
    /// Weights in `(0, 1)` used by `a7`/`b7` (together with their
    /// reciprocals) and `f2_14`.
    pub lambda_grid: Vec<f64>,
    /// Symmetric means quantified over by `a2`/`b2`.
    pub means: Vec<String>,
    /// Mean used by `a4`, `b4` and `prop4_1_fwd`; defaults to `harm`, `arith`
    /// and `geom` respectively.
    pub chosen_mean: Option<String>,
    /// Representation payload (`repr:` JSON body) for `a13`/`b9`.
    pub representation: Option<String>,
}

impl Default for TrialConfig {
    fn default() -> Self {
        Self {
            dims: vec![2, 3, 4, 6],
            trials_per_dim: 50,
            seed: 0,
            cond_cap: 1e3,
            tol: ToleranceConfig::default(),
            lambda_grid: vec![0.25, 0.5, 0.75],
            means: vec![
                "harm".into(),
                "geom".into(),
                "arith".into(),
                r#"measure:{"alpha":0.5,"atoms":[[1.0,0.5]]}"#.into(),
                r#"measure:{"alpha":0.0,"atoms":[[0.5,0.5],[2.0,0.5]]}"#.into(),
            ],
            chosen_mean: None,
            representation: None,
        }
    }
}

impl TrialConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParameter(m));
        if self.dims.is_empty() || self.dims.contains(&0) {
            return bad("dims must be a nonempty list of positive integers".into());
        }
        if self.trials_per_dim == 0 {
            return bad("trials_per_dim must be at least 1".into());
        }
        if !(self.cond_cap > 1.0 && self.cond_cap.is_finite()) {
            return bad(format!("cond_cap must exceed 1, got {}", self.cond_cap));
        }
        if self.lambda_grid.is_empty() || self.lambda_grid.iter().any(|&l| !(l > 0.0 && l < 1.0)) {
            return bad("lambda_grid values must lie in (0, 1)".into());
        }
        self.tol.validate()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

impl Verdict {
    /// `Pass` for `worst ≥ −tol`, `Inconclusive` for `−10·tol ≤ worst < −tol`,
    /// `Fail` below that (including non-finite margins).
    pub fn from_margin(worst: f64, tol: f64) -> Self {
        if worst >= -tol {
            Self::Pass
        } else if worst >= -10.0 * tol {
            Self::Inconclusive
        } else {
            Self::Fail
        }
    }
}

/// Outcome of [`check_condition`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConditionReport {
    pub condition: ConditionId,
    pub function: String,
    pub pass: bool,
    pub verdict: Verdict,
    pub trials: usize,
    #[serde(with = "witness::float_or_null")]
    pub worst_margin: f64,
    /// Number of probes whose evaluation raised a domain error.
    pub errored_trials: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diagnostic: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn condition_ids_round_trip() {
        for c in ConditionId::ALL {
            assert_eq!(c.as_str().parse::<ConditionId>().unwrap(), c);
            let json = serde_json::to_string(&c).unwrap();
            assert_eq!(serde_json::from_str::<ConditionId>(&json).unwrap(), c);
        }
        assert!(matches!("a14".parse::<ConditionId>(), Err(Error::UnknownCondition(_))));
    }

    #[test]
    fn verdict_bands() {
        assert_eq!(Verdict::from_margin(0.0, 1e-9), Verdict::Pass);
        assert_eq!(Verdict::from_margin(-1e-9, 1e-9), Verdict::Pass);
        assert_eq!(Verdict::from_margin(-5e-9, 1e-9), Verdict::Inconclusive);
        assert_eq!(Verdict::from_margin(-1e-7, 1e-9), Verdict::Fail);
        assert_eq!(Verdict::from_margin(f64::NEG_INFINITY, 1e-9), Verdict::Fail);
    }

    #[test]
    fn config_validation() {
        assert!(TrialConfig::default().validate().is_ok());
        let c = TrialConfig {
            lambda_grid: vec![1.0],
            ..TrialConfig::default()
        };
        assert!(c.validate().is_err());
        let c = TrialConfig {
            dims: vec![],
            ..TrialConfig::default()
        };
        assert!(c.validate().is_err());
        let c: TrialConfig = serde_json::from_str(r#"{"dims":[2],"trials_per_dim":3}"#).unwrap();
        assert_eq!(c.cond_cap, 1e3);
        assert_eq!(c.dims, vec![2]);
    }
}
