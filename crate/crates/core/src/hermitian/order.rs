use serde::{Deserialize, Serialize};

use super::{HermitianMatrix, ToleranceConfig};
use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Relation {
    Geq,
    Leq,
    Eq,
    Incomparable,
}

/// Outcome of a Löwner comparison.
///
/// `geq_margin` is `λ_min(A − B) / scale` and `leq_margin` is
/// `λ_min(B − A) / scale`, with `scale = max(1, ‖A‖, ‖B‖)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LownerVerdict {
    pub relation: Relation,
    /// Signed margin of the reported relation (for `Incomparable`, the larger
    /// of the two, which is negative).
    pub margin: f64,
    pub geq_margin: f64,
    pub leq_margin: f64,
    pub scale: f64,
}

impl LownerVerdict {
    pub fn is_geq(&self) -> bool {
        matches!(self.relation, Relation::Geq | Relation::Eq)
    }

    pub fn is_leq(&self) -> bool {
        matches!(self.relation, Relation::Leq | Relation::Eq)
    }
}

pub fn lowner_compare(
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    cfg: &ToleranceConfig,
) -> Result<LownerVerdict> {
    a.check_same_dim(b)?;
    let scale = ToleranceConfig::scale(&[a.norm(), b.norm()]);
    let diff = a - b;
    let ev = diff.eigenvalues()?;
    let geq_margin = ev[0] / scale;
    let leq_margin = -ev[ev.len() - 1] / scale;
    let geq = geq_margin >= -cfg.tol_order;
    let leq = leq_margin >= -cfg.tol_order;
    let (relation, margin) = match (geq, leq) {
        (true, true) => (Relation::Eq, geq_margin.min(leq_margin)),
        (true, false) => (Relation::Geq, geq_margin),
        (false, true) => (Relation::Leq, leq_margin),
        (false, false) => (Relation::Incomparable, geq_margin.max(leq_margin)),
    };
    Ok(LownerVerdict {
        relation,
        margin,
        geq_margin,
        leq_margin,
        scale,
    })
}

/// Smallest eigenvalue of `[[X, Z], [Z, Y]]` divided by
/// `max(1, ‖X‖, ‖Y‖, ‖Z‖)`.
pub fn block2_margin(
    x: &HermitianMatrix,
    z: &HermitianMatrix,
    y: &HermitianMatrix,
) -> Result<f64> {
    let block = HermitianMatrix::block2(x, z, y)?;
    let scale = ToleranceConfig::scale(&[x.norm(), y.norm(), z.norm()]);
    Ok(block.min_eig()? / scale)
}

/// Whether the 2×2 block operator `[[X, Z], [Z, Y]]` is PSD within `tol_order`.
pub fn block2_psd(
    x: &HermitianMatrix,
    z: &HermitianMatrix,
    y: &HermitianMatrix,
    cfg: &ToleranceConfig,
) -> Result<bool> {
    Ok(block2_margin(x, z, y)? >= -cfg.tol_order)
}
