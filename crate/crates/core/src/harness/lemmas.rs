use std::f64::consts::FRAC_PI_2;

use super::probe::{projection_pair, regularized_projections};
use super::witness::Witness;
use crate::error::{Error, Result};
use crate::hermitian::{
    jordan_decompose, lowner_compare, projection_meet, support_projection, HermitianMatrix,
    OrthProjection, ToleranceConfig,
};
use crate::means::{parse_mean, OperatorMean};

fn le_margin(l: &HermitianMatrix, r: &HermitianMatrix) -> Result<f64> {
    let scale = ToleranceConfig::scale(&[l.norm(), r.norm()]);
    Ok((r - l).min_eig()? / scale)
}

/// Margin of `(P∇Q + εI)² ≤ (P+εI) σ (Q+εI)`.
fn projection_core(theta: f64, eps: f64, sigma: &OperatorMean) -> Result<(HermitianMatrix, HermitianMatrix, f64)> {
    let (pe, qe) = regularized_projections(theta, eps, 1.0)?;
    let lhs = ((&*pe + &*qe) * 0.5).square();
    let rhs = sigma.apply(&pe, &qe)?.into_hermitian();
    let margin = le_margin(&lhs, &rhs)?;
    Ok((lhs, rhs, margin))
}

/// Projection witness for symmetric means: `P = diag(1,0)`, `Q(θ)` the
/// projection onto `(cos θ, sin θ)`.
///
/// Records `(P∇Q)² = ¼(P+Q+PQ+QP)`, the bound `2cos²θ/(1+cos²θ)` that
/// `2α−1` must exceed for `(P∇Q)² ≤ PσQ` to hold, the implied lower bound on
/// `α`, the `α` of `σ` (twice `lim h(x)/x`), and the margin of the
/// regularized inequality `(P∇Q + εI)² ≤ (P+εI) σ (Q+εI)`.
pub fn lemma22_witness(theta: f64, eps: f64, sigma: &OperatorMean) -> Result<Witness> {
    if !(theta > 0.0 && theta < FRAC_PI_2) {
        return Err(Error::InvalidParameter(format!("theta must lie in (0, pi/2), got {theta}")));
    }
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::InvalidParameter(format!("eps must be positive, got {eps}")));
    }
    if !sigma.is_symmetric() {
        return Err(Error::InvalidParameter(format!("mean {} is not symmetric", sigma.id())));
    }
    let cfg = ToleranceConfig::default();
    let (p, q) = projection_pair(theta);
    let arith = (&p + &q) * 0.5;
    let square = arith.square();
    let expanded = (&(&p + &q) + &p.anticommutator(&q)) * 0.25;
    let meet = projection_meet(
        &OrthProjection::new(p.clone(), &cfg)?,
        &OrthProjection::new(q.clone(), &cfg)?,
        &cfg,
    )?;
    let c2 = theta.cos().powi(2);
    let bound = 2.0 * c2 / (1.0 + c2);
    let alpha_sigma = 2.0 * sigma.h().h_at_0();
    let (lhs, rhs, margin) = projection_core(theta, eps, sigma)?;

    let mut w = Witness::new("lemma22");
    for (name, m) in [
        ("P", p),
        ("Q", q),
        ("P_arith_Q_squared", square.clone()),
        ("quarter_expansion", expanded.clone()),
        ("meet", meet.into_hermitian()),
        ("lhs", lhs),
        ("rhs", rhs),
    ] {
        w.matrices.insert(name.into(), m);
    }
    for (name, v) in [
        ("theta", theta),
        ("eps", eps),
        ("bound", bound),
        ("alpha_lower_bound", 0.5 + 0.5 * bound),
        ("alpha_sigma", alpha_sigma),
        ("expansion_residual", square.max_abs_diff(&expanded)),
    ] {
        w.scalars.insert(name.into(), v);
    }
    w.labels.insert("mean".into(), sigma.id().to_string());
    w.labels.insert(
        "violated".into(),
        (margin < -cfg.tol_order).to_string(),
    );
    w.margin = margin;
    Ok(w)
}

pub(crate) fn lemma22_margin(w: &Witness) -> Result<f64> {
    let sigma = parse_mean(w.label("mean").unwrap_or("harm"))?;
    Ok(projection_core(w.scalar("theta")?, w.scalar("eps")?, &sigma)?.2)
}

/// `H = P`, `K = εQ − (I − Q)` with `Q` the projection onto `(1,1)/√2`, and
/// the margin of `s(H₊) ≥ s(K₊)`.
fn support_pair(eps: f64) -> Result<SupportPair> {
    let cfg = ToleranceConfig::default();
    let (p, _) = projection_pair(0.0);
    let (_, q) = projection_pair(std::f64::consts::FRAC_PI_4);
    let h = p.clone();
    let k = &(&q * eps) - &(&HermitianMatrix::identity(2) - &q);
    let diff = &h - &k;
    let (h_plus, _) = jordan_decompose(&h)?;
    let (k_plus, _) = jordan_decompose(&k)?;
    let sh = support_projection(&h_plus, &cfg)?;
    let sk = support_projection(&k_plus, &cfg)?;
    let verdict = lowner_compare(&sh, &sk, &cfg)?;
    let meet = projection_meet(&sh, &sk, &cfg)?;
    Ok(SupportPair {
        h,
        k,
        diff,
        h_plus: h_plus.into_hermitian(),
        k_plus: k_plus.into_hermitian(),
        sh: sh.into_hermitian(),
        sk: sk.into_hermitian(),
        meet: meet.into_hermitian(),
        verdict,
    })
}

struct SupportPair {
    h: HermitianMatrix,
    k: HermitianMatrix,
    diff: HermitianMatrix,
    h_plus: HermitianMatrix,
    k_plus: HermitianMatrix,
    sh: HermitianMatrix,
    sk: HermitianMatrix,
    meet: HermitianMatrix,
    verdict: crate::hermitian::LownerVerdict,
}

fn det2(m: &HermitianMatrix) -> f64 {
    (m.get(0, 0) * m.get(1, 1) - m.get(0, 1) * m.get(1, 0)).re
}

/// Support-projection witness for `0 < ε < 1/3`: `H > K` (with
/// `det(H−K) = (1−3ε)/2`) while `s(H₊) = P` and `s(K₊) = Q` are
/// incomparable. The margin is that of `s(H₊) ≥ s(K₊)`.
pub fn lemma24_witness(eps: f64) -> Result<Witness> {
    if !(eps > 0.0 && eps < 1.0 / 3.0) {
        return Err(Error::InvalidParameter(format!("eps must lie in (0, 1/3), got {eps}")));
    }
    let l = support_pair(eps)?;
    let mut w = Witness::new("lemma24");
    let det = det2(&l.diff);
    let diff_min = l.diff.min_eig()?;
    for (name, v) in [
        ("eps", eps),
        ("det", det),
        ("det_expected", (1.0 - 3.0 * eps) / 2.0),
        ("trace", l.diff.trace()),
        ("diff_min_eig", diff_min),
        ("support_geq_margin", l.verdict.geq_margin),
    ] {
        w.scalars.insert(name.into(), v);
    }
    w.labels.insert(
        "diff_relation".into(),
        if diff_min > 0.0 { "PD" } else { "NOT_PD" }.into(),
    );
    w.labels.insert(
        "support_relation".into(),
        serde_json::to_value(l.verdict.relation)
            .ok()
            .and_then(|v| v.as_str().map(String::from))
            .unwrap_or_default(),
    );
    w.margin = l.verdict.geq_margin;
    for (name, m) in [
        ("H", l.h),
        ("K", l.k),
        ("H_minus_K", l.diff),
        ("H_plus", l.h_plus),
        ("K_plus", l.k_plus),
        ("support_H_plus", l.sh),
        ("support_K_plus", l.sk),
        ("meet", l.meet),
    ] {
        w.matrices.insert(name.into(), m);
    }
    Ok(w)
}

pub(crate) fn lemma24_margin(w: &Witness) -> Result<f64> {
    Ok(support_pair(w.scalar("eps")?)?.verdict.geq_margin)
}
