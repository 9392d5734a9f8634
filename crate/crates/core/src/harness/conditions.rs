use rayon::prelude::*;

use super::probe::{matrix_probe, scalar_grid, MatrixProbe, Probe};
use super::witness::{VectorJson, Witness};
use super::{ConditionId, ConditionReport, TrialConfig, Verdict};
use crate::error::{Error, Result};
use crate::hermitian::{
    apply_function, block2_margin, inv_pd, inv_sqrt_pd, spectral_decompose, CVector, Domain, HermitianMatrix, PdMatrix,
    ToleranceConfig,
};
use crate::means::{arithmetic, geometric, harmonic, parse_mean, OperatorMean};
use crate::repr::{parse_function, Representation, ScalarFunction};

/// Resolved inputs shared by all probes of one check.
#[derive(Debug, Clone)]
pub(crate) struct Params {
    pub lambda_grid: Vec<f64>,
    pub means: Vec<OperatorMean>,
    pub chosen: Option<OperatorMean>,
    pub repr: Option<Representation>,
}

impl Params {
    fn labels(&self) -> Vec<(String, String)> {
        let mut out = vec![(
            "lambda_grid".to_string(),
            serde_json::to_string(&self.lambda_grid).expect("grid serializes"),
        )];
        if !self.means.is_empty() {
            let ids: Vec<&str> = self.means.iter().map(|m| m.id()).collect();
            out.push(("means".into(), serde_json::to_string(&ids).expect("ids serialize")));
        }
        if let Some(m) = &self.chosen {
            out.push(("mean".into(), m.id().to_string()));
        }
        if let Some(r) = &self.repr {
            out.push(("representation".into(), r.to_json()));
        }
        out
    }

    fn from_witness(w: &Witness) -> Result<Self> {
        let lambda_grid = match w.label("lambda_grid") {
            Some(s) => serde_json::from_str(s).map_err(|e| Error::Parse(format!("lambda_grid: {e}")))?,
            None => Vec::new(),
        };
        let means = match w.label("means") {
            Some(s) => {
                let ids: Vec<String> =
                    serde_json::from_str(s).map_err(|e| Error::Parse(format!("means: {e}")))?;
                ids.iter().map(|id| parse_mean(id)).collect::<Result<_>>()?
            }
            None => Vec::new(),
        };
        Ok(Self {
            lambda_grid,
            means,
            chosen: w.label("mean").map(parse_mean).transpose()?,
            repr: w.label("representation").map(Representation::from_json).transpose()?,
        })
    }
}

fn is_harmonic(m: &OperatorMean) -> bool {
    m.is_symmetric()
        && m.h().h_at_0() == 0.0
        && (-8..=8).all(|k| {
            let x = 2f64.powi(k);
            (m.h().eval(x) - 2.0 * x / (1.0 + x)).abs() <= 1e-12 * x.max(1.0)
        })
}

fn resolve_params(cond: ConditionId, f: &ScalarFunction, cfg: &TrialConfig) -> Result<Params> {
    use ConditionId::*;
    let means = if matches!(cond, A2 | B2) {
        let means: Vec<OperatorMean> = cfg.means.iter().map(|id| parse_mean(id)).collect::<Result<_>>()?;
        if means.is_empty() {
            return Err(Error::InvalidParameter("mean list is empty".into()));
        }
        if let Some(m) = means.iter().find(|m| !m.is_symmetric()) {
            return Err(Error::InvalidParameter(format!("mean {} is not symmetric", m.id())));
        }
        means
    } else {
        Vec::new()
    };
    let chosen = match cond {
        A4 | B4 | Prop41Fwd => {
            let default = match cond {
                A4 => "harm",
                B4 => "arith",
                _ => "geom",
            };
            let m = parse_mean(cfg.chosen_mean.as_deref().unwrap_or(default))?;
            if !m.is_symmetric() {
                return Err(Error::InvalidParameter(format!("mean {} is not symmetric", m.id())));
            }
            if matches!(cond, A4 | Prop41Fwd) && m.is_arithmetic() {
                return Err(Error::InvalidParameter(format!("{cond} needs a mean other than arith")));
            }
            if cond == B4 && is_harmonic(&m) {
                return Err(Error::InvalidParameter("b4 needs a mean other than harm".into()));
            }
            Some(m)
        }
        _ => None,
    };
    let repr = match cond {
        A13 | B9 => {
            let r = match &cfg.representation {
                Some(json) => Representation::from_json(json)?,
                None => f.representation().cloned().ok_or_else(|| {
                    Error::Precondition(format!(
                        "{cond} needs a representation payload for {}",
                        f.id()
                    ))
                })?,
            };
            let ok = matches!(
                (cond, &r),
                (A13, Representation::Decreasing(_)) | (B9, Representation::Monotone(_))
            );
            if !ok {
                return Err(Error::Precondition(format!(
                    "{cond} needs a {} representation",
                    if cond == A13 { "decreasing" } else { "monotone" }
                )));
            }
            Some(r)
        }
        _ => None,
    };
    Ok(Params {
        lambda_grid: cfg.lambda_grid.clone(),
        means,
        chosen,
        repr,
    })
}

/// `λ_min(R − L) / max(1, ‖L‖, ‖R‖)`: nonnegative iff `L ≤ R`.
fn le_margin(l: &HermitianMatrix, r: &HermitianMatrix) -> Result<f64> {
    let scale = ToleranceConfig::scale(&[l.norm(), r.norm()]);
    Ok((r - l).min_eig()? / scale)
}

/// Scalar margin normalized like the matrix margins.
fn scalar_margin(slack: f64, values: &[f64]) -> f64 {
    let scale = values.iter().fold(1.0f64, |acc, v| acc.max(v.abs()));
    slack / scale
}

fn pd(m: HermitianMatrix) -> Result<PdMatrix> {
    PdMatrix::new(m)
}

fn ln_positive(v: f64, what: &str) -> Result<f64> {
    if v > 0.0 && v.is_finite() {
        Ok(v.ln())
    } else {
        Err(Error::ScalarDomain {
            value: v,
            function: format!("log of {what}"),
        })
    }
}

fn log_matrix(m: &HermitianMatrix) -> Result<HermitianMatrix> {
    apply_function(m, Domain::Positive, f64::ln)
}

struct Lifted<'a> {
    f: &'a ScalarFunction,
    p: &'a MatrixProbe,
    fa: HermitianMatrix,
    fb: HermitianMatrix,
}

impl<'a> Lifted<'a> {
    fn new(f: &'a ScalarFunction, p: &'a MatrixProbe) -> Result<Self> {
        Ok(Self {
            f,
            p,
            fa: f.lift(&p.a)?,
            fb: f.lift(&p.b)?,
        })
    }

    fn f_arith(&self) -> Result<HermitianMatrix> {
        self.f.lift(&arithmetic(&self.p.a, &self.p.b, 0.5)?.into_hermitian())
    }

    fn f_harm(&self) -> Result<HermitianMatrix> {
        self.f.lift(&harmonic(&self.p.a, &self.p.b, 0.5)?.into_hermitian())
    }

    fn mean_of_values(&self, sigma: &OperatorMean) -> Result<HermitianMatrix> {
        Ok(sigma
            .apply(&pd(self.fa.clone())?, &pd(self.fb.clone())?)?
            .into_hermitian())
    }

    fn values_arith(&self) -> HermitianMatrix {
        (&self.fa + &self.fb) * 0.5
    }
}

fn quad(m: &HermitianMatrix, v: &CVector) -> f64 {
    m.quadratic_form(v)
}

fn log_midpoint_slack(fa: f64, fb: f64, fm: f64, what: &str) -> Result<(f64, [f64; 3])> {
    let (la, lb, lm) = (ln_positive(fa, what)?, ln_positive(fb, what)?, ln_positive(fm, what)?);
    Ok((0.5 * (la + lb) - lm, [la, lb, lm]))
}

/// Vectors extremizing `<v, M v> / <v, G v>` for positive definite `G`.
fn pencil_extremes(m: &HermitianMatrix, g: &HermitianMatrix) -> Result<[CVector; 2]> {
    let root = inv_sqrt_pd(&pd(g.clone())?)?;
    let dec = spectral_decompose(&m.sandwich(&root))?;
    let last = dec.eigenvalues.len() - 1;
    let back = |i: usize| root.as_matrix() * dec.eigenvectors.column(i);
    Ok([back(0), back(last)])
}

fn a7_family(
    l: &Lifted,
    lhs: &HermitianMatrix,
    grid: &[f64],
) -> Result<f64> {
    let star = (l.fb.norm() / l.fa.norm()).sqrt();
    let mut lambdas: Vec<f64> = grid.iter().flat_map(|&x| [x, 1.0 / x]).collect();
    lambdas.push(1.0);
    if star.is_finite() && star > 0.0 {
        lambdas.push(star);
    }
    let mut worst = f64::INFINITY;
    for lam in lambdas {
        let rhs = (&(&l.fa * lam) + &(&l.fb * (1.0 / lam))) * 0.5;
        worst = worst.min(le_margin(lhs, &rhs)?);
    }
    Ok(worst)
}

fn repr_margin(r: &Representation, p: &MatrixProbe, decreasing: bool) -> Result<f64> {
    let (ra, rb) = (r.lift(&p.a)?, r.lift(&p.b)?);
    let positivity = rb.min_eig()? / rb.norm().max(1.0);
    let order = if decreasing {
        le_margin(&ra, &rb)?
    } else {
        le_margin(&rb, &ra)?
    };
    Ok(positivity.min(order))
}

fn evaluate_matrix(cond: ConditionId, f: &ScalarFunction, p: &MatrixProbe, params: &Params) -> Result<f64> {
    use ConditionId::*;
    if let (A13 | B9, Some(r)) = (cond, &params.repr) {
        return repr_margin(r, p, cond == A13);
    }
    let l = Lifted::new(f, p)?;
    match cond {
        A1 => le_margin(&l.fa, &l.fb),
        B1 => le_margin(&l.fb, &l.fa),
        A2 | B2 => {
            let fm = l.f_arith()?;
            let mut worst = f64::INFINITY;
            for sigma in &params.means {
                let rhs = l.mean_of_values(sigma)?;
                let m = if cond == A2 { le_margin(&fm, &rhs)? } else { le_margin(&rhs, &fm)? };
                worst = worst.min(m);
            }
            Ok(worst)
        }
        A3 | B3 | A4 | B4 => {
            let sigma = match cond {
                A3 | B3 => OperatorMean::geom(),
                _ => params.chosen.clone().ok_or_else(|| Error::Precondition("no mean chosen".into()))?,
            };
            let fm = l.f_arith()?;
            let rhs = l.mean_of_values(&sigma)?;
            if matches!(cond, A3 | A4) {
                le_margin(&fm, &rhs)
            } else {
                le_margin(&rhs, &fm)
            }
        }
        A5 => block2_margin(&l.fa, &l.f_arith()?, &l.fb),
        B5 => block2_margin(&l.fa, &l.f_harm()?, &l.fb),
        A6 | B6 => {
            let fm = l.f_arith()?;
            let inner = inv_pd(&pd(l.fb.clone())?)?.sandwich(&fm);
            if cond == A6 {
                le_margin(&inner, &l.fa)
            } else {
                le_margin(&l.fa, &inner)
            }
        }
        A7 => a7_family(&l, &l.f_arith()?, &params.lambda_grid),
        B7 => a7_family(&l, &l.f_harm()?, &params.lambda_grid),
        A8 | B10 => {
            let fm = l.f_arith()?;
            let mut pencils = vec![l.fa.clone(), l.fb.clone(), l.values_arith()];
            pencils.push(l.mean_of_values(&OperatorMean::geom())?);
            let mut candidates = vec![p.xi.clone()];
            for g in &pencils {
                candidates.extend(pencil_extremes(&fm, g)?);
            }
            let mut worst = f64::INFINITY;
            for xi in &candidates {
                let (slack, vals) = log_midpoint_slack(
                    quad(&l.fa, xi),
                    quad(&l.fb, xi),
                    quad(&fm, xi),
                    "<xi, f(A) xi>",
                )?;
                let slack = if cond == A8 { slack } else { -slack };
                worst = worst.min(scalar_margin(slack, &vals));
            }
            Ok(worst)
        }
        A9 => {
            let fm = l.f_arith()?;
            let zeta = (&p.xi + &p.eta) * num_complex::Complex64::new(0.5, 0.0);
            let (va, vb, vm) = (quad(&l.fa, &p.xi), quad(&l.fb, &p.eta), quad(&fm, &zeta));
            Ok(scalar_margin(0.5 * (va + vb) - vm, &[va, vb, vm]))
        }
        A10 | A12 => le_margin(&l.f_arith()?, &l.values_arith()),
        A11 => {
            let fm = l.f_arith()?;
            let convex = le_margin(&fm, &l.values_arith())?;
            let (la, lb, lm) = (log_matrix(&l.fa)?, log_matrix(&l.fb)?, log_matrix(&fm)?);
            let log_convex = le_margin(&lm, &((&la + &lb) * 0.5))?;
            Ok(convex.min(log_convex))
        }
        B8 => le_margin(&l.values_arith(), &l.f_arith()?),
        Prop1_1 => {
            let fm = l.f_arith()?;
            let weighted = |m: &HermitianMatrix| p.weight.matmul(m).trace().re;
            let mut worst = f64::INFINITY;
            for (name, [va, vb, vm]) in [
                ("trace", [l.fa.trace(), l.fb.trace(), fm.trace()]),
                ("<xi, . xi>", [quad(&l.fa, &p.xi), quad(&l.fb, &p.xi), quad(&fm, &p.xi)]),
                ("tr(W .)", [weighted(&l.fa), weighted(&l.fb), weighted(&fm)]),
            ] {
                let (slack, vals) = log_midpoint_slack(va, vb, vm, name)?;
                worst = worst.min(scalar_margin(slack, &vals));
            }
            Ok(worst)
        }
        Prop41Fwd => {
            let sigma = params
                .chosen
                .clone()
                .ok_or_else(|| Error::Precondition("no mean chosen".into()))?;
            let lhs = f.lift(&sigma.apply(&p.a, &p.b)?.into_hermitian())?;
            le_margin(&lhs, &l.f_arith()?)
        }
        F2_14 => {
            let mut worst = f64::INFINITY;
            let (fa, fb) = (pd(l.fa.clone())?, pd(l.fb.clone())?);
            for &lam in &params.lambda_grid {
                let lhs = f.lift(&arithmetic(&p.a, &p.b, lam)?.into_hermitian())?;
                let rhs = geometric(&fa, &fb, lam)?;
                worst = worst.min(le_margin(&lhs, &rhs)?);
            }
            Ok(worst)
        }
        A13 | B9 => unreachable!("handled above"),
    }
}

fn evaluate_scalar(cond: ConditionId, f: &ScalarFunction, x: f64, y: f64, params: &Params) -> Result<f64> {
    use ConditionId::*;
    match cond {
        A10 => {
            let (fx, fy, fm) = (f.eval(x), f.eval(y), f.eval(0.5 * (x + y)));
            let (slack, vals) = log_midpoint_slack(fx, fy, fm, "f")?;
            Ok(scalar_margin(slack, &vals))
        }
        A12 => {
            let (fx, fy) = (f.eval(x), f.eval(y));
            if !(fx.is_finite() && fy.is_finite()) {
                return Err(Error::ScalarDomain {
                    value: x,
                    function: f.id().to_string(),
                });
            }
            Ok(scalar_margin(fx - fy, &[fx, fy]))
        }
        A13 | B9 => {
            let r = params
                .repr
                .as_ref()
                .ok_or_else(|| Error::Precondition("no representation".into()))?;
            let (fx, rx) = (f.eval(x), r.eval(x)?);
            if !fx.is_finite() {
                return Err(Error::ScalarDomain {
                    value: x,
                    function: f.id().to_string(),
                });
            }
            Ok(-(fx - rx).abs() / fx.abs().max(1.0))
        }
        _ => Err(Error::Precondition(format!("{cond} has no scalar probes"))),
    }
}

fn evaluate(cond: ConditionId, f: &ScalarFunction, probe: &Probe, params: &Params) -> Result<f64> {
    let m = match probe {
        Probe::Matrix(p) => evaluate_matrix(cond, f, p, params)?,
        Probe::Scalar { x, y } => evaluate_scalar(cond, f, *x, *y, params)?,
    };
    Ok(if m.is_nan() { f64::NEG_INFINITY } else { m })
}

pub(crate) fn scalar_probes(cond: ConditionId) -> Vec<Probe> {
    let grid = scalar_grid();
    match cond {
        ConditionId::A10 => {
            let mut out = Vec::new();
            for i in 0..grid.len() {
                for j in i + 1..grid.len() {
                    out.push(Probe::Scalar { x: grid[i], y: grid[j] });
                }
            }
            out
        }
        ConditionId::A12 => grid
            .windows(2)
            .map(|w| Probe::Scalar { x: w[0], y: w[1] })
            .collect(),
        ConditionId::A13 | ConditionId::B9 => {
            grid.iter().map(|&x| Probe::Scalar { x, y: x }).collect()
        }
        _ => Vec::new(),
    }
}

pub(crate) fn probe_witness(
    cond: ConditionId,
    f: &ScalarFunction,
    probe: &Probe,
    params: &Params,
    margin: f64,
) -> Witness {
    let mut w = Witness::new(cond.as_str());
    w.function = Some(f.id().to_string());
    match probe {
        Probe::Matrix(p) => {
            w.matrices.insert("A".into(), p.a.as_hermitian().clone());
            w.matrices.insert("B".into(), p.b.as_hermitian().clone());
            w.matrices.insert("W".into(), p.weight.clone());
            w.vectors.insert("xi".into(), VectorJson::from(&p.xi));
            w.vectors.insert("eta".into(), VectorJson::from(&p.eta));
            w.labels.insert("family".into(), p.family.into());
        }
        Probe::Scalar { x, y } => {
            w.scalars.insert("x".into(), *x);
            w.scalars.insert("y".into(), *y);
        }
    }
    for (k, v) in params.labels() {
        w.labels.insert(k, v);
    }
    w.margin = margin;
    w
}

/// Evaluates a condition on the probe stored in a witness.
pub fn evaluate_witness(cond: ConditionId, w: &Witness) -> Result<f64> {
    let f = parse_function(
        w.function
            .as_deref()
            .ok_or_else(|| Error::Parse("witness has no function".into()))?,
    )?;
    let params = Params::from_witness(w)?;
    let probe = if w.matrices.contains_key("A") {
        Probe::Matrix(MatrixProbe {
            a: PdMatrix::new(w.matrix("A")?.clone())?,
            b: PdMatrix::new(w.matrix("B")?.clone())?,
            xi: w.vector("xi")?,
            eta: w.vector("eta")?,
            weight: w.matrix("W")?.clone(),
            family: "replay",
        })
    } else {
        Probe::Scalar {
            x: w.scalar("x")?,
            y: w.scalar("y")?,
        }
    };
    evaluate(cond, &f, &probe, &params)
}

pub(crate) struct Evaluated {
    pub margin: f64,
    pub error: Option<String>,
}

fn run_probe(
    cond: ConditionId,
    f: &ScalarFunction,
    params: &Params,
    probe: Result<Probe>,
) -> Evaluated {
    match probe.and_then(|p| evaluate(cond, f, &p, params)) {
        Ok(margin) => Evaluated { margin, error: None },
        Err(e) => Evaluated {
            margin: f64::NEG_INFINITY,
            error: Some(e.to_string()),
        },
    }
}

pub(crate) fn random_probe(cond: ConditionId, cfg: &TrialConfig, dim: usize, trial: usize) -> Result<Probe> {
    matrix_probe(cfg.seed, dim, trial, cfg.cond_cap, cond.ordered()).map(Probe::Matrix)
}

/// Evaluates all random probes of `cfg` in parallel, in a fixed order.
pub(crate) fn evaluate_random(
    cond: ConditionId,
    f: &ScalarFunction,
    params: &Params,
    cfg: &TrialConfig,
) -> Vec<((usize, usize), Evaluated)> {
    let keys: Vec<(usize, usize)> = cfg
        .dims
        .iter()
        .flat_map(|&d| (0..cfg.trials_per_dim).map(move |t| (d, t)))
        .collect();
    keys.into_par_iter()
        .map(|(d, t)| ((d, t), run_probe(cond, f, params, random_probe(cond, cfg, d, t))))
        .collect()
}

pub(crate) fn params_for(cond: ConditionId, f: &ScalarFunction, cfg: &TrialConfig) -> Result<Params> {
    resolve_params(cond, f, cfg)
}

pub(crate) fn evaluate_probe(cond: ConditionId, f: &ScalarFunction, probe: &Probe, params: &Params) -> Evaluated {
    match evaluate(cond, f, probe, params) {
        Ok(margin) => Evaluated { margin, error: None },
        Err(e) => Evaluated {
            margin: f64::NEG_INFINITY,
            error: Some(e.to_string()),
        },
    }
}

/// Checks a condition for `f` over the random trials of `cfg` (plus the
/// scalar grid for the conditions with a numerical part) and reports the
/// worst margin. Domain errors inside a probe count as a failed probe with
/// margin `-inf`.
pub fn check_condition(cond: ConditionId, f: &ScalarFunction, cfg: &TrialConfig) -> Result<ConditionReport> {
    cfg.validate()?;
    let params = resolve_params(cond, f, cfg)?;

    enum Source {
        Random(usize, usize),
        Scalar(Probe),
    }
    let mut results: Vec<(Source, Evaluated)> = evaluate_random(cond, f, &params, cfg)
        .into_iter()
        .map(|((d, t), e)| (Source::Random(d, t), e))
        .collect();
    for probe in scalar_probes(cond) {
        let e = evaluate_probe(cond, f, &probe, &params);
        results.push((Source::Scalar(probe), e));
    }

    let trials = results.len();
    let errored = results.iter().filter(|(_, e)| e.error.is_some()).count();
    let first_min = |finite_only: bool| {
        let mut best: Option<usize> = None;
        for (i, (_, e)) in results.iter().enumerate() {
            if finite_only && !e.margin.is_finite() {
                continue;
            }
            if best.is_none_or(|b| e.margin < results[b].1.margin) {
                best = Some(i);
            }
        }
        best
    };
    let worst_margin = results[first_min(false).unwrap_or(0)].1.margin;
    let verdict = Verdict::from_margin(worst_margin, cfg.tol.tol_order);
    let pass = verdict == Verdict::Pass;
    // Witness: the worst finite violation if any, else the worst probe.
    let witness_idx = match first_min(true) {
        Some(i) if results[i].1.margin < -cfg.tol.tol_order => i,
        _ => first_min(false).unwrap_or(0),
    };
    let witness = if pass {
        None
    } else {
        let (source, e) = &results[witness_idx];
        let probe = match source {
            Source::Random(d, t) => random_probe(cond, cfg, *d, *t)?,
            Source::Scalar(p) => p.clone(),
        };
        Some(probe_witness(cond, f, &probe, &params, e.margin))
    };
    Ok(ConditionReport {
        condition: cond,
        function: f.id().to_string(),
        pass,
        verdict,
        trials,
        worst_margin,
        errored_trials: errored,
        diagnostic: results
            .iter()
            .find_map(|(_, e)| e.error.clone()),
        witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::replay;

    fn quick() -> TrialConfig {
        TrialConfig {
            dims: vec![2, 3],
            trials_per_dim: 12,
            seed: 11,
            ..TrialConfig::default()
        }
    }

    fn check(cond: &str, f: &str) -> ConditionReport {
        check_condition(cond.parse().unwrap(), &parse_function(f).unwrap(), &quick()).unwrap()
    }

    #[test]
    fn reciprocal_is_log_convex_and_square_is_not() {
        let r = check("a3", "pow:-1");
        assert!(r.pass, "{r:?}");
        assert!(r.witness.is_none());
        let r = check("a3", "pow:2");
        assert_eq!(r.verdict, Verdict::Fail);
        let w = r.witness.unwrap();
        assert_eq!(replay(&w).unwrap(), w.margin);
    }

    #[test]
    fn square_root_is_log_concave() {
        assert!(check("b3", "pow:0.5").pass);
        assert!(!check("b3", "pow:2").pass);
    }

    #[test]
    fn shifted_reciprocal_block_condition() {
        assert!(check("a5", "recip-shift:1").pass);
        assert!(check("a6", "recip-shift:1").pass);
    }

    #[test]
    fn report_is_deterministic() {
        let a = serde_json::to_string(&check("a7", "pow:1.5")).unwrap();
        let b = serde_json::to_string(&check("a7", "pow:1.5")).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn scalar_parts() {
        let r = check("a12", "pow:0.5");
        assert!(!r.pass);
        let w = r.witness.unwrap();
        assert_eq!(replay(&w).unwrap(), w.margin);
        assert!(check("a10", "pow:-0.5").pass);
    }

    #[test]
    fn representation_conditions() {
        let f = parse_function(r#"repr:{"kind":"decreasing","alpha":0.2,"atoms":[[0,1],[3,0.5]]}"#).unwrap();
        let r = check_condition(ConditionId::A13, &f, &quick()).unwrap();
        assert!(r.pass, "{r:?}");
        let plain = parse_function("pow:-1").unwrap();
        assert!(matches!(
            check_condition(ConditionId::A13, &plain, &quick()),
            Err(Error::Precondition(_))
        ));
        let mut cfg = quick();
        cfg.representation = Some(r#"{"kind":"decreasing","alpha":0,"atoms":[[0,1]]}"#.into());
        assert!(check_condition(ConditionId::A13, &plain, &cfg).unwrap().pass);
        // mismatched representation data fails the grid comparison
        let other = parse_function("pow:-0.5").unwrap();
        let r = check_condition(ConditionId::A13, &other, &cfg).unwrap();
        assert!(!r.pass);
        let w = r.witness.unwrap();
        assert_eq!(replay(&w).unwrap(), w.margin);
    }

    #[test]
    fn mean_choices_are_validated() {
        let f = parse_function("pow:-1").unwrap();
        let mut cfg = quick();
        cfg.chosen_mean = Some("arith".into());
        assert!(check_condition(ConditionId::A4, &f, &cfg).is_err());
        cfg.chosen_mean = Some("harm".into());
        assert!(check_condition(ConditionId::B4, &f, &cfg).is_err());
        cfg.chosen_mean = Some("geom:0.3".into());
        assert!(check_condition(ConditionId::A4, &f, &cfg).is_err());
        let mut cfg = quick();
        cfg.means.push("arith:0.3".into());
        assert!(check_condition(ConditionId::A2, &f, &cfg).is_err());
    }

    #[test]
    fn domain_errors_become_failed_probes() {
        // log(1+x) - style functions are fine; log x itself takes negative values
        let f = ScalarFunction::new("log", f64::ln, Default::default());
        let r = check_condition(ConditionId::A8, &f, &quick()).unwrap();
        assert!(!r.pass);
        assert!(r.errored_trials > 0);
        assert_eq!(r.worst_margin, f64::NEG_INFINITY);
        assert!(r.diagnostic.is_some());
    }
}
