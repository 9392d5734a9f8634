use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use opmeans_core::harness::{
    check_condition, decompose_closed_form, decompose_mean_pair, falsify, lemma22_witness,
    lemma24_witness, prop41_chain, ConditionId, Template, TrialConfig, Verdict,
};
use opmeans_core::hermitian::{HermitianMatrix, MatrixJson, PdMatrix, PsdMatrix, ToleranceConfig};
use opmeans_core::means::{parse_mean, psd_extend, OperatorMean, DEFAULT_EPS_SCHEDULE};
use opmeans_core::repr::{catalog, parse_function};
use serde::Serialize;
use serde_json::json;

#[derive(Parser)]
#[command(name = "opmeans", version, about = "Operator means, Löwner order checks and witnesses")]
struct Cli {
    /// Write the JSON result to this file instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a binary mean.
    Mean {
        #[arg(long)]
        mean: String,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        /// Weight for arith/harm/geom (overrides any weight in the id).
        #[arg(long)]
        lambda: Option<f64>,
        /// Accept positive semidefinite inputs via an ε-regularization schedule.
        #[arg(long)]
        psd: bool,
        /// Dimension for shorthand inputs such as `I` or `2`.
        #[arg(long)]
        dim: Option<usize>,
    },
    /// Run a randomized condition check. Exit 0 pass, 1 fail, 4 inconclusive.
    Check {
        #[arg(long = "cond")]
        condition: String,
        #[arg(long = "fn")]
        function: String,
        #[command(flatten)]
        trials: TrialArgs,
    },
    /// Search for a counterexample to a condition or to `support-order`.
    Falsify {
        #[arg(long)]
        template: String,
        #[arg(long = "fn")]
        function: Option<String>,
        #[command(flatten)]
        trials: TrialArgs,
    },
    /// Build a constructive witness.
    Witness {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long)]
        theta: Option<f64>,
        #[arg(long)]
        eps: Option<f64>,
        /// Symmetric mean for `lemma22`.
        #[arg(long, default_value = "harm")]
        mean: String,
    },
    /// List the built-in scalar functions and their known properties.
    Catalog,
    /// Find A, B with A∇B = X and AσB = Y.
    Decompose {
        #[arg(long)]
        mean: String,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        #[arg(long, value_enum, default_value_t = Method::Phi)]
        method: Method,
        #[arg(long)]
        dim: Option<usize>,
    },
    /// Run the chain X_k = γᵏX + (1−γᵏ)Y. Exit 0 when every step holds, 1 otherwise.
    Chain {
        #[arg(long, default_value = "geom")]
        mean: String,
        #[arg(long = "fn", default_value = "pow:0.5")]
        function: String,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        #[arg(long)]
        gamma: f64,
        #[arg(long, default_value_t = 10)]
        k: usize,
        #[arg(long)]
        dim: Option<usize>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Lemma22,
    Lemma24,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Phi,
    Closed,
}

#[derive(clap::Args)]
struct TrialArgs {
    #[arg(long)]
    trials: Option<usize>,
    /// Comma-separated dimensions.
    #[arg(long, value_delimiter = ',')]
    dims: Option<Vec<usize>>,
    #[arg(long, env = "OPMEANS_SEED")]
    seed: Option<u64>,
    /// Relative Löwner tolerance.
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    cond_cap: Option<f64>,
    /// Comma-separated λ grid.
    #[arg(long, value_delimiter = ',')]
    lambda_grid: Option<Vec<f64>>,
    /// Mean for a4, b4 and prop4_1_fwd.
    #[arg(long)]
    mean: Option<String>,
    /// Representation JSON (or file) for a13 and b9.
    #[arg(long)]
    representation: Option<String>,
}

impl TrialArgs {
    fn config(&self) -> Result<TrialConfig, Failure> {
        let mut cfg = TrialConfig::default();
        if let Some(t) = self.trials {
            cfg.trials_per_dim = t;
        }
        if let Some(d) = &self.dims {
            cfg.dims = d.clone();
        }
        if let Some(s) = self.seed {
            cfg.seed = s;
        }
        if let Some(t) = self.tol {
            cfg.tol.tol_order = t;
        }
        if let Some(c) = self.cond_cap {
            cfg.cond_cap = c;
        }
        if let Some(g) = &self.lambda_grid {
            cfg.lambda_grid = g.clone();
        }
        cfg.chosen_mean = self.mean.clone();
        cfg.representation = self.representation.as_deref().map(read_text).transpose()?;
        cfg.validate()?;
        Ok(cfg)
    }
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn parse(message: impl Into<String>) -> Self {
        Self { code: 2, message: message.into() }
    }
}

impl From<opmeans_core::Error> for Failure {
    fn from(e: opmeans_core::Error) -> Self {
        Self {
            code: if e.is_parse_error() { 2 } else { 3 },
            message: e.to_string(),
        }
    }
}

/// Inline JSON, or the contents of a file when the argument is not JSON.
fn read_text(arg: &str) -> Result<String, Failure> {
    let t = arg.trim();
    if t.starts_with('{') || t.starts_with('[') {
        return Ok(t.to_string());
    }
    fs::read_to_string(Path::new(arg)).map_err(|e| Failure::parse(format!("cannot read {arg}: {e}")))
}

enum MatrixArg {
    Full(HermitianMatrix),
    /// `c·I` of a dimension fixed by context.
    Multiple(f64),
}

fn parse_number(s: &str) -> Option<f64> {
    s.trim().parse::<f64>().ok().filter(|v| v.is_finite())
}

/// Accepts `2`, `I`, `2I`, `diag(2,1)`, `[[..]]` real rows, the
/// `{"dim","re","im"}` object, or a file holding either JSON form.
fn parse_matrix_arg(arg: &str) -> Result<MatrixArg, Failure> {
    let s = arg.trim();
    if s == "I" {
        return Ok(MatrixArg::Multiple(1.0));
    }
    if let Some(c) = s.strip_suffix('I').and_then(parse_number) {
        return Ok(MatrixArg::Multiple(c));
    }
    if let Some(c) = parse_number(s) {
        return Ok(MatrixArg::Multiple(c));
    }
    if let Some(body) = s.strip_prefix("diag(").and_then(|r| r.strip_suffix(')')) {
        let values = body
            .split(',')
            .map(|v| parse_number(v).ok_or_else(|| Failure::parse(format!("bad diagonal entry {v:?}"))))
            .collect::<Result<Vec<_>, _>>()?;
        return Ok(MatrixArg::Full(HermitianMatrix::diag(&values)));
    }
    let text = read_text(s)?;
    let value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| Failure::parse(format!("matrix JSON: {e}")))?;
    if value.is_array() {
        let rows: Vec<Vec<f64>> =
            serde_json::from_value(value).map_err(|e| Failure::parse(format!("matrix rows: {e}")))?;
        return Ok(MatrixArg::Full(HermitianMatrix::from_rows(&rows)?));
    }
    let m: MatrixJson =
        serde_json::from_value(value).map_err(|e| Failure::parse(format!("matrix JSON: {e}")))?;
    Ok(MatrixArg::Full(m.to_hermitian()?))
}

/// Parses a pair of matrix arguments, sizing `c·I` shorthands from `--dim`,
/// the other argument, or 1.
fn parse_pair(a: &str, b: &str, dim: Option<usize>) -> Result<(HermitianMatrix, HermitianMatrix), Failure> {
    let (a, b) = (parse_matrix_arg(a)?, parse_matrix_arg(b)?);
    let inferred = match (&a, &b) {
        (MatrixArg::Full(m), _) | (_, MatrixArg::Full(m)) => m.dim(),
        _ => 1,
    };
    let n = dim.unwrap_or(inferred);
    let resolve = |m: MatrixArg| -> Result<HermitianMatrix, Failure> {
        match m {
            MatrixArg::Full(m) => Ok(m),
            MatrixArg::Multiple(c) => {
                if n == 0 {
                    return Err(Failure::parse("--dim must be positive"));
                }
                Ok(HermitianMatrix::scaled_identity(n, c))
            }
        }
    };
    Ok((resolve(a)?, resolve(b)?))
}

fn parse_pd_pair(x: &str, y: &str, dim: Option<usize>) -> Result<(PdMatrix, PdMatrix), Failure> {
    let (x, y) = parse_pair(x, y, dim)?;
    Ok((PdMatrix::new(x)?, PdMatrix::new(y)?))
}

fn weighted_mean(id: &str, lambda: Option<f64>) -> Result<OperatorMean, Failure> {
    let Some(w) = lambda else {
        return Ok(parse_mean(id)?);
    };
    let base = id.split(':').next().unwrap_or(id);
    Ok(match base {
        "arith" => OperatorMean::arithmetic(w)?,
        "harm" => OperatorMean::harmonic(w)?,
        "geom" => OperatorMean::geometric(w)?,
        _ => return Err(Failure::parse(format!("--lambda applies only to arith, harm and geom, not {id}"))),
    })
}

struct Outcome {
    value: serde_json::Value,
    code: u8,
}

fn ok<T: Serialize>(v: &T) -> Result<Outcome, Failure> {
    Ok(Outcome {
        value: serde_json::to_value(v).map_err(|e| Failure { code: 3, message: e.to_string() })?,
        code: 0,
    })
}

fn run(command: Command) -> Result<Outcome, Failure> {
    match command {
        Command::Mean { mean, a, b, lambda, psd, dim } => {
            let sigma = weighted_mean(&mean, lambda)?;
            let (a, b) = parse_pair(&a, &b, dim)?;
            if psd {
                let ext = psd_extend(&sigma, &PsdMatrix::new(a)?, &PsdMatrix::new(b)?, &DEFAULT_EPS_SCHEDULE)?;
                ok(&json!({
                    "mean": sigma.id(),
                    "value": ext.value,
                    "gap": ext.gap,
                    "gaps": ext.gaps,
                    "schedule": ext.schedule,
                }))
            } else {
                let v = sigma.apply(&PdMatrix::new(a)?, &PdMatrix::new(b)?)?;
                ok(v.as_hermitian())
            }
        }
        Command::Check { condition, function, trials } => {
            let cond: ConditionId = condition.parse()?;
            let f = parse_function(&function)?;
            let report = check_condition(cond, &f, &trials.config()?)?;
            let code = match report.verdict {
                Verdict::Pass => 0,
                Verdict::Fail => 1,
                Verdict::Inconclusive => 4,
            };
            Ok(Outcome { code, ..ok(&report)? })
        }
        Command::Falsify { template, function, trials } => {
            let t: Template = template.parse()?;
            let f = function.as_deref().map(parse_function).transpose()?;
            let w = falsify(t, f.as_ref(), &trials.config()?)?;
            ok(&json!({
                "template": t.to_string(),
                "function": function,
                "found": w.is_some(),
                "witness": w,
            }))
        }
        Command::Witness { family, theta, eps, mean } => match family {
            Family::Lemma22 => {
                let theta = theta.ok_or_else(|| Failure::parse("lemma22 needs --theta"))?;
                let sigma = parse_mean(&mean)?;
                ok(&lemma22_witness(theta, eps.unwrap_or(1e-4), &sigma)?)
            }
            Family::Lemma24 => {
                let eps = eps.ok_or_else(|| Failure::parse("lemma24 needs --eps"))?;
                ok(&lemma24_witness(eps)?)
            }
        },
        Command::Catalog => {
            let entries: Vec<_> = catalog()
                .iter()
                .map(|f| json!({ "id": f.id(), "flags": f.flags() }))
                .collect();
            ok(&entries)
        }
        Command::Decompose { mean, x, y, method, dim } => {
            let sigma = parse_mean(&mean)?;
            let (x, y) = parse_pd_pair(&x, &y, dim)?;
            let cfg = ToleranceConfig::default();
            let d = match method {
                Method::Phi => decompose_mean_pair(&sigma, &x, &y, &cfg)?,
                Method::Closed => decompose_closed_form(&sigma, &x, &y, &cfg)?,
            };
            ok(&d)
        }
        Command::Chain { mean, function, x, y, gamma, k, dim } => {
            let sigma = parse_mean(&mean)?;
            let f = parse_function(&function)?;
            let (x, y) = parse_pd_pair(&x, &y, dim)?;
            let report = prop41_chain(&sigma, &f, &x, &y, gamma, k, &ToleranceConfig::default())?;
            let code = if report.pass { 0 } else { 1 };
            Ok(Outcome { code, ..ok(&report)? })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(cli.command).and_then(|out| {
        let mut text = serde_json::to_string_pretty(&out.value)
            .map_err(|e| Failure { code: 3, message: e.to_string() })?;
        text.push('\n');
        match &cli.output {
            Some(path) => fs::write(path, &text).map_err(|e| Failure {
                code: 3,
                message: format!("cannot write {}: {e}", path.display()),
            })?,
            None => print!("{text}"),
        }
        Ok(out.code)
    });
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
