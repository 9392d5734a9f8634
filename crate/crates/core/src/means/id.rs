use super::{OperatorMean, SymmetricMeanMeasure};
use crate::error::{Error, Result};

fn parse_weight(id: &str, raw: &str) -> Result<f64> {
    raw.trim()
        .parse::<f64>()
        .map_err(|_| Error::Parse(format!("mean id {id:?}: bad weight {raw:?}")))
}

/// Resolves a mean identifier.
///
/// Accepted forms: `arith`, `harm`, `geom`, each optionally followed by
/// `:<λ>`; `measure:<json>`; `adjoint:<id>` (nesting allowed).
pub fn parse_mean(id: &str) -> Result<OperatorMean> {
    let id = id.trim();
    if let Some(rest) = id.strip_prefix("adjoint:") {
        return parse_mean(rest)?.adjoint();
    }
    if let Some(json) = id.strip_prefix("measure:") {
        return Ok(OperatorMean::from_measure(SymmetricMeanMeasure::from_json(json)?));
    }
    let (base, weight) = match id.split_once(':') {
        Some((base, w)) => (base, parse_weight(id, w)?),
        None => (id, 0.5),
    };
    match base {
        "arith" => OperatorMean::arithmetic(weight),
        "harm" => OperatorMean::harmonic(weight),
        "geom" => OperatorMean::geometric(weight),
        _ => Err(Error::UnknownMean(id.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::means::MeanKind;

    #[test]
    fn plain_and_weighted() {
        assert_eq!(parse_mean("arith").unwrap().id(), "arith");
        assert_eq!(parse_mean("geom").unwrap().id(), "geom");
        assert_eq!(parse_mean("harm:0.5").unwrap().id(), "harm");
        let m = parse_mean("arith:0.25").unwrap();
        assert!(matches!(m.kind(), MeanKind::Arithmetic { weight } if *weight == 0.25));
        assert_eq!(m.scalar(2.0, 6.0).unwrap(), 3.0);
    }

    #[test]
    fn measure_and_adjoint() {
        let m = parse_mean(r#"measure:{"alpha":0.5,"atoms":[[1.0,0.5]]}"#).unwrap();
        assert!(m.is_symmetric());
        assert!((m.h().h_at_0() - 0.25).abs() < 1e-15);
        let adj = parse_mean("adjoint:arith").unwrap();
        assert!((adj.scalar(2.0, 1.0).unwrap() - 4.0 / 3.0).abs() < 1e-14);
        assert_eq!(adj.id(), "adjoint:arith");
        assert!(parse_mean("adjoint:adjoint:geom").is_ok());
    }

    #[test]
    fn rejects_bad_ids() {
        for bad in ["", "median", "arith:x", "geom:1.5", "measure:{", r#"measure:{"alpha":0.3}"#] {
            let e = parse_mean(bad).unwrap_err();
            assert!(e.is_parse_error() || matches!(e, Error::InvalidMeasure(_)), "{bad}: {e}");
        }
    }
}
