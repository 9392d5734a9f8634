use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hermitian::{CVector, HermitianMatrix};

/// Non-finite floats are written as `null` and read back as `-inf`.
pub(crate) mod float_or_null {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_f64(*v)
        } else {
            s.serialize_none()
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::NEG_INFINITY))
    }
}

/// Complex vector as `{"re": [...], "im": [...]}`, `im` omitted when zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VectorJson {
    pub re: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub im: Option<Vec<f64>>,
}

impl From<&CVector> for VectorJson {
    fn from(v: &CVector) -> Self {
        let re = v.iter().map(|z| z.re).collect();
        let im: Vec<f64> = v.iter().map(|z| z.im).collect();
        Self {
            re,
            im: im.iter().any(|&x| x != 0.0).then_some(im),
        }
    }
}

impl VectorJson {
    pub fn to_vector(&self) -> Result<CVector> {
        let n = self.re.len();
        if let Some(im) = &self.im {
            if im.len() != n {
                return Err(Error::Parse("vector re/im length mismatch".into()));
            }
        }
        Ok(CVector::from_iterator(
            n,
            (0..n).map(|i| Complex64::new(self.re[i], self.im.as_ref().map_or(0.0, |im| im[i]))),
        ))
    }
}

/// Concrete data demonstrating a violation (or near-tightness) of an
/// inequality, replayable through [`replay`].
///
/// `kind` is a condition id (`a3`, …) or a construction family (`lemma22`,
/// `lemma24`, `support-order`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub function: Option<String>,
    #[serde(default)]
    pub matrices: BTreeMap<String, HermitianMatrix>,
    #[serde(default)]
    pub vectors: BTreeMap<String, VectorJson>,
    #[serde(default)]
    pub scalars: BTreeMap<String, f64>,
    #[serde(default)]
    pub labels: BTreeMap<String, String>,
    #[serde(with = "float_or_null")]
    pub margin: f64,
}

impl Witness {
    pub(crate) fn new(kind: impl Into<String>) -> Self {
        Self {
            kind: kind.into(),
            function: None,
            matrices: BTreeMap::new(),
            vectors: BTreeMap::new(),
            scalars: BTreeMap::new(),
            labels: BTreeMap::new(),
            margin: f64::NEG_INFINITY,
        }
    }

    pub fn matrix(&self, name: &str) -> Result<&HermitianMatrix> {
        self.matrices
            .get(name)
            .ok_or_else(|| Error::Parse(format!("witness has no matrix {name:?}")))
    }

    pub fn scalar(&self, name: &str) -> Result<f64> {
        self.scalars
            .get(name)
            .copied()
            .ok_or_else(|| Error::Parse(format!("witness has no scalar {name:?}")))
    }

    pub fn vector(&self, name: &str) -> Result<CVector> {
        self.vectors
            .get(name)
            .ok_or_else(|| Error::Parse(format!("witness has no vector {name:?}")))?
            .to_vector()
    }

    pub fn label(&self, name: &str) -> Option<&str> {
        self.labels.get(name).map(String::as_str)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("witness serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(format!("witness: {e}")))
    }
}

/// Re-evaluates the margin recorded in a witness from its stored data.
/// Evaluation errors replay as `-inf`, matching how they were recorded.
pub fn replay(w: &Witness) -> Result<f64> {
    let margin = match w.kind.as_str() {
        "lemma22" => super::lemmas::lemma22_margin(w),
        "lemma24" | "support-order" => super::lemmas::lemma24_margin(w),
        _ => {
            let cond = w.kind.parse()?;
            super::conditions::evaluate_witness(cond, w)
        }
    };
    match margin {
        Ok(m) if m.is_finite() => Ok(m),
        Ok(_) => Ok(f64::NEG_INFINITY),
        Err(e) if e.is_parse_error() => Err(e),
        Err(_) => Ok(f64::NEG_INFINITY),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vector_round_trip() {
        let v = CVector::from_vec(vec![Complex64::new(1.0, 0.5), Complex64::new(-2.0, 0.0)]);
        let j = VectorJson::from(&v);
        assert_eq!(j.to_vector().unwrap(), v);
        let real = CVector::from_vec(vec![Complex64::new(1.0, 0.0)]);
        assert!(VectorJson::from(&real).im.is_none());
    }

    #[test]
    fn infinite_margin_is_null() {
        let w = Witness::new("a3");
        let s = w.to_json();
        assert!(s.contains(r#""margin":null"#));
        assert_eq!(Witness::from_json(&s).unwrap().margin, f64::NEG_INFINITY);
    }
}
