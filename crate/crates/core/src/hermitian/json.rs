use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{CMatrix, HermitianMatrix};
use crate::error::{Error, Result};

/// Wire format `{"dim": n, "re": [[..]], "im": [[..]]}`, row-major, with
/// `im` omitted when every imaginary part is zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub dim: usize,
    pub re: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub im: Option<Vec<Vec<f64>>>,
}

impl MatrixJson {
    pub fn to_hermitian(&self) -> Result<HermitianMatrix> {
        let n = self.dim;
        let check = |rows: &Vec<Vec<f64>>, part: &str| -> Result<()> {
            if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                return Err(Error::Parse(format!(
                    "'{part}' must be a {n}x{n} array"
                )));
            }
            Ok(())
        };
        check(&self.re, "re")?;
        if let Some(im) = &self.im {
            check(im, "im")?;
        }
        let m = CMatrix::from_fn(n, n, |i, j| {
            let im = self.im.as_ref().map_or(0.0, |v| v[i][j]);
            Complex64::new(self.re[i][j], im)
        });
        HermitianMatrix::new(m)
    }
}

impl From<&HermitianMatrix> for MatrixJson {
    fn from(h: &HermitianMatrix) -> Self {
        let n = h.dim();
        let m = h.as_matrix();
        let re = (0..n).map(|i| (0..n).map(|j| m[(i, j)].re).collect()).collect();
        let im = if h.is_real() {
            None
        } else {
            Some((0..n).map(|i| (0..n).map(|j| m[(i, j)].im).collect()).collect())
        };
        Self { dim: n, re, im }
    }
}

impl Serialize for HermitianMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for HermitianMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = MatrixJson::deserialize(d)?;
        j.to_hermitian().map_err(serde::de::Error::custom)
    }
}
