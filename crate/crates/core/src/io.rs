//! The JSON matrix exchange format and shared number formatting.
//!
//! A matrix is `{"dim": d, "re": [[...]], "im": [[...]]}` with row-major
//! nested arrays; a missing `"im"` means a zero imaginary part.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operator::{CMatrix, C64};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixJson {
    pub dim: usize,
    pub re: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub im: Option<Vec<Vec<f64>>>,
}

impl MatrixJson {
    pub fn to_matrix(&self) -> Result<CMatrix> {
        let d = self.dim;
        if d == 0 {
            return Err(Error::Parse("dim must be positive".into()));
        }
        let check = |rows: &Vec<Vec<f64>>, name: &str| -> Result<()> {
            if rows.len() != d || rows.iter().any(|r| r.len() != d) {
                return Err(Error::Parse(format!("\"{name}\" must be a {d}x{d} array")));
            }
            Ok(())
        };
        check(&self.re, "re")?;
        if let Some(im) = &self.im {
            check(im, "im")?;
        }
        Ok(CMatrix::from_fn(d, d, |i, j| {
            let im = self.im.as_ref().map_or(0.0, |m| m[i][j]);
            C64::new(self.re[i][j], im)
        }))
    }

    /// `im` is omitted when every imaginary part is exactly zero.
    pub fn from_matrix(m: &CMatrix) -> Self {
        let d = m.nrows();
        let re = (0..d)
            .map(|i| (0..d).map(|j| m[(i, j)].re).collect())
            .collect();
        let im: Vec<Vec<f64>> = (0..d)
            .map(|i| (0..d).map(|j| m[(i, j)].im).collect())
            .collect();
        let has_im = im.iter().flatten().any(|&x| x != 0.0);
        Self {
            dim: d,
            re,
            im: has_im.then_some(im),
        }
    }
}

pub fn parse_matrix(text: &str) -> Result<CMatrix> {
    let json: MatrixJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    json.to_matrix()
}

/// Serializes with every entry rounded by [`round_output`].
pub fn matrix_to_json(m: &CMatrix) -> String {
    let rounded = m.map(|z| C64::new(round_output(z.re), round_output(z.im)));
    serde_json::to_string(&MatrixJson::from_matrix(&rounded)).expect("serializable")
}

/// Decimal places used for all emitted floating-point numbers.
pub const OUTPUT_DECIMALS: usize = 10;

/// Rounds to [`OUTPUT_DECIMALS`] places; negative zero becomes zero.
pub fn round_output(x: f64) -> f64 {
    if !x.is_finite() {
        return x;
    }
    let r: f64 = format_number(x).parse().expect("formatted float");
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

/// Fixed 10-decimal rendering with trailing zeros trimmed:
/// `0.5`, `1.1276259652`, `0`, `-2`.
pub fn format_number(x: f64) -> String {
    if x.is_nan() {
        return "NaN".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let mut s = format!("{:.*}", OUTPUT_DECIMALS, x);
    if s.contains('.') {
        while s.ends_with('0') {
            s.pop();
        }
        if s.ends_with('.') {
            s.pop();
        }
    }
    if s == "-0" {
        s = "0".into();
    }
    s
}
