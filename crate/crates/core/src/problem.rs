//! JSON problem files: `{"dim": n, "poly": [[row, ...], ...]}` listing the
//! matrix coefficients of `A(t)` in increasing degree. Entries are exact
//! decimal strings, `[num, den]` pairs, or JSON integers.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mat::Mat;
use crate::poly::MatPoly;
use crate::rational::{Rational, RationalEntry};

pub type MatrixEntries = Vec<Vec<RationalEntry>>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProblemFile {
    pub dim: usize,
    pub poly: Vec<MatrixEntries>,
}

pub(crate) fn matrix_from_entries(dim: usize, rows: &MatrixEntries) -> Result<Mat<Rational>> {
    if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
        return Err(Error::Parse(format!("expected a {dim}x{dim} matrix")));
    }
    let parsed = rows
        .iter()
        .map(|r| r.iter().map(RationalEntry::to_rational).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    Mat::from_rows(parsed)
}

pub(crate) fn matrix_to_entries(m: &Mat<Rational>) -> MatrixEntries {
    m.rows()
        .iter()
        .map(|r| r.iter().map(RationalEntry::from_rational).collect())
        .collect()
}

impl ProblemFile {
    pub fn from_poly(p: &MatPoly<Rational>) -> Self {
        ProblemFile {
            dim: p.dim(),
            poly: p.coeffs().iter().map(matrix_to_entries).collect(),
        }
    }

    pub fn to_poly(&self) -> Result<MatPoly<Rational>> {
        if self.dim == 0 {
            return Err(Error::Parse("dim must be positive".into()));
        }
        let coeffs = self
            .poly
            .iter()
            .map(|m| matrix_from_entries(self.dim, m))
            .collect::<Result<Vec<_>>>()?;
        MatPoly::new(coeffs)
    }

    pub fn parse(json: &str) -> Result<MatPoly<Rational>> {
        let file: ProblemFile = serde_json::from_str(json).map_err(|e| Error::Parse(e.to_string()))?;
        file.to_poly()
    }

    pub fn load(path: impl AsRef<Path>) -> Result<MatPoly<Rational>> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("problem file serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    #[test]
    fn parses_mixed_entry_forms() {
        let p = ProblemFile::parse(
            r#"{"dim": 2, "poly": [[["1", [1, 2]], [0, "-0.25"]], [[0, 1], [1, 0]]]}"#,
        )
        .unwrap();
        assert_eq!(p.degree(), 1);
        assert_eq!(p.coeff(0)[(0, 1)], ratio(1, 2));
        assert_eq!(p.coeff(0)[(1, 1)], ratio(-1, 4));
        assert_eq!(p.coeff(1)[(1, 0)], int(1));
        let back = ProblemFile::parse(&ProblemFile::from_poly(&p).to_json()).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn rejects_wrong_shapes() {
        assert!(ProblemFile::parse(r#"{"dim": 2, "poly": [[[1, 2]]]}"#).is_err());
        assert!(ProblemFile::parse(r#"{"dim": 1, "poly": []}"#).is_err());
        assert!(ProblemFile::parse(r#"{"dim": 1, "poly": [[["x"]]]}"#).is_err());
    }
}
