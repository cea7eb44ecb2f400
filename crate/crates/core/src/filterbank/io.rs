use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::dilation::DilationMatrix;
use super::trigpoly::{TrigPoly, TrigPolyMatrix};
use super::FbError;

/// On-disk filter schema: a sparse matrix of trigonometric polynomials.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FilterFile {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<FilterEntry>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FilterEntry {
    pub row: usize,
    pub col: usize,
    pub coeffs: Vec<CoeffEntry>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CoeffEntry {
    pub k: Vec<i64>,
    pub re: f64,
    pub im: f64,
}

/// On-disk dilation schema.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DilationFile {
    pub d: usize,
    #[serde(rename = "M")]
    pub m: Vec<Vec<i64>>,
}

impl FilterFile {
    pub fn to_matrix(&self, dim: usize) -> Result<TrigPolyMatrix, FbError> {
        let mut out = TrigPolyMatrix::zero(dim, self.rows, self.cols);
        for e in &self.entries {
            if e.row >= self.rows || e.col >= self.cols {
                return Err(FbError::Shape(format!(
                    "entry ({}, {}) outside a {}×{} filter",
                    e.row, e.col, self.rows, self.cols
                )));
            }
            let mut p = TrigPoly::zero(dim);
            for c in &e.coeffs {
                if c.k.len() != dim {
                    return Err(FbError::Shape(format!(
                        "exponent {:?} has wrong dimension (expected {dim})",
                        c.k
                    )));
                }
                let k = [c.k[0], c.k.get(1).copied().unwrap_or(0)];
                p.add_to(k, Complex64::new(c.re, c.im));
            }
            *out.entry_mut(e.row, e.col) = p;
        }
        Ok(out)
    }

    pub fn from_matrix(m: &TrigPolyMatrix) -> Self {
        let mut entries = Vec::new();
        for i in 0..m.rows {
            for j in 0..m.cols {
                let p = m.entry(i, j);
                if p.is_zero() {
                    continue;
                }
                entries.push(FilterEntry {
                    row: i,
                    col: j,
                    coeffs: p
                        .coeffs()
                        .map(|(k, c)| CoeffEntry {
                            k: k[..m.dim].to_vec(),
                            re: c.re,
                            im: c.im,
                        })
                        .collect(),
                });
            }
        }
        FilterFile {
            rows: m.rows,
            cols: m.cols,
            entries,
        }
    }
}

impl DilationFile {
    pub fn to_dilation(&self) -> Result<DilationMatrix, FbError> {
        if self.m.len() != self.d || self.m.iter().any(|r| r.len() != self.d) {
            return Err(FbError::BadDilation(format!(
                "matrix must be {0}×{0}",
                self.d
            )));
        }
        let mut raw = [[0i64; 2]; 2];
        raw[1][1] = 1;
        for (i, row) in self.m.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                raw[i][j] = v;
            }
        }
        DilationMatrix::new(self.d, raw)
    }

    pub fn from_dilation(m: &DilationMatrix) -> Self {
        let raw = m.raw();
        let rows = (0..m.d)
            .map(|i| (0..m.d).map(|j| raw[i][j]).collect())
            .collect();
        DilationFile { d: m.d, m: rows }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn filter_file_round_trip() {
        let json = r#"{
            "rows": 1, "cols": 1,
            "entries": [{"row": 0, "col": 0,
                "coeffs": [{"k": [0], "re": 0.5, "im": 0.0},
                            {"k": [1], "re": 0.5, "im": 0.0}]}]
        }"#;
        let file: FilterFile = serde_json::from_str(json).unwrap();
        let m = file.to_matrix(1).unwrap();
        assert_eq!(m.entry(0, 0).coeff([1, 0]), Complex64::new(0.5, 0.0));
        let back = FilterFile::from_matrix(&m);
        let again = back.to_matrix(1).unwrap();
        assert_eq!(m, again);
    }

    #[test]
    fn dilation_file_schema() {
        let json = r#"{"d": 2, "M": [[1, 1], [1, -1]]}"#;
        let file: DilationFile = serde_json::from_str(json).unwrap();
        let m = file.to_dilation().unwrap();
        assert_eq!(m.det(), -2);
        let back = serde_json::to_value(DilationFile::from_dilation(&m)).unwrap();
        assert_eq!(back["M"][1][1], -1);
    }
}
