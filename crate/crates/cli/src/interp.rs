//! JSON interpretation files:
//! `{"objects": {name: dim}, "generators": {name: {"rows", "cols", "re", "im"}}}`.
//! Matrices are row-major nested arrays. `im` may be omitted for real data.

use std::collections::BTreeMap;
use std::path::Path;

use frobenius_core::{c, CMatrix, Interpretation};
use serde::{Deserialize, Serialize};

use crate::error::{InputError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub re: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub im: Option<Vec<Vec<f64>>>,
}

impl MatrixJson {
    pub fn to_matrix(&self, what: &str) -> Result<CMatrix> {
        let check = |part: &str, rows: &[Vec<f64>]| -> Result<()> {
            let bad_row = rows.iter().position(|r| r.len() != self.cols);
            if rows.len() != self.rows || bad_row.is_some() {
                let found_cols = bad_row.map_or(self.cols, |i| rows[i].len());
                return Err(InputError::Model(frobenius_core::Error::ShapeMismatch {
                    what: format!("{what}.{part}"),
                    expected_rows: self.rows,
                    expected_cols: self.cols,
                    rows: rows.len(),
                    cols: found_cols,
                }));
            }
            Ok(())
        };
        check("re", &self.re)?;
        if let Some(im) = &self.im {
            check("im", im)?;
        }
        Ok(CMatrix::from_fn(self.rows, self.cols, |i, j| {
            let im = self.im.as_ref().map_or(0.0, |m| m[i][j]);
            c(self.re[i][j], im)
        }))
    }

    pub fn from_matrix(m: &CMatrix) -> Self {
        let part = |f: fn(&frobenius_core::C64) -> f64| {
            (0..m.rows())
                .map(|i| (0..m.cols()).map(|j| f(&m[(i, j)])).collect())
                .collect()
        };
        MatrixJson {
            rows: m.rows(),
            cols: m.cols(),
            re: part(|z| z.re),
            im: Some(part(|z| z.im)),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InterpFile {
    #[serde(default)]
    pub objects: BTreeMap<String, usize>,
    #[serde(default)]
    pub generators: BTreeMap<String, MatrixJson>,
}

impl InterpFile {
    pub fn to_interpretation(&self) -> Result<Interpretation> {
        let mut interp = Interpretation::new();
        for (name, &d) in &self.objects {
            interp = interp.with_dim(name, d);
        }
        for (name, m) in &self.generators {
            interp = interp.with_gen(name, m.to_matrix(name)?);
        }
        Ok(interp)
    }
}

pub fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).map_err(|e| InputError::file(path, e))?;
    serde_json::from_str(&text).map_err(|e| InputError::file(path, e))
}

pub fn load_interpretation(path: &Path) -> Result<Interpretation> {
    read_json::<InterpFile>(path)?.to_interpretation()
}
