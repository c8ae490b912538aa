//! JSON algebra files: `{ "name", "matrix_size", "basis": [[[row], ...], ...], "tolerance" }`.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::algebra::{Family, LieAlgebra, DEFAULT_TOLERANCE};
use crate::linalg::RMat;
use crate::{Result, WedgeError};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AlgebraFile {
    pub name: String,
    pub matrix_size: usize,
    pub basis: Vec<Vec<Vec<f64>>>,
    #[serde(default = "default_tol")]
    pub tolerance: f64,
}

fn default_tol() -> f64 {
    DEFAULT_TOLERANCE
}

impl AlgebraFile {
    pub fn from_algebra(alg: &LieAlgebra) -> AlgebraFile {
        let d = alg.matrix_size();
        AlgebraFile {
            name: alg.name().to_string(),
            matrix_size: d,
            basis: alg
                .basis()
                .iter()
                .map(|m| (0..d).map(|i| (0..d).map(|j| m[(i, j)]).collect()).collect())
                .collect(),
            tolerance: alg.tolerance(),
        }
    }

    /// Validate and build. Fails with the first violated identity.
    pub fn build(&self) -> Result<Arc<LieAlgebra>> {
        let d = self.matrix_size;
        if d == 0 {
            return Err(WedgeError::Parse("matrix_size must be positive".into()));
        }
        let mut basis = Vec::with_capacity(self.basis.len());
        for (k, rows) in self.basis.iter().enumerate() {
            if rows.len() != d || rows.iter().any(|r| r.len() != d) {
                return Err(WedgeError::Parse(format!("basis matrix {k} is not {d}x{d}")));
            }
            basis.push(RMat::from_fn(d, d, |i, j| rows[i][j]));
        }
        LieAlgebra::from_matrices(self.name.clone(), Family::Custom, basis, self.tolerance)
    }
}

/// Parse and validate an algebra file.
pub fn load_algebra_json(text: &str) -> Result<Arc<LieAlgebra>> {
    let file: AlgebraFile =
        serde_json::from_str(text).map_err(|e| WedgeError::Parse(e.to_string()))?;
    file.build()
}

/// Serialize an algebra in the file format.
pub fn algebra_to_json(alg: &LieAlgebra) -> String {
    serde_json::to_string_pretty(&AlgebraFile::from_algebra(alg)).expect("serializable")
}
