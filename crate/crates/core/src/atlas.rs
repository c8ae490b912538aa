//! Classification tables, the embedded expected values and the run
//! configuration shared by the command-line reports.

use serde::{Deserialize, Serialize};

use crate::euler::{classify_with_symmetry, is_hermitian, SymmetryOptions, SymmetryVerdict};
use crate::lie::{make_algebra, Family};
use crate::linalg::canonical_json;
use crate::par::{map_indexed, Execution};
use crate::{Result, WedgeError};

/// Version of every JSON report and of the expected-values file.
pub const FORMAT_VERSION: u32 = 1;

const EXPECTED_ATLAS: &str = include_str!("../data/expected_atlas.json");

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct OrbitRow {
    pub label: String,
    pub node: usize,
    /// (dim 𝔤₋₁, dim 𝔤₀, dim 𝔤₁).
    pub dims: [usize; 3],
    /// None when neither a certificate nor the family list decides.
    pub symmetric: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct AtlasEntry {
    pub label: String,
    pub family: Family,
    pub orbit_count: usize,
    pub orbits: Vec<OrbitRow>,
    pub hermitian: bool,
    pub tube_type: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct AtlasFile {
    pub format_version: u32,
    pub entries: Vec<AtlasEntry>,
}

/// The embedded table of expected classification values.
pub fn expected_atlas() -> AtlasFile {
    let f: AtlasFile = serde_json::from_str(EXPECTED_ATLAS).expect("embedded atlas parses");
    assert_eq!(f.format_version, FORMAT_VERSION);
    f
}

pub fn expected_entry(family: &Family) -> Option<AtlasEntry> {
    expected_atlas().entries.into_iter().find(|e| &e.family == family)
}

/// Classify one family: orbits, grading dimensions, symmetry and tube type.
pub fn atlas_entry(family: &Family, opts: &SymmetryOptions) -> Result<AtlasEntry> {
    let alg = make_algebra(family)?;
    let (c, reports) = classify_with_symmetry(&alg, opts)?;
    let orbits: Vec<OrbitRow> = c
        .orbits
        .iter()
        .zip(&reports)
        .map(|(o, r)| OrbitRow {
            label: o.label.clone(),
            node: o.node,
            dims: o.grading.dims().as_array(),
            symmetric: match r.verdict {
                SymmetryVerdict::Symmetric => Some(true),
                SymmetryVerdict::NotSymmetric => Some(false),
                SymmetryVerdict::Unknown => None,
            },
        })
        .collect();
    let hermitian = is_hermitian(&alg)?;
    let tube_type = hermitian && orbits.iter().any(|o| o.symmetric == Some(true));
    Ok(AtlasEntry { label: family.label(), family: family.clone(), orbit_count: orbits.len(), orbits, hermitian, tube_type })
}

/// Entries for every family of the expected table, in table order.
pub fn build_atlas(opts: &SymmetryOptions, exec: Execution) -> Vec<Result<AtlasEntry>> {
    let families: Vec<Family> = expected_atlas().entries.into_iter().map(|e| e.family).collect();
    map_indexed(exec, families.len(), |i| atlas_entry(&families[i], opts))
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct AtlasMismatch {
    pub label: String,
    pub expected: Option<String>,
    pub computed: Option<String>,
}

/// Compare against the embedded table, entry by entry, as canonical JSON.
pub fn compare_with_expected(computed: &[AtlasEntry]) -> Vec<AtlasMismatch> {
    let mut out = Vec::new();
    for e in computed {
        let want = expected_entry(&e.family).map(|x| canonical_json(&x));
        let got = canonical_json(e);
        if want.as_deref() != Some(got.as_str()) {
            out.push(AtlasMismatch { label: e.label.clone(), expected: want, computed: Some(got) });
        }
    }
    out
}

/// Command configuration recorded in every report.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(rename_all = "camelCase")]
pub struct RunConfig {
    pub command: String,
    pub seed: u64,
    pub tolerance: f64,
    pub output: Option<String>,
    pub threads: usize,
    pub format_version: u32,
}

impl RunConfig {
    pub fn new(command: &str, seed: u64, tolerance: f64, output: Option<String>, threads: usize) -> Result<RunConfig> {
        if !(tolerance.is_finite() && tolerance > 0.0) {
            return Err(WedgeError::Domain(format!("tolerance must be positive, got {tolerance}")));
        }
        if threads == 0 {
            return Err(WedgeError::Domain("threads must be at least 1".into()));
        }
        Ok(RunConfig { command: command.into(), seed, tolerance, output, threads, format_version: FORMAT_VERSION })
    }

    pub fn execution(&self) -> Execution {
        if self.threads > 1 {
            Execution::best()
        } else {
            Execution::Sequential
        }
    }
}

/// Envelope of every JSON report.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Report<T: Serialize> {
    pub format_version: u32,
    pub config: RunConfig,
    pub passed: bool,
    pub result: T,
}

impl<T: Serialize> Report<T> {
    pub fn new(config: &RunConfig, passed: bool, result: T) -> Report<T> {
        Report { format_version: FORMAT_VERSION, config: config.clone(), passed, result }
    }

    /// Canonical pretty JSON: sorted keys, 17 significant digits.
    pub fn to_json(&self) -> String {
        crate::linalg::canonical_json_pretty(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn embedded_table_is_consistent() {
        let f = expected_atlas();
        for e in &f.entries {
            assert_eq!(e.orbit_count, e.orbits.len(), "{}", e.label);
            assert_eq!(e.label, e.family.label());
            let dim = make_algebra(&e.family).unwrap().dim();
            for o in &e.orbits {
                assert_eq!(o.dims.iter().sum::<usize>(), dim);
                assert_eq!(o.dims[0], o.dims[2]);
            }
        }
    }

    #[test]
    fn run_config_validation() {
        assert!(RunConfig::new("x", 1, 0.0, None, 1).is_err());
        assert!(RunConfig::new("x", 1, 1e-8, None, 0).is_err());
        let c = RunConfig::new("x", 1, 1e-8, None, 1).unwrap();
        assert_eq!(c.execution(), Execution::Sequential);
    }
}
