//! JSON state files: `{"dim": M, "amplitudes": [[re, im], ...], "meta": {...}}`.

use std::fs;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::phase_space::StateVector;
use crate::representations::RepBasis;

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StateMeta {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<String>,
    /// `[M1, M2]`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub split: Option<[u64; 2]>,
    /// `[q1, k2]`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<[u64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub conjugated: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateFile {
    pub dim: usize,
    pub amplitudes: Vec<[f64; 2]>,
    #[serde(default)]
    pub meta: StateMeta,
}

impl StateFile {
    pub fn from_state(v: &StateVector, meta: StateMeta) -> Self {
        Self {
            dim: v.dim(),
            amplitudes: v.amplitudes().iter().map(|a| [a.re, a.im]).collect(),
            meta,
        }
    }

    pub fn to_state(&self) -> Result<StateVector> {
        if self.amplitudes.len() != self.dim {
            return Err(Error::StateFile(format!(
                "dim is {} but {} amplitudes given",
                self.dim,
                self.amplitudes.len()
            )));
        }
        StateVector::new(
            self.amplitudes
                .iter()
                .map(|&[re, im]| Complex64::new(re, im))
                .collect(),
        )
        .map_err(|e| Error::StateFile(e.to_string()))
    }

    pub fn parse(text: &str) -> Result<Self> {
        let f: Self = serde_json::from_str(text).map_err(|e| Error::StateFile(e.to_string()))?;
        f.to_state()?;
        Ok(f)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("finite amplitudes serialize")
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| Error::StateFile(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }
}

/// All vectors of one basis in a single document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BasisBundle {
    pub dim: usize,
    pub kind: String,
    pub split: [u64; 2],
    pub conjugated: bool,
    pub gram_residual: f64,
    pub states: Vec<StateFile>,
}

impl BasisBundle {
    pub fn from_basis(basis: &RepBasis) -> Self {
        let f = basis.factors();
        let states = basis
            .iter()
            .map(|(l, v)| {
                StateFile::from_state(
                    v,
                    StateMeta {
                        kind: Some(basis.kind().name().to_string()),
                        split: Some([f.m1, f.m2]),
                        labels: Some([l.q1, l.k2]),
                        conjugated: Some(basis.is_conjugated()),
                    },
                )
            })
            .collect();
        Self {
            dim: f.m as usize,
            kind: basis.kind().name().to_string(),
            split: [f.m1, f.m2],
            conjugated: basis.is_conjugated(),
            gram_residual: basis.gram_residual(),
            states,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("finite amplitudes serialize")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::number_theory::make_split;
    use crate::representations::{build_c2, build_pls};

    #[test]
    fn round_trip_is_bit_faithful() {
        let s = make_split(15, 3).unwrap();
        for (q01, k02) in [(0, 0), (1, 2), (2, 4)] {
            let v = build_pls(&s, q01, k02).unwrap();
            let f = StateFile::from_state(&v, StateMeta::default());
            let back = StateFile::parse(&f.to_json()).unwrap();
            assert_eq!(back, f);
            let w = back.to_state().unwrap();
            for (a, b) in v.amplitudes().iter().zip(w.amplitudes()) {
                assert_eq!(a.re.to_bits(), b.re.to_bits());
                assert_eq!(a.im.to_bits(), b.im.to_bits());
            }
        }
    }

    #[test]
    fn schema_shape() {
        let text = r#"{"dim": 2, "amplitudes": [[1.0, 0.0], [0.0, 0.0]], "meta": {"kind": "C2"}}"#;
        let f = StateFile::parse(text).unwrap();
        assert_eq!(f.meta.kind.as_deref(), Some("C2"));
        let no_meta = StateFile::parse(r#"{"dim": 2, "amplitudes": [[0.6, 0.0], [0.0, 0.8]]}"#);
        assert!(no_meta.is_ok());
        let j: serde_json::Value = serde_json::from_str(&f.to_json()).unwrap();
        assert!(j["amplitudes"][0].is_array());
        assert_eq!(j["dim"], 2);
    }

    #[test]
    fn malformed_files_are_rejected() {
        for bad in [
            r#"{"dim": 3, "amplitudes": [[1.0, 0.0], [0.0, 0.0]]}"#,
            r#"{"dim": 1, "amplitudes": [[1.0, 0.0]]}"#,
            r#"{"amplitudes": [[1.0, 0.0], [0.0, 0.0]]}"#,
            r#"{"dim": 2, "amplitudes": [[1.0], [0.0, 0.0]]}"#,
            "not json",
        ] {
            assert!(matches!(StateFile::parse(bad), Err(Error::StateFile(_))), "{bad}");
        }
    }

    #[test]
    fn bundle_carries_labels() {
        let b = BasisBundle::from_basis(&build_c2(&make_split(6, 2).unwrap()));
        assert_eq!(b.states.len(), 6);
        assert_eq!(b.states[4].meta.labels, Some([1, 1]));
        assert!(b.gram_residual < 1e-9);
    }
}
