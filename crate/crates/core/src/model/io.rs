use serde::{Deserialize, Serialize};

use super::{CurveRecord, DivisorClass, IntersectionLattice, SurfaceModel};
use crate::error::{Error, Result};
use crate::exactnum::{serde_q, Rational};

/// On-disk model: `{"rank", "gram", "curves": [{"name", "class"}], "ample", "basis"?, "references"?}`.
///
/// Classes are arrays of `"p/q"` strings (bare integers are accepted on input).
/// `references` lists known polygons that `verify` recomputes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub rank: usize,
    pub gram: Vec<Vec<i64>>,
    pub curves: Vec<CurveEntry>,
    #[serde(with = "serde_q::vec")]
    pub ample: Vec<Rational>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub references: Vec<ReferencePolygon>,
}

/// Expected vertices of the polygon of `divisor` for `flag`, both in the
/// mini-languages of [`super::parse_divisor`] and [`super::parse_flag`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReferencePolygon {
    pub divisor: String,
    pub flag: String,
    /// `[x, y]` pairs as printed by the engine, counterclockwise from the
    /// lowest leftmost vertex.
    pub vertices: Vec<[String; 2]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveEntry {
    pub name: String,
    #[serde(with = "serde_q::vec")]
    pub class: Vec<Rational>,
}

impl ModelFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("model file: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("model files always serialize")
    }

    pub fn from_model(m: &SurfaceModel) -> Self {
        ModelFile {
            rank: m.rank(),
            gram: m.lattice().gram().to_vec(),
            curves: m
                .curves()
                .iter()
                .map(|c| CurveEntry {
                    name: c.name.clone(),
                    class: c.class.0.clone(),
                })
                .collect(),
            ample: m.ample().0.clone(),
            basis: m.basis_names().map(<[String]>::to_vec),
            references: Vec::new(),
        }
    }

    /// Builds the model, checking shapes only. Run [`super::validate_model`]
    /// on the result for the geometric invariants.
    pub fn into_model(self) -> Result<SurfaceModel> {
        if self.rank != self.gram.len() {
            return Err(Error::Validation(format!(
                "rank {} does not match the {} rows of the gram matrix",
                self.rank,
                self.gram.len()
            )));
        }
        let lattice = IntersectionLattice::new(self.gram)?;
        let curves = self
            .curves
            .into_iter()
            .map(|c| CurveRecord::new(c.name, DivisorClass(c.class)))
            .collect();
        let m = SurfaceModel::new(lattice, curves, DivisorClass(self.ample))?;
        match self.basis {
            Some(b) => m.with_basis_names(b),
            None => Ok(m),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{fix_dp7, validate_model};

    #[test]
    fn parses_hand_written_file() {
        let text = r#"{
            "rank": 3,
            "gram": [[0,1,0],[1,0,0],[0,0,-1]],
            "curves": [
                {"name": "E_p", "class": ["0","0","1"]},
                {"name": "F1", "class": [1, 0, -1]},
                {"name": "F2", "class": ["0","1","-1"]}
            ],
            "ample": ["2","2","-1"]
        }"#;
        let m = ModelFile::from_json(text).unwrap().into_model().unwrap();
        assert!(validate_model(&m).is_valid());
        assert_eq!(m.curves(), fix_dp7().curves());
    }

    #[test]
    fn shape_errors_name_the_problem() {
        let text = r#"{"rank": 2, "gram": [[1,0],[0]], "curves": [], "ample": [1,0]}"#;
        let err = ModelFile::from_json(text)
            .unwrap()
            .into_model()
            .unwrap_err();
        assert!(matches!(err, Error::Validation(ref s) if s.contains("not square")));
        let err = ModelFile::from_json("{\"rank\": 1}").unwrap_err();
        assert!(matches!(err, Error::Parse(_)));
    }

    #[test]
    fn round_trip_keeps_model() {
        let m = fix_dp7();
        let text = ModelFile::from_model(&m).to_json();
        assert!(text.contains("\"-1\""));
        let back = ModelFile::from_json(&text).unwrap().into_model().unwrap();
        assert_eq!(back, m);
    }
}
