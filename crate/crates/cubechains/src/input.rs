//! The JSON input format: one family with a `type` discriminator, either an
//! explicit cubical complex over a named label order or a Euclidean complex
//! given by its box corner and a cube list or an exclusion list.

use serde::{Deserialize, Serialize};

use crate::cubical::{Cube, CubicalComplex, LabelSet};
use crate::error::{Error, Result};
use crate::euclid::{ElementaryCube, EuclideanComplex};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum ComplexSpec {
    Cubical {
        order: Vec<String>,
        /// Complete face-closed cube list; rejected when closure fails.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        cubes: Option<Vec<String>>,
        /// Generator set; the face closure is taken on ingest.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        generators: Option<Vec<String>>,
    },
    Euclidean {
        k: Vec<i32>,
        /// Explicit cube list; the face closure is taken on ingest.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        cubes: Option<Vec<CubeCorners>>,
        /// Cells removed from the full box together with everything
        /// containing them.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        exclude: Option<Vec<CubeCorners>>,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CubeCorners {
    pub a: Vec<i32>,
    pub b: Vec<i32>,
}

/// A parsed complex of either kind.
#[derive(Debug, Clone)]
pub enum AnyComplex {
    Cubical(CubicalComplex),
    Euclidean(EuclideanComplex),
}

impl AnyComplex {
    /// The combinatorial complex: the embedded one in the Euclidean case.
    pub fn as_cubical(&self) -> Result<CubicalComplex> {
        match self {
            AnyComplex::Cubical(k) => Ok(k.clone()),
            AnyComplex::Euclidean(k) => crate::euclid::embed(k),
        }
    }
}

impl ComplexSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec serializes")
    }

    /// Build the complex, validating whichever invariants the variant
    /// promises.
    pub fn build(&self) -> Result<AnyComplex> {
        match self {
            ComplexSpec::Cubical {
                order,
                cubes,
                generators,
            } => {
                let labels = LabelSet::new(order.clone())?;
                let k = match (cubes, generators) {
                    (Some(words), None) => {
                        let parsed = parse_words(words, labels.len())?;
                        CubicalComplex::new(labels, parsed)?
                    }
                    (None, Some(words)) => {
                        let parsed = parse_words(words, labels.len())?;
                        CubicalComplex::from_generators(labels, parsed)?
                    }
                    (None, None) => CubicalComplex::empty(labels),
                    (Some(_), Some(_)) => {
                        return Err(Error::Parse(
                            "give either \"cubes\" or \"generators\", not both".into(),
                        ))
                    }
                };
                Ok(AnyComplex::Cubical(k))
            }
            ComplexSpec::Euclidean { k, cubes, exclude } => {
                let complex = match (cubes, exclude) {
                    (Some(list), None) => {
                        let parsed = parse_corners(list)?;
                        EuclideanComplex::from_cubes(k.clone(), parsed)?
                    }
                    (None, Some(list)) => {
                        let parsed = parse_corners(list)?;
                        EuclideanComplex::box_minus(k.clone(), &parsed)?
                    }
                    (None, None) => EuclideanComplex::full_box(k.clone())?,
                    (Some(_), Some(_)) => {
                        return Err(Error::Parse(
                            "give either \"cubes\" or \"exclude\", not both".into(),
                        ))
                    }
                };
                Ok(AnyComplex::Euclidean(complex))
            }
        }
    }

    /// The cubical serialization of a complex.
    pub fn of_cubical(k: &CubicalComplex) -> ComplexSpec {
        ComplexSpec::Cubical {
            order: k.labels().names().to_vec(),
            cubes: Some(k.cubes().map(|c| c.to_string()).collect()),
            generators: None,
        }
    }
}

fn parse_words(words: &[String], n: usize) -> Result<Vec<Cube>> {
    words
        .iter()
        .map(|w| {
            let c = Cube::parse(w)?;
            if c.len() != n {
                return Err(Error::Parse(format!(
                    "cube {w:?} has {} entries, expected {n}",
                    c.len()
                )));
            }
            Ok(c)
        })
        .collect()
}

fn parse_corners(list: &[CubeCorners]) -> Result<Vec<ElementaryCube>> {
    list.iter()
        .map(|c| ElementaryCube::new(c.a.clone(), c.b.clone()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cubical_round_trip() {
        let text = r#"{"type":"cubical","order":["1","2"],"cubes":["00","10","01","11","*0","0*","1*","*1"]}"#;
        let spec = ComplexSpec::from_json(text).unwrap();
        let AnyComplex::Cubical(k) = spec.build().unwrap() else {
            panic!("expected cubical");
        };
        assert_eq!(k.cube_count(), 8);
        let back = ComplexSpec::of_cubical(&k);
        let again = back.build().unwrap().as_cubical().unwrap();
        assert_eq!(again, k);
    }

    #[test]
    fn non_closed_cube_list_is_rejected() {
        let text = r#"{"type":"cubical","order":["1","2"],"cubes":["**"]}"#;
        let spec = ComplexSpec::from_json(text).unwrap();
        assert!(spec.build().is_err());
        let text = r#"{"type":"cubical","order":["1","2"],"generators":["**"]}"#;
        let spec = ComplexSpec::from_json(text).unwrap();
        assert!(spec.build().is_ok());
    }

    #[test]
    fn euclidean_exclusion() {
        let text = r#"{"type":"euclidean","k":[2,2],"exclude":[{"a":[1,1],"b":[2,2]}]}"#;
        let spec = ComplexSpec::from_json(text).unwrap();
        let AnyComplex::Euclidean(k) = spec.build().unwrap() else {
            panic!("expected euclidean");
        };
        assert!(!k.contains(&ElementaryCube::new(vec![1, 1], vec![2, 2]).unwrap()));
        assert!(k.validate());
    }

    #[test]
    fn bad_inputs() {
        assert!(ComplexSpec::from_json("{").is_err());
        let text = r#"{"type":"cubical","order":["1","1"],"cubes":[]}"#;
        assert!(ComplexSpec::from_json(text).unwrap().build().is_err());
        let text = r#"{"type":"euclidean","k":[1],"cubes":[{"a":[0],"b":[2]}]}"#;
        assert!(ComplexSpec::from_json(text).unwrap().build().is_err());
    }
}
