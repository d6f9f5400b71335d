//! JSON wire formats.
//!
//! Matrix: `{"rows": n, "cols": m, "entries": [["p/q" | "p/q+r/s i", ...], ...]}`.
//! Filtration: `{"dim": n, "direction": "inc" | "dec", "steps": [{"weight": l, "basis": [[...], ...]}]}`.
//! Filtration basis vectors are listed as rows.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{Direction, ExactError, ExactMatrix, ExactScalar, ExactVector, Filtration, Subspace};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepJson {
    pub weight: i64,
    pub basis: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FiltrationJson {
    pub dim: usize,
    pub direction: String,
    pub steps: Vec<StepJson>,
}

fn encode_vec(v: &[ExactScalar]) -> Vec<String> {
    v.iter().map(ExactScalar::to_string).collect()
}

fn decode_vec(v: &[String]) -> Result<ExactVector, ExactError> {
    v.iter().map(|s| s.parse()).collect()
}

impl From<&ExactMatrix> for MatrixJson {
    fn from(m: &ExactMatrix) -> Self {
        Self {
            rows: m.rows(),
            cols: m.cols(),
            entries: m.to_rows().iter().map(|r| encode_vec(r)).collect(),
        }
    }
}

impl TryFrom<MatrixJson> for ExactMatrix {
    type Error = ExactError;

    fn try_from(j: MatrixJson) -> Result<Self, ExactError> {
        if j.entries.len() != j.rows {
            return Err(ExactError::DimensionMismatch {
                expected: j.rows,
                found: j.entries.len(),
            });
        }
        let mut data = Vec::with_capacity(j.rows * j.cols);
        for row in &j.entries {
            if row.len() != j.cols {
                return Err(ExactError::DimensionMismatch {
                    expected: j.cols,
                    found: row.len(),
                });
            }
            data.extend(decode_vec(row)?);
        }
        ExactMatrix::new(j.rows, j.cols, data)
    }
}

impl From<&Filtration> for FiltrationJson {
    fn from(f: &Filtration) -> Self {
        Self {
            dim: f.dim(),
            direction: match f.direction() {
                Direction::Increasing => "inc".into(),
                Direction::Decreasing => "dec".into(),
            },
            steps: f
                .steps()
                .into_iter()
                .map(|(weight, s)| StepJson {
                    weight,
                    basis: s.basis().iter().map(|b| encode_vec(b)).collect(),
                })
                .collect(),
        }
    }
}

impl TryFrom<FiltrationJson> for Filtration {
    type Error = ExactError;

    fn try_from(j: FiltrationJson) -> Result<Self, ExactError> {
        let direction = match j.direction.as_str() {
            "inc" => Direction::Increasing,
            "dec" => Direction::Decreasing,
            other => return Err(ExactError::InvalidFiltration(format!("unknown direction {other:?}"))),
        };
        let mut steps = Vec::new();
        for s in j.steps {
            let vecs: Vec<ExactVector> = s.basis.iter().map(|b| decode_vec(b)).collect::<Result<_, _>>()?;
            if vecs.iter().any(|v| v.len() != j.dim) {
                return Err(ExactError::DimensionMismatch {
                    expected: j.dim,
                    found: vecs.iter().map(Vec::len).find(|&l| l != j.dim).unwrap_or(0),
                });
            }
            steps.push((s.weight, Subspace::span(j.dim, &vecs)));
        }
        Filtration::from_steps(j.dim, direction, steps)
    }
}

impl Serialize for ExactMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        MatrixJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for ExactMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = MatrixJson::deserialize(d)?;
        ExactMatrix::try_from(j).map_err(serde::de::Error::custom)
    }
}

impl Serialize for Filtration {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        FiltrationJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Filtration {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = FiltrationJson::deserialize(d)?;
        Filtration::try_from(j).map_err(serde::de::Error::custom)
    }
}

impl Serialize for ExactScalar {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for ExactScalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrix_wire_format() {
        let text = r#"{"rows":2,"cols":2,"entries":[["1/2","0"],["1+2/3 i","-i"]]}"#;
        let m: ExactMatrix = serde_json::from_str(text).unwrap();
        assert_eq!(m.get(1, 0), &"1+2/3 i".parse::<ExactScalar>().unwrap());
        let back = serde_json::to_string(&m).unwrap();
        let again: ExactMatrix = serde_json::from_str(&back).unwrap();
        assert_eq!(m, again);
        assert!(serde_json::from_str::<ExactMatrix>(r#"{"rows":2,"cols":1,"entries":[["1"]]}"#).is_err());
    }

    #[test]
    fn filtration_wire_format() {
        let text = r#"{"dim":2,"direction":"inc","steps":[{"weight":0,"basis":[["1","0"]]},{"weight":2,"basis":[["1","0"],["0","1"]]}]}"#;
        let f: Filtration = serde_json::from_str(text).unwrap();
        assert_eq!(f.jumps(), vec![0, 2]);
        let back: Filtration = serde_json::from_str(&serde_json::to_string(&f).unwrap()).unwrap();
        assert_eq!(f, back);
        let bad = r#"{"dim":2,"direction":"up","steps":[]}"#;
        assert!(serde_json::from_str::<Filtration>(bad).is_err());
    }
}
