//! Strict JSON model files.
//!
//! ```json
//! {
//!   "name": "example",
//!   "state_matrix": [[1.0, 0.0], [0.0, 1.0]],
//!   "sensors": [{"name": "C1", "row": [1.0, 1.0]}],
//!   "horizon_samples": 10
//! }
//! ```
//!
//! Unknown fields, ragged matrices and a zero horizon are rejected.

use std::num::NonZeroUsize;

use obshap::{Matrix64, Model64, Sensor64, Violation};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SensorDocument {
    pub name: String,
    pub row: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub state_matrix: Vec<Vec<f64>>,
    pub sensors: Vec<SensorDocument>,
    pub horizon_samples: NonZeroUsize,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("schema violation at {location}: {message}")]
    Schema { location: String, message: String },
    #[error("model validation failed: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
}

impl From<serde_json::Error> for ParseError {
    fn from(e: serde_json::Error) -> Self {
        let (line, column) = (e.line(), e.column());
        // serde_json appends " at line X column Y"; the location is reported separately
        let message = e.to_string();
        let message = message
            .rsplit_once(" at line ")
            .map_or(message.as_str(), |(m, _)| m)
            .to_string();
        match e.classify() {
            serde_json::error::Category::Data => ParseError::Schema {
                location: format!("line {line}, column {column}"),
                message,
            },
            _ => ParseError::Syntax { line, column, message },
        }
    }
}

impl ModelDocument {
    pub fn from_model(name: Option<String>, model: &Model64) -> Self {
        Self {
            name,
            state_matrix: model.state_matrix().to_rows(),
            sensors: model
                .sensors()
                .iter()
                .map(|s| SensorDocument {
                    name: s.name.clone(),
                    row: s.row.clone(),
                })
                .collect(),
            horizon_samples: NonZeroUsize::new(model.horizon_samples()).expect("validated horizon"),
        }
    }

    pub fn to_model(&self) -> Result<Model64, ParseError> {
        let a = Matrix64::from_rows(&self.state_matrix).map_err(|_| ParseError::Schema {
            location: "state_matrix".into(),
            message: "rows have inconsistent lengths".into(),
        })?;
        let sensors = self
            .sensors
            .iter()
            .map(|s| Sensor64::new(s.name.clone(), s.row.clone()))
            .collect();
        let model = Model64::new_unchecked(a, sensors, self.horizon_samples.get());
        match model.validate() {
            obshap::ValidationResult::Ok => Ok(model),
            obshap::ValidationResult::Invalid(v) => Err(ParseError::Invalid(v)),
        }
    }
}

pub fn parse_document(text: &str) -> Result<ModelDocument, ParseError> {
    Ok(serde_json::from_str(text)?)
}

/// Parses and validates a model file.
pub fn parse_model(text: &str) -> Result<Model64, ParseError> {
    parse_document(text)?.to_model()
}

/// Pretty-printed model file; [`parse_model`] reads it back exactly.
pub fn render_model(name: Option<&str>, model: &Model64) -> String {
    let doc = ModelDocument::from_model(name.map(str::to_owned), model);
    let mut s = serde_json::to_string_pretty(&doc).expect("serializable");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use obshap::model::Problem;
    use obshap::scenarios;

    #[test]
    fn scenario_round_trip() {
        for m in [scenarios::scenario_one::<f64>(), scenarios::scenario_two()] {
            let text = render_model(Some("x"), &m);
            assert_eq!(parse_model(&text).unwrap(), m);
            assert_eq!(parse_document(&text).unwrap().name.as_deref(), Some("x"));
        }
    }

    #[test]
    fn zero_horizon_is_schema_violation() {
        let text = r#"{"state_matrix": [[1.0]], "sensors": [{"name": "a", "row": [1.0]}], "horizon_samples": 0}"#;
        assert!(matches!(parse_model(text), Err(ParseError::Schema { .. })));
    }

    #[test]
    fn long_row_is_validation_failure() {
        let text = r#"{"state_matrix": [[1.0, 0.0], [0.0, 1.0]],
                       "sensors": [{"name": "a", "row": [1.0, 2.0, 3.0]}], "horizon_samples": 4}"#;
        match parse_model(text) {
            Err(ParseError::Invalid(v)) => {
                assert_eq!(v[0].field, "sensors[0].row");
                assert_eq!(v[0].problem, Problem::RowLengthMismatch { expected: 2, found: 3 });
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn unknown_field_rejected() {
        let text = r#"{"state_matrix": [[1.0]], "sensors": [], "horizon_samples": 1, "extra": true}"#;
        let err = parse_model(text).unwrap_err();
        assert!(matches!(err, ParseError::Schema { .. }));
        assert!(err.to_string().contains("extra"), "{err}");
    }

    #[test]
    fn missing_field_and_non_numeric() {
        let missing = r#"{"state_matrix": [[1.0]], "sensors": []}"#;
        assert!(parse_model(missing).unwrap_err().to_string().contains("horizon_samples"));
        let non_numeric = r#"{"state_matrix": [["x"]], "sensors": [], "horizon_samples": 1}"#;
        assert!(matches!(parse_model(non_numeric), Err(ParseError::Schema { .. })));
    }

    #[test]
    fn ragged_state_matrix() {
        let text = r#"{"state_matrix": [[1.0, 0.0], [1.0]], "sensors": [{"name": "a", "row": [1.0, 0.0]}], "horizon_samples": 1}"#;
        match parse_model(text) {
            Err(ParseError::Schema { location, .. }) => assert_eq!(location, "state_matrix"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn syntax_error_has_position() {
        let err = parse_model("{\n  \"state_matrix\": [[1.0,]\n}").unwrap_err();
        match err {
            ParseError::Syntax { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
    }
}
