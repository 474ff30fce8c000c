//! JSON code descriptions: either the raw `(r, t, constraints)` triple with
//! 1-based entry indices, or one of the builtin constructions. Unknown
//! fields are rejected.

use serde::Deserialize;
use serde_json::Value;

use mpcode::{
    derangement_spec, shieh_spec, CodeSpec, InitialVector, LinearConstraint,
    MultiplicityVector, Relation,
};

use crate::CliError;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ExplicitFile {
    r: Vec<usize>,
    t: Vec<f64>,
    constraints: Vec<ConstraintFile>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConstraintFile {
    terms: Vec<(usize, usize, i64)>,
    rel: RelationFile,
    rhs: i64,
}

#[derive(Debug, Deserialize)]
#[serde(rename_all = "lowercase")]
enum RelationFile {
    Le,
    Eq,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ShiehFile {
    #[allow(dead_code)]
    builtin: String,
    m: usize,
    r: usize,
    d: usize,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct DerangementFile {
    #[allow(dead_code)]
    builtin: String,
    r: Vec<usize>,
    t: Vec<f64>,
}

pub fn load_spec(path: &std::path::Path) -> Result<CodeSpec, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    parse_spec(&text)
}

pub fn parse_spec(text: &str) -> Result<CodeSpec, CliError> {
    let value: Value =
        serde_json::from_str(text).map_err(|e| CliError::Usage(format!("invalid JSON: {e}")))?;
    let builtin = value.get("builtin").and_then(Value::as_str);
    match builtin {
        Some("shieh") => {
            let file: ShiehFile = from_value(value)?;
            Ok(shieh_spec(file.r, file.m, file.d).map_err(usage)?)
        }
        Some("derangement") => {
            let file: DerangementFile = from_value(value)?;
            let r = MultiplicityVector::new(file.r).map_err(usage)?;
            let t = InitialVector::new(file.t).map_err(usage)?;
            Ok(derangement_spec(&r, &t).map_err(usage)?)
        }
        Some(other) => Err(CliError::Usage(format!("unknown builtin \"{other}\""))),
        None => {
            let file: ExplicitFile = from_value(value)?;
            let r = MultiplicityVector::new(file.r).map_err(usage)?;
            let t = InitialVector::new(file.t).map_err(usage)?;
            let mut constraints = Vec::with_capacity(file.constraints.len());
            for c in file.constraints {
                let mut terms = Vec::with_capacity(c.terms.len());
                for (i, j, coef) in c.terms {
                    if i == 0 || j == 0 {
                        return Err(CliError::Usage(
                            "constraint indices are 1-based; got a 0".into(),
                        ));
                    }
                    terms.push((i - 1, j - 1, coef));
                }
                let relation = match c.rel {
                    RelationFile::Le => Relation::Le,
                    RelationFile::Eq => Relation::Eq,
                };
                constraints.push(LinearConstraint::new(terms, relation, c.rhs).map_err(usage)?);
            }
            Ok(CodeSpec::new(r, t, constraints).map_err(usage)?)
        }
    }
}

fn from_value<T: serde::de::DeserializeOwned>(value: Value) -> Result<T, CliError> {
    serde_json::from_value(value).map_err(|e| CliError::Usage(format!("invalid code file: {e}")))
}

fn usage(e: mpcode::Error) -> CliError {
    CliError::Usage(e.to_string())
}
