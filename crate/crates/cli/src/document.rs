//! Curvature-operator documents:
//!
//! ```json
//! {"matrix": [[...6 numbers...], ...6 rows...]}
//! {"blocks": {"s": 12, "B": [[...]], "Wplus": [[...]], "Wminus": [[...]]}}
//! ```
//!
//! Either form may be given; when both are present they must describe the
//! same operator.

use serde::Serialize;
use serde_json::Value;
use twistor_core::curvature::{compose, decompose};
use twistor_core::linalg::Mat3;
use twistor_core::{CurvatureBlocks, CurvatureOperator};

use crate::error::{CliError, CliResult};

/// Largest entrywise disagreement tolerated between the two forms.
const AGREEMENT_TOL: f64 = 1e-12;

pub fn parse(text: &str) -> CliResult<CurvatureOperator> {
    let doc: Value =
        serde_json::from_str(text).map_err(|e| CliError::Input(format!("invalid JSON: {e}")))?;
    let obj = doc
        .as_object()
        .ok_or_else(|| CliError::Input("document: expected a JSON object".into()))?;
    if let Some(key) = obj.keys().find(|k| *k != "matrix" && *k != "blocks") {
        return Err(CliError::Input(format!(
            "document: unknown field `{key}` (expected `matrix` and/or `blocks`)"
        )));
    }
    let from_matrix = obj
        .get("matrix")
        .map(|v| {
            let rows = rows::<6>(v, "matrix")?;
            CurvatureOperator::new(rows).map_err(|e| CliError::Validation(format!("matrix: {e}")))
        })
        .transpose()?;
    let from_blocks = obj.get("blocks").map(parse_blocks).transpose()?;
    match (from_matrix, from_blocks) {
        (Some(m), Some(b)) => {
            let diff = (0..6)
                .flat_map(|i| (0..6).map(move |j| (i, j)))
                .map(|(i, j)| (m.matrix()[i][j] - b.matrix()[i][j]).abs())
                .fold(0.0, f64::max);
            if diff > AGREEMENT_TOL * (1.0 + m.max_abs()) {
                return Err(CliError::Validation(format!(
                    "`matrix` and `blocks` describe different operators (max difference {diff:e})"
                )));
            }
            Ok(m)
        }
        (Some(m), None) => Ok(m),
        (None, Some(b)) => Ok(b),
        (None, None) => Err(CliError::Input(
            "document: missing field `matrix` or `blocks`".into(),
        )),
    }
}

fn parse_blocks(v: &Value) -> CliResult<CurvatureOperator> {
    let obj = v
        .as_object()
        .ok_or_else(|| CliError::Input("blocks: expected an object".into()))?;
    const FIELDS: [&str; 4] = ["s", "B", "Wplus", "Wminus"];
    if let Some(key) = obj.keys().find(|k| !FIELDS.contains(&k.as_str())) {
        return Err(CliError::Input(format!("blocks: unknown field `{key}`")));
    }
    let field = |name: &str| {
        obj.get(name)
            .ok_or_else(|| CliError::Input(format!("blocks: missing field `{name}`")))
    };
    let s = number(field("s")?, "blocks.s")?;
    let b = rows::<3>(field("B")?, "blocks.B")?;
    let w_plus = rows::<3>(field("Wplus")?, "blocks.Wplus")?;
    let w_minus = rows::<3>(field("Wminus")?, "blocks.Wminus")?;
    compose(&CurvatureBlocks::new(s, b, w_plus, w_minus))
        .map_err(|e| CliError::Validation(format!("blocks: {e}")))
}

fn number(v: &Value, path: &str) -> CliResult<f64> {
    let x = v
        .as_f64()
        .ok_or_else(|| CliError::Input(format!("{path}: expected a number, got {v}")))?;
    if !x.is_finite() {
        return Err(CliError::Input(format!("{path}: must be finite")));
    }
    Ok(x)
}

fn rows<const N: usize>(v: &Value, path: &str) -> CliResult<[[f64; N]; N]> {
    let outer = v
        .as_array()
        .filter(|a| a.len() == N)
        .ok_or_else(|| CliError::Input(format!("{path}: expected {N} rows")))?;
    let mut m = [[0.0; N]; N];
    for (i, row) in outer.iter().enumerate() {
        let row = row
            .as_array()
            .filter(|r| r.len() == N)
            .ok_or_else(|| CliError::Input(format!("{path}[{i}]: expected {N} numbers")))?;
        for (j, x) in row.iter().enumerate() {
            m[i][j] = number(x, &format!("{path}[{i}][{j}]"))?;
        }
    }
    Ok(m)
}

#[derive(Debug, Serialize)]
pub struct BlocksDoc {
    pub s: f64,
    #[serde(rename = "B")]
    pub b: Mat3,
    #[serde(rename = "Wplus")]
    pub w_plus: Mat3,
    #[serde(rename = "Wminus")]
    pub w_minus: Mat3,
    pub strict: bool,
}

/// Both forms of an operator, as written into reports.
#[derive(Debug, Serialize)]
pub struct CurvatureDoc {
    pub matrix: [[f64; 6]; 6],
    pub blocks: BlocksDoc,
}

impl CurvatureDoc {
    pub fn new(r: &CurvatureOperator) -> Self {
        let b = decompose(r);
        Self {
            matrix: unsigned_zeros(*r.matrix()),
            blocks: BlocksDoc {
                s: b.s + 0.0,
                b: unsigned_zeros(b.b),
                w_plus: unsigned_zeros(b.w_plus),
                w_minus: unsigned_zeros(b.w_minus),
                strict: b.strict,
            },
        }
    }
}

/// Writes `-0.0` as `0.0`.
fn unsigned_zeros<const N: usize>(m: [[f64; N]; N]) -> [[f64; N]; N] {
    m.map(|row| row.map(|x| x + 0.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    const IDENTITY_BLOCKS: &str = r#"{"blocks": {"s": 12, "B": [[0,0,0],[0,0,0],[0,0,0]],
        "Wplus": [[0,0,0],[0,0,0],[0,0,0]], "Wminus": [[0,0,0],[0,0,0],[0,0,0]]}}"#;

    fn identity_matrix() -> String {
        let rows: Vec<String> = (0..6)
            .map(|i| {
                let r: Vec<&str> = (0..6).map(|j| if i == j { "1" } else { "0" }).collect();
                format!("[{}]", r.join(","))
            })
            .collect();
        format!("[{}]", rows.join(","))
    }

    #[test]
    fn blocks_form() {
        assert_eq!(
            parse(IDENTITY_BLOCKS).unwrap(),
            CurvatureOperator::identity()
        );
    }

    #[test]
    fn matrix_form_and_agreement() {
        let m = identity_matrix();
        assert_eq!(
            parse(&format!(r#"{{"matrix": {m}}}"#)).unwrap(),
            CurvatureOperator::identity()
        );
        let both = IDENTITY_BLOCKS.replacen('{', &format!(r#"{{"matrix": {m},"#), 1);
        assert!(parse(&both).is_ok());
        let disagree = both.replace("\"s\": 12", "\"s\": 6");
        assert!(matches!(parse(&disagree), Err(CliError::Validation(_))));
    }

    #[test]
    fn malformed_documents_name_the_field() {
        let cases = [
            ("{}", "missing field `matrix` or `blocks`"),
            (r#"{"matrix": [[1]]}"#, "matrix: expected 6 rows"),
            (r#"{"blocks": {"s": 1}}"#, "missing field `B`"),
            (r#"{"blocks": {"s": "x"}}"#, "blocks.s"),
            (r#"{"curvature": 1}"#, "unknown field `curvature`"),
            ("[", "invalid JSON"),
        ];
        for (text, needle) in cases {
            match parse(text) {
                Err(CliError::Input(m)) => assert!(m.contains(needle), "{m}"),
                other => panic!("{text}: {other:?}"),
            }
        }
    }

    #[test]
    fn asymmetric_matrix_is_a_validation_error() {
        let mut m = identity_matrix();
        m.replace_range(4..5, "5");
        let err = parse(&format!(r#"{{"matrix": {m}}}"#)).unwrap_err();
        assert!(matches!(err, CliError::Validation(_)), "{err:?}");
    }
}
