//! Algebra description files.
//!
//! ```json
//! {"dim": 3, "brackets": [[1, 2, 3, 1.0]], "inner0": [[1,0,0],[0,1,0],[0,0,1]]}
//! ```
//!
//! Indices are 1-based; `[i, j, m, c]` sets `[X_i, X_j] = c X_m + …`.
//! `inner0` is optional and may be nested rows or one flat row-major array.

use std::collections::HashMap;
use std::path::Path;

use pinchwarp_core::LieAlgebraSpec;
use serde::Deserialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("{origin}: cannot read file: {source}")]
    Io {
        origin: String,
        source: std::io::Error,
    },
    #[error("{origin}:{line}:{column}: {message}")]
    Syntax {
        origin: String,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{origin}: field `{field}`: {message}")]
    Field {
        origin: String,
        field: String,
        message: String,
    },
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAlgebra {
    dim: usize,
    brackets: Vec<(usize, usize, usize, f64)>,
    #[serde(default)]
    inner0: Option<RawGram>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawGram {
    Rows(Vec<Vec<f64>>),
    Flat(Vec<f64>),
}

pub fn parse_algebra_str(text: &str, origin: &str) -> Result<LieAlgebraSpec, ParseError> {
    let raw: RawAlgebra = serde_json::from_str(text).map_err(|e| ParseError::Syntax {
        origin: origin.to_string(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let field = |field: String, message: String| ParseError::Field {
        origin: origin.to_string(),
        field,
        message,
    };
    let n = raw.dim;
    let mut spec = LieAlgebraSpec::new(n);
    let mut seen: HashMap<(usize, usize, usize), usize> = HashMap::new();
    for (pos, &(i, j, m, c)) in raw.brackets.iter().enumerate() {
        for (name, idx) in [("i", i), ("j", j), ("m", m)] {
            if idx == 0 || idx > n {
                return Err(field(
                    format!("brackets[{pos}]"),
                    format!("index {name} = {idx} outside 1..={n}"),
                ));
            }
        }
        if let Some(first) = seen.insert((i, j, m), pos) {
            return Err(field(
                format!("brackets[{pos}]"),
                format!("duplicate entry ({i}, {j}, {m}); first given at brackets[{first}]"),
            ));
        }
        spec = spec.with_bracket(i - 1, j - 1, m - 1, c);
    }
    if let Some(gram) = raw.inner0 {
        let flat = match gram {
            RawGram::Flat(v) => v,
            RawGram::Rows(rows) => {
                if let Some((r, row)) = rows.iter().enumerate().find(|(_, row)| row.len() != n) {
                    return Err(field(
                        format!("inner0[{r}]"),
                        format!("row has {} entries, expected {n}", row.len()),
                    ));
                }
                rows.concat()
            }
        };
        if flat.len() != n * n {
            return Err(field(
                "inner0".into(),
                format!("{} entries, expected {}", flat.len(), n * n),
            ));
        }
        spec = spec.with_inner0(flat);
    }
    Ok(spec)
}

pub fn parse_algebra_file(path: &Path) -> Result<LieAlgebraSpec, ParseError> {
    let origin = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|source| ParseError::Io {
        origin: origin.clone(),
        source,
    })?;
    parse_algebra_str(&text, &origin)
}

#[cfg(test)]
mod tests {
    use super::*;
    use pinchwarp_core::builtin;

    #[test]
    fn heisenberg_file() {
        let spec = parse_algebra_str(r#"{"dim":3,"brackets":[[1,2,3,1.0]]}"#, "t").unwrap();
        assert_eq!(spec, builtin("heis3").unwrap());
    }

    #[test]
    fn abelian_file() {
        let spec = parse_algebra_str(r#"{"dim":2,"brackets":[]}"#, "t").unwrap();
        assert_eq!(spec, builtin("abelian:2").unwrap());
    }

    #[test]
    fn duplicates_rejected() {
        let err = parse_algebra_str(r#"{"dim":3,"brackets":[[1,2,3,1.0],[1,2,3,2.0]]}"#, "t")
            .unwrap_err();
        match err {
            ParseError::Field { field, message, .. } => {
                assert_eq!(field, "brackets[1]");
                assert!(message.contains("duplicate"));
            }
            other => panic!("{other}"),
        }
    }

    #[test]
    fn index_range_and_syntax() {
        assert!(matches!(
            parse_algebra_str(r#"{"dim":3,"brackets":[[0,2,3,1.0]]}"#, "t"),
            Err(ParseError::Field { .. })
        ));
        assert!(matches!(
            parse_algebra_str(r#"{"dim":3,"brackets":[[1,2,4,1.0]]}"#, "t"),
            Err(ParseError::Field { .. })
        ));
        match parse_algebra_str("{\"dim\":3,\n\"brackets\":[[1,2,3]]}", "t") {
            Err(ParseError::Syntax { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            parse_algebra_str(r#"{"dim":3,"brackets":[],"extra":1}"#, "t"),
            Err(ParseError::Syntax { .. })
        ));
    }

    #[test]
    fn gram_shapes() {
        let nested =
            parse_algebra_str(r#"{"dim":2,"brackets":[],"inner0":[[2,0],[0,1]]}"#, "t").unwrap();
        let flat = parse_algebra_str(r#"{"dim":2,"brackets":[],"inner0":[2,0,0,1]}"#, "t").unwrap();
        assert_eq!(nested, flat);
        assert_eq!(flat.inner0, Some(vec![2.0, 0.0, 0.0, 1.0]));
        assert!(matches!(
            parse_algebra_str(r#"{"dim":2,"brackets":[],"inner0":[[2,0,0],[0,1]]}"#, "t"),
            Err(ParseError::Field { .. })
        ));
        assert!(matches!(
            parse_algebra_str(r#"{"dim":2,"brackets":[],"inner0":[1,0,1]}"#, "t"),
            Err(ParseError::Field { .. })
        ));
    }
}
