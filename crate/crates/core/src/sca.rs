//! The `.sca` structure-constant file format (JSON).

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::algebra::SuperAlgebra;
use crate::error::{Error, Result};
use crate::field::FieldSpec;

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScaFile {
    pub dim_even: usize,
    pub dim_odd: usize,
    pub field: FieldSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    #[serde(default)]
    pub products: Vec<ScaProduct>,
    /// When false, omitted transposed products stay zero.
    #[serde(default = "yes", skip_serializing_if = "is_true")]
    pub complete: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScaProduct {
    pub left: String,
    pub right: String,
    pub result: Vec<(String, String)>,
}

fn yes() -> bool {
    true
}

fn is_true(b: &bool) -> bool {
    *b
}

/// Line and column (1-based) of the first occurrence of `needle`.
fn locate(text: &str, needle: &str) -> (usize, usize) {
    match text.find(needle) {
        Some(off) => {
            let before = &text[..off];
            let line = before.matches('\n').count() + 1;
            let col = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
            (line, col)
        }
        None => (1, 1),
    }
}

/// Parses `.sca` text. `force_no_complete` disables transpose completion
/// regardless of the file's own setting.
pub fn parse(path: &str, text: &str, force_no_complete: bool) -> Result<SuperAlgebra> {
    let fail = |line, column, message: String| Error::Format {
        path: path.to_string(),
        line,
        column,
        message,
    };
    if text.trim().is_empty() {
        return Err(fail(1, 1, "empty file".into()));
    }
    let file: ScaFile =
        serde_json::from_str(text).map_err(|e| fail(e.line(), e.column(), e.to_string()))?;
    let field = file.field.to_field().map_err(|e| {
        let (l, c) = locate(text, "\"field\"");
        fail(l, c, e.to_string())
    })?;
    let d = file.dim_even + file.dim_odd;
    let labels = file
        .labels
        .clone()
        .unwrap_or_else(|| crate::algebra::default_labels(file.dim_even, file.dim_odd));
    if labels.len() != d {
        let (l, c) = locate(text, "\"labels\"");
        return Err(fail(l, c, format!("{} labels for dimension {d}", labels.len())));
    }
    let index = |name: &str| -> Result<usize> {
        labels.iter().position(|x| x == name).ok_or_else(|| {
            let (l, c) = locate(text, &format!("\"{name}\""));
            fail(l, c, format!("unknown label {name:?}"))
        })
    };
    let mut products = Vec::new();
    for p in &file.products {
        let (i, j) = (index(&p.left)?, index(&p.right)?);
        let mut terms = Vec::new();
        for (coef, label) in &p.result {
            let s = field.parse(coef).map_err(|e| {
                let (l, c) = locate(text, &format!("\"{coef}\""));
                fail(l, c, e.to_string())
            })?;
            terms.push((s, index(label)?));
        }
        products.push((i, j, terms));
    }
    SuperAlgebra::from_products(
        file.dim_even,
        file.dim_odd,
        field,
        file.labels,
        &products,
        file.complete && !force_no_complete,
    )
    .map_err(|e| {
        let (l, c) = locate(text, "\"products\"");
        fail(l, c, e.to_string())
    })
}

pub fn load(path: &Path, force_no_complete: bool) -> Result<SuperAlgebra> {
    let text = std::fs::read_to_string(path)?;
    parse(&path.display().to_string(), &text, force_no_complete)
}

pub fn to_file(a: &SuperAlgebra) -> ScaFile {
    let d = a.dim();
    let supercomm = a.check_supercommutativity().holds;
    let mut products = Vec::new();
    for i in 0..d {
        for j in 0..d {
            let prod = a.basis_product(i, j);
            let keep = if supercomm {
                i <= j && !prod.is_empty()
            } else {
                !prod.is_empty()
            };
            if keep {
                products.push(ScaProduct {
                    left: a.label(i).to_string(),
                    right: a.label(j).to_string(),
                    result: prod
                        .iter()
                        .map(|(k, c)| (c.to_string(), a.label(*k).to_string()))
                        .collect(),
                });
            }
        }
    }
    let defaults = crate::algebra::default_labels(a.dim_even(), a.dim_odd());
    ScaFile {
        dim_even: a.dim_even(),
        dim_odd: a.dim_odd(),
        field: a.field().into(),
        labels: (a.labels() != defaults.as_slice()).then(|| a.labels().to_vec()),
        products,
        complete: supercomm,
    }
}

pub fn to_string(a: &SuperAlgebra) -> String {
    let mut s = serde_json::to_string_pretty(&to_file(a)).expect("serializable");
    s.push('\n');
    s
}

pub fn save(a: &SuperAlgebra, path: &Path) -> Result<()> {
    std::fs::write(path, to_string(a))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn round_trip_catalog() {
        for name in ["K3", "S3_13", "KAC10", "SHESTAKOV7", "T6s"] {
            let a = catalog::get(name).unwrap().algebra;
            let text = to_string(&a);
            let b = parse("mem", &text, false).unwrap();
            assert_eq!(a, b, "{name}");
            assert_eq!(a.labels(), b.labels());
        }
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse("x.sca", "", false).unwrap_err();
        assert!(matches!(e, Error::Format { line: 1, .. }));
        let bad = "{\n  \"dim_even\": 1,\n  \"dim_odd\": 0,\n  \"field\": \"rational\",\n  \"products\": [{\"left\": \"e1\", \"right\": \"q\", \"result\": []}]\n}";
        match parse("x.sca", bad, false).unwrap_err() {
            Error::Format { line, message, .. } => {
                assert_eq!(line, 5);
                assert!(message.contains("unknown label"));
            }
            e => panic!("{e}"),
        }
        let syntax = "{\"dim_even\": 1,\n \"dim_odd\": }";
        assert!(matches!(parse("x.sca", syntax, false).unwrap_err(), Error::Format { line: 2, .. }));
    }

    #[test]
    fn completion_flag() {
        let text = r#"{"dim_even": 1, "dim_odd": 2, "field": {"prime": 5},
            "products": [{"left": "o1", "right": "o2", "result": [["1", "e1"]]}]}"#;
        let a = parse("m", text, false).unwrap();
        assert_eq!(a.format_element(&a.multiply(&a.basis(2), &a.basis(1)).unwrap()), "4*e1");
        let b = parse("m", text, true).unwrap();
        assert!(!b.check_supercommutativity().holds);
        let again = parse("m", &to_string(&b), false).unwrap();
        assert_eq!(again, b);
    }
}
