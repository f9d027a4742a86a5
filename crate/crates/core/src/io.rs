//! The algebra file format: a JSON document with the prime, dimension, basis
//! names, a sparse bracket table and an optional linear form. All rationals
//! travel as strings "a/b" or "a"; no floating point anywhere.

use crate::forms::LinearForm;
use crate::lie::LieAlgebra;
use crate::linalg::{zeros, Vector};
use crate::scalars::Rat;
use crate::{Error, Result};
use serde::Deserialize;
use std::collections::BTreeMap;
use std::str::FromStr;

#[derive(Debug, Deserialize)]
struct AlgebraFile {
    prime: u64,
    dimension: usize,
    basis: Vec<String>,
    #[serde(default)]
    brackets: BTreeMap<String, BTreeMap<String, String>>,
    #[serde(default)]
    lambda: Option<BTreeMap<String, String>>,
}

fn parse_rat(s: &str, context: &str) -> Result<Rat> {
    Rat::from_str(s.trim())
        .map_err(|e| Error::Parse(format!("bad rational {s:?} in {context}: {e}")))
}

fn name_index(names: &[String], name: &str, context: &str) -> Result<usize> {
    names
        .iter()
        .position(|n| n == name)
        .ok_or_else(|| Error::Parse(format!("unknown basis name {name:?} in {context}")))
}

/// Key format "[ei,ej]" with the names from the basis list.
fn parse_bracket_key(names: &[String], key: &str) -> Result<(usize, usize)> {
    let inner = key
        .strip_prefix('[')
        .and_then(|k| k.strip_suffix(']'))
        .ok_or_else(|| Error::Parse(format!("bracket key {key:?} must look like \"[a,b]\"")))?;
    let mut parts = inner.splitn(2, ',');
    let left = parts
        .next()
        .ok_or_else(|| Error::Parse(format!("bracket key {key:?} missing first entry")))?
        .trim();
    let right = parts
        .next()
        .ok_or_else(|| Error::Parse(format!("bracket key {key:?} missing second entry")))?
        .trim();
    let i = name_index(names, left, "bracket key")?;
    let j = name_index(names, right, "bracket key")?;
    if i == j {
        return Err(Error::Parse(format!(
            "bracket key {key:?} repeats a basis vector"
        )));
    }
    Ok((i, j))
}

fn put_bracket(
    table: &mut [Vec<Option<Vector>>],
    i: usize,
    j: usize,
    value: Vector,
    names: &[String],
) -> Result<()> {
    match &table[i][j] {
        None => {
            table[i][j] = Some(value);
            Ok(())
        }
        Some(existing) if *existing == value => Ok(()),
        Some(_) => Err(Error::Parse(format!(
            "brackets specify [{},{}] twice with inconsistent values",
            names[i], names[j]
        ))),
    }
}

/// Parse the algebra file, validate the presentation, and return the algebra
/// together with the optional linear form. The antisymmetric completion of
/// the bracket table is automatic; specifying both [x,y] and [y,x]
/// inconsistently is an error.
pub fn parse_algebra(json: &str) -> Result<(LieAlgebra, Option<LinearForm>)> {
    let file: AlgebraFile = serde_json::from_str(json).map_err(|e| Error::Parse(e.to_string()))?;
    if file.basis.len() != file.dimension {
        return Err(Error::Parse(format!(
            "dimension is {} but {} basis names are given",
            file.dimension,
            file.basis.len()
        )));
    }
    let d = file.dimension;
    let mut table: Vec<Vec<Option<Vector>>> = vec![vec![None; d]; d];
    for (key, entries) in &file.brackets {
        let (i, j) = parse_bracket_key(&file.basis, key)?;
        let mut v = zeros(d);
        for (name, value) in entries {
            let k = name_index(&file.basis, name, &format!("bracket {key}"))?;
            v[k] = parse_rat(value, &format!("bracket {key}"))?;
        }
        let neg: Vector = v.iter().map(|c| -c).collect();
        put_bracket(&mut table, i, j, v, &file.basis)?;
        put_bracket(&mut table, j, i, neg, &file.basis)?;
    }
    let brackets: Vec<Vec<Vector>> = table
        .into_iter()
        .map(|row| {
            row.into_iter()
                .map(|v| v.unwrap_or_else(|| zeros(d)))
                .collect()
        })
        .collect();
    let algebra = LieAlgebra::new(file.prime, file.basis.clone(), brackets)?;
    let lambda = match file.lambda {
        None => None,
        Some(entries) => {
            let mut coords = zeros(d);
            for (name, value) in &entries {
                let k = name_index(&file.basis, name, "lambda")?;
                coords[k] = parse_rat(value, "lambda")?;
            }
            Some(LinearForm::integral(coords, file.prime)?)
        }
    };
    Ok((algebra, lambda))
}

/// Serialise an algebra (and optional form) back to the file format.
pub fn algebra_to_json(g: &LieAlgebra, lambda: Option<&LinearForm>) -> serde_json::Value {
    let mut brackets = serde_json::Map::new();
    for i in 0..g.dim() {
        for j in i + 1..g.dim() {
            let v = g.basis_bracket(i, j);
            if crate::linalg::vec_is_zero(v) {
                continue;
            }
            let mut entry = serde_json::Map::new();
            for (k, c) in v.iter().enumerate() {
                if !num_traits::Zero::is_zero(c) {
                    entry.insert(g.name(k).to_string(), c.to_string().into());
                }
            }
            brackets.insert(format!("[{},{}]", g.name(i), g.name(j)), entry.into());
        }
    }
    let mut doc = serde_json::Map::new();
    doc.insert("prime".into(), g.prime().into());
    doc.insert("dimension".into(), g.dim().into());
    doc.insert(
        "basis".into(),
        g.names()
            .iter()
            .map(|n| n.to_string())
            .collect::<Vec<_>>()
            .into(),
    );
    doc.insert("brackets".into(), brackets.into());
    if let Some(l) = lambda {
        let mut entry = serde_json::Map::new();
        for (k, c) in l.coords().iter().enumerate() {
            if !num_traits::Zero::is_zero(c) {
                entry.insert(g.name(k).to_string(), c.to_string().into());
            }
        }
        doc.insert("lambda".into(), entry.into());
    }
    doc.into()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::rint;

    const H3: &str = r#"{
        "prime": 3,
        "dimension": 3,
        "basis": ["e1", "e2", "e3"],
        "brackets": { "[e1,e2]": {"e3": "1"} },
        "lambda": {"e3": "1"}
    }"#;

    #[test]
    fn parse_h3() {
        let (g, l) = parse_algebra(H3).unwrap();
        assert_eq!(g.dim(), 3);
        assert_eq!(g.basis_bracket(0, 1)[2], rint(1));
        assert_eq!(g.basis_bracket(1, 0)[2], rint(-1));
        let l = l.unwrap();
        assert_eq!(l.coords()[2], rint(1));
    }

    #[test]
    fn round_trip() {
        let (g, l) = parse_algebra(H3).unwrap();
        let json = algebra_to_json(&g, l.as_ref()).to_string();
        let (g2, l2) = parse_algebra(&json).unwrap();
        assert_eq!(g, g2);
        assert_eq!(l, l2);
    }

    #[test]
    fn inconsistent_double_spec() {
        let bad = r#"{
            "prime": 3, "dimension": 3, "basis": ["e1","e2","e3"],
            "brackets": { "[e1,e2]": {"e3": "1"}, "[e2,e1]": {"e3": "1"} }
        }"#;
        let err = parse_algebra(bad).unwrap_err();
        assert!(matches!(err, Error::Parse(_)), "got {err:?}");
    }

    #[test]
    fn consistent_double_spec_accepted() {
        let ok = r#"{
            "prime": 3, "dimension": 3, "basis": ["e1","e2","e3"],
            "brackets": { "[e1,e2]": {"e3": "1"}, "[e2,e1]": {"e3": "-1"} }
        }"#;
        assert!(parse_algebra(ok).is_ok());
    }

    #[test]
    fn jacobi_failure_reported() {
        // [e1,e2]=e3, [e1,e3]=e1 breaks nilpotency/Jacobi.
        let bad = r#"{
            "prime": 3, "dimension": 3, "basis": ["e1","e2","e3"],
            "brackets": { "[e1,e2]": {"e3": "1"}, "[e1,e3]": {"e1": "1"} }
        }"#;
        assert!(matches!(parse_algebra(bad), Err(Error::Validation(_))));
    }

    #[test]
    fn parse_error_positions() {
        let err = parse_algebra("{ not json").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("line") || msg.contains("column"), "got {msg}");
    }

    #[test]
    fn non_integral_lambda_rejected() {
        let bad = r#"{
            "prime": 3, "dimension": 1, "basis": ["e1"],
            "lambda": {"e1": "1/3"}
        }"#;
        assert!(parse_algebra(bad).is_err());
    }
}
