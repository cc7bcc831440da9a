//! Arrangement input: the text file format, family specs, and the
//! canonical serializer.
//!
//! File format: a `field` line (`field Q` or `field GF(p)`), a `vars` line,
//! then one hyperplane per line as integers with an optional `^ m`
//! multiplicity suffix. `#` starts a comment.

use arrh::arrangement::MultiArrangement;
use arrh::families::{build_family, MultSpec};
use arrh::field::Field;
use std::collections::BTreeMap;

#[derive(Debug, thiserror::Error)]
pub enum InputError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("{0}")]
    Family(#[from] arrh::families::FamilyError),
    #[error("{0}")]
    Arrangement(#[from] arrh::arrangement::ArrangementError),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub fn parse_arrangement(text: &str) -> Result<MultiArrangement, InputError> {
    let mut field: Option<Field> = None;
    let mut nvars: Option<usize> = None;
    let mut forms: Vec<Vec<i64>> = Vec::new();
    let mut mults: Vec<u32> = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let line_no = ln + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: String| InputError::Parse { line: line_no, msg };
        if let Some(rest) = line.strip_prefix("field") {
            let spec = rest.trim();
            let f = if spec == "Q" {
                Field::Q
            } else if let Some(p) = spec.strip_prefix("GF(").and_then(|s| s.strip_suffix(')')) {
                let p: u64 = p
                    .trim()
                    .parse()
                    .map_err(|_| err(format!("bad prime `{p}`")))?;
                Field::Fp(p)
            } else {
                return Err(err(format!("unknown field `{spec}`")));
            };
            f.validate()
                .map_err(|e| err(format!("invalid field: {e}")))?;
            field = Some(f);
            continue;
        }
        if let Some(rest) = line.strip_prefix("vars") {
            let n: usize = rest
                .trim()
                .parse()
                .map_err(|_| err(format!("bad variable count `{}`", rest.trim())))?;
            if n == 0 {
                return Err(err("vars must be positive".to_string()));
            }
            nvars = Some(n);
            continue;
        }
        let n = nvars.ok_or_else(|| err("hyperplane before `vars` line".to_string()))?;
        let (coeff_part, mult) = match line.split_once('^') {
            None => (line, 1u32),
            Some((c, m)) => {
                let m: u32 = m
                    .trim()
                    .parse()
                    .map_err(|_| err(format!("bad multiplicity `{}`", m.trim())))?;
                (c, m)
            }
        };
        let coeffs: Vec<i64> = coeff_part
            .split_whitespace()
            .map(|tok| {
                tok.parse::<i64>()
                    .map_err(|_| err(format!("bad coefficient `{tok}`")))
            })
            .collect::<Result<_, _>>()?;
        if coeffs.len() != n {
            return Err(err(format!(
                "expected {n} coefficients, found {}",
                coeffs.len()
            )));
        }
        forms.push(coeffs);
        mults.push(mult);
    }
    let field = field.ok_or(InputError::Parse {
        line: 0,
        msg: "missing `field` line".to_string(),
    })?;
    Ok(MultiArrangement::from_int_forms(field, &forms, &mults)?)
}

/// Canonical text form: re-parses to the identical arrangement.
pub fn serialize_arrangement(arr: &MultiArrangement) -> String {
    let mut out = String::new();
    out.push_str(&format!("field {}\n", arr.field));
    out.push_str(&format!("vars {}\n", arr.num_vars));
    for i in 0..arr.size() {
        let coeffs: Vec<String> = arr.form(i).iter().map(|s| s.to_string()).collect();
        out.push_str(&coeffs.join(" "));
        if arr.mult(i) != 1 {
            out.push_str(&format!(" ^ {}", arr.mult(i)));
        }
        out.push('\n');
    }
    out
}

pub struct InputSpec {
    pub file: Option<String>,
    pub family: Option<String>,
    pub field: Field,
    pub params: BTreeMap<String, String>,
    pub mults: MultSpec,
}

pub fn resolve_input(spec: &InputSpec) -> Result<MultiArrangement, InputError> {
    if let Some(path) = &spec.file {
        let text = std::fs::read_to_string(path)?;
        let arr = parse_arrangement(&text)?;
        return Ok(match &spec.mults {
            MultSpec::Default => arr,
            MultSpec::N(n) => arr.with_mults(vec![*n; arr.size()])?,
            MultSpec::List(list) => arr.with_mults(list.clone())?,
        });
    }
    let family = spec.family.as_deref().unwrap_or_default();
    Ok(build_family(spec.field, family, &spec.params, &spec.mults)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_roundtrip() {
        let text = "field Q\nvars 3\n1 0 0 ^3\n0 1 0 ^3\n0 0 1 ^3\n1 -2 0\n1 2 0\n0 1 -1\n1 0 -1\n";
        let arr = parse_arrangement(text).unwrap();
        assert_eq!(arr.size(), 7);
        assert_eq!(arr.total_multiplicity(), 13);
        let canon = serialize_arrangement(&arr);
        let again = parse_arrangement(&canon).unwrap();
        assert_eq!(arr, again);
        assert_eq!(canon, serialize_arrangement(&again));
    }

    #[test]
    fn errors_have_line_numbers() {
        let bad = "field Q\nvars 3\n1 0\n";
        match parse_arrangement(bad) {
            Err(InputError::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("expected parse error, got {other:?}"),
        }
        assert!(parse_arrangement("field GF(4)\nvars 2\n1 0\n").is_err());
        assert!(parse_arrangement("vars 2\n1 0\n").is_err());
    }
}
