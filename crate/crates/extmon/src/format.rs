//! Textual and JSON serialization of systems, generator lists and vectors.
//!
//! The text format is line oriented; `#` starts a comment. A system file
//! reads:
//!
//! ```text
//! vars 2
//! unit 1 1            # optional order unit
//! cong 1 1 mod 2      # coeffs · t ∈ 2·(ℕ₀ ∪ {inf})
//! ineq 1 0 >= 0 1     # lhs · t ≥ rhs · t
//! eq 2 1 = 1 2        # sugar for the two opposed inequality rows
//! ```
//!
//! The JSON serialization mirrors the same fields, with integers rendered
//! as decimal strings (entries of vectors render `inf` for infinity).
//! Parsing and printing round-trip exactly.

use num_bigint::BigUint;
use serde_json::{json, Map, Value};
use std::fmt::Write as _;
use std::str::FromStr;

use crate::extnat::{ExtNat, ExtVector};
use crate::hilbert::GeneratorSet;
use crate::system::{CongRow, IneqRow, SystemSpec};
use crate::Error;

fn parse_uint(tok: &str, line_no: usize) -> Result<BigUint, Error> {
    BigUint::from_str(tok)
        .map_err(|_| Error::Parse(format!("line {}: `{}` is not a nonnegative integer", line_no, tok)))
}

fn parse_coeffs(toks: &[&str], k: usize, line_no: usize) -> Result<Vec<BigUint>, Error> {
    if toks.len() != k {
        return Err(Error::Parse(format!(
            "line {}: expected {} coefficients, found {}",
            line_no,
            k,
            toks.len()
        )));
    }
    toks.iter().map(|t| parse_uint(t, line_no)).collect()
}

/// Parses the text format described in the module documentation.
pub fn system_from_text(text: &str) -> Result<SystemSpec, Error> {
    let mut k: Option<usize> = None;
    let mut cong_rows = Vec::new();
    let mut ineq_rows = Vec::new();
    let mut unit: Option<Vec<BigUint>> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        let keyword = toks[0];
        if keyword == "vars" {
            if k.is_some() {
                return Err(Error::Parse(format!("line {}: duplicate `vars`", line_no)));
            }
            if toks.len() != 2 {
                return Err(Error::Parse(format!("line {}: expected `vars <k>`", line_no)));
            }
            let n: usize = toks[1]
                .parse()
                .map_err(|_| Error::Parse(format!("line {}: invalid dimension `{}`", line_no, toks[1])))?;
            if n == 0 {
                return Err(Error::Parse(format!("line {}: dimension must be positive", line_no)));
            }
            k = Some(n);
            continue;
        }
        let k = k.ok_or_else(|| Error::Parse(format!("line {}: `vars <k>` must come first", line_no)))?;
        match keyword {
            "unit" => {
                if unit.is_some() {
                    return Err(Error::Parse(format!("line {}: duplicate `unit`", line_no)));
                }
                unit = Some(parse_coeffs(&toks[1..], k, line_no)?);
            }
            "cong" => {
                let pos = toks
                    .iter()
                    .position(|&t| t == "mod")
                    .ok_or_else(|| Error::Parse(format!("line {}: missing `mod` in congruence", line_no)))?;
                if pos + 2 != toks.len() {
                    return Err(Error::Parse(format!("line {}: expected `cong <coeffs> mod <m>`", line_no)));
                }
                let coeffs = parse_coeffs(&toks[1..pos], k, line_no)?;
                let modulus = parse_uint(toks[pos + 1], line_no)?;
                if modulus < BigUint::from(2u32) {
                    return Err(Error::Parse(format!("line {}: modulus must be at least 2", line_no)));
                }
                cong_rows.push(CongRow { coeffs, modulus });
            }
            "ineq" => {
                let pos = toks
                    .iter()
                    .position(|&t| t == ">=")
                    .ok_or_else(|| Error::Parse(format!("line {}: missing `>=` in inequality", line_no)))?;
                let lhs = parse_coeffs(&toks[1..pos], k, line_no)?;
                let rhs = parse_coeffs(&toks[pos + 1..], k, line_no)?;
                ineq_rows.push(IneqRow { lhs, rhs });
            }
            "eq" => {
                let pos = toks
                    .iter()
                    .position(|&t| t == "=")
                    .ok_or_else(|| Error::Parse(format!("line {}: missing `=` in equation", line_no)))?;
                let lhs = parse_coeffs(&toks[1..pos], k, line_no)?;
                let rhs = parse_coeffs(&toks[pos + 1..], k, line_no)?;
                ineq_rows.push(IneqRow { lhs: lhs.clone(), rhs: rhs.clone() });
                ineq_rows.push(IneqRow { lhs: rhs, rhs: lhs });
            }
            other => {
                return Err(Error::Parse(format!("line {}: unknown directive `{}`", line_no, other)));
            }
        }
    }
    let k = k.ok_or_else(|| Error::Parse("missing `vars <k>` line".into()))?;
    SystemSpec::build(k, cong_rows, ineq_rows, unit)
}

/// Prints a system in the text format. `system_from_text` of the output
/// reproduces the system exactly, row order included.
pub fn system_to_text(s: &SystemSpec) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "vars {}", s.k());
    if let Some(u) = s.unit() {
        let _ = writeln!(out, "unit {}", join(u));
    }
    for row in s.cong_rows() {
        let _ = writeln!(out, "cong {} mod {}", join(&row.coeffs), row.modulus);
    }
    for row in s.ineq_rows() {
        let _ = writeln!(out, "ineq {} >= {}", join(&row.lhs), join(&row.rhs));
    }
    out
}

fn join(coeffs: &[BigUint]) -> String {
    coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" ")
}

fn coeffs_json(coeffs: &[BigUint]) -> Value {
    Value::Array(coeffs.iter().map(|c| Value::String(c.to_string())).collect())
}

/// JSON serialization of a system; mirrors the text format fields.
pub fn system_to_json(s: &SystemSpec) -> Value {
    let mut obj = Map::new();
    obj.insert("vars".into(), json!(s.k()));
    if let Some(u) = s.unit() {
        obj.insert("unit".into(), coeffs_json(u));
    }
    obj.insert(
        "cong".into(),
        Value::Array(
            s.cong_rows()
                .iter()
                .map(|row| json!({"coeffs": coeffs_json(&row.coeffs), "mod": row.modulus.to_string()}))
                .collect(),
        ),
    );
    obj.insert(
        "ineq".into(),
        Value::Array(
            s.ineq_rows()
                .iter()
                .map(|row| json!({"lhs": coeffs_json(&row.lhs), "rhs": coeffs_json(&row.rhs)}))
                .collect(),
        ),
    );
    Value::Object(obj)
}

fn coeffs_from_json(v: &Value, what: &str) -> Result<Vec<BigUint>, Error> {
    let arr = v
        .as_array()
        .ok_or_else(|| Error::Parse(format!("{}: expected an array of decimal strings", what)))?;
    arr.iter()
        .map(|e| {
            let s = e
                .as_str()
                .ok_or_else(|| Error::Parse(format!("{}: entries must be decimal strings", what)))?;
            BigUint::from_str(s).map_err(|_| Error::Parse(format!("{}: `{}` is not a nonnegative integer", what, s)))
        })
        .collect()
}

/// Parses the JSON serialization produced by [`system_to_json`].
pub fn system_from_json(v: &Value) -> Result<SystemSpec, Error> {
    let obj = v.as_object().ok_or_else(|| Error::Parse("expected a JSON object".into()))?;
    let k = obj
        .get("vars")
        .and_then(Value::as_u64)
        .ok_or_else(|| Error::Parse("missing or invalid `vars`".into()))? as usize;
    let unit = match obj.get("unit") {
        Some(u) => Some(coeffs_from_json(u, "unit")?),
        None => None,
    };
    let mut cong_rows = Vec::new();
    if let Some(congs) = obj.get("cong") {
        for (i, c) in congs
            .as_array()
            .ok_or_else(|| Error::Parse("`cong` must be an array".into()))?
            .iter()
            .enumerate()
        {
            let coeffs = coeffs_from_json(
                c.get("coeffs").ok_or_else(|| Error::Parse(format!("cong[{}]: missing coeffs", i)))?,
                "cong coeffs",
            )?;
            let m = c
                .get("mod")
                .and_then(Value::as_str)
                .ok_or_else(|| Error::Parse(format!("cong[{}]: missing mod", i)))?;
            let modulus = BigUint::from_str(m)
                .map_err(|_| Error::Parse(format!("cong[{}]: invalid modulus `{}`", i, m)))?;
            cong_rows.push(CongRow { coeffs, modulus });
        }
    }
    let mut ineq_rows = Vec::new();
    if let Some(ineqs) = obj.get("ineq") {
        for (i, r) in ineqs
            .as_array()
            .ok_or_else(|| Error::Parse("`ineq` must be an array".into()))?
            .iter()
            .enumerate()
        {
            let lhs = coeffs_from_json(
                r.get("lhs").ok_or_else(|| Error::Parse(format!("ineq[{}]: missing lhs", i)))?,
                "ineq lhs",
            )?;
            let rhs = coeffs_from_json(
                r.get("rhs").ok_or_else(|| Error::Parse(format!("ineq[{}]: missing rhs", i)))?,
                "ineq rhs",
            )?;
            ineq_rows.push(IneqRow { lhs, rhs });
        }
    }
    SystemSpec::build(k, cong_rows, ineq_rows, unit)
}

/// JSON rendering of a vector over the extended naturals: decimal strings
/// with `"inf"` for infinity.
pub fn vector_to_json(v: &ExtVector) -> Value {
    Value::Array(v.iter().map(|e| Value::String(e.to_string())).collect())
}

pub fn vector_from_json(v: &Value) -> Result<ExtVector, Error> {
    let arr = v.as_array().ok_or_else(|| Error::Parse("expected an array".into()))?;
    let entries = arr
        .iter()
        .map(|e| {
            e.as_str()
                .ok_or_else(|| Error::Parse("vector entries must be strings".into()))
                .and_then(ExtNat::from_str)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ExtVector::new(entries))
}

/// Parses a generator list: one vector per line, entries separated by
/// whitespace, `inf` allowed; an optional leading `dim <k>` line fixes the
/// dimension of an empty list.
pub fn generators_from_text(text: &str) -> Result<GeneratorSet, Error> {
    let mut dim: Option<usize> = None;
    let mut gens: Vec<ExtVector> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("dim ") {
            if dim.is_some() || !gens.is_empty() {
                return Err(Error::Parse(format!("line {}: `dim` must come first", line_no)));
            }
            dim = Some(
                rest.trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("line {}: invalid dimension", line_no)))?,
            );
            continue;
        }
        let v: ExtVector = line
            .parse()
            .map_err(|e| Error::Parse(format!("line {}: {}", line_no, e)))?;
        if let Some(d) = dim {
            if v.dim() != d {
                return Err(Error::Parse(format!("line {}: expected {} entries, got {}", line_no, d, v.dim())));
            }
        } else {
            dim = Some(v.dim());
        }
        gens.push(v);
    }
    let dim = dim.ok_or_else(|| Error::Parse("empty generator list needs a `dim <k>` line".into()))?;
    Ok(GeneratorSet::canonical(dim, gens))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_round_trip_is_exact() {
        let text = "vars 3\nunit 1 2 1\ncong 1 0 2 mod 4\ncong 0 1 0 mod 2\nineq 2 1 0 >= 0 0 3\n";
        let s = system_from_text(text).unwrap();
        assert_eq!(system_to_text(&s), text);
        let again = system_from_text(&system_to_text(&s)).unwrap();
        assert_eq!(system_to_text(&again), text);
    }

    #[test]
    fn eq_lines_desugar_to_opposed_rows() {
        let s = system_from_text("vars 2\neq 2 1 = 1 2\n").unwrap();
        assert_eq!(s.ineq_rows().len(), 2);
        assert_eq!(s, system_from_text("vars 2\nineq 2 1 >= 1 2\nineq 1 2 >= 2 1\n").unwrap());
    }

    #[test]
    fn comments_and_blank_lines_are_ignored() {
        let s = system_from_text("# order monoid\n\nvars 2  # two coordinates\nineq 1 0 >= 0 1\n").unwrap();
        assert_eq!(s.k(), 2);
        assert_eq!(s.ineq_rows().len(), 1);
    }

    #[test]
    fn parse_errors() {
        assert!(system_from_text("ineq 1 0 >= 0 1\n").is_err());
        assert!(system_from_text("vars 0\n").is_err());
        assert!(system_from_text("vars 2\ncong 1 1 mod 1\n").is_err());
        assert!(system_from_text("vars 2\nineq 1 >= 0 1\n").is_err());
        assert!(system_from_text("vars 2\nwhat 1 2\n").is_err());
        assert!(system_from_text("vars 2\nunit 0 1\n").is_err());
    }

    #[test]
    fn json_round_trip() {
        let text = "vars 2\nunit 1 1\ncong 1 1 mod 2\nineq 1 0 >= 0 1\n";
        let s = system_from_text(text).unwrap();
        let v = system_to_json(&s);
        let back = system_from_json(&v).unwrap();
        assert_eq!(system_to_text(&back), text);
        assert_eq!(v["cong"][0]["mod"], "2");
    }

    #[test]
    fn vector_json_round_trip() {
        let v: ExtVector = "1 inf 0".parse().unwrap();
        assert_eq!(vector_from_json(&vector_to_json(&v)).unwrap(), v);
    }

    #[test]
    fn generator_lists() {
        let g = generators_from_text("# gens\n1 1\n1 0\n").unwrap();
        assert_eq!(g.len(), 2);
        let empty = generators_from_text("dim 2\n").unwrap();
        assert_eq!(empty.dim(), 2);
        assert!(empty.is_empty());
        assert!(generators_from_text("1 1\n1 0 0\n").is_err());
        assert!(generators_from_text("").is_err());
    }
}
