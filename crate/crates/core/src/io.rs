//! Text formats: norm-spec documents (tagged JSON trees), matrices as complex
//! CSV or JSON, and complex literals like `1-2.5i`.

use num_complex::Complex64;
use serde_json::{json, Map, Value};

use crate::error::{LabError, Result};
use crate::gind::GIndPair;
use crate::linalg::{Matrix, Vector};
use crate::matrix_norms::MatrixNormSpec;
use crate::sphere_opt::OptBudget;
use crate::vector_norms::{ExtractedRole, VectorNormSpec};

/// A parsed norm document: a norm on vectors or on matrices.
#[derive(Debug, Clone, PartialEq)]
pub enum NormSpec {
    Vector(VectorNormSpec),
    Matrix(MatrixNormSpec),
}

fn err(locus: &str, message: impl Into<String>) -> LabError {
    LabError::parse(locus, message)
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str, path: &str) -> Result<&'a Value> {
    obj.get(key)
        .ok_or_else(|| err(path, format!("missing field \"{key}\"")))
}

fn number(v: &Value, path: &str) -> Result<f64> {
    v.as_f64().ok_or_else(|| err(path, "expected a number"))
}

fn exponent(v: &Value, path: &str) -> Result<f64> {
    let p = match v {
        Value::String(s) if matches!(s.as_str(), "inf" | "infinity" | "Infinity") => f64::INFINITY,
        _ => number(v, path)?,
    };
    if !(p >= 1.0) {
        return Err(err(path, format!("p < 1 (p = {p})")));
    }
    Ok(p)
}

fn gamma_of(obj: &Map<String, Value>, path: &str) -> Result<f64> {
    let locus = format!("{path}.gamma");
    let g = number(field(obj, "gamma", path)?, &locus)?;
    if !(g > 0.0 && g.is_finite()) {
        return Err(err(&locus, format!("gamma must be positive (gamma = {g})")));
    }
    Ok(g)
}

fn budget_of(v: Option<&Value>, path: &str) -> Result<OptBudget> {
    let Some(v) = v else {
        return Ok(OptBudget::nested(2));
    };
    let b: OptBudget =
        serde_json::from_value(v.clone()).map_err(|e| err(&format!("{path}.budget"), e.to_string()))?;
    b.validate()
        .map_err(|e| err(&format!("{path}.budget"), e.to_string()))?;
    Ok(b)
}

/// Parse a norm document from JSON text.
pub fn parse_norm_spec(text: &str) -> Result<NormSpec> {
    let value: Value = serde_json::from_str(text).map_err(|e| {
        err(
            &format!("line {}, column {}", e.line(), e.column()),
            e.to_string(),
        )
    })?;
    norm_from_value(&value, "$")
}

pub fn norm_from_value(v: &Value, path: &str) -> Result<NormSpec> {
    let obj = v
        .as_object()
        .ok_or_else(|| err(path, "expected an object with a \"kind\" field"))?;
    let kind = field(obj, "kind", path)?
        .as_str()
        .ok_or_else(|| err(&format!("{path}.kind"), "expected a string"))?;
    let simple = |m: MatrixNormSpec| Ok(NormSpec::Matrix(m));
    match kind {
        "sigma" => simple(MatrixNormSpec::EntrywiseSum),
        "entrywise-max" => simple(MatrixNormSpec::EntrywiseMax),
        "maxcolsum" => simple(MatrixNormSpec::MaxColSum),
        "maxrowsum" => simple(MatrixNormSpec::MaxRowSum),
        "spectral" => simple(MatrixNormSpec::Spectral),
        "lp" => Ok(NormSpec::Vector(VectorNormSpec::Lp(exponent(
            field(obj, "p", path)?,
            &format!("{path}.p"),
        )?))),
        "weighted-lp" => {
            let p = exponent(field(obj, "p", path)?, &format!("{path}.p"))?;
            let wpath = format!("{path}.weights");
            let weights = field(obj, "weights", path)?
                .as_array()
                .ok_or_else(|| err(&wpath, "expected an array"))?
                .iter()
                .enumerate()
                .map(|(i, w)| number(w, &format!("{wpath}[{i}]")))
                .collect::<Result<Vec<f64>>>()?;
            VectorNormSpec::weighted(weights, p)
                .map(NormSpec::Vector)
                .map_err(|e| err(&wpath, e.to_string()))
        }
        "scaled" => {
            let gamma = gamma_of(obj, path)?;
            match norm_from_value(field(obj, "inner", path)?, &format!("{path}.inner"))? {
                NormSpec::Vector(inner) => Ok(NormSpec::Vector(VectorNormSpec::Scaled {
                    gamma,
                    inner: Box::new(inner),
                })),
                NormSpec::Matrix(inner) => Ok(NormSpec::Matrix(MatrixNormSpec::Scaled {
                    gamma,
                    inner: Box::new(inner),
                })),
            }
        }
        "maxof" => {
            let ipath = format!("{path}.inner");
            let members = field(obj, "inner", path)?
                .as_array()
                .ok_or_else(|| err(&ipath, "expected an array"))?;
            if members.is_empty() {
                return Err(err(&ipath, "empty maxof"));
            }
            let parsed = members
                .iter()
                .enumerate()
                .map(|(i, m)| norm_from_value(m, &format!("{ipath}[{i}]")))
                .collect::<Result<Vec<_>>>()?;
            if parsed.iter().all(|m| matches!(m, NormSpec::Vector(_))) {
                Ok(NormSpec::Vector(VectorNormSpec::MaxOf(
                    parsed
                        .into_iter()
                        .map(|m| match m {
                            NormSpec::Vector(v) => v,
                            NormSpec::Matrix(_) => unreachable!(),
                        })
                        .collect(),
                )))
            } else if parsed.iter().all(|m| matches!(m, NormSpec::Matrix(_))) {
                Ok(NormSpec::Matrix(MatrixNormSpec::MaxOf(
                    parsed
                        .into_iter()
                        .map(|m| match m {
                            NormSpec::Matrix(m) => m,
                            NormSpec::Vector(_) => unreachable!(),
                        })
                        .collect(),
                )))
            } else {
                Err(err(&ipath, "maxof mixes vector and matrix norms"))
            }
        }
        "gind" => {
            let norm1 = vector_from_value(field(obj, "norm1", path)?, &format!("{path}.norm1"))?;
            let norm2 = vector_from_value(field(obj, "norm2", path)?, &format!("{path}.norm2"))?;
            Ok(NormSpec::Matrix(MatrixNormSpec::GInd(GIndPair::new(norm1, norm2))))
        }
        "extracted" => {
            let rpath = format!("{path}.role");
            let role = match field(obj, "role", path)?.as_u64() {
                Some(1) => ExtractedRole::Norm1,
                Some(2) => ExtractedRole::Norm2,
                _ => return Err(err(&rpath, "role must be 1 or 2")),
            };
            let source = matrix_from_value(field(obj, "source", path)?, &format!("{path}.source"))?;
            Ok(NormSpec::Vector(VectorNormSpec::Extracted {
                role,
                source: Box::new(source),
                budget: budget_of(obj.get("budget"), path)?,
            }))
        }
        other => Err(err(&format!("{path}.kind"), format!("unknown kind \"{other}\""))),
    }
}

fn vector_from_value(v: &Value, path: &str) -> Result<VectorNormSpec> {
    match norm_from_value(v, path)? {
        NormSpec::Vector(s) => Ok(s),
        NormSpec::Matrix(_) => Err(err(path, "expected a vector norm")),
    }
}

fn matrix_from_value(v: &Value, path: &str) -> Result<MatrixNormSpec> {
    match norm_from_value(v, path)? {
        NormSpec::Matrix(s) => Ok(s),
        NormSpec::Vector(_) => Err(err(path, "expected a matrix norm")),
    }
}

fn p_value(p: f64) -> Value {
    if p.is_infinite() {
        json!("inf")
    } else {
        json!(p)
    }
}

pub fn vector_norm_to_value(spec: &VectorNormSpec) -> Value {
    match spec {
        VectorNormSpec::Lp(p) => json!({"kind": "lp", "p": p_value(*p)}),
        VectorNormSpec::Scaled { gamma, inner } => {
            json!({"kind": "scaled", "gamma": gamma, "inner": vector_norm_to_value(inner)})
        }
        VectorNormSpec::MaxOf(m) => {
            json!({"kind": "maxof", "inner": m.iter().map(vector_norm_to_value).collect::<Vec<_>>()})
        }
        VectorNormSpec::WeightedLp { weights, p } => {
            json!({"kind": "weighted-lp", "weights": weights, "p": p_value(*p)})
        }
        VectorNormSpec::Extracted {
            role,
            source,
            budget,
        } => json!({
            "kind": "extracted",
            "role": role.index(),
            "source": matrix_norm_to_value(source),
            "budget": budget,
        }),
    }
}

pub fn matrix_norm_to_value(spec: &MatrixNormSpec) -> Value {
    match spec {
        MatrixNormSpec::EntrywiseSum => json!({"kind": "sigma"}),
        MatrixNormSpec::EntrywiseMax => json!({"kind": "entrywise-max"}),
        MatrixNormSpec::MaxColSum => json!({"kind": "maxcolsum"}),
        MatrixNormSpec::MaxRowSum => json!({"kind": "maxrowsum"}),
        MatrixNormSpec::Spectral => json!({"kind": "spectral"}),
        MatrixNormSpec::MaxOf(m) => {
            json!({"kind": "maxof", "inner": m.iter().map(matrix_norm_to_value).collect::<Vec<_>>()})
        }
        MatrixNormSpec::Scaled { gamma, inner } => {
            json!({"kind": "scaled", "gamma": gamma, "inner": matrix_norm_to_value(inner)})
        }
        MatrixNormSpec::GInd(pair) => json!({
            "kind": "gind",
            "norm1": vector_norm_to_value(&pair.norm1),
            "norm2": vector_norm_to_value(&pair.norm2),
        }),
    }
}

pub fn print_norm_spec(spec: &NormSpec) -> String {
    let v = match spec {
        NormSpec::Vector(s) => vector_norm_to_value(s),
        NormSpec::Matrix(s) => matrix_norm_to_value(s),
    };
    serde_json::to_string(&v).expect("json values serialize")
}

/// Parse `a`, `a+bi`, `a-bi`, `bi`, `i`, `-i` (surrounding whitespace ignored).
pub fn parse_complex(text: &str) -> Result<Complex64> {
    let s = text.trim();
    let bad = || err(&format!("\"{s}\""), "malformed complex literal");
    if s.is_empty() {
        return Err(bad());
    }
    let Some(body) = s.strip_suffix('i') else {
        return s.parse::<f64>().map(|re| Complex64::new(re, 0.0)).map_err(|_| bad());
    };
    // Split before the sign that starts the imaginary part, skipping signs
    // that belong to an exponent.
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re_text, im_text) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("", body),
    };
    let im = match im_text {
        "" | "+" => 1.0,
        "-" => -1.0,
        t => t.parse::<f64>().map_err(|_| bad())?,
    };
    let re = if re_text.is_empty() {
        0.0
    } else {
        re_text.parse::<f64>().map_err(|_| bad())?
    };
    Ok(Complex64::new(re, im))
}

/// Parse a matrix from CSV text with complex cells.
pub fn parse_matrix_csv(text: &str) -> Result<Matrix> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut rows: Vec<Vec<Complex64>> = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| err(&format!("line {}", i + 1), e.to_string()))?;
        if record.iter().all(|c| c.is_empty()) {
            continue;
        }
        let row = record
            .iter()
            .enumerate()
            .map(|(j, cell)| {
                parse_complex(cell).map_err(|e| match e {
                    LabError::Parse { message, .. } => err(
                        &format!("line {}, column {}", i + 1, j + 1),
                        format!("{message}: \"{cell}\""),
                    ),
                    other => other,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    build_matrix(rows)
}

fn build_matrix(rows: Vec<Vec<Complex64>>) -> Result<Matrix> {
    let n = rows.len();
    if n == 0 {
        return Err(err("matrix", "no rows"));
    }
    for (i, r) in rows.iter().enumerate() {
        if r.len() != rows[0].len() {
            return Err(err(
                &format!("row {}", i + 1),
                format!("ragged rows: expected {} entries, found {}", rows[0].len(), r.len()),
            ));
        }
    }
    if rows[0].len() != n {
        return Err(err(
            "matrix",
            format!("not square: {n} rows of {} entries", rows[0].len()),
        ));
    }
    Matrix::from_rows(rows)
}

/// Parse a matrix document: JSON `{"rows": …}` if it starts with `{`, CSV
/// otherwise.
pub fn parse_matrix(text: &str) -> Result<Matrix> {
    if text.trim_start().starts_with('{') {
        let v: Value = serde_json::from_str(text).map_err(|e| {
            err(
                &format!("line {}, column {}", e.line(), e.column()),
                e.to_string(),
            )
        })?;
        let rows = v
            .get("rows")
            .and_then(Value::as_array)
            .ok_or_else(|| err("$.rows", "expected an array of rows"))?;
        let parsed = rows
            .iter()
            .enumerate()
            .map(|(i, r)| {
                r.as_array()
                    .ok_or_else(|| err(&format!("$.rows[{i}]"), "expected an array"))?
                    .iter()
                    .enumerate()
                    .map(|(j, z)| complex_from_value(z, &format!("$.rows[{i}][{j}]")))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        build_matrix(parsed)
    } else {
        parse_matrix_csv(text)
    }
}

fn complex_from_value(v: &Value, path: &str) -> Result<Complex64> {
    match v {
        Value::Number(_) => Ok(Complex64::new(number(v, path)?, 0.0)),
        Value::String(s) => parse_complex(s).map_err(|e| err(path, e.to_string())),
        Value::Object(o) => {
            let re = number(field(o, "re", path)?, &format!("{path}.re"))?;
            let im = match o.get("im") {
                Some(x) => number(x, &format!("{path}.im"))?,
                None => 0.0,
            };
            Ok(Complex64::new(re, im))
        }
        _ => Err(err(path, "expected a complex number")),
    }
}

/// Parse a vector from comma-separated complex literals.
pub fn parse_vector(text: &str) -> Result<Vector> {
    let entries = text
        .split([',', ';'])
        .enumerate()
        .map(|(i, c)| parse_complex(c).map_err(|e| err(&format!("entry {}", i + 1), e.to_string())))
        .collect::<Result<Vec<_>>>()?;
    Ok(Vector::new(entries))
}

pub fn format_complex(z: Complex64) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else if z.re == 0.0 {
        format!("{}i", z.im)
    } else if z.im < 0.0 {
        format!("{}-{}i", z.re, -z.im)
    } else {
        format!("{}+{}i", z.re, z.im)
    }
}

/// CSV text that [`parse_matrix_csv`] reads back exactly.
pub fn format_matrix_csv(a: &Matrix) -> String {
    a.rows()
        .map(|r| r.iter().map(|z| format_complex(*z)).collect::<Vec<_>>().join(","))
        .collect::<Vec<_>>()
        .join("\n")
}
