//! The space file format: a JSON description of a Lie algebra, a reductive
//! splitting and a metric, parsed into a verified `ReductiveSpace`.
//!
//! All scalars are rational strings (`"p"` or `"p/q"`); floats are banned at
//! the format level. Integer JSON numbers are accepted for convenience
//! (they are exact), anything with a fractional part is rejected with a
//! pointer to the offending field. Basis indices are 0-based.

use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::bilinear::SignConvention;
use crate::homspace::ReductiveSpace;
use crate::lie::LieAlgebra;
use crate::linalg::{format_rat, parse_rat, Matrix, Rat};
use crate::report;

#[derive(Debug, Error)]
pub enum SpaceFileError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed JSON: {0}")]
    Json(String),
    #[error("{path}: {message}")]
    Field { path: String, message: String },
    #[error("space does not build: {0}")]
    Build(#[from] crate::homspace::BuildError),
}

fn field_err(path: &str, message: impl Into<String>) -> SpaceFileError {
    SpaceFileError::Field {
        path: path.to_string(),
        message: message.into(),
    }
}

/// A parsed space file: the verified space plus file-level metadata.
#[derive(Debug, Clone)]
pub struct ParsedSpace {
    pub space: ReductiveSpace,
    pub convention: SignConvention,
    pub description: Option<String>,
    pub digest: String,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    let mut h = Sha256::new();
    h.update(bytes);
    let out = h.finalize();
    out.iter().map(|b| format!("{b:02x}")).collect()
}

fn rat_at(v: &Value, path: &str) -> Result<Rat, SpaceFileError> {
    match v {
        Value::String(s) => parse_rat(s).map_err(|e| field_err(path, e.to_string())),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(crate::linalg::rint(i))
            } else {
                Err(field_err(
                    path,
                    "floats forbidden; write 1/2 instead of 0.5",
                ))
            }
        }
        _ => Err(field_err(path, "expected a rational string")),
    }
}

fn vec_at(v: &Value, path: &str, expect_len: Option<usize>) -> Result<Vec<Rat>, SpaceFileError> {
    let arr = v
        .as_array()
        .ok_or_else(|| field_err(path, "expected an array"))?;
    if let Some(n) = expect_len {
        if arr.len() != n {
            return Err(field_err(
                path,
                format!("expected {n} entries, found {}", arr.len()),
            ));
        }
    }
    arr.iter()
        .enumerate()
        .map(|(i, x)| rat_at(x, &format!("{path}[{i}]")))
        .collect()
}

fn usize_at(v: &Value, path: &str) -> Result<usize, SpaceFileError> {
    v.as_u64()
        .map(|n| n as usize)
        .ok_or_else(|| field_err(path, "expected a nonnegative integer"))
}

/// Parses and verifies space-file JSON (already read into memory).
pub fn parse_space_bytes(bytes: &[u8]) -> Result<ParsedSpace, SpaceFileError> {
    let digest = sha256_hex(bytes);
    let root: Value =
        serde_json::from_slice(bytes).map_err(|e| SpaceFileError::Json(e.to_string()))?;

    let alg_v = root
        .get("algebra")
        .ok_or_else(|| field_err("$.algebra", "missing"))?;
    let dim = usize_at(
        alg_v
            .get("dim")
            .ok_or_else(|| field_err("$.algebra.dim", "missing"))?,
        "$.algebra.dim",
    )?;
    let mut algebra = LieAlgebra::new(dim);
    if let Some(names_v) = alg_v.get("basis_names") {
        let arr = names_v
            .as_array()
            .ok_or_else(|| field_err("$.algebra.basis_names", "expected an array"))?;
        if arr.len() != dim {
            return Err(field_err("$.algebra.basis_names", "length must equal dim"));
        }
        let names: Vec<String> = arr
            .iter()
            .enumerate()
            .map(|(i, x)| {
                x.as_str().map(str::to_string).ok_or_else(|| {
                    field_err(&format!("$.algebra.basis_names[{i}]"), "expected a string")
                })
            })
            .collect::<Result<_, _>>()?;
        algebra = algebra.with_names(names);
    }
    let brackets = alg_v
        .get("brackets")
        .and_then(Value::as_array)
        .cloned()
        .unwrap_or_default();
    for (bi, b) in brackets.iter().enumerate() {
        let path = format!("$.algebra.brackets[{bi}]");
        let i = usize_at(
            b.get("i")
                .ok_or_else(|| field_err(&format!("{path}.i"), "missing"))?,
            &format!("{path}.i"),
        )?;
        let j = usize_at(
            b.get("j")
                .ok_or_else(|| field_err(&format!("{path}.j"), "missing"))?,
            &format!("{path}.j"),
        )?;
        let coeffs_v = b
            .get("coeffs")
            .and_then(Value::as_object)
            .ok_or_else(|| field_err(&format!("{path}.coeffs"), "expected an object"))?;
        let mut coeffs = Vec::new();
        for (k_str, val) in coeffs_v {
            let k: usize = k_str.parse().map_err(|_| {
                field_err(
                    &format!("{path}.coeffs.{k_str}"),
                    "key must be a basis index",
                )
            })?;
            let c = rat_at(val, &format!("{path}.coeffs.{k_str}"))?;
            coeffs.push((k, c));
        }
        algebra
            .set_bracket(i, j, coeffs)
            .map_err(|e| field_err(&path, e.to_string()))?;
    }

    let span_at = |key: &str| -> Result<Vec<Vec<Rat>>, SpaceFileError> {
        let v = root
            .get(key)
            .ok_or_else(|| field_err(&format!("$.{key}"), "missing"))?;
        let arr = v
            .as_array()
            .ok_or_else(|| field_err(&format!("$.{key}"), "expected an array of vectors"))?;
        arr.iter()
            .enumerate()
            .map(|(i, x)| vec_at(x, &format!("$.{key}[{i}]"), Some(dim)))
            .collect()
    };
    let h_span = span_at("h_span")?;
    let m_span = span_at("m_span")?;

    let gram_v = root
        .get("gram_m")
        .ok_or_else(|| field_err("$.gram_m", "missing"))?;
    let gram_rows = gram_v
        .as_array()
        .ok_or_else(|| field_err("$.gram_m", "expected an array of rows"))?;
    if gram_rows.len() != m_span.len() {
        return Err(field_err(
            "$.gram_m",
            "row count must equal the number of m basis vectors",
        ));
    }
    let mut rows = Vec::with_capacity(gram_rows.len());
    for (i, r) in gram_rows.iter().enumerate() {
        rows.push(vec_at(r, &format!("$.gram_m[{i}]"), Some(m_span.len()))?);
    }
    let gram = Matrix::from_rows(m_span.len(), rows);

    let mut convention = SignConvention::MostlyPlus;
    let mut description = None;
    if let Some(meta) = root.get("meta") {
        if let Some(d) = meta.get("description").and_then(Value::as_str) {
            description = Some(d.to_string());
        }
        if let Some(c) = meta.get("signature_convention").and_then(Value::as_str) {
            convention = match c {
                "mostly-plus" => SignConvention::MostlyPlus,
                "mostly-minus" => SignConvention::MostlyMinus,
                other => {
                    return Err(field_err(
                        "$.meta.signature_convention",
                        format!("unknown convention `{other}` (mostly-plus | mostly-minus)"),
                    ))
                }
            };
        }
    }

    let space = ReductiveSpace::build(algebra, h_span, m_span, gram)?;
    Ok(ParsedSpace {
        space,
        convention,
        description,
        digest,
    })
}

pub fn parse_space_file(path: &std::path::Path) -> Result<ParsedSpace, SpaceFileError> {
    let bytes = std::fs::read(path).map_err(|source| SpaceFileError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_space_bytes(&bytes)
}

/// Canonical JSON for a parsed space: round-tripping through this function
/// and `parse_space_bytes` reproduces an identical space.
pub fn space_to_json(parsed: &ParsedSpace) -> Value {
    let space = &parsed.space;
    let algebra = space.algebra();
    let brackets: Vec<Value> = algebra
        .bracket_entries()
        .iter()
        .map(|((i, j), coeffs)| {
            let mut m = Map::new();
            for (k, c) in coeffs {
                m.insert(k.to_string(), Value::String(format_rat(c)));
            }
            json!({ "i": i, "j": j, "coeffs": Value::Object(m) })
        })
        .collect();
    let mut alg = Map::new();
    alg.insert("dim".into(), json!(algebra.dim()));
    if let Some(names) = algebra.basis_names() {
        alg.insert("basis_names".into(), json!(names));
    }
    alg.insert("brackets".into(), Value::Array(brackets));
    let mut meta = Map::new();
    if let Some(d) = &parsed.description {
        meta.insert("description".into(), json!(d));
    }
    meta.insert(
        "signature_convention".into(),
        json!(match parsed.convention {
            SignConvention::MostlyPlus => "mostly-plus",
            SignConvention::MostlyMinus => "mostly-minus",
        }),
    );
    json!({
        "algebra": Value::Object(alg),
        "h_span": report::vecs_json(space.h_basis()),
        "m_span": report::vecs_json(space.m_basis()),
        "gram_m": report::matrix_json(space.metric().gram()),
        "meta": Value::Object(meta),
    })
}
