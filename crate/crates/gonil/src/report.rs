//! JSON report shapes shared by the CLI and the search harness.
//!
//! Rationals serialize as canonical strings (`"p"` or `"p/q"`), never as
//! JSON numbers, so no float can appear in any report. `serde_json`'s
//! default map is ordered, which makes every serialized report
//! byte-reproducible for identical inputs.

use serde_json::{json, Map, Value};

use crate::bilinear::SignatureReport;
use crate::geodesic::{GeodesicSolution, GoStatus, GoVerdict};
use crate::homspace::NatRedResult;
use crate::linalg::{format_rat, Matrix, Rat};
use crate::structure::{DegenerateReport, NondegenerateReport, Violation};

pub fn rat_json(r: &Rat) -> Value {
    Value::String(format_rat(r))
}

pub fn vec_json(v: &[Rat]) -> Value {
    Value::Array(v.iter().map(rat_json).collect())
}

pub fn vecs_json(vs: &[Vec<Rat>]) -> Value {
    Value::Array(vs.iter().map(|v| vec_json(v)).collect())
}

pub fn matrix_json(m: &Matrix) -> Value {
    Value::Array((0..m.rows()).map(|i| vec_json(m.row(i))).collect())
}

pub fn signature_json(s: &SignatureReport) -> Value {
    json!({ "positive": s.positive, "negative": s.negative, "null": s.null })
}

pub fn natred_json(r: &NatRedResult) -> Value {
    json!({
        "naturally_reductive": r.naturally_reductive,
        "witness": r.witness.map(|(i, j, k)| json!([i, j, k])),
    })
}

pub fn solution_json(s: &GeodesicSolution) -> Value {
    json!({
        "feasible": true,
        "alpha": vec_json(&s.alpha),
        "alpha_h_coefficients": vec_json(&s.alpha_h_coefficients),
        "k": rat_json(&s.k),
        "residuals": vec_json(&s.residuals),
        "solution_space_kernel": vecs_json(&s.kernel),
    })
}

pub fn go_verdict_json(v: &GoVerdict) -> Value {
    let status = match &v.status {
        GoStatus::ProvenNaturallyReductive => json!({
            "kind": "proven_naturally_reductive",
        }),
        GoStatus::SampledPass { n_samples, seed } => json!({
            "kind": "sampled_pass",
            "n_samples": n_samples,
            "seed": seed,
        }),
        GoStatus::Counterexample { xi } => json!({
            "kind": "counterexample",
            "xi": vec_json(xi),
        }),
    };
    json!({
        "status": status,
        "checked_directions": v.checked_directions,
        "notes": v.notes,
    })
}

fn violations_json(vs: &[Violation]) -> Value {
    Value::Array(
        vs.iter()
            .map(|v| json!({ "code": v.code.as_str(), "detail": v.detail }))
            .collect(),
    )
}

pub fn nondegenerate_report_json(r: &NondegenerateReport) -> Value {
    json!({
        "pass": r.pass(),
        "hypothesis_ok": r.hypothesis_ok,
        "branch": match r.branch {
            crate::structure::Branch::AdTrivial => "ad_trivial",
            crate::structure::Branch::Structured => "structured",
        },
        "class": r.class,
        "basis_witness": r.basis_witness.as_ref().map(|w| json!({
            "x": vec_json(&w.x),
            "secondary": vecs_json(&w.secondary),
            "commutator_basis": vecs_json(&w.commutator_basis),
        })),
        "ad_forms": r.ad_forms.as_ref().map(|(first, second)| json!({
            "primary": matrix_json(first),
            "secondary": second.as_ref().map(matrix_json),
        })),
        "chain_dims": r.chain_dims,
        "violations": violations_json(&r.violations),
        "notes": r.notes,
    })
}

pub fn degenerate_report_json(r: &DegenerateReport) -> Value {
    json!({
        "pass": r.pass(),
        "hypothesis_ok": r.hypothesis_ok,
        "class": r.class,
        "v1_basis": vecs_json(&r.v1_basis),
        "null_direction": vec_json(&r.null_direction),
        "null_partner": r.null_partner.as_ref().map(|v| vec_json(v)),
        "v2_basis": vecs_json(&r.v2_basis),
        "signature_w": r.signature_w.as_ref().map(signature_json),
        "ad_vanishing": r.ad_vanishing,
        "violations": violations_json(&r.violations),
        "notes": r.notes,
    })
}

/// Report wrapper: identical `(input_digest, command, seed)` produce
/// byte-identical bodies.
pub struct ReportEnvelope {
    pub command: String,
    pub input_digest: Option<String>,
    pub seed: Option<u64>,
    pub body: Value,
}

impl ReportEnvelope {
    pub fn to_value(&self) -> Value {
        let mut map = Map::new();
        map.insert("tool_version".into(), json!(env!("CARGO_PKG_VERSION")));
        map.insert("command".into(), json!(self.command));
        if let Some(d) = &self.input_digest {
            map.insert("input_digest".into(), json!(d));
        }
        if let Some(s) = self.seed {
            map.insert("seed".into(), json!(s));
        }
        map.insert("body".into(), self.body.clone());
        Value::Object(map)
    }
}
