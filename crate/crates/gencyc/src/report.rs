//! Machine-readable and human-readable output. Integers are written as
//! decimal strings.

use gencyc_core::{GCycleClass, Multiplicities, TraceEntry};
use serde_json::{json, Map, Value as Json};

use crate::eval::Value;

pub fn multiplicities_json(m: &Multiplicities) -> Json {
    Json::Object(
        m.iter()
            .map(|(l, v)| (l.to_string(), Json::String(v.to_string())))
            .collect(),
    )
}

pub fn class_json(c: &GCycleClass) -> Json {
    let components: Vec<Json> = c
        .components()
        .map(|((support, dim), kappa)| {
            let coeff: Map<String, Json> = kappa
                .labelled_terms()
                .into_iter()
                .map(|(label, v)| (label, Json::String(v.to_string())))
                .collect();
            json!({ "support": support, "dim": dim, "coeff": coeff })
        })
        .collect();
    let mults: Map<String, Json> = c
        .ambient()
        .points()
        .map(|p| {
            let m = c.mult_at(p).expect("marked point");
            (p.to_string(), multiplicities_json(&m))
        })
        .collect();
    json!({
        "text": c.to_string(),
        "components": components,
        "degree": c.deg_l().to_string(),
        "effective": c.is_effective(),
        "multiplicities": mults,
    })
}

pub fn trace_json(trace: &[TraceEntry]) -> Json {
    Json::Array(
        trace
            .iter()
            .map(|t| json!({ "rule": t.rule, "formula": t.formula, "detail": t.detail }))
            .collect(),
    )
}

pub fn value_json(v: &Value) -> Json {
    match v {
        Value::Class(c) => json!({ "type": "class", "value": class_json(c) }),
        Value::Integer(n) => json!({ "type": "integer", "value": n.to_string() }),
        Value::Mult { point, values } => {
            json!({ "type": "multiplicities", "point": point, "value": multiplicities_json(values) })
        }
    }
}

pub fn eval_json(scenario: &str, expr: &str, v: &Value, trace: Option<&[TraceEntry]>) -> Json {
    let mut out = json!({
        "scenario": scenario,
        "expr": expr,
        "result": value_json(v),
    });
    if let Some(t) = trace {
        out["trace"] = trace_json(t);
    }
    out
}

pub fn value_text(v: &Value) -> String {
    match v {
        Value::Class(c) => {
            let mut s = format!("{c}\ndegree: {}", c.deg_l());
            for p in c.ambient().points() {
                let m = c.mult_at(p).expect("marked point");
                let parts: Vec<String> = m.iter().map(|(l, v)| format!("{l}: {v}")).collect();
                s.push_str(&format!("\nmult at {p}: {{{}}}", parts.join(", ")));
            }
            s
        }
        other => other.to_string(),
    }
}

pub fn trace_text(trace: &[TraceEntry]) -> String {
    trace
        .iter()
        .enumerate()
        .map(|(i, t)| format!("{:>3}. {}: {}\n     {}", i + 1, t.rule, t.detail, t.formula))
        .collect::<Vec<_>>()
        .join("\n")
}
