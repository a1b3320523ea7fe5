//! JSON building blocks. Rationals are strings, keys are sorted by the map type.

use serde_json::{json, Map, Value};
use symplie::exactla::{Subspace, Q};
use symplie::reduction::Fingerprint;
use symplie::search::{LagrangianIdealResult, LagrangianSubalgebraResult, RankBounds};

use crate::format::Diagnostic;

pub fn rational(q: &Q) -> Value {
    Value::String(q.to_string())
}

pub fn vector(v: &[Q]) -> Value {
    Value::Array(v.iter().map(rational).collect())
}

pub fn subspace(s: &Subspace) -> Value {
    json!({ "dim": s.dim(), "basis": s.basis().iter().map(|v| vector(v)).collect::<Vec<_>>() })
}

pub fn rank(rb: &RankBounds) -> Value {
    json!({
        "lower": rb.lower,
        "upper": rb.upper,
        "exact": rb.is_exact(),
        "certificate": rb.upper_certificate,
        "witness": subspace(&rb.lower_witness),
        "envelope": rb.envelope.as_ref().map(|e| subspace(&e.m)),
    })
}

pub fn lagrangian_ideal(r: &LagrangianIdealResult) -> Value {
    match r {
        LagrangianIdealResult::Found { ideal, route, unique } => {
            json!({ "status": r.status(), "route": route, "unique": unique, "ideal": subspace(ideal) })
        }
        LagrangianIdealResult::CertifiedNone { certificate, rank_upper } => {
            json!({ "status": r.status(), "certificate": certificate, "rank_upper": rank_upper })
        }
        LagrangianIdealResult::Unresolved { rank_lower, rank_upper } => {
            json!({ "status": r.status(), "rank_lower": rank_lower, "rank_upper": rank_upper })
        }
    }
}

pub fn lagrangian_subalgebra(r: &LagrangianSubalgebraResult) -> Value {
    match r {
        LagrangianSubalgebraResult::Found { subalgebra, route } => {
            json!({ "status": "found", "route": route, "subalgebra": subspace(subalgebra) })
        }
        LagrangianSubalgebraResult::Unresolved => json!({ "status": "unresolved" }),
    }
}

pub fn fingerprint(f: &Fingerprint) -> Value {
    json!({
        "dim": f.dim,
        "lower_central": f.lower_central,
        "derived": f.derived,
        "rank_lower": f.rank_lower,
        "rank_upper": f.rank_upper,
        "b1": f.b1,
        "b2": f.b2,
    })
}

pub fn diagnostic(d: &Diagnostic) -> Value {
    json!({
        "valid": false,
        "invariant": d.invariant(),
        "witness": d.witness(),
        "message": d.to_string(),
    })
}

pub fn object(pairs: Vec<(&str, Value)>) -> Value {
    let mut m = Map::new();
    for (k, v) in pairs {
        m.insert(k.to_owned(), v);
    }
    Value::Object(m)
}
