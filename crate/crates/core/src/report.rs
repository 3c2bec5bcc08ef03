//! JSON rendering of analyses; keys are sorted and rationals are `p/q` strings.

use serde_json::{json, Map, Value};

use crate::algebra::{fmt_q, RatFunc};
use crate::analysis::Analysis;
use crate::curve::CurveModel;
use crate::error::Error;
use crate::normality::{Condition, TheoremVerdict};
use crate::Settings;

fn conditions(cs: &[Condition]) -> Value {
    Value::Object(cs.iter().map(|c| (c.name.clone(), Value::Bool(c.value))).collect::<Map<_, _>>())
}

fn ratfunc(f: &RatFunc) -> String {
    format!("({}) / ({})", f.num, f.den)
}

pub fn verdict_json(v: &TheoremVerdict) -> Value {
    json!({
        "id": v.id,
        "applicable": v.applicable,
        "equivalent": v.equivalent,
        "holds": v.holds(),
        "conditions": conditions(&v.conditions),
        "riders": conditions(&v.riders),
        "notes": v.notes,
    })
}

pub fn curve_json(c: &CurveModel) -> Value {
    json!({
        "genus": c.genus(),
        "clusters": c.clusters.iter().map(|cl| json!({
            "name": cl.name,
            "points": cl.points.iter().map(fmt_q).collect::<Vec<_>>(),
            "conductor": cl.conductor,
            "delta": cl.delta(),
        })).collect::<Vec<_>>(),
    })
}

pub fn analysis_json(name: &str, c: &CurveModel, a: &Analysis, settings: &Settings) -> Value {
    let p = &a.profile;
    let cmp = &a.comparison;
    let nm = &a.normality;
    let mut identity = curve_json(c);
    identity["name"] = json!(name);
    let clifford = a.clifford.as_ref().map(|rs| {
        let equality: Vec<Value> = rs
            .iter()
            .filter_map(|r| r.equality_case.as_ref().map(|e| json!({"label": r.label, "case": e.to_string(), "h0": r.h0, "h1": r.h1, "invertible": r.invertible})))
            .collect();
        json!({
            "sheaves": rs.len(),
            "bound_holds": rs.iter().all(|r| r.bound_holds),
            "max_h0_plus_h1": rs.iter().filter(|r| r.applicable()).map(|r| r.sum()).max(),
            "generated_at_equality": rs.iter().all(|r| r.generated_by_globals != Some(false)),
            "involution_holds": rs.iter().all(|r| r.involution_holds),
            "equality_cases": equality,
        })
    });
    let ideals = a.ideals.as_ref().map(|r| {
        json!({
            "bound": r.bound,
            "verified_through": r.verified_through,
            "regularity_bound": r.regularity_bound,
            "complete": r.complete,
            "quadrics_generate": r.quadrics_generate,
            "quadrics_cubics_generate": r.quadrics_cubics_generate,
            "levels": r.levels.iter().map(|x| json!({
                "l": x.l, "forms": x.forms, "ideal": x.ideal,
                "from_quadrics": x.from_quadrics, "from_quadrics_cubics": x.from_quadrics_cubics, "exact": x.exact,
            })).collect::<Vec<_>>(),
        })
    });
    json!({
        "curve": identity,
        "settings": {
            "truncation_scale": settings.truncation_scale,
            "max_degree": settings.max_degree,
        },
        "singularities": {
            "eta": p.eta,
            "gorenstein": p.gorenstein,
            "nearly_normal": p.nearly_normal,
            "nearly_gorenstein": p.nearly_gorenstein,
            "clusters": p.clusters.iter().map(|cp| json!({
                "name": cp.name, "delta": cp.delta, "d": cp.d,
                "multiplicity": cp.multiplicity, "embdim": cp.embdim,
                "eta": cp.eta, "eta_via_generator": cp.eta_via_generator, "eta_via_obar_omega": cp.eta_via_obar_omega,
                "type": cp.cm_type, "omega_principal": cp.omega_principal, "gorenstein": cp.gorenstein,
                "almost_gorenstein": cp.almost_gorenstein, "xi": cp.xi, "mu": cp.mu,
            })).collect::<Vec<_>>(),
        },
        "canonical_map": {
            "sections": a.omega.dim(),
            "denominator": a.omega.denominator.to_string(),
            "components": a.map.components.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
            "degree": a.map.degree(),
            "map_degree": a.map_degree,
        },
        "blowup": {
            "genus": a.blowup.genus(),
            "smooth": a.blowup.is_smooth(),
            "clusters": a.blowup.clusters.iter().map(|b| json!({
                "name": b.name, "xi": b.xi, "mu": b.mu,
                "components": b.components, "singular_points": b.singular_points,
            })).collect::<Vec<_>>(),
        },
        "model": {
            "d_prime": cmp.d_prime,
            "g_prime": cmp.g_prime,
            "hilbert": a.image.hilbert,
            "hyperelliptic": cmp.hyperelliptic,
            "lambda": cmp.lambda.as_ref().map(ratfunc),
            "genus_match": cmp.genus_match,
            "local_ring_equal": cmp.local_ring_equal,
            "separation": cmp.separation,
            "rmt_verified": cmp.rmt_verified,
        },
        "normality": {
            "linear": nm.linear,
            "projective": nm.projective,
            "arithmetic": nm.arithmetic,
            "extremal": nm.extremal,
            "smooth_model": nm.smooth_model,
            "levels": nm.levels.iter().map(|x| json!({"l": x.l, "forms": x.forms, "h0": x.h0, "h1": x.h1})).collect::<Vec<_>>(),
        },
        "ideals": ideals,
        "clifford": clifford,
        "theorems": a.theorems.iter().map(verdict_json).collect::<Vec<_>>(),
        "violations": a.theorems.iter().filter(|v| !v.holds()).map(|v| v.id.clone()).collect::<Vec<_>>(),
    })
}

pub fn error_json(name: &str, e: &Error) -> Value {
    json!({
        "curve": {"name": name},
        "error": {
            "class": format!("{:?}", e.class()).to_lowercase(),
            "exit_code": e.class().exit_code(),
            "message": e.to_string(),
        },
    })
}

/// Pretty JSON with a trailing newline.
pub fn render(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    s.push('\n');
    s
}
