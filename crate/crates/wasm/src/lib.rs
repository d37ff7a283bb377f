//! Browser bindings. Every export takes plain strings or numbers and returns a JSON
//! document; failures come back as `{"error": "..."}`.

use beauville_core::an_search::{choose_classes_an_with, choose_classes_ramification, choose_classes_sn_with, ClassSelection, Mode, Profile};
use beauville_core::psl2::beauville_psl2;
use beauville_core::structure::{structure_report, surface_invariants};
use num_bigint::BigUint;
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

/// Largest q the page will construct; closure checks above this take too long for a tab.
pub const DEMO_MAX_Q: u64 = 1024;

fn orders(text: &str) -> Result<Vec<u64>, String> {
    text.split(',')
        .map(|t| t.trim().parse::<u64>().map_err(|_| format!("{t:?} is not an order")))
        .collect()
}

fn render(result: Result<Value, String>) -> String {
    result.unwrap_or_else(|e| json!({ "error": e })).to_string()
}

pub fn invariants_doc(order: &str, type1: &str, type2: &str) -> Result<Value, String> {
    let n: BigUint = order.trim().parse().map_err(|_| format!("{order:?} is not a positive integer"))?;
    let (t1, t2) = (orders(type1)?, orders(type2)?);
    let inv = surface_invariants(&n, &t1, &t2).map_err(|e| e.to_string())?;
    let mut doc = serde_json::to_value(inv).map_err(|e| e.to_string())?;
    doc["order"] = json!(n.to_string());
    doc["type1"] = json!(t1);
    doc["type2"] = json!(t2);
    Ok(doc)
}

pub fn psl2_doc(q: u64) -> Result<Value, String> {
    if q > DEMO_MAX_Q {
        return Err(format!("q = {q} is above the demo limit {DEMO_MAX_Q}; use the command-line tool"));
    }
    match beauville_psl2(q).map_err(|e| e.to_string())? {
        Some(c) => {
            let mut doc = structure_report(&c.group, &c.structure, &c.verification);
            doc["exists"] = json!(true);
            doc["method"] = json!(c.method);
            Ok(doc)
        }
        None => Ok(json!({ "group": format!("psl2:{q}"), "exists": false })),
    }
}

fn profile(name: &str) -> Result<Profile, String> {
    match name.trim() {
        "strict" => Ok(Profile::Strict),
        "relaxed" => Ok(Profile::Relaxed),
        "unbounded" => Ok(Profile::Unbounded),
        other => Err(format!("unknown profile {other:?}")),
    }
}

fn selection_value(sel: &ClassSelection) -> Value {
    let shapes: Vec<Vec<Value>> =
        sel.shapes.iter().map(|t| t.iter().map(|s| json!({ "m": s.m, "k": s.k, "f": s.f })).collect()).collect();
    json!({
        "n": sel.n,
        "mode": sel.mode,
        "types": sel.types,
        "shapes": shapes,
        "max_offset": sel.max_offset,
        "index_sums": [sel.index_sum(0), sel.index_sum(1)],
        "needed": 2 * sel.n - 2,
    })
}

pub fn selection_doc(n: usize, type1: &str, type2: &str, symmetric: bool, profile_name: &str) -> Result<Value, String> {
    let (t1, t2) = (orders(type1)?, orders(type2)?);
    let p = profile(profile_name)?;
    let sel = match (t1.len(), t2.len(), symmetric) {
        (3, 3, false) => choose_classes_an_with(&t1, &t2, n, p),
        (3, 3, true) => choose_classes_sn_with(&t1, &t2, n, p),
        _ => choose_classes_ramification(&t1, &t2, n, if symmetric { Mode::Sn } else { Mode::An }, p),
    }
    .map_err(|e| e.to_string())?;
    Ok(selection_value(&sel))
}

/// Surface invariants of the quotient surface for a group of the given order.
#[wasm_bindgen]
pub fn invariants(order: &str, type1: &str, type2: &str) -> String {
    render(invariants_doc(order, type1, type2))
}

/// A verified unmixed Beauville structure on PSL(2,q).
#[wasm_bindgen]
pub fn psl2(q: u32) -> String {
    render(psl2_doc(q.into()))
}

/// Almost homogeneous classes of A_n (or S_n when `symmetric`) for the two types.
#[wasm_bindgen]
pub fn select_classes(n: u32, type1: &str, type2: &str, symmetric: bool, profile: &str) -> String {
    render(selection_doc(n as usize, type1, type2, symmetric, profile))
}
