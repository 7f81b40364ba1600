//! JSON renderings of library values. Object keys come out sorted because
//! `serde_json::Map` is ordered.

use graphoid::independence::AxiomViolation;
use graphoid::{Assignment, CondAtom, GcppTable, IndependenceStructure, Plaus, Scheme, Triple, VarSet};
use serde_json::{json, Map, Value};

pub fn set_names(names: &[String], s: VarSet) -> Vec<String> {
    s.iter().map(|v| names[v].clone()).collect()
}

pub fn triple(names: &[String], t: Triple) -> Value {
    json!({ "X": set_names(names, t.x), "Z": set_names(names, t.z), "Y": set_names(names, t.y) })
}

/// `⊤` for the empty assignment so keys are never blank.
pub fn assignment(scheme: &Scheme, a: &Assignment) -> String {
    if a.is_top() {
        "⊤".into()
    } else {
        scheme.assignment_key(a)
    }
}

pub fn atom(scheme: &Scheme, a: &CondAtom) -> String {
    if a.left().is_top() && a.given().is_top() {
        "⊤".into()
    } else if a.left().is_top() {
        format!("⊤|{}", scheme.assignment_key(a.given()))
    } else {
        scheme.atom_key(a)
    }
}

pub fn plaus(p: &Plaus) -> Value {
    Value::String(p.to_string())
}

pub fn structure(s: &IndependenceStructure, nontrivial: bool) -> Value {
    let triples: Vec<Value> = s
        .triples()
        .into_iter()
        .filter(|t| !nontrivial || (!t.x.is_empty() && !t.y.is_empty()))
        .map(|t| triple(s.names(), t))
        .collect();
    json!({ "variables": s.names(), "count": triples.len(), "triples": triples })
}

pub fn violation(names: &[String], v: &AxiomViolation) -> Value {
    json!({
        "axiom": v.axiom.name(),
        "premises": v.premises.iter().map(|&t| triple(names, t)).collect::<Vec<_>>(),
        "conclusion": triple(names, v.conclusion),
    })
}

/// A table as a measure file of kind `gcpp`; reading it back gives the same
/// table.
pub fn table_file(t: &GcppTable) -> Value {
    let scheme = t.scheme();
    let variables: Vec<Value> = scheme.variables().iter().map(|v| json!({ "name": v.name, "values": v.values })).collect();
    let mut table = Map::new();
    for (a, p) in t.iter_canonical() {
        table.insert(atom(scheme, &a), plaus(p));
    }
    json!({ "variables": variables, "kind": "gcpp", "measure": t.kind().as_str(), "table": table })
}

/// Indented `key: value` text for `--human`.
pub fn human(v: &Value) -> String {
    let mut out = String::new();
    render(v, 0, &mut out);
    out
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(if *b { "yes" } else { "no" }.into()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(a) if a.is_empty() => Some("(none)".into()),
        Value::Array(a) if a.iter().all(|x| matches!(x, Value::String(_) | Value::Number(_))) => {
            Some(a.iter().map(|x| scalar(x).unwrap()).collect::<Vec<_>>().join(", "))
        }
        Value::Object(o) if o.is_empty() => Some("(none)".into()),
        _ => None,
    }
}

fn render(v: &Value, depth: usize, out: &mut String) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(o) => {
            for (k, x) in o {
                match scalar(x) {
                    Some(s) if !s.contains('\n') => out.push_str(&format!("{pad}{k}: {s}\n")),
                    Some(s) => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        for line in s.lines() {
                            out.push_str(&format!("{pad}  {line}\n"));
                        }
                    }
                    None => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        render(x, depth + 1, out);
                    }
                }
            }
        }
        Value::Array(a) => {
            for x in a {
                match scalar(x) {
                    Some(s) => out.push_str(&format!("{pad}- {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}-\n"));
                        render(x, depth + 1, out);
                    }
                }
            }
        }
        _ => out.push_str(&format!("{pad}{}\n", scalar(v).unwrap_or_default())),
    }
}
