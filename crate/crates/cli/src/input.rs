//! Reading measure, structure, DAG and program files.

use std::collections::HashMap;
use std::fs;
use std::io::Read;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use graphoid::graph::Dag;
use graphoid::measures::{JointSpec, JointValues};
use graphoid::qcpp::{CiAssumption, CiForm, Element, QcppProgram};
use graphoid::{GcppTable, IndependenceStructure, MeasureKind, Plaus, Rank, Scheme, Triple, VarSet};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::Value;

/// Options that affect how numbers and joints are read.
#[derive(Clone, Copy, Debug)]
pub struct ReadOptions {
    pub max_vars: usize,
    /// Snap binary floats to the nearest fraction with at most this
    /// denominator; without it floats are rejected.
    pub snap: Option<u64>,
    pub normalize: bool,
}

/// `-` reads standard input.
pub fn read_json(path: &Path) -> Result<Value> {
    let text = if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        s
    } else {
        fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?
    };
    serde_json::from_str(&text).with_context(|| format!("{} is not valid JSON", path.display()))
}

fn field<'a>(doc: &'a Value, key: &str) -> Result<&'a Value> {
    doc.get(key).ok_or_else(|| anyhow!("missing field {key:?}"))
}

fn str_list(v: &Value, what: &str) -> Result<Vec<String>> {
    v.as_array()
        .ok_or_else(|| anyhow!("{what} must be an array"))?
        .iter()
        .map(|x| x.as_str().map(str::to_owned).ok_or_else(|| anyhow!("{what} must hold strings")))
        .collect()
}

/// Variable names from `"variables"`, given either as strings or as
/// `{"name", "values"}` objects.
pub fn variable_names(doc: &Value, opts: &ReadOptions) -> Result<Vec<String>> {
    let vars = field(doc, "variables")?.as_array().ok_or_else(|| anyhow!("\"variables\" must be an array"))?;
    check_size(vars.len(), opts)?;
    vars.iter()
        .map(|v| match v {
            Value::String(s) => Ok(s.clone()),
            _ => v.get("name").and_then(Value::as_str).map(str::to_owned).ok_or_else(|| anyhow!("variable without a name")),
        })
        .collect()
}

fn check_size(n: usize, opts: &ReadOptions) -> Result<()> {
    if n > opts.max_vars {
        bail!("{n} variables exceed the limit of {} (set GRAPHOID_MAX_VARS to raise it)", opts.max_vars);
    }
    Ok(())
}

pub fn parse_scheme(doc: &Value, opts: &ReadOptions) -> Result<Scheme> {
    let vars = field(doc, "variables")?.as_array().ok_or_else(|| anyhow!("\"variables\" must be an array"))?;
    check_size(vars.len(), opts)?;
    let mut out = Vec::new();
    for v in vars {
        let name = v.get("name").and_then(Value::as_str).ok_or_else(|| anyhow!("variable without a name"))?;
        let values = v
            .get("values")
            .ok_or_else(|| anyhow!("variable {name:?} has no values"))?
            .as_array()
            .ok_or_else(|| anyhow!("values of {name:?} must be an array"))?
            .iter()
            .map(|l| match l {
                Value::String(s) => Ok(s.clone()),
                Value::Number(n) => Ok(n.to_string()),
                _ => Err(anyhow!("value labels of {name:?} must be strings or numbers")),
            })
            .collect::<Result<Vec<_>>>()?;
        out.push((name.to_owned(), values));
    }
    Ok(Scheme::new(out)?)
}

/// A measure file: a joint for the four named kinds, or a full table of
/// conditional values for kind `gcpp`.
pub fn load_measure(doc: &Value, opts: &ReadOptions) -> Result<GcppTable> {
    let scheme = parse_scheme(doc, opts)?;
    let kind = field(doc, "kind")?.as_str().ok_or_else(|| anyhow!("\"kind\" must be a string"))?;
    if kind == "gcpp" {
        return load_table(doc, scheme, opts);
    }
    let kind = parse_kind(kind)?;
    let joint = field(doc, "joint")?.as_object().ok_or_else(|| anyhow!("\"joint\" must be an object"))?;
    let m = scheme.assignment_count(scheme.all());
    let mut cells: Vec<Option<&Value>> = vec![None; m];
    for (key, v) in joint {
        let a = scheme.parse_assignment(key)?;
        if a.scope() != scheme.all() {
            bail!("joint key {key:?} does not assign every variable");
        }
        let slot = &mut cells[scheme.local_index(&a)];
        if slot.is_some() {
            bail!("joint key {key:?} appears twice");
        }
        *slot = Some(v);
    }
    let mut values = Vec::with_capacity(m);
    for (i, cell) in cells.into_iter().enumerate() {
        match cell {
            Some(v) => values.push(v),
            None => {
                let key = scheme.assignment_key(&scheme.assignment_at(scheme.all(), i));
                return Err(graphoid::Error::MissingEntry(key).into());
            }
        }
    }
    let values = match kind {
        MeasureKind::Kappa => JointValues::Ranks(values.into_iter().map(parse_rank).collect::<Result<_>>()?),
        _ => JointValues::Rational(values.into_iter().map(|v| parse_rational(v, opts.snap)).collect::<Result<_>>()?),
    };
    let mut spec = JointSpec::new(scheme, kind, values)?;
    if opts.normalize {
        spec = spec.normalized()?;
    }
    Ok(spec.extend()?)
}

fn load_table(doc: &Value, scheme: Scheme, opts: &ReadOptions) -> Result<GcppTable> {
    let kind = match doc.get("measure").and_then(Value::as_str) {
        Some(k) => parse_kind(k)?,
        None => MeasureKind::Opaque,
    };
    let table = field(doc, "table")?.as_object().ok_or_else(|| anyhow!("\"table\" must be an object"))?;
    let mut map = HashMap::with_capacity(table.len());
    for (key, v) in table {
        let atom = scheme.parse_atom(key)?;
        if map.insert(atom, parse_payload(v, opts.snap)?).is_some() {
            bail!("atom {key:?} appears twice");
        }
    }
    Ok(GcppTable::from_map(scheme, kind, map)?)
}

pub fn parse_kind(s: &str) -> Result<MeasureKind> {
    Ok(match s {
        "probability" => MeasureKind::Probability,
        "possibility" => MeasureKind::Possibility,
        "kappa" => MeasureKind::Kappa,
        "consistency" => MeasureKind::Consistency,
        "gcpp" => MeasureKind::Opaque,
        _ => bail!("unknown kind {s:?}"),
    })
}

fn parse_rank(v: &Value) -> Result<Rank> {
    match v {
        Value::Number(n) => n.as_u64().map(Rank::Finite).ok_or_else(|| anyhow!("rank {n} is not a natural number")),
        Value::String(s) if s == "top" || s == "∞" => Ok(Rank::Top),
        Value::String(s) => s.trim().parse().map(Rank::Finite).map_err(|_| anyhow!("bad rank {s:?}")),
        _ => bail!("bad rank {v}"),
    }
}

/// `"zero"`, `"undef"`, `"rank:k"`, `"class:c"`, or a rational.
fn parse_payload(v: &Value, snap: Option<u64>) -> Result<Plaus> {
    if let Value::String(s) = v {
        let s = s.trim();
        match s {
            "zero" => return Ok(Plaus::Zero),
            "undef" | "inf" | "∞" => return Ok(Plaus::Undef),
            _ => {}
        }
        if let Some(k) = s.strip_prefix("rank:") {
            return Ok(Plaus::rank(if k == "top" { Rank::Top } else { Rank::Finite(k.parse().map_err(|_| anyhow!("bad rank {s:?}"))?) }));
        }
        if let Some(c) = s.strip_prefix("class:") {
            return Ok(Plaus::class(c.parse().map_err(|_| anyhow!("bad class {s:?}"))?));
        }
    }
    Ok(Plaus::rational(parse_rational(v, snap)?))
}

/// Exact rationals from `"1/8"`, `"0.125"`, `"1e-3"` or JSON integers.
/// JSON floats are binary and only accepted with a snap bound.
pub fn parse_rational(v: &Value, snap: Option<u64>) -> Result<BigRational> {
    let r = match v {
        Value::String(s) => parse_decimal(s.trim())?,
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                BigRational::from_integer(i.into())
            } else if let Some(u) = n.as_u64() {
                BigRational::from_integer(u.into())
            } else {
                let f = n.as_f64().ok_or_else(|| anyhow!("bad number {n}"))?;
                let Some(bound) = snap else {
                    bail!("binary float {n} is not exact; quote it as a decimal string or pass --snap");
                };
                let exact = BigRational::from_float(f).ok_or_else(|| anyhow!("bad number {n}"))?;
                limit_denominator(&exact, &BigInt::from(bound.max(1)))
            }
        }
        _ => bail!("expected a number, got {v}"),
    };
    if r.is_negative() {
        bail!("negative value {r}");
    }
    Ok(r)
}

fn parse_decimal(s: &str) -> Result<BigRational> {
    if s.contains('/') {
        return s.parse().map_err(|_| anyhow!("bad fraction {s:?}"));
    }
    let (mantissa, exp) = match s.split_once(['e', 'E']) {
        Some((m, e)) => (m, e.parse::<i32>().map_err(|_| anyhow!("bad exponent in {s:?}"))?),
        None => (s, 0),
    };
    let (int, frac) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    let digits = format!("{int}{frac}");
    let num: BigInt = digits.parse().map_err(|_| anyhow!("bad number {s:?}"))?;
    let scale = exp - frac.len() as i32;
    let ten = BigInt::from(10);
    Ok(if scale >= 0 {
        BigRational::from_integer(num * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(num, num_traits::pow(ten, (-scale) as usize))
    })
}

/// Closest fraction to `x` with denominator at most `bound`, by continued
/// fractions.
fn limit_denominator(x: &BigRational, bound: &BigInt) -> BigRational {
    if x.denom() <= bound {
        return x.clone();
    }
    let (mut p0, mut q0, mut p1, mut q1) = (BigInt::zero(), BigInt::one(), BigInt::one(), BigInt::zero());
    let (mut n, mut d) = (x.numer().clone(), x.denom().clone());
    loop {
        let a = &n / &d;
        let q2 = &q0 + &a * &q1;
        if &q2 > bound {
            break;
        }
        let p2 = &p0 + &a * &p1;
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
        let r = &n - &a * &d;
        (n, d) = (d, r);
    }
    let k = (bound - &q0) / &q1;
    let lower = BigRational::new(&p0 + &k * &p1, &q0 + &k * &q1);
    let upper = BigRational::new(p1, q1);
    if (&upper - x).abs() <= (&lower - x).abs() {
        upper
    } else {
        lower
    }
}

/// `"A,B;C;D"` into three variable sets.
pub fn parse_query(names: &[String], q: &str) -> Result<[VarSet; 3]> {
    let parts: Vec<&str> = q.split(';').collect();
    if parts.len() != 3 {
        bail!("bad query {q:?}: expected three ';'-separated sets");
    }
    let mut out = [VarSet::EMPTY; 3];
    for (slot, part) in out.iter_mut().zip(parts) {
        for name in part.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let v = names.iter().position(|n| n == name).ok_or_else(|| anyhow!("unknown variable {name:?}"))?;
            *slot = slot.with(v);
        }
    }
    if !out[0].is_disjoint(out[1]) || !out[0].is_disjoint(out[2]) || !out[1].is_disjoint(out[2]) {
        bail!("bad query {q:?}: the sets overlap");
    }
    Ok(out)
}

fn name_set(names: &[String], v: &Value, what: &str) -> Result<VarSet> {
    let list = match v {
        Value::Null => vec![],
        _ => str_list(v, what)?,
    };
    let mut out = VarSet::EMPTY;
    for name in list {
        out = out.with(names.iter().position(|n| *n == name).ok_or_else(|| anyhow!("unknown variable {name:?}"))?);
    }
    Ok(out)
}

/// `{"X": [...], "Z": [...], "Y": [...]}`; missing sets are empty.
pub fn parse_triple(names: &[String], v: &Value) -> Result<Triple> {
    let get = |k: &str| name_set(names, v.get(k).unwrap_or(&Value::Null), k);
    Ok(Triple::new(get("X")?, get("Z")?, get("Y")?)?)
}

pub fn load_structure(doc: &Value, opts: &ReadOptions) -> Result<IndependenceStructure> {
    let names = variable_names(doc, opts)?;
    let triples = field(doc, "triples")?.as_array().ok_or_else(|| anyhow!("\"triples\" must be an array"))?;
    let parsed = triples.iter().map(|t| parse_triple(&names, t)).collect::<Result<Vec<_>>>()?;
    Ok(IndependenceStructure::from_triples(names, parsed)?)
}

/// `{"variables": [...], "edges": [["A", "B"], ...]}` with edges from parent
/// to child.
pub fn load_dag(doc: &Value, opts: &ReadOptions) -> Result<Dag> {
    let names = variable_names(doc, opts)?;
    let mut edges = Vec::new();
    let list = doc.get("edges").cloned().unwrap_or(Value::Array(vec![]));
    for e in list.as_array().ok_or_else(|| anyhow!("\"edges\" must be an array"))? {
        let pair = str_list(e, "edge")?;
        let [from, to] = pair.as_slice() else { bail!("an edge needs exactly two endpoints") };
        let idx = |n: &String| names.iter().position(|m| m == n).ok_or_else(|| anyhow!("unknown variable {n:?}"));
        edges.push((idx(from)?, idx(to)?));
    }
    Ok(Dag::from_edges(names, &edges)?)
}

fn element_pairs(scheme: &Scheme, doc: &Value, key: &str) -> Result<Vec<(Element, Element)>> {
    let Some(list) = doc.get(key) else { return Ok(vec![]) };
    let mut out = Vec::new();
    for pair in list.as_array().ok_or_else(|| anyhow!("{key:?} must be an array"))? {
        let pair = str_list(pair, key)?;
        let [a, b] = pair.as_slice() else { bail!("each of {key:?} needs exactly two elements") };
        out.push((Element::parse(scheme, a)?, Element::parse(scheme, b)?));
    }
    Ok(out)
}

pub fn load_program(doc: &Value, scheme: &Scheme) -> Result<QcppProgram> {
    let names: Vec<String> = scheme.variables().iter().map(|v| v.name.clone()).collect();
    let mut p = QcppProgram::default();
    if let Some(z) = doc.get("zero_set") {
        for key in str_list(z, "zero_set")? {
            p.zero_set.push(scheme.parse_assignment(&key)?);
        }
    }
    p.judgements = element_pairs(scheme, doc, "judgements")?;
    p.order_judgements = element_pairs(scheme, doc, "order_judgements")?;
    if let Some(list) = doc.get("ci_assumptions") {
        for ci in list.as_array().ok_or_else(|| anyhow!("\"ci_assumptions\" must be an array"))? {
            let form = match ci.get("form").and_then(Value::as_str).unwrap_or("I") {
                "I" => CiForm::I,
                "Iprime" | "I'" => CiForm::IPrime,
                f => bail!("unknown form {f:?}"),
            };
            p.ci_assumptions.push(CiAssumption {
                triple: parse_triple(&names, ci)?,
                form,
            });
        }
    }
    if let Some(r) = doc.get("rules") {
        for name in str_list(r, "rules")? {
            p.rules.insert(name.parse()?);
        }
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn decimals_and_fractions_are_exact() {
        assert_eq!(parse_rational(&json!("0.125"), None).unwrap(), r(1, 8));
        assert_eq!(parse_rational(&json!("3/6"), None).unwrap(), r(1, 2));
        assert_eq!(parse_rational(&json!("2.5e-1"), None).unwrap(), r(1, 4));
        assert_eq!(parse_rational(&json!(3), None).unwrap(), r(3, 1));
        assert!(parse_rational(&json!(0.1), None).is_err());
        assert!(parse_rational(&json!("-1/2"), None).is_err());
    }

    #[test]
    fn snapping_finds_the_small_fraction() {
        assert_eq!(parse_rational(&json!(0.1), Some(100)).unwrap(), r(1, 10));
        assert_eq!(parse_rational(&json!(0.333333333), Some(10)).unwrap(), r(1, 3));
        assert_eq!(limit_denominator(&r(3141593, 1000000), &BigInt::from(113)), r(355, 113));
    }

    #[test]
    fn queries_reject_overlap() {
        let names: Vec<String> = ["A", "B", "C"].map(String::from).to_vec();
        let [x, z, y] = parse_query(&names, "A;;B,C").unwrap();
        assert_eq!((x.bits(), z.bits(), y.bits()), (1, 0, 6));
        assert!(parse_query(&names, "A;A;B").is_err());
        assert!(parse_query(&names, "A;B").is_err());
    }
}
