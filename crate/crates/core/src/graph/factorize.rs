use super::dag::Dag;
use crate::error::{Error, Result};
use crate::model::{Assignment, CondAtom, GcppTable, MeasureKind, Payload, Plaus, VarSet};

/// `a ◇ b` for the measure families that come with one: products for
/// probability, possibility and consistency, rank sums for kappa. Zero
/// absorbs; an undefined operand also yields zero (it can only appear
/// behind a zero factor).
pub fn combine(kind: MeasureKind, a: &Plaus, b: &Plaus) -> Result<Plaus> {
    if kind == MeasureKind::Opaque {
        return Err(Error::CombineUnavailable(kind));
    }
    Ok(match (a, b) {
        (Plaus::Value(x), Plaus::Value(y)) => match (kind, x, y) {
            (MeasureKind::Kappa, Payload::Rank(i), Payload::Rank(j)) => Plaus::Value(Payload::Rank(i + j)),
            (MeasureKind::Kappa, _, _) => return Err(Error::PreconditionUnmet("kappa table holds a non-rank payload".into())),
            (_, Payload::Rational(p), Payload::Rational(q)) => Plaus::rational(p * q),
            _ => return Err(Error::PreconditionUnmet(format!("{kind} table holds a non-rational payload"))),
        },
        _ => Plaus::Zero,
    })
}

/// A reconstructed joint and how it compares with the table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    /// Values on `U̲` in lexicographic assignment order.
    pub joint: Vec<Plaus>,
    /// Indices where `joint` differs from the table's joint.
    pub mismatches: Vec<usize>,
    /// How many undefined factors were absorbed by a zero.
    pub undefined_factors: usize,
}

impl Factorization {
    pub fn exact(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// `ρ(x_1…x_n) = ρ(x_n|b_n) ◇ ⋯ ◇ ρ(x_1|b_1)`, evaluated right to left
/// along the DAG's order.
pub fn factorize(table: &GcppTable, dag: &Dag) -> Result<Factorization> {
    let kind = table.kind();
    if kind == MeasureKind::Opaque {
        return Err(Error::CombineUnavailable(kind));
    }
    let scheme = table.scheme();
    let names: Vec<&str> = scheme.variables().iter().map(|v| v.name.as_str()).collect();
    if dag.names().iter().map(String::as_str).ne(names.iter().copied()) {
        return Err(Error::PreconditionUnmet("DAG and table have different variables".into()));
    }
    let stored = table.joint();
    let mut joint = Vec::with_capacity(stored.len());
    let mut undefined_factors = 0;
    for u in scheme.assignments(scheme.all()) {
        let mut acc: Option<Plaus> = None;
        for &v in dag.order() {
            let atom = factor_atom(&u, v, dag.parents(v));
            let f = table.get(&atom);
            if f.is_undef() {
                undefined_factors += 1;
            }
            acc = Some(match acc {
                None if f.is_undef() => Plaus::Zero,
                None => f.clone(),
                Some(prev) => combine(kind, f, &prev)?,
            });
        }
        joint.push(acc.unwrap_or_else(|| table.top().clone()));
    }
    let mismatches = (0..joint.len()).filter(|&i| joint[i] != stored[i]).collect();
    Ok(Factorization {
        joint,
        mismatches,
        undefined_factors,
    })
}

/// `x_v | b_v` read off the full assignment `u`.
fn factor_atom(u: &Assignment, v: usize, parents: VarSet) -> CondAtom {
    CondAtom::new(u.project(VarSet::singleton(v)), u.project(parents)).expect("parents exclude the node")
}
