use std::fmt;
use std::str::FromStr;

use super::structure::{IndependenceStructure, Triple};
use crate::error::Error;
use crate::model::VarSet;

/// The six graphoid properties.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axiom {
    /// `I(X, Z, ∅)`
    TrivialIndependence,
    /// `I(X, Z, Y) ⇒ I(Y, Z, X)`
    Symmetry,
    /// `I(X, Z, YW) ⇒ I(X, Z, Y)`
    Decomposition,
    /// `I(X, Z, YW) ⇒ I(X, ZY, W)`
    WeakUnion,
    /// `I(X, ZY, W) ∧ I(X, Z, Y) ⇒ I(X, Z, YW)`
    Contraction,
    /// `I(X, ZY, W) ∧ I(X, ZW, Y) ⇒ I(X, Z, YW)`
    Intersection,
}

impl Axiom {
    pub const ALL: [Axiom; 6] = [
        Axiom::TrivialIndependence,
        Axiom::Symmetry,
        Axiom::Decomposition,
        Axiom::WeakUnion,
        Axiom::Contraction,
        Axiom::Intersection,
    ];

    /// Every axiom except Intersection.
    pub const SEMIGRAPHOID: [Axiom; 5] = [
        Axiom::TrivialIndependence,
        Axiom::Symmetry,
        Axiom::Decomposition,
        Axiom::WeakUnion,
        Axiom::Contraction,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Axiom::TrivialIndependence => "trivial_independence",
            Axiom::Symmetry => "symmetry",
            Axiom::Decomposition => "decomposition",
            Axiom::WeakUnion => "weak_union",
            Axiom::Contraction => "contraction",
            Axiom::Intersection => "intersection",
        }
    }

    /// Number of set variables the axiom quantifies over.
    fn arity(self) -> usize {
        match self {
            Axiom::TrivialIndependence => 2,
            Axiom::Symmetry => 3,
            _ => 4,
        }
    }

    /// Premises and conclusion for the instantiation `sets = [X, Z, Y, W]`
    /// (unused trailing sets are empty).
    fn instantiate(self, [x, z, y, w]: [VarSet; 4]) -> (Vec<Triple>, Triple) {
        let t = Triple::raw;
        match self {
            Axiom::TrivialIndependence => (vec![], t(x, z, VarSet::EMPTY)),
            Axiom::Symmetry => (vec![t(x, z, y)], t(y, z, x)),
            Axiom::Decomposition => (vec![t(x, z, y.union(w))], t(x, z, y)),
            Axiom::WeakUnion => (vec![t(x, z, y.union(w))], t(x, z.union(y), w)),
            Axiom::Contraction => (vec![t(x, z.union(y), w), t(x, z, y)], t(x, z, y.union(w))),
            Axiom::Intersection => (vec![t(x, z.union(y), w), t(x, z.union(w), y)], t(x, z, y.union(w))),
        }
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Axiom {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let norm = s.trim().to_ascii_lowercase().replace(['-', ' '], "_");
        Axiom::ALL
            .into_iter()
            .find(|a| a.name() == norm || a.name().replace('_', "") == norm)
            .ok_or_else(|| Error::Parse(format!("unknown axiom {s:?}")))
    }
}

/// An instantiation whose premises are present but whose conclusion is not.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomViolation {
    pub axiom: Axiom,
    pub premises: Vec<Triple>,
    pub conclusion: Triple,
}

/// Calls `f` with every assignment of the `n` variables to `arity` disjoint
/// sets (plus "unused"), as `[X, Z, Y, W]`.
fn for_each_instantiation(n: usize, arity: usize, mut f: impl FnMut([VarSet; 4]) -> bool) {
    let base = arity + 1;
    let total = base.pow(n as u32);
    for mut code in 0..total {
        let mut sets = [VarSet::EMPTY; 4];
        for v in 0..n {
            let role = code % base;
            code /= base;
            if role > 0 {
                sets[role - 1] = sets[role - 1].with(v);
            }
        }
        if !f(sets) {
            return;
        }
    }
}

fn scan(s: &IndependenceStructure, a: Axiom, stop_at_first: bool) -> Vec<AxiomViolation> {
    let mut out = Vec::new();
    for_each_instantiation(s.n_vars(), a.arity(), |sets| {
        let (premises, conclusion) = a.instantiate(sets);
        if premises.iter().all(|p| s.contains(*p)) && !s.contains(conclusion) {
            out.push(AxiomViolation {
                axiom: a,
                premises,
                conclusion,
            });
            return !stop_at_first;
        }
        true
    });
    out
}

/// Every instantiation of `a` that `s` violates.
pub fn check_axiom(s: &IndependenceStructure, a: Axiom) -> Vec<AxiomViolation> {
    scan(s, a, false)
}

pub fn first_violation(s: &IndependenceStructure, a: Axiom) -> Option<AxiomViolation> {
    scan(s, a, true).pop()
}

pub fn satisfies(s: &IndependenceStructure, a: Axiom) -> bool {
    first_violation(s, a).is_none()
}

pub fn satisfies_all(s: &IndependenceStructure, axioms: &[Axiom]) -> bool {
    axioms.iter().all(|&a| satisfies(s, a))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(n: usize) -> Vec<String> {
        (0..n).map(|i| ((b'A' + i as u8) as char).to_string()).collect()
    }

    fn set(v: &[usize]) -> VarSet {
        VarSet::from_indices(v.iter().copied())
    }

    #[test]
    fn full_structure_satisfies_everything() {
        let s = IndependenceStructure::full(names(3)).unwrap();
        for a in Axiom::ALL {
            assert!(check_axiom(&s, a).is_empty(), "{a}");
        }
    }

    #[test]
    fn empty_structure_misses_every_trivial_triple() {
        let s = IndependenceStructure::empty(names(3)).unwrap();
        let v = check_axiom(&s, Axiom::TrivialIndependence);
        // each variable is in X, in Z, or unused
        assert_eq!(v.len(), 27);
        assert!(v.iter().all(|v| v.conclusion.y.is_empty() && v.premises.is_empty()));
        for a in &Axiom::ALL[1..] {
            assert!(check_axiom(&s, *a).is_empty());
        }
    }

    #[test]
    fn decomposition_reports_the_missing_part() {
        let mut s = IndependenceStructure::empty(names(3)).unwrap();
        s.insert(Triple::raw(set(&[0]), set(&[]), set(&[1, 2]))).unwrap();
        let all = s.all_vars();
        for x in all.subsets() {
            for z in all.difference(x).subsets() {
                s.insert(Triple::raw(x, z, VarSet::EMPTY)).unwrap();
            }
        }
        let v = check_axiom(&s, Axiom::Decomposition);
        let missing: Vec<Triple> = v.iter().map(|v| v.conclusion).collect();
        assert!(missing.contains(&Triple::raw(set(&[0]), set(&[]), set(&[1]))));
        assert!(missing.contains(&Triple::raw(set(&[0]), set(&[]), set(&[2]))));
        assert!(v.iter().all(|v| v.premises == vec![Triple::raw(set(&[0]), set(&[]), set(&[1, 2]))]));
    }

    #[test]
    fn axiom_names_parse() {
        for a in Axiom::ALL {
            assert_eq!(a.name().parse::<Axiom>().unwrap(), a);
        }
        assert_eq!("WeakUnion".parse::<Axiom>().unwrap(), Axiom::WeakUnion);
        assert!("transitivity".parse::<Axiom>().is_err());
    }
}
