use std::fmt;

use crate::error::{Error, Result};
use crate::model::{Scheme, VarSet};

/// Largest number of variables for a dense independence structure.
pub const MAX_STRUCTURE_VARIABLES: usize = 10;

/// `(X, Z, Y)`: "X is independent of Y given Z". The three sets are
/// pairwise disjoint.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Triple {
    pub x: VarSet,
    pub z: VarSet,
    pub y: VarSet,
}

impl Triple {
    pub fn new(x: VarSet, z: VarSet, y: VarSet) -> Result<Self> {
        if !x.is_disjoint(z) || !x.is_disjoint(y) || !z.is_disjoint(y) {
            return Err(Error::OverlappingScopes);
        }
        Ok(Triple { x, z, y })
    }

    pub(crate) const fn raw(x: VarSet, z: VarSet, y: VarSet) -> Self {
        Triple { x, z, y }
    }

    /// `(Y, Z, X)`.
    pub fn mirror(self) -> Self {
        Triple {
            x: self.y,
            z: self.z,
            y: self.x,
        }
    }

    pub fn vars(self) -> VarSet {
        self.x.union(self.z).union(self.y)
    }

    /// Dense code: base-4 digit per variable (0 absent, 1 in X, 2 in Z, 3 in Y).
    pub(crate) fn code(self) -> usize {
        let mut code = 0;
        for (set, digit) in [(self.x, 1usize), (self.z, 2), (self.y, 3)] {
            for v in set.iter() {
                code += digit << (2 * v);
            }
        }
        code
    }

    pub(crate) fn from_code(mut code: usize, n: usize) -> Self {
        let mut t = Triple::raw(VarSet::EMPTY, VarSet::EMPTY, VarSet::EMPTY);
        for v in 0..n {
            match code & 3 {
                1 => t.x = t.x.with(v),
                2 => t.z = t.z.with(v),
                3 => t.y = t.y.with(v),
                _ => {}
            }
            code >>= 2;
        }
        t
    }

    /// Render with variable names, e.g. `A;B,C;D`.
    pub fn display(self, names: &[String]) -> String {
        let side = |s: VarSet| s.iter().map(|v| names[v].as_str()).collect::<Vec<_>>().join(",");
        format!("{};{};{}", side(self.x), side(self.z), side(self.y))
    }
}

impl fmt::Debug for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?}, {:?}, {:?})", self.x, self.z, self.y)
    }
}

/// A set of triples over a fixed list of variables, stored densely.
#[derive(Clone, PartialEq, Eq)]
pub struct IndependenceStructure {
    names: Vec<String>,
    members: Vec<bool>,
    count: usize,
}

impl IndependenceStructure {
    pub fn empty(names: Vec<String>) -> Result<Self> {
        if names.len() > MAX_STRUCTURE_VARIABLES {
            return Err(Error::TooLarge);
        }
        let size = 1usize << (2 * names.len());
        Ok(IndependenceStructure {
            names,
            members: vec![false; size],
            count: 0,
        })
    }

    pub fn for_scheme(scheme: &Scheme) -> Result<Self> {
        Self::empty(scheme.variables().iter().map(|v| v.name.clone()).collect())
    }

    /// Every disjoint triple over the variables.
    pub fn full(names: Vec<String>) -> Result<Self> {
        let mut s = Self::empty(names)?;
        let n = s.n_vars();
        for code in 0..s.members.len() {
            s.insert_raw(Triple::from_code(code, n));
        }
        Ok(s)
    }

    pub fn from_triples(names: Vec<String>, triples: impl IntoIterator<Item = Triple>) -> Result<Self> {
        let mut s = Self::empty(names)?;
        for t in triples {
            s.insert(t)?;
        }
        Ok(s)
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn n_vars(&self) -> usize {
        self.names.len()
    }

    pub fn all_vars(&self) -> VarSet {
        VarSet::full(self.n_vars())
    }

    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    pub fn insert(&mut self, t: Triple) -> Result<bool> {
        let t = Triple::new(t.x, t.z, t.y)?;
        if !t.vars().is_subset(self.all_vars()) {
            return Err(Error::UnknownVariable(format!("{:?}", t.vars().difference(self.all_vars()))));
        }
        Ok(self.insert_raw(t))
    }

    pub(crate) fn insert_raw(&mut self, t: Triple) -> bool {
        let slot = &mut self.members[t.code()];
        if *slot {
            false
        } else {
            *slot = true;
            self.count += 1;
            true
        }
    }

    pub fn remove(&mut self, t: Triple) -> bool {
        if !t.vars().is_subset(self.all_vars()) {
            return false;
        }
        let slot = &mut self.members[t.code()];
        if *slot {
            *slot = false;
            self.count -= 1;
            true
        } else {
            false
        }
    }

    pub fn contains(&self, t: Triple) -> bool {
        t.vars().is_subset(self.all_vars()) && self.members[t.code()]
    }

    /// Members in canonical order.
    pub fn triples(&self) -> Vec<Triple> {
        let n = self.n_vars();
        let mut out: Vec<Triple> = self
            .members
            .iter()
            .enumerate()
            .filter(|(_, &m)| m)
            .map(|(code, _)| Triple::from_code(code, n))
            .collect();
        out.sort();
        out
    }

    pub fn is_subset(&self, other: &IndependenceStructure) -> bool {
        self.names == other.names && self.members.iter().zip(&other.members).all(|(a, b)| !a || *b)
    }

    /// Triples in `self` but not in `other`.
    pub fn difference(&self, other: &IndependenceStructure) -> Vec<Triple> {
        self.triples().into_iter().filter(|t| !other.contains(*t)).collect()
    }

    /// `I^R`: every triple with its outer sets swapped.
    pub fn reflect(&self) -> IndependenceStructure {
        let mut out = Self::empty(self.names.clone()).expect("same size");
        for t in self.triples() {
            out.insert_raw(t.mirror());
        }
        out
    }

    /// `I^S = I ∩ I^R`.
    pub fn symmetric_part(&self) -> IndependenceStructure {
        let mut out = Self::empty(self.names.clone()).expect("same size");
        for t in self.triples() {
            if self.contains(t.mirror()) {
                out.insert_raw(t);
            }
        }
        out
    }

    /// All subset-minimal `B ⊆ W` with `({v}, B, W \ B)` in the structure,
    /// in canonical order.
    pub fn markov_boundaries(&self, v: usize, w: VarSet) -> Result<Vec<VarSet>> {
        if w.contains(v) {
            return Err(Error::OverlappingScopes);
        }
        if v >= self.n_vars() || !w.is_subset(self.all_vars()) {
            return Err(Error::UnknownVariable(format!("{v}")));
        }
        let target = VarSet::singleton(v);
        let mut found: Vec<VarSet> = Vec::new();
        for b in w.subsets_by_size() {
            if found.iter().any(|f| f.is_subset(b)) {
                continue;
            }
            if self.contains(Triple::raw(target, b, w.difference(b))) {
                found.push(b);
            }
        }
        Ok(found)
    }
}

impl fmt::Debug for IndependenceStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set()
            .entries(self.triples().into_iter().map(|t| t.display(&self.names)))
            .finish()
    }
}
