use std::collections::HashSet;
use std::fmt;
use std::sync::{Arc, OnceLock};

use super::varset::{VarSet, MAX_VARIABLES};
use crate::error::{Error, Result};

/// A named variable with a finite, nonempty list of value labels.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Variable {
    pub name: String,
    pub values: Vec<String>,
}

/// The variable set `U` together with each variable's value domain.
///
/// Cloning is cheap; the variable list is shared. The order of variables is
/// fixed at construction and drives every canonical iteration in the crate.
#[derive(Clone)]
pub struct Scheme(Arc<SchemeData>);

struct SchemeData {
    vars: Vec<Variable>,
    /// Mixed-radix weight of each variable's digit in a dense atom index.
    strides: Vec<usize>,
    atom_count: Option<usize>,
    offsets: OnceLock<Offsets>,
}

/// Per-subset offset tables: for every scope `S` and every assignment `s` of
/// `S` (lexicographic order) the contribution of `s` to a dense atom index
/// when `s` appears on the left or in the condition of an atom.
pub(crate) struct Offsets {
    pub(crate) left: Vec<Vec<usize>>,
    pub(crate) given: Vec<Vec<usize>>,
}

impl Scheme {
    pub fn new<N, L>(vars: impl IntoIterator<Item = (N, Vec<L>)>) -> Result<Self>
    where
        N: Into<String>,
        L: Into<String>,
    {
        let vars: Vec<Variable> = vars
            .into_iter()
            .map(|(name, values)| Variable {
                name: name.into(),
                values: values.into_iter().map(Into::into).collect(),
            })
            .collect();
        Self::from_variables(vars)
    }

    pub fn from_variables(vars: Vec<Variable>) -> Result<Self> {
        if vars.len() > MAX_VARIABLES {
            return Err(Error::InvalidScheme(format!(
                "{} variables exceed the limit of {MAX_VARIABLES}",
                vars.len()
            )));
        }
        let mut names = HashSet::new();
        for v in &vars {
            if v.name.is_empty() {
                return Err(Error::InvalidScheme("empty variable name".into()));
            }
            if !names.insert(v.name.as_str()) {
                return Err(Error::InvalidScheme(format!("duplicate variable {}", v.name)));
            }
            if v.values.is_empty() {
                return Err(Error::InvalidScheme(format!("variable {} has an empty domain", v.name)));
            }
            if v.values.len() > u16::MAX as usize {
                return Err(Error::InvalidScheme(format!("domain of {} is too large", v.name)));
            }
            let mut labels = HashSet::new();
            for l in &v.values {
                if !labels.insert(l.as_str()) {
                    return Err(Error::InvalidScheme(format!(
                        "variable {} repeats value {l}",
                        v.name
                    )));
                }
            }
        }
        let mut strides = Vec::with_capacity(vars.len());
        let mut acc: Option<usize> = Some(1);
        for v in &vars {
            strides.push(acc.unwrap_or(0));
            acc = acc.and_then(|a| a.checked_mul(1 + 2 * v.values.len()));
        }
        Ok(Scheme(Arc::new(SchemeData {
            vars,
            strides,
            atom_count: acc,
            offsets: OnceLock::new(),
        })))
    }

    pub fn len(&self) -> usize {
        self.0.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.vars.is_empty()
    }

    pub fn variables(&self) -> &[Variable] {
        &self.0.vars
    }

    pub fn variable(&self, var: usize) -> &Variable {
        &self.0.vars[var]
    }

    pub fn domain_size(&self, var: usize) -> usize {
        self.0.vars[var].values.len()
    }

    pub fn all(&self) -> VarSet {
        VarSet::full(self.len())
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.0.vars.iter().position(|v| v.name == name)
    }

    pub fn value_index(&self, var: usize, label: &str) -> Option<u16> {
        self.0.vars[var]
            .values
            .iter()
            .position(|l| l == label)
            .map(|i| i as u16)
    }

    /// Resolve a list of variable names into a set.
    pub fn varset<S: AsRef<str>>(&self, names: &[S]) -> Result<VarSet> {
        let mut set = VarSet::EMPTY;
        for n in names {
            let n = n.as_ref();
            let v = self
                .index_of(n)
                .ok_or_else(|| Error::UnknownVariable(n.to_string()))?;
            set = set.with(v);
        }
        Ok(set)
    }

    pub fn names(&self, set: VarSet) -> Vec<String> {
        set.iter().map(|v| self.0.vars[v].name.clone()).collect()
    }

    /// `|X̲|`, the number of assignments of the scope.
    pub fn assignment_count(&self, scope: VarSet) -> usize {
        scope.iter().map(|v| self.domain_size(v)).product()
    }

    /// `|U*|`, or `None` when it does not fit in a `usize`.
    pub fn atom_count(&self) -> Option<usize> {
        self.0.atom_count
    }

    /// A scheme over the variables in `keep` (in their original order), and
    /// for each new variable its position in `self`.
    pub fn sub_scheme(&self, keep: VarSet) -> (Scheme, Vec<usize>) {
        let map: Vec<usize> = keep.iter().filter(|&v| v < self.len()).collect();
        let vars = map.iter().map(|&v| self.0.vars[v].clone()).collect();
        let scheme = Scheme::from_variables(vars).expect("subset of a valid scheme is valid");
        (scheme, map)
    }

    /// Ordered pairs `(X, Y)` of disjoint scopes in canonical order:
    /// `(|X|, |Y|, X, Y)` with scopes compared as sorted member lists.
    pub fn scope_pairs(&self) -> Vec<(VarSet, VarSet)> {
        let all = self.all();
        let mut pairs = Vec::new();
        for x in all.subsets() {
            for y in all.difference(x).subsets() {
                pairs.push((x, y));
            }
        }
        pairs.sort_by(|a, b| {
            a.0.len()
                .cmp(&b.0.len())
                .then(a.1.len().cmp(&b.1.len()))
                .then_with(|| a.0.canonical_cmp(b.0))
                .then_with(|| a.1.canonical_cmp(b.1))
        });
        pairs
    }

    /// Every conditional atom `x|y` of `U*` exactly once, in canonical order.
    pub fn enumerate_atoms(&self) -> impl Iterator<Item = CondAtom> + '_ {
        self.scope_pairs().into_iter().flat_map(move |(x, y)| {
            self.assignments(x).flat_map(move |left| {
                self.assignments(y).map(move |given| CondAtom {
                    left: left.clone(),
                    given,
                })
            })
        })
    }

    /// Assignments of `scope` in lexicographic order (first variable most
    /// significant).
    pub fn assignments(&self, scope: VarSet) -> Assignments {
        let dims: Vec<u16> = scope.iter().map(|v| self.domain_size(v) as u16).collect();
        Assignments {
            scope,
            dims,
            next: None,
            started: false,
        }
    }

    /// Lexicographic rank of an assignment among those of its scope.
    pub fn local_index(&self, a: &Assignment) -> usize {
        a.scope
            .iter()
            .zip(&a.values)
            .fold(0, |acc, (v, &val)| acc * self.domain_size(v) + val as usize)
    }

    /// Inverse of [`Scheme::local_index`].
    pub fn assignment_at(&self, scope: VarSet, mut index: usize) -> Assignment {
        let vars: Vec<usize> = scope.iter().collect();
        let mut values = vec![0u16; vars.len()];
        for (k, &v) in vars.iter().enumerate().rev() {
            let d = self.domain_size(v);
            values[k] = (index % d) as u16;
            index /= d;
        }
        Assignment { scope, values }
    }

    /// Dense index of the atom `left|given` in a table over this scheme.
    pub fn atom_index(&self, atom: &CondAtom) -> usize {
        let mut idx = 0;
        for (v, &val) in atom.left.scope.iter().zip(&atom.left.values) {
            idx += (1 + val as usize) * self.0.strides[v];
        }
        for (v, &val) in atom.given.scope.iter().zip(&atom.given.values) {
            idx += (1 + self.domain_size(v) + val as usize) * self.0.strides[v];
        }
        idx
    }

    /// Inverse of [`Scheme::atom_index`].
    pub fn atom_at(&self, mut index: usize) -> CondAtom {
        let mut left = Assignment::top();
        let mut given = Assignment::top();
        for v in 0..self.len() {
            let base = 1 + 2 * self.domain_size(v);
            let digit = index % base;
            index /= base;
            if digit == 0 {
                continue;
            }
            let d = self.domain_size(v);
            if digit <= d {
                left.scope = left.scope.with(v);
                left.values.push((digit - 1) as u16);
            } else {
                given.scope = given.scope.with(v);
                given.values.push((digit - 1 - d) as u16);
            }
        }
        CondAtom { left, given }
    }

    pub(crate) fn offsets(&self) -> &Offsets {
        self.0.offsets.get_or_init(|| {
            let n = self.len();
            let mut left = Vec::with_capacity(1 << n);
            let mut given = Vec::with_capacity(1 << n);
            for bits in 0..(1u32 << n) {
                let scope = VarSet::from_bits(bits);
                let mut l = Vec::with_capacity(self.assignment_count(scope));
                let mut g = Vec::with_capacity(l.capacity());
                for a in self.assignments(scope) {
                    let mut lo = 0;
                    let mut go = 0;
                    for (v, &val) in scope.iter().zip(&a.values) {
                        lo += (1 + val as usize) * self.0.strides[v];
                        go += (1 + self.domain_size(v) + val as usize) * self.0.strides[v];
                    }
                    l.push(lo);
                    g.push(go);
                }
                left.push(l);
                given.push(g);
            }
            Offsets { left, given }
        })
    }

    /// `A=0,B=1` rendering of an assignment (empty string for `⊤`).
    pub fn assignment_key(&self, a: &Assignment) -> String {
        a.scope
            .iter()
            .zip(&a.values)
            .map(|(v, &val)| format!("{}={}", self.0.vars[v].name, self.0.vars[v].values[val as usize]))
            .collect::<Vec<_>>()
            .join(",")
    }

    /// `x|y` rendering of an atom; `x` alone when the condition is `⊤`.
    pub fn atom_key(&self, atom: &CondAtom) -> String {
        if atom.given.is_top() {
            self.assignment_key(&atom.left)
        } else {
            format!(
                "{}|{}",
                self.assignment_key(&atom.left),
                self.assignment_key(&atom.given)
            )
        }
    }

    /// Parse an `A=0,B=1` key; variables may appear in any order.
    pub fn parse_assignment(&self, key: &str) -> Result<Assignment> {
        let key = key.trim();
        if key.is_empty() || key == "⊤" {
            return Ok(Assignment::top());
        }
        let mut pairs = Vec::new();
        for part in key.split(',') {
            let (name, value) = part
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("expected NAME=VALUE, got {part:?}")))?;
            pairs.push((name.trim(), value.trim()));
        }
        Assignment::from_names(self, &pairs)
    }

    /// Parse an `x|y` atom key.
    pub fn parse_atom(&self, key: &str) -> Result<CondAtom> {
        let (left, given) = match key.split_once('|') {
            Some((l, g)) => (l, g),
            None => (key, ""),
        };
        CondAtom::new(self.parse_assignment(left)?, self.parse_assignment(given)?)
    }
}

impl PartialEq for Scheme {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.vars == other.0.vars
    }
}

impl Eq for Scheme {}

impl fmt::Debug for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list()
            .entries(self.0.vars.iter().map(|v| (&v.name, &v.values)))
            .finish()
    }
}

/// Lexicographic iterator over the assignments of a scope.
pub struct Assignments {
    scope: VarSet,
    dims: Vec<u16>,
    next: Option<Vec<u16>>,
    started: bool,
}

impl Iterator for Assignments {
    type Item = Assignment;

    fn next(&mut self) -> Option<Assignment> {
        if !self.started {
            self.started = true;
            self.next = Some(vec![0; self.dims.len()]);
        } else {
            let cur = self.next.as_mut()?;
            let mut k = cur.len();
            loop {
                if k == 0 {
                    self.next = None;
                    return None;
                }
                k -= 1;
                cur[k] += 1;
                if cur[k] < self.dims[k] {
                    break;
                }
                cur[k] = 0;
            }
        }
        self.next.as_ref().map(|values| Assignment {
            scope: self.scope,
            values: values.clone(),
        })
    }
}

/// One value for each variable of a scope `X ⊆ U`. The empty assignment is
/// `⊤`, the single element of `∅̲`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Assignment {
    scope: VarSet,
    /// Value indices for the scope's variables in increasing variable order.
    values: Vec<u16>,
}

impl Assignment {
    pub fn top() -> Self {
        Assignment {
            scope: VarSet::EMPTY,
            values: Vec::new(),
        }
    }

    pub fn new(scheme: &Scheme, scope: VarSet, values: Vec<u16>) -> Result<Self> {
        if !scope.is_subset(scheme.all()) {
            return Err(Error::InvalidAssignment("scope outside the scheme".into()));
        }
        if values.len() != scope.len() {
            return Err(Error::InvalidAssignment(format!(
                "{} values for {} variables",
                values.len(),
                scope.len()
            )));
        }
        for (v, &val) in scope.iter().zip(&values) {
            if val as usize >= scheme.domain_size(v) {
                return Err(Error::InvalidAssignment(format!(
                    "value index {val} out of range for {}",
                    scheme.variable(v).name
                )));
            }
        }
        Ok(Assignment { scope, values })
    }

    /// Build from `(variable, value label)` pairs.
    pub fn from_names<N: AsRef<str>, V: AsRef<str>>(scheme: &Scheme, pairs: &[(N, V)]) -> Result<Self> {
        let mut bound: Vec<(usize, u16)> = Vec::with_capacity(pairs.len());
        for (name, value) in pairs {
            let name = name.as_ref();
            let var = scheme
                .index_of(name)
                .ok_or_else(|| Error::UnknownVariable(name.to_string()))?;
            let val = scheme
                .value_index(var, value.as_ref())
                .ok_or_else(|| Error::UnknownValue {
                    variable: name.to_string(),
                    value: value.as_ref().to_string(),
                })?;
            if bound.iter().any(|&(v, _)| v == var) {
                return Err(Error::InvalidAssignment(format!("{name} bound twice")));
            }
            bound.push((var, val));
        }
        bound.sort_unstable();
        Ok(Assignment {
            scope: VarSet::from_indices(bound.iter().map(|b| b.0)),
            values: bound.into_iter().map(|b| b.1).collect(),
        })
    }

    pub fn scope(&self) -> VarSet {
        self.scope
    }

    pub fn values(&self) -> &[u16] {
        &self.values
    }

    pub fn is_top(&self) -> bool {
        self.scope.is_empty()
    }

    pub fn value_of(&self, var: usize) -> Option<u16> {
        self.scope
            .iter()
            .position(|v| v == var)
            .map(|k| self.values[k])
    }

    /// `xy` for assignments on disjoint scopes; `None` if the scopes overlap.
    pub fn join(&self, other: &Assignment) -> Option<Assignment> {
        if !self.scope.is_disjoint(other.scope) {
            return None;
        }
        let scope = self.scope.union(other.scope);
        let values = scope
            .iter()
            .map(|v| self.value_of(v).or_else(|| other.value_of(v)).unwrap())
            .collect();
        Some(Assignment { scope, values })
    }

    /// Restriction to `sub ∩ scope`.
    pub fn project(&self, sub: VarSet) -> Assignment {
        let scope = self.scope.intersection(sub);
        let values = self
            .scope
            .iter()
            .zip(&self.values)
            .filter(|(v, _)| scope.contains(*v))
            .map(|(_, &val)| val)
            .collect();
        Assignment { scope, values }
    }

    /// True when `self` and `other` agree on every shared variable.
    pub fn agrees_with(&self, other: &Assignment) -> bool {
        self.scope
            .intersection(other.scope)
            .iter()
            .all(|v| self.value_of(v) == other.value_of(v))
    }

    /// True when `self` extends `other`.
    pub fn extends(&self, other: &Assignment) -> bool {
        other.scope.is_subset(self.scope) && self.agrees_with(other)
    }
}

/// A conditional atom `x|y` with disjoint scopes. `x|⊤` is identified with
/// the plain assignment `x`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CondAtom {
    pub(crate) left: Assignment,
    pub(crate) given: Assignment,
}

impl CondAtom {
    pub fn new(left: Assignment, given: Assignment) -> Result<Self> {
        if !left.scope.is_disjoint(given.scope) {
            return Err(Error::OverlappingScopes);
        }
        Ok(CondAtom { left, given })
    }

    /// `x` as the atom `x|⊤`.
    pub fn plain(left: Assignment) -> Self {
        CondAtom {
            left,
            given: Assignment::top(),
        }
    }

    /// `xy|y` normalised to `x|y`: variables of the condition are dropped from
    /// the left side. `None` when the two sides disagree on a shared variable.
    pub fn normalized(left: &Assignment, given: &Assignment) -> Option<Self> {
        if !left.agrees_with(given) {
            return None;
        }
        Some(CondAtom {
            left: left.project(left.scope.difference(given.scope)),
            given: given.clone(),
        })
    }

    pub fn left(&self) -> &Assignment {
        &self.left
    }

    pub fn given(&self) -> &Assignment {
        &self.given
    }

    pub fn is_unconditional(&self) -> bool {
        self.given.is_top()
    }
}
