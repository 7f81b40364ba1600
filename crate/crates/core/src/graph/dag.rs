use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::independence::IndependenceStructure;
use crate::model::{VarSet, MAX_VARIABLES};

/// A directed acyclic graph over named variables, stored as parent sets,
/// together with one topological order of its nodes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dag {
    names: Vec<String>,
    parents: Vec<VarSet>,
    order: Vec<usize>,
}

impl Dag {
    /// Fails with [`Error::Cycle`] unless the parent sets are acyclic.
    pub fn new(names: Vec<String>, parents: Vec<VarSet>) -> Result<Self> {
        if names.len() != parents.len() {
            return Err(Error::InvalidScheme("one parent set per node required".into()));
        }
        if names.len() > MAX_VARIABLES {
            return Err(Error::TooLarge);
        }
        let all = VarSet::full(names.len());
        if let Some(bad) = parents.iter().position(|p| !p.is_subset(all)) {
            return Err(Error::UnknownVariable(format!("parent of {}", names[bad])));
        }
        let order = topological_order(&parents).map_err(|v| Error::Cycle(names[v].clone()))?;
        Ok(Dag { names, parents, order })
    }

    pub fn from_edges(names: Vec<String>, edges: &[(usize, usize)]) -> Result<Self> {
        let mut parents = vec![VarSet::EMPTY; names.len()];
        for &(from, to) in edges {
            if from >= names.len() || to >= names.len() {
                return Err(Error::UnknownVariable(format!("node {}", from.max(to))));
            }
            parents[to] = parents[to].with(from);
        }
        Dag::new(names, parents)
    }

    /// Parents must come earlier in `order`, which becomes the DAG's order.
    pub fn with_order(names: Vec<String>, parents: Vec<VarSet>, order: Vec<usize>) -> Result<Self> {
        let mut dag = Dag::new(names, parents)?;
        let mut seen = VarSet::EMPTY;
        if order.len() != dag.len() || order.iter().collect::<BTreeSet<_>>().len() != dag.len() {
            return Err(Error::PreconditionUnmet("order must list every variable exactly once".into()));
        }
        for &v in &order {
            if !dag.parents[v].is_subset(seen) {
                return Err(Error::PreconditionUnmet(format!("{} precedes one of its parents", dag.names[v])));
            }
            seen = seen.with(v);
        }
        dag.order = order;
        Ok(dag)
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn parents(&self, v: usize) -> VarSet {
        self.parents[v]
    }

    pub fn children(&self, v: usize) -> VarSet {
        VarSet::from_indices((0..self.len()).filter(|&c| self.parents[c].contains(v)))
    }

    /// A topological order; for a boundary DAG, the construction order.
    pub fn order(&self) -> &[usize] {
        &self.order
    }

    /// `(parent, child)` pairs sorted by parent then child.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<_> = (0..self.len())
            .flat_map(|c| self.parents[c].iter().map(move |p| (p, c)))
            .collect();
        out.sort_unstable();
        out
    }

    /// `vs` together with all their ancestors.
    pub fn ancestral_closure(&self, vs: VarSet) -> VarSet {
        let mut out = vs;
        let mut frontier: Vec<usize> = vs.iter().collect();
        while let Some(v) = frontier.pop() {
            for p in self.parents[v].iter() {
                if !out.contains(p) {
                    out = out.with(p);
                    frontier.push(p);
                }
            }
        }
        out
    }
}

/// Kahn's algorithm taking the smallest ready node first; on a cycle,
/// returns a node on or behind it.
fn topological_order(parents: &[VarSet]) -> std::result::Result<Vec<usize>, usize> {
    let n = parents.len();
    let mut placed = VarSet::EMPTY;
    let mut order = Vec::with_capacity(n);
    while order.len() < n {
        let next = (0..n).find(|&v| !placed.contains(v) && parents[v].is_subset(placed));
        match next {
            Some(v) => {
                placed = placed.with(v);
                order.push(v);
            }
            None => return Err((0..n).find(|&v| !placed.contains(v)).expect("unplaced node")),
        }
    }
    Ok(order)
}

/// A boundary DAG and the nodes whose Markov boundary was not unique.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundaryDag {
    pub dag: Dag,
    /// `(node, all minimal boundaries)` where there was more than one; the
    /// first is the one used as parents.
    pub ambiguous: Vec<(usize, Vec<VarSet>)>,
}

/// Parents of `order[i]` are its first minimal boundary within
/// `order[..i]`.
pub fn boundary_dag(s: &IndependenceStructure, order: &[usize]) -> Result<BoundaryDag> {
    let n = s.n_vars();
    if order.len() != n || order.iter().collect::<BTreeSet<_>>().len() != n || order.iter().any(|&v| v >= n) {
        return Err(Error::PreconditionUnmet("order must list every variable exactly once".into()));
    }
    let mut parents = vec![VarSet::EMPTY; n];
    let mut ambiguous = Vec::new();
    let mut before = VarSet::EMPTY;
    for &v in order {
        let bs = s.markov_boundaries(v, before)?;
        let Some(&first) = bs.first() else {
            return Err(Error::NoBoundary(s.names()[v].clone()));
        };
        parents[v] = first;
        if bs.len() > 1 {
            ambiguous.push((v, bs));
        }
        before = before.with(v);
    }
    Ok(BoundaryDag {
        dag: Dag::with_order(s.names().to_vec(), parents, order.to_vec())?,
        ambiguous,
    })
}
