use super::dag::Dag;
use crate::error::{Error, Result};
use crate::independence::{IndependenceStructure, Triple};
use crate::model::VarSet;

/// Whether every trail between `X` and `Y` is blocked by `Z`.
///
/// Reachability form of the criterion: a ball leaves `X` and travels along
/// edges, passing a node when the node is not in `Z` (chains and forks) or
/// when it is a collider with itself or a descendant in `Z`.
pub fn d_separated(dag: &Dag, x: VarSet, z: VarSet, y: VarSet) -> Result<bool> {
    let t = Triple::new(x, z, y)?;
    if !t.vars().is_subset(VarSet::full(dag.len())) {
        return Err(Error::UnknownVariable(format!("{:?}", t.vars().difference(VarSet::full(dag.len())))));
    }
    Ok(d_separated_raw(dag, x, z, y))
}

pub(crate) fn d_separated_raw(dag: &Dag, x: VarSet, z: VarSet, y: VarSet) -> bool {
    reachable(dag, x, z).is_disjoint(y)
}

/// Nodes connected to `x` by an active trail given `z`.
fn reachable(dag: &Dag, x: VarSet, z: VarSet) -> VarSet {
    let anc_z = dag.ancestral_closure(z);
    // visited[v][0]: arrived from a child (moving up); [1]: from a parent
    let mut visited = vec![[false; 2]; dag.len()];
    let mut stack: Vec<(usize, usize)> = x.iter().map(|v| (v, 0)).collect();
    let mut out = VarSet::EMPTY;
    while let Some((v, dir)) = stack.pop() {
        if visited[v][dir] {
            continue;
        }
        visited[v][dir] = true;
        let blocked = z.contains(v);
        if !blocked {
            out = out.with(v);
        }
        if dir == 0 {
            if !blocked {
                stack.extend(dag.parents(v).iter().map(|p| (p, 0)));
                stack.extend(dag.children(v).iter().map(|c| (c, 1)));
            }
        } else {
            if !blocked {
                stack.extend(dag.children(v).iter().map(|c| (c, 1)));
            }
            if anc_z.contains(v) {
                stack.extend(dag.parents(v).iter().map(|p| (p, 0)));
            }
        }
    }
    out
}

/// Every triple the DAG d-separates.
pub fn dag_independencies(dag: &Dag) -> Result<IndependenceStructure> {
    let mut s = IndependenceStructure::empty(dag.names().to_vec())?;
    let all = VarSet::full(dag.len());
    for x in all.subsets() {
        for z in all.difference(x).subsets() {
            let reach = reachable(dag, x, z);
            for y in all.difference(x.union(z)).subsets() {
                if reach.is_disjoint(y) {
                    s.insert(Triple::new(x, z, y)?)?;
                }
            }
        }
    }
    Ok(s)
}
