use std::collections::{BTreeMap, BTreeSet, VecDeque};

use super::sqcpp::{Element, Sqcpp};
use crate::error::Result;
use crate::model::{checked_atom_count, Scheme};
use crate::union_find::UnionFind;

/// The reflexive-transitive closure of a set of `a ⪯ b` statements on
/// `U* ∪ {0, ∞}`. Only elements mentioned in some statement are stored;
/// every other element is related to itself alone.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Preorder {
    scheme: Scheme,
    /// Strict successors (`a ⪯ b`, `b ≠ a`) by element id.
    above: BTreeMap<usize, BTreeSet<usize>>,
}

/// Element ids reachable from each source along `edges`, excluding the
/// source itself unless it lies on a cycle.
pub(crate) fn reachability(edges: &BTreeMap<usize, Vec<usize>>) -> BTreeMap<usize, BTreeSet<usize>> {
    let mut out = BTreeMap::new();
    for &src in edges.keys() {
        let mut seen = BTreeSet::new();
        let mut queue: VecDeque<usize> = edges[&src].iter().copied().collect();
        while let Some(v) = queue.pop_front() {
            if seen.insert(v) {
                if let Some(next) = edges.get(&v) {
                    queue.extend(next.iter().copied());
                }
            }
        }
        out.insert(src, seen);
    }
    out
}

/// Pairs `(a, b)` with `a ⪯ b ⪯ a`, `a < b`.
pub(crate) fn mutual_pairs(reach: &BTreeMap<usize, BTreeSet<usize>>) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for (&a, succ) in reach {
        for &b in succ.range(a + 1..) {
            if reach.get(&b).is_some_and(|s| s.contains(&a)) {
                out.push((a, b));
            }
        }
    }
    out
}

pub fn preorder_close(scheme: &Scheme, statements: &[(Element, Element)]) -> Result<Preorder> {
    checked_atom_count(scheme)?;
    let mut edges: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (a, b) in statements {
        edges.entry(a.id(scheme)).or_default().push(b.id(scheme));
    }
    let mut above = reachability(&edges);
    for (k, succ) in above.iter_mut() {
        succ.remove(k);
    }
    above.retain(|_, s| !s.is_empty());
    Ok(Preorder {
        scheme: scheme.clone(),
        above,
    })
}

impl Preorder {
    pub fn scheme(&self) -> &Scheme {
        &self.scheme
    }

    /// `a ⪯ b`.
    pub fn leq(&self, a: &Element, b: &Element) -> bool {
        let (a, b) = (a.id(&self.scheme), b.id(&self.scheme));
        a == b || self.above.get(&a).is_some_and(|s| s.contains(&b))
    }

    /// Every strict pair `a ⪯ b` with `a ≠ b`, by element id.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.above.iter().flat_map(|(&a, s)| s.iter().map(move |&b| (a, b)))
    }
}

/// `≈ = ⪯ ∩ ⪰` as a partition.
pub fn qcpp_symmetric_part(p: &Preorder) -> Sqcpp {
    let n = p.scheme.atom_count().expect("checked when the preorder was built");
    let mut uf = UnionFind::new(n + 2);
    for (a, b) in mutual_pairs(&p.above) {
        uf.union(a, b);
    }
    Sqcpp::from_union_find(p.scheme.clone(), &mut uf)
}
