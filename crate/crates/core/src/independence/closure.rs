use std::collections::VecDeque;

use super::axioms::Axiom;
use super::structure::{IndependenceStructure, Triple};
use crate::model::VarSet;

/// Smallest superset of `s` closed under every axiom in `axioms`.
///
/// Semi-naive: each triple is expanded once, when it leaves the worklist,
/// and only instantiations in which it is a premise are considered.
pub fn closure(s: &IndependenceStructure, axioms: &[Axiom]) -> IndependenceStructure {
    let mut c = Closer {
        out: s.clone(),
        queue: VecDeque::new(),
        all: s.all_vars(),
        symmetry: axioms.contains(&Axiom::Symmetry),
    };
    for t in s.triples() {
        c.queue.push_back(t);
        if c.symmetry {
            c.add(t.mirror());
        }
    }
    if axioms.contains(&Axiom::TrivialIndependence) {
        for x in c.all.subsets() {
            for z in c.all.difference(x).subsets() {
                c.add(Triple::raw(x, z, VarSet::EMPTY));
            }
        }
    }
    while let Some(t) = c.queue.pop_front() {
        for &a in axioms {
            c.fire(a, t);
        }
    }
    c.out
}

struct Closer {
    out: IndependenceStructure,
    queue: VecDeque<Triple>,
    all: VarSet,
    symmetry: bool,
}

impl Closer {
    fn add(&mut self, t: Triple) {
        if self.out.insert_raw(t) {
            self.queue.push_back(t);
            if self.symmetry {
                let m = t.mirror();
                if self.out.insert_raw(m) {
                    self.queue.push_back(m);
                }
            }
        }
    }

    fn fire(&mut self, a: Axiom, t: Triple) {
        let Triple { x, z, y } = t;
        match a {
            Axiom::TrivialIndependence => {}
            Axiom::Symmetry => self.add(t.mirror()),
            Axiom::Decomposition => {
                for part in y.subsets() {
                    self.add(Triple::raw(x, z, part));
                }
            }
            Axiom::WeakUnion => {
                for part in y.subsets() {
                    self.add(Triple::raw(x, z.union(part), y.difference(part)));
                }
            }
            Axiom::Contraction => {
                // t = (X, Z'Y, W) as the first premise
                for moved in z.subsets() {
                    let base = z.difference(moved);
                    if self.out.contains(Triple::raw(x, base, moved)) {
                        self.add(Triple::raw(x, base, moved.union(y)));
                    }
                }
                // t = (X, Z, Y) as the second premise
                let rest = self.all.difference(t.vars());
                for w in rest.subsets() {
                    if self.out.contains(Triple::raw(x, z.union(y), w)) {
                        self.add(Triple::raw(x, z, y.union(w)));
                    }
                }
            }
            Axiom::Intersection => {
                // both premises have the shape (X, Z''A, B); t covers either role
                for moved in z.subsets() {
                    let base = z.difference(moved);
                    if self.out.contains(Triple::raw(x, base.union(y), moved)) {
                        self.add(Triple::raw(x, base, moved.union(y)));
                    }
                }
            }
        }
    }
}
