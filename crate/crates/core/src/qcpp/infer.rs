use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use super::preorder::{mutual_pairs, reachability};
use super::sqcpp::{for_each_cross, sqcpp_from_gcpp, Element, Sqcpp};
use crate::error::{Error, Result};
use crate::independence::Triple;
use crate::model::{checked_atom_count, Assignment, GcppTable, Scheme, VarSet};
use crate::union_find::UnionFind;

/// Structural rules the engine can be asked to enforce.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rule {
    /// If `xz ≉ 0` and `x|yz ≈ x|z` then `y|xz ≈ y|z`.
    CrossMultiplication,
    /// `x|y ≈ 0` whenever `xy ≈ 0` and `y ≉ 0`; the converse is policed as
    /// a zero leak.
    FullSqcpp,
    /// If `x|yz` is in one class for every possible `y`, so is `x|z`.
    ConditionalCoherence,
    /// `0 ⪯ x|y` for every atom.
    ZeroMinimum,
}

impl Rule {
    pub const ALL: [Rule; 4] = [Rule::CrossMultiplication, Rule::FullSqcpp, Rule::ConditionalCoherence, Rule::ZeroMinimum];

    pub fn name(self) -> &'static str {
        match self {
            Rule::CrossMultiplication => "cross_multiplication",
            Rule::FullSqcpp => "full_sqcpp",
            Rule::ConditionalCoherence => "conditional_coherence_rule",
            Rule::ZeroMinimum => "zero_minimum",
        }
    }
}

impl FromStr for Rule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        Rule::ALL
            .into_iter()
            .find(|r| r.name() == s || (s == "conditional_coherence" && *r == Rule::ConditionalCoherence))
            .ok_or_else(|| Error::Parse(format!("unknown rule {s:?}")))
    }
}

/// Which independence relation an assumption asserts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CiForm {
    /// `x|yz ≈ x|z` for every possible `yz`.
    I,
    /// `x|yz ≈ x|y'z` for every possible `yz`, `y'z`.
    IPrime,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CiAssumption {
    pub triple: Triple,
    pub form: CiForm,
}

/// User input to [`infer`]. The zero set is fixed up front: the run fails
/// with [`Status::ZeroLeak`] if anything else would have to be zero.
#[derive(Clone, Debug, Default)]
pub struct QcppProgram {
    pub zero_set: Vec<Assignment>,
    pub judgements: Vec<(Element, Element)>,
    pub order_judgements: Vec<(Element, Element)>,
    pub ci_assumptions: Vec<CiAssumption>,
    pub rules: BTreeSet<Rule>,
}

impl QcppProgram {
    /// A program stating the zeros and every value equality of `table`.
    pub fn from_table(table: &GcppTable) -> Self {
        let scheme = table.scheme();
        let zero_set = (0..scheme.atom_count().unwrap_or(0))
            .filter(|&i| table.entries()[i].is_zero())
            .map(|i| scheme.atom_at(i))
            .filter(|a| a.is_unconditional())
            .map(|a| a.left().clone())
            .collect();
        let mut judgements = Vec::new();
        for class in sqcpp_from_gcpp(table).class_ids() {
            for w in class.windows(2) {
                judgements.push((Element::from_id(scheme, w[0]), Element::from_id(scheme, w[1])));
            }
        }
        QcppProgram {
            zero_set,
            judgements,
            ..Default::default()
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Status {
    Consistent,
    Inconsistent,
    ZeroLeak,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Consistent => "consistent",
            Status::Inconsistent => "inconsistent",
            Status::ZeroLeak => "zero_leak",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One pass of the engine. A run repeats its stage list until nothing
/// changes; the fixpoint does not depend on the order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Stage {
    Judgements,
    Order,
    CiAssumptions,
    CrossMultiplication,
    FullSqcpp,
    ConditionalCoherence,
}

impl Stage {
    pub const DEFAULT: [Stage; 6] = [
        Stage::Judgements,
        Stage::CiAssumptions,
        Stage::Order,
        Stage::FullSqcpp,
        Stage::CrossMultiplication,
        Stage::ConditionalCoherence,
    ];
}

#[derive(Clone, Debug)]
pub struct Inference {
    pub sqcpp: Sqcpp,
    pub status: Status,
    /// The declared zeros closed under SQCPP axiom (i).
    pub zero_set: Vec<Assignment>,
    /// For a leak, the element that was forced into the wrong class.
    pub leak: Option<Element>,
    pub rounds: usize,
}

pub fn infer(p: &QcppProgram, scheme: &Scheme) -> Result<Inference> {
    infer_with_stages(p, scheme, &Stage::DEFAULT)
}

/// [`infer`] with an explicit stage order.
pub fn infer_with_stages(p: &QcppProgram, scheme: &Scheme, stages: &[Stage]) -> Result<Inference> {
    let n = checked_atom_count(scheme)?;
    let all = scheme.all();
    for a in &p.zero_set {
        if !a.scope().is_subset(all) {
            return Err(Error::InvalidAssignment("zero-set assignment outside the scheme".into()));
        }
    }
    for ci in &p.ci_assumptions {
        let t = Triple::new(ci.triple.x, ci.triple.z, ci.triple.y)?;
        if !t.vars().is_subset(all) {
            return Err(Error::UnknownVariable(format!("{:?}", t.vars().difference(all))));
        }
    }
    let zero = zero_closure(scheme, &p.zero_set);
    let mut e = Engine {
        scheme,
        p,
        zero: &zero,
        uf: UnionFind::new(n + 2),
        zero_id: n,
        inf_id: n + 1,
    };
    e.seed();
    let mut rounds = 0;
    let mut status = Status::Consistent;
    let mut leak = None;
    'run: loop {
        rounds += 1;
        let mut changed = false;
        for &stage in stages {
            changed |= e.run(stage);
            if e.uf.same(e.zero_id, e.inf_id) {
                status = Status::Inconsistent;
                break 'run;
            }
            if let Some(id) = e.leak() {
                status = Status::ZeroLeak;
                leak = Some(Element::from_id(scheme, id));
                break 'run;
            }
        }
        if !changed {
            break;
        }
    }
    let mut zero_set: Vec<Assignment> = (0..n)
        .filter(|&i| zero[i])
        .map(|i| scheme.atom_at(i).left().clone())
        .collect();
    zero_set.sort_by_key(|a| (a.scope(), scheme.local_index(a)));
    Ok(Inference {
        sqcpp: Sqcpp::from_union_find(scheme.clone(), &mut e.uf),
        status,
        zero_set,
        leak,
        rounds,
    })
}

/// Zero flags by atom id (meaningful for unconditional atoms), closed under
/// `x ≈ 0 ⟺ xy ≈ 0 for all y`.
fn zero_closure(scheme: &Scheme, declared: &[Assignment]) -> Vec<bool> {
    let n = scheme.atom_count().expect("checked by caller");
    let offs = scheme.offsets();
    let mut zero = vec![false; n];
    for a in declared {
        zero[offs.left[a.scope().bits() as usize][scheme.local_index(a)]] = true;
    }
    let all = scheme.all();
    let mut changed = true;
    while changed {
        changed = false;
        for xv in all.subsets() {
            for &xo in &offs.left[xv.bits() as usize] {
                for v in all.difference(xv).iter() {
                    let ext = &offs.left[VarSet::singleton(v).bits() as usize];
                    if zero[xo] {
                        for &vo in ext {
                            if !zero[xo + vo] {
                                zero[xo + vo] = true;
                                changed = true;
                            }
                        }
                    } else if ext.iter().all(|&vo| zero[xo + vo]) {
                        zero[xo] = true;
                        changed = true;
                    }
                }
            }
        }
    }
    zero
}

struct Engine<'a> {
    scheme: &'a Scheme,
    p: &'a QcppProgram,
    zero: &'a [bool],
    uf: UnionFind,
    zero_id: usize,
    inf_id: usize,
}

impl Engine<'_> {
    /// For every atom id, the unconditional ids of `y` and `xy` (`⊤` is 0).
    fn for_each_atom(&self, mut f: impl FnMut(usize, usize, usize)) {
        let offs = self.scheme.offsets();
        let all = self.scheme.all();
        for xv in all.subsets() {
            for yv in all.difference(xv).subsets() {
                let lx = &offs.left[xv.bits() as usize];
                let (ly, gy) = (&offs.left[yv.bits() as usize], &offs.given[yv.bits() as usize]);
                for &xo in lx {
                    for (&lyo, &gyo) in ly.iter().zip(gy) {
                        f(xo + gyo, lyo, xo + lyo);
                    }
                }
            }
        }
    }

    /// Declared zeros join `0`; conditionals on zeros join `∞`.
    fn seed(&mut self) {
        let mut pairs = Vec::new();
        self.for_each_atom(|atom, y, _| {
            if y == 0 && self.zero[atom] {
                pairs.push((atom, self.zero_id));
            }
            if self.zero[y] {
                pairs.push((atom, self.inf_id));
            }
        });
        for (a, b) in pairs {
            self.uf.union(a, b);
        }
    }

    fn run(&mut self, stage: Stage) -> bool {
        let rules = &self.p.rules;
        match stage {
            Stage::Judgements => {
                let ids: Vec<(usize, usize)> = self
                    .p
                    .judgements
                    .iter()
                    .map(|(a, b)| (a.id(self.scheme), b.id(self.scheme)))
                    .collect();
                self.merge_all(ids)
            }
            Stage::Order => self.order(),
            Stage::CiAssumptions => self.ci(),
            Stage::CrossMultiplication if rules.contains(&Rule::CrossMultiplication) => self.cross(),
            Stage::FullSqcpp if rules.contains(&Rule::FullSqcpp) => {
                let mut pairs = Vec::new();
                self.for_each_atom(|atom, y, xy| {
                    if self.zero[xy] && !self.zero[y] {
                        pairs.push((atom, self.zero_id));
                    }
                });
                self.merge_all(pairs)
            }
            Stage::ConditionalCoherence if rules.contains(&Rule::ConditionalCoherence) => self.coherence(),
            _ => false,
        }
    }

    fn merge_all(&mut self, pairs: impl IntoIterator<Item = (usize, usize)>) -> bool {
        let mut changed = false;
        for (a, b) in pairs {
            changed |= self.uf.union(a, b);
        }
        changed
    }

    /// Merges the strongly connected classes of the order statements.
    fn order(&mut self) -> bool {
        let mut edges: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        let ord: Vec<(usize, usize)> = self
            .p
            .order_judgements
            .iter()
            .map(|(a, b)| (a.id(self.scheme), b.id(self.scheme)))
            .collect();
        for (a, b) in ord {
            let (ra, rb) = (self.uf.find(a), self.uf.find(b));
            edges.entry(ra).or_default().push(rb);
        }
        if self.p.rules.contains(&Rule::ZeroMinimum) {
            let z = self.uf.find(self.zero_id);
            let mut targets: Vec<usize> = (0..self.zero_id).map(|i| self.uf.find(i)).collect();
            targets.sort_unstable();
            targets.dedup();
            edges.entry(z).or_default().extend(targets);
        }
        if edges.is_empty() {
            return false;
        }
        let pairs = mutual_pairs(&reachability(&edges));
        self.merge_all(pairs)
    }

    fn ci(&mut self) -> bool {
        let offs = self.scheme.offsets();
        let mut pairs = Vec::new();
        for ci in &self.p.ci_assumptions {
            let Triple { x, z, y } = ci.triple;
            let lx = &offs.left[x.bits() as usize];
            let (ly, gy) = (&offs.left[y.bits() as usize], &offs.given[y.bits() as usize]);
            let (lz, gz) = (&offs.left[z.bits() as usize], &offs.given[z.bits() as usize]);
            for (&lzo, &gzo) in lz.iter().zip(gz) {
                let possible: Vec<usize> = ly
                    .iter()
                    .zip(gy)
                    .filter(|(&lyo, _)| !self.zero[lyo + lzo])
                    .map(|(_, &gyo)| gyo)
                    .collect();
                let Some(&first) = possible.first() else { continue };
                for &xo in lx {
                    for &gyo in &possible[1..] {
                        pairs.push((xo + first + gzo, xo + gyo + gzo));
                    }
                    if ci.form == CiForm::I {
                        pairs.push((xo + first + gzo, xo + gzo));
                    }
                }
            }
        }
        self.merge_all(pairs)
    }

    fn cross(&mut self) -> bool {
        let mut changed = false;
        let zero = self.zero;
        let uf = &mut self.uf;
        for_each_cross(self.scheme, |[xyz, xz_z, yxz, yz, xz]| {
            if !zero[xz] && uf.same(xyz, xz_z) {
                changed |= uf.union(yxz, yz);
            }
            true
        });
        changed
    }

    fn coherence(&mut self) -> bool {
        let offs = self.scheme.offsets();
        let all = self.scheme.all();
        let mut changed = false;
        for xv in all.subsets() {
            for yv in all.difference(xv).subsets() {
                if yv.is_empty() {
                    continue;
                }
                for zv in all.difference(xv.union(yv)).subsets() {
                    let lx = &offs.left[xv.bits() as usize];
                    let (ly, gy) = (&offs.left[yv.bits() as usize], &offs.given[yv.bits() as usize]);
                    let (lz, gz) = (&offs.left[zv.bits() as usize], &offs.given[zv.bits() as usize]);
                    for (&lzo, &gzo) in lz.iter().zip(gz) {
                        for &xo in lx {
                            let mut class = None;
                            let mut constant = true;
                            for (&lyo, &gyo) in ly.iter().zip(gy) {
                                if self.zero[lyo + lzo] {
                                    continue;
                                }
                                let c = self.uf.find(xo + gyo + gzo);
                                match class {
                                    None => class = Some(c),
                                    Some(c0) if c0 != c => {
                                        constant = false;
                                        break;
                                    }
                                    _ => {}
                                }
                            }
                            if let (Some(c), true) = (class, constant) {
                                changed |= self.uf.union(c, xo + gzo);
                            }
                        }
                    }
                }
            }
        }
        changed
    }

    /// An atom whose class contradicts the fixed zero set.
    fn leak(&mut self) -> Option<usize> {
        let zr = self.uf.find(self.zero_id);
        let ir = self.uf.find(self.inf_id);
        let full = self.p.rules.contains(&Rule::FullSqcpp);
        let mut found = None;
        let mut roots = vec![0usize; self.zero_id];
        for (i, r) in roots.iter_mut().enumerate() {
            *r = self.uf.find(i);
        }
        self.for_each_atom(|atom, y, xy| {
            if found.is_some() {
                return;
            }
            let r = roots[atom];
            let bad = (y == 0 && r == zr && !self.zero[atom])
                || (r == ir && !self.zero[y])
                || (full && r == zr && !self.zero[xy]);
            if bad {
                found = Some(atom);
            }
        });
        found
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::model::CondAtom;

    #[test]
    fn empty_program_is_identity() {
        let s = fixtures::markov_chain_scheme();
        let r = infer(&QcppProgram::default(), &s).unwrap();
        assert_eq!(r.status, Status::Consistent);
        assert_eq!(r.sqcpp, Sqcpp::identity(&s).unwrap());
    }

    #[test]
    fn encoded_fixture_is_reproduced() {
        for t in [fixtures::markov_chain_probability(), fixtures::diagonal_probability(), fixtures::kappa_table()] {
            let mut p = QcppProgram::from_table(&t);
            let r = infer(&p, t.scheme()).unwrap();
            assert_eq!(r.status, Status::Consistent);
            assert_eq!(r.sqcpp, sqcpp_from_gcpp(&t));
            p.rules = [Rule::CrossMultiplication, Rule::FullSqcpp, Rule::ConditionalCoherence].into();
            let r = infer(&p, t.scheme()).unwrap();
            assert_eq!(r.status, Status::Consistent);
            assert_eq!(r.sqcpp, sqcpp_from_gcpp(&t));
        }
    }

    #[test]
    fn declaring_a_new_zero_leaks() {
        let s = fixtures::markov_chain_scheme();
        let a0 = CondAtom::plain(Assignment::from_names(&s, &[("A", "0")]).unwrap());
        let p = QcppProgram {
            judgements: vec![(Element::Atom(a0.clone()), Element::Zero)],
            ..Default::default()
        };
        let r = infer(&p, &s).unwrap();
        assert_eq!(r.status, Status::ZeroLeak);
        assert_eq!(r.leak, Some(Element::Atom(a0)));
    }

    #[test]
    fn zero_closure_goes_both_ways() {
        let s = Scheme::new(vec![("A", vec!["0", "1"]), ("B", vec!["0", "1"])]).unwrap();
        let p = QcppProgram {
            zero_set: vec![
                Assignment::from_names(&s, &[("A", "0"), ("B", "0")]).unwrap(),
                Assignment::from_names(&s, &[("A", "0"), ("B", "1")]).unwrap(),
                Assignment::from_names(&s, &[("B", "1")]).unwrap(),
            ],
            ..Default::default()
        };
        let r = infer(&p, &s).unwrap();
        assert_eq!(r.status, Status::Consistent);
        let keys: Vec<String> = r.zero_set.iter().map(|a| s.assignment_key(a)).collect();
        assert_eq!(keys, ["A=0", "B=1", "A=0,B=0", "A=0,B=1", "A=1,B=1"]);
    }

    #[test]
    fn zero_top_is_inconsistent() {
        let s = Scheme::new(vec![("A", vec!["0", "1"])]).unwrap();
        let p = QcppProgram {
            zero_set: vec![Assignment::top()],
            ..Default::default()
        };
        assert_eq!(infer(&p, &s).unwrap().status, Status::Inconsistent);
    }

    #[test]
    fn ci_assumption_merges_conditionals() {
        let s = fixtures::markov_chain_scheme();
        let set = |n: &[&str]| s.varset(n).unwrap();
        let p = QcppProgram {
            ci_assumptions: vec![CiAssumption {
                triple: Triple::new(set(&["A"]), set(&["B"]), set(&["C"])).unwrap(),
                form: CiForm::I,
            }],
            ..Default::default()
        };
        let r = infer(&p, &s).unwrap();
        let atom = |l: &[(&str, &str)], g: &[(&str, &str)]| {
            Element::Atom(CondAtom::new(Assignment::from_names(&s, l).unwrap(), Assignment::from_names(&s, g).unwrap()).unwrap())
        };
        assert!(r.sqcpp.same(&atom(&[("A", "0")], &[("B", "1"), ("C", "0")]), &atom(&[("A", "0")], &[("B", "1")])));
        assert!(!r.sqcpp.same(&atom(&[("A", "0")], &[("B", "1")]), &atom(&[("A", "0")], &[("B", "0")])));
    }

    #[test]
    fn zero_minimum_collapses_atoms_below_zero() {
        let s = Scheme::new(vec![("A", vec!["0", "1"])]).unwrap();
        let a1 = Element::Atom(CondAtom::plain(Assignment::from_names(&s, &[("A", "1")]).unwrap()));
        let p = QcppProgram {
            zero_set: vec![],
            order_judgements: vec![(a1.clone(), Element::Zero)],
            rules: [Rule::ZeroMinimum].into(),
            ..Default::default()
        };
        let r = infer(&p, &s).unwrap();
        assert_eq!(r.status, Status::ZeroLeak);
        assert_eq!(r.leak, Some(a1));
    }
}
