use std::fmt;

use crate::error::{Error, Result};
use crate::model::{
    checked_atom_count, fullness_witness, gcpp_violations, CondAtom, GcppTable, GcppViolation, LabelView, MeasureKind,
    Plaus, Scheme,
};
use crate::union_find::UnionFind;

/// A member of `U* ∪ {0, ∞}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Element {
    Zero,
    Inf,
    Atom(CondAtom),
}

impl Element {
    /// Dense id: atoms by [`Scheme::atom_index`], then `0`, then `∞`.
    pub fn id(&self, scheme: &Scheme) -> usize {
        let n = scheme.atom_count().expect("scheme fits in memory");
        match self {
            Element::Atom(a) => scheme.atom_index(a),
            Element::Zero => n,
            Element::Inf => n + 1,
        }
    }

    pub fn from_id(scheme: &Scheme, id: usize) -> Element {
        let n = scheme.atom_count().expect("scheme fits in memory");
        match id {
            i if i < n => Element::Atom(scheme.atom_at(i)),
            i if i == n => Element::Zero,
            _ => Element::Inf,
        }
    }

    /// `zero`, `inf` (or `undef`), or an atom key such as `A=0|B=1`.
    pub fn parse(scheme: &Scheme, s: &str) -> Result<Element> {
        match s.trim() {
            "zero" | "0" => Ok(Element::Zero),
            "inf" | "undef" | "∞" => Ok(Element::Inf),
            key => scheme.parse_atom(key).map(Element::Atom),
        }
    }

    pub fn key(&self, scheme: &Scheme) -> String {
        match self {
            Element::Zero => "zero".into(),
            Element::Inf => "inf".into(),
            Element::Atom(a) => scheme.atom_key(a),
        }
    }
}

/// An equivalence relation on `U* ∪ {0, ∞}`.
///
/// Stored canonically: every element maps to the smallest id in its class,
/// so two values are equal exactly when the partitions coincide.
#[derive(Clone, PartialEq, Eq)]
pub struct Sqcpp {
    scheme: Scheme,
    rep: Vec<u32>,
}

impl Sqcpp {
    /// The identity relation.
    pub fn identity(scheme: &Scheme) -> Result<Self> {
        let n = checked_atom_count(scheme)?;
        Ok(Sqcpp::from_union_find(scheme.clone(), &mut UnionFind::new(n + 2)))
    }

    /// The least equivalence containing `pairs`.
    pub fn from_pairs(scheme: &Scheme, pairs: impl IntoIterator<Item = (Element, Element)>) -> Result<Self> {
        let n = checked_atom_count(scheme)?;
        let mut uf = UnionFind::new(n + 2);
        for (a, b) in pairs {
            uf.union(a.id(scheme), b.id(scheme));
        }
        Ok(Sqcpp::from_union_find(scheme.clone(), &mut uf))
    }

    pub(crate) fn from_union_find(scheme: Scheme, uf: &mut UnionFind) -> Self {
        let rep = uf.labels().into_iter().map(|r| r as u32).collect();
        Sqcpp { scheme, rep }
    }

    pub fn scheme(&self) -> &Scheme {
        &self.scheme
    }

    fn atoms(&self) -> usize {
        self.rep.len() - 2
    }

    pub fn same(&self, a: &Element, b: &Element) -> bool {
        self.rep[a.id(&self.scheme)] == self.rep[b.id(&self.scheme)]
    }

    /// Smallest element id in the class of `id`.
    pub fn representative(&self, id: usize) -> usize {
        self.rep[id] as usize
    }

    /// `0 ≉ ∞`.
    pub fn is_consistent(&self) -> bool {
        let n = self.atoms();
        self.rep[n] != self.rep[n + 1]
    }

    /// Classes by element id, ordered by their smallest member.
    pub fn class_ids(&self) -> Vec<Vec<usize>> {
        let mut slot = vec![usize::MAX; self.rep.len()];
        let mut out: Vec<Vec<usize>> = Vec::new();
        for (id, &r) in self.rep.iter().enumerate() {
            let r = r as usize;
            if slot[r] == usize::MAX {
                slot[r] = out.len();
                out.push(Vec::new());
            }
            out[slot[r]].push(id);
        }
        out
    }

    pub fn classes(&self) -> Vec<Vec<Element>> {
        self.class_ids()
            .into_iter()
            .map(|c| c.into_iter().map(|id| Element::from_id(&self.scheme, id)).collect())
            .collect()
    }

    pub(crate) fn view(&self) -> LabelView<'_> {
        let n = self.atoms();
        LabelView {
            scheme: &self.scheme,
            labels: &self.rep[..n],
            zero: self.rep[n],
            undef: self.rep[n + 1],
        }
    }
}

impl fmt::Debug for Sqcpp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut l = f.debug_list();
        for class in self.classes() {
            if class.len() > 1 {
                l.entry(&class.iter().map(|e| e.key(&self.scheme)).collect::<Vec<_>>());
            }
        }
        l.finish()
    }
}

/// `ψ ≈ φ ⟺ ρ(ψ) = ρ(φ)`, with `ρ(0) = 0` and `ρ(∞) = ∞`.
pub fn sqcpp_from_gcpp(table: &GcppTable) -> Sqcpp {
    let labels = table.labels();
    let n = labels.len();
    let mut first = vec![u32::MAX; n + 2];
    let mut rep = Vec::with_capacity(n + 2);
    // zero and undef take labels 0 and 1
    let all = labels.iter().copied().chain([0, 1]);
    for (id, l) in all.enumerate() {
        let slot = &mut first[l as usize];
        if *slot == u32::MAX {
            *slot = id as u32;
        }
        rep.push(*slot);
    }
    Sqcpp {
        scheme: table.scheme().clone(),
        rep,
    }
}

/// `ρ_≈`: every atom is valued by its class. Zero and `∞` classes become
/// `Plaus::Zero` and `Plaus::Undef`; other classes become `Class(rep)`.
pub fn gcpp_from_sqcpp(s: &Sqcpp) -> Result<GcppTable> {
    if !s.is_consistent() {
        return Err(Error::InconsistentSqcpp);
    }
    let view = s.view();
    let entries = view
        .labels
        .iter()
        .map(|&l| match l {
            l if l == view.zero => Plaus::Zero,
            l if l == view.undef => Plaus::Undef,
            l => Plaus::class(l as u64),
        })
        .collect();
    GcppTable::from_entries(s.scheme.clone(), MeasureKind::Opaque, entries)
}

/// Result of checking the SQCPP axioms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SqcppReport {
    pub violations: Vec<GcppViolation>,
    pub consistent: bool,
    /// `x|y ≈ 0 ⟺ xy ≈ 0 ∧ y ≉ 0` for every atom.
    pub full: bool,
}

impl SqcppReport {
    pub fn is_sqcpp(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn validate_sqcpp(s: &Sqcpp) -> SqcppReport {
    let view = s.view();
    SqcppReport {
        violations: gcpp_violations(view),
        consistent: s.is_consistent(),
        full: fullness_witness(view).is_none(),
    }
}

/// An instantiation of cross multiplication that fails: `xz ≉ 0` and
/// `x|yz ≈ x|z`, but `y|xz ≉ y|z`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrossViolation {
    pub premise: (CondAtom, CondAtom),
    pub conclusion: (CondAtom, CondAtom),
}

/// Calls `f(x|yz, x|z, y|xz, y|z, xz)` (dense ids) for every instantiation
/// of cross multiplication.
pub(crate) fn for_each_cross(scheme: &Scheme, mut f: impl FnMut([usize; 5]) -> bool) {
    let offs = scheme.offsets();
    let all = scheme.all();
    for xv in all.subsets() {
        for yv in all.difference(xv).subsets() {
            for zv in all.difference(xv.union(yv)).subsets() {
                let (lx, gx) = (&offs.left[xv.bits() as usize], &offs.given[xv.bits() as usize]);
                let (ly, gy) = (&offs.left[yv.bits() as usize], &offs.given[yv.bits() as usize]);
                let (lz, gz) = (&offs.left[zv.bits() as usize], &offs.given[zv.bits() as usize]);
                for (&lzo, &gzo) in lz.iter().zip(gz) {
                    for (&lxo, &gxo) in lx.iter().zip(gx) {
                        for (&lyo, &gyo) in ly.iter().zip(gy) {
                            let ids = [lxo + gyo + gzo, lxo + gzo, lyo + gxo + gzo, lyo + gzo, lxo + lzo];
                            if !f(ids) {
                                return;
                            }
                        }
                    }
                }
            }
        }
    }
}

/// `if xz ≉ 0 and xyz|yz ≈ xz|z then xyz|xz ≈ yz|z`, read through the
/// normalization `xy|y ↦ x|y`: if `x|yz ≈ x|z` then `y|xz ≈ y|z`.
pub fn check_cross_multiplication(s: &Sqcpp) -> Result<Option<CrossViolation>> {
    if !s.is_consistent() {
        return Err(Error::InconsistentSqcpp);
    }
    let view = s.view();
    if fullness_witness(view).is_some() {
        return Err(Error::NotFull);
    }
    let mut found = None;
    for_each_cross(&s.scheme, |[xyz, xz_z, yxz, yz, xz]| {
        if !view.is_zero(xz) && view.at(xyz) == view.at(xz_z) && view.at(yxz) != view.at(yz) {
            let a = |i| s.scheme.atom_at(i);
            found = Some(CrossViolation {
                premise: (a(xyz), a(xz_z)),
                conclusion: (a(yxz), a(yz)),
            });
            return false;
        }
        true
    });
    Ok(found)
}
