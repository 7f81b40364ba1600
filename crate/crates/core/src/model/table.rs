use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::OnceLock;

use super::plaus::Plaus;
use super::scheme::{Assignment, CondAtom, Scheme};
use super::varset::VarSet;
use crate::error::{Error, Result};

/// Which family of uncertainty measure a table belongs to. The kind decides
/// how payloads combine (see the `graph` module); the core axioms ignore it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MeasureKind {
    Probability,
    Possibility,
    Kappa,
    Consistency,
    Opaque,
}

impl MeasureKind {
    pub fn as_str(self) -> &'static str {
        match self {
            MeasureKind::Probability => "probability",
            MeasureKind::Possibility => "possibility",
            MeasureKind::Kappa => "kappa",
            MeasureKind::Consistency => "consistency",
            MeasureKind::Opaque => "gcpp",
        }
    }
}

impl fmt::Display for MeasureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Largest dense table the crate will allocate.
pub const MAX_TABLE_ATOMS: usize = 1 << 26;

/// A total map from the conditional atoms `U*` to plausibility values.
#[derive(Clone)]
pub struct GcppTable {
    scheme: Scheme,
    kind: MeasureKind,
    entries: Vec<Plaus>,
    labels: OnceLock<Vec<u32>>,
}

pub(crate) const ZERO_LABEL: u32 = 0;
pub(crate) const UNDEF_LABEL: u32 = 1;

/// Equality-class view of a valuation of `U*`: one label per dense atom
/// index plus the labels of the distinguished elements. Every equality-based
/// algorithm in the crate runs over this view, so a GCPP table and an SQCPP
/// partition are handled by the same code.
#[derive(Clone, Copy)]
pub(crate) struct LabelView<'a> {
    pub scheme: &'a Scheme,
    pub labels: &'a [u32],
    pub zero: u32,
    pub undef: u32,
}

impl LabelView<'_> {
    #[inline]
    pub fn at(&self, idx: usize) -> u32 {
        self.labels[idx]
    }

    #[inline]
    pub fn is_zero(&self, idx: usize) -> bool {
        self.labels[idx] == self.zero
    }

    #[inline]
    pub fn is_undef(&self, idx: usize) -> bool {
        self.labels[idx] == self.undef
    }
}

pub(crate) fn checked_atom_count(scheme: &Scheme) -> Result<usize> {
    match scheme.atom_count() {
        Some(n) if n <= MAX_TABLE_ATOMS => Ok(n),
        _ => Err(Error::TooLarge),
    }
}

impl GcppTable {
    /// Build a table by evaluating `f` on every atom.
    pub fn from_fn(scheme: Scheme, kind: MeasureKind, mut f: impl FnMut(&CondAtom) -> Plaus) -> Result<Self> {
        let n = checked_atom_count(&scheme)?;
        let entries = (0..n).map(|i| f(&scheme.atom_at(i))).collect();
        Ok(Self::new_unchecked(scheme, kind, entries))
    }

    /// Build from entries laid out by [`Scheme::atom_index`].
    pub fn from_entries(scheme: Scheme, kind: MeasureKind, entries: Vec<Plaus>) -> Result<Self> {
        let n = checked_atom_count(&scheme)?;
        if entries.len() != n {
            return Err(Error::WrongSize {
                expected: n,
                got: entries.len(),
            });
        }
        Ok(Self::new_unchecked(scheme, kind, entries))
    }

    /// Build from a sparse map; every atom of `U*` must be present.
    pub fn from_map(scheme: Scheme, kind: MeasureKind, mut map: HashMap<CondAtom, Plaus>) -> Result<Self> {
        checked_atom_count(&scheme)?;
        let mut entries = vec![Plaus::Undef; scheme.atom_count().unwrap()];
        for atom in scheme.enumerate_atoms() {
            match map.remove(&atom) {
                Some(p) => entries[scheme.atom_index(&atom)] = p,
                None => return Err(Error::MissingEntry(scheme.atom_key(&atom))),
            }
        }
        Ok(Self::new_unchecked(scheme, kind, entries))
    }

    pub(crate) fn new_unchecked(scheme: Scheme, kind: MeasureKind, entries: Vec<Plaus>) -> Self {
        GcppTable {
            scheme,
            kind,
            entries,
            labels: OnceLock::new(),
        }
    }

    pub fn scheme(&self) -> &Scheme {
        &self.scheme
    }

    pub fn kind(&self) -> MeasureKind {
        self.kind
    }

    /// Same entries under a different kind tag.
    pub fn with_kind(&self, kind: MeasureKind) -> GcppTable {
        GcppTable::new_unchecked(self.scheme.clone(), kind, self.entries.clone())
    }

    /// Entries in dense index order.
    pub fn entries(&self) -> &[Plaus] {
        &self.entries
    }

    pub fn get(&self, atom: &CondAtom) -> &Plaus {
        &self.entries[self.scheme.atom_index(atom)]
    }

    /// `ρ(x)` for an unconditional assignment.
    pub fn value_of(&self, x: &Assignment) -> &Plaus {
        self.get(&CondAtom::plain(x.clone()))
    }

    pub fn top(&self) -> &Plaus {
        &self.entries[0]
    }

    /// `(atom, value)` pairs in canonical atom order.
    pub fn iter_canonical(&self) -> impl Iterator<Item = (CondAtom, &Plaus)> + '_ {
        self.scheme.enumerate_atoms().map(move |a| {
            let v = &self.entries[self.scheme.atom_index(&a)];
            (a, v)
        })
    }

    /// Values on `U̲` in lexicographic assignment order.
    pub fn joint(&self) -> Vec<Plaus> {
        let offs = &self.scheme.offsets().left[self.scheme.all().bits() as usize];
        offs.iter().map(|&i| self.entries[i].clone()).collect()
    }

    /// Interned equality labels; `Zero` is label 0 and `Undef` label 1.
    pub(crate) fn labels(&self) -> &[u32] {
        self.labels.get_or_init(|| {
            let mut ids: HashMap<&Plaus, u32> = HashMap::new();
            let mut next = 2;
            self.entries
                .iter()
                .map(|p| match p {
                    Plaus::Zero => ZERO_LABEL,
                    Plaus::Undef => UNDEF_LABEL,
                    v => *ids.entry(v).or_insert_with(|| {
                        next += 1;
                        next - 1
                    }),
                })
                .collect()
        })
    }

    pub(crate) fn view(&self) -> LabelView<'_> {
        LabelView {
            scheme: &self.scheme,
            labels: self.labels(),
            zero: ZERO_LABEL,
            undef: UNDEF_LABEL,
        }
    }

    /// Every violation of the GCPP axioms. Empty iff the table is a GCPP.
    pub fn validate(&self) -> Vec<GcppViolation> {
        gcpp_violations(self.view())
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }

    /// Full GCPP test: `ρ(x|y) = 0 ⇔ ρ(xy) = 0 ∧ ρ(y) ≠ 0` for every atom.
    pub fn is_full(&self) -> bool {
        fullness_witness(self.view()).is_none()
    }

    /// First atom (dense order) breaking the fullness biconditional.
    pub fn fullness_witness(&self) -> Option<CondAtom> {
        fullness_witness(self.view()).map(|i| self.scheme.atom_at(i))
    }

    /// `ρ_z`, the table over `U \ Z` with `ρ_z(x|y) = ρ(x|yz)`.
    pub fn condition(&self, z: &Assignment) -> Result<GcppTable> {
        if !z.scope().is_subset(self.scheme.all()) {
            return Err(Error::InvalidAssignment("conditioning assignment outside the scheme".into()));
        }
        if self.value_of(z).is_zero() {
            return Err(Error::ConditionOnImpossible);
        }
        let (sub, map) = self.scheme.sub_scheme(self.scheme.all().difference(z.scope()));
        let remap = |a: &Assignment| -> Assignment {
            let scope = VarSet::from_indices(a.scope().iter().map(|v| map[v]));
            Assignment::new(&self.scheme, scope, a.values().to_vec()).expect("remapped assignment is valid")
        };
        let n = checked_atom_count(&sub)?;
        let entries = (0..n)
            .map(|j| {
                let atom = sub.atom_at(j);
                let left = remap(atom.left());
                let given = remap(atom.given()).join(z).expect("disjoint by construction");
                self.get(&CondAtom { left, given }).clone()
            })
            .collect();
        Ok(GcppTable::new_unchecked(sub, self.kind, entries))
    }

    /// `ρ^{X|Y}`: the entries on atoms with scopes exactly `(X, Y)`.
    pub fn restrict(&self, x: VarSet, y: VarSet) -> Result<BTreeMap<CondAtom, Plaus>> {
        if !x.is_disjoint(y) {
            return Err(Error::OverlappingScopes);
        }
        if !x.union(y).is_subset(self.scheme.all()) {
            return Err(Error::InvalidAssignment("scope outside the scheme".into()));
        }
        let mut out = BTreeMap::new();
        for left in self.scheme.assignments(x) {
            for given in self.scheme.assignments(y) {
                let atom = CondAtom {
                    left: left.clone(),
                    given,
                };
                let v = self.get(&atom).clone();
                out.insert(atom, v);
            }
        }
        Ok(out)
    }

    /// True when `ρ(u) ≠ 0` for every `u ∈ U̲`.
    pub fn is_nonzero_on_joint(&self) -> bool {
        let offs = &self.scheme.offsets().left[self.scheme.all().bits() as usize];
        offs.iter().all(|&i| !self.entries[i].is_zero())
    }
}

impl PartialEq for GcppTable {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind && self.scheme == other.scheme && self.entries == other.entries
    }
}

impl Eq for GcppTable {}

impl fmt::Debug for GcppTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut m = f.debug_map();
        for (atom, v) in self.iter_canonical() {
            m.entry(&self.scheme.atom_key(&atom), v);
        }
        m.finish()
    }
}

/// A violated instance of the GCPP axioms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GcppViolation {
    /// `ρ(⊤)` is zero or undefined.
    DegenerateTop { undefined: bool },
    /// Clause (i): `ρ(x) = 0` disagrees with `ρ(xy) = 0 for all y ∈ Y̲`.
    ZeroExtension {
        x: Assignment,
        extension: VarSet,
        marginal_zero: bool,
    },
    /// Clause (ii): `ρ(x|y) = ∞` disagrees with `ρ(y) = 0`.
    UndefinedCondition { atom: CondAtom, condition_zero: bool },
}

pub(crate) fn gcpp_violations(view: LabelView<'_>) -> Vec<GcppViolation> {
    let scheme = view.scheme;
    let offs = scheme.offsets();
    let all = scheme.all();
    let mut out = Vec::new();
    if view.is_zero(0) || view.is_undef(0) {
        out.push(GcppViolation::DegenerateTop {
            undefined: view.is_undef(0),
        });
    }
    for (xs, ys) in scheme.scope_pairs() {
        if ys.is_empty() {
            continue;
        }
        let lx = &offs.left[xs.bits() as usize];
        let ly = &offs.left[ys.bits() as usize];
        for (xi, &xo) in lx.iter().enumerate() {
            let marginal_zero = view.is_zero(xo);
            let all_zero = ly.iter().all(|&yo| view.is_zero(xo + yo));
            if marginal_zero != all_zero {
                out.push(GcppViolation::ZeroExtension {
                    x: scheme.assignment_at(xs, xi),
                    extension: ys,
                    marginal_zero,
                });
            }
        }
    }
    for xs in all.subsets() {
        for ys in all.difference(xs).subsets() {
            let lx = &offs.left[xs.bits() as usize];
            let gy = &offs.given[ys.bits() as usize];
            let ly = &offs.left[ys.bits() as usize];
            for &xo in lx {
                for (&go, &yo) in gy.iter().zip(ly) {
                    let undef = view.is_undef(xo + go);
                    let cond_zero = view.is_zero(yo);
                    if undef != cond_zero {
                        out.push(GcppViolation::UndefinedCondition {
                            atom: scheme.atom_at(xo + go),
                            condition_zero: cond_zero,
                        });
                    }
                }
            }
        }
    }
    out
}

pub(crate) fn fullness_witness(view: LabelView<'_>) -> Option<usize> {
    let scheme = view.scheme;
    let offs = scheme.offsets();
    let all = scheme.all();
    for xs in all.subsets() {
        for ys in all.difference(xs).subsets() {
            let lx = &offs.left[xs.bits() as usize];
            let gy = &offs.given[ys.bits() as usize];
            let ly = &offs.left[ys.bits() as usize];
            for &xo in lx {
                for (&go, &yo) in gy.iter().zip(ly) {
                    let lhs = view.is_zero(xo + go);
                    let rhs = view.is_zero(xo + yo) && !view.is_zero(yo);
                    if lhs != rhs {
                        return Some(xo + go);
                    }
                }
            }
        }
    }
    None
}
