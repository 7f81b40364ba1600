//! Diagnostics for the sufficient conditions under which extracted
//! independence structures obey the graphoid axioms.

use std::collections::hash_map::Entry;
use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::independence::{
    extract_i, first_violation, holds_i_prime_view, holds_i_view, structure_from, Axiom,
    AxiomViolation,
};
use crate::model::{fullness_witness, Assignment, GcppTable, LabelView, Plaus, VarSet};

/// A failure of conditional coherence: `ρ(x|yz)` takes the single value
/// `constant` over every possible `y`, but `ρ(x|z)` is `marginal`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoherenceViolation {
    pub x_vars: VarSet,
    pub y_vars: VarSet,
    pub z_vars: VarSet,
    pub x: Assignment,
    pub z: Assignment,
    pub constant: Plaus,
    pub marginal: Plaus,
}

/// Calls `f(X, Y, Z)` for every pairwise-disjoint triple of subsets.
fn for_each_disjoint(all: VarSet, mut f: impl FnMut(VarSet, VarSet, VarSet)) {
    for x in all.subsets() {
        for y in all.difference(x).subsets() {
            for z in all.difference(x.union(y)).subsets() {
                f(x, y, z);
            }
        }
    }
}

/// Violations of conditional coherence.
///
/// "Constant over `y`" ranges over the `y` with `ρ(yz) ≠ 0`: conditionals on
/// impossible `yz` are undefined and do not count as differing.
pub fn check_conditional_coherence(table: &GcppTable) -> Vec<CoherenceViolation> {
    let view = table.view();
    let scheme = table.scheme();
    let offs = scheme.offsets();
    let mut out = Vec::new();
    for_each_disjoint(scheme.all(), |xv, yv, zv| {
        if yv.is_empty() {
            return;
        }
        let lx = &offs.left[xv.bits() as usize];
        let (ly, gy) = (&offs.left[yv.bits() as usize], &offs.given[yv.bits() as usize]);
        let (lz, gz) = (&offs.left[zv.bits() as usize], &offs.given[zv.bits() as usize]);
        for (zi, (&lzo, &gzo)) in lz.iter().zip(gz).enumerate() {
            for (xi, &xo) in lx.iter().enumerate() {
                let mut constant: Option<u32> = None;
                let mut varies = false;
                for (&lyo, &gyo) in ly.iter().zip(gy) {
                    if view.is_zero(lyo + lzo) {
                        continue;
                    }
                    let v = view.at(xo + gyo + gzo);
                    match constant {
                        None => constant = Some(v),
                        Some(c) if c != v => {
                            varies = true;
                            break;
                        }
                        _ => {}
                    }
                }
                let (Some(c), false) = (constant, varies) else { continue };
                if view.at(xo + gzo) != c {
                    let witness_y = ly
                        .iter()
                        .zip(gy)
                        .find(|(&lyo, _)| !view.is_zero(lyo + lzo))
                        .map(|(_, &gyo)| gyo)
                        .expect("a possible y exists");
                    out.push(CoherenceViolation {
                        x_vars: xv,
                        y_vars: yv,
                        z_vars: zv,
                        x: scheme.assignment_at(xv, xi),
                        z: scheme.assignment_at(zv, zi),
                        constant: table.entries()[xo + witness_y + gzo].clone(),
                        marginal: table.entries()[xo + gzo].clone(),
                    });
                }
            }
        }
    });
    out
}

/// Weak conditional coherence: `I_ρ = I'_ρ`.
pub fn check_weak_cc(table: &GcppTable) -> bool {
    weak_cc_view(table.view())
}

fn weak_cc_view(view: LabelView<'_>) -> bool {
    structure_from(view, holds_i_view) == structure_from(view, holds_i_prime_view)
}

/// Two realized instances of a would-be combination `◇` that no function or
/// no cancellative function can satisfy.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CombineViolation {
    /// `a ◇ b` must equal two different values.
    NotFunctional {
        z: Assignment,
        args: (Plaus, Plaus),
        results: (Plaus, Plaus),
    },
    /// `a ◇ b = c ◇ a` with `a ≠ 0` but `b ≠ c`.
    NotCancellative {
        z: Assignment,
        a: Plaus,
        b: Plaus,
        c: Plaus,
    },
}

/// Outcome of the search for a combination operator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CombineReport {
    /// First per-`z` failure, if any.
    pub violation: Option<CombineViolation>,
    /// Whether the instances from all `(Z, z)` fit one single function.
    pub globally_functional: bool,
}

impl CombineReport {
    pub fn holds(&self) -> bool {
        self.violation.is_none()
    }
}

type Instance = (u32, u32, u32);

/// Instances `(ρ_z(x|y), ρ_z(y)) ↦ ρ_z(xy)` for one `z`, by atom index.
fn combine_instances(view: LabelView<'_>, zv: VarSet, gzo: usize, mut f: impl FnMut(Instance, [usize; 3])) {
    let offs = view.scheme.offsets();
    let rest = view.scheme.all().difference(zv);
    for xv in rest.subsets() {
        for yv in rest.difference(xv).subsets() {
            let lx = &offs.left[xv.bits() as usize];
            let (ly, gy) = (&offs.left[yv.bits() as usize], &offs.given[yv.bits() as usize]);
            for &xo in lx {
                for (&lyo, &gyo) in ly.iter().zip(gy) {
                    let idx = [xo + gyo + gzo, lyo + gzo, xo + lyo + gzo];
                    f((view.at(idx[0]), view.at(idx[1]), view.at(idx[2])), idx);
                }
            }
        }
    }
}

/// The hypothesis of the symmetry result for full GCPPs: for every `(Z, z)`
/// with `ρ(z) ≠ 0` the realized instances of `ρ_z(xy) = ρ_z(x|y) ◇ ρ_z(y)`
/// define a function, and that function is cancellative.
pub fn check_cancellation_combine(table: &GcppTable) -> Result<CombineReport> {
    if !table.is_full() {
        return Err(Error::NotFull);
    }
    let view = table.view();
    let scheme = table.scheme();
    let offs = scheme.offsets();
    let entry = |i: usize| table.entries()[i].clone();
    let mut global: HashMap<(u32, u32), u32> = HashMap::new();
    let mut globally_functional = true;
    let mut violation = None;
    for zv in scheme.all().subsets() {
        for (zi, (&lzo, &gzo)) in offs.left[zv.bits() as usize].iter().zip(&offs.given[zv.bits() as usize]).enumerate() {
            if view.is_zero(lzo) {
                continue;
            }
            let mut local: HashMap<(u32, u32), (u32, [usize; 3])> = HashMap::new();
            let mut local_bad: Option<CombineViolation> = None;
            combine_instances(view, zv, gzo, |(a, b, c), idx| {
                match global.entry((a, b)) {
                    Entry::Vacant(e) => {
                        e.insert(c);
                    }
                    Entry::Occupied(e) => globally_functional &= *e.get() == c,
                }
                match local.entry((a, b)) {
                    Entry::Vacant(e) => {
                        e.insert((c, idx));
                    }
                    Entry::Occupied(e) => {
                        let (c0, idx0) = *e.get();
                        if c0 != c && local_bad.is_none() {
                            local_bad = Some(CombineViolation::NotFunctional {
                                z: scheme.assignment_at(zv, zi),
                                args: (entry(idx[0]), entry(idx[1])),
                                results: (entry(idx0[2]), entry(idx[2])),
                            });
                        }
                    }
                }
            });
            if local_bad.is_none() {
                local_bad = cancellation_failure(view, &local, &entry, || scheme.assignment_at(zv, zi));
            }
            if violation.is_none() {
                violation = local_bad;
            }
        }
    }
    Ok(CombineReport {
        violation,
        globally_functional,
    })
}

/// Looks for `a ◇ b = r = c ◇ a` with `a ≠ 0`, `b ≠ c`.
fn cancellation_failure(
    view: LabelView<'_>,
    instances: &HashMap<(u32, u32), (u32, [usize; 3])>,
    entry: impl Fn(usize) -> Plaus,
    z: impl Fn() -> Assignment,
) -> Option<CombineViolation> {
    // (a, r) -> some b with a ◇ b = r, and the atom index holding b
    let mut by_left: HashMap<(u32, u32), Vec<(u32, usize)>> = HashMap::new();
    for (&(a, b), &(r, idx)) in instances {
        by_left.entry((a, r)).or_default().push((b, idx[1]));
    }
    let mut keys: Vec<_> = instances.iter().collect();
    keys.sort_by_key(|(k, (r, _))| (**k, *r));
    for (&(c, a), &(r, idx)) in keys {
        if a == view.zero {
            continue;
        }
        if let Some(bs) = by_left.get(&(a, r)) {
            if let Some(&(_, b_idx)) = bs.iter().find(|(b, _)| *b != c) {
                return Some(CombineViolation::NotCancellative {
                    z: z(),
                    a: entry(idx[1]),
                    b: entry(b_idx),
                    c: entry(idx[0]),
                });
            }
        }
    }
    None
}

/// The functional-dependency hypotheses on `ρ_x` for the reflected
/// `I'_ρ` to satisfy a graphoid axiom.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FdCondition {
    /// `ρ_x^{WY}` determines `ρ_x^Y` (marginalisation).
    M,
    /// `ρ_x^{WY}` determines `ρ_x^{W|Y}` (conditioning).
    C,
    /// `(ρ_x^{W|Y}, ρ_x^Y)` determines `ρ_x^{WY}`, ignoring `w|y` entries
    /// whose `ρ_x(y)` is zero.
    J,
    /// `(ρ_x^{W|Y}, ρ_x^{Y|W})` determines `ρ_x^{WY}`; requires a table
    /// that is non-zero on `U̲`.
    S,
}

impl FdCondition {
    pub const ALL: [FdCondition; 4] = [FdCondition::M, FdCondition::C, FdCondition::J, FdCondition::S];

    /// The axiom this condition secures for `(I'_ρ)^R`.
    pub fn axiom(self) -> Axiom {
        match self {
            FdCondition::M => Axiom::Decomposition,
            FdCondition::C => Axiom::WeakUnion,
            FdCondition::J => Axiom::Contraction,
            FdCondition::S => Axiom::Intersection,
        }
    }
}

impl fmt::Display for FdCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            FdCondition::M => "M",
            FdCondition::C => "C",
            FdCondition::J => "J",
            FdCondition::S => "S",
        };
        f.write_str(s)
    }
}

/// Two values of `x` with equal keys but different values.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DependencyViolation {
    pub condition: FdCondition,
    pub w: VarSet,
    pub y: VarSet,
    pub x_vars: VarSet,
    pub x1: Assignment,
    pub x2: Assignment,
}

/// Label used for masked entries; never produced by interning.
const MASKED: u32 = u32::MAX;

pub(crate) fn determines_view(view: LabelView<'_>, cond: FdCondition) -> Option<DependencyViolation> {
    let scheme = view.scheme;
    let offs = scheme.offsets();
    let mut found = None;
    let mut key = Vec::new();
    let mut value = Vec::new();
    for_each_disjoint(scheme.all(), |wv, yv, xv| {
        if found.is_some() {
            return;
        }
        let (lw, gw) = (&offs.left[wv.bits() as usize], &offs.given[wv.bits() as usize]);
        let (ly, gy) = (&offs.left[yv.bits() as usize], &offs.given[yv.bits() as usize]);
        let mut seen: HashMap<Vec<u32>, (Vec<u32>, usize)> = HashMap::new();
        for (xi, &gxo) in offs.given[xv.bits() as usize].iter().enumerate() {
            key.clear();
            value.clear();
            let joint = |out: &mut Vec<u32>| {
                for &wo in lw {
                    for &yo in ly {
                        out.push(view.at(wo + yo + gxo));
                    }
                }
            };
            match cond {
                FdCondition::M => {
                    joint(&mut key);
                    value.extend(ly.iter().map(|&yo| view.at(yo + gxo)));
                }
                FdCondition::C => {
                    joint(&mut key);
                    for &wo in lw {
                        value.extend(gy.iter().map(|&gyo| view.at(wo + gyo + gxo)));
                    }
                }
                FdCondition::J => {
                    for &wo in lw {
                        for (&yo, &gyo) in ly.iter().zip(gy) {
                            let masked = view.is_zero(yo + gxo);
                            key.push(if masked { MASKED } else { view.at(wo + gyo + gxo) });
                        }
                    }
                    key.extend(ly.iter().map(|&yo| view.at(yo + gxo)));
                    joint(&mut value);
                }
                FdCondition::S => {
                    for &wo in lw {
                        key.extend(gy.iter().map(|&gyo| view.at(wo + gyo + gxo)));
                    }
                    for &yo in ly {
                        key.extend(gw.iter().map(|&gwo| view.at(yo + gwo + gxo)));
                    }
                    joint(&mut value);
                }
            }
            match seen.entry(key.clone()) {
                Entry::Vacant(e) => {
                    e.insert((value.clone(), xi));
                }
                Entry::Occupied(e) => {
                    let (v0, x0) = e.get();
                    if *v0 != value {
                        found = Some(DependencyViolation {
                            condition: cond,
                            w: wv,
                            y: yv,
                            x_vars: xv,
                            x1: scheme.assignment_at(xv, *x0),
                            x2: scheme.assignment_at(xv, xi),
                        });
                        return;
                    }
                }
            }
        }
    });
    found
}

/// Decides whether a witnessing function for `cond` exists for every
/// disjoint `(W, Y, X)`, returning the first counterexample otherwise.
pub fn check_determines(table: &GcppTable, cond: FdCondition) -> Result<Option<DependencyViolation>> {
    if cond == FdCondition::S && !table.is_nonzero_on_joint() {
        return Err(Error::PreconditionUnmet("S-condition needs a table that is non-zero on every full assignment".into()));
    }
    Ok(determines_view(table.view(), cond))
}

/// `ρ(⊤|x) = ρ(⊤)` whenever `ρ(x) ≠ 0`; returns the first `x` breaking it.
pub fn check_top_condition(table: &GcppTable) -> Option<Assignment> {
    let view = table.view();
    let scheme = table.scheme();
    let offs = scheme.offsets();
    let top = view.at(0);
    for xv in scheme.all().subsets() {
        let (lx, gx) = (&offs.left[xv.bits() as usize], &offs.given[xv.bits() as usize]);
        for (xi, (&lxo, &gxo)) in lx.iter().zip(gx).enumerate() {
            if !view.is_zero(lxo) && view.at(gxo) != top {
                return Some(scheme.assignment_at(xv, xi));
            }
        }
    }
    None
}

/// What the combined hypotheses guarantee for `I^S_ρ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Tier {
    None,
    Semigraphoid,
    Graphoid,
}

impl Tier {
    pub fn as_str(self) -> &'static str {
        match self {
            Tier::None => "NONE",
            Tier::Semigraphoid => "SEMIGRAPHOID",
            Tier::Graphoid => "GRAPHOID",
        }
    }

    /// The axioms the tier promises.
    pub fn axioms(self) -> &'static [Axiom] {
        match self {
            Tier::None => &[],
            Tier::Semigraphoid => &Axiom::SEMIGRAPHOID,
            Tier::Graphoid => &Axiom::ALL,
        }
    }
}

impl fmt::Display for Tier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Which hypotheses hold, with witnesses for those that do not, and the
/// resulting guarantee for the symmetric part of `I_ρ`.
#[derive(Clone, Debug)]
pub struct SufficiencyReport {
    pub full: bool,
    pub weak_cc: bool,
    pub nonzero_on_joint: bool,
    /// First `x` with `ρ(x) ≠ 0` and `ρ(⊤|x) ≠ ρ(⊤)`.
    pub top_witness: Option<Assignment>,
    /// Counterexamples for M, C and J.
    pub m: Option<DependencyViolation>,
    pub c: Option<DependencyViolation>,
    pub j: Option<DependencyViolation>,
    /// `None` when the table has zeros on `U̲` and S is not applicable.
    pub s: Option<Option<DependencyViolation>>,
    pub tier: Tier,
    /// Violations of the promised axioms on `I^S_ρ`; empty unless the
    /// guarantee itself is broken.
    pub cross_check: Vec<AxiomViolation>,
}

impl SufficiencyReport {
    pub fn top_condition(&self) -> bool {
        self.top_witness.is_none()
    }

    pub fn holds(&self, cond: FdCondition) -> bool {
        match cond {
            FdCondition::M => self.m.is_none(),
            FdCondition::C => self.c.is_none(),
            FdCondition::J => self.j.is_none(),
            FdCondition::S => matches!(self.s, Some(None)),
        }
    }
}

/// Evaluates every hypothesis and cross-checks the claimed tier against the
/// axioms on the symmetric part of `I_ρ`.
pub fn sufficiency_report(table: &GcppTable) -> SufficiencyReport {
    let view = table.view();
    let full = fullness_witness(view).is_none();
    let nonzero_on_joint = table.is_nonzero_on_joint();
    let weak_cc = weak_cc_view(view);
    let top_witness = check_top_condition(table);
    let m = determines_view(view, FdCondition::M);
    let c = determines_view(view, FdCondition::C);
    let j = determines_view(view, FdCondition::J);
    let s = nonzero_on_joint.then(|| determines_view(view, FdCondition::S));
    let semi = weak_cc && top_witness.is_none() && m.is_none() && c.is_none() && full && j.is_none();
    let tier = match (semi, &s) {
        (true, Some(None)) => Tier::Graphoid,
        (true, _) => Tier::Semigraphoid,
        _ => Tier::None,
    };
    let sym = extract_i(table).symmetric_part();
    let cross_check = tier.axioms().iter().filter_map(|&a| first_violation(&sym, a)).collect();
    SufficiencyReport {
        full,
        weak_cc,
        nonzero_on_joint,
        top_witness,
        m,
        c,
        j,
        s,
        tier,
        cross_check,
    }
}
