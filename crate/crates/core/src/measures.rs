//! The four concrete GCPP families (probability, Dempster possibility, kappa
//! and consistency functions) and conversions between them.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::model::{checked_atom_count, CondAtom, GcppTable, MeasureKind, Payload, Plaus, Rank, Scheme};

/// Values of a joint on `U̲`, in lexicographic assignment order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum JointValues {
    Rational(Vec<BigRational>),
    Ranks(Vec<Rank>),
}

/// A joint function on `U̲` from which a full GCPP is generated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JointSpec {
    scheme: Scheme,
    kind: MeasureKind,
    values: JointValues,
}

impl JointSpec {
    /// Checks shape and value ranges. Normalization is checked when the joint
    /// is extended, not here.
    pub fn new(scheme: Scheme, kind: MeasureKind, values: JointValues) -> Result<Self> {
        let expected = scheme.assignment_count(scheme.all());
        let len = match &values {
            JointValues::Rational(v) => v.len(),
            JointValues::Ranks(v) => v.len(),
        };
        if len != expected {
            return Err(Error::InvalidJoint(format!("{len} values for {expected} assignments")));
        }
        match (kind, &values) {
            (MeasureKind::Probability | MeasureKind::Possibility, JointValues::Rational(v)) => {
                if v.iter().any(|r| r.is_negative()) {
                    return Err(Error::InvalidJoint("negative value".into()));
                }
            }
            (MeasureKind::Consistency, JointValues::Rational(v)) => {
                if v.iter().any(|r| !r.is_zero() && !r.is_one()) {
                    return Err(Error::InvalidJoint("consistency values must be 0 or 1".into()));
                }
            }
            (MeasureKind::Kappa, JointValues::Ranks(_)) => {}
            _ => {
                return Err(Error::InvalidJoint(format!("values do not match kind {kind}")));
            }
        }
        Ok(JointSpec { scheme, kind, values })
    }

    pub fn probability(scheme: Scheme, values: Vec<BigRational>) -> Result<Self> {
        Self::new(scheme, MeasureKind::Probability, JointValues::Rational(values))
    }

    pub fn possibility(scheme: Scheme, values: Vec<BigRational>) -> Result<Self> {
        Self::new(scheme, MeasureKind::Possibility, JointValues::Rational(values))
    }

    pub fn consistency(scheme: Scheme, support: Vec<bool>) -> Result<Self> {
        let values = support
            .into_iter()
            .map(|b| if b { BigRational::one() } else { BigRational::zero() })
            .collect();
        Self::new(scheme, MeasureKind::Consistency, JointValues::Rational(values))
    }

    pub fn kappa(scheme: Scheme, ranks: Vec<Rank>) -> Result<Self> {
        Self::new(scheme, MeasureKind::Kappa, JointValues::Ranks(ranks))
    }

    pub fn scheme(&self) -> &Scheme {
        &self.scheme
    }

    pub fn kind(&self) -> MeasureKind {
        self.kind
    }

    pub fn values(&self) -> &JointValues {
        &self.values
    }

    /// Rescale into normal form: divide by the sum (probability) or the
    /// maximum (possibility, consistency), or shift ranks so the minimum is 0.
    pub fn normalized(&self) -> Result<Self> {
        let values = match &self.values {
            JointValues::Rational(v) => {
                let scale = match self.kind {
                    MeasureKind::Probability => v.iter().fold(BigRational::zero(), |a, b| a + b),
                    _ => v.iter().max().cloned().unwrap_or_else(BigRational::zero),
                };
                if scale.is_zero() {
                    return Err(Error::NotNormalized {
                        kind: self.kind,
                        detail: "all values are zero".into(),
                    });
                }
                JointValues::Rational(v.iter().map(|r| r / &scale).collect())
            }
            JointValues::Ranks(v) => {
                let min = min_finite(v).ok_or_else(|| Error::NotNormalized {
                    kind: self.kind,
                    detail: "no finite rank".into(),
                })?;
                JointValues::Ranks(
                    v.iter()
                        .map(|r| match r {
                            Rank::Finite(k) => Rank::Finite(k - min),
                            Rank::Top => Rank::Top,
                        })
                        .collect(),
                )
            }
        };
        Ok(JointSpec {
            scheme: self.scheme.clone(),
            kind: self.kind,
            values,
        })
    }

    /// Extend with the rule matching the joint's kind.
    pub fn extend(&self) -> Result<GcppTable> {
        match self.kind {
            MeasureKind::Probability => extend_probability(self),
            MeasureKind::Possibility | MeasureKind::Consistency => extend_possibility(self),
            MeasureKind::Kappa => extend_kappa(self),
            MeasureKind::Opaque => unreachable!("JointSpec::new rejects opaque joints"),
        }
    }
}

fn min_finite(v: &[Rank]) -> Option<u64> {
    v.iter()
        .filter_map(|r| match r {
            Rank::Finite(k) => Some(*k),
            Rank::Top => None,
        })
        .min()
}

fn expect_kind(j: &JointSpec, kinds: &[MeasureKind]) -> Result<()> {
    if kinds.contains(&j.kind) {
        Ok(())
    } else {
        Err(Error::KindMismatch {
            expected: kinds[0],
            got: j.kind,
        })
    }
}

fn rationals(j: &JointSpec) -> &[BigRational] {
    match &j.values {
        JointValues::Rational(v) => v,
        JointValues::Ranks(_) => unreachable!("kind checked"),
    }
}

/// Marginals of a joint on every scope: `out[S][i]` is the fold of the joint
/// over all `u` whose projection onto `S` has lexicographic rank `i`.
fn marginals<V: Clone>(scheme: &Scheme, joint: &[V], fold: impl Fn(&V, &V) -> V) -> Vec<Vec<V>> {
    let n = scheme.len();
    let full: Vec<_> = scheme.assignments(scheme.all()).collect();
    let mut out = Vec::with_capacity(1 << n);
    for bits in 0..(1u32 << n) {
        let scope = crate::model::VarSet::from_bits(bits);
        let mut m: Vec<Option<V>> = vec![None; scheme.assignment_count(scope)];
        for (u, val) in full.iter().zip(joint) {
            let k = scheme.local_index(&u.project(scope));
            m[k] = Some(match &m[k] {
                None => val.clone(),
                Some(acc) => fold(acc, val),
            });
        }
        out.push(m.into_iter().map(|v| v.expect("every projection is hit")).collect());
    }
    out
}

/// Fill a dense table from marginals with `cond(m(xy), m(y))`.
fn extend_with<V: Clone>(
    scheme: &Scheme,
    kind: MeasureKind,
    joint: &[V],
    fold: impl Fn(&V, &V) -> V,
    cond: impl Fn(&V, &V) -> Plaus,
) -> Result<GcppTable> {
    let n = checked_atom_count(scheme)?;
    let m = marginals(scheme, joint, fold);
    let mut entries = vec![Plaus::Undef; n];
    for (xs, ys) in scheme.scope_pairs() {
        let xy = xs.union(ys);
        for (k, w) in scheme.assignments(xy).enumerate() {
            let y = w.project(ys);
            let yk = scheme.local_index(&y);
            let atom = CondAtom::new(w.project(xs), y).expect("disjoint scopes");
            entries[scheme.atom_index(&atom)] = cond(&m[xy.bits() as usize][k], &m[ys.bits() as usize][yk]);
        }
    }
    Ok(GcppTable::new_unchecked(scheme.clone(), kind, entries))
}

fn quotient(num: &BigRational, den: &BigRational) -> Plaus {
    if den.is_zero() {
        Plaus::Undef
    } else {
        Plaus::rational(num / den)
    }
}

/// Sum-marginals and quotient conditionals of a probability function on `U̲`.
pub fn extend_probability(j: &JointSpec) -> Result<GcppTable> {
    expect_kind(j, &[MeasureKind::Probability])?;
    let v = rationals(j);
    let sum = v.iter().fold(BigRational::zero(), |a, b| a + b);
    if !sum.is_one() {
        return Err(Error::NotNormalized {
            kind: j.kind,
            detail: format!("values sum to {sum}"),
        });
    }
    extend_with(&j.scheme, j.kind, v, |a, b| a + b, quotient)
}

/// Max-marginals and quotient conditionals (Dempster conditioning). Also
/// accepts 0/1 consistency joints.
pub fn extend_possibility(j: &JointSpec) -> Result<GcppTable> {
    expect_kind(j, &[MeasureKind::Possibility, MeasureKind::Consistency])?;
    let v = rationals(j);
    let max = v.iter().max().cloned().unwrap_or_else(BigRational::zero);
    if !max.is_one() {
        return Err(Error::NotNormalized {
            kind: j.kind,
            detail: format!("maximum value is {max}"),
        });
    }
    extend_with(&j.scheme, j.kind, v, |a, b| a.max(b).clone(), quotient)
}

/// Min-marginals and difference conditionals of a kappa function. The GCPP
/// zero is the rank `∞`; conditioning on rank `∞` is undefined.
pub fn extend_kappa(j: &JointSpec) -> Result<GcppTable> {
    expect_kind(j, &[MeasureKind::Kappa])?;
    let v = match &j.values {
        JointValues::Ranks(v) => v,
        JointValues::Rational(_) => unreachable!("kind checked"),
    };
    if min_finite(v) != Some(0) {
        return Err(Error::NotNormalized {
            kind: j.kind,
            detail: "minimum finite rank is not 0".into(),
        });
    }
    extend_with(
        &j.scheme,
        j.kind,
        v,
        |a, b| *a.min(b),
        |xy, y| match (xy, y) {
            (_, Rank::Top) => Plaus::Undef,
            (Rank::Top, _) => Plaus::Zero,
            (Rank::Finite(a), Rank::Finite(b)) => Plaus::rank(Rank::Finite(a - b)),
        },
    )
}

/// `ρ*`: keep zero and undefined entries, map every other value to 1.
pub fn to_consistency(table: &GcppTable) -> Result<GcppTable> {
    if !table.is_full() {
        return Err(Error::NotFull);
    }
    let entries = table
        .entries()
        .iter()
        .map(|p| match p {
            Plaus::Value(_) => Plaus::one(),
            other => other.clone(),
        })
        .collect();
    GcppTable::from_entries(table.scheme().clone(), MeasureKind::Consistency, entries)
}

/// `π*(ψ) = 2^{-κ(ψ)}`, with rank `∞` mapping to zero.
pub fn kappa_to_possibility(table: &GcppTable) -> Result<GcppTable> {
    if table.kind() != MeasureKind::Kappa {
        return Err(Error::KindMismatch {
            expected: MeasureKind::Kappa,
            got: table.kind(),
        });
    }
    let two = BigInt::from(2u8);
    let mut entries = Vec::with_capacity(table.entries().len());
    for p in table.entries() {
        entries.push(match p {
            Plaus::Value(Payload::Rank(k)) => {
                let exp = usize::try_from(*k)
                    .map_err(|_| Error::PreconditionUnmet(format!("rank {k} too large")))?;
                Plaus::rational(BigRational::new(BigInt::one(), num_traits::pow(two.clone(), exp)))
            }
            Plaus::Value(_) => {
                return Err(Error::PreconditionUnmet("kappa table holds a non-rank payload".into()));
            }
            other => other.clone(),
        });
    }
    GcppTable::from_entries(table.scheme().clone(), MeasureKind::Possibility, entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::model::Assignment;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn binary(names: &[&str]) -> Scheme {
        Scheme::new(names.iter().map(|n| (*n, vec!["0", "1"]))).unwrap()
    }

    #[test]
    fn uniform_single_variable() {
        let j = JointSpec::probability(binary(&["A"]), vec![r(1, 2), r(1, 2)]).unwrap();
        let t = extend_probability(&j).unwrap();
        let s = t.scheme().clone();
        assert_eq!(t.top(), &Plaus::one());
        assert_eq!(t.get(&s.parse_atom("A=0").unwrap()), &Plaus::ratio(1, 2));
        assert_eq!(t.get(&s.parse_atom("|A=0").unwrap()), &Plaus::one());
    }

    #[test]
    fn probability_must_sum_to_one() {
        let j = JointSpec::probability(binary(&["A"]), vec![r(1, 2), r(1, 3)]).unwrap();
        assert!(matches!(extend_probability(&j), Err(Error::NotNormalized { .. })));
        let fixed = j.normalized().unwrap();
        assert_eq!(extend_probability(&fixed).unwrap().get(&CondAtom::plain(Assignment::top())), &Plaus::one());
    }

    #[test]
    fn possibility_point_mass() {
        let s = binary(&["A", "B"]);
        let j = JointSpec::possibility(s.clone(), vec![r(0, 1), r(0, 1), r(1, 1), r(0, 1)]).unwrap();
        let t = extend_possibility(&j).unwrap();
        assert_eq!(t.top(), &Plaus::one());
        assert_eq!(t.get(&s.parse_atom("A=1").unwrap()), &Plaus::one());
        assert_eq!(t.get(&s.parse_atom("B=0").unwrap()), &Plaus::one());
        assert_eq!(t.get(&s.parse_atom("A=0").unwrap()), &Plaus::Zero);
        assert_eq!(t.get(&s.parse_atom("B=1").unwrap()), &Plaus::Zero);
        assert_eq!(t.get(&s.parse_atom("A=0|B=1").unwrap()), &Plaus::Undef);
        assert!(t.is_valid() && t.is_full());
        let bad = JointSpec::possibility(s, vec![r(1, 2); 4]).unwrap();
        assert!(matches!(extend_possibility(&bad), Err(Error::NotNormalized { .. })));
    }

    #[test]
    fn kappa_all_zero_ranks() {
        let s = binary(&["A", "B"]);
        let j = JointSpec::kappa(s, vec![Rank::Finite(0); 4]).unwrap();
        let t = extend_kappa(&j).unwrap();
        assert!(t.entries().iter().all(|p| p == &Plaus::rank(Rank::Finite(0))));
    }

    #[test]
    fn kappa_conditionals_are_differences() {
        let t = fixtures::kappa_table();
        let s = t.scheme().clone();
        let ranks = fixtures::kappa_joint_ranks();
        let get = |a: usize, b: usize| ranks[a * 2 + b];
        assert_eq!(t.top(), &Plaus::rank(Rank::Finite(0)));
        for a in 0..2 {
            for b in 0..2 {
                let kb = get(0, b).min(get(1, b));
                let expected = match (get(a, b), kb) {
                    (_, Rank::Top) => Plaus::Undef,
                    (Rank::Top, _) => Plaus::Zero,
                    (Rank::Finite(x), Rank::Finite(y)) => Plaus::rank(Rank::Finite(x - y)),
                };
                let atom = s.parse_atom(&format!("A={a}|B={b}")).unwrap();
                assert_eq!(t.get(&atom), &expected);
            }
        }
        let min_not_zero = JointSpec::kappa(s, vec![Rank::Finite(1), Rank::Finite(2), Rank::Top, Rank::Finite(3)]).unwrap();
        assert!(matches!(extend_kappa(&min_not_zero), Err(Error::NotNormalized { .. })));
    }

    #[test]
    fn consistency_projection() {
        let positive = fixtures::product_probability();
        let c = to_consistency(&positive).unwrap();
        assert!(c.entries().iter().all(|p| p == &Plaus::one()));
        let shoe = fixtures::shoe_size_probability();
        let cs = to_consistency(&shoe).unwrap();
        for (a, b) in shoe.entries().iter().zip(cs.entries()) {
            assert_eq!(a.is_zero(), b.is_zero());
            assert_eq!(a.is_undef(), b.is_undef());
        }
        assert!(cs.is_valid());
        assert_eq!(to_consistency(&cs).unwrap(), cs);
    }

    #[test]
    fn consistency_rejects_non_full() {
        let t = fixtures::markov_chain_probability();
        let s = t.scheme().clone();
        let mut entries = t.entries().to_vec();
        entries[s.atom_index(&s.parse_atom("A=0|B=0").unwrap())] = Plaus::Zero;
        let t2 = GcppTable::from_entries(s, t.kind(), entries).unwrap();
        assert_eq!(to_consistency(&t2), Err(Error::NotFull));
    }

    #[test]
    fn kappa_to_possibility_values() {
        let t = fixtures::kappa_table();
        let p = kappa_to_possibility(&t).unwrap();
        assert_eq!(p.top(), &Plaus::one());
        for (k, q) in t.entries().iter().zip(p.entries()) {
            match k {
                Plaus::Zero => assert_eq!(q, &Plaus::Zero),
                Plaus::Undef => assert_eq!(q, &Plaus::Undef),
                Plaus::Value(Payload::Rank(r)) => assert_eq!(q, &Plaus::ratio(1, 1 << r)),
                _ => unreachable!(),
            }
        }
        assert!(matches!(
            kappa_to_possibility(&fixtures::markov_chain_probability()),
            Err(Error::KindMismatch { .. })
        ));
    }

    #[test]
    fn probability_round_trips_through_the_joint() {
        let t = fixtures::markov_chain_probability();
        let joint: Vec<Plaus> = fixtures::markov_chain_joint_values().into_iter().map(Plaus::rational).collect();
        assert_eq!(t.joint(), joint);
    }
}
