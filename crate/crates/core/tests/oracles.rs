//! Extension, counting and structure values recomputed from first
//! principles and compared with the library.

mod common;

use common::*;
use graphoid::fixtures;
use graphoid::independence::extract_i;
use graphoid::measures::{kappa_to_possibility, JointSpec, JointValues};
use graphoid::{Assignment, GcppTable, MeasureKind, Plaus, Rank, Scheme, VarSet};
use num_rational::BigRational;
use num_traits::Zero;

/// `ρ(x|y)` straight from the joint: aggregate over the full assignments
/// extending `xy` and `y`, then divide (or subtract ranks).
fn brute_conditional(j: &JointSpec, x: &Assignment, y: &Assignment) -> Plaus {
    let scheme = j.scheme();
    let xy = x.join(y).unwrap();
    let cells: Vec<(usize, Assignment)> = scheme.assignments(scheme.all()).enumerate().collect();
    match j.values() {
        JointValues::Rational(v) => {
            let agg = |a: &Assignment| {
                let vals = cells.iter().filter(|(_, u)| u.extends(a)).map(|(i, _)| v[*i].clone());
                match j.kind() {
                    MeasureKind::Probability => vals.fold(BigRational::zero(), |s, r| s + r),
                    _ => vals.max().unwrap_or_else(BigRational::zero),
                }
            };
            let (num, den) = (agg(&xy), agg(y));
            if den.is_zero() {
                Plaus::Undef
            } else {
                Plaus::rational(num / den)
            }
        }
        JointValues::Ranks(r) => {
            let agg = |a: &Assignment| cells.iter().filter(|(_, u)| u.extends(a)).map(|(i, _)| r[*i]).min().unwrap();
            match (agg(&xy), agg(y)) {
                (_, Rank::Top) => Plaus::Undef,
                (Rank::Top, _) => Plaus::Zero,
                (Rank::Finite(a), Rank::Finite(b)) => Plaus::rank(Rank::Finite(a - b)),
            }
        }
    }
}

fn check_against_brute_force(j: &JointSpec, t: &GcppTable) {
    for (atom, value) in t.iter_canonical() {
        let expected = brute_conditional(j, atom.left(), atom.given());
        assert_eq!(value, &expected, "{}", t.scheme().atom_key(&atom));
    }
}

#[test]
fn markov_chain_conditionals_are_quotients_of_marginal_sums() {
    let j = JointSpec::probability(fixtures::markov_chain_scheme(), fixtures::markov_chain_joint_values()).unwrap();
    check_against_brute_force(&j, &fixtures::markov_chain_probability());
}

#[test]
fn random_extensions_match_brute_force() {
    let mut rng = rng(21);
    for kind in [MeasureKind::Probability, MeasureKind::Possibility, MeasureKind::Kappa] {
        for k in 0..40 {
            let scheme = random_scheme(&mut rng);
            if scheme.len() > 3 {
                continue;
            }
            let j = random_joint(&mut rng, &scheme, kind, k % 2 == 0);
            check_against_brute_force(&j, &j.extend().unwrap());
        }
    }
}

#[test]
fn consistency_is_one_wherever_possible() {
    let mut rng = rng(22);
    for _ in 0..30 {
        let scheme = random_scheme(&mut rng);
        let t = random_joint(&mut rng, &scheme, MeasureKind::Consistency, true).extend().unwrap();
        for (atom, value) in t.iter_canonical() {
            let xy = atom.left().join(atom.given()).unwrap();
            let expected = if t.value_of(atom.given()).is_zero() {
                Plaus::Undef
            } else if t.value_of(&xy).is_zero() {
                Plaus::Zero
            } else {
                Plaus::one()
            };
            assert_eq!(value, &expected);
        }
    }
}

#[test]
fn atom_count_matches_enumeration_of_scope_pairs() {
    let mut rng = rng(23);
    for _ in 0..30 {
        let scheme = random_scheme(&mut rng);
        let all = scheme.all();
        let mut count = 0;
        for x in all.subsets() {
            for y in all.difference(x).subsets() {
                count += scheme.assignment_count(x) * scheme.assignment_count(y);
            }
        }
        assert_eq!(scheme.atom_count(), Some(count));
        assert_eq!(scheme.enumerate_atoms().count(), count);
    }
    let two = scheme_with_domains(&[2, 2]);
    assert_eq!(two.atom_count(), Some(25));
}

#[test]
fn kappa_and_its_possibility_image_share_a_structure() {
    let mut rng = rng(24);
    let mut tables = vec![fixtures::kappa_table(), fixtures::kappa_chain()];
    for k in 0..20 {
        tables.push(random_table(&mut rng, MeasureKind::Kappa, k % 2 == 0));
    }
    for t in tables {
        let p = kappa_to_possibility(&t).unwrap();
        assert_eq!(p.kind(), MeasureKind::Possibility);
        assert_eq!(extract_i(&p), extract_i(&t));
    }
}

#[test]
fn shoe_size_zeros_are_exactly_the_excluded_heights() {
    let t = fixtures::shoe_size_probability();
    let scheme: &Scheme = t.scheme();
    let h1 = scheme.index_of("H1").unwrap();
    let h2 = scheme.index_of("H2").unwrap();
    for u in scheme.assignments(scheme.all()) {
        let (i, j) = (u.value_of(h1).unwrap() as usize, u.value_of(h2).unwrap() as usize);
        assert_eq!(t.value_of(&u).is_zero(), !fixtures::shoe_size_support(i, j), "{}", scheme.assignment_key(&u));
    }
}

#[test]
fn markov_chain_boundary_of_c_is_b() {
    let t = fixtures::markov_chain_probability();
    let i = extract_i(&t);
    let s = t.scheme();
    let w = s.varset(&["A", "B"]).unwrap();
    assert_eq!(i.markov_boundaries(s.index_of("C").unwrap(), w).unwrap(), vec![VarSet::singleton(s.index_of("B").unwrap())]);
}
