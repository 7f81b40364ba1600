use std::collections::BTreeMap;

use super::structure::{IndependenceStructure, Triple};
use crate::error::{Error, Result};
use crate::model::{GcppTable, LabelView, Plaus};

/// `g =^∞ h`: the maps agree wherever both are defined.
pub fn eq_upto_undef<K: Ord>(g: &BTreeMap<K, Plaus>, h: &BTreeMap<K, Plaus>) -> Result<bool> {
    if g.len() != h.len() || g.keys().zip(h.keys()).any(|(a, b)| a != b) {
        return Err(Error::KeyMismatch);
    }
    Ok(g.values()
        .zip(h.values())
        .all(|(a, b)| a == b || a.is_undef() || b.is_undef()))
}

/// `I_ρ`: `ρ(x|yz) = ρ(x|z)` whenever `ρ(yz) ≠ 0`.
pub fn extract_i(table: &GcppTable) -> IndependenceStructure {
    structure_from(table.view(), holds_i_view)
}

/// `I'_ρ`: `ρ(x|yz) = ρ(x|y'z)` whenever `ρ(yz) ≠ 0` and `ρ(y'z) ≠ 0`.
pub fn extract_i_prime(table: &GcppTable) -> IndependenceStructure {
    structure_from(table.view(), holds_i_prime_view)
}

/// Membership of one triple in `I_ρ`.
pub fn holds_i(table: &GcppTable, t: Triple) -> Result<bool> {
    let t = Triple::new(t.x, t.z, t.y)?;
    Ok(holds_i_view(table.view(), t))
}

/// Membership of one triple in `I'_ρ`.
pub fn holds_i_prime(table: &GcppTable, t: Triple) -> Result<bool> {
    let t = Triple::new(t.x, t.z, t.y)?;
    Ok(holds_i_prime_view(table.view(), t))
}

pub(crate) fn structure_from(view: LabelView<'_>, holds: fn(LabelView<'_>, Triple) -> bool) -> IndependenceStructure {
    let scheme = view.scheme;
    let mut s = IndependenceStructure::for_scheme(scheme).expect("scheme small enough for a table");
    let n = scheme.len();
    for code in 0..(1usize << (2 * n)) {
        let t = Triple::from_code(code, n);
        if holds(view, t) {
            s.insert_raw(t);
        }
    }
    s
}

pub(crate) fn holds_i_view(view: LabelView<'_>, t: Triple) -> bool {
    let offs = view.scheme.offsets();
    let lx = &offs.left[t.x.bits() as usize];
    let (lz, gz) = (&offs.left[t.z.bits() as usize], &offs.given[t.z.bits() as usize]);
    let (ly, gy) = (&offs.left[t.y.bits() as usize], &offs.given[t.y.bits() as usize]);
    for (&lzo, &gzo) in lz.iter().zip(gz) {
        for (&lyo, &gyo) in ly.iter().zip(gy) {
            if view.is_zero(lyo + lzo) {
                continue;
            }
            if lx.iter().any(|&xo| view.at(xo + gyo + gzo) != view.at(xo + gzo)) {
                return false;
            }
        }
    }
    true
}

pub(crate) fn holds_i_prime_view(view: LabelView<'_>, t: Triple) -> bool {
    let offs = view.scheme.offsets();
    let lx = &offs.left[t.x.bits() as usize];
    let (lz, gz) = (&offs.left[t.z.bits() as usize], &offs.given[t.z.bits() as usize]);
    let (ly, gy) = (&offs.left[t.y.bits() as usize], &offs.given[t.y.bits() as usize]);
    for (&lzo, &gzo) in lz.iter().zip(gz) {
        let mut reference: Option<usize> = None;
        for (&lyo, &gyo) in ly.iter().zip(gy) {
            if view.is_zero(lyo + lzo) {
                continue;
            }
            match reference {
                None => reference = Some(gyo),
                Some(g0) => {
                    if lx.iter().any(|&xo| view.at(xo + gyo + gzo) != view.at(xo + g0 + gzo)) {
                        return false;
                    }
                }
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::model::{Assignment, CondAtom, GcppTable, MeasureKind, Scheme, VarSet};

    fn t(s: &Scheme, x: &[&str], z: &[&str], y: &[&str]) -> Triple {
        Triple::new(s.varset(x).unwrap(), s.varset(z).unwrap(), s.varset(y).unwrap()).unwrap()
    }

    #[test]
    fn eq_upto_undef_cases() {
        let k = |i: u8| i;
        let g: BTreeMap<u8, Plaus> = [(k(0), Plaus::ratio(1, 2)), (k(1), Plaus::Zero)].into();
        assert!(eq_upto_undef(&g, &g).unwrap());
        let undef: BTreeMap<u8, Plaus> = [(0, Plaus::Undef), (1, Plaus::Undef)].into();
        assert!(eq_upto_undef(&undef, &g).unwrap());
        let h: BTreeMap<u8, Plaus> = [(0, Plaus::ratio(1, 3)), (1, Plaus::Zero)].into();
        assert!(!eq_upto_undef(&g, &h).unwrap());
        let other: BTreeMap<u8, Plaus> = [(0, Plaus::Zero)].into();
        assert_eq!(eq_upto_undef(&g, &other), Err(Error::KeyMismatch));
    }

    #[test]
    fn trivial_triples_always_hold() {
        for table in [fixtures::markov_chain_probability(), fixtures::kappa_table(), fixtures::diagonal_probability()] {
            let s = extract_i(&table);
            let all = table.scheme().all();
            for x in all.subsets() {
                for z in all.difference(x).subsets() {
                    assert!(s.contains(Triple::raw(x, z, VarSet::EMPTY)));
                }
            }
        }
    }

    #[test]
    fn product_measure_is_marginally_independent() {
        let table = fixtures::product_probability();
        let s = table.scheme().clone();
        let i = extract_i(&table);
        assert!(i.contains(t(&s, &["A"], &[], &["B"])));
        assert!(i.contains(t(&s, &["B"], &[], &["A"])));
        // brute-force check straight from the definition
        for a in 0..2u16 {
            for b in 0..2u16 {
                let x = Assignment::new(&s, s.varset(&["A"]).unwrap(), vec![a]).unwrap();
                let y = Assignment::new(&s, s.varset(&["B"]).unwrap(), vec![b]).unwrap();
                assert_eq!(table.get(&CondAtom::new(x.clone(), y).unwrap()), table.value_of(&x));
            }
        }
    }

    #[test]
    fn markov_chain_structure() {
        let table = fixtures::markov_chain_probability();
        let s = table.scheme().clone();
        let i = extract_i(&table);
        assert!(i.contains(t(&s, &["A"], &["B"], &["C"])));
        assert!(i.contains(t(&s, &["C"], &["B"], &["A"])));
        assert!(!i.contains(t(&s, &["A"], &[], &["C"])));
        assert!(holds_i(&table, t(&s, &["A"], &["B"], &["C"])).unwrap());
        assert!(!holds_i(&table, t(&s, &["A"], &[], &["C"])).unwrap());
    }

    #[test]
    fn i_is_contained_in_i_prime() {
        for table in [
            fixtures::markov_chain_probability(),
            fixtures::kappa_chain(),
            fixtures::possibility_chain(),
            fixtures::shoe_size_probability(),
        ] {
            let i = extract_i(&table);
            let ip = extract_i_prime(&table);
            assert!(i.is_subset(&ip));
            // these families are coherent
            assert_eq!(i, ip);
        }
    }

    #[test]
    fn single_possible_value_gives_i_prime() {
        // B is certain to be 0: only one possible y.
        let s = Scheme::new(vec![("A", vec!["0", "1"]), ("B", vec!["0", "1"])]).unwrap();
        let table = GcppTable::from_fn(s.clone(), MeasureKind::Opaque, |atom| {
            let b_val = atom.left().value_of(1).or(atom.given().value_of(1));
            if atom.given().value_of(1) == Some(1) {
                Plaus::Undef
            } else if b_val == Some(1) {
                Plaus::Zero
            } else {
                // distinct value per atom
                Plaus::class(s.atom_index(atom) as u64)
            }
        })
        .unwrap();
        assert!(table.is_valid(), "{:?}", table.validate());
        let ip = extract_i_prime(&table);
        let b = s.varset(&["B"]).unwrap();
        let a = s.varset(&["A"]).unwrap();
        for x in [VarSet::EMPTY, a] {
            assert!(ip.contains(Triple::raw(x, VarSet::EMPTY, b)));
        }
        assert!(ip.contains(Triple::raw(VarSet::EMPTY, a, b)));
    }
}
