//! Small hand-built measures used throughout the tests, the examples in the
//! README and the CLI demos.

use num_rational::BigRational;

use crate::measures::JointSpec;
use crate::model::{GcppTable, Rank, Scheme};

fn r(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn binary(names: &[&str]) -> Scheme {
    Scheme::new(names.iter().map(|n| (*n, vec!["0", "1"]))).expect("valid scheme")
}

/// Joint of the chain `A → B → C` on three binary variables, lexicographic
/// order with `A` most significant.
pub fn markov_chain_joint_values() -> Vec<BigRational> {
    let pa = [r(1, 3), r(2, 3)];
    let pb = [[r(3, 4), r(1, 4)], [r(1, 5), r(4, 5)]];
    let pc = [[r(1, 2), r(1, 2)], [r(1, 6), r(5, 6)]];
    let mut out = Vec::with_capacity(8);
    for a in 0..2 {
        for b in 0..2 {
            for c in 0..2 {
                out.push(&pa[a] * &pb[a][b] * &pc[b][c]);
            }
        }
    }
    out
}

pub fn markov_chain_scheme() -> Scheme {
    binary(&["A", "B", "C"])
}

pub fn markov_chain_probability() -> GcppTable {
    JointSpec::probability(markov_chain_scheme(), markov_chain_joint_values())
        .and_then(|j| j.extend())
        .expect("fixture is normalized")
}

/// Product measure `P(ab) = P(a)P(b)` on two binaries, everywhere positive.
pub fn product_probability() -> GcppTable {
    let pa = [r(1, 3), r(2, 3)];
    let pb = [r(1, 4), r(3, 4)];
    let values = (0..4).map(|i| &pa[i / 2] * &pb[i % 2]).collect();
    JointSpec::probability(binary(&["A", "B"]), values)
        .and_then(|j| j.extend())
        .expect("fixture is normalized")
}

/// Three binaries where `A = B` always and `C` depends on them. The
/// `(A, B)` support is the diagonal, so the scheme is not connected.
pub fn diagonal_probability() -> GcppTable {
    let values = vec![
        r(2, 5),
        r(1, 10),
        r(0, 1),
        r(0, 1),
        r(0, 1),
        r(0, 1),
        r(1, 10),
        r(2, 5),
    ];
    JointSpec::probability(binary(&["A", "B", "C"]), values)
        .and_then(|j| j.extend())
        .expect("fixture is normalized")
}

/// Scheme `{S, H1, H2}`: a three-valued shoe size and two height readings
/// with values `0..=3`.
pub fn shoe_size_scheme() -> Scheme {
    let heights = vec!["0", "1", "2", "3"];
    Scheme::new(vec![
        ("S", vec!["small", "medium", "large"]),
        ("H1", heights.clone()),
        ("H2", heights),
    ])
    .expect("valid scheme")
}

/// True when the height readings `(i, j)` are compatible: `i = j` or
/// `i = j - 1`.
pub fn shoe_size_support(i: usize, j: usize) -> bool {
    i == j || i + 1 == j
}

/// A probability on the shoe-size scheme. `P(s h1 h2) = 0` exactly when the
/// heights are incompatible, so `S` is logically independent of the heights
/// while still being probabilistically dependent on them.
pub fn shoe_size_probability() -> GcppTable {
    let mut weights = Vec::with_capacity(48);
    for s in 0..3i64 {
        for i in 0..4i64 {
            for j in 0..4i64 {
                let w = if shoe_size_support(i as usize, j as usize) {
                    1 + (s + 1) * (i + 1) + j * j
                } else {
                    0
                };
                weights.push(r(w, 1));
            }
        }
    }
    JointSpec::probability(shoe_size_scheme(), weights)
        .and_then(|j| j.normalized())
        .and_then(|j| j.extend())
        .expect("fixture is normalizable")
}

/// Ranks on two binaries `(A, B)`: `00 ↦ 0, 01 ↦ 1, 10 ↦ 2, 11 ↦ ∞`.
pub fn kappa_joint_ranks() -> Vec<Rank> {
    vec![Rank::Finite(0), Rank::Finite(1), Rank::Finite(2), Rank::Top]
}

pub fn kappa_table() -> GcppTable {
    JointSpec::kappa(binary(&["A", "B"]), kappa_joint_ranks())
        .and_then(|j| j.extend())
        .expect("fixture is normalized")
}

/// Chain `A → B → C` as a kappa function: `κ(abc) = κ(a) + κ(b|a) + κ(c|b)`.
pub fn kappa_chain() -> GcppTable {
    let ka = [0u64, 2];
    let kb = [[0u64, 1], [3, 0]];
    let kc = [[0u64, 2], [1, 0]];
    let mut ranks = Vec::with_capacity(8);
    for a in 0..2 {
        for b in 0..2 {
            for c in 0..2 {
                ranks.push(Rank::Finite(ka[a] + kb[a][b] + kc[b][c]));
            }
        }
    }
    JointSpec::kappa(markov_chain_scheme(), ranks)
        .and_then(|j| j.extend())
        .expect("fixture is normalized")
}

/// Chain `A → B → C` as a possibility function with products of
/// max-normalized conditionals.
pub fn possibility_chain() -> GcppTable {
    let pa = [r(1, 1), r(1, 2)];
    let pb = [[r(1, 1), r(1, 3)], [r(1, 4), r(1, 1)]];
    let pc = [[r(1, 1), r(0, 1)], [r(2, 3), r(1, 1)]];
    let mut values = Vec::with_capacity(8);
    for a in 0..2 {
        for b in 0..2 {
            for c in 0..2 {
                values.push(&pa[a] * &pb[a][b] * &pc[b][c]);
            }
        }
    }
    JointSpec::possibility(markov_chain_scheme(), values)
        .and_then(|j| j.extend())
        .expect("fixture is normalized")
}
