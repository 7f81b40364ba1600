#![allow(dead_code)]

use graphoid::measures::JointSpec;
use graphoid::{Axiom, CondAtom, GcppTable, IndependenceStructure, MeasureKind, Plaus, Rank, Scheme, Triple, VarSet};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const MEASURE_KINDS: [MeasureKind; 4] =
    [MeasureKind::Probability, MeasureKind::Possibility, MeasureKind::Kappa, MeasureKind::Consistency];

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn names(n: usize) -> Vec<String> {
    (0..n).map(|i| ((b'A' + i as u8) as char).to_string()).collect()
}

pub fn scheme_with_domains(domains: &[usize]) -> Scheme {
    Scheme::new(
        domains
            .iter()
            .enumerate()
            .map(|(i, &d)| (((b'A' + i as u8) as char).to_string(), (0..d).map(|v| v.to_string()).collect::<Vec<_>>())),
    )
    .unwrap()
}

/// Mostly 1 to 4 variables with 2 or 3 values; now and then 5 binary ones.
pub fn random_scheme(rng: &mut impl Rng) -> Scheme {
    if rng.gen_bool(0.1) {
        return scheme_with_domains(&[2; 5]);
    }
    let n = rng.gen_range(1..=4);
    let top = if n == 4 { 2 + rng.gen_bool(0.3) as usize } else { 3 };
    let domains: Vec<usize> = (0..n).map(|_| rng.gen_range(2..=top)).collect();
    scheme_with_domains(&domains)
}

fn ratio(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// A normalized joint of the given kind; with `zeros`, roughly a third of
/// `U̲` gets plausibility zero (never all of it).
pub fn random_joint(rng: &mut impl Rng, scheme: &Scheme, kind: MeasureKind, zeros: bool) -> JointSpec {
    let m = scheme.assignment_count(scheme.all());
    let mut support: Vec<bool> = (0..m).map(|_| !zeros || rng.gen_bool(0.65)).collect();
    let keep = rng.gen_range(0..m);
    support[keep] = true;
    let j = match kind {
        MeasureKind::Probability | MeasureKind::Possibility => {
            let vals = support.iter().map(|&s| if s { ratio(rng.gen_range(1..=6)) } else { ratio(0) }).collect();
            if kind == MeasureKind::Probability {
                JointSpec::probability(scheme.clone(), vals)
            } else {
                JointSpec::possibility(scheme.clone(), vals)
            }
        }
        MeasureKind::Kappa => JointSpec::kappa(
            scheme.clone(),
            support.iter().map(|&s| if s { Rank::Finite(rng.gen_range(1..=4)) } else { Rank::Top }).collect(),
        ),
        MeasureKind::Consistency => JointSpec::consistency(scheme.clone(), support),
        MeasureKind::Opaque => unreachable!("opaque tables have no joint"),
    };
    j.unwrap().normalized().unwrap()
}

pub fn random_table(rng: &mut impl Rng, kind: MeasureKind, zeros: bool) -> GcppTable {
    let scheme = random_scheme(rng);
    random_joint(rng, &scheme, kind, zeros).extend().unwrap()
}

pub fn positive_probability(rng: &mut impl Rng, scheme: &Scheme) -> GcppTable {
    random_joint(rng, scheme, MeasureKind::Probability, false).extend().unwrap()
}

/// A GCPP with no measure behind it: the zero pattern of a random support,
/// undefined exactly where the condition is zero, and values drawn from a
/// few opaque classes so that equalities are common. Unless `full`, some
/// conditionals with a possible condition are also set to zero.
pub fn random_opaque(rng: &mut impl Rng, full: bool) -> GcppTable {
    let scheme = random_scheme(rng);
    let zeros = rng.gen_bool(0.7);
    let support = random_joint(rng, &scheme, MeasureKind::Consistency, zeros).extend().unwrap();
    let classes = rng.gen_range(1..=3u64);
    GcppTable::from_fn(scheme, MeasureKind::Opaque, |atom: &CondAtom| {
        let xy = atom.left().join(atom.given()).expect("disjoint scopes");
        if support.value_of(atom.given()).is_zero() {
            Plaus::Undef
        } else if support.value_of(&xy).is_zero() || (!full && !atom.given().is_top() && rng.gen_bool(0.15)) {
            Plaus::Zero
        } else {
            Plaus::class(rng.gen_range(0..classes))
        }
    })
    .unwrap()
}

/// Random acyclic graph on `n` nodes: a random order, each forward edge
/// kept with probability 0.4.
pub fn random_dag_edges(rng: &mut impl Rng, n: usize) -> Vec<(usize, usize)> {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(0.4) {
                edges.push((order[i], order[j]));
            }
        }
    }
    edges
}

pub fn random_disjoint(rng: &mut impl Rng, n: usize) -> (VarSet, VarSet, VarSet) {
    let (mut x, mut z, mut y) = (VarSet::EMPTY, VarSet::EMPTY, VarSet::EMPTY);
    for v in 0..n {
        match rng.gen_range(0..4) {
            0 => x = x.with(v),
            1 => z = z.with(v),
            2 => y = y.with(v),
            _ => {}
        }
    }
    (x, z, y)
}

/// d-separation by listing every simple trail between `X` and `Y` and
/// testing each interior node.
pub fn dsep_oracle(n: usize, edges: &[(usize, usize)], x: VarSet, z: VarSet, y: VarSet) -> bool {
    let has_edge = |a: usize, b: usize| edges.contains(&(a, b));
    let mut desc = vec![0u32; n];
    for (v, d) in desc.iter_mut().enumerate() {
        let mut stack = vec![v];
        *d = 1 << v;
        while let Some(u) = stack.pop() {
            for &(a, b) in edges {
                if a == u && *d & (1 << b) == 0 {
                    *d |= 1 << b;
                    stack.push(b);
                }
            }
        }
    }
    let active = |path: &[usize]| {
        (1..path.len() - 1).all(|i| {
            let (a, v, b) = (path[i - 1], path[i], path[i + 1]);
            if has_edge(a, v) && has_edge(b, v) {
                desc[v] & z.bits() != 0
            } else {
                !z.contains(v)
            }
        })
    };
    fn walk(path: &mut Vec<usize>, n: usize, adj: &dyn Fn(usize, usize) -> bool, done: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        if done(path) {
            return true;
        }
        let last = *path.last().unwrap();
        for next in 0..n {
            if adj(last, next) && !path.contains(&next) {
                path.push(next);
                if walk(path, n, adj, done) {
                    return true;
                }
                path.pop();
            }
        }
        false
    }
    let adj = |a: usize, b: usize| has_edge(a, b) || has_edge(b, a);
    for s in x.iter() {
        let mut path = vec![s];
        let mut found = |p: &[usize]| p.len() > 1 && y.contains(*p.last().unwrap()) && active(p);
        if walk(&mut path, n, &adj, &mut found) {
            return false;
        }
    }
    true
}

/// Every triple over `n` variables.
pub fn all_triples(n: usize) -> Vec<Triple> {
    let all = VarSet::full(n);
    let mut out = Vec::new();
    for x in all.subsets() {
        for z in all.difference(x).subsets() {
            for y in all.difference(x.union(z)).subsets() {
                out.push(Triple::new(x, z, y).unwrap());
            }
        }
    }
    out
}

/// Whether `t` follows from `s` by one application of `a`, checked
/// backwards from the conclusion.
fn derivable(s: &IndependenceStructure, a: Axiom, t: Triple) -> bool {
    let tr = |x, z, y| Triple::new(x, z, y).map(|t| s.contains(t)).unwrap_or(false);
    let all = s.all_vars();
    let Triple { x, z, y } = t;
    match a {
        Axiom::TrivialIndependence => y.is_empty(),
        Axiom::Symmetry => s.contains(t.mirror()),
        Axiom::Decomposition => all.difference(t.vars()).subsets().any(|w| tr(x, z, y.union(w))),
        Axiom::WeakUnion => z.subsets().any(|w| tr(x, z.difference(w), y.union(w))),
        Axiom::Contraction => y.subsets().any(|a| tr(x, z, a) && tr(x, z.union(a), y.difference(a))),
        Axiom::Intersection => y.subsets().any(|a| {
            let b = y.difference(a);
            tr(x, z.union(b), a) && tr(x, z.union(a), b)
        }),
    }
}

/// Closure by rescanning every triple until a full pass adds nothing.
pub fn naive_closure(s: &IndependenceStructure, axioms: &[Axiom]) -> IndependenceStructure {
    let mut out = s.clone();
    let candidates = all_triples(s.n_vars());
    loop {
        let mut added = false;
        for &t in &candidates {
            if !out.contains(t) && axioms.iter().any(|&a| derivable(&out, a, t)) {
                out.insert(t).unwrap();
                added = true;
            }
        }
        if !added {
            return out;
        }
    }
}
