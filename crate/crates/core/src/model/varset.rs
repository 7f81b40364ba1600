use std::fmt;

/// A set of variables of a [`Scheme`](super::Scheme), stored as a bitmask over
/// variable positions.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct VarSet(u32);

/// Hard cap on the number of variables a scheme can hold.
pub const MAX_VARIABLES: usize = 16;

impl VarSet {
    pub const EMPTY: VarSet = VarSet(0);

    pub fn from_bits(bits: u32) -> Self {
        VarSet(bits)
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn singleton(var: usize) -> Self {
        debug_assert!(var < MAX_VARIABLES);
        VarSet(1 << var)
    }

    /// The set `{0, .., n-1}`.
    pub fn full(n: usize) -> Self {
        debug_assert!(n <= MAX_VARIABLES);
        VarSet(((1u64 << n) - 1) as u32)
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(vars: I) -> Self {
        vars.into_iter().fold(VarSet::EMPTY, |acc, v| acc.with(v))
    }

    pub fn with(self, var: usize) -> Self {
        VarSet(self.0 | (1 << var))
    }

    pub fn without(self, var: usize) -> Self {
        VarSet(self.0 & !(1 << var))
    }

    pub fn contains(self, var: usize) -> bool {
        var < 32 && self.0 & (1 << var) != 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn union(self, other: VarSet) -> VarSet {
        VarSet(self.0 | other.0)
    }

    pub fn intersection(self, other: VarSet) -> VarSet {
        VarSet(self.0 & other.0)
    }

    pub fn difference(self, other: VarSet) -> VarSet {
        VarSet(self.0 & !other.0)
    }

    pub fn is_disjoint(self, other: VarSet) -> bool {
        self.0 & other.0 == 0
    }

    pub fn is_subset(self, other: VarSet) -> bool {
        self.0 & !other.0 == 0
    }

    /// Variable positions in increasing order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let v = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(v)
            }
        })
    }

    /// All subsets of `self`, starting with the empty set.
    pub fn subsets(self) -> impl Iterator<Item = VarSet> {
        let full = self.0;
        let mut next = Some(0u32);
        std::iter::from_fn(move || {
            let cur = next?;
            next = if cur == full {
                None
            } else {
                Some((cur.wrapping_sub(full)) & full)
            };
            Some(VarSet(cur))
        })
    }

    /// Subsets ordered by cardinality, then lexicographically by their sorted
    /// member lists.
    pub fn subsets_by_size(self) -> Vec<VarSet> {
        let mut all: Vec<VarSet> = self.subsets().collect();
        all.sort_by(|a, b| a.canonical_cmp(*b));
        all
    }

    /// Canonical order: cardinality first, then lexicographic member list.
    pub fn canonical_cmp(self, other: VarSet) -> std::cmp::Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.iter().cmp(other.iter()))
    }
}

impl fmt::Debug for VarSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl PartialOrd for VarSet {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for VarSet {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.canonical_cmp(*other)
    }
}
