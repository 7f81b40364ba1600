/// Disjoint sets over `0..n` with path compression.
///
/// The representative of every class is its minimum element, so labels are
/// independent of the order in which merges happened.
#[derive(Clone, Debug)]
pub struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cur = x;
        while self.parent[cur] != root {
            let next = self.parent[cur];
            self.parent[cur] = root;
            cur = next;
        }
        root
    }

    /// Representative without compressing paths.
    pub fn root(&self, mut x: usize) -> usize {
        while self.parent[x] != x {
            x = self.parent[x];
        }
        x
    }

    /// Merge the classes of `a` and `b`; returns false if already merged.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }

    pub fn same(&mut self, a: usize, b: usize) -> bool {
        self.find(a) == self.find(b)
    }

    /// Class representative (minimum element) of every element.
    pub fn labels(&mut self) -> Vec<usize> {
        (0..self.parent.len()).map(|x| self.find(x)).collect()
    }

    /// Classes in order of their minimum element, members ascending.
    pub fn classes(&mut self) -> Vec<Vec<usize>> {
        let labels = self.labels();
        let mut slot = vec![usize::MAX; labels.len()];
        let mut out: Vec<Vec<usize>> = Vec::new();
        for (x, &l) in labels.iter().enumerate() {
            if slot[l] == usize::MAX {
                slot[l] = out.len();
                out.push(Vec::new());
            }
            out[slot[l]].push(x);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn representative_is_class_minimum() {
        let mut uf = UnionFind::new(6);
        assert!(uf.union(5, 3));
        assert!(uf.union(3, 4));
        assert!(!uf.union(4, 5));
        assert!(uf.union(1, 5));
        assert_eq!(uf.find(4), 1);
        assert_eq!(uf.labels(), vec![0, 1, 2, 1, 1, 1]);
        assert_eq!(uf.classes(), vec![vec![0], vec![1, 3, 4, 5], vec![2]]);
    }

    #[test]
    fn merge_order_does_not_change_labels() {
        let pairs = [(0, 7), (2, 3), (7, 3), (5, 6), (6, 1)];
        let mut a = UnionFind::new(8);
        let mut b = UnionFind::new(8);
        for &(x, y) in &pairs {
            a.union(x, y);
        }
        for &(x, y) in pairs.iter().rev() {
            b.union(y, x);
        }
        assert_eq!(a.labels(), b.labels());
    }
}
