use crate::graph::FGraph;

/// Equivalence on `0..n`, stored as class labels numbered by first occurrence.
/// Class `k`'s smallest member is therefore the first index labelled `k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    labels: Vec<usize>,
    classes: usize,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.0[hi] = lo;
        }
    }
}

impl Partition {
    pub fn discrete(n: usize) -> Partition {
        Partition { labels: (0..n).collect(), classes: n }
    }

    pub fn total(n: usize) -> Partition {
        Partition { labels: vec![0; n], classes: usize::from(n > 0) }
    }

    /// Renumbers arbitrary labels by first occurrence.
    pub fn from_labels<T: Eq + std::hash::Hash + Clone>(labels: &[T]) -> Partition {
        let mut seen = std::collections::HashMap::new();
        let labels = labels
            .iter()
            .map(|l| {
                let k = seen.len();
                *seen.entry(l.clone()).or_insert(k)
            })
            .collect();
        Partition { labels, classes: seen.len() }
    }

    /// Smallest equivalence containing the given pairs.
    pub fn generated(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Partition {
        let mut uf = UnionFind((0..n).collect());
        for (a, b) in pairs {
            uf.union(a, b);
        }
        let roots: Vec<usize> = (0..n).map(|i| uf.find(i)).collect();
        Partition::from_labels(&roots)
    }

    pub fn from_classes(n: usize, classes: &[Vec<usize>]) -> Partition {
        Partition::generated(n, classes.iter().flat_map(|c| c.windows(2).map(|w| (w[0], w[1]))))
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn class_count(&self) -> usize {
        self.classes
    }

    pub fn class_of(&self, i: usize) -> usize {
        self.labels[i]
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn same(&self, i: usize, j: usize) -> bool {
        self.labels[i] == self.labels[j]
    }

    pub fn classes(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.classes];
        for (i, &l) in self.labels.iter().enumerate() {
            out[l].push(i);
        }
        out
    }

    /// Smallest member of each class, by class number.
    pub fn representatives(&self) -> Vec<usize> {
        let mut out = vec![usize::MAX; self.classes];
        for (i, &l) in self.labels.iter().enumerate() {
            out[l] = out[l].min(i);
        }
        out
    }

    /// `self ⊆ other` as relations.
    pub fn refines(&self, other: &Partition) -> bool {
        let reps = self.representatives();
        (0..self.len()).all(|i| other.same(i, reps[self.labels[i]]))
    }

    pub fn meet(&self, other: &Partition) -> Partition {
        let pairs: Vec<(usize, usize)> = self.labels.iter().copied().zip(other.labels.iter().copied()).collect();
        Partition::from_labels(&pairs)
    }

    pub fn join(&self, other: &Partition) -> Partition {
        let n = self.len();
        let reps_a = self.representatives();
        let reps_b = other.representatives();
        let pairs = (0..n).flat_map(|i| [(i, reps_a[self.labels[i]]), (i, reps_b[other.labels[i]])]);
        Partition::generated(n, pairs)
    }

    pub fn is_discrete(&self) -> bool {
        self.classes == self.len()
    }

    /// All related pairs `(i, j)`, lexicographic.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let classes = self.classes();
        let mut out = Vec::new();
        for i in 0..self.len() {
            for &j in &classes[self.labels[i]] {
                out.push((i, j));
            }
        }
        out
    }
}

/// An equivalence on edges and one on vertices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EquivPair {
    pub edges: Partition,
    pub vertices: Partition,
}

impl EquivPair {
    pub fn discrete(g: &FGraph) -> EquivPair {
        EquivPair { edges: Partition::discrete(g.edge_count()), vertices: Partition::discrete(g.vertex_count()) }
    }

    pub fn total(g: &FGraph) -> EquivPair {
        EquivPair { edges: Partition::total(g.edge_count()), vertices: Partition::total(g.vertex_count()) }
    }

    pub fn refines(&self, other: &EquivPair) -> bool {
        self.edges.refines(&other.edges) && self.vertices.refines(&other.vertices)
    }

    pub fn meet(&self, other: &EquivPair) -> EquivPair {
        EquivPair { edges: self.edges.meet(&other.edges), vertices: self.vertices.meet(&other.vertices) }
    }

    pub fn fits(&self, g: &FGraph) -> bool {
        self.edges.len() == g.edge_count() && self.vertices.len() == g.vertex_count()
    }
}

/// All partitions of `0..n` in restricted-growth order.
pub fn all_partitions(n: usize) -> Vec<Partition> {
    fn go(i: usize, n: usize, cur: &mut Vec<usize>, k: usize, out: &mut Vec<Partition>) {
        if i == n {
            out.push(Partition { labels: cur.clone(), classes: k });
            return;
        }
        for l in 0..=k {
            cur.push(l);
            go(i + 1, n, cur, if l == k { k + 1 } else { k }, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, &mut Vec::new(), 0, &mut out);
    out
}
