use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;

use super::leafset::LeafSet;
use super::topology::Topology;
use crate::error::{Error, Result};
use crate::metric::{pair_count, pairs, position_unchecked, ExactScalar, UltraVector};

/// Vertex handle inside one [`EquidistantTree`]. Leaves are `0..n`
/// (label `k` is vertex `k - 1`); internal vertices follow.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub usize);

/// Rooted tree on leaves `1..=n` with an exact height on every vertex.
///
/// Leaves sit at height zero and every internal vertex is strictly higher
/// than its internal children, so all leaves are equidistant from the root
/// by construction. Pendant edges may have any length.
#[derive(Clone)]
pub struct EquidistantTree {
    n: usize,
    parent: Vec<Option<usize>>,
    children: Vec<Vec<usize>>,
    height: Vec<ExactScalar>,
    root: usize,
}

impl EquidistantTree {
    /// Builds a tree from the child lists of its internal vertices.
    ///
    /// Internal vertex `k` of the input becomes `VertexId(n + k)`; child
    /// references use the same numbering.
    pub fn from_internal(
        n: usize,
        internal_children: Vec<Vec<usize>>,
        internal_heights: Vec<ExactScalar>,
    ) -> Result<Self> {
        if n < 2 {
            return Err(Error::TooFewLeaves { n, min: 2 });
        }
        if internal_children.len() != internal_heights.len() {
            return Err(Error::InvalidTree("one height per internal vertex required".into()));
        }
        let total = n + internal_children.len();
        let mut parent = vec![None; total];
        let mut children = vec![Vec::new(); n];
        for (k, kids) in internal_children.into_iter().enumerate() {
            let v = n + k;
            if kids.len() < 2 {
                return Err(Error::InvalidTree(format!(
                    "internal vertex {v} has {} child(ren)",
                    kids.len()
                )));
            }
            for &c in &kids {
                if c >= total {
                    return Err(Error::InvalidTree(format!("child {c} does not exist")));
                }
                if parent[c].replace(v).is_some() {
                    return Err(Error::InvalidTree(format!("vertex {c} has two parents")));
                }
            }
            children.push(kids);
        }
        let roots: Vec<usize> = (n..total).filter(|&v| parent[v].is_none()).collect();
        if roots.len() != 1 {
            return Err(Error::InvalidTree(format!("{} roots", roots.len())));
        }
        if let Some(orphan) = (0..n).find(|&v| parent[v].is_none()) {
            return Err(Error::InvalidTree(format!("leaf {} is detached", orphan + 1)));
        }
        let mut height = vec![ExactScalar::zero(); n];
        height.extend(internal_heights);
        let mut tree = Self {
            n,
            parent,
            children,
            height,
            root: roots[0],
        };
        // Every vertex must be reachable from the root, which also rules out cycles.
        let order = tree.preorder();
        if order.len() != total {
            return Err(Error::InvalidTree("cycle or unreachable vertex".into()));
        }
        for v in n..total {
            for &c in &tree.children[v] {
                if c >= n && tree.height[c] >= tree.height[v] {
                    return Err(Error::InvalidTree(format!(
                        "vertex {v} at height {} is not above its child at height {}",
                        tree.height[v], tree.height[c]
                    )));
                }
            }
        }
        let min_leaf = tree.min_leaf_labels();
        for kids in tree.children.iter_mut() {
            kids.sort_by_key(|&c| min_leaf[c]);
        }
        Ok(tree)
    }

    /// Realizes a topology, taking each internal vertex's height from its clade.
    pub fn from_topology(
        topology: &Topology,
        mut height_of: impl FnMut(&LeafSet) -> ExactScalar,
    ) -> Result<Self> {
        let n = topology.n();
        let clades: Vec<&LeafSet> = topology.clades().collect();
        let index: HashMap<&LeafSet, usize> =
            clades.iter().enumerate().map(|(k, c)| (*c, k)).collect();
        let mut internal_children = Vec::with_capacity(clades.len());
        let mut heights = Vec::with_capacity(clades.len());
        for clade in &clades {
            let kids = topology
                .children_of(clade)
                .into_iter()
                .map(|child| match child.len() {
                    1 => child.first().unwrap() - 1,
                    _ => n + index[&child],
                })
                .collect();
            internal_children.push(kids);
            heights.push(height_of(clade));
        }
        Self::from_internal(n, internal_children, heights)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn root(&self) -> VertexId {
        VertexId(self.root)
    }

    pub fn vertex_count(&self) -> usize {
        self.parent.len()
    }

    pub fn leaf(&self, label: usize) -> Result<VertexId> {
        if label == 0 || label > self.n {
            return Err(Error::UnknownLeaf(label));
        }
        Ok(VertexId(label - 1))
    }

    pub fn is_leaf(&self, v: VertexId) -> bool {
        v.0 < self.n
    }

    pub fn internal_vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        (self.n..self.vertex_count()).map(VertexId)
    }

    pub fn internal_count(&self) -> usize {
        self.vertex_count() - self.n
    }

    pub fn children(&self, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.children[v.0].iter().map(|&c| VertexId(c))
    }

    pub fn child_count(&self, v: VertexId) -> usize {
        self.children[v.0].len()
    }

    pub fn parent(&self, v: VertexId) -> Option<VertexId> {
        self.parent[v.0].map(VertexId)
    }

    pub fn height(&self, v: VertexId) -> &ExactScalar {
        &self.height[v.0]
    }

    /// Vertices with parents before children.
    fn preorder(&self) -> Vec<usize> {
        let mut order = Vec::with_capacity(self.vertex_count());
        let mut stack = vec![self.root];
        while let Some(v) = stack.pop() {
            if order.len() > self.vertex_count() {
                break;
            }
            order.push(v);
            stack.extend(self.children[v].iter().rev());
        }
        order
    }

    fn min_leaf_labels(&self) -> Vec<usize> {
        let mut min = vec![usize::MAX; self.vertex_count()];
        for leaf in 0..self.n {
            min[leaf] = leaf + 1;
        }
        for &v in self.preorder().iter().rev() {
            for &c in &self.children[v] {
                min[v] = min[v].min(min[c]);
            }
        }
        min
    }

    /// Leaves below `v`.
    pub fn clade(&self, v: VertexId) -> LeafSet {
        let mut set = LeafSet::empty(self.n);
        let mut stack = vec![v.0];
        while let Some(x) = stack.pop() {
            if x < self.n {
                set.insert(x + 1);
            } else {
                stack.extend(&self.children[x]);
            }
        }
        set
    }

    /// Clades of all vertices, indexed by vertex id.
    pub fn all_clades(&self) -> Vec<LeafSet> {
        let mut clades = vec![LeafSet::empty(self.n); self.vertex_count()];
        for leaf in 0..self.n {
            clades[leaf].insert(leaf + 1);
        }
        for &v in self.preorder().iter().rev() {
            if v >= self.n {
                let mut set = LeafSet::empty(self.n);
                for &c in &self.children[v] {
                    set = set.union(&clades[c]);
                }
                clades[v] = set;
            }
        }
        clades
    }

    pub fn lca(&self, i: usize, j: usize) -> Result<VertexId> {
        let a = self.leaf(i)?;
        let b = self.leaf(j)?;
        if a == b {
            return Err(Error::InvalidArgument(format!("lca needs two distinct leaves, got {i} twice")));
        }
        let depth = |mut v: usize| {
            let mut d = 0;
            while let Some(p) = self.parent[v] {
                v = p;
                d += 1;
            }
            d
        };
        let (mut x, mut y) = (a.0, b.0);
        let (mut dx, mut dy) = (depth(x), depth(y));
        while dx > dy {
            x = self.parent[x].unwrap();
            dx -= 1;
        }
        while dy > dx {
            y = self.parent[y].unwrap();
            dy -= 1;
        }
        while x != y {
            x = self.parent[x].unwrap();
            y = self.parent[y].unwrap();
        }
        Ok(VertexId(x))
    }

    /// LCA of every leaf pair, in lexicographic pair order.
    pub fn lca_table(&self) -> Vec<VertexId> {
        let mut table = vec![VertexId(self.root); pair_count(self.n)];
        let mut below: Vec<Vec<usize>> = vec![Vec::new(); self.vertex_count()];
        for leaf in 0..self.n {
            below[leaf].push(leaf + 1);
        }
        for &v in self.preorder().iter().rev() {
            if v < self.n {
                continue;
            }
            let kids = &self.children[v];
            for (a, &ca) in kids.iter().enumerate() {
                for &cb in &kids[a + 1..] {
                    for &i in &below[ca] {
                        for &j in &below[cb] {
                            let (i, j) = if i < j { (i, j) } else { (j, i) };
                            table[position_unchecked(self.n, i, j)] = VertexId(v);
                        }
                    }
                }
            }
            let mut merged = Vec::new();
            for &c in kids {
                merged.append(&mut below[c]);
            }
            below[v] = merged;
        }
        table
    }

    /// Distance vector with entries `2 * height(lca(i, j))`.
    pub fn to_ultrametric(&self) -> UltraVector {
        let table = self.lca_table();
        let entries = table.iter().map(|v| self.height[v.0].double()).collect();
        UltraVector::new(self.n, entries).expect("lca table has C(n,2) entries")
    }

    /// Inverse of [`EquidistantTree::to_ultrametric`], by exact
    /// single-linkage clustering over the distinct values of `u`.
    ///
    /// Tied merge heights produce multifurcations.
    pub fn from_ultrametric(u: &UltraVector) -> Result<Self> {
        let n = u.n();
        if n < 3 {
            return Err(Error::TooFewLeaves { n, min: 3 });
        }
        let entries = u.entries();
        let all_pairs: Vec<_> = pairs(n).collect();
        let mut order: Vec<usize> = (0..entries.len()).collect();
        order.sort_by(|&a, &b| entries[a].cmp(&entries[b]));

        let mut uf = UnionFind::new(n);
        let mut top: Vec<usize> = (0..n).collect();
        let mut internal_children: Vec<Vec<usize>> = Vec::new();
        let mut heights = Vec::new();
        let mut start = 0;
        while start < order.len() {
            let value = &entries[order[start]];
            let mut end = start;
            while end < order.len() && &entries[order[end]] == value {
                end += 1;
            }
            let mut touched = Vec::new();
            for &k in &order[start..end] {
                let p = all_pairs[k];
                let (ri, rj) = (uf.find(p.i - 1), uf.find(p.j - 1));
                if ri != rj {
                    touched.push(ri);
                    touched.push(rj);
                }
            }
            touched.sort_unstable();
            touched.dedup();
            for &k in &order[start..end] {
                let p = all_pairs[k];
                uf.union(p.i - 1, p.j - 1);
            }
            let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
            for old in touched {
                groups.entry(uf.find(old)).or_default().push(old);
            }
            for (new_root, olds) in groups {
                let v = n + internal_children.len();
                internal_children.push(olds.iter().map(|&r| top[r]).collect());
                heights.push(value.half());
                top[new_root] = v;
            }
            start = end;
        }
        let tree = Self::from_internal(n, internal_children, heights);
        match tree {
            Ok(tree) if &tree.to_ultrametric() == u => Ok(tree),
            _ => {
                let (i, j, k) = u
                    .three_point_violation()
                    .expect("single linkage reproduces every ultrametric");
                Err(Error::NotUltrametric(i, j, k))
            }
        }
    }

    pub fn topology(&self) -> Topology {
        let clades = self.all_clades();
        Topology::from_laminar_unchecked(self.n, clades.into_iter().skip(self.n).collect())
    }

    /// Exactly `n - 1` internal vertices, i.e. every internal vertex is binary.
    pub fn is_generic(&self) -> bool {
        self.internal_count() == self.n - 1
    }

    /// Child counts of the internal vertices.
    pub fn branching_profile(&self) -> Vec<usize> {
        self.internal_vertices().map(|v| self.child_count(v)).collect()
    }

    /// Clade-to-height map; equal for isomorphic trees with equal heights.
    pub fn clade_heights(&self) -> BTreeMap<LeafSet, ExactScalar> {
        let clades = self.all_clades();
        self.internal_vertices()
            .map(|v| (clades[v.0].clone(), self.height[v.0].clone()))
            .collect()
    }

    /// Internal vertices in breadth-first order from the root.
    pub fn breadth_first_internal(&self) -> Vec<VertexId> {
        let mut out = Vec::with_capacity(self.internal_count());
        let mut queue = VecDeque::from([self.root]);
        while let Some(v) = queue.pop_front() {
            if v >= self.n {
                out.push(VertexId(v));
                queue.extend(&self.children[v]);
            }
        }
        out
    }
}

/// Both trees generic on the same leaves, and the `(n-1)^2` differences
/// `h1(x1) - h2(x2)` over internal vertex pairs are pairwise distinct.
pub fn is_generic_pair(t1: &EquidistantTree, t2: &EquidistantTree) -> bool {
    if t1.n() != t2.n() || !t1.is_generic() || !t2.is_generic() {
        return false;
    }
    let mut diffs: Vec<ExactScalar> = t1
        .internal_vertices()
        .flat_map(|x| t2.internal_vertices().map(move |y| t1.height(x) - t2.height(y)))
        .collect();
    diffs.sort_unstable();
    diffs.windows(2).all(|w| w[0] != w[1])
}

impl PartialEq for EquidistantTree {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.clade_heights() == other.clade_heights()
    }
}

impl Eq for EquidistantTree {}

impl fmt::Debug for EquidistantTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "EquidistantTree({})", super::newick::write_newick(self))
    }
}

struct UnionFind {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            rank: vec![0; n],
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        match self.rank[ra].cmp(&self.rank[rb]) {
            std::cmp::Ordering::Less => self.parent[ra] = rb,
            std::cmp::Ordering::Greater => self.parent[rb] = ra,
            std::cmp::Ordering::Equal => {
                self.parent[rb] = ra;
                self.rank[ra] += 1;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> ExactScalar {
        s.parse().unwrap()
    }

    fn cherry_tree() -> EquidistantTree {
        // ((1,2),3): cherry at 1/2, root at 3/2
        EquidistantTree::from_internal(3, vec![vec![0, 1], vec![3, 2]], vec![q("1/2"), q("3/2")])
            .unwrap()
    }

    #[test]
    fn lca_on_cherry() {
        let t = cherry_tree();
        let cherry = VertexId(3);
        assert_eq!(t.lca(1, 2).unwrap(), cherry);
        assert_eq!(t.lca(1, 3).unwrap(), t.root());
        assert_eq!(t.lca(2, 3).unwrap(), t.root());
        assert_eq!(t.lca(1, 4), Err(Error::UnknownLeaf(4)));
        assert!(t.lca(2, 2).is_err());
        assert_eq!(t.lca_table(), vec![cherry, t.root(), t.root()]);
    }

    #[test]
    fn tree_to_ultrametric_examples() {
        let u = cherry_tree().to_ultrametric();
        assert_eq!(u, UltraVector::from_integers(3, &[1, 3, 3]).unwrap());
        let star = EquidistantTree::from_internal(4, vec![vec![0, 1, 2, 3]], vec![q("5/2")]).unwrap();
        assert!(star.to_ultrametric().entries().iter().all(|e| *e == q("5")));
        assert!(!star.is_generic());
    }

    #[test]
    fn ultrametric_to_tree_examples() {
        let t = EquidistantTree::from_ultrametric(&UltraVector::from_integers(3, &[1, 3, 3]).unwrap())
            .unwrap();
        assert_eq!(t, cherry_tree());
        assert!(t.is_generic());

        let star = EquidistantTree::from_ultrametric(&UltraVector::from_integers(3, &[3, 3, 3]).unwrap())
            .unwrap();
        assert_eq!(star.internal_count(), 1);
        assert_eq!(star.branching_profile(), vec![3]);
        assert!(!star.is_generic());

        let bad = UltraVector::from_integers(3, &[1, 2, 3]).unwrap();
        assert_eq!(
            EquidistantTree::from_ultrametric(&bad),
            Err(Error::NotUltrametric(1, 2, 3))
        );
        let n2 = UltraVector::from_integers(2, &[1]).unwrap();
        assert!(EquidistantTree::from_ultrametric(&n2).is_err());
    }

    #[test]
    fn negative_and_zero_entries_are_fine() {
        let u = UltraVector::from_integers(4, &[-4, 0, 0, 0, 0, -2]).unwrap();
        let t = EquidistantTree::from_ultrametric(&u).unwrap();
        assert_eq!(t.to_ultrametric(), u);
        assert!(t.is_generic());
    }

    #[test]
    fn rejects_malformed_internal_structure() {
        let h = |v: i64| ExactScalar::from_integer(v);
        assert!(EquidistantTree::from_internal(3, vec![vec![0], vec![3, 1, 2]], vec![h(1), h(2)]).is_err());
        assert!(EquidistantTree::from_internal(3, vec![vec![0, 1], vec![3, 2]], vec![h(2), h(1)]).is_err());
        assert!(EquidistantTree::from_internal(3, vec![vec![0, 1], vec![1, 2]], vec![h(1), h(2)]).is_err());
        assert!(EquidistantTree::from_internal(3, vec![vec![0, 1]], vec![h(1)]).is_err());
    }

    #[test]
    fn generic_pair_detection() {
        let t = cherry_tree();
        assert!(!is_generic_pair(&t, &t));
        let other = EquidistantTree::from_internal(3, vec![vec![1, 2], vec![0, 3]], vec![q("1"), q("7/2")])
            .unwrap();
        assert!(is_generic_pair(&t, &other));
        // 1/2 - 1 = 3/2 - 2: duplicated difference
        let clash = EquidistantTree::from_internal(3, vec![vec![1, 2], vec![0, 3]], vec![q("1"), q("2")])
            .unwrap();
        assert!(!is_generic_pair(&t, &clash));
    }
}
