use std::collections::{BTreeSet, HashSet, VecDeque};

use super::leafset::LeafSet;
use crate::error::{Error, Result};
use crate::metric::UltraVector;

/// Largest leaf count accepted by the breadth-first NNI distance.
pub const NNI_BFS_MAX_LEAVES: usize = 7;

/// Leaf-labelled rooted tree shape, kept as its family of clades.
///
/// The full leaf set is always present; singletons are implicit.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Topology {
    n: usize,
    clades: BTreeSet<LeafSet>,
}

impl Topology {
    /// Validates that the clades form a laminar family on `1..=n`.
    pub fn from_clades(n: usize, clades: impl IntoIterator<Item = LeafSet>) -> Result<Self> {
        if n < 2 {
            return Err(Error::TooFewLeaves { n, min: 2 });
        }
        let full = LeafSet::full(n);
        let mut set = BTreeSet::new();
        for clade in clades {
            if !clade.is_subset(&full) || clade.labels().any(|l| l > n) {
                return Err(Error::InvalidTree(format!("clade {clade:?} leaves 1..={n}")));
            }
            if clade.len() < 2 {
                return Err(Error::InvalidTree(format!("clade {clade:?} has fewer than two leaves")));
            }
            set.insert(clade);
        }
        set.insert(full);
        let list: Vec<&LeafSet> = set.iter().collect();
        for (a, x) in list.iter().enumerate() {
            for y in &list[a + 1..] {
                if x.intersects(y) && !x.is_subset(y) && !y.is_subset(x) {
                    return Err(Error::InvalidTree(format!("clades {x:?} and {y:?} overlap")));
                }
            }
        }
        Ok(Self { n, clades: set })
    }

    /// Clades given as label lists, as in the JSON exchange format.
    pub fn from_label_lists(n: usize, lists: &[Vec<usize>]) -> Result<Self> {
        for &label in lists.iter().flatten() {
            if label == 0 || label > n {
                return Err(Error::UnknownLeaf(label));
            }
        }
        Self::from_clades(n, lists.iter().map(|l| LeafSet::from_labels(n, l.iter().copied())))
    }

    pub(crate) fn from_laminar_unchecked(n: usize, clades: Vec<LeafSet>) -> Self {
        Self {
            n,
            clades: clades.into_iter().collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn clades(&self) -> impl Iterator<Item = &LeafSet> {
        self.clades.iter()
    }

    pub fn clade_count(&self) -> usize {
        self.clades.len()
    }

    pub fn contains(&self, clade: &LeafSet) -> bool {
        self.clades.contains(clade)
    }

    pub fn is_binary(&self) -> bool {
        self.clades.len() == self.n - 1
    }

    /// Smallest clade strictly containing `clade`, if any.
    pub fn parent_of(&self, clade: &LeafSet) -> Option<&LeafSet> {
        self.clades
            .iter()
            .filter(|c| *c != clade && clade.is_subset(c))
            .min_by_key(|c| c.len())
    }

    /// Children of a clade: maximal proper sub-clades plus uncovered leaves.
    pub fn children_of(&self, clade: &LeafSet) -> Vec<LeafSet> {
        let inner: Vec<&LeafSet> = self
            .clades
            .iter()
            .filter(|c| *c != clade && c.is_subset(clade))
            .collect();
        let mut kids: Vec<LeafSet> = inner
            .iter()
            .filter(|c| !inner.iter().any(|d| d.len() > c.len() && c.is_subset(d)))
            .map(|c| (*c).clone())
            .collect();
        let mut covered = LeafSet::empty(self.n);
        for k in &kids {
            covered = covered.union(k);
        }
        for label in clade.difference(&covered).labels().collect::<Vec<_>>() {
            kids.push(LeafSet::singleton(self.n, label));
        }
        kids.sort_by_key(|k| k.first());
        kids
    }

    /// Sorted clade lists: each clade ascending, clades by size then labels.
    pub fn to_label_lists(&self) -> Vec<Vec<usize>> {
        let mut lists: Vec<Vec<usize>> = self.clades.iter().map(|c| c.labels().collect()).collect();
        lists.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        lists
    }

    /// Applies `label -> relabel[label - 1]`.
    pub fn relabel(&self, relabel: &[usize]) -> Result<Self> {
        if relabel.len() != self.n {
            return Err(Error::WrongLength {
                n: self.n,
                expected: self.n,
                found: relabel.len(),
            });
        }
        let clades = self
            .clades
            .iter()
            .map(|c| LeafSet::from_labels(self.n, c.labels().map(|l| relabel[l - 1])));
        Self::from_clades(self.n, clades)
    }

    /// Induced topology on `leaves`, relabelled `1..=leaves.len()` in the given order.
    pub fn restrict(&self, leaves: &[usize]) -> Result<Self> {
        let k = leaves.len();
        let clades = self.clades.iter().filter_map(|c| {
            let kept = LeafSet::from_labels(
                k,
                leaves.iter().enumerate().filter(|(_, &l)| c.contains(l)).map(|(pos, _)| pos + 1),
            );
            (kept.len() >= 2).then_some(kept)
        });
        Self::from_clades(k, clades)
    }

    /// Topologies one NNI away. Each internal edge (parent clade `p`,
    /// child clade `c = B ∪ C`, sibling side `D = p \ c`) yields the two
    /// regroupings `B ∪ D` and `C ∪ D`.
    pub fn nni_neighbors(&self) -> Result<BTreeSet<Topology>> {
        if !self.is_binary() {
            return Err(Error::NonBinary);
        }
        let mut out = BTreeSet::new();
        for child in &self.clades {
            let Some(parent) = self.parent_of(child) else {
                continue;
            };
            let sibling = parent.difference(child);
            for part in self.children_of(child) {
                let mut clades = self.clades.clone();
                clades.remove(child);
                clades.insert(part.union(&sibling));
                out.insert(Topology { n: self.n, clades });
            }
        }
        Ok(out)
    }
}

/// Same coarse topology via argmax over every triple.
pub fn topology_equal_argmax(u: &UltraVector, v: &UltraVector) -> Result<bool> {
    if u.n() != v.n() {
        return Err(Error::DimensionMismatch {
            left: u.n(),
            right: v.n(),
        });
    }
    let n = u.n();
    for i in 1..=n {
        for j in i + 1..=n {
            for k in j + 1..=n {
                if argmax_mask(u, i, j, k) != argmax_mask(v, i, j, k) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

fn argmax_mask(u: &UltraVector, i: usize, j: usize, k: usize) -> u8 {
    let vals = [u.get(i, j), u.get(i, k), u.get(j, k)];
    let max = vals.iter().max().unwrap();
    vals.iter()
        .enumerate()
        .filter(|(_, x)| *x == max)
        .fold(0, |m, (b, _)| m | (1 << b))
}

/// Same topology via edge splits.
pub fn topology_equal_splits(t1: &Topology, t2: &Topology) -> bool {
    t1 == t2
}

/// NNI-graph distance by breadth-first search, for `n <= 7`.
pub fn nni_distance_exact(t1: &Topology, t2: &Topology) -> Result<usize> {
    if t1.n() != t2.n() {
        return Err(Error::DimensionMismatch {
            left: t1.n(),
            right: t2.n(),
        });
    }
    if t1.n() > NNI_BFS_MAX_LEAVES {
        return Err(Error::TooManyLeaves {
            n: t1.n(),
            max: NNI_BFS_MAX_LEAVES,
        });
    }
    if !t1.is_binary() || !t2.is_binary() {
        return Err(Error::NonBinary);
    }
    let mut seen = HashSet::from([t1.clone()]);
    let mut queue = VecDeque::from([(t1.clone(), 0usize)]);
    while let Some((t, d)) = queue.pop_front() {
        if &t == t2 {
            return Ok(d);
        }
        for next in t.nni_neighbors()? {
            if seen.insert(next.clone()) {
                queue.push_back((next, d + 1));
            }
        }
    }
    unreachable!("the NNI graph is connected")
}
