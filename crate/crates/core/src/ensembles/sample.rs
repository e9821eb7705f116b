use std::collections::{HashMap, VecDeque};

use rand::seq::index;
use rand::Rng;

use crate::error::{Error, Result};
use crate::metric::ExactScalar;
use crate::tree::{is_generic_pair, EquidistantTree, LeafSet, Topology};

/// Redraws of heights allowed before a pair is declared unobtainable.
pub const RESAMPLE_LIMIT: usize = 1000;

/// Default height range `n^6`, capped at `2^62`.
pub fn default_height_range(n: usize) -> u64 {
    (n as u64).checked_pow(6).map_or(1 << 62, |m| m.min(1 << 62))
}

/// Growing rooted binary tree used by the insertion sampler and enumerator.
#[derive(Clone)]
pub(crate) struct Builder {
    nodes: Vec<Node>,
    root: usize,
}

#[derive(Clone, Copy)]
struct Node {
    parent: Option<usize>,
    label: Option<usize>,
    kids: [usize; 2],
}

impl Builder {
    /// Cherry on leaves 1 and 2.
    pub(crate) fn cherry() -> Self {
        let leaf = |label| Node {
            parent: Some(2),
            label: Some(label),
            kids: [0; 2],
        };
        Self {
            nodes: vec![
                leaf(1),
                leaf(2),
                Node {
                    parent: None,
                    label: None,
                    kids: [0, 1],
                },
            ],
            root: 2,
        }
    }

    /// Number of places a new leaf can attach: above any current vertex.
    pub(crate) fn slots(&self) -> usize {
        self.nodes.len()
    }

    /// Attaches the next leaf on the edge above vertex `slot`.
    pub(crate) fn insert(&mut self, slot: usize, label: usize) {
        let leaf = self.nodes.len();
        let joint = leaf + 1;
        let above = self.nodes[slot].parent;
        self.nodes.push(Node {
            parent: Some(joint),
            label: Some(label),
            kids: [0; 2],
        });
        self.nodes.push(Node {
            parent: above,
            label: None,
            kids: [slot, leaf],
        });
        self.nodes[slot].parent = Some(joint);
        match above {
            Some(p) => {
                let k = &mut self.nodes[p].kids;
                let side = usize::from(k[1] == slot);
                k[side] = joint;
            }
            None => self.root = joint,
        }
    }

    pub(crate) fn topology(&self, n: usize) -> Topology {
        let mut clades = Vec::with_capacity(n - 1);
        self.collect(self.root, n, &mut clades);
        Topology::from_laminar_unchecked(n, clades)
    }

    fn collect(&self, v: usize, n: usize, out: &mut Vec<LeafSet>) -> LeafSet {
        let node = self.nodes[v];
        if let Some(label) = node.label {
            return LeafSet::singleton(n, label);
        }
        let set = self.collect(node.kids[0], n, out).union(&self.collect(node.kids[1], n, out));
        out.push(set.clone());
        set
    }
}

/// Uniform over the `(2n-3)!!` rooted binary topologies on `1..=n`, by
/// attaching leaves `3..=n` one at a time to a uniformly chosen edge
/// (including the edge above the root).
pub fn sample_topology_uniform<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Topology> {
    if n < 2 {
        return Err(Error::TooFewLeaves { n, min: 2 });
    }
    let mut b = Builder::cherry();
    for label in 3..=n {
        let slot = rng.gen_range(0..b.slots());
        b.insert(slot, label);
    }
    Ok(b.topology(n))
}

/// Distinct heights drawn from `1..=m`, largest at the root and handed out
/// in breadth-first order so parents sit above children.
pub fn assign_generic_heights<R: Rng + ?Sized>(
    topology: &Topology,
    rng: &mut R,
    m: u64,
) -> Result<EquidistantTree> {
    if !topology.is_binary() {
        return Err(Error::NonBinary);
    }
    let n = topology.n();
    if m < (n - 1) as u64 || m > usize::MAX as u64 {
        return Err(Error::InvalidArgument(format!(
            "height range {m} cannot hold {} distinct heights",
            n - 1
        )));
    }
    let mut heights: Vec<u64> = index::sample(rng, m as usize, n - 1)
        .into_iter()
        .map(|k| k as u64 + 1)
        .collect();
    heights.sort_unstable_by(|a, b| b.cmp(a));

    let mut order = Vec::with_capacity(n - 1);
    let mut queue = VecDeque::from([LeafSet::full(n)]);
    while let Some(c) = queue.pop_front() {
        for child in topology.children_of(&c) {
            if child.len() > 1 {
                queue.push_back(child);
            }
        }
        order.push(c);
    }
    let by_clade: HashMap<LeafSet, u64> = order.into_iter().zip(heights).collect();
    EquidistantTree::from_topology(topology, |c| ExactScalar::from_integer(by_clade[c] as i64))
}

/// A sampled pair and how many height draws it took.
#[derive(Debug, Clone)]
pub struct GenericPairSample {
    pub t1: EquidistantTree,
    pub t2: EquidistantTree,
    pub attempts: usize,
}

/// Two independent uniform topologies with heights redrawn until the pair
/// is generic. Topologies are never redrawn, so their law stays uniform.
pub fn sample_generic_pair<R: Rng + ?Sized>(
    n: usize,
    rng: &mut R,
    m: u64,
) -> Result<GenericPairSample> {
    if n < 3 {
        return Err(Error::TooFewLeaves { n, min: 3 });
    }
    let top1 = sample_topology_uniform(n, rng)?;
    let top2 = sample_topology_uniform(n, rng)?;
    for attempts in 1..=RESAMPLE_LIMIT {
        let t1 = assign_generic_heights(&top1, rng, m)?;
        let t2 = assign_generic_heights(&top2, rng, m)?;
        if is_generic_pair(&t1, &t2) {
            return Ok(GenericPairSample { t1, t2, attempts });
        }
    }
    Err(Error::ResampleLimit(RESAMPLE_LIMIT))
}
