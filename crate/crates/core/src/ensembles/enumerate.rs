use std::collections::BTreeMap;

use num_bigint::BigUint;

use super::sample::Builder;
use crate::error::{Error, Result};
use crate::tree::Topology;

pub const LABELED_ENUMERATION_MAX_LEAVES: usize = 7;
pub const PLANAR_ENUMERATION_MAX_LEAVES: usize = 10;

/// `(2n-3)!!`, the number of rooted binary topologies on `n >= 2` leaves.
pub fn double_factorial(n: usize) -> BigUint {
    (1..2 * n.max(2) - 2).step_by(2).map(BigUint::from).product()
}

/// Every rooted binary topology on `1..=n`, generated by the same edge
/// insertion as the sampler.
pub fn enumerate_labeled_topologies(n: usize) -> Result<Vec<Topology>> {
    if n < 2 {
        return Err(Error::TooFewLeaves { n, min: 2 });
    }
    if n > LABELED_ENUMERATION_MAX_LEAVES {
        return Err(Error::TooManyLeaves {
            n,
            max: LABELED_ENUMERATION_MAX_LEAVES,
        });
    }
    let mut level = vec![Builder::cherry()];
    for label in 3..=n {
        level = level
            .iter()
            .flat_map(|b| {
                (0..b.slots()).map(move |slot| {
                    let mut next = b.clone();
                    next.insert(slot, label);
                    next
                })
            })
            .collect();
    }
    Ok(level.iter().map(|b| b.topology(n)).collect())
}

/// Tallies over all unlabeled planar rooted binary trees with `n` leaves.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlanarCensus {
    pub n: usize,
    pub trees: u64,
    /// Tree-vertex pairs with the vertex internal.
    pub marked: u64,
    /// Marked pairs by (leaves under the left child, leaves under the right child).
    pub by_ab: BTreeMap<(usize, usize), u64>,
}

/// Exhaustive generation of planar trees, recording `(l(v), r(v))` at every
/// internal vertex.
pub fn enumerate_planar_trees(n: usize) -> Result<PlanarCensus> {
    if n < 1 {
        return Err(Error::TooFewLeaves { n, min: 1 });
    }
    if n > PLANAR_ENUMERATION_MAX_LEAVES {
        return Err(Error::TooManyLeaves {
            n,
            max: PLANAR_ENUMERATION_MAX_LEAVES,
        });
    }
    // shapes[k]: each planar tree on k leaves as its list of (l, r) splits
    let mut shapes: Vec<Vec<Vec<(usize, usize)>>> = vec![Vec::new(), vec![Vec::new()]];
    for k in 2..=n {
        let mut here = Vec::new();
        for left in 1..k {
            for l in &shapes[left] {
                for r in &shapes[k - left] {
                    let mut splits = Vec::with_capacity(k - 1);
                    splits.extend_from_slice(l);
                    splits.extend_from_slice(r);
                    splits.push((left, k - left));
                    here.push(splits);
                }
            }
        }
        shapes.push(here);
    }
    let mut census = PlanarCensus {
        n,
        trees: shapes[n].len() as u64,
        marked: 0,
        by_ab: BTreeMap::new(),
    };
    for splits in &shapes[n] {
        for &ab in splits {
            census.marked += 1;
            *census.by_ab.entry(ab).or_default() += 1;
        }
    }
    Ok(census)
}
