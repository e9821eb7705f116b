use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::metric::ExactScalar;
use crate::tree::{is_generic_pair, EquidistantTree, Topology, VertexId};

/// Pairs `(lca_T1(i, j), lca_T2(i, j))` over all leaf pairs.
pub fn essential_pairs(
    t1: &EquidistantTree,
    t2: &EquidistantTree,
) -> Result<BTreeSet<(VertexId, VertexId)>> {
    if t1.n() != t2.n() {
        return Err(Error::DimensionMismatch {
            left: t1.n(),
            right: t2.n(),
        });
    }
    Ok(t1.lca_table().into_iter().zip(t2.lca_table()).collect())
}

/// `2 (h1(x1) - h2(x2))`.
pub fn lambda_from_heights(
    t1: &EquidistantTree,
    x1: VertexId,
    t2: &EquidistantTree,
    x2: VertexId,
) -> ExactScalar {
    (t1.height(x1) - t2.height(x2)).double()
}

/// Number of turning points for generic metrics on the two topologies,
/// i.e. the number of essential pairs. Refuses non-generic pairs.
pub fn tropical_interchange_number(t1: &EquidistantTree, t2: &EquidistantTree) -> Result<usize> {
    if !is_generic_pair(t1, t2) {
        return Err(Error::NonGenericPair);
    }
    Ok(essential_pairs(t1, t2)?.len())
}

/// LCA of every leaf pair for a bare topology, as clade indices.
///
/// Used when only the count of essential pairs matters, which does not
/// depend on the metric.
#[derive(Debug, Clone)]
pub struct LcaTable(Vec<u16>);

impl LcaTable {
    pub fn new(topology: &Topology) -> Self {
        // clade size is a valid strictly monotone height
        let tree = EquidistantTree::from_topology(topology, |c| ExactScalar::from_integer(c.len() as i64))
            .expect("a topology always realizes as a tree");
        let n = tree.n();
        Self(tree.lca_table().into_iter().map(|v| (v.0 - n) as u16).collect())
    }
}

/// `|Π|` for two topologies on the same leaves.
pub fn essential_pair_count(a: &LcaTable, b: &LcaTable) -> usize {
    let mut seen: Vec<u32> = a.0.iter().zip(&b.0).map(|(&x, &y)| (x as u32) << 16 | y as u32).collect();
    seen.sort_unstable();
    seen.dedup();
    seen.len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::parse_newick;

    #[test]
    fn three_leaf_examples() {
        let t = parse_newick("((1:1,2:1):2,3:3);").unwrap();
        let pairs = essential_pairs(&t, &t).unwrap();
        assert_eq!(pairs.len(), 2);
        assert!(pairs.iter().all(|(a, b)| a == b));

        let star = parse_newick("(1:1,2:1,3:1);").unwrap();
        assert_eq!(essential_pairs(&star, &star).unwrap().len(), 1);

        // same cherry topology, different generic heights
        let t2 = parse_newick("((1:2,2:2):5,3:7);").unwrap();
        assert_eq!(tropical_interchange_number(&t, &t2).unwrap(), 2);
        assert_eq!(tropical_interchange_number(&t, &t), Err(Error::NonGenericPair));
    }

    #[test]
    fn worked_example_root_pair_has_lambda_zero() {
        // trees of (3,3,1) and (3,2,3)
        let t1 = EquidistantTree::from_ultrametric(&crate::UltraVector::from_integers(3, &[3, 3, 1]).unwrap()).unwrap();
        let t2 = EquidistantTree::from_ultrametric(&crate::UltraVector::from_integers(3, &[3, 2, 3]).unwrap()).unwrap();
        assert_eq!(t1.height(t1.root()), &ExactScalar::new(3, 2).unwrap());
        assert_eq!(t2.height(t2.root()), &ExactScalar::new(3, 2).unwrap());
        assert_eq!(lambda_from_heights(&t1, t1.root(), &t2, t2.root()), ExactScalar::zero());
    }

    #[test]
    fn topology_count_matches_tree_count() {
        let t1 = parse_newick("(((1:1,2:1):1,3:2):1,4:3);").unwrap();
        let t2 = parse_newick("((1:1,3:1):2,(2:2,4:2):1);").unwrap();
        let direct = essential_pairs(&t1, &t2).unwrap().len();
        let via = essential_pair_count(&LcaTable::new(&t1.topology()), &LcaTable::new(&t2.topology()));
        assert_eq!(direct, via);
    }
}
