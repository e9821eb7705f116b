//! Tropical line segments between ultrametrics and their turning points.

mod classify;
mod essential;
mod graph;
mod report;

use std::fmt;

use serde::{Deserialize, Serialize};

pub use classify::{check_moves, classify_tree, classify_turning_point, MoveCheck};
pub use essential::{
    essential_pair_count, essential_pairs, lambda_from_heights, tropical_interchange_number,
    LcaTable,
};
pub use graph::{comparison_graph, ComparisonGraph};
pub use report::{SegmentReport, TurningPointReport, Witness};

use crate::error::{Error, Result};
use crate::metric::{ExactScalar, ProjectivePoint, UltraVector};
use crate::tree::{is_generic_pair, EquidistantTree, VertexId};

/// What happens to the tree topology at a turning point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TurningPointClass {
    /// Every internal vertex has two children.
    NoChange,
    /// One vertex with three children: the middle of one NNI.
    #[serde(rename = "SingleNNI")]
    SingleNni,
    /// One vertex with four children: a four-clade rearrangement.
    FourClade,
}

impl TurningPointClass {
    /// NNI moves charged to this kind of turning point.
    pub fn nni_weight(self) -> usize {
        match self {
            TurningPointClass::NoChange => 0,
            TurningPointClass::SingleNni => 1,
            TurningPointClass::FourClade => 3,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            TurningPointClass::NoChange => "NoChange",
            TurningPointClass::SingleNni => "SingleNNI",
            TurningPointClass::FourClade => "FourClade",
        }
    }
}

impl fmt::Display for TurningPointClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone)]
pub struct TurningPoint {
    pub lambda: ExactScalar,
    pub point: ProjectivePoint,
    pub tree: EquidistantTree,
    /// `None` only on segments between non-generic pairs, where the
    /// trichotomy is not guaranteed.
    pub class: Option<TurningPointClass>,
    /// Internal vertices `(x1, x2)` of the endpoint trees with
    /// `lambda = 2 (h1(x1) - h2(x2))`.
    pub witness: Option<(VertexId, VertexId)>,
}

/// The tropical segment from `u` to `v`, described by its turning points
/// in increasing order of the scalar.
#[derive(Debug, Clone)]
pub struct TropicalSegment {
    u: UltraVector,
    v: UltraVector,
    t1: EquidistantTree,
    t2: EquidistantTree,
    generic_pair: bool,
    points: Vec<TurningPoint>,
}

/// Sorted distinct values of `u_k - v_k`.
pub fn turning_scalars(u: &UltraVector, v: &UltraVector) -> Result<Vec<ExactScalar>> {
    let mut diffs = u.difference(v)?;
    diffs.sort_unstable();
    diffs.dedup();
    Ok(diffs)
}

/// Computes every turning point `u ⊕ (λ ⊙ v)`, reconstructs its tree and
/// classifies it.
///
/// Between a generic pair an unclassifiable turning point is reported as
/// [`Error::TheoremViolation`]; otherwise such points are kept with
/// `class: None`.
pub fn tropical_segment(u: &UltraVector, v: &UltraVector) -> Result<TropicalSegment> {
    if u.n() != v.n() {
        return Err(Error::DimensionMismatch {
            left: u.n(),
            right: v.n(),
        });
    }
    let t1 = EquidistantTree::from_ultrametric(u)?;
    let t2 = EquidistantTree::from_ultrametric(v)?;
    build(u.clone(), v.clone(), t1, t2)
}

impl TropicalSegment {
    pub fn between_trees(t1: &EquidistantTree, t2: &EquidistantTree) -> Result<Self> {
        if t1.n() != t2.n() {
            return Err(Error::DimensionMismatch {
                left: t1.n(),
                right: t2.n(),
            });
        }
        build(t1.to_ultrametric(), t2.to_ultrametric(), t1.clone(), t2.clone())
    }

    pub fn u(&self) -> &UltraVector {
        &self.u
    }

    pub fn v(&self) -> &UltraVector {
        &self.v
    }

    pub fn start_tree(&self) -> &EquidistantTree {
        &self.t1
    }

    pub fn end_tree(&self) -> &EquidistantTree {
        &self.t2
    }

    pub fn n(&self) -> usize {
        self.u.n()
    }

    pub fn is_generic_pair(&self) -> bool {
        self.generic_pair
    }

    pub fn points(&self) -> &[TurningPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn lambdas(&self) -> impl Iterator<Item = &ExactScalar> {
        self.points.iter().map(|p| &p.lambda)
    }

    /// `u ⊕ (λ ⊙ v)` for any scalar, un-normalized.
    pub fn point_at(&self, lambda: &ExactScalar) -> UltraVector {
        self.u
            .trop_combine(lambda, &self.v)
            .expect("endpoints share n")
    }

    /// Scalars `λ_i + t (λ_{i+1} - λ_i)` for each fraction `t` and each
    /// classical piece `i`, grouped by piece.
    pub fn interior_scalars(&self, fractions: &[ExactScalar]) -> Vec<Vec<ExactScalar>> {
        self.points
            .windows(2)
            .map(|w| {
                let width = &w[1].lambda - &w[0].lambda;
                fractions.iter().map(|t| &w[0].lambda + &width.mul(t)).collect()
            })
            .collect()
    }

    /// Sum of NNI weights over the turning points.
    pub fn tropical_nni_number(&self) -> Result<usize> {
        self.points
            .iter()
            .map(|p| {
                p.class.map(TurningPointClass::nni_weight).ok_or_else(|| {
                    Error::TheoremViolation(format!(
                        "turning point at lambda = {} has branching {:?}",
                        p.lambda,
                        p.tree.branching_profile()
                    ))
                })
            })
            .sum()
    }

    pub fn count(&self, class: TurningPointClass) -> usize {
        self.points.iter().filter(|p| p.class == Some(class)).count()
    }
}

fn build(
    u: UltraVector,
    v: UltraVector,
    t1: EquidistantTree,
    t2: EquidistantTree,
) -> Result<TropicalSegment> {
    let generic_pair = is_generic_pair(&t1, &t2);
    let diffs = u.difference(&v)?;
    let lca1 = t1.lca_table();
    let lca2 = t2.lca_table();
    let mut order: Vec<usize> = (0..diffs.len()).collect();
    order.sort_by(|&a, &b| diffs[a].cmp(&diffs[b]).then(a.cmp(&b)));
    order.dedup_by(|b, a| diffs[*a] == diffs[*b]);

    let mut points = Vec::with_capacity(order.len());
    for k in order {
        let lambda = diffs[k].clone();
        let w = u.trop_combine(&lambda, &v)?;
        let point = w.normalize_projective();
        let tree = EquidistantTree::from_ultrametric(point.rep()).map_err(|e| {
            Error::TheoremViolation(format!("turning point at lambda = {lambda} left ultrametric space: {e}"))
        })?;
        let class = match classify_tree(&tree) {
            Ok(class) => Some(class),
            Err(e) if generic_pair => return Err(e),
            Err(_) => None,
        };
        points.push(TurningPoint {
            lambda,
            point,
            tree,
            class,
            witness: Some((lca1[k], lca2[k])),
        });
    }
    Ok(TropicalSegment {
        u,
        v,
        t1,
        t2,
        generic_pair,
        points,
    })
}
