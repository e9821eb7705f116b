use super::{TropicalSegment, TurningPointClass};
use crate::error::{Error, Result};
use crate::metric::UltraVector;
use crate::tree::{nni_distance_exact, EquidistantTree, LeafSet, Topology, NNI_BFS_MAX_LEAVES};

/// Classifies a tree by the child counts of its internal vertices.
pub fn classify_tree(tree: &EquidistantTree) -> Result<TurningPointClass> {
    let wide: Vec<usize> = tree.branching_profile().into_iter().filter(|&c| c > 2).collect();
    match wide.as_slice() {
        [] => Ok(TurningPointClass::NoChange),
        [3] => Ok(TurningPointClass::SingleNni),
        [4] => Ok(TurningPointClass::FourClade),
        _ => Err(Error::TheoremViolation(format!(
            "turning tree has vertices with child counts {wide:?}"
        ))),
    }
}

/// Reconstructs the tree of a turning point and classifies it.
pub fn classify_turning_point(w: &UltraVector) -> Result<TurningPointClass> {
    classify_tree(&EquidistantTree::from_ultrametric(w)?)
}

/// Topologies on either side of one turning point and whether the change
/// between them matches the class.
#[derive(Debug, Clone)]
pub struct MoveCheck {
    pub index: usize,
    pub class: Option<TurningPointClass>,
    pub before: Topology,
    pub after: Topology,
    pub consistent: bool,
    pub detail: Option<String>,
}

/// Recomputes the topology just before and just after every turning point
/// (at the midpoints of neighbouring pieces) and checks that the change is
/// none, one NNI, or a three-move four-clade rearrangement, as classified.
pub fn check_moves(segment: &TropicalSegment) -> Result<Vec<MoveCheck>> {
    let points = segment.points();
    let mut between = Vec::with_capacity(points.len() + 1);
    between.push(segment.start_tree().topology());
    for w in points.windows(2) {
        let mid = (&w[0].lambda + &w[1].lambda).half();
        between.push(EquidistantTree::from_ultrametric(&segment.point_at(&mid))?.topology());
    }
    between.push(segment.end_tree().topology());

    let mut out = Vec::with_capacity(points.len());
    for (index, p) in points.iter().enumerate() {
        let before = between[index].clone();
        let after = between[index + 1].clone();
        let verdict = match p.class {
            None => Err("unclassified turning point".to_string()),
            Some(class) => judge(class, &p.tree.topology(), &before, &after),
        };
        out.push(MoveCheck {
            index,
            class: p.class,
            before,
            after,
            consistent: verdict.is_ok(),
            detail: verdict.err(),
        });
    }
    Ok(out)
}

fn judge(
    class: TurningPointClass,
    turning: &Topology,
    before: &Topology,
    after: &Topology,
) -> std::result::Result<(), String> {
    if !before.is_binary() || !after.is_binary() {
        return Err("topology between turning points is not binary".into());
    }
    let refines = |t: &Topology| turning.clades().all(|c| t.contains(c));
    if !refines(before) || !refines(after) {
        return Err("neighbouring topology does not refine the turning tree".into());
    }
    match class {
        TurningPointClass::NoChange => {
            (before == after).then_some(()).ok_or_else(|| "topology changed at a binary point".into())
        }
        TurningPointClass::SingleNni => {
            let neighbours = before.nni_neighbors().map_err(|e| e.to_string())?;
            neighbours
                .contains(after)
                .then_some(())
                .ok_or_else(|| "topologies are not NNI neighbours".into())
        }
        TurningPointClass::FourClade => {
            if before.n() <= NNI_BFS_MAX_LEAVES {
                let d = nni_distance_exact(before, after).map_err(|e| e.to_string())?;
                return (d == 3).then_some(()).ok_or_else(|| format!("NNI distance {d}, expected 3"));
            }
            // Both sides resolve the same four-child vertex and agree elsewhere,
            // so the distance equals the one between the induced quartets.
            let wide = turning
                .clades()
                .find(|c| turning.children_of(c).len() == 4)
                .ok_or("no four-child vertex")?;
            let reps: Vec<usize> = turning
                .children_of(wide)
                .iter()
                .map(|c: &LeafSet| c.first().unwrap())
                .collect();
            let q1 = before.restrict(&reps).map_err(|e| e.to_string())?;
            let q2 = after.restrict(&reps).map_err(|e| e.to_string())?;
            let d = nni_distance_exact(&q1, &q2).map_err(|e| e.to_string())?;
            (d == 3).then_some(()).ok_or_else(|| format!("quartet NNI distance {d}, expected 3"))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::ExactScalar;
    use crate::segment::tropical_segment;
    use crate::tree::{is_generic_pair, parse_newick};

    #[test]
    fn classifies_by_child_counts() {
        let cases = [
            ("((1:1,2:1):1,3:2);", Some(TurningPointClass::NoChange)),
            ("(1:1,2:1,3:1);", Some(TurningPointClass::SingleNni)),
            ("(1:1,2:1,3:1,4:1);", Some(TurningPointClass::FourClade)),
            ("(1:1,2:1,3:1,4:1,5:1);", None),
            ("((1:1,2:1,3:1):1,4:2,5:2);", None),
        ];
        for (newick, expected) in cases {
            let t = parse_newick(newick).unwrap();
            match expected {
                Some(c) => assert_eq!(classify_tree(&t).unwrap(), c, "{newick}"),
                None => assert!(matches!(classify_tree(&t), Err(Error::TheoremViolation(_)))),
            }
        }
    }

    #[test]
    fn four_clade_fixture() {
        // ((1,2),(3,4)) at heights 1, 2, root 10 against ((1,3),(2,4)) at 3, 5, root 20
        let t1 = parse_newick("((1:1,2:1):9,(3:2,4:2):8);").unwrap();
        let t2 = parse_newick("((1:3,3:3):17,(2:5,4:5):15);").unwrap();
        assert!(is_generic_pair(&t1, &t2));
        let seg = TropicalSegment::between_trees(&t1, &t2).unwrap();
        let hit = seg
            .points()
            .iter()
            .find(|p| p.lambda == ExactScalar::from_integer(-20))
            .unwrap();
        assert_eq!(hit.class, Some(TurningPointClass::FourClade));
        assert_eq!(hit.tree.branching_profile(), vec![4]);
        assert_eq!(seg.count(TurningPointClass::FourClade), 1);
        assert_eq!(seg.tropical_nni_number().unwrap(), 3);
        let checks = check_moves(&seg).unwrap();
        assert!(checks.iter().all(|c| c.consistent), "{checks:?}");
    }

    #[test]
    fn worked_example_moves() {
        let u = crate::UltraVector::from_integers(3, &[3, 3, 1]).unwrap();
        let v = crate::UltraVector::from_integers(3, &[3, 2, 3]).unwrap();
        let seg = tropical_segment(&u, &v).unwrap();
        let checks = check_moves(&seg).unwrap();
        assert!(checks.iter().all(|c| c.consistent));
        assert_ne!(checks[1].before, checks[1].after);
    }
}
