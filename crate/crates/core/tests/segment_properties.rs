use std::collections::BTreeSet;

use rand::Rng;
use tropline::ensembles::{default_height_range, sample_generic_pair, worst_case_pair};
use tropline::segment::{
    check_moves, comparison_graph, essential_pairs, lambda_from_heights, tropical_interchange_number,
};
use tropline::tree::{nni_distance_exact, topology_equal_argmax};
use tropline::{
    tropical_segment, EquidistantTree, ExactScalar, SeededStream, TropicalSegment, TurningPointClass,
    UltraVector,
};

fn random_pair(n: usize, stream: &SeededStream, k: u64) -> (EquidistantTree, EquidistantTree) {
    let p = sample_generic_pair(n, &mut stream.trial(k), default_height_range(n)).unwrap();
    (p.t1, p.t2)
}

fn random_fraction<R: Rng>(rng: &mut R) -> ExactScalar {
    ExactScalar::new(rng.gen_range(1..1000), 1000).unwrap()
}

#[test]
fn turning_scalars_come_from_essential_pairs() {
    let stream = SeededStream::new(101);
    for k in 0..500 {
        let n = 3 + (k as usize % 10);
        let (t1, t2) = random_pair(n, &stream, k);
        let seg = TropicalSegment::between_trees(&t1, &t2).unwrap();
        let from_heights: BTreeSet<ExactScalar> = essential_pairs(&t1, &t2)
            .unwrap()
            .into_iter()
            .map(|(x1, x2)| lambda_from_heights(&t1, x1, &t2, x2))
            .collect();
        let scalars: BTreeSet<ExactScalar> = seg.lambdas().cloned().collect();
        assert_eq!(from_heights, scalars);
        assert_eq!(seg.len(), tropical_interchange_number(&t1, &t2).unwrap());
        for p in seg.points() {
            let (x1, x2) = p.witness.unwrap();
            assert_eq!(lambda_from_heights(&t1, x1, &t2, x2), p.lambda);
        }
    }
}

#[test]
fn interchange_number_ignores_the_metric() {
    let stream = SeededStream::new(202);
    let (t1, t2) = random_pair(9, &stream, 0);
    let expected = tropical_interchange_number(&t1, &t2).unwrap();
    let (top1, top2) = (t1.topology(), t2.topology());
    for k in 0..100u64 {
        let mut rng = stream.trial(1000 + k);
        let m = default_height_range(9);
        let a = tropline::ensembles::assign_generic_heights(&top1, &mut rng, m).unwrap();
        let b = tropline::ensembles::assign_generic_heights(&top2, &mut rng, m).unwrap();
        if tropline::tree::is_generic_pair(&a, &b) {
            assert_eq!(tropical_interchange_number(&a, &b).unwrap(), expected);
        }
    }
}

#[test]
fn segment_is_symmetric_as_a_set() {
    let stream = SeededStream::new(303);
    for k in 0..100 {
        let (t1, t2) = random_pair(3 + k as usize % 8, &stream, k);
        let (u, v) = (t1.to_ultrametric(), t2.to_ultrametric());
        let forward = tropical_segment(&u, &v).unwrap();
        let backward = tropical_segment(&v, &u).unwrap();
        let a: Vec<_> = forward.points().iter().map(|p| p.point.rep().clone()).collect();
        let mut b: Vec<_> = backward.points().iter().map(|p| p.point.rep().clone()).collect();
        b.reverse();
        assert_eq!(a, b);
    }
}

#[test]
fn convexity_and_constant_topology_on_pieces() {
    let stream = SeededStream::new(404);
    for k in 0..150 {
        let n = 4 + k as usize % 9;
        let (t1, t2) = random_pair(n, &stream, k);
        let seg = TropicalSegment::between_trees(&t1, &t2).unwrap();
        let mut rng = stream.trial(10_000 + k);
        let fractions: Vec<ExactScalar> = (0..3).map(|_| random_fraction(&mut rng)).collect();
        let half = [ExactScalar::new(1, 2).unwrap()];
        for (piece, mid) in seg.interior_scalars(&fractions).iter().zip(seg.interior_scalars(&half)) {
            let mid = seg.point_at(&mid[0]);
            assert!(mid.three_point_check());
            for lambda in piece {
                let w = seg.point_at(lambda);
                assert!(w.three_point_check());
                assert!(topology_equal_argmax(&w, &mid).unwrap());
            }
        }
        for p in seg.points() {
            assert!(p.point.rep().three_point_check());
        }
        assert!(check_moves(&seg).unwrap().iter().all(|c| c.consistent));
    }
}

#[test]
fn endpoints_are_binary_no_change_points() {
    let stream = SeededStream::new(505);
    for k in 0..100 {
        let (t1, t2) = random_pair(5 + k as usize % 6, &stream, k);
        let seg = TropicalSegment::between_trees(&t1, &t2).unwrap();
        let (first, last) = (&seg.points()[0], seg.points().last().unwrap());
        assert_eq!(first.class, Some(TurningPointClass::NoChange));
        assert_eq!(last.class, Some(TurningPointClass::NoChange));
        assert!(first.point.rep().projective_equal(&t1.to_ultrametric()).unwrap());
        assert!(last.point.rep().projective_equal(&t2.to_ultrametric()).unwrap());
    }
}

#[test]
fn worst_case_examples() {
    for n in 3..=12 {
        let (u, v) = worst_case_pair(n).unwrap();
        let seg = tropical_segment(&u, &v).unwrap();
        assert_eq!(seg.len(), n * (n - 1) / 2);
        assert_eq!(seg.tropical_nni_number().unwrap(), (n - 1) * (n - 2) / 2);
        assert_eq!(seg.count(TurningPointClass::FourClade), 0);
        let t1 = EquidistantTree::from_ultrametric(&u).unwrap();
        let t2 = EquidistantTree::from_ultrametric(&v).unwrap();
        assert_eq!(tropical_interchange_number(&t1, &t2).unwrap(), n * (n - 1) / 2);
    }
    let (u, v) = worst_case_pair(5).unwrap();
    let t1 = EquidistantTree::from_ultrametric(&u).unwrap().topology();
    let t2 = EquidistantTree::from_ultrametric(&v).unwrap().topology();
    assert_eq!(nni_distance_exact(&t1, &t2).unwrap(), 3);
}

#[test]
fn worst_case_classes_follow_leaf_gaps() {
    let n = 7;
    let (u, v) = worst_case_pair(n).unwrap();
    let diffs = u.difference(&v).unwrap();
    let seg = tropical_segment(&u, &v).unwrap();
    for (k, pair) in tropline::metric::pairs(n).enumerate() {
        let p = seg.points().iter().find(|p| p.lambda == diffs[k]).unwrap();
        let expected = if pair.j - pair.i > 1 {
            TurningPointClass::SingleNni
        } else {
            TurningPointClass::NoChange
        };
        assert_eq!(p.class, Some(expected), "pair ({}, {})", pair.i, pair.j);
    }
}

#[test]
fn non_generic_pairs_are_tagged_not_refused() {
    // the star against itself is not generic; its only turning point has four children
    let star = UltraVector::from_integers(4, &[2; 6]).unwrap();
    let seg = tropical_segment(&star, &star).unwrap();
    assert!(!seg.is_generic_pair());
    assert_eq!(seg.points()[0].class, Some(TurningPointClass::FourClade));
    let five = UltraVector::from_integers(5, &[2; 10]).unwrap();
    let seg = tropical_segment(&five, &five).unwrap();
    assert_eq!(seg.points()[0].class, None);
    assert!(seg.tropical_nni_number().is_err());
}

#[test]
fn odd_cycle_in_every_five_subset() {
    let stream = SeededStream::new(606);
    for k in 0..200 {
        let n = 5 + k as usize % 3;
        let (t1, t2) = random_pair(n, &stream, k);
        let (u, v) = (t1.to_ultrametric(), t2.to_ultrametric());
        let ge = comparison_graph(&u, &v).unwrap();
        let le = comparison_graph(&v, &u).unwrap();
        assert!(ge.union(&le).is_complete());
        let labels: Vec<usize> = (1..=n).collect();
        for mask in 0u32..1 << n {
            if mask.count_ones() != 5 {
                continue;
            }
            let subset: Vec<usize> = labels.iter().copied().filter(|l| mask >> (l - 1) & 1 == 1).collect();
            assert!(ge.restrict(&subset).has_odd_cycle() || le.restrict(&subset).has_odd_cycle());
        }
    }
}
