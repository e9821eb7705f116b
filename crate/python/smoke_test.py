"""Smoke test for the pytropline extension module."""

import json
from fractions import Fraction

import pytropline as tl


def main():
    u = tl.Ultrametric(3, [3, 3, 1])
    v = tl.Ultrametric(3, [3, 2, 3])
    seg = tl.tropical_segment(u, v)
    assert seg.generic_pair
    assert len(seg) == 3
    assert seg.classes() == ["NoChange", "SingleNNI", "NoChange"]
    want = [[2, 2, 0], [0, 0, 0], [1, 0, 1]]
    got = [[int(x) for x in p.entries()] for p in seg.points()]
    assert got == want, got
    assert seg.tropical_nni_number() == 1
    assert seg.moves_consistent()
    report = json.loads(seg.to_json(decimal=True))
    assert report["turning_points"][0]["raw"] == ["3", "3", "1"], report["turning_points"][0]["raw"]

    # exact inputs in several forms
    w = tl.Ultrametric(3, [Fraction(1, 2), "3/2", 1.5])
    assert w.entries() == [Fraction(1, 2), Fraction(3, 2), Fraction(3, 2)]
    assert w.three_point_check()
    assert not tl.Ultrametric(3, [1, 2, 3]).three_point_check()

    t = tl.Tree.from_newick("((1:0.5,2:0.5):1,3:1.5);")
    assert t.to_newick() == "((1:0.5,2:0.5):1,3:1.5);"
    assert t.to_ultrametric() == tl.Ultrametric(3, [1, 3, 3])

    a, b = tl.worst_case_pair(6)
    ws = tl.tropical_segment(a, b)
    assert ws.tropical_nni_number() == 10
    assert tl.nni_distance(a.to_tree(), b.to_tree()) == 4

    t1, t2 = tl.random_pair(8, seed=7)
    r1, r2 = tl.random_pair(8, seed=7)
    assert t1 == r1 and t2 == r2
    assert tl.is_generic_pair(t1, t2)
    s = tl.Segment.between_trees(t1, t2)
    assert s.tropical_nni_number() <= len(s) * 3

    assert tl.count_planar(5) == 14
    assert tl.count_planar_marked(5) == 56
    assert isinstance(tl.prob_p(1, 1, 4), Fraction)
    assert tl.exact_q(1, 1, 1, 1, 6) <= tl.qtilde(1, 1, 1, 1, 6)
    assert tl.sum_sn_bound(4) > 0
    assert isinstance(tl.sum_sn_bound(1000), float)

    mc = tl.expected_pi_monte_carlo(6, trials=200, seed=1)
    assert mc["mean_pi"] <= mc["bound"], mc
    small = tl.expected_pi_monte_carlo(4, trials=200, seed=1)
    assert tl.expected_pi_exact(4) <= small["bound_exact"]

    try:
        tl.Ultrametric(3, [1, 2])
    except ValueError:
        pass
    else:
        raise AssertionError("bad length accepted")
    assert issubclass(tl.TheoremViolation, Exception)
    print("pytropline smoke test: ok")


if __name__ == "__main__":
    main()
