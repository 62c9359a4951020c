import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spinfill.errors import (InvalidFraction, NotAccessibleByConstruction,
                             NotATree, NotCoprime, NotExcessive)
from spinfill.exactalg import goeritz, signature
from spinfill.graphs import MarkedGraph
from spinfill.plumbing import (PlumbingTree, accessible_witness, berge_ipm,
                               canonical_form, cf_value, check_normal_form,
                               decide_plumbed, det_tree, intersection_matrix,
                               is_excessive, linear_tree, neg_cf,
                               parse_tree_doc, random_excessive_tree,
                               random_tree, reduce_normal_form)
from spinfill.spinc import characteristic_subgraphs

def test_tree_validation():
    with pytest.raises(NotATree):
        PlumbingTree((0, 1, 2), (-2, -2, -2), ((0, 1), (1, 2), (0, 2)))
    with pytest.raises(NotATree):
        PlumbingTree((0, 1, 2), (-2, -2, -2), ((0, 1),))
    with pytest.raises(NotATree):
        PlumbingTree((0, 1), (-2, -2), ((0, 1), (0, 1)))


def test_excessive_examples():
    assert is_excessive(linear_tree([-4, -2, -5, -2]))
    assert is_excessive(linear_tree([-2]))
    star = PlumbingTree(("c", "x", "y", "z"), (-2, -2, -2, -2),
                        (("c", "x"), ("c", "y"), ("c", "z")))
    assert not is_excessive(star)


def test_normal_form_examples():
    assert check_normal_form(linear_tree([-2, -5, -2])).ok
    rep = check_normal_form(linear_tree([-2, 0, -2]))
    assert not rep.n1_ok and not rep.n2_ok
    rep = check_normal_form(linear_tree([-1]))
    assert not rep.n1_ok


def test_normal_form_twin_leaves():
    # twin -2 leaves at the end of a chain: the allowed component shape
    t = PlumbingTree(("p", "l1", "l2"), (-3, -2, -2),
                     (("p", "l1"), ("p", "l2")))
    assert check_normal_form(t).n3_ok
    t2 = PlumbingTree(("a", "p", "l1", "l2"), (-3, -2, -2, -2),
                      (("a", "p"), ("p", "l1"), ("p", "l2")))
    assert check_normal_form(t2).n3_ok
    # parent strictly inside a chain: portion outside the exception
    t3 = PlumbingTree(("z1", "p", "z2", "l1", "l2"), (-2, -4, -2, -2, -2),
                      (("z1", "p"), ("p", "z2"), ("p", "l1"), ("p", "l2")))
    rep = check_normal_form(t3)
    assert not rep.n3_ok and rep.n3_violations == ("p",)
    # three -2 leaves on one parent: also outside the exception
    t4 = PlumbingTree(("p", "l1", "l2", "l3"), (-3, -2, -2, -2),
                      (("p", "l1"), ("p", "l2"), ("p", "l3")))
    assert not check_normal_form(t4).n3_ok


def test_twin_leaves_mean_even_characteristic_count():
    rng = random.Random(41)
    for _ in range(40):
        base = random_tree(rng, rng.randint(1, 5), weight_range=(-5, -2))
        verts = list(base.vertices) + ["p", "l1", "l2"]
        attach = rng.choice(base.vertices)
        edges = list(base.edges) + [(attach, "p"), ("p", "l1"), ("p", "l2")]
        weights = list(base.weights) + [rng.randint(-5, -2), -2, -2]
        tree = PlumbingTree(tuple(verts), tuple(weights), tuple(edges))
        # count characteristic subgraphs via the marked-graph encoding
        hub_edges = []
        lab = 0
        out_edges = []
        for (u, v) in tree.edges:
            out_edges.append((u, v, lab))
            lab += 1
        for v, w in zip(tree.vertices, tree.weights):
            for _ in range(-w - tree.degree(v)):
                out_edges.append(("hub", v, lab))
                lab += 1
        g = MarkedGraph(tuple(verts) + ("hub",), tuple(out_edges), marked="hub")
        count = len(characteristic_subgraphs(g))
        assert count % 2 == 0


def test_reduce_isolated_unit():
    t, log = reduce_normal_form(linear_tree([-1]))
    assert t.empty and log == (("delete-unit", "a0"),)
    t, log = reduce_normal_form(linear_tree([1]))
    assert t.empty


def test_reduce_blow_down_chain():
    # (-2,-1,-2) blows down to (-1,-1), then to a single 0 vertex;
    # the boundary is not a sphere (determinant 0 is preserved)
    start = linear_tree([-2, -1, -2])
    assert det_tree(start) == 0
    t, log = reduce_normal_form(start)
    assert len(t.vertices) == 1 and t.weights == (0,)
    assert [mv[0] for mv in log] == ["blow-down", "blow-down"]


def test_reduce_zero_chain_absorption():
    t, log = reduce_normal_form(linear_tree([-3, 0, -4]))
    assert t.weights == (-7,)
    assert log[0][0] == "absorb-zero"


def test_reduce_identity_on_normal():
    t = linear_tree([-2, -5, -2])
    out, log = reduce_normal_form(t)
    assert log == ()
    assert canonical_form(out) == canonical_form(t)


def test_reduce_preserves_det_up_to_sign():
    rng = random.Random(13)
    for _ in range(80):
        t = random_tree(rng, rng.randint(1, 7))
        before = abs(det_tree(t))
        out, _ = reduce_normal_form(t)
        assert abs(det_tree(out)) == before


def test_reduce_confluence_random_orders():
    rng = random.Random(99)
    made = 0
    while made < 40:
        t = random_tree(rng, rng.randint(1, 8))
        if signature(intersection_matrix(t)) != (0, len(t.vertices), 0):
            continue
        ref, _ = reduce_normal_form(t)
        for seed in range(3):
            out, _ = reduce_normal_form(t, rng=random.Random(seed))
            assert canonical_form(out) == canonical_form(ref)
        made += 1


def test_even_weights_pass_normal_form():
    rng = random.Random(7)
    for _ in range(30):
        t = random_tree(rng, rng.randint(1, 8), weight_range=(-8, -2))
        weights = tuple(w - (w % 2) for w in t.weights)  # make even
        t = PlumbingTree(t.vertices, weights, t.edges)
        assert check_normal_form(t).ok
        mat = intersection_matrix(t)
        assert all(mat[i][i] % 2 == 0 for i in range(len(mat)))


def test_decide_examples():
    assert decide_plumbed(linear_tree([-4, -2, -5, -2])).status == "no"
    v = decide_plumbed(linear_tree([-2, -2]))
    assert v.status == "yes" and v.det == 3
    star = PlumbingTree(("c", "x", "y", "z"), (-2, -2, -2, -2),
                        (("c", "x"), ("c", "y"), ("c", "z")))
    with pytest.raises(NotExcessive):
        decide_plumbed(star)
    even = decide_plumbed(linear_tree([-2, -2, -2]))
    assert even.status == "hypotheses-not-met"


def test_decide_matches_parity_and_witness_specialness():
    rng = random.Random(3)
    done = 0
    while done < 80:
        t = random_excessive_tree(rng, rng.randint(1, 7))
        if det_tree(t) % 2 == 0:
            continue
        verdict = decide_plumbed(t)
        parity = all(w % 2 == 0 for w in t.weights)
        assert (verdict.status == "yes") == parity
        # reconstruct a white graph from the tree: special iff yes
        bare = MarkedGraph(t.vertices,
                           tuple((u, v, i) for i, (u, v) in enumerate(t.edges)))
        aug = accessible_witness(bare, t.weights)
        special = all(d % 2 == 0 for d in aug.degrees.values())
        assert special == parity
        done += 1


def test_neg_cf_examples():
    assert neg_cf(16, 9) == [2, 5, 2]
    assert neg_cf(3, 1) == [3]
    assert neg_cf(5, 2) == [3, 2]
    with pytest.raises(InvalidFraction):
        neg_cf(9, 16)
    with pytest.raises(InvalidFraction):
        neg_cf(16, 4)


@given(st.integers(2, 400), st.integers(1, 399))
@settings(max_examples=150, deadline=None)
def test_neg_cf_round_trip(p, q):
    import math
    if q >= p or math.gcd(p, q) != 1:
        return
    terms = neg_cf(p, q)
    assert all(a >= 2 for a in terms)
    assert cf_value(terms) == Fraction(p, q)


def test_lens_space_det():
    for (p, q) in ((16, 9), (5, 2), (7, 3), (55, 34), (13, 5)):
        import math
        if math.gcd(p, q) != 1:
            continue
        terms = neg_cf(p, q)
        t = linear_tree([-a for a in terms])
        assert abs(det_tree(t)) == p
    assert abs(det_tree(linear_tree([-2, -5, -2]))) == 16


def test_berge_examples():
    plus, minus = berge_ipm(3, 5)
    assert plus == (16, 7)
    assert minus == (14, 3)
    assert berge_ipm(1, 1) == ((2, 1), None)
    with pytest.raises(NotCoprime):
        berge_ipm(2, 4)


def test_witness_examples():
    tri = MarkedGraph((0, 1, 2), ((0, 1, 0), (1, 2, 1), (0, 2, 2)))
    aug = accessible_witness(tri, (-3, -3, -3))
    assert all(aug.edges_between("hub", v) == 1 for v in (0, 1, 2))
    assert goeritz(aug).diagonal == (-3, -3, -3)

    path = MarkedGraph(("a", "b", "c", "d"),
                       (("a", "b", 0), ("b", "c", 1), ("c", "d", 2)))
    aug = accessible_witness(path, (-4, -2, -5, -2))
    assert [aug.edges_between("hub", v) for v in path.vertices] == [3, 0, 3, 1]

    with pytest.raises(NotAccessibleByConstruction):
        accessible_witness(path, (-1, -2, -5, -2))
    theta = MarkedGraph((0, 1), ((0, 1, 0), (0, 1, 1), (0, 1, 2)))
    with pytest.raises(NotAccessibleByConstruction):
        accessible_witness(theta, (-4, -4))


def test_witness_two_cycles_one_vertex_ok():
    # two triangles sharing a single vertex: allowed
    g = MarkedGraph((0, 1, 2, 3, 4),
                    ((0, 1, 0), (1, 2, 1), (0, 2, 2),
                     (2, 3, 3), (3, 4, 4), (2, 4, 5)))
    aug = accessible_witness(g, (-2, -2, -4, -2, -2))
    assert goeritz(aug).diagonal == (-2, -2, -4, -2, -2)


def test_parse_tree_doc():
    doc = {"vertices": [{"id": "x", "weight": -2}, {"id": "y", "weight": -3}],
           "edges": [["x", "y"]]}
    t = parse_tree_doc(doc)
    assert t.weights == (-2, -3)
    assert canonical_form(t) == canonical_form(
        PlumbingTree(("y", "x"), (-3, -2), (("y", "x"),)))


def test_canonical_form_distinguishes_weights():
    a = linear_tree([-2, -3])
    b = linear_tree([-3, -2])
    c = linear_tree([-2, -2])
    assert canonical_form(a) == canonical_form(b)
    assert canonical_form(a) != canonical_form(c)
