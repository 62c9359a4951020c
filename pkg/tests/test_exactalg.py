import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spinfill.errors import Disconnected, NonSquare, NonSymmetric, Singular
from spinfill.exactalg import (det_exact, gf2_affine_solutions, goeritz,
                               hnf_basis, hnf_reduce, matvec, quadform_q,
                               signature, solve_rational, spanning_tree_count)
from spinfill.graphs import MarkedGraph, gen_plane_multigraph

from conftest import (banana_graph, special44_graph, path_hub_graph,
                      two33_graph, white_data)


def test_det_examples():
    assert det_exact([[-4, 1], [1, -4]]) == 15
    assert det_exact([[1, 0, 0], [0, 1, 0], [0, 0, 1]]) == 1
    # tridiagonal continuant for the (-4,-2,-5,-2) chain
    path = [[-4, 1, 0, 0], [1, -2, 1, 0], [0, 1, -5, 1], [0, 0, 1, -2]]
    assert det_exact(path) == 55


def test_det_continuant_recurrence():
    weights = [-4, -2, -5, -2]
    d_prev, d_cur = 1, weights[0]
    for w in weights[1:]:
        d_prev, d_cur = d_cur, w * d_cur - d_prev
    assert d_cur == 55


def test_det_nonsquare():
    with pytest.raises(NonSquare):
        det_exact([[1, 2, 3], [4, 5, 6]])


def test_signature_examples():
    assert signature([[-4, 1], [1, -4]]) == (0, 2, 0)
    assert signature([[1, 0, 0], [0, 1, 0], [0, 0, 1]]) == (3, 0, 0)
    assert signature([[0, 1], [1, 0]]) == (1, 1, 0)
    assert signature([[0, 0], [0, 0]]) == (0, 0, 2)
    with pytest.raises(NonSymmetric):
        signature([[0, 1], [2, 0]])


def test_solve_examples():
    assert solve_rational([[-2, 1], [1, -2]], (0, 0)) == (0, 0)
    assert solve_rational([[-3]], (3,)) == (Fraction(-1),)
    assert solve_rational([[-4, 1], [1, -4]], (1, 1)) == \
        (Fraction(-1, 3), Fraction(-1, 3))
    with pytest.raises(Singular):
        solve_rational([[1, 1], [1, 1]], (1, 0))


def test_quadform_examples():
    assert quadform_q([[-3]], (0,)) == 0
    assert quadform_q([[-3]], (1,)) == Fraction(-1, 3)
    assert quadform_q([[-4, 1], [1, -4]], (2, 0)) == Fraction(-16, 15)


def test_gf2_examples():
    assert gf2_affine_solutions([[0, 1], [1, 0]], (0, 0)) == ((0, 0), ())
    part, basis = gf2_affine_solutions([[1, 1], [1, 1]], (1, 1))
    assert part == (1, 0) and basis == ((1, 1),)
    assert gf2_affine_solutions([[1, 1], [1, 1]], (1, 0)) is None


@given(st.integers(0, 10 ** 6))
@settings(max_examples=60, deadline=None)
def test_gf2_solutions_satisfy_system(seed):
    rng = random.Random(seed)
    rows, cols = rng.randint(1, 6), rng.randint(1, 6)
    a = [[rng.randint(0, 1) for _ in range(cols)] for _ in range(rows)]
    b = [rng.randint(0, 1) for _ in range(rows)]
    sol = gf2_affine_solutions(a, b)
    if sol is None:
        return
    part, basis = sol
    vecs = [list(part)]
    for k in basis:
        vecs.append([p ^ q for p, q in zip(part, k)])
    for v in vecs:
        for row, bi in zip(a, b):
            assert sum(r * x for r, x in zip(row, v)) % 2 == bi


def test_goeritz_examples():
    g = goeritz(special44_graph())
    assert g.matrix == ((-4, 1), (1, -4))
    g = goeritz(two33_graph())
    assert g.matrix == ((-3, 1), (1, -3))
    g = goeritz(banana_graph(3))
    assert g.matrix == ((-3,),)
    g = goeritz(path_hub_graph())
    assert g.diagonal == (-4, -2, -5, -2)


def test_spanning_tree_examples():
    tri = MarkedGraph((0, 1, 2), ((0, 1, 0), (1, 2, 1), (0, 2, 2)))
    assert spanning_tree_count(tri) == 3
    assert spanning_tree_count(banana_graph(3)) == 3
    assert spanning_tree_count(special44_graph()) == 15
    with pytest.raises(Disconnected):
        spanning_tree_count(MarkedGraph((0, 1, 2), ((0, 1, 0),)))


def test_tree_count_matches_det(all_diagrams):
    for name, kd in all_diagrams:
        _, white, _ = white_data(kd)
        g = goeritz(white)
        assert spanning_tree_count(white) == abs(det_exact(g.matrix)), name


def test_goeritz_negative_definite(all_diagrams):
    for name, kd in all_diagrams:
        _, white, _ = white_data(kd)
        g = goeritz(white)
        assert signature(g.matrix) == (0, g.m, 0), name


@given(st.integers(0, 10 ** 6))
@settings(max_examples=100, deadline=None)
def test_laplacian_sum_identity(seed):
    """y^T G y equals minus the sum of squared differences over edges,
    with the marked coordinate pinned to zero."""
    rng = random.Random(seed)
    w = gen_plane_multigraph(rng, rng.randint(2, 7), rng.randint(0, 6))
    g = goeritz(w)
    y = {v: rng.randint(-4, 4) for v in w.vertices}
    y[w.marked] = 0
    vec = [y[v] for v in g.vertex_order]
    lhs = sum(vi * x for vi, x in zip(vec, matvec(g.matrix, vec)))
    rhs = -sum((y[u] - y[v]) ** 2 for (u, v, _) in w.edges)
    assert lhs == rhs


@given(st.integers(0, 10 ** 6))
@settings(max_examples=50, deadline=None)
def test_quadform_negative(seed):
    rng = random.Random(seed)
    w = gen_plane_multigraph(rng, rng.randint(2, 6), rng.randint(0, 5))
    g = goeritz(w)
    v = [rng.randint(-5, 5) for _ in range(g.m)]
    q = quadform_q(g, v)
    if any(v):
        assert q < 0
    else:
        assert q == 0


@given(st.integers(0, 10 ** 6))
@settings(max_examples=50, deadline=None)
def test_hnf_reduction_is_canonical(seed):
    rng = random.Random(seed)
    w = gen_plane_multigraph(rng, rng.randint(2, 6), rng.randint(0, 5))
    g = goeritz(w)
    h = hnf_basis([list(row) for row in g.matrix])
    for i in range(g.m):
        for j in range(i + 1, g.m):
            assert h[j][i] == 0
        assert h[i][i] > 0
    v = tuple(rng.randint(-9, 9) for _ in range(g.m))
    red = hnf_reduce(v, h)
    # reducing twice is stable and shifting by a lattice vector is absorbed
    assert hnf_reduce(red, h) == red
    k = [rng.randint(-2, 2) for _ in range(g.m)]
    shifted = tuple(v[i] + sum(h[i][j] * k[j] for j in range(g.m))
                    for i in range(g.m))
    assert hnf_reduce(shifted, h) == red
