"""Exact integer and rational linear algebra kernels.

Everything runs on plain Python ints and fractions.Fraction, so there
is no overflow and no rounding; obstruction verdicts downstream rely on
these results being exact.  Matrices are lists/tuples of rows.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import (DegenerateGraph, DimensionMismatch, Disconnected,
                     NonSquare, NonSymmetric, Singular)
from .graphs import MarkedGraph


@dataclass(frozen=True)
class GoeritzForm:
    """Laplacian of the white graph with the marked row/column deleted.

    matrix[i][i] = -deg(v_i) in the full graph, matrix[i][j] = number of
    edges between v_i and v_j; vertex_order lists the unmarked vertices.
    """
    matrix: tuple
    vertex_order: tuple

    @property
    def m(self):
        return len(self.vertex_order)

    @property
    def diagonal(self):
        return tuple(self.matrix[i][i] for i in range(self.m))


def goeritz(w: MarkedGraph) -> GoeritzForm:
    if w.marked is None:
        raise DegenerateGraph("graph carries no marked vertex")
    order = tuple(v for v in w.vertices if v != w.marked)
    if not order:
        raise DegenerateGraph("no unmarked vertices")
    rows = []
    for vi in order:
        row = []
        for vj in order:
            if vi == vj:
                row.append(-w.degree(vi))
            else:
                row.append(w.edges_between(vi, vj))
        rows.append(tuple(row))
    return GoeritzForm(tuple(rows), order)


def _require_square(m):
    n = len(m)
    if any(len(row) != n for row in m):
        raise NonSquare("matrix is not square")
    return n


def det_exact(m) -> int:
    """Fraction-free Bareiss elimination; exact integer determinant."""
    n = _require_square(m)
    if n == 0:
        return 1
    a = [list(row) for row in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            pivot = next((r for r in range(k + 1, n) if a[r][k] != 0), None)
            if pivot is None:
                return 0
            a[k], a[pivot] = a[pivot], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def signature(m) -> tuple:
    """Inertia (n+, n-, n0) of a symmetric matrix, by exact congruence.

    Zero diagonals are repaired with the congruence row/col addition
    trick, which is valid over the rationals.
    """
    n = _require_square(m)
    for i in range(n):
        for j in range(n):
            if m[i][j] != m[j][i]:
                raise NonSymmetric("matrix is not symmetric")
    a = [[Fraction(x) for x in row] for row in m]
    pos = neg = zero = 0
    i = 0
    while i < n:
        if a[i][i] == 0:
            j = next((r for r in range(i + 1, n) if a[r][r] != 0), None)
            if j is not None:
                for r in range(n):
                    a[i][r], a[j][r] = a[j][r], a[i][r]
                for r in range(n):
                    a[r][i], a[r][j] = a[r][j], a[r][i]
            else:
                j = next((c for c in range(i + 1, n) if a[i][c] != 0), None)
                if j is None:
                    zero += 1
                    i += 1
                    continue
                for r in range(n):
                    a[i][r] += a[j][r]
                for r in range(n):
                    a[r][i] += a[r][j]
        p = a[i][i]
        if p > 0:
            pos += 1
        else:
            neg += 1
        for r in range(i + 1, n):
            f = a[r][i] / p
            if f:
                for c in range(i, n):
                    a[r][c] -= f * a[i][c]
                for c in range(i, n):
                    a[c][r] -= f * a[c][i]
        i += 1
    return (pos, neg, zero)


def solve_rational(m, b):
    """Unique exact solution of m x = b; raises Singular otherwise."""
    n = _require_square(m)
    if len(b) != n:
        raise DimensionMismatch("vector length %d != %d" % (len(b), n))
    a = [[Fraction(x) for x in row] + [Fraction(bi)]
         for row, bi in zip(m, b)]
    for k in range(n):
        pivot = next((r for r in range(k, n) if a[r][k] != 0), None)
        if pivot is None:
            raise Singular("matrix is singular")
        a[k], a[pivot] = a[pivot], a[k]
        for r in range(n):
            if r != k and a[r][k]:
                f = a[r][k] / a[k][k]
                for c in range(k, n + 1):
                    a[r][c] -= f * a[k][c]
    return tuple(a[i][n] / a[i][i] for i in range(n))


def quadform_q(g, v) -> Fraction:
    """Exact v^T M^{-1} v for the Goeritz form (or any invertible M)."""
    matrix = g.matrix if isinstance(g, GoeritzForm) else g
    if len(v) != len(matrix):
        raise DimensionMismatch("vector length %d != %d" % (len(v), len(matrix)))
    x = solve_rational(matrix, v)
    return sum((Fraction(vi) * xi for vi, xi in zip(v, x)), Fraction(0))


def gf2_affine_solutions(a, b):
    """Affine solution set of a x = b over GF(2).

    Returns None when inconsistent, else (particular, kernel_basis); the
    solution count is 2**len(kernel_basis).
    """
    rows = len(a)
    cols = len(a[0]) if rows else 0
    if rows and any(len(r) != cols for r in a):
        raise DimensionMismatch("ragged matrix")
    if len(b) != rows:
        raise DimensionMismatch("rhs length mismatch")
    aug = [[x & 1 for x in row] + [bi & 1] for row, bi in zip(a, b)]
    pivots = []
    r = 0
    for c in range(cols):
        pr = next((i for i in range(r, rows) if aug[i][c]), None)
        if pr is None:
            continue
        aug[r], aug[pr] = aug[pr], aug[r]
        for i in range(rows):
            if i != r and aug[i][c]:
                aug[i] = [x ^ y for x, y in zip(aug[i], aug[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    for i in range(r, rows):
        if aug[i][cols]:
            return None
    particular = [0] * cols
    for i, c in enumerate(pivots):
        particular[c] = aug[i][cols]
    free = [c for c in range(cols) if c not in set(pivots)]
    basis = []
    for fc in free:
        vec = [0] * cols
        vec[fc] = 1
        for i, c in enumerate(pivots):
            if aug[i][fc]:
                vec[c] = 1
        basis.append(tuple(vec))
    return tuple(particular), tuple(basis)


def spanning_tree_count(graph: MarkedGraph) -> int:
    """Number of spanning trees, by deletion-contraction.

    Kept deliberately independent of the determinant code path so the
    two can cross-check each other.  Parallel families are handled in
    one step: delete the whole family or contract it (times its size).
    """
    if not graph.is_connected():
        raise Disconnected("spanning trees need a connected graph")
    mult = {}
    for u, v, _ in graph.edges:
        key = (u, v) if str(u) <= str(v) else (v, u)
        mult[key] = mult.get(key, 0) + 1
    verts = frozenset(graph.vertices)
    memo = {}

    def connected(vs, edges):
        if not vs:
            return True
        adj = {v: [] for v in vs}
        for (u, v) in edges:
            adj[u].append(v)
            adj[v].append(u)
        start = next(iter(vs))
        seen = {start}
        stack = [start]
        while stack:
            for w in adj[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == len(vs)

    def count(vs, mult):
        if len(vs) == 1:
            return 1
        key = (vs, frozenset(mult.items()))
        if key in memo:
            return memo[key]
        if not connected(vs, mult):
            memo[key] = 0
            return 0
        (u, v) = min(mult, key=lambda p: (str(p[0]), str(p[1])))
        k = mult[(u, v)]
        rest = dict(mult)
        del rest[(u, v)]
        total = count(vs, rest) if rest else 0
        merged = {}
        for (a, b), c in rest.items():
            a2 = u if a == v else a
            b2 = u if b == v else b
            if a2 == b2:
                continue
            key2 = (a2, b2) if str(a2) <= str(b2) else (b2, a2)
            merged[key2] = merged.get(key2, 0) + c
        total += k * count(vs - {v}, merged)
        memo[key] = total
        return total

    return count(verts, mult)


def hnf_basis(m):
    """Column Hermite form of a nonsingular integer matrix.

    Returns an upper-triangular basis of the column lattice: column j
    has its pivot H[j][j] > 0 and zeros below row j.
    """
    n = _require_square(m)
    cols = [[m[i][j] for i in range(n)] for j in range(n)]
    for row in range(n - 1, -1, -1):
        active = list(range(row + 1))
        while True:
            nz = [c for c in active if cols[c][row] != 0]
            if len(nz) <= 1:
                break
            nz.sort(key=lambda c: abs(cols[c][row]))
            c0 = nz[0]
            for c in nz[1:]:
                q = cols[c][row] // cols[c0][row]
                for i in range(n):
                    cols[c][i] -= q * cols[c0][i]
        nz = [c for c in active if cols[c][row] != 0]
        if not nz:
            raise Singular("matrix has rank < n")
        c0 = nz[0]
        cols[c0], cols[row] = cols[row], cols[c0]
        if cols[row][row] < 0:
            cols[row] = [-x for x in cols[row]]
    return tuple(tuple(cols[j][i] for j in range(n)) for i in range(n))


def hnf_reduce(v, h):
    """Canonical representative of v modulo the column lattice of h.

    h must be upper triangular (hnf_basis output); the result lies in
    the box 0 <= r[i] < h[i][i].
    """
    n = len(h)
    r = list(v)
    for i in range(n - 1, -1, -1):
        q = r[i] // h[i][i]
        if q:
            for k in range(i + 1):
                r[k] -= q * h[k][i]
    return tuple(r)


def is_integral(values) -> bool:
    return all(Fraction(x).denominator == 1 for x in values)


def matvec(m, v):
    return tuple(sum(mi * vi for mi, vi in zip(row, v)) for row in m)
