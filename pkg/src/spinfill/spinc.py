"""Spin-c classes, correction terms and spin-filling obstructions.

A spin-c class of the double branched cover is an orbit of
characteristic covectors (integer vectors matching the Goeritz diagonal
mod 2) under translation by twice the column lattice of the Goeritz
matrix.  Orbits get canonical keys by Hermite reduction, the correction
term is an exact lattice maximum, and characteristic subgraphs encode
the spin structures.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import CertificationFailure, NotATree, Singular
from .exactalg import (GoeritzForm, det_exact, gf2_affine_solutions, goeritz,
                       hnf_basis, hnf_reduce, is_integral, matvec, quadform_q,
                       signature, solve_rational)
from .graphs import MarkedGraph


@dataclass(frozen=True)
class SpinCClass:
    representative: tuple        # characteristic covector
    canonical_key: tuple         # Hermite-reduced representative
    d: Fraction                  # correction term
    c1_class: tuple | None       # coker class when det is odd
    state_index: int | None = None

    def is_spin(self):
        return self.c1_class is not None and not any(self.c1_class)


@dataclass(frozen=True)
class CharSubgraph:
    vertices: tuple
    cut: int


@dataclass(frozen=True)
class BoundVerdict:
    applicable: bool
    reason: str
    value: object = None
    obstructed: bool | None = None

    @property
    def verdict(self):
        if not self.applicable:
            return "not applicable"
        return "OBSTRUCTED" if self.obstructed else "inconclusive"


@dataclass(frozen=True)
class CapEntry:
    vertices: tuple
    cut: int
    obstructed: bool
    mu: Fraction | None = None          # filled when the reduced graph is a tree
    ue_lower: Fraction | None = None    # -8 mu / 9 <= b2
    ue_upper: Fraction | None = None    # b2 <= -8 mu


@dataclass(frozen=True)
class ObstructionReport:
    m: int
    det: int
    special: bool
    b2_bound: int                      # b2 <= m, equality only when special
    spin_d: Fraction | None            # correction term of the spin class
    spin_b2_bound: int | None          # floor of the sharp bound 4 d(spin)
    cutbound: BoundVerdict             # min cut >= m obstruction
    capbound: BoundVerdict             # min cut >= 9 m obstruction
    cap_entries: tuple                 # per characteristic subgraph
    tree_reduced: bool                 # reduced white graph is a tree


def _ldl(a):
    """Exact LDL^T of a positive definite rational matrix."""
    n = len(a)
    low = [[Fraction(0)] * n for _ in range(n)]
    diag = [Fraction(0)] * n
    for j in range(n):
        s = Fraction(a[j][j])
        for k in range(j):
            s -= diag[k] * low[j][k] * low[j][k]
        if s <= 0:
            raise Singular("matrix is not positive definite")
        diag[j] = s
        low[j][j] = Fraction(1)
        for i in range(j + 1, n):
            t = Fraction(a[i][j])
            for k in range(j):
                t -= diag[k] * low[i][k] * low[j][k]
            low[i][j] = t / diag[j]
    return low, diag


def _closest_lattice_value(a, target):
    """min over integer y of (y - target)^T a (y - target), exact.

    Depth-first enumeration over the LDL cone with incumbent pruning;
    per level the candidates zigzag outward from the real center, so
    once both frontier candidates prune, the level is exhausted.
    """
    n = len(a)
    low, diag = _ldl(a)
    t = [Fraction(x) for x in target]
    best_val = [None]
    best_arg = [None]

    def search(level, partial, zs):
        if level < 0:
            if best_val[0] is None or partial < best_val[0]:
                best_val[0] = partial
                best_arg[0] = list(zs)
            return
        c = t[level]
        for j in range(level + 1, n):
            c -= low[j][level] * (zs[j] - t[j])
        base = c.numerator // c.denominator
        offset = 0
        while True:
            pruned = 0
            for z in (base - offset, base + offset + 1):
                cost = partial + diag[level] * (z - c) * (z - c)
                if best_val[0] is not None and cost >= best_val[0]:
                    pruned += 1
                    continue
                zs[level] = z
                search(level - 1, cost, zs)
            if pruned == 2:
                break
            offset += 1

    search(n - 1, Fraction(0), [0] * n)
    if best_val[0] is None:
        raise CertificationFailure("lattice search returned nothing")
    return best_val[0], tuple(best_arg[0])


def orbit_max_q(g: GoeritzForm, covector) -> Fraction:
    """Exact max of v^T G^{-1} v over the orbit of a covector.

    Writing v = v0 + 2Gy turns the maximum over integer y into a closest
    vector problem for the positive form -G.
    """
    m = g.m
    a = [[-g.matrix[i][j] for j in range(m)] for i in range(m)]
    half = solve_rational(a, covector)
    target = [x / 2 for x in half]
    fmin, _ = _closest_lattice_value(a, target)
    return -4 * fmin


def d_invariant(g: GoeritzForm, cls) -> Fraction:
    """Correction term: max of (q(v) + m) / 4 over the class orbit."""
    covector = cls.representative if isinstance(cls, SpinCClass) else tuple(cls)
    qmax = orbit_max_q(g, covector)
    return (qmax + g.m) / Fraction(4)


@lru_cache(maxsize=256)
def _hnf_doubled(matrix):
    return hnf_basis([[2 * x for x in row] for row in matrix])


@lru_cache(maxsize=256)
def _hnf_plain(matrix):
    return hnf_basis([list(row) for row in matrix])


def canonical_key(g: GoeritzForm, covector):
    """Canonical orbit representative, reduced against twice the form."""
    return hnf_reduce(covector, _hnf_doubled(g.matrix))


def same_class(g: GoeritzForm, v1, v2) -> bool:
    """Orbit equality: (v1 - v2)/2 must be an integral image of G."""
    diff = [a - b for a, b in zip(v1, v2)]
    if any(x % 2 for x in diff):
        return False
    sol = solve_rational(g.matrix, [x // 2 for x in diff])
    return is_integral(sol)


def coker_class(g: GoeritzForm, covector):
    return hnf_reduce(covector, _hnf_plain(g.matrix))


def enumerate_spinc(g: GoeritzForm, covectors=None, threads=1):
    """All spin-c classes in canonical order, with correction terms.

    covectors, when given, lists one characteristic covector per state;
    every class must then receive exactly one state, and each state's
    covector must attain its orbit maximum.
    """
    det = det_exact(g.matrix)
    if det == 0:
        raise Singular("Goeritz matrix is singular")
    m = g.m
    h1 = _hnf_plain(g.matrix)
    diag = g.diagonal

    reps = set()
    box = [h1[i][i] for i in range(m)]
    idx = [0] * m
    while True:
        v = tuple(diag[i] + 2 * idx[i] for i in range(m))
        reps.add(canonical_key(g, v))
        k = m - 1
        while k >= 0:
            idx[k] += 1
            if idx[k] < box[k]:
                break
            idx[k] = 0
            k -= 1
        if k < 0:
            break
    reps = sorted(reps)
    if len(reps) != abs(det):
        raise CertificationFailure(
            "found %d classes, expected %d" % (len(reps), abs(det)))

    odd = det % 2 != 0

    def build(rep):
        d = d_invariant(g, rep)
        c1 = coker_class(g, rep) if odd else None
        return SpinCClass(rep, rep, d, c1)

    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            classes = list(pool.map(build, reps))
    else:
        classes = [build(rep) for rep in reps]

    if covectors is not None:
        by_key = {cls.canonical_key: i for i, cls in enumerate(classes)}
        assigned = {}
        for si, vec in enumerate(covectors):
            ci = by_key.get(canonical_key(g, tuple(vec)))
            if ci is None or ci in assigned:
                raise CertificationFailure(
                    "states do not biject onto spin-c classes")
            if quadform_q(g, vec) != 4 * classes[ci].d - m:
                raise CertificationFailure(
                    "state covector does not attain the orbit maximum")
            assigned[ci] = si
        if len(assigned) != len(classes):
            raise CertificationFailure(
                "states do not biject onto spin-c classes")
        classes = [
            SpinCClass(cls.representative, cls.canonical_key, cls.d,
                       cls.c1_class, assigned[i])
            for i, cls in enumerate(classes)
        ]
    return classes


def spin_class(classes):
    """The unique class with vanishing coker class (odd determinant)."""
    hits = [c for c in classes if c.is_spin()]
    if len(hits) != 1:
        raise CertificationFailure(
            "expected a unique spin class, found %d" % len(hits))
    return hits[0]


def characteristic_subgraphs(w: MarkedGraph):
    """Induced subgraphs of the reduced graph with the parity property:
    every unmarked vertex sees its own full degree mod 2 in edges toward
    the subgraph (its own degree counted when it belongs).

    Solved as G y = diag(G) over GF(2); each solution is re-verified on
    the graph directly.  The count is a power of two, exactly one when
    the determinant is odd.
    """
    g = goeritz(w)
    a = [[x & 1 for x in row] for row in g.matrix]
    b = [x & 1 for x in g.diagonal]
    sol = gf2_affine_solutions(a, b)
    assert sol is not None, "characteristic systems are always consistent"
    particular, basis = sol
    order = g.vertex_order
    out = []
    for mask in range(1 << len(basis)):
        y = list(particular)
        for k in range(len(basis)):
            if mask >> k & 1:
                y = [p ^ q for p, q in zip(y, basis[k])]
        support = tuple(v for v, bit in zip(order, y) if bit)
        _verify_characteristic(w, support)
        out.append(CharSubgraph(support, cut_size(w, support)))
    out.sort(key=lambda c: (len(c.vertices), tuple(map(str, c.vertices))))
    return out


def _verify_characteristic(w: MarkedGraph, support):
    sset = set(support)
    for v in w.vertices:
        if v == w.marked:
            continue
        toward = sum(w.edges_between(v, u) for u in sset if u != v)
        e = toward + (w.degree(v) if v in sset else 0)
        assert (e - w.degree(v)) % 2 == 0, \
            "GF(2) solution fails the direct parity re-check"


def cut_size(w: MarkedGraph, vertices) -> int:
    """Edges of the full graph leaving the vertex set (marked outside)."""
    inside = set(vertices)
    return sum(1 for (u, v, _) in w.edges if (u in inside) != (v in inside))


def mu_bar(tree, c_vertices) -> Fraction:
    """Spin defect of a plumbing: (signature - <w_C, w_C>) / 8.

    The tree's intersection matrix supplies both terms; when the subset
    spans no edge and the tree is negative definite, the identity
    8 mu = cut - vertex count is asserted.
    """
    from .plumbing import PlumbingTree, intersection_matrix
    if not isinstance(tree, PlumbingTree):
        raise NotATree("mu_bar needs a plumbing tree")
    mat = intersection_matrix(tree)
    sig = signature(mat)
    sigma = sig[0] - sig[1]
    idx = {v: i for i, v in enumerate(tree.vertices)}
    w = [0] * len(tree.vertices)
    for v in c_vertices:
        w[idx[v]] = 1
    pairing = sum(wi * x for wi, x in zip(w, matvec(mat, w)))
    mu = Fraction(sigma - pairing, 8)
    inside = set(c_vertices)
    spans_edge = any(u in inside and v in inside for (u, v) in tree.edges)
    if not spans_edge and sig == (0, len(tree.vertices), 0):
        cut = sum(-tree.weight(v) for v in c_vertices)
        assert 8 * mu == -len(tree.vertices) + cut, \
            "8 mu must equal cut minus vertex count for definite trees"
    return mu


def obstruction_report(source, covectors=None, threads=1) -> ObstructionReport:
    """Evaluate every filling obstruction for a diagram or marked graph.

    Diagram input is reduced to its white graph with the state covectors
    attached, so the class/state bijection is certified along the way.
    """
    from . import plumbing as _plumbing
    if isinstance(source, MarkedGraph):
        w = source
    else:
        from .diagram import (checkerboard, kauffman_states, state_covector,
                              tait_graphs)
        coloring = checkerboard(source)
        w, _ = tait_graphs(source, coloring)
        if covectors is None:
            covectors = [state_covector(source, coloring, s, w)
                         for s in kauffman_states(source)]
    g = goeritz(w)
    det = det_exact(g.matrix)
    m = g.m
    if signature(g.matrix) != (0, m, 0):
        raise CertificationFailure("Goeritz form must be negative definite")
    special = all(d % 2 == 0 for d in w.degrees.values())
    odd = det % 2 != 0

    classes = enumerate_spinc(g, covectors=covectors, threads=threads)
    subs = characteristic_subgraphs(w)

    spin_d = None
    spin_bound = None
    if odd:
        sc = spin_class(classes)
        spin_d = sc.d
        spin_bound = math.floor(4 * spin_d)

    assert special == any(not c.vertices for c in subs), \
        "empty characteristic subgraph must coincide with specialness"
    nonempty = [c for c in subs if c.vertices]

    reduced = w.without_vertex(w.marked)
    tree = None
    if reduced.vertices and reduced.is_connected() and \
            len(reduced.edges) == len(reduced.vertices) - 1:
        tree = _plumbing.PlumbingTree(
            vertices=reduced.vertices,
            weights=tuple(-w.degree(v) for v in reduced.vertices),
            edges=tuple((u, v) for (u, v, _) in reduced.edges),
        )

    if special:
        cutbound = BoundVerdict(False, "link is special (empty subgraph is spin)")
        capbound = BoundVerdict(False, "link is special")
        entries = ()
    else:
        fmin = min(c.cut for c in nonempty)
        if odd:
            cutbound = BoundVerdict(True, "det odd and non-special",
                                    value=fmin, obstructed=fmin >= m)
        else:
            cutbound = BoundVerdict(False, "determinant is even")
        entries = []
        for c in nonempty:
            mu = lo = hi = None
            if tree is not None:
                mu = mu_bar(tree, c.vertices)
                lo = Fraction(-8) * mu / 9
                hi = Fraction(-8) * mu
            entries.append(CapEntry(c.vertices, c.cut, c.cut >= 9 * m,
                                    mu=mu, ue_lower=lo, ue_upper=hi))
        entries = tuple(entries)
        capbound = BoundVerdict(True, "non-special", value=fmin,
                                obstructed=fmin >= 9 * m)

    return ObstructionReport(
        m=m, det=abs(det), special=special, b2_bound=m,
        spin_d=spin_d, spin_b2_bound=spin_bound,
        cutbound=cutbound, capbound=capbound, cap_entries=entries,
        tree_reduced=tree is not None,
    )
