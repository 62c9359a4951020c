"""Chainmail links and the graph-level handle-slide simulator.

A chainmail link is a framed link drawn from a weighted signed plane
multigraph: one unknot per vertex with the weight as framing, one clasp
per edge.  Handle slides are simulated on the linking matrix (every
slide is the unimodular congruence L -> E^T L E) while the plane graph
contracts alongside to drive the geometric pair-selection rule; the
slid-over component leaves the tracked sublink at each step.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import (DegenerateGraph, Disconnected, EmptyCharacteristicSet,
                     InvalidEmbedding, MalformedInput, NotCharacteristic)
from .exactalg import gf2_affine_solutions, signature
from .graphs import MarkedGraph, default_outer_dart, euler_check


@dataclass(frozen=True, eq=False)
class ChainmailLink:
    graph: MarkedGraph          # loopless plane multigraph, no marked vertex
    weights: tuple              # framing per vertex
    signs: tuple                # +1 / -1 per edge
    outer_dart: tuple | None    # dart on the unbounded face
    from_tait: bool = False     # weights are minus full white degrees

    @property
    def vertices(self):
        return self.graph.vertices

    def linking_matrix(self):
        n = len(self.vertices)
        idx = self.graph.index
        mat = [[0] * n for _ in range(n)]
        for i, w in enumerate(self.weights):
            mat[i][i] = w
        for (u, v, _), sign in zip(self.graph.edges, self.signs):
            mat[idx[u]][idx[v]] += sign
            mat[idx[v]][idx[u]] += sign
        return [list(row) for row in mat]


@dataclass(frozen=True)
class SlideStep:
    slid: object                # component that slides (and survives)
    over: object                # component slid over (leaves the sublink)
    kind: str                   # "contract" or "merge"
    framing_after: int
    diagonal_after: tuple


@dataclass(frozen=True)
class SlideLog:
    vertex_order: tuple
    subset: tuple
    steps: tuple
    initial_matrix: tuple
    final_matrix: tuple
    final_vertex: object
    final_framing: int


@dataclass(frozen=True)
class FillingStats:
    b2: int
    sigma: int
    even_form: bool
    f: int


def build_chainmail(source, weights=None, signs=None) -> ChainmailLink:
    """Build a chainmail link from a document or a marked white graph.

    A marked graph drops its marked vertex; framings are minus the full
    degrees and all clasps are positive, so the linking matrix is the
    Goeritz matrix.  Documents carry explicit weights, signs, rotations.
    """
    if isinstance(source, MarkedGraph):
        if source.marked is None:
            graph = source
            if weights is None:
                raise MalformedInput("weights required for unmarked graphs")
            weights = tuple(weights)
            from_tait = False
            outer = default_outer_dart(graph) if graph.rotations else None
        else:
            full = source
            graph = full.without_vertex(full.marked)
            if not graph.vertices:
                raise DegenerateGraph("no components after reduction")
            weights = tuple(-full.degree(v) for v in graph.vertices)
            from_tait = True
            outer = _outer_from_deletion(full, graph)
        if signs is None:
            signs = tuple(1 for _ in graph.edges)
        link = ChainmailLink(graph, weights, tuple(signs), outer, from_tait)
    else:
        link = _parse_chainmail_doc(source)
    if not link.graph.is_connected():
        raise Disconnected("chainmail graph must be connected")
    if link.graph.rotations is not None:
        euler_check(link.graph)
    return link


def _outer_from_deletion(full: MarkedGraph, reduced: MarkedGraph):
    """Outer face of the reduced embedding: the region that swallowed
    the deleted marked vertex.

    A surviving dart whose predecessor in the full rotation was deleted
    opens into that region, and the face sweeping a corner contains the
    dart the corner precedes.
    """
    if reduced.rotations is None or not reduced.edges:
        return None
    marked = full.marked
    kept = [i for i, (a, b, _) in enumerate(full.edges) if marked not in (a, b)]
    remap = {old: new for new, old in enumerate(kept)}
    for v in reduced.vertices:
        if marked not in full.neighbors[v]:
            continue
        full_rot = full.rotations[full.index[v]]
        n = len(full_rot)
        for i, dart in enumerate(full_rot):
            if dart[0] in remap:
                continue
            nxt = full_rot[(i + 1) % n]
            if nxt[0] in remap:
                return (remap[nxt[0]], nxt[1])
    return default_outer_dart(reduced)


def _parse_chainmail_doc(text) -> ChainmailLink:
    from .graphs import parse_graph_doc
    graph, weights, signs, outer = parse_graph_doc(text)
    if graph.marked is not None:
        # Marked documents carry white-graph semantics: weights are
        # minus the full degrees, clasps all positive.
        return build_chainmail(graph)
    if weights is None:
        raise MalformedInput("chainmail document needs vertex weights")
    if outer is None and graph.rotations is not None:
        outer = default_outer_dart(graph)
    return ChainmailLink(graph, weights, signs, outer)


def is_characteristic(link: ChainmailLink, subset) -> bool:
    """Sublink parity test: L w ~ diag(L) mod 2 for the indicator w."""
    mat = link.linking_matrix()
    idx = link.graph.index
    w = [0] * len(link.vertices)
    for v in subset:
        w[idx[v]] = 1
    for i in range(len(mat)):
        total = sum(mat[i][j] * w[j] for j in range(len(mat)))
        if (total - mat[i][i]) % 2:
            return False
    return True


def characteristic_subsets(link: ChainmailLink):
    """All characteristic sublinks, as sorted vertex tuples."""
    mat = link.linking_matrix()
    a = [[x & 1 for x in row] for row in mat]
    b = [mat[i][i] & 1 for i in range(len(mat))]
    sol = gf2_affine_solutions(a, b)
    assert sol is not None, "characteristic systems are always consistent"
    particular, basis = sol
    out = []
    for mask in range(1 << len(basis)):
        y = list(particular)
        for k in range(len(basis)):
            if mask >> k & 1:
                y = [p ^ q for p, q in zip(y, basis[k])]
        out.append(tuple(v for v, bit in zip(link.vertices, y) if bit))
    out.sort(key=lambda t: (len(t), tuple(map(str, t))))
    return out


class _PlaneWork:
    """Mutable contracted copy of a plane multigraph."""

    def __init__(self, graph: MarkedGraph, outer_dart):
        self.edges = {i: (u, v) for i, (u, v, _) in enumerate(graph.edges)}
        self.rot = {v: list(graph.rotation_of(v)) for v in graph.vertices}
        self.outer = outer_dart

    def endpoint(self, dart):
        e, end = dart
        return self.edges[e][end]

    def vertices(self):
        return list(self.rot)

    def parallel_edges(self, u, v):
        return [e for e, (a, b) in self.edges.items() if {a, b} == {u, v}]

    def adjacent_pairs(self, inside):
        pairs = set()
        for (a, b) in self.edges.values():
            if a in inside and b in inside and a != b:
                pairs.add((a, b) if str(a) <= str(b) else (b, a))
        return sorted(pairs, key=lambda p: (str(p[0]), str(p[1])))

    def faces(self):
        pos = {}
        for v, rot in self.rot.items():
            for i, d in enumerate(rot):
                pos[d] = (v, i)
        faces = []
        seen = set()
        for e in self.edges:
            for end in (0, 1):
                d0 = (e, end)
                if d0 in seen:
                    continue
                face = []
                d = d0
                while True:
                    face.append(d)
                    seen.add(d)
                    opp = (d[0], 1 - d[1])
                    w, i = pos[opp]
                    rot = self.rot[w]
                    d = rot[(i + 1) % len(rot)]
                    if d == d0:
                        break
                faces.append(tuple(face))
        return faces

    def vertices_inside(self, u, v):
        """Vertices strictly inside the region enclosed by the parallel
        family between u and v, relative to the tracked outer face.

        Faces of the whole drawing are merged across every edge outside
        the family; the classes are the faces of the two-vertex
        subgraph.  Vertices not in the outer class are inside.
        """
        family = set(self.parallel_edges(u, v))
        if len(family) <= 1:
            return set()
        faces = self.faces()
        side = {}
        for fi, face in enumerate(faces):
            for d in face:
                side[d] = fi
        parent = list(range(len(faces)))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for e in self.edges:
            if e not in family:
                a, b = find(side[(e, 0)]), find(side[(e, 1)])
                if a != b:
                    parent[a] = b
        if self.outer is not None and self.outer in side:
            outer_class = find(side[self.outer])
        else:
            # largest face fallback
            big = max(range(len(faces)), key=lambda i: (len(faces[i]), -i))
            outer_class = find(big)
        inside = set()
        for w, rot in self.rot.items():
            if w in (u, v) or not rot:
                continue
            cls = find(side[rot[0]])
            if cls != outer_class:
                inside.add(w)
        return inside

    def contract(self, keep, drop):
        """Contract the whole parallel family between keep and drop."""
        family = self.parallel_edges(keep, drop)
        e0 = next(e for e in family
                  if (e, 0) in self.rot[keep] or (e, 1) in self.rot[keep])
        d_keep = (e0, 0) if self.endpoint((e0, 0)) == keep else (e0, 1)
        d_drop = (e0, 1 - d_keep[1])
        rk = self.rot[keep]
        rd = self.rot[drop]
        i = rk.index(d_keep)
        j = rd.index(d_drop)
        spliced = rk[:i] + rd[j + 1:] + rd[:j] + rk[i + 1:]
        # reattach drop's darts, then delete the family (now loops)
        for e, (a, b) in list(self.edges.items()):
            na = keep if a == drop else a
            nb = keep if b == drop else b
            self.edges[e] = (na, nb)
        spliced = [d for d in spliced if d[0] not in family]
        if self.outer is not None and self.outer[0] in family:
            self.outer = None
        for e in family:
            del self.edges[e]
        self.rot[keep] = spliced
        del self.rot[drop]


def mk1_run(link: ChainmailLink, subset) -> SlideLog:
    """Contract a sublink to a single component by handle slides.

    Within each connected component of the induced subgraph the pair to
    slide is the lexicographically first adjacent pair whose enclosed
    region contains no other component vertex; afterwards the component
    representatives are merged along a star.  Each slide updates the
    linking matrix by the congruence with E = I + e_over e_slid^T and
    drops the slid-over component from the tracked sublink.
    """
    subset = tuple(subset)
    if not subset:
        raise EmptyCharacteristicSet("nothing to slide")
    if not link.graph.is_connected():
        raise Disconnected("chainmail graph must be connected")
    idx = link.graph.index
    for v in subset:
        if v not in idx:
            raise MalformedInput("unknown vertex %r" % (v,))

    mat = link.linking_matrix()
    initial = tuple(tuple(row) for row in mat)
    order = link.vertices
    steps = []

    def slide(slid, over, kind):
        p, s = idx[slid], idx[over]
        n = len(mat)
        for j in range(n):
            mat[p][j] += mat[s][j]
        for i in range(n):
            mat[i][p] += mat[i][s]
        steps.append(SlideStep(
            slid=slid, over=over, kind=kind,
            framing_after=mat[p][p],
            diagonal_after=tuple(mat[i][i] for i in range(n)),
        ))

    # Connected components of the induced subgraph, processed in order
    # of their smallest member.
    inside = set(subset)
    comp_of = {}
    for v in sorted(subset, key=str):
        if v in comp_of:
            continue
        comp = {v}
        stack = [v]
        while stack:
            for w in link.graph.neighbors[stack.pop()]:
                if w in inside and w not in comp:
                    comp.add(w)
                    stack.append(w)
        for w in comp:
            comp_of[w] = v

    components = {}
    for v in subset:
        components.setdefault(comp_of[v], set()).add(v)

    reps = []
    for root in sorted(components, key=str):
        comp = components[root]
        if len(comp) == 1:
            reps.append(next(iter(comp)))
            continue
        if link.graph.rotations is None:
            raise InvalidEmbedding("handle-slide order needs a rotation system")
        work = _PlaneWork(link.graph, link.outer_dart)
        # Restrict to the component: delete all other vertices' edges so
        # face regions reflect the component's own sub-embedding.
        for v in list(work.rot):
            if v not in comp:
                dead = [e for e, (a, b) in work.edges.items() if v in (a, b)]
                for e in dead:
                    del work.edges[e]
                del work.rot[v]
        for v in comp:
            work.rot[v] = [d for d in work.rot[v] if d[0] in work.edges]
        if work.outer is not None and work.outer[0] not in work.edges:
            work.outer = None
        active = set(comp)
        while len(active) > 1:
            pair = None
            for (a, b) in work.adjacent_pairs(active):
                if not work.vertices_inside(a, b):
                    pair = (a, b)
                    break
            assert pair is not None, "a slidable pair always exists"
            keep, drop = pair
            slide(keep, drop, "contract")
            work.contract(keep, drop)
            active.discard(drop)
        reps.append(next(iter(active)))

    center = reps[0]
    for other in reps[1:]:
        slide(center, other, "merge")

    p = idx[center]
    final_framing = mat[p][p]
    w = [1 if v in inside else 0 for v in order]
    quad = sum(w[i] * initial[i][j] * w[j]
               for i in range(len(order)) for j in range(len(order)))
    assert final_framing == quad, \
        "slides must accumulate the sublink self-pairing"
    if link.from_tait:
        cut = -quad
        direct = sum(1 for ((u, v, _), s) in zip(link.graph.edges, link.signs)
                     if (u in inside) != (v in inside))
        direct += sum(-link.weights[idx[v]] - link.graph.degree(v)
                      for v in inside)
        assert cut == direct, "final framing must equal minus the cut"

    return SlideLog(
        vertex_order=order,
        subset=subset,
        steps=tuple(steps),
        initial_matrix=initial,
        final_matrix=tuple(tuple(row) for row in mat),
        final_vertex=center,
        final_framing=final_framing,
    )


def kaplan_filling(link: ChainmailLink, subset) -> FillingStats:
    """Spin-filling statistics after sliding, blowing up and down.

    Starting from the chainmail filling, the tracked sublink is slid to
    one component with framing -f, its framing is pushed to -1 by f-1
    meridian blow-ups and the component is blown down.  The surviving
    matrix must have an even diagonal, which certifies the spin form.
    """
    subset = tuple(subset)
    if not is_characteristic(link, subset):
        raise NotCharacteristic("subset fails the linking parity test")
    mat = link.linking_matrix()
    n = len(mat)
    sig = signature(mat)
    sigma0 = sig[0] - sig[1]
    if not subset:
        assert all(mat[i][i] % 2 == 0 for i in range(n)), \
            "empty characteristic sublink needs an even diagonal"
        return FillingStats(b2=n, sigma=sigma0, even_form=True, f=0)

    log = mk1_run(link, subset)
    mat = [list(row) for row in log.final_matrix]
    p = link.graph.index[log.final_vertex]
    framing = mat[p][p]
    assert framing < 0, "characteristic framing must be negative here"
    f = -framing
    b2 = n
    sigma = sigma0

    # f - 1 blow-ups: adjoin a +1-framed meridian and slide over it.
    for _ in range(f - 1):
        for row in mat:
            row.append(0)
        mat.append([0] * (len(mat) + 1))
        mat[-1][-1] = 1
        k = len(mat) - 1
        for j in range(len(mat)):
            mat[p][j] += mat[k][j]
        for i in range(len(mat)):
            mat[i][p] += mat[i][k]
        b2 += 1
        sigma += 1
    assert mat[p][p] == -1

    # Blow down: clear the row/column with the -1 pivot, then delete it.
    for i in range(len(mat)):
        if i == p:
            continue
        c = mat[i][p]
        if c:
            for j in range(len(mat)):
                mat[i][j] += c * mat[p][j]
            for j in range(len(mat)):
                mat[j][i] += c * mat[j][p]
    mat = [[mat[i][j] for j in range(len(mat)) if j != p]
           for i in range(len(mat)) if i != p]
    b2 -= 1
    sigma += 1

    even = all(mat[i][i] % 2 == 0 for i in range(len(mat)))
    assert even, "blown-down matrix must be even on the diagonal"
    return FillingStats(b2=b2, sigma=sigma, even_form=even, f=f)


@dataclass(frozen=True)
class FurutaVerdict:
    m: int
    f: int
    threshold: int
    obstructed: bool
    b2: int | None = None
    b2_feasible: bool | None = None


def furuta_check(m: int, f: int, b2=None) -> FurutaVerdict:
    """Ten-eighths arithmetic for a closed-up spin pairing.

    Obstructed exactly when f >= 9 m.  With a hypothetical b2 the exact
    inequality b2 + m + f - 2 >= 10/8 |m - f - b2| + 2 is evaluated.
    """
    if m < 1 or f < 0:
        raise MalformedInput("need m >= 1 and f >= 0")
    feasible = None
    if b2 is not None:
        lhs = Fraction(b2 + m + f - 2)
        rhs = Fraction(10, 8) * abs(m - f - b2) + 2
        feasible = lhs >= rhs
    return FurutaVerdict(m=m, f=f, threshold=9 * m,
                         obstructed=f >= 9 * m, b2=b2, b2_feasible=feasible)
