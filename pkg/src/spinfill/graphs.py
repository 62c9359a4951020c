"""Marked plane multigraphs with rotation systems.

A graph is a vertex tuple, an edge tuple of (u, v, label) triples, an
optional marked vertex and an optional rotation system.  Darts are
(edge_index, end) pairs with end in {0, 1}; the rotation at a vertex
lists its incident darts in counterclockwise order, which pins an
embedding in the oriented sphere.  Loops are not supported.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from .errors import Disconnected, InvalidEmbedding, MalformedInput

Dart = tuple  # (edge index, end)


@dataclass(frozen=True, eq=False)
class MarkedGraph:
    vertices: tuple
    edges: tuple  # (u, v, label)
    marked: object = None
    rotations: tuple | None = None  # per vertex, tuple of darts, ccw
    color: str | None = None

    def __post_init__(self):
        seen = set(self.vertices)
        if len(seen) != len(self.vertices):
            raise MalformedInput("duplicate vertex ids")
        if self.marked is not None and self.marked not in seen:
            raise MalformedInput("marked vertex %r not in graph" % (self.marked,))
        for u, v, _ in self.edges:
            if u not in seen or v not in seen:
                raise MalformedInput("edge endpoint not in vertex set")
            if u == v:
                raise MalformedInput("loop edges are not supported")
        if self.rotations is not None:
            _validate_rotations(self)

    @cached_property
    def index(self):
        return {v: i for i, v in enumerate(self.vertices)}

    @cached_property
    def degrees(self):
        deg = {v: 0 for v in self.vertices}
        for u, v, _ in self.edges:
            deg[u] += 1
            deg[v] += 1
        return deg

    def degree(self, v):
        return self.degrees[v]

    @cached_property
    def multiplicity(self):
        """Unordered pair -> number of parallel edges."""
        mult = {}
        for u, v, _ in self.edges:
            key = _pair(u, v)
            mult[key] = mult.get(key, 0) + 1
        return mult

    def edges_between(self, u, v):
        return self.multiplicity.get(_pair(u, v), 0)

    @cached_property
    def neighbors(self):
        nbr = {v: set() for v in self.vertices}
        for u, v, _ in self.edges:
            nbr[u].add(v)
            nbr[v].add(u)
        return nbr

    def endpoint(self, dart):
        e, end = dart
        u, v, _ = self.edges[e]
        return u if end == 0 else v

    def is_connected(self):
        if not self.vertices:
            return True
        stack = [self.vertices[0]]
        seen = {self.vertices[0]}
        while stack:
            for w in self.neighbors[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == len(self.vertices)

    def without_vertex(self, v):
        """Delete a vertex with its edges; rotations are filtered."""
        keep = [i for i, (a, b, _) in enumerate(self.edges) if v not in (a, b)]
        remap = {old: new for new, old in enumerate(keep)}
        new_edges = tuple(self.edges[i] for i in keep)
        new_vertices = tuple(w for w in self.vertices if w != v)
        new_rot = None
        if self.rotations is not None:
            new_rot = tuple(
                tuple((remap[e], end) for (e, end) in self.rotations[self.index[w]]
                      if e in remap)
                for w in new_vertices
            )
        return MarkedGraph(new_vertices, new_edges, marked=None,
                           rotations=new_rot, color=self.color)

    def rotation_of(self, v):
        return self.rotations[self.index[v]]

    def faces(self):
        return trace_faces(self)


def _pair(u, v):
    return (u, v) if str(u) <= str(v) else (v, u)


def _validate_rotations(g: MarkedGraph):
    if len(g.rotations) != len(g.vertices):
        raise InvalidEmbedding("rotation list length != vertex count")
    seen = set()
    for v, rot in zip(g.vertices, g.rotations):
        for dart in rot:
            e, end = dart
            if not (0 <= e < len(g.edges)) or end not in (0, 1):
                raise InvalidEmbedding("bad dart %r" % (dart,))
            if g.endpoint(dart) != v:
                raise InvalidEmbedding("dart %r listed at wrong vertex" % (dart,))
            if dart in seen:
                raise InvalidEmbedding("dart %r listed twice" % (dart,))
            seen.add(dart)
    if len(seen) != 2 * len(g.edges):
        raise InvalidEmbedding("rotation system misses some edge ends")


def trace_faces(g: MarkedGraph):
    """Face orbits of the rotation system.

    Each face is a tuple of darts: from dart d, walk the edge to its far
    end and turn to the next dart counterclockwise.  Every dart lies on
    exactly one face.
    """
    if g.rotations is None:
        raise InvalidEmbedding("graph carries no rotation system")
    pos = {}
    for v, rot in zip(g.vertices, g.rotations):
        for i, d in enumerate(rot):
            pos[d] = (v, i)
    faces = []
    seen = set()
    for e in range(len(g.edges)):
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
                rot = g.rotations[g.index[w]]
                d = rot[(i + 1) % len(rot)]
                if d == d0:
                    break
            faces.append(tuple(face))
    return faces


def euler_check(g: MarkedGraph):
    """Genus-zero check V - E + F = 2 for a connected embedded graph."""
    if not g.is_connected():
        raise Disconnected("embedded graph must be connected")
    f = len(trace_faces(g)) if g.edges else 1
    if len(g.vertices) - len(g.edges) + f != 2:
        raise InvalidEmbedding("rotation system has positive genus")


def face_corners(g: MarkedGraph, face):
    """Corner tokens (vertex, gap index) swept by a face.

    The corner for a dart d is taken at the far end of d: the gap in
    that vertex's rotation between the opposite dart and its successor.
    Gap index i denotes the slot just before rotation entry i.
    """
    pos = {}
    for v, rot in zip(g.vertices, g.rotations):
        for i, d in enumerate(rot):
            pos[d] = (v, i)
    corners = []
    for d in face:
        opp = (d[0], 1 - d[1])
        w, i = pos[opp]
        corners.append((w, (i + 1) % len(g.rotations[g.index[w]])))
    return corners


def default_outer_dart(g: MarkedGraph):
    """Deterministic outer-face choice: a dart of the largest face.

    Ties break toward the face containing the smallest dart.  Only the
    choice of unbounded face distinguishes a plane drawing from the
    sphere embedding, so any fixed rule will do.
    """
    faces = trace_faces(g)
    best = None
    for face in faces:
        key = (-len(face), min(face))
        if best is None or key < best[0]:
            best = (key, face[0])
    return best[1] if best else None


def dual_adjacent_faces(g: MarkedGraph):
    """For each edge index, the pair of face indices on its two sides."""
    faces = trace_faces(g)
    side = {}
    for fi, face in enumerate(faces):
        for d in face:
            side[d] = fi
    return faces, [(side[(e, 0)], side[(e, 1)]) for e in range(len(g.edges))]


def bridges(g: MarkedGraph):
    """Edge indices whose removal disconnects the graph.

    Parallel copies are never bridges; the DFS runs on edge ids.
    """
    low = {}
    num = {}
    out = []
    counter = [0]
    adj = {v: [] for v in g.vertices}
    for i, (u, v, _) in enumerate(g.edges):
        adj[u].append((v, i))
        adj[v].append((u, i))

    for root in g.vertices:
        if root in num:
            continue
        stack = [(root, -1, iter(adj[root]))]
        num[root] = low[root] = counter[0]
        counter[0] += 1
        while stack:
            v, pedge, it = stack[-1]
            advanced = False
            for (w, ei) in it:
                if ei == pedge:
                    continue
                if w not in num:
                    num[w] = low[w] = counter[0]
                    counter[0] += 1
                    stack.append((w, ei, iter(adj[w])))
                    advanced = True
                    break
                low[v] = min(low[v], num[w])
            if not advanced:
                stack.pop()
                if stack:
                    p = stack[-1][0]
                    low[p] = min(low[p], low[v])
                    if low[v] > num[p] and g.edges_between(p, v) == 1:
                        out.append(pedge)
    return out


def multigraph_isomorphic(g1: MarkedGraph, g2: MarkedGraph, respect_marked=True):
    """Backtracking isomorphism test on small multigraphs."""
    if len(g1.vertices) != len(g2.vertices) or len(g1.edges) != len(g2.edges):
        return False
    if sorted(g1.degrees.values()) != sorted(g2.degrees.values()):
        return False
    vs1 = sorted(g1.vertices, key=lambda v: (-g1.degree(v), str(v)))
    cand = {
        v: [w for w in g2.vertices if g2.degree(w) == g1.degree(v)]
        for v in vs1
    }
    if respect_marked and (g1.marked is None) != (g2.marked is None):
        return False

    def extend(i, mapping, used):
        if i == len(vs1):
            return True
        v = vs1[i]
        for w in cand[v]:
            if w in used:
                continue
            if respect_marked and g1.marked is not None:
                if (v == g1.marked) != (w == g2.marked):
                    continue
            ok = True
            for u, img in mapping.items():
                if g1.edges_between(v, u) != g2.edges_between(w, img):
                    ok = False
                    break
            if ok:
                mapping[v] = w
                used.add(w)
                if extend(i + 1, mapping, used):
                    return True
                del mapping[v]
                used.remove(w)
        return False

    return extend(0, {}, set())


def parse_graph_doc(text):
    """Parse a graph document into its components.

    {"vertices": [{"id", "weight"?}], "edges": [{"u","v","sign"?}] or
    [[u, v], ...], "rotations": {vertex: [edge indices]}?, "marked": id?,
    "outer": [edge, end]?}

    Returns (graph, weights, signs, outer); weights is None when no
    vertex carries one.
    """
    import json as _json
    doc = text if isinstance(text, dict) else None
    if doc is None:
        try:
            doc = _json.loads(text)
        except (_json.JSONDecodeError, TypeError) as exc:
            raise MalformedInput("not a valid document: %s" % exc) from exc
    if not isinstance(doc, dict) or "vertices" not in doc:
        raise MalformedInput("graph document needs a 'vertices' list")
    try:
        vertices = tuple(v["id"] for v in doc["vertices"])
        has_weights = any("weight" in v for v in doc["vertices"])
        weights = tuple(int(v.get("weight", 0)) for v in doc["vertices"]) \
            if has_weights else None
    except (TypeError, KeyError, ValueError) as exc:
        raise MalformedInput("bad vertex list: %s" % exc) from exc
    edges = []
    signs = []
    for k, e in enumerate(doc.get("edges", ())):
        if isinstance(e, dict):
            try:
                u, v = e["u"], e["v"]
            except KeyError as exc:
                raise MalformedInput("edge %d misses an endpoint" % k) from exc
            sign = int(e.get("sign", 1))
        elif isinstance(e, (list, tuple)) and len(e) >= 2:
            u, v = e[0], e[1]
            sign = 1
        else:
            raise MalformedInput("edge %r is not a pair" % (e,))
        if sign not in (1, -1):
            raise MalformedInput("edge sign must be +1 or -1")
        edges.append((u, v, k))
        signs.append(sign)
    rotations = None
    if "rotations" in doc:
        rot_doc = doc["rotations"]
        rotations = []
        for v in vertices:
            key = v if v in rot_doc else str(v)
            if key not in rot_doc:
                raise InvalidEmbedding("rotation missing for vertex %r" % (v,))
            rot = []
            for e_idx in rot_doc[key]:
                if not (isinstance(e_idx, int) and 0 <= e_idx < len(edges)):
                    raise InvalidEmbedding("rotation cites unknown edge %r" % (e_idx,))
                u, w, _ = edges[e_idx]
                if v == u:
                    rot.append((e_idx, 0))
                elif v == w:
                    rot.append((e_idx, 1))
                else:
                    raise InvalidEmbedding(
                        "vertex %r lists edge %r it does not touch" % (v, e_idx))
            rotations.append(tuple(rot))
        rotations = tuple(rotations)
    graph = MarkedGraph(vertices, tuple(edges), marked=doc.get("marked"),
                        rotations=rotations)
    outer = tuple(doc["outer"]) if "outer" in doc else None
    return graph, weights, tuple(signs), outer


def graph_to_doc(g: MarkedGraph, weights=None):
    """Serialize a graph back into the document shape."""
    doc = {"vertices": [], "edges": []}
    wmap = dict(zip(g.vertices, weights)) if weights is not None else {}
    for v in g.vertices:
        entry = {"id": v}
        if v in wmap:
            entry["weight"] = wmap[v]
        doc["vertices"].append(entry)
    for (u, v, _) in g.edges:
        doc["edges"].append([u, v])
    if g.marked is not None:
        doc["marked"] = g.marked
    if g.rotations is not None:
        doc["rotations"] = {
            str(v): [e for (e, _) in g.rotations[g.index[v]]]
            for v in g.vertices
        }
    return doc


def gen_plane_multigraph(rng, n_vertices, n_extra_edges, marked=True,
                         bridgeless=False):
    """Random connected loopless plane multigraph with rotations.

    Grows a tree by hanging leaves at random rotation gaps, then adds
    edges between two corners of a common face, which keeps the rotation
    system planar by construction.  With bridgeless=True every bridge is
    doubled at the end (a parallel copy drawn alongside it).
    """
    if n_vertices < 2:
        raise ValueError("need at least two vertices")
    edges = [(0, 1)]
    rot = {0: [(0, 0)], 1: [(0, 1)]}
    nv = 2
    while nv < n_vertices:
        w = rng.randrange(nv)
        gap = rng.randrange(max(1, len(rot[w])))
        e = len(edges)
        edges.append((w, nv))
        rot[w].insert(gap, (e, 0))
        rot[nv] = [(e, 1)]
        nv += 1

    def build():
        return MarkedGraph(
            tuple(range(nv)),
            tuple((u, v, i) for i, (u, v) in enumerate(edges)),
            marked=0 if marked else None,
            rotations=tuple(tuple(rot[v]) for v in range(nv)),
        )

    added = 0
    attempts = 0
    while added < n_extra_edges and attempts < 50 * (n_extra_edges + 1):
        attempts += 1
        g = build()
        faces = trace_faces(g)
        face = faces[rng.randrange(len(faces))]
        corners = face_corners(g, face)
        if len(corners) < 2:
            continue
        c1 = corners[rng.randrange(len(corners))]
        c2 = corners[rng.randrange(len(corners))]
        if c1[0] == c2[0]:
            continue
        (u, gu), (v, gv) = c1, c2
        e = len(edges)
        edges.append((u, v))
        rot[u].insert(gu, (e, 0))
        rot[v].insert(gv, (e, 1))
        added += 1

    if bridgeless:
        g = build()
        for ei in bridges(g):
            u, v, _ = g.edges[ei]
            e = len(edges)
            edges.append((u, v))
            rot[u].insert(rot[u].index((ei, 0)) + 1, (e, 0))
            rot[v].insert(rot[v].index((ei, 1)) + 1, (e, 1))

    g = build()
    euler_check(g)
    return g
