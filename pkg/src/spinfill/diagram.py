"""Alternating link diagrams from PD codes.

A crossing is a 4-tuple of arc ids listed counterclockwise starting at
the incoming under-strand, so slots 0/2 are the under-strand ends and
slots 1/3 the over-strand ends.  Corner s of a crossing is the quadrant
between slot s and slot s+1.  The checkerboard convention used
throughout colors corners 0 and 2 white and corners 1 and 3 black; for
an alternating diagram exactly one of the two proper face colorings
satisfies this at every crossing.

The regions of the diagram are recovered purely combinatorially by
tracing the faces of the rotation system implied by tuple order.
"""
from __future__ import annotations

import json
from dataclasses import dataclass

from .errors import (Disconnected, MalformedInput, NonPlanar,
                     NotAlternating, NotReduced)
from .graphs import MarkedGraph

WHITE = "white"
BLACK = "black"


@dataclass(frozen=True, eq=False)
class KnotDiagram:
    crossings: tuple          # 4-tuples of arc ids
    arcs: tuple               # sorted arc ids
    regions: tuple            # per region, cyclic tuple of (crossing, corner) tokens
    corner_region: tuple      # corner_region[c][s] = region at corner s of crossing c
    arc_ends: dict            # arc id -> ((c1, s1), (c2, s2))
    marked_arc: object
    marked_regions: tuple     # (region, region) flanking the marked arc

    @property
    def n(self):
        return len(self.crossings)


@dataclass(frozen=True)
class Coloring:
    colors: tuple  # per region, WHITE or BLACK

    def color(self, region):
        return self.colors[region]

    def regions_of(self, color):
        return tuple(i for i, c in enumerate(self.colors) if c == color)


@dataclass(frozen=True)
class KauffmanState:
    assignment: tuple  # region index per crossing


def _as_document(text):
    if isinstance(text, (dict, list)):
        return text
    try:
        return json.loads(text)
    except (json.JSONDecodeError, TypeError) as exc:
        raise MalformedInput("not a valid document: %s" % exc) from exc


def parse_pd(text) -> KnotDiagram:
    """Parse a PD document {"pd": [[a,b,c,d], ...], "marked_arc": k?}.

    A bare list of 4-tuples is accepted as shorthand.
    """
    doc = _as_document(text)
    if isinstance(doc, list):
        doc = {"pd": doc}
    if not isinstance(doc, dict) or "pd" not in doc:
        raise MalformedInput("document must contain a 'pd' entry")
    pd = doc["pd"]
    if not isinstance(pd, list) or not pd:
        raise MalformedInput("'pd' must be a non-empty list of crossings")
    crossings = []
    for t in pd:
        if not isinstance(t, (list, tuple)) or len(t) != 4:
            raise MalformedInput("crossing %r is not a 4-tuple" % (t,))
        if not all(isinstance(x, int) for x in t):
            raise MalformedInput("arc ids must be integers: %r" % (t,))
        crossings.append(tuple(t))
    crossings = tuple(crossings)
    n = len(crossings)

    ends = {}
    for c, tup in enumerate(crossings):
        for s, arc in enumerate(tup):
            ends.setdefault(arc, []).append((c, s))
    for arc, where in ends.items():
        if len(where) != 2:
            raise MalformedInput(
                "arc %r appears %d times, expected 2" % (arc, len(where)))
    arcs = tuple(sorted(ends))

    # Connectivity of the 4-valent projection; split inputs are refused.
    adj = {c: set() for c in range(n)}
    for (c1, _), (c2, _) in ends.values():
        adj[c1].add(c2)
        adj[c2].add(c1)
    seen = {0}
    stack = [0]
    while stack:
        for w in adj[stack.pop()]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    if len(seen) != n:
        raise Disconnected("split diagram: projection is disconnected")

    # Face tracing: from end (c, s) jump to the arc's other end and turn
    # counterclockwise.  Each orbit is a region, stored as the cyclic
    # sequence of corners it sweeps; corner s sits between slots s, s+1.
    other = {}
    for (d1, d2) in (tuple(v) for v in ends.values()):
        other[d1] = d2
        other[d2] = d1
    regions = []
    corner_region = [[None] * 4 for _ in range(n)]
    visited = set()
    for c0 in range(n):
        for s0 in range(4):
            if (c0, s0) in visited:
                continue
            corners = []
            d = (c0, s0)
            while True:
                visited.add(d)
                c2, s2 = other[d]
                corners.append((c2, s2))
                corner_region[c2][s2] = len(regions)
                d = (c2, (s2 + 1) % 4)
                if d == (c0, s0):
                    break
            regions.append(tuple(corners))
    if len(regions) != n + 2:
        raise NonPlanar(
            "face tracing gives %d regions, expected %d" % (len(regions), n + 2))

    for arc, ((c1, s1), (c2, s2)) in ((a, tuple(w)) for a, w in ends.items()):
        if (s1 - s2) % 2 == 0:
            raise NotAlternating("arc %r fails over/under alternation" % (arc,))

    # Reduced: opposite corners at a crossing lie in distinct regions.
    for c in range(n):
        if corner_region[c][0] == corner_region[c][2] or \
           corner_region[c][1] == corner_region[c][3]:
            raise NotReduced("crossing %d is nugatory" % c)

    marked_arc = doc.get("marked_arc", arcs[0])
    if marked_arc not in ends:
        raise MalformedInput("marked_arc %r is not an arc id" % (marked_arc,))
    # The two regions flanking an arc are the faces through its ends;
    # the face through end d sweeps the corner at the opposite end.
    (c1, s1), (c2, s2) = ends[marked_arc]
    marked_regions = (corner_region[c2][s2], corner_region[c1][s1])

    return KnotDiagram(
        crossings=crossings,
        arcs=arcs,
        regions=tuple(regions),
        corner_region=tuple(tuple(r) for r in corner_region),
        arc_ends={a: tuple(w) for a, w in ends.items()},
        marked_arc=marked_arc,
        marked_regions=marked_regions,
    )


def checkerboard(diagram: KnotDiagram) -> Coloring:
    """The unique proper 2-coloring with corners 0/2 white everywhere."""
    nreg = len(diagram.regions)
    colors = [None] * nreg
    colors[diagram.corner_region[0][0]] = WHITE
    # Adjacent regions (across any arc) get opposite colors.
    stack = [diagram.corner_region[0][0]]
    adjacency = {i: set() for i in range(nreg)}
    for c in range(diagram.n):
        for s in range(4):
            a = diagram.corner_region[c][s]
            b = diagram.corner_region[c][(s + 1) % 4]
            adjacency[a].add(b)
            adjacency[b].add(a)
    while stack:
        r = stack.pop()
        nxt = WHITE if colors[r] == BLACK else BLACK
        for w in adjacency[r]:
            if colors[w] is None:
                colors[w] = nxt
                stack.append(w)
            elif colors[w] == colors[r]:
                raise NonPlanar("regions are not checkerboard colorable")
    coloring = Coloring(tuple(colors))
    if not convention_ok(diagram, coloring):
        # A validated alternating diagram always satisfies the convention
        # in exactly one of the two proper colorings.
        raise NotAlternating("no coloring matches the crossing convention")
    return coloring


def convention_ok(diagram: KnotDiagram, coloring: Coloring) -> bool:
    """True when every crossing has white at corners 0 and 2."""
    for c in range(diagram.n):
        reg = diagram.corner_region[c]
        if coloring.color(reg[0]) != WHITE or coloring.color(reg[2]) != WHITE:
            return False
        if coloring.color(reg[1]) != BLACK or coloring.color(reg[3]) != BLACK:
            return False
    return True


def swap_colors(coloring: Coloring) -> Coloring:
    return Coloring(tuple(WHITE if c == BLACK else BLACK for c in coloring.colors))


def tait_graphs(diagram: KnotDiagram, coloring: Coloring):
    """The white and black checkerboard graphs, as embedded multigraphs.

    Vertices are the regions of one color, one edge per crossing joining
    the two same-colored corners there; the rotation at a region is its
    traced boundary.  The marked vertices are the two regions flanking
    the marked arc.
    """
    out = []
    for color, slots in ((WHITE, (0, 2)), (BLACK, (1, 3))):
        verts = coloring.regions_of(color)
        edges = []
        for c in range(diagram.n):
            a = diagram.corner_region[c][slots[0]]
            b = diagram.corner_region[c][slots[1]]
            if a == b:
                raise NotReduced("crossing %d gives a loop edge" % c)
            edges.append((a, b, c))
        marked = next(r for r in diagram.marked_regions
                      if coloring.color(r) == color)
        rotations = []
        for r in verts:
            rot = []
            for (c, s) in diagram.regions[r]:
                # The traced dart (c, s) sweeps corner s at this region.
                end = 0 if s == slots[0] else 1
                if s not in slots:
                    raise NotReduced("region color mismatch at crossing %d" % c)
                rot.append((c, end))
            rotations.append(tuple(rot))
        out.append(MarkedGraph(
            vertices=verts,
            edges=tuple(edges),
            marked=marked,
            rotations=tuple(rotations),
            color=color,
        ))
    return out[0], out[1]


def is_special(w: MarkedGraph, b: MarkedGraph | None = None) -> bool:
    """All white degrees even; checked against bipartiteness of black."""
    special = all(d % 2 == 0 for d in w.degrees.values())
    if b is not None:
        assert special == _bipartite(b), \
            "even white degrees must match black bipartiteness"
    return special


def _bipartite(g: MarkedGraph) -> bool:
    color = {}
    for start in g.vertices:
        if start in color:
            continue
        color[start] = 0
        stack = [start]
        while stack:
            v = stack.pop()
            for w in g.neighbors[v]:
                if w not in color:
                    color[w] = 1 - color[v]
                    stack.append(w)
                elif color[w] == color[v]:
                    return False
    return True


def kauffman_states(diagram: KnotDiagram):
    """All bijections crossing -> incident unmarked region.

    Backtracking over crossings in index order, candidate regions in
    ascending id order, so the output order is deterministic.
    """
    marked = set(diagram.marked_regions)
    candidates = []
    for c in range(diagram.n):
        opts = sorted(set(diagram.corner_region[c]) - marked)
        candidates.append(opts)
    states = []
    used = set()
    assignment = [None] * diagram.n

    def backtrack(c):
        if c == diagram.n:
            states.append(KauffmanState(tuple(assignment)))
            return
        for r in candidates[c]:
            if r not in used:
                used.add(r)
                assignment[c] = r
                backtrack(c + 1)
                used.remove(r)
        assignment[c] = None

    backtrack(0)
    return states


def state_covector(diagram: KnotDiagram, coloring: Coloring,
                   state: KauffmanState, white: MarkedGraph | None = None):
    """Signed degrees of the state-induced orientation at unmarked whites.

    Each white edge points toward the white corner on the same side of
    the over-strand as the state's chosen corner; the returned vector is
    indexed by the unmarked white vertices in graph order.
    """
    if white is None:
        white, _ = tait_graphs(diagram, coloring)
    d = {v: 0 for v in white.vertices}
    for c, region in enumerate(state.assignment):
        reg = diagram.corner_region[c]
        slot = next(s for s in range(4) if reg[s] == region)
        # Corners 0 and 3 sit on the incoming-under side of the
        # over-strand, corners 1 and 2 on the other side.
        head = reg[0] if slot in (0, 3) else reg[2]
        tail = reg[2] if slot in (0, 3) else reg[0]
        d[head] += 1
        d[tail] -= 1
    assert sum(d.values()) == 0, "each edge contributes +1 and -1"
    vec = tuple(d[v] for v in white.vertices if v != white.marked)
    for v, value in zip((v for v in white.vertices if v != white.marked), vec):
        assert (value - white.degree(v)) % 2 == 0, \
            "covector parity must match vertex degree"
    return vec


def diagram_from_plane_graph(g: MarkedGraph, marked_arc_hint=True):
    """PD code of the alternating diagram whose white graph is g.

    This is the medial construction: one crossing per edge, one arc per
    rotation gap, over/under fixed so that the package's checkerboard
    convention recovers g (up to isomorphism) as the white graph.  The
    input must be connected, loopless and bridgeless.
    """
    from .graphs import bridges, euler_check
    if g.rotations is None:
        raise MalformedInput("plane graph needs a rotation system")
    if not g.is_connected():
        raise Disconnected("medial construction needs a connected graph")
    if not g.edges:
        raise MalformedInput("graph has no edges")
    if bridges(g):
        raise NotReduced("bridges give nugatory crossings")
    euler_check(g)

    # Arc per gap: arc (v, i) runs between the crossings of rotation
    # entries i-1 and i at v, hugging v.
    arc_id = {}
    for v in g.vertices:
        rot = g.rotation_of(v)
        for i in range(len(rot)):
            arc_id[(v, i)] = len(arc_id) + 1

    def arc_after(dart):
        # Gap counterclockwise after this dart: under-strand end.
        v = g.endpoint(dart)
        rot = g.rotation_of(v)
        i = rot.index(dart)
        return arc_id[(v, (i + 1) % len(rot))]

    def arc_before(dart):
        # Gap just before this dart: over-strand end.
        v = g.endpoint(dart)
        rot = g.rotation_of(v)
        i = rot.index(dart)
        return arc_id[(v, i)]

    tuples = []
    for e, (u, v, _) in enumerate(g.edges):
        du, dv = (e, 0), (e, 1)
        # Counterclockwise order around the crossing, under ends first.
        tuples.append((arc_after(du), arc_before(du),
                       arc_after(dv), arc_before(dv)))

    arc_ends = {}
    for c, tup in enumerate(tuples):
        for s, a in enumerate(tup):
            arc_ends.setdefault(a, []).append((c, s))

    # Orient each link component by walking straight through crossings;
    # per arc, record which end is its head (the end it runs into).
    head_end = {}
    visited = set()
    for a in sorted(arc_ends):
        if a in visited:
            continue
        current = a
        tail = arc_ends[a][0]
        while True:
            visited.add(current)
            (c1, s1), (c2, s2) = arc_ends[current]
            head = (c2, s2) if (c1, s1) == tail else (c1, s1)
            head_end[current] = head
            c, s = head
            exit_slot = (s + 2) % 4
            nxt = tuples[c][exit_slot]
            if nxt in visited:
                break
            tail = (c, exit_slot)
            current = nxt

    pd = []
    for c, tup in enumerate(tuples):
        s0 = next(s for s in (0, 2) if head_end.get(tup[s]) == (c, s))
        pd.append([tup[(s0 + k) % 4] for k in range(4)])

    doc = {"pd": pd}
    if marked_arc_hint and g.marked is not None:
        rot = g.rotation_of(g.marked)
        doc["marked_arc"] = arc_id[(g.marked, 0)] if rot else None
    return doc
