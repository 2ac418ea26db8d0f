"""Ribbon graphs in the flag (three-involution) model.

An edge contributes four flags, numbered ``4*i .. 4*i+3`` for edge index i;
within an edge block, bit 1 of the flag selects the edge end and bit 0 the
side.  Three fixed-point-free involutions act on flags:

* ``t2`` connects the two flags of one half-edge attachment,
* ``t0`` connects flags across the edge disc,
* ``t1`` connects attachments that are consecutive around a vertex.

``t0`` and ``t2`` stay inside an edge block and are stored per edge as xor
masks in {1, 2, 3} (distinct, hence commuting with orbits of size four).  A
plain rotation system gives ``t2 = 1`` everywhere and ``t0 = 3`` (untwisted)
or ``t0 = 2`` (twisted); partial duals and partial Petrials only permute
these per-edge states, which is what makes them cheap here.

Orbit dictionary: vertices are <t1,t2>-orbits, boundary components are
<t0,t1>-orbits, connected components are <t0,t1,t2>-orbits; degree-zero
vertices live outside the flag set as a plain count.
"""

from __future__ import annotations

import json
from typing import Iterable, Sequence

from .setsystem import DeltaMatroid, GroundSet, SizeGuardError

_UNTWISTED = (3, 1)
_TWISTED = (2, 1)

SUBSET_ENUM_CAP = 20


class RibbonGraph:
    """Immutable ribbon graph; see the module docstring for the encoding."""

    __slots__ = ("edge_labels", "pairs", "t1", "isolated_vertices", "edge_index")

    def __init__(self, edge_labels: Sequence[str], pairs: Sequence[tuple],
                 t1: Sequence[int], isolated_vertices: int = 0):
        self.edge_labels = tuple(str(x) for x in edge_labels)
        if len(set(self.edge_labels)) != len(self.edge_labels):
            raise ValueError("edge labels must be distinct")
        self.pairs = tuple((a, b) for a, b in pairs)
        for a, b in self.pairs:
            if a not in (1, 2, 3) or b not in (1, 2, 3) or a == b:
                raise ValueError("bad involution pair types")
        nflags = 4 * len(self.edge_labels)
        self.t1 = tuple(t1)
        if len(self.t1) != nflags:
            raise ValueError("t1 has wrong length")
        for f, g in enumerate(self.t1):
            if g == f or not 0 <= g < nflags or self.t1[g] != f:
                raise ValueError("t1 must be a fixed-point-free involution")
        if isolated_vertices < 0:
            raise ValueError("isolated_vertices must be non-negative")
        self.isolated_vertices = isolated_vertices
        self.edge_index = {lab: i for i, lab in enumerate(self.edge_labels)}

    # -- involutions -----------------------------------------------------

    def t0(self, flag: int) -> int:
        return flag ^ self.pairs[flag >> 2][0]

    def t2(self, flag: int) -> int:
        return flag ^ self.pairs[flag >> 2][1]

    def num_flags(self) -> int:
        return 4 * len(self.edge_labels)

    # -- counting --------------------------------------------------------

    def _orbits(self, use_t0: bool, use_t1: bool, use_t2: bool) -> list:
        seen = [False] * self.num_flags()
        orbits = []
        for start in range(self.num_flags()):
            if seen[start]:
                continue
            orbit = []
            stack = [start]
            seen[start] = True
            while stack:
                f = stack.pop()
                orbit.append(f)
                nbrs = []
                if use_t0:
                    nbrs.append(self.t0(f))
                if use_t1:
                    nbrs.append(self.t1[f])
                if use_t2:
                    nbrs.append(self.t2(f))
                for g in nbrs:
                    if not seen[g]:
                        seen[g] = True
                        stack.append(g)
            orbits.append(orbit)
        return orbits

    def edges(self) -> int:
        return len(self.edge_labels)

    def vertices(self) -> int:
        return len(self._orbits(False, True, True)) + self.isolated_vertices

    def boundary_components(self) -> int:
        return len(self._orbits(True, True, False)) + self.isolated_vertices

    def components(self) -> int:
        return len(self._orbits(True, True, True)) + self.isolated_vertices

    def euler_genus(self) -> int:
        """Sum of per-component Euler genera: 2k - (v - e + f)."""
        return (2 * self.components() - self.vertices() + self.edges()
                - self.boundary_components())

    def is_orientable(self) -> bool:
        """Bipartiteness of the flag graph under all three involutions."""
        color = [-1] * self.num_flags()
        for start in range(self.num_flags()):
            if color[start] >= 0:
                continue
            color[start] = 0
            stack = [start]
            while stack:
                f = stack.pop()
                for g in (self.t0(f), self.t1[f], self.t2(f)):
                    if color[g] < 0:
                        color[g] = 1 - color[f]
                        stack.append(g)
                    elif color[g] == color[f]:
                        return False
        return True

    def is_plane(self) -> bool:
        return self.euler_genus() == 0

    # -- bookkeeping -----------------------------------------------------

    def edge_mask(self, labels: Iterable[str]) -> int:
        m = 0
        for lab in labels:
            lab = str(lab)
            if lab not in self.edge_index:
                raise ValueError(f"unknown edge {lab!r}")
            m |= 1 << self.edge_index[lab]
        return m

    def full_edge_mask(self) -> int:
        return (1 << self.edges()) - 1

    def __repr__(self) -> str:
        return (f"RibbonGraph(edges={list(self.edge_labels)!r}, "
                f"v={self.vertices()}, f={self.boundary_components()}, "
                f"genus={self.euler_genus()})")

    def __eq__(self, other) -> bool:
        if not isinstance(other, RibbonGraph):
            return NotImplemented
        return ribbon_equal(self, other)

    def __hash__(self) -> int:
        # weak but consistent with label-level equality
        return hash((frozenset(self.edge_labels), self.isolated_vertices,
                     self.vertices(), self.boundary_components(), self.euler_genus()))


def _as_edge_mask(G: RibbonGraph, subset) -> int:
    if isinstance(subset, int):
        if subset & ~G.full_edge_mask():
            raise ValueError("edge mask outside the edge set")
        return subset
    return G.edge_mask(subset)


# ---------------------------------------------------------------------------
# construction from rotation systems
# ---------------------------------------------------------------------------

def from_rotation_system(vertex_rotations: Sequence[Sequence[str]],
                         edges: Sequence[tuple],
                         isolated_vertices: int = 0) -> RibbonGraph:
    """Build the flag model from per-vertex cyclic half-edge orders.

    ``edges`` is a sequence of (label, (end_a, end_b), twisted) triples; every
    half-edge name must occur exactly once across the rotations and exactly
    once across the edge ends.
    """
    labels = []
    pairs = []
    half_to_flagL = {}
    for i, (label, ends, twisted) in enumerate(edges):
        label = str(label)
        labels.append(label)
        pairs.append(_TWISTED if twisted else _UNTWISTED)
        if len(ends) != 2:
            raise ValueError(f"edge {label!r} must have exactly two ends")
        for end_pos, h in enumerate(ends):
            h = str(h)
            if h in half_to_flagL:
                raise ValueError(f"half-edge {h!r} listed twice in edges")
            half_to_flagL[h] = 4 * i + 2 * end_pos
    if len(set(labels)) != len(labels):
        raise ValueError("edge labels must be distinct")

    nflags = 4 * len(labels)
    t1 = [-1] * nflags
    seen_halves = set()
    for rotation in vertex_rotations:
        rotation = [str(h) for h in rotation]
        if not rotation:
            raise ValueError("empty vertex rotation; use isolated_vertices")
        for h in rotation:
            if h not in half_to_flagL:
                raise ValueError(f"half-edge {h!r} not attached to any edge")
            if h in seen_halves:
                raise ValueError(f"half-edge {h!r} listed twice in vertices")
            seen_halves.add(h)
        d = len(rotation)
        for k in range(d):
            right = half_to_flagL[rotation[k]] | 1
            left = half_to_flagL[rotation[(k + 1) % d]]
            t1[right] = left
            t1[left] = right
    missing = set(half_to_flagL) - seen_halves
    if missing:
        raise ValueError(f"half-edge {sorted(missing)[0]!r} not placed at any vertex")
    return RibbonGraph(labels, pairs, t1, isolated_vertices)


# ---------------------------------------------------------------------------
# partial duals, partial Petrials, twisted duals
# ---------------------------------------------------------------------------

def partial_dual(G: RibbonGraph, subset) -> RibbonGraph:
    """Swap the roles of t0 and t2 on every edge of ``subset``."""
    mask = _as_edge_mask(G, subset)
    pairs = [(b, a) if mask >> i & 1 else (a, b)
             for i, (a, b) in enumerate(G.pairs)]
    return RibbonGraph(G.edge_labels, pairs, G.t1, G.isolated_vertices)


def partial_petrial(G: RibbonGraph, subset) -> RibbonGraph:
    """Replace t0 by t0*t2 on every edge of ``subset`` (a half-twist)."""
    mask = _as_edge_mask(G, subset)
    pairs = [(a ^ b, b) if mask >> i & 1 else (a, b)
             for i, (a, b) in enumerate(G.pairs)]
    return RibbonGraph(G.edge_labels, pairs, G.t1, G.isolated_vertices)


def twisted_dual(G: RibbonGraph, word: Sequence[tuple]) -> RibbonGraph:
    """Apply a left-to-right word of ("dual"|"petrial", subset) moves."""
    out = G
    for gen, subset in word:
        if gen in ("dual", "*"):
            out = partial_dual(out, subset)
        elif gen in ("petrial", "+"):
            out = partial_petrial(out, subset)
        else:
            raise ValueError(f"unknown generator {gen!r}")
    return out


# ---------------------------------------------------------------------------
# deletion, contraction, spanning subgraphs
# ---------------------------------------------------------------------------

def _delete_edges(G: RibbonGraph, removed_mask: int) -> RibbonGraph:
    keep = [i for i in range(G.edges()) if not removed_mask >> i & 1]
    new_of_old = {old: new for new, old in enumerate(keep)}

    def removed(flag: int) -> bool:
        return bool(removed_mask >> (flag >> 2) & 1)

    def rename(flag: int) -> int:
        return 4 * new_of_old[flag >> 2] + (flag & 3)

    t1 = [-1] * (4 * len(keep))
    for old in keep:
        for f in range(4 * old, 4 * old + 4):
            g = G.t1[f]
            while removed(g):
                # hop over the dropped attachment arc, then continue around
                g = G.t1[G.t2(g)]
            t1[rename(f)] = rename(g)

    gone_vertices = sum(1 for orbit in G._orbits(False, True, True)
                        if all(removed(f) for f in orbit))
    return RibbonGraph([G.edge_labels[i] for i in keep],
                       [G.pairs[i] for i in keep], t1,
                       G.isolated_vertices + gone_vertices)


def delete_edge(G: RibbonGraph, label: str) -> RibbonGraph:
    return _delete_edges(G, G.edge_mask([label]))


def delete_edges(G: RibbonGraph, subset) -> RibbonGraph:
    return _delete_edges(G, _as_edge_mask(G, subset))


def contract_edge(G: RibbonGraph, label: str) -> RibbonGraph:
    """Contraction through the partial dual: form the dual at the edge, then
    delete it there."""
    return delete_edge(partial_dual(G, [label]), label)


def spanning_subgraph(G: RibbonGraph, subset) -> RibbonGraph:
    """The ribbon subgraph on all vertices and the given edges."""
    mask = _as_edge_mask(G, subset)
    return _delete_edges(G, G.full_edge_mask() & ~mask)


def is_quasi_tree(G: RibbonGraph) -> bool:
    """One boundary component per connected component."""
    return G.boundary_components() == G.components()


def delta_matroid_of(G: RibbonGraph) -> DeltaMatroid:
    """The delta-matroid of spanning quasi-trees.

    An edge set is feasible when the spanning subgraph on it has exactly as
    many boundary components as the graph has connected components — i.e.
    the subgraph restricts to a spanning quasi-tree of every component.
    """
    if G.edges() > SUBSET_ENUM_CAP:
        raise SizeGuardError(
            f"subset enumeration capped at {SUBSET_ENUM_CAP} edges (got {G.edges()})")
    k = G.components()
    ground = GroundSet(G.edge_labels)
    feasible = [mask for mask in range(1 << G.edges())
                if spanning_subgraph(G, mask).boundary_components() == k]
    return DeltaMatroid(ground, feasible, check=True)


# ---------------------------------------------------------------------------
# separating vertices and plane-biseparations
# ---------------------------------------------------------------------------

def _vertex_of_flag(G: RibbonGraph) -> list:
    owner = [-1] * G.num_flags()
    for vi, orbit in enumerate(G._orbits(False, True, True)):
        for f in orbit:
            owner[f] = vi
    return owner


def _edge_ends(G: RibbonGraph, owner: list) -> list:
    return [(owner[4 * i], owner[4 * i + 2]) for i in range(G.edges())]


def is_separating_vertex(G: RibbonGraph, vertex_orbit_index: int) -> bool:
    """Whether the graph splits at this vertex into two edge-disjoint parts,
    each carrying at least one edge.

    Edges are grouped into units: each loop at v alone, every other edge by
    the connected component of G - v it touches.  The vertex separates
    exactly when at least two units exist.
    """
    owner = _vertex_of_flag(G)
    ends = _edge_ends(G, owner)
    v = vertex_orbit_index
    n_vertices = max(owner) + 1 if owner else 0

    # union-find over vertices other than v, using edges avoiding v
    parent = list(range(n_vertices))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for (a, b) in ends:
        if a != v and b != v:
            parent[find(a)] = find(b)

    units = set()
    loop_count = 0
    for ei, (a, b) in enumerate(ends):
        if a == v and b == v:
            loop_count += 1
        elif a == v:
            units.add(find(b))
        elif b == v:
            units.add(find(a))
        else:
            units.add(find(a))
    return len(units) + loop_count >= 2


def plane_biseparation(G: RibbonGraph, subset) -> bool:
    """Whether ``subset`` splits the graph into two plane sides that only
    meet at separating vertices."""
    mask = _as_edge_mask(G, subset)
    comask = G.full_edge_mask() & ~mask
    if not spanning_subgraph(G, mask).is_plane():
        return False
    if not spanning_subgraph(G, comask).is_plane():
        return False
    owner = _vertex_of_flag(G)
    ends = _edge_ends(G, owner)
    n_vertices = max(owner) + 1 if owner else 0
    for v in range(n_vertices):
        touches_in = any((mask >> ei & 1) and v in ends[ei] for ei in range(G.edges()))
        touches_out = any((comask >> ei & 1) and v in ends[ei] for ei in range(G.edges()))
        if touches_in and touches_out and not is_separating_vertex(G, v):
            return False
    return True


# ---------------------------------------------------------------------------
# disjoint unions and random graphs
# ---------------------------------------------------------------------------

def disjoint_union(G1: RibbonGraph, G2: RibbonGraph) -> RibbonGraph:
    clash = set(G1.edge_labels) & set(G2.edge_labels)
    if clash:
        raise ValueError(f"edge labels shared: {sorted(clash)}")
    shift = G1.num_flags()
    t1 = list(G1.t1) + [f + shift for f in G2.t1]
    return RibbonGraph(G1.edge_labels + G2.edge_labels, G1.pairs + G2.pairs,
                       t1, G1.isolated_vertices + G2.isolated_vertices)


def random_ribbon_graph(rng, n_vertices: int, n_edges: int,
                        twist_probability: float = 0.5) -> RibbonGraph:
    """A uniform random rotation system: each edge end lands on a uniform
    vertex, each vertex order is a uniform shuffle, twists are coin flips.

    Vertices that receive no edge end become isolated vertices.
    """
    if n_vertices < 1:
        raise ValueError("need at least one vertex")
    at_vertex = [[] for _ in range(n_vertices)]
    edges = []
    for i in range(n_edges):
        ha, hb = f"h{2 * i}", f"h{2 * i + 1}"
        at_vertex[rng.randrange(n_vertices)].append(ha)
        at_vertex[rng.randrange(n_vertices)].append(hb)
        edges.append((f"e{i}", (ha, hb), rng.random() < twist_probability))
    rotations = []
    isolated = 0
    for halves in at_vertex:
        if halves:
            rng.shuffle(halves)
            rotations.append(halves)
        else:
            isolated += 1
    return from_rotation_system(rotations, edges, isolated)


# ---------------------------------------------------------------------------
# equality as labeled flag systems
# ---------------------------------------------------------------------------

def _label_sorted(G: RibbonGraph) -> RibbonGraph:
    order = sorted(range(G.edges()), key=lambda i: G.edge_labels[i])
    rename = {}
    for new, old in enumerate(order):
        for k in range(4):
            rename[4 * old + k] = 4 * new + k
    t1 = [-1] * G.num_flags()
    for f, g in enumerate(G.t1):
        t1[rename[f]] = rename[g]
    return RibbonGraph([G.edge_labels[i] for i in order],
                       [G.pairs[i] for i in order], t1, G.isolated_vertices)


def ribbon_equal(G: RibbonGraph, H: RibbonGraph) -> bool:
    """Isomorphism of labeled flag systems: a flag bijection preserving
    t0, t1, t2 and fixing edge labels; isolated-vertex counts must agree."""
    if G.isolated_vertices != H.isolated_vertices:
        return False
    if sorted(G.edge_labels) != sorted(H.edge_labels):
        return False
    G = _label_sorted(G)
    H = _label_sorted(H)

    nflags = G.num_flags()
    phi = [-1] * nflags
    assigned = [False] * nflags

    def extend(root: int, image: int) -> bool:
        stack = [(root, image)]
        trail = []
        ok = True
        while stack and ok:
            f, g = stack.pop()
            if phi[f] >= 0:
                if phi[f] != g:
                    ok = False
                continue
            if assigned[g] or (f >> 2) != (g >> 2):
                ok = False
                continue
            phi[f] = g
            assigned[g] = True
            trail.append(f)
            stack.append((G.t1[f], H.t1[g]))
            stack.append((G.t0(f), H.t0(g)))
            stack.append((G.t2(f), H.t2(g)))
        if not ok:
            for f in trail:
                assigned[phi[f]] = False
                phi[f] = -1
        return ok

    for start in range(nflags):
        if phi[start] >= 0:
            continue
        block = 4 * (start >> 2)
        if not any(extend(start, block + k) for k in range(4)):
            return False
    return True


# ---------------------------------------------------------------------------
# the rotation-system file format
# ---------------------------------------------------------------------------

def parse_rotation_system(text: str) -> RibbonGraph:
    """Read {"vertices": [[...], ...], "edges": [{...}, ...],
    "isolated_vertices": 0}."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ValueError("top level must be an object")
    for field in ("vertices", "edges"):
        if field not in data:
            raise ValueError(f"missing field {field!r}")
    verts = data["vertices"]
    if not isinstance(verts, list) or not all(isinstance(v, list) for v in verts):
        raise ValueError("field 'vertices' must be a list of lists")
    edges_field = data["edges"]
    if not isinstance(edges_field, list):
        raise ValueError("field 'edges' must be a list")
    edges = []
    for entry in edges_field:
        if not isinstance(entry, dict):
            raise ValueError("field 'edges' must contain objects")
        for key in ("label", "ends", "twisted"):
            if key not in entry:
                raise ValueError(f"edge entry missing field {key!r}")
        if not isinstance(entry["twisted"], bool):
            raise ValueError("field 'twisted' must be a boolean")
        edges.append((entry["label"], tuple(entry["ends"]), entry["twisted"]))
    isolated = data.get("isolated_vertices", 0)
    if not isinstance(isolated, int) or isolated < 0:
        raise ValueError("field 'isolated_vertices' must be a non-negative integer")
    return from_rotation_system(verts, edges, isolated)


def serialize_rotation_system(G: RibbonGraph) -> str:
    """Re-present the flag model as a rotation system and emit JSON.

    The output round-trips (via parse) to a graph equal to G under
    ribbon_equal.  Half-edges are named "<edge label>:0" / "<edge label>:1"
    in traversal order.
    """
    arc_name = {}      # min flag of a t2-arc -> half-edge name
    arc_left = {}      # min flag of a t2-arc -> the flag playing the L role
    arc_serial = {}    # edge index -> number of arcs named so far
    rotations = []
    for orbit in G._orbits(False, True, True):
        start = min(orbit)
        rot = []
        f = start
        while True:
            g = G.t2(f)
            key = min(f, g)
            ei = f >> 2
            if key not in arc_name:
                idx = arc_serial.get(ei, 0)
                arc_serial[ei] = idx + 1
                arc_name[key] = f"{G.edge_labels[ei]}:{idx}"
            arc_left[key] = f
            rot.append(arc_name[key])
            f = G.t1[g]
            if f == start:
                break
        rotations.append(rot)

    edges = []
    for ei, lab in enumerate(G.edge_labels):
        keys = sorted((k for k in arc_name if k >> 2 == ei),
                      key=lambda k: arc_name[k])
        assert len(keys) == 2, "every edge has exactly two attachment arcs"
        left0, left1 = arc_left[keys[0]], arc_left[keys[1]]
        image = G.t0(left0)
        assert image in (left1, G.t2(left1))
        edges.append({"label": lab, "ends": [arc_name[keys[0]], arc_name[keys[1]]],
                      "twisted": image == left1})
    data = {"vertices": rotations, "edges": edges,
            "isolated_vertices": G.isolated_vertices}
    return json.dumps(data)
