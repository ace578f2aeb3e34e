import logging
from dataclasses import dataclass, replace
from fractions import Fraction
from itertools import combinations
from typing import Optional, Tuple

import networkx as nx

from utils.errors import InvalidCurve
from utils.general import humanSort

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Vertex:
    id: str
    genus: int = 0


@dataclass(frozen=True)
class Edge:
    id: str
    ends: Tuple[str, str]
    length: Optional[Fraction] = None

    @property
    def is_loop(self):
        return self.ends[0] == self.ends[1]


@dataclass(frozen=True)
class Leg:
    id: str
    base: str
    marking: int


@dataclass(frozen=True)
class TropicalCurve:
    """A connected multigraph with vertex genera, legs and (optional) edge lengths.

    Curves underlying a combinatorial type carry no lengths; every other curve has a
    positive rational length on each bounded edge.
    """
    vertices: Tuple[Vertex, ...]
    edges: Tuple[Edge, ...] = ()
    legs: Tuple[Leg, ...] = ()

    def __post_init__(self):
        ids = [v.id for v in self.vertices]
        if not ids:
            raise InvalidCurve('a tropical curve needs at least one vertex')
        if len(set(ids)) != len(ids):
            raise InvalidCurve('duplicate vertex ids')
        for v in self.vertices:
            if v.genus < 0:
                raise InvalidCurve('vertex %s has negative genus' % v.id)
        eids = [e.id for e in self.edges] + [l.id for l in self.legs]
        if len(set(eids)) != len(eids):
            raise InvalidCurve('duplicate edge or leg ids')
        known = set(ids)
        for e in self.edges:
            if e.ends[0] not in known or e.ends[1] not in known:
                raise InvalidCurve('edge %s has an unknown endpoint' % e.id)
            if e.length is not None and e.length <= 0:
                raise InvalidCurve('edge length must be positive (edge %s)' % e.id)
        for l in self.legs:
            if l.base not in known:
                raise InvalidCurve('leg %s has an unknown base vertex' % l.id)

    @property
    def vertex_ids(self):
        return tuple(humanSort(v.id for v in self.vertices))

    @property
    def has_lengths(self):
        return all(e.length is not None for e in self.edges)

    def vertex(self, vid):
        return next(v for v in self.vertices if v.id == vid)

    def edge(self, eid):
        return next(e for e in self.edges if e.id == eid)

    def leg(self, lid):
        return next(l for l in self.legs if l.id == lid)

    def legs_at(self, vid):
        return [l for l in self.legs if l.base == vid]

    def incident(self, vid):
        """Edge flags at vid as (edge, end) pairs; a loop appears twice."""
        flags = []
        for e in self.edges:
            for end in (0, 1):
                if e.ends[end] == vid:
                    flags.append((e, end))
        return flags

    def valence(self, vid):
        return len(self.incident(vid)) + len(self.legs_at(vid))

    def graph(self):
        G = nx.MultiGraph()
        for v in self.vertices:
            G.add_node(v.id, genus=v.genus)
        for e in self.edges:
            G.add_edge(e.ends[0], e.ends[1], key=e.id, length=e.length)
        return G

    def with_lengths(self, lengths):
        edges = tuple(replace(e, length=Fraction(lengths[e.id])) for e in self.edges)
        return replace(self, edges=edges)

    def forget_lengths(self):
        return replace(self, edges=tuple(replace(e, length=None) for e in self.edges))


@dataclass(frozen=True)
class Circuit:
    vertices: Tuple[str, ...]
    edges: Tuple[str, ...] = ()


@dataclass(frozen=True)
class RadialAlignment:
    """A total preorder on the vertices, stored as its ordered blocks of ties.

    Block 0 is the circuit; every later block lies strictly further out.
    """
    blocks: Tuple[Tuple[str, ...], ...]

    @property
    def rank(self):
        return {v: i for i, block in enumerate(self.blocks) for v in block}

    def leq(self, v, w):
        rank = self.rank
        return rank[v] <= rank[w]

    def __str__(self):
        return ' < '.join('='.join(block) for block in self.blocks)


def genus(curve):
    G = curve.graph()
    if not nx.is_connected(G):
        raise InvalidCurve('the underlying graph is disconnected')
    h1 = len(curve.edges) - len(curve.vertices) + 1
    return h1 + sum(v.genus for v in curve.vertices)


def circuit(curve):
    g = genus(curve)
    if g != 1:
        raise InvalidCurve('the circuit is defined for genus 1 curves, got genus %d' % g)
    special = [v.id for v in curve.vertices if v.genus > 0]
    if special:
        return Circuit((special[0],), ())

    # nx.cycle_basis needs a simple graph: loops and doubled edges are cycles of their own
    loops = [e for e in curve.edges if e.is_loop]
    if loops:
        return Circuit((loops[0].ends[0],), (loops[0].id,))
    between = {}
    for e in curve.edges:
        between.setdefault(frozenset(e.ends), []).append(e.id)
    for ends, ids in between.items():
        if len(ids) > 1:
            return Circuit(tuple(humanSort(ends)), tuple(humanSort(ids)))

    cycle = nx.cycle_basis(nx.Graph(curve.graph()))[0]
    pairs = {frozenset((a, b)) for a, b in zip(cycle, cycle[1:] + cycle[:1])}
    return Circuit(tuple(humanSort(cycle)), tuple(humanSort(between[p][0] for p in pairs)))


_CIRCUIT = ('circuit',)


def radial_tree(curve, circ=None):
    """Parent pointers {v: (parent, edge id)} for vertices off the circuit."""
    circ = circ or circuit(curve)
    ring = set(circ.edges)
    G = nx.Graph()
    G.add_nodes_from(curve.vertex_ids)
    G.add_edges_from((e.ends[0], e.ends[1], {'id': e.id}) for e in curve.edges if e.id not in ring)
    # a virtual root joined to the circuit turns the radial forest into one tree
    G.add_edges_from((_CIRCUIT, v) for v in circ.vertices)
    return {w: (v, G[v][w]['id']) for v, w in nx.bfs_edges(G, _CIRCUIT) if v != _CIRCUIT}


def radial_path(curve, v, tree=None):
    """Edge ids on the unique path from the circuit out to v."""
    tree = radial_tree(curve) if tree is None else tree
    path = []
    while v in tree:
        v, eid = tree[v]
        path.append(eid)
    return tuple(reversed(path))


def lam(curve, v, tree=None):
    """Distance lambda(v) from the circuit; 0 on the circuit."""
    if not curve.has_lengths:
        raise InvalidCurve('lambda needs edge lengths')
    curve.vertex(v)
    return sum((curve.edge(eid).length for eid in radial_path(curve, v, tree)), Fraction(0))


def path_ancestors(curve, circ=None, tree=None):
    """For every off-circuit vertex, the off-circuit vertices strictly between it and the circuit."""
    circ = circ or circuit(curve)
    tree = radial_tree(curve, circ) if tree is None else tree
    anc  = {}
    for v in tree:
        chain, w = set(), tree[v][0]
        while w in tree:
            chain.add(w)
            w = tree[w][0]
        anc[v] = frozenset(chain)
    return anc


def enumerate_alignments(curve):
    circ = circuit(curve)
    anc  = path_ancestors(curve, circ)
    out  = []

    def extend(remaining, placed, prefix):
        if not remaining:
            out.append(RadialAlignment((tuple(humanSort(circ.vertices)),) + prefix))
            return
        avail = humanSort(v for v in remaining if anc[v] <= placed)
        for size in range(1, len(avail) + 1):
            for block in combinations(avail, size):
                extend(remaining - set(block), placed | set(block), prefix + (tuple(block),))

    extend(frozenset(anc), frozenset(), ())
    logger.debug('%d radial alignments for %d off-circuit vertices', len(out), len(anc))
    return out


def alignment_of(curve):
    """The radial alignment realized by the edge lengths of the curve."""
    circ   = circuit(curve)
    tree   = radial_tree(curve, circ)
    dist   = {v: lam(curve, v, tree) for v in curve.vertex_ids}
    levels = sorted(set(dist.values()))
    return RadialAlignment(tuple(tuple(humanSort(v for v in dist if dist[v] == d)) for d in levels))
