"""
Graph encodings of combinatorial types.

Strategy:
- A type becomes a labelled DiGraph with one node per vertex, bounded edge and leg.
  Edges with w > 0 are reoriented so that u is lexicographically positive and wired
  tail -> edge -> head; contracted edges are wired both ways.
- Types are bucketed by an inexpensive signature, then compared exactly with
  networkx.DiGraphMatcher inside each bucket.
"""
import logging
from collections import defaultdict
from dataclasses import replace

import networkx as nx
from networkx.algorithms.isomorphism import DiGraphMatcher

from models.curve import Leg, TropicalCurve, Vertex
from models.tropmap import CombinatorialType
from utils.general import humanSort

logger = logging.getLogger(__name__)


def _positive(u):
    k = next((x for x in u if x != 0), 0)
    return k > 0


def encode(ctype, cones=True):
    G = nx.DiGraph()
    for v in ctype.curve.vertex_ids:
        label = ('v', ctype.curve.vertex(v).genus, ctype.cones[v] if cones else '')
        G.add_node(('v', v), label=str(label))
    for e in ctype.curve.edges:
        s = ctype.edge_slopes[e.id]
        tail, head = e.ends
        u = s.u
        if s.w > 0 and not _positive(u):
            tail, head, u = head, tail, tuple(-x for x in u)
        node = ('e', e.id)
        G.add_node(node, label=str(('e', s.w, u, e.is_loop)))
        G.add_edge(('v', tail), node)
        G.add_edge(node, ('v', head))
        if s.w == 0:
            G.add_edge(('v', head), node)
            G.add_edge(node, ('v', tail))
    for l in ctype.curve.legs:
        s = ctype.leg_slopes[l.id]
        G.add_node(('l', l.id), label=str(('l', l.marking, s.u, s.w)))
        G.add_edge(('v', l.base), ('l', l.id))
    return G


def encode_shape(curve, leg_labels):
    """Unoriented encoding of a bare curve; legs carry the given labels."""
    G = nx.DiGraph()
    for v in curve.vertex_ids:
        G.add_node(('v', v), label=str(('v', curve.vertex(v).genus)))
    for e in curve.edges:
        node = ('e', e.id)
        G.add_node(node, label=str(('e', e.is_loop)))
        for a in e.ends:
            G.add_edge(('v', a), node)
            G.add_edge(node, ('v', a))
    for l in curve.legs:
        G.add_node(('l', l.id), label=str(('l', leg_labels[l.id])))
        G.add_edge(('v', l.base), ('l', l.id))
    return G


def signature(G):
    return (G.number_of_nodes(), G.number_of_edges(),
            tuple(sorted(d for _, d in G.in_degree())),
            tuple(sorted(d for _, d in G.out_degree())),
            tuple(sorted(a for _, a in G.nodes(data='label'))))


def matcher(G, H):
    return DiGraphMatcher(G, H, node_match=lambda a, b: a['label'] == b['label'])


def isomorphisms(t1, t2, cones=True):
    """Iterate over the isomorphisms t1 -> t2 as (vertex map, edge map) pairs."""
    G, H = encode(t1, cones), encode(t2, cones)
    if signature(G) != signature(H):
        return
    for m in matcher(G, H).isomorphisms_iter():
        vmap = {a[1]: b[1] for a, b in m.items() if a[0] == 'v'}
        emap = {a[1]: b[1] for a, b in m.items() if a[0] == 'e'}
        yield vmap, emap


def isomorphic(t1, t2, cones=True):
    return next(isomorphisms(t1, t2, cones), None) is not None


def group_isomorphism_classes(types, encoder=encode):
    """Representatives of the isomorphism classes, in order of first appearance."""
    buckets = defaultdict(list)
    reps = []
    for t in types:
        G = encoder(t)
        bucket = buckets[signature(G)]
        if any(matcher(G, H).is_isomorphic() for H in bucket):
            continue
        bucket.append(G)
        reps.append(t)
    logger.debug('%d types in %d isomorphism classes', len(types), len(reps))
    return reps


def contract_edges(ctype, edge_ids, cones=None):
    """Contract the bounded edges `edge_ids`.

    Endpoints merge into the humanSort-first member of each class; the merged vertex
    gains the first Betti number of the contracted edges inside it. Returns the new
    type and the vertex map old -> new.
    """
    edge_ids = set(edge_ids)
    parent = {v: v for v in ctype.curve.vertex_ids}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for e in ctype.curve.edges:
        if e.id in edge_ids:
            a, b = find(e.ends[0]), find(e.ends[1])
            if a != b:
                first = humanSort([a, b])[0]
                parent[b if first == a else a] = first

    classes = defaultdict(list)
    for v in ctype.curve.vertex_ids:
        classes[find(v)].append(v)
    vmap = {v: find(v) for v in ctype.curve.vertex_ids}

    vertices = []
    for root in humanSort(classes):
        members = classes[root]
        inner = [e for e in ctype.curve.edges if e.id in edge_ids and vmap[e.ends[0]] == root]
        h1 = len(inner) - len(members) + 1
        vertices.append(Vertex(root, sum(ctype.curve.vertex(v).genus for v in members) + h1))

    edges = tuple(replace(e, ends=(vmap[e.ends[0]], vmap[e.ends[1]]), length=None)
                  for e in ctype.curve.edges if e.id not in edge_ids)
    legs = tuple(Leg(l.id, vmap[l.base], l.marking) for l in ctype.curve.legs)
    curve = TropicalCurve(tuple(vertices), edges, legs)

    if cones is None:
        cones = {}
        for root, members in classes.items():
            cones[root] = min((ctype.cones[v] for v in members), key=lambda c: (ctype.fan.cone(c).dim, c))
    new = CombinatorialType(curve, ctype.ambient_dim,
                            {e.id: ctype.edge_slopes[e.id] for e in edges},
                            dict(ctype.leg_slopes), cones, ctype.fan)
    return new, vmap

