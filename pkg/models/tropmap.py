import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from math import gcd
from typing import Dict, Optional, Tuple

import networkx as nx
import ppl

from models.cone import constraints, expression, generated, generators
from models.curve import Leg, TropicalCurve, Vertex, circuit, genus, lam, radial_tree
from utils.errors import InvalidType
from utils.general import humanSort
from utils.ratlin import RatVec, add, dot, is_zero, neg, primitive, scale, span, sub, unit, vec, zero

logger = logging.getLogger(__name__)


###############################################################################
# Fans
###############################################################################

@dataclass(frozen=True)
class FanCone:
    """A rational polyhedral cone in Q^r generated by rays."""
    name: str
    rays: Tuple[RatVec, ...]
    ambient_dim: int

    def __post_init__(self):
        object.__setattr__(self, 'rays', tuple(vec(r) for r in self.rays))
        for r in self.rays:
            if len(r) != self.ambient_dim:
                raise InvalidType('ray of dimension %d in a cone of Q^%d' % (len(r), self.ambient_dim))

    @cached_property
    def poly(self):
        return generated(self.ambient_dim, self.rays)

    @cached_property
    def span(self):
        return span(self.rays, self.ambient_dim)

    @property
    def dim(self):
        return self.span.dim

    @cached_property
    def facets(self):
        """Inward facet normals of the cone inside its span."""
        return tuple(constraints(self.poly, self.ambient_dim)[1])

    @property
    def pointed(self):
        return not generators(self.poly, self.ambient_dim)[0]

    def contains(self, p):
        """p is a nonnegative rational combination of the rays."""
        p = vec(p)
        if len(p) != self.ambient_dim:
            raise InvalidType('point of dimension %d against a cone of Q^%d' % (len(p), self.ambient_dim))
        return self.span.contains(p) and all(dot(f, p) >= 0 for f in self.facets)

    def relint_contains(self, p):
        p = vec(p)
        return self.span.contains(p) and all(dot(f, p) > 0 for f in self.facets)

    def is_face_of(self, other):
        if not other.poly.contains(self.poly):
            return False
        face = ppl.C_Polyhedron(other.poly)
        for f in other.facets:
            if all(dot(f, r) == 0 for r in self.rays):
                face.add_constraint(expression(f) == 0)
        return face == self.poly


@dataclass(frozen=True)
class Fan:
    ambient_dim: int
    cones: Tuple[FanCone, ...]
    complete: bool = False

    @classmethod
    def trivial(cls, r):
        rays = tuple(unit(r, i) for i in range(r)) + tuple(neg(unit(r, i)) for i in range(r))
        return cls(r, (FanCone('R%d' % r, rays, r),), True)

    @classmethod
    def from_rays(cls, rays, cones, complete=False):
        """Fan from a ray list and cones given as {name: ray indices}."""
        r = len(rays[0]) if rays else 0
        return cls(r, tuple(FanCone(name, tuple(rays[i] for i in idx), r) for name, idx in cones.items()), complete)

    @classmethod
    def projective(cls, r):
        """The fan of P^r: rays e_1..e_r and -(e_1+...+e_r), cones on proper subsets."""
        rays = [unit(r, i) for i in range(r)] + [tuple(Fraction(-1) for _ in range(r))]
        cones = {}
        for k in range(r + 1):
            for idx in combinations(range(r + 1), k):
                cones['c' + ''.join(str(i) for i in idx) if idx else 'c'] = idx
        return cls.from_rays(rays, cones, complete=True)

    @property
    def is_trivial(self):
        return len(self.cones) == 1 and self.cones[0].span.is_full() and not self.cones[0].facets

    def cone(self, name):
        for c in self.cones:
            if c.name == name:
                return c
        raise InvalidType('unknown fan cone %r' % name)

    def cone_of(self, p):
        """Name of the cone containing p in its relative interior, lowest dimension first."""
        for c in sorted(self.cones, key=lambda c: (c.dim, c.name)):
            if c.relint_contains(p):
                return c.name
        return None


###############################################################################
# Combinatorial types and maps
###############################################################################

@dataclass(frozen=True)
class Slope:
    """Primitive direction u with expansion factor w; w = 0 marks a contracted edge."""
    u: Tuple[int, ...]
    w: int

    @property
    def vector(self):
        return tuple(Fraction(self.w * x) for x in self.u)

    def reversed(self):
        return Slope(tuple(-x for x in self.u), self.w)

    @classmethod
    def of(cls, v):
        """Slope of a rational vector; the zero vector is contracted."""
        v = vec(v)
        if is_zero(v):
            return cls(tuple(0 for _ in v), 0)
        u, s = primitive(v)
        if s.denominator != 1:
            raise InvalidType('vector %s is not an integer multiple of a primitive vector' % (v,))
        return cls(u, int(s))


@dataclass(frozen=True)
class Flag:
    id: str
    base: str
    edge: Optional[str]
    slope: Slope

    @property
    def vector(self):
        return self.slope.vector


@dataclass(frozen=True)
class CombinatorialType:
    """Graph with slopes on edges and legs and a cone label per vertex.

    Edge slopes are recorded along the stored orientation ends[0] -> ends[1].
    """
    curve: TropicalCurve
    ambient_dim: int
    edge_slopes: Dict[str, Slope]
    leg_slopes: Dict[str, Slope]
    cones: Dict[str, str] = field(default_factory=dict)
    fan: Optional[Fan] = None

    def __post_init__(self):
        r = self.ambient_dim
        if self.fan is None:
            object.__setattr__(self, 'fan', Fan.trivial(r))
        if self.fan.ambient_dim != r:
            raise InvalidType('fan lives in Q^%d, type in Q^%d' % (self.fan.ambient_dim, r))
        if not self.cones:
            object.__setattr__(self, 'cones', {v: self.fan.cones[0].name for v in self.curve.vertex_ids}
                               if self.fan.is_trivial else {})
        for kind, items, slopes in (('edge', self.curve.edges, self.edge_slopes),
                                    ('leg', self.curve.legs, self.leg_slopes)):
            for item in items:
                if item.id not in slopes:
                    raise InvalidType('%s %s has no slope' % (kind, item.id))
                s = slopes[item.id]
                if len(s.u) != r:
                    raise InvalidType('%s %s: direction of dimension %d in Q^%d' % (kind, item.id, len(s.u), r))
                if s.w < 0:
                    raise InvalidType('%s %s: negative expansion factor' % (kind, item.id))
                if s.w == 0 and any(s.u):
                    raise InvalidType('%s %s: contracted but carries a direction' % (kind, item.id))
                if s.w > 0 and _content(s.u) != 1:
                    raise InvalidType('%s %s: direction %s is not primitive' % (kind, item.id, s.u))
        for v in self.curve.vertex_ids:
            if v not in self.cones:
                raise InvalidType('vertex %s has no cone label' % v, vertex=v)
            self.fan.cone(self.cones[v])

    @property
    def n_legs(self):
        return len(self.curve.legs)

    def flags(self, v):
        out = []
        for e, end in self.curve.incident(v):
            s = self.edge_slopes[e.id]
            out.append(Flag('%s/%d' % (e.id, end), v, e.id, s if end == 0 else s.reversed()))
        for l in self.curve.legs_at(v):
            out.append(Flag(l.id, v, None, self.leg_slopes[l.id]))
        return out

    def defects(self):
        return {v: sum_vectors([f.vector for f in self.flags(v)], self.ambient_dim) for v in self.curve.vertex_ids}

    def fan_cone(self, v):
        return self.fan.cone(self.cones[v])


def _content(u):
    g = 0
    for x in u:
        g = gcd(g, abs(int(x)))
    return g


def sum_vectors(vectors, r):
    total = zero(r)
    for v in vectors:
        total = add(total, v)
    return total


def balance(ctype):
    """(balanced?, {vertex: defect}) with only the nonzero defects reported; accepts a map or a type."""
    ctype = getattr(ctype, 'ctype', ctype)
    bad = {v: d for v, d in ctype.defects().items() if not is_zero(d)}
    return not bad, bad


def require_balanced(ctype):
    ok, bad = balance(ctype)
    if not ok:
        v = humanSort(bad)[0]
        raise InvalidType('unbalanced at vertex %s, defect %s' % (v, tuple(str(x) for x in bad[v])),
                          vertex=v, defect=bad[v])


def unstable_vertices(ctype):
    out = []
    for v in ctype.curve.vertex_ids:
        g   = ctype.curve.vertex(v).genus
        val = ctype.curve.valence(v)
        if g == 0 and val <= 1:
            out.append(v)
        elif g == 0 and val == 2:
            # Star inside one relative interior iff every flag stays in span(sigma_v)
            cone = ctype.fan_cone(v)
            if all(cone.span.contains(f.vector) for f in ctype.flags(v)):
                out.append(v)
        elif g > 0 and 2 * g - 2 + val <= 0:
            out.append(v)
    return out


def is_stable(ctype):
    return not unstable_vertices(ctype)


@dataclass(frozen=True)
class LegSlope:
    marking: int
    slope: Slope


@dataclass(frozen=True)
class RecessionType:
    """Single vertex of genus `genus` carrying the leg contact orders."""
    ambient_dim: int
    legs: Tuple[LegSlope, ...]
    genus: int = 1

    def __post_init__(self):
        object.__setattr__(self, 'legs', tuple(sorted(self.legs, key=lambda l: (l.marking, l.slope.u, l.slope.w))))
        total = sum_vectors([l.slope.vector for l in self.legs], self.ambient_dim)
        if not is_zero(total):
            raise InvalidType('recession type is unbalanced, defect %s' % (tuple(str(x) for x in total),),
                              vertex='*', defect=total)

    @property
    def total_weight(self):
        return sum(l.slope.w for l in self.legs)

    def as_type(self):
        legs = tuple(Leg('t%d' % (i + 1), 'v', l.marking) for i, l in enumerate(self.legs))
        curve = TropicalCurve((Vertex('v', self.genus),), (), legs)
        return CombinatorialType(curve, self.ambient_dim, {},
                                 {leg.id: l.slope for leg, l in zip(legs, self.legs)})


def recession_type(ctype):
    if isinstance(ctype, RecessionType):
        return ctype
    require_balanced(ctype)
    legs = tuple(LegSlope(l.marking, ctype.leg_slopes[l.id]) for l in ctype.curve.legs)
    return RecessionType(ctype.ambient_dim, legs, genus(ctype.curve))


@dataclass(frozen=True)
class TropicalMap:
    """A combinatorial type realized with edge lengths and vertex positions."""
    ctype: CombinatorialType
    lengths: Dict[str, Fraction]
    positions: Dict[str, RatVec]

    def __post_init__(self):
        t = self.ctype
        object.__setattr__(self, 'lengths', {e: Fraction(l) for e, l in self.lengths.items()})
        object.__setattr__(self, 'positions', {v: vec(p) for v, p in self.positions.items()})
        for e in t.curve.edges:
            l = self.lengths.get(e.id)
            if l is None or l <= 0:
                raise InvalidType('edge %s needs a positive length' % e.id)
        for v in t.curve.vertex_ids:
            p = self.positions.get(v)
            if p is None or len(p) != t.ambient_dim:
                raise InvalidType('vertex %s needs a position in Q^%d' % (v, t.ambient_dim), vertex=v)
        for e in t.curve.edges:
            a, b = e.ends
            step = scale(self.lengths[e.id], t.edge_slopes[e.id].vector)
            if sub(self.positions[b], self.positions[a]) != step:
                raise InvalidType('edge %s: positions of %s and %s differ by %s, expected %s'
                                  % (e.id, a, b, _fmt(sub(self.positions[b], self.positions[a])), _fmt(step)),
                                  vertex=b)
        require_balanced(t)
        if not t.fan.is_trivial:
            for v in t.curve.vertex_ids:
                if not t.fan_cone(v).contains(self.positions[v]):
                    raise InvalidType('vertex %s is placed outside its cone %s' % (v, t.cones[v]), vertex=v)

    @classmethod
    def from_lengths(cls, ctype, lengths, base=None):
        """Propagate positions from the first circuit vertex (placed at `base`, default 0)."""
        lengths = {e: Fraction(l) for e, l in lengths.items()}
        for e in ctype.curve.edges:
            if e.id not in lengths:
                raise InvalidType('edge %s needs a positive length' % e.id)
        root = circuit(ctype.curve).vertices[0]
        pos = {root: vec(base) if base is not None else zero(ctype.ambient_dim)}
        G = ctype.curve.graph()
        for v, w in nx.bfs_edges(G, root):
            e = ctype.curve.edge(min(G[v][w]))
            step = scale(lengths[e.id], ctype.edge_slopes[e.id].vector)
            pos[w] = add(pos[v], step) if e.ends[0] == v else sub(pos[v], step)
        try:
            return cls(ctype, lengths, pos)
        except InvalidType as err:
            raise InvalidType('cycle closure fails: %s' % err, vertex=err.vertex, defect=err.defect) from err

    @property
    def curve(self):
        return self.ctype.curve.with_lengths(self.lengths)

    @property
    def ambient_dim(self):
        return self.ctype.ambient_dim

    def lam(self, v):
        return lam(self.curve, v)


def _fmt(v):
    return '(' + ', '.join(str(x) for x in v) + ')'


def project(fmap, chi):
    """The induced map to the line under the character chi (scaled to a primitive integer vector)."""
    chi = vec(chi)
    if len(chi) != fmap.ambient_dim:
        raise InvalidType('character of dimension %d on a map to Q^%d' % (len(chi), fmap.ambient_dim))
    if not is_zero(chi):
        chi = tuple(Fraction(x) for x in primitive(chi)[0])
    t = fmap.ctype

    def slope(s):
        return Slope.of((dot(chi, s.vector),))

    ctype = CombinatorialType(t.curve, 1, {e: slope(s) for e, s in t.edge_slopes.items()},
                              {l: slope(s) for l, s in t.leg_slopes.items()})
    return TropicalMap(ctype, fmap.lengths, {v: (dot(chi, p),) for v, p in fmap.positions.items()})


def _slope_vector(s, chi):
    return s.vector if chi is None else (dot(vec(chi), s.vector),)


def circuit_component(ctype, keep):
    """Vertices and edges reachable from the circuit through edges e with keep(e)."""
    G = nx.Graph()
    G.add_nodes_from(ctype.curve.vertex_ids)
    edges = {e.id for e in ctype.curve.edges if keep(e)}
    G.add_edges_from(ctype.curve.edge(e).ends for e in edges)
    circ = circuit(ctype.curve)
    verts = set().union(*(nx.node_connected_component(G, v) for v in circ.vertices))
    return frozenset(verts), frozenset(e for e in edges if ctype.curve.edge(e).ends[0] in verts)


def contracted_component(fmap, chi=None):
    """Vertices and edges reachable from the circuit through edges of zero (projected) slope."""
    t = fmap.ctype
    return circuit_component(t, lambda e: is_zero(_slope_vector(t.edge_slopes[e.id], chi)))


def circuit_moves(fmap, chi=None):
    """True when a circuit edge or a flag based on the circuit has nonzero (projected) slope."""
    t = fmap.ctype
    circ = circuit(t.curve)
    if any(not is_zero(_slope_vector(t.edge_slopes[e], chi)) for e in circ.edges):
        return True
    return any(not is_zero(_slope_vector(f.slope, chi)) for v in circ.vertices for f in t.flags(v))


def contraction_radius(fmap, chi=None):
    """delta: 0 if the circuit moves, else the least lambda of a contracted-component vertex with a
    non-contracted flag. A constant (projected) map has no such radius and raises InvalidType."""
    if circuit_moves(fmap, chi):
        return Fraction(0)
    t = fmap.ctype
    verts, _ = contracted_component(fmap, chi)
    curve = fmap.curve
    tree = radial_tree(curve)
    radii = [lam(curve, v, tree) for v in verts
             if any(not is_zero(_slope_vector(f.slope, chi)) for f in t.flags(v))]
    if not radii:
        raise InvalidType('the map is constant%s; it has no contraction radius'
                          % ('' if chi is None else ' after projection by %s' % _fmt(vec(chi))))
    return min(radii)


def circuit_span(ctype):
    """Span of the circuit edge vectors w_e u_e; the zero space for a genus-1 vertex."""
    circ = circuit(ctype.curve)
    return span([ctype.edge_slopes[e].vector for e in circ.edges], ctype.ambient_dim)
