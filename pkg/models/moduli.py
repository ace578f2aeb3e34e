import logging
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from typing import Dict, List, Tuple

import networkx as nx
import numpy as np

from models.canonical import (contract_edges, encode_shape, group_isomorphism_classes, isomorphic, isomorphisms,
                              matcher, signature)
from models.cone import Cone
from models.curve import (Edge, Leg, RadialAlignment, TropicalCurve, Vertex, circuit, enumerate_alignments, genus,
                          radial_path, radial_tree)
from models.tropmap import (CombinatorialType, Slope, TropicalMap, circuit_span, is_stable, recession_type,
                            require_balanced)
from utils.errors import InconsistencyError, InfeasibleCone, InvalidCurve, InvalidType
from utils.general import humanSort
from utils.ratlin import dot

logger = logging.getLogger(__name__)


def pos_var(i):
    return 'p%d' % (i + 1)


def length_var(eid):
    return 'l_%s' % eid


def variables_of(ctype):
    return tuple(pos_var(i) for i in range(ctype.ambient_dim)) + tuple(length_var(e.id) for e in ctype.curve.edges)


def base_vertex(ctype):
    if genus(ctype.curve) == 1:
        return circuit(ctype.curve).vertices[0]
    return ctype.curve.vertex_ids[0]


def cycle_walk(curve, circ=None):
    """Circuit edges in traversal order as (edge, sign, start vertex); sign is +1 along the stored orientation."""
    circ = circ or circuit(curve)
    if not circ.edges:
        return []
    ring = {eid: curve.edge(eid) for eid in circ.edges}
    walk, used, at = [], set(), circ.vertices[0]
    while len(used) < len(ring):
        e = next(ring[eid] for eid in humanSort(ring) if eid not in used and at in ring[eid].ends)
        sign = 1 if e.ends[0] == at else -1
        walk.append((e, sign, at))
        used.add(e.id)
        at = e.ends[1] if sign == 1 else e.ends[0]
    return walk


def displacements(ctype, base=None):
    """Position of every vertex relative to `base` as r linear forms {length variable: coefficient}."""
    r    = ctype.ambient_dim
    base = base or base_vertex(ctype)
    disp = {base: [dict() for _ in range(r)]}
    G    = ctype.curve.graph()
    for v, w in nx.bfs_edges(G, base):
        e    = ctype.curve.edge(min(G[v][w]))
        step = ctype.edge_slopes[e.id].vector
        sign = 1 if e.ends[0] == v else -1
        d = [dict(c) for c in disp[v]]
        for i in range(r):
            if step[i] != 0:
                var = length_var(e.id)
                d[i][var] = d[i].get(var, Fraction(0)) + sign * step[i]
        disp[w] = d
    return disp


def _position_forms(ctype, disp, v):
    out = []
    for i in range(ctype.ambient_dim):
        f = dict(disp[v][i])
        f[pos_var(i)] = Fraction(1)
        out.append(f)
    return out


def _combine(coeffs, forms):
    total = {}
    for c, f in zip(coeffs, forms):
        if c == 0:
            continue
        for var, x in f.items():
            total[var] = total.get(var, Fraction(0)) + c * x
    return total


###############################################################################
# Dimension counts
###############################################################################

def overvalence(ctype):
    """Sum of val - 3 over vertices of valence >= 4; a vertex of genus g > 0 counts val - 3 + 3g."""
    ov = 0
    for v in ctype.curve.vertex_ids:
        g, val = ctype.curve.vertex(v).genus, ctype.curve.valence(v)
        if g > 0:
            ov += val - 3 + 3 * g
        elif val >= 4:
            ov += val - 3
    return ov


def expected_dim(ctype, r=None, n=None):
    r = ctype.ambient_dim if r is None else r
    n = ctype.n_legs if n is None else n
    return (r - 3) * (1 - genus(ctype.curve)) + n - overvalence(ctype)


def moduli_cone(ctype):
    """Cone in (p(v0), lengths) of the maps of this type; raises InfeasibleCone when empty."""
    require_balanced(ctype)
    g = genus(ctype.curve)
    if g > 1:
        raise InvalidCurve('moduli cones are built for genus at most 1, got %d' % g)
    r = ctype.ambient_dim
    cone = Cone(variables_of(ctype))

    closure = []
    if g == 1:
        walk = cycle_walk(ctype.curve)
        for i in range(r):
            f = {}
            for e, sign, _ in walk:
                x = sign * ctype.edge_slopes[e.id].vector[i]
                if x != 0:
                    f[length_var(e.id)] = f.get(length_var(e.id), Fraction(0)) + x
            if f:
                closure.append(cone.form(f))
    positive = [cone.form({length_var(e.id): 1}) for e in ctype.curve.edges]
    cone = Cone(cone.variables, tuple(closure), tuple(positive), (True,) * len(positive))

    if not ctype.fan.is_trivial:
        disp = displacements(ctype)
        span_eqs, facets = [], []
        for v in ctype.curve.vertex_ids:
            sigma = ctype.fan_cone(v)
            pv = _position_forms(ctype, disp, v)
            span_eqs += [cone.form(_combine(a, pv)) for a in sigma.span.annihilator().basis]
            facets   += [cone.form(_combine(f, pv)) for f in sigma.facets]
        span_only = cone.with_equalities(span_eqs)
        cone = span_only.with_inequalities(facets, strict=True)
        # a nonempty open cell spans the whole space cut out by the equalities, so the two readings
        # can only differ when full membership leaves no maps at all
        if cone.is_empty and not span_only.is_empty:
            logger.warning('cone labels change the moduli dimension: %d with span equalities only, empty with '
                           'full membership', span_only.dim)
    cone.require_nonempty('moduli cone')
    logger.debug('moduli cone: %d variables, dimension %d', cone.n, cone.dim)
    return cone


def is_superabundant(ctype, r=None, n=None):
    """dim sigma > expected dimension, cross-checked against the circuit span test.

    The dimension count is taken on the type with its cone labels dropped: membership in a
    proper fan cone cuts the moduli cone below the expected dimension without changing the
    circuit span.
    """
    ctype = getattr(ctype, 'ctype', ctype)
    span_test = not circuit_span(ctype).is_full()
    bivalent = [v for v in ctype.curve.vertex_ids
                if ctype.curve.vertex(v).genus == 0 and ctype.curve.valence(v) < 3]
    if bivalent:
        logger.warning('superabundance cross-check skipped, vertices of valence < 3: %s', ', '.join(bivalent))
        return span_test
    bare = CombinatorialType(ctype.curve, ctype.ambient_dim, ctype.edge_slopes, ctype.leg_slopes)
    dim_test = moduli_cone(bare).dim > expected_dim(bare, r, n)
    if dim_test != span_test:
        raise InconsistencyError('superabundance tests disagree: dimension test %s, span test %s'
                                 % (dim_test, span_test))
    return dim_test


###############################################################################
# Radial subdivision
###############################################################################

@dataclass(frozen=True, eq=False)
class RadialType:
    name: str
    ctype: CombinatorialType
    alignment: RadialAlignment
    cone: Cone


def lambda_form(ctype, v, tree=None):
    return {length_var(e): Fraction(1) for e in radial_path(ctype.curve, v, tree)}


def radial_subdivision(ctype):
    sigma = moduli_cone(ctype)
    tree  = radial_tree(ctype.curve)
    cells = []
    for alignment in enumerate_alignments(ctype.curve):
        eqs, strict = [], []
        for i, block in enumerate(alignment.blocks):
            rep = lambda_form(ctype, block[0], tree)
            for v in block[1:]:
                eqs.append(sigma.form(_combine([1, -1], [lambda_form(ctype, v, tree), rep])))
            if i > 0:
                prev = lambda_form(ctype, alignment.blocks[i - 1][0], tree)
                strict.append(sigma.form(_combine([1, -1], [rep, prev])))
        cell = sigma.with_equalities(eqs).with_inequalities(strict, strict=True)
        if cell.is_empty:
            logger.debug('alignment %s: empty cell', alignment)
            continue
        cells.append((alignment, cell))
    logger.info('radial subdivision: %d cells', len(cells))
    return cells


def radial_types(ctype, name='T'):
    return [RadialType('%s[%s]' % (name, a), ctype, a, c) for a, c in radial_subdivision(ctype)]


def verify_subdivision(ctype, cells=None, seed=0, samples=3):
    """Sampled points of sigma and of every cell lie in exactly one open cell; closures meet in faces."""
    cells = radial_subdivision(ctype) if cells is None else cells
    sigma = moduli_cone(ctype)
    rng   = np.random.default_rng(seed)
    points = list(sigma.sample_points(rng, samples))
    for _, cell in cells:
        points += cell.sample_points(rng, samples)
    for x in points:
        hits = [str(a) for a, cell in cells if cell.cell_contains(x)]
        if len(hits) != 1:
            raise InconsistencyError('point %s lies in %d cells (%s)' % (tuple(str(t) for t in x), len(hits),
                                                                         '; '.join(hits)))
    for (a, c), (b, d) in combinations(cells, 2):
        meet = c.closure().intersect(d.closure())
        if not (meet.is_face_of(c.closure()) and meet.is_face_of(d.closure())):
            raise InconsistencyError('cells %s and %s overlap outside a common face' % (a, b))
    return True


###############################################################################
# Face arrows and cone complexes
###############################################################################

@dataclass(frozen=True)
class FaceArrow:
    face: str
    cell: str
    vertex_map: Dict[str, str]
    edge_map: Dict[str, str]
    contracted: Tuple[str, ...] = ()


def _order_preserving(fine, coarse, alpha):
    rank, rank2 = fine.rank, coarse.rank
    return all(rank2[alpha[v]] <= rank2[alpha[w]] for v in rank for w in rank if rank[v] <= rank[w])


def _geometric_face(coarser, finer, contracted, alpha, emap):
    fine, coarse = finer.ctype, coarser.ctype
    subst = {length_var(e): {length_var(emap[e]): 1} for e in emap}
    for e in contracted:
        subst[length_var(e)] = {}
    disp = displacements(coarse)
    b = alpha[base_vertex(fine)]
    for i, f in enumerate(_position_forms(coarse, disp, b)):
        subst[pos_var(i)] = f
    pulled = finer.cone.pullback(coarser.cone.variables, subst)
    return coarser.cone.closure().is_face_of(pulled.closure())


def face_arrow(coarser, finer):
    """The contraction map exhibiting `coarser` as a face of `finer`, or None."""
    fine, coarse = finer.ctype, coarser.ctype
    k = len(fine.curve.edges) - len(coarse.curve.edges)
    if k < 0 or fine.ambient_dim != coarse.ambient_dim or len(fine.curve.legs) != len(coarse.curve.legs):
        return None
    for S in combinations([e.id for e in fine.curve.edges], k):
        contracted, cmap = contract_edges(fine, S)
        for vmap, emap in isomorphisms(contracted, coarse, cones=False):
            alpha = {v: vmap[cmap[v]] for v in fine.curve.vertex_ids}
            if not _order_preserving(finer.alignment, coarser.alignment, alpha):
                continue
            if not all(coarse.fan_cone(alpha[v]).is_face_of(fine.fan_cone(v)) for v in fine.curve.vertex_ids):
                continue
            if not _geometric_face(coarser, finer, S, alpha, emap):
                logger.debug('%s -> %s: combinatorial arrow is not a geometric face', coarser.name, finer.name)
                continue
            return FaceArrow(coarser.name, finer.name, alpha, emap, tuple(S))
    return None


@dataclass
class ConeComplex:
    cells: List[RadialType]
    arrows: List[Tuple[int, int, FaceArrow]] = field(default_factory=list)

    def index(self, name):
        return next(i for i, c in enumerate(self.cells) if c.name == name)

    def faces_of(self, j):
        return [i for i, k, _ in self.arrows if k == j]

    def maximal(self):
        faces = {i for i, _, _ in self.arrows}
        return [j for j in range(len(self.cells)) if j not in faces]

    def stats(self):
        dims = [c.cone.dim for c in self.cells]
        top  = [dims[j] for j in self.maximal()]
        return {
            'cells': len(self.cells),
            'arrows': len(self.arrows),
            'max_dim': max(dims) if dims else -1,
            'maximal': len(top),
            'pure': len(set(top)) <= 1,
            'dims': {str(d): dims.count(d) for d in sorted(set(dims))},
        }

    def is_face_closed(self, keep):
        keep = set(keep)
        return all(i in keep for j in keep for i in self.faces_of(j))

    def arrows_compose(self):
        pairs = {(i, j) for i, j, _ in self.arrows}
        return all((i, k) in pairs for i, j in pairs for j2, k in pairs if j == j2)

    def restrict(self, keep):
        keep = sorted(set(keep))
        new = {old: n for n, old in enumerate(keep)}
        return ConeComplex([self.cells[i] for i in keep],
                           [(new[i], new[j], a) for i, j, a in self.arrows if i in new and j in new])

    def as_dict(self):
        return {
            'cells': [{
                'name': c.name,
                'type': describe_type(c.ctype),
                'alignment': [list(b) for b in c.alignment.blocks],
                'cone': c.cone.as_dict(),
            } for c in self.cells],
            'arrows': [{
                'face': a.face,
                'cell': a.cell,
                'vertex_map': {k: a.vertex_map[k] for k in humanSort(a.vertex_map)},
                'edge_map': {k: a.edge_map[k] for k in humanSort(a.edge_map)},
                'contracted': list(a.contracted),
            } for _, _, a in sorted(self.arrows, key=lambda t: (t[0], t[1]))],
            'stats': self.stats(),
        }


def describe_type(ctype):
    def slope(s):
        return {'u': list(s.u), 'w': s.w}
    return {
        'ambient_dim': ctype.ambient_dim,
        'vertices': [{'id': v, 'genus': ctype.curve.vertex(v).genus, 'cone': ctype.cones[v]}
                     for v in ctype.curve.vertex_ids],
        'edges': [dict(id=e.id, ends=list(e.ends), **slope(ctype.edge_slopes[e.id])) for e in ctype.curve.edges],
        'legs': [dict(id=l.id, base=l.base, marking=l.marking, **slope(ctype.leg_slopes[l.id]))
                 for l in ctype.curve.legs],
    }


def assemble_complex(types):
    types = list(types)
    if types:
        first = recession_type(types[0].ctype)
        for t in types[1:]:
            if recession_type(t.ctype) != first:
                raise InvalidType('mixed recession types: %s and %s differ' % (types[0].name, t.name))
    dims = [t.cone.dim for t in types]
    arrows = []
    for i, j in product(range(len(types)), repeat=2):
        if dims[i] >= dims[j]:
            continue
        arrow = face_arrow(types[i], types[j])
        if arrow is not None:
            arrows.append((i, j, arrow))
    cx = ConeComplex(types, arrows)
    logger.info('assembled complex: %s', cx.stats())
    return cx


def type_complex(ctype, faces=False, name='T'):
    """Complex of the radial cells of a type and, with faces=True, of all its edge contractions."""
    cells = radial_types(ctype, name)
    if faces:
        seen = [ctype]
        edges = [e.id for e in ctype.curve.edges]
        for k in range(1, len(edges) + 1):
            for S in combinations(edges, k):
                t, _ = contract_edges(ctype, S)
                if any(isomorphic(t, s) for s in seen):
                    continue
                try:
                    moduli_cone(t)
                except InfeasibleCone:
                    continue
                seen.append(t)
                cells += radial_types(t, '%s/%s' % (name, '+'.join(S)))
    return assemble_complex(cells)


###############################################################################
# Enumeration of types with a given recession type
###############################################################################

def _flags_at(curve, v):
    return [('leg', l.id) for l in curve.legs_at(v)] + [('edge', e.id, end) for e, end in curve.incident(v)]


def _split(curve, v, moved, genus_v, genus_w):
    """Move the flags `moved` from v to a new vertex joined to v by a new edge."""
    w  = 'v%d' % (len(curve.vertices) + 1)
    ne = 'e%d' % (len(curve.edges) + 1)
    moved = set(moved)
    vertices = tuple(Vertex(x.id, genus_v) if x.id == v else x for x in curve.vertices) + (Vertex(w, genus_w),)
    edges = []
    for e in curve.edges:
        ends = tuple(w if (e.ends[end] == v and ('edge', e.id, end) in moved) else e.ends[end] for end in (0, 1))
        edges.append(Edge(e.id, ends))
    edges.append(Edge(ne, (v, w)))
    legs = tuple(Leg(l.id, w, l.marking) if ('leg', l.id) in moved else l for l in curve.legs)
    return TropicalCurve(vertices, tuple(edges), legs)


def _loop(curve, v):
    vertices = tuple(Vertex(x.id, 0) if x.id == v else x for x in curve.vertices)
    return TropicalCurve(vertices, curve.edges + (Edge('e%d' % (len(curve.edges) + 1), (v, v)),), curve.legs)


def _children(curve):
    for v in curve.vertex_ids:
        flags = _flags_at(curve, v)
        g = curve.vertex(v).genus
        if g == 1:
            if flags:
                yield _loop(curve, v)
            for size in range(2, len(flags) + 1):
                for moved in combinations(flags, size):
                    yield _split(curve, v, moved, 1, 0)
        elif len(flags) >= 4:
            rest = flags[1:]
            for size in range(2, len(flags) - 1):
                for moved in combinations(rest, size):
                    yield _split(curve, v, moved, 0, 0)


def genus_one_shapes(recession, max_vertices):
    """Stable genus-1 curves with the legs of the recession type and at most max_vertices vertices."""
    if max_vertices < 1:
        return []
    seed = recession.as_type()
    labels = {l.id: (l.marking, seed.leg_slopes[l.id].u, seed.leg_slopes[l.id].w) for l in seed.curve.legs}
    encoder = lambda c: encode_shape(c, labels)
    level = [TropicalCurve((Vertex('v1', 1),), (), tuple(Leg(l.id, 'v1', l.marking) for l in seed.curve.legs))]
    shapes = list(level)
    while level:
        nxt = [c for curve in level for c in _children(curve) if len(c.vertices) <= max_vertices]
        nxt = [c for c in group_isomorphism_classes(nxt, encoder)
               if not any(isomorphic_shape(c, s, labels) for s in shapes)]
        shapes += nxt
        level = nxt
    logger.info('%d genus-1 shapes with at most %d vertices', len(shapes), max_vertices)
    return shapes


def isomorphic_shape(a, b, labels):
    G, H = encode_shape(a, labels), encode_shape(b, labels)
    return signature(G) == signature(H) and matcher(G, H).is_isomorphic()


def _slope_assignments(shape, leg_slopes, r, bound):
    leg_vec = {l.id: leg_slopes[l.id].vector for l in shape.legs}
    circ  = circuit(shape)
    ring  = set(circ.edges)
    G     = shape.graph()
    bridge = {}
    for e in shape.edges:
        if e.id in ring:
            continue
        H = G.copy()
        H.remove_edge(e.ends[0], e.ends[1], key=e.id)
        side = nx.node_connected_component(H, e.ends[1])
        total = tuple(Fraction(0) for _ in range(r))
        for l in shape.legs:
            if l.base in side:
                total = tuple(a + b for a, b in zip(total, leg_vec[l.id]))
        bridge[e.id] = total

    def build(vectors):
        try:
            slopes = {eid: Slope.of(v) for eid, v in vectors.items()}
        except InvalidType:
            return None
        return CombinatorialType(shape, r, slopes, dict(leg_slopes))

    walk = cycle_walk(shape, circ)
    if not walk:
        t = build(bridge)
        if t is not None:
            yield t
        return

    outflow = []
    for e, sign, at in walk:
        s = [Fraction(0)] * r
        for l in shape.legs_at(at):
            s = [a + b for a, b in zip(s, leg_vec[l.id])]
        for f, end in shape.incident(at):
            if f.id in bridge:
                step = bridge[f.id] if end == 0 else tuple(-x for x in bridge[f.id])
                s = [a + b for a, b in zip(s, step)]
        outflow.append(s)

    for d0 in product(range(-bound, bound + 1), repeat=r):
        d = [Fraction(x) for x in d0]
        vectors = dict(bridge)
        ok = True
        for i, (e, sign, _) in enumerate(walk):
            if i > 0:
                d = [a - b for a, b in zip(d, outflow[i])]
            if max((abs(x) for x in d), default=0) > bound:
                ok = False
                break
            vectors[e.id] = tuple(sign * x for x in d)
        if not ok:
            continue
        t = build(vectors)
        if t is not None:
            yield t


def enumerate_types(recession, max_vertices):
    """Balanced stable genus-1 types of the trivial fan with this recession type, up to isomorphism."""
    recession = recession_type(recession)
    if max_vertices < 1:
        return []
    seed  = recession.as_type()
    bound = recession.total_weight
    found = []
    for shape in genus_one_shapes(recession, max_vertices):
        for t in _slope_assignments(shape, seed.leg_slopes, recession.ambient_dim, bound):
            if not is_stable(t):
                continue
            try:
                moduli_cone(t)
            except InfeasibleCone:
                continue
            found.append(t)
    types = group_isomorphism_classes(found)
    logger.info('enumerate_types: %d types (%d before isomorphism reduction)', len(types), len(found))
    return types


###############################################################################
# Well-spaced subcomplex
###############################################################################

def map_at(cell, x):
    """The tropical map of a cell's type at the cone point x = (p(v0), lengths)."""
    t = cell.ctype
    r = t.ambient_dim
    lengths = {e.id: x[r + i] for i, e in enumerate(t.curve.edges)}
    return TropicalMap.from_lengths(t, lengths, x[:r])


def _well_spaced_at(cell, x):
    from models.wellspaced import is_well_spaced
    return is_well_spaced(map_at(cell, x))[0]


def separating_forms(cell):
    """Candidate walls inside a cell: lambda differences and length differences."""
    t, cone = cell.ctype, cell.cone
    tree = radial_tree(t.curve)
    verts = t.curve.vertex_ids
    forms = [cone.form(_combine([1, -1], [lambda_form(t, v, tree), lambda_form(t, w, tree)]))
             for v, w in combinations(verts, 2)]
    forms += [cone.form({length_var(a.id): 1, length_var(b.id): -1}) for a, b in combinations(t.curve.edges, 2)]
    return forms


def _sign(a):
    return (a > 0) - (a < 0)


def refine_cell(cell, x, y, forms=None):
    """Split a cell along the first candidate wall separating the points x and y."""
    forms = separating_forms(cell) if forms is None else forms
    for f in forms:
        if _sign(dot(f, x)) != _sign(dot(f, y)):
            pieces = cell.cone.split(f)
            suffix = {-1: '<', 0: '=', 1: '>'}
            return [RadialType('%s%s%d' % (cell.name, suffix[s], forms.index(f)), cell.ctype, cell.alignment, p)
                    for s, p in sorted(pieces.items()) if p is not None]
    return None


def _settle(cell, predicate, rng, depth):
    x, y = cell.cone.sample_points(rng, 2)
    a, b = predicate(cell, x), predicate(cell, y)
    if a == b:
        return [(cell, a)]
    pieces = refine_cell(cell, x, y) if depth > 0 else None
    if pieces is None:
        raise InconsistencyError('well-spacedness is not constant on cell %s' % cell.name)
    logger.warning('cell %s refined into %d pieces', cell.name, len(pieces))
    return [s for p in pieces for s in _settle(p, predicate, rng, depth - 1)]


def well_spaced_subcomplex(cx, predicate=None, seed=0, depth=2):
    """Restriction of the complex to the cells whose sampled points are well-spaced."""
    predicate = predicate or _well_spaced_at
    rng = np.random.default_rng(seed)
    settled = [s for cell in cx.cells for s in _settle(cell, predicate, rng, depth)]
    if len(settled) != len(cx.cells):
        cx = assemble_complex([c for c, _ in settled])
    keep = [i for i, (_, ok) in enumerate(settled) if ok]
    if not cx.is_face_closed(keep):
        raise InconsistencyError('well-spaced cells are not closed under faces')
    sub = cx.restrict(keep)
    logger.info('well-spaced subcomplex: %d of %d cells', len(sub.cells), len(cx.cells))
    return sub
