"""
Well-spacedness of genus-1 tropical maps.

For maps to the line the condition is read off the flags around the contracted
component of the circuit. For maps to Q^r the quantifier over characters is reduced
to one generic character per flat of the arrangement {chi . w = 0} cut out by the
instance vectors; flats not containing every circuit direction leave the circuit
moving and need no test.
"""
import logging
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Tuple

from models.curve import circuit, genus, lam, radial_tree
from models.tropmap import circuit_component, circuit_moves, circuit_span, contracted_component, project
from utils.errors import InvalidCurve, InvalidType
from utils.general import format_rational, humanSort
from utils.ratlin import RatVec, Subspace, add, dot, is_zero, line_key, primitive, scale, span, sub, vec, zero

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FlagRow:
    flag: str
    base: str
    distance: Fraction
    moving: bool


@dataclass(frozen=True)
class CharacterFlat:
    flat: Subspace
    chi: RatVec


@dataclass(frozen=True)
class FlatReport:
    chi: RatVec
    flat: Optional[Subspace]
    condition: str
    rows: Tuple[FlagRow, ...] = ()
    minimum: Optional[Fraction] = None
    count: int = 0
    verdict: bool = True
    speyer: bool = True

    def as_dict(self):
        return {
            'chi': [format_rational(x) for x in self.chi],
            'flat': None if self.flat is None else [[format_rational(x) for x in b] for b in self.flat.basis],
            'condition': self.condition,
            'flags': [{'flag': r.flag, 'base': r.base, 'distance': format_rational(r.distance),
                       'moving': r.moving} for r in self.rows],
            'minimum': None if self.minimum is None else format_rational(self.minimum),
            'count': self.count,
            'well_spaced': self.verdict,
            'speyer': self.speyer,
        }


@dataclass(frozen=True)
class FlagReport:
    flats: Tuple[FlatReport, ...]
    verdict: bool

    def as_dict(self):
        return {'well_spaced': self.verdict, 'flats': [f.as_dict() for f in self.flats]}


def _fmt(v):
    return '(' + ', '.join(format_rational(x) for x in v) + ')'


def _flag_rows(fmap, verts):
    t     = fmap.ctype
    curve = fmap.curve
    tree  = radial_tree(curve)
    rows  = []
    for v in humanSort(verts):
        d = lam(curve, v, tree)
        for f in sorted(t.flags(v), key=lambda f: f.id):
            rows.append(FlagRow(f.id, v, d, not is_zero(f.vector)))
    return rows


def _minimum(moving):
    dmin = min(r.distance for r in moving)
    at   = [r for r in moving if r.distance == dmin]
    return len(at) >= 3, len({r.base for r in at}) >= 2, dmin, len(at)


def _line_report(line, chi, flat=None):
    if circuit_moves(line):
        return FlatReport(chi, flat, 'moving-circuit')
    verts, _ = contracted_component(line)
    rows   = _flag_rows(line, verts)
    moving = [r for r in rows if r.moving]
    if not moving:
        logger.warning('projection by %s is constant; treated as well-spaced', _fmt(chi))
        return FlatReport(chi, flat, 'constant', tuple(rows))
    verdict, speyer, dmin, count = _minimum(moving)

    # Flags based outside the contracted component but over the same image point
    image = line.positions[circuit(line.ctype.curve).vertices[0]]
    outside = [v for v in line.ctype.curve.vertex_ids if v not in verts and line.positions[v] == image]
    if outside:
        extra = [r for r in _flag_rows(line, outside) if r.moving]
        if extra and _minimum(moving + extra)[0] != verdict:
            logger.warning('character %s: counting flags at %s (same image, outside the contracted component) '
                           'would flip the verdict to %s', _fmt(chi), ', '.join(outside), not verdict)
    logger.debug('character %s: minimum distance %s attained %d times', _fmt(chi), dmin, count)
    return FlatReport(chi, flat, 'flags', tuple(rows), dmin, count, verdict, speyer)


def _require_line(fmap):
    if fmap.ambient_dim != 1:
        raise InvalidType('a map to the line is required, got a map to Q^%d' % fmap.ambient_dim)
    if genus(fmap.ctype.curve) != 1:
        raise InvalidCurve('well-spacedness is defined for genus 1')


def is_well_spaced_line(fmap):
    """Well-spacedness of a genus-1 map to the line; returns (verdict, FlatReport)."""
    _require_line(fmap)
    report = _line_report(fmap, (Fraction(1),))
    return report.verdict, report


def satisfies_speyer(fmap):
    _require_line(fmap)
    return _line_report(fmap, (Fraction(1),)).speyer


def instance_vectors(fmap):
    """Edge and leg vectors and the displacements of all vertices from the circuit."""
    t  = fmap.ctype
    v0 = circuit(t.curve).vertices[0]
    vectors = [t.edge_slopes[e.id].vector for e in t.curve.edges]
    vectors += [t.leg_slopes[l.id].vector for l in t.curve.legs]
    vectors += [sub(fmap.positions[v], fmap.positions[v0]) for v in t.curve.vertex_ids]
    return [v for v in vectors if not is_zero(v)]


def generic_character(flat, vectors):
    """An integer character vanishing on `flat` and on no vector outside it."""
    k = flat.annihilator().basis
    if not k:
        raise InvalidType('the full space carries no nonzero character')
    outside = [w for w in vectors if not flat.contains(w)]
    t = 1
    while True:
        chi = zero(flat.ambient_dim)
        for i, b in enumerate(k):
            chi = add(chi, scale(t ** i, b))
        if all(dot(chi, w) != 0 for w in outside):
            return tuple(Fraction(x) for x in primitive(chi)[0])
        t += 1


def character_flats(fmap):
    """One generic character per flat of the instance arrangement containing the circuit directions."""
    if genus(fmap.ctype.curve) != 1:
        raise InvalidCurve('well-spacedness is defined for genus 1')
    r = fmap.ambient_dim
    vectors = instance_vectors(fmap)
    lines = {}
    for w in vectors:
        lines.setdefault(line_key(w), w)
    lines = [lines[k] for k in sorted(lines)]

    start = circuit_span(fmap.ctype)
    if start.is_full():
        return []
    seen  = {start.key(): start}
    queue = deque([start])
    while queue:
        W = queue.popleft()
        for w in lines:
            if W.contains(w):
                continue
            U = W.join(span([w], r))
            if U.is_full() or U.key() in seen:
                continue
            seen[U.key()] = U
            queue.append(U)

    flats = sorted(seen.values(), key=lambda W: (W.dim, W.key()))
    out = [CharacterFlat(W, generic_character(W, vectors)) for W in flats]
    logger.debug('%d character flats over %d instance lines', len(out), len(lines))
    return out


def is_well_spaced(fmap):
    """Well-spacedness of a genus-1 map to Q^r; returns (verdict, FlagReport)."""
    reports = []
    for cf in character_flats(fmap):
        reports.append(_line_report(project(fmap, cf.chi), cf.chi, cf.flat))
    verdict = all(r.verdict for r in reports)
    return verdict, FlagReport(tuple(reports), verdict)


def check_character(fmap, chi):
    """Well-spacedness of the projection by a single character."""
    chi = vec(chi)
    report = _line_report(project(fmap, chi), chi)
    return report.verdict, report


def m_plus_two_check(fmap):
    """At the first radius where directions leave the circuit span L, at least m + 2 flags exit,
    m being the number of dimensions gained."""
    t = fmap.ctype
    r = fmap.ambient_dim
    L = circuit_span(t)
    if L.is_full():
        return True

    verts, _ = circuit_component(t, lambda e: L.contains(t.edge_slopes[e.id].vector))
    curve = fmap.curve
    tree  = radial_tree(curve)
    exits = [(lam(curve, v, tree), f) for v in verts for f in t.flags(v) if not L.contains(f.vector)]
    if not exits:
        return True
    delta = min(d for d, _ in exits)
    if delta == 0:
        return True
    at = [f for d, f in exits if d == delta]
    m  = L.join(span([f.vector for f in at], r)).dim - L.dim
    logger.debug('m+2 check: delta %s, %d exiting flags, m = %d', delta, len(at), m)
    return len(at) >= m + 2


def induced_descent(fmap):
    """Branch slopes at the minimal distance of a line map contracting its circuit, grouped by base vertex.

    Returns None when the circuit moves or the map is constant.
    """
    _require_line(fmap)
    report = _line_report(fmap, (Fraction(1),))
    if report.condition != 'flags':
        return None
    at = [r for r in report.rows if r.moving and r.distance == report.minimum]
    t  = fmap.ctype
    slope = {f.id: f.vector[0] for v in t.curve.vertex_ids for f in t.flags(v)}
    parts = []
    for v in humanSort({r.base for r in at}):
        parts.append(tuple(int(slope[r.flag]) for r in at if r.base == v))
    return parts
