import json
import logging
import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Optional

from models.curve import Edge, Leg, TropicalCurve, Vertex, genus
from models.tropmap import (CombinatorialType, Fan, LegSlope, RecessionType, Slope, TropicalMap, recession_type,
                            require_balanced)
from utils.errors import InstanceError, TropError
from utils.general import format_rational, humanSort, parse_rational

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1
CORPUS_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), 'corpus')


@dataclass
class Instance:
    name: str
    curve: TropicalCurve
    ambient_dim: Optional[int] = None
    ctype: Optional[CombinatorialType] = None
    map: Optional[TropicalMap] = None
    fan: Optional[Fan] = None
    source: str = ''
    parameters: Dict[str, Fraction] = field(default_factory=dict)
    length_names: Dict[str, str] = field(default_factory=dict)
    fan_spec: object = None
    base: Optional[tuple] = None
    explicit_positions: bool = False
    schema_version: int = SCHEMA_VERSION


def _get(data, key, path, kind=None, default=KeyError):
    where = '%s.%s' % (path, key) if path else key
    if not isinstance(data, dict):
        raise InstanceError('expected an object', field=path or '<root>')
    if key not in data:
        if default is KeyError:
            raise InstanceError('missing field', field=where)
        return default
    value = data[key]
    if kind is not None and not isinstance(value, kind):
        raise InstanceError('expected %s' % (kind.__name__ if isinstance(kind, type) else
                                             ' or '.join(k.__name__ for k in kind)), field=where)
    return value


def _rational(value, where):
    try:
        return parse_rational(value)
    except (ValueError, ZeroDivisionError) as err:
        raise InstanceError(str(err), field=where) from err


def _vector(value, r, where):
    if not isinstance(value, list):
        raise InstanceError('expected a list', field=where)
    if r is not None and len(value) != r:
        raise InstanceError('expected %d coordinates, got %d' % (r, len(value)), field=where)
    return tuple(_rational(x, '%s[%d]' % (where, i)) for i, x in enumerate(value))


def _slope(data, r, where):
    u = _vector(_get(data, 'u', where), r, where + '.u')
    w = _get(data, 'w', where, int)
    if any(x.denominator != 1 for x in u):
        raise InstanceError('directions must be integer', field=where + '.u')
    return Slope(tuple(int(x) for x in u), w)


def _parse_fan(spec, r):
    if spec is None:
        return None
    if spec == 'projective':
        return Fan.projective(r)
    rays = [_vector(x, r, 'fan.rays[%d]' % i) for i, x in enumerate(_get(spec, 'rays', 'fan', list))]
    cones = _get(spec, 'cones', 'fan', dict)
    for name, idx in cones.items():
        if not isinstance(idx, list) or any(not isinstance(i, int) or not 0 <= i < len(rays) for i in idx):
            raise InstanceError('cone rays must be indices into fan.rays', field='fan.cones.%s' % name)
    return Fan(r, Fan.from_rays(rays, {k: tuple(v) for k, v in cones.items()}).cones,
               bool(_get(spec, 'complete', 'fan', bool, False)))


def parse_data(data, params=None, origin='<data>'):
    """Build a validated Instance from decoded JSON; `params` override the file's parameters."""
    version = _get(data, 'schema_version', '', int)
    if version != SCHEMA_VERSION:
        raise InstanceError('unknown schema version %d' % version, field='schema_version')
    name   = _get(data, 'name', '', str, os.path.splitext(os.path.basename(origin))[0])
    source = _get(data, 'source', '', str, '')

    parameters = {k: _rational(v, 'parameters.%s' % k) for k, v in _get(data, 'parameters', '', dict, {}).items()}
    for k, v in (params or {}).items():
        if k not in parameters:
            raise InstanceError('unknown parameter %r' % k, field='parameters')
        parameters[k] = Fraction(v)

    c = _get(data, 'curve', '', dict)
    vertices = []
    for i, v in enumerate(_get(c, 'vertices', 'curve', list)):
        where = 'curve.vertices[%d]' % i
        vertices.append(Vertex(_get(v, 'id', where, str), _get(v, 'genus', where, int, 0)))

    edges, names = [], {}
    for i, e in enumerate(_get(c, 'edges', 'curve', list, [])):
        where = 'curve.edges[%d]' % i
        eid   = _get(e, 'id', where, str)
        ends  = _get(e, 'ends', where, list)
        if len(ends) != 2:
            raise InstanceError('an edge has two ends', field=where + '.ends')
        raw = _get(e, 'length', where, (str, int), None)
        length = None
        if isinstance(raw, str) and raw in parameters:
            names[eid] = raw
            length = parameters[raw]
        elif raw is not None:
            length = _rational(raw, where + '.length')
        if length is not None and length <= 0:
            raise InstanceError('edge length must be positive', field=where + '.length')
        edges.append(Edge(eid, (ends[0], ends[1]), length))

    legs = []
    for i, l in enumerate(_get(c, 'legs', 'curve', list, [])):
        where = 'curve.legs[%d]' % i
        legs.append(Leg(_get(l, 'id', where, str), _get(l, 'base', where, str), _get(l, 'marking', where, int, i + 1)))

    try:
        curve = TropicalCurve(tuple(vertices), tuple(edges), tuple(legs))
        genus(curve)
    except TropError as err:
        raise InstanceError(str(err), field='curve') from err

    inst = Instance(name, curve, source=source, parameters=parameters, length_names=names, schema_version=version)
    if 'map' not in data:
        return inst

    r = _get(data, 'ambient_dim', '', int)
    if r < 0:
        raise InstanceError('ambient dimension must be non-negative', field='ambient_dim')
    m = _get(data, 'map', '', dict)
    edge_slopes = {eid: _slope(s, r, 'map.edges.%s' % eid) for eid, s in _get(m, 'edges', 'map', dict, {}).items()}
    leg_slopes  = {lid: _slope(s, r, 'map.legs.%s' % lid) for lid, s in _get(m, 'legs', 'map', dict, {}).items()}
    inst.ambient_dim = r
    inst.fan_spec = data.get('fan')
    inst.fan = _parse_fan(inst.fan_spec, r)
    try:
        inst.ctype = CombinatorialType(curve.forget_lengths(), r, edge_slopes, leg_slopes,
                                       dict(_get(m, 'cones', 'map', dict, {})), inst.fan)
        require_balanced(inst.ctype)
    except TropError as err:
        raise InstanceError(str(err), field='map') from err

    positions = _get(m, 'positions', 'map', dict, None)
    base = _get(m, 'base', 'map', list, None)
    if base is not None:
        inst.base = _vector(base, r, 'map.base')
    if not curve.has_lengths:
        return inst
    lengths = {e.id: e.length for e in curve.edges}
    try:
        if positions is not None:
            pos = {v: _vector(p, r, 'map.positions.%s' % v) for v, p in positions.items()}
            inst.map = TropicalMap(inst.ctype, lengths, pos)
            inst.explicit_positions = True
        elif genus(curve) == 1:
            inst.map = TropicalMap.from_lengths(inst.ctype, lengths, inst.base)
    except InstanceError:
        raise
    except TropError as err:
        raise InstanceError(str(err), field='map') from err
    return inst


def parse_instance(path, params=None):
    """Read and validate an instance file; errors carry the JSON field path (and line for syntax errors)."""
    try:
        with open(path) as f:
            data = json.load(f)
    except json.JSONDecodeError as err:
        raise InstanceError('malformed JSON: %s' % err.msg, line=err.lineno) from err
    except OSError as err:
        raise InstanceError('cannot read %s: %s' % (path, err.strerror)) from err
    inst = parse_data(data, params, path)
    logger.debug('parsed instance %s from %s', inst.name, path)
    return inst


def serialize_instance(inst):
    def slope(s):
        return {'u': list(s.u), 'w': s.w}

    def length(e):
        if e.id in inst.length_names:
            return inst.length_names[e.id]
        return None if e.length is None else format_rational(e.length)

    curve = inst.curve
    data = {
        'schema_version': inst.schema_version,
        'name': inst.name,
        'source': inst.source,
        'parameters': {k: format_rational(v) for k, v in inst.parameters.items()},
        'curve': {
            'vertices': [{'id': v.id, 'genus': v.genus} for v in curve.vertices],
            'edges': [dict(id=e.id, ends=list(e.ends), **({} if length(e) is None else {'length': length(e)}))
                      for e in curve.edges],
            'legs': [{'id': l.id, 'base': l.base, 'marking': l.marking} for l in curve.legs],
        },
    }
    t = inst.ctype
    if t is not None:
        data['ambient_dim'] = inst.ambient_dim
        data['map'] = {
            'edges': {e.id: slope(t.edge_slopes[e.id]) for e in curve.edges},
            'legs': {l.id: slope(t.leg_slopes[l.id]) for l in curve.legs},
        }
        if inst.fan is not None:
            data['map']['cones'] = {v: t.cones[v] for v in humanSort(t.cones)}
        if inst.base is not None:
            data['map']['base'] = [format_rational(x) for x in inst.base]
        if inst.map is not None and inst.explicit_positions:
            data['map']['positions'] = {v: [format_rational(x) for x in inst.map.positions[v]]
                                        for v in curve.vertex_ids}
        if inst.fan_spec is not None:
            data['fan'] = inst.fan_spec
    return data


def parse_recession(path):
    """A recession type, either given directly ({ambient_dim, legs}) or read off an instance's type."""
    try:
        with open(path) as f:
            data = json.load(f)
    except json.JSONDecodeError as err:
        raise InstanceError('malformed JSON: %s' % err.msg, line=err.lineno) from err
    if 'curve' in data:
        inst = parse_data(data, origin=path)
        if inst.ctype is None:
            raise InstanceError('instance has no map section', field='map')
        return recession_type(inst.ctype)
    r = _get(data, 'ambient_dim', '', int)
    legs = []
    for i, l in enumerate(_get(data, 'legs', '', list)):
        where = 'legs[%d]' % i
        legs.append(LegSlope(_get(l, 'marking', where, int, i + 1), _slope(l, r, where)))
    try:
        return RecessionType(r, tuple(legs), _get(data, 'genus', '', int, 1))
    except TropError as err:
        raise InstanceError(str(err), field='legs') from err


def corpus_names():
    return [os.path.splitext(f)[0] for f in humanSort(os.listdir(CORPUS_DIR)) if f.endswith('.json')]


def corpus_path(name):
    path = os.path.join(CORPUS_DIR, name if name.endswith('.json') else name + '.json')
    if not os.path.exists(path):
        raise InstanceError('no corpus instance named %r' % name)
    return path


def load_corpus(name, **params):
    return parse_instance(corpus_path(name), params)
