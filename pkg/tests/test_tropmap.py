from fractions import Fraction

import pytest

from models.curve import Edge, Leg, TropicalCurve, Vertex
from models.tropmap import (CombinatorialType, Fan, FanCone, Slope, TropicalMap, balance, circuit_moves,
                            circuit_span, contracted_component, contraction_radius, is_stable, project,
                            recession_type, require_balanced, unstable_vertices)
from utils.errors import InvalidType


def one_vertex(legs, genus=1, r=1):
    curve = TropicalCurve((Vertex('v', genus),), (), tuple(Leg('t%d' % (i + 1), 'v', i + 1) for i in range(len(legs))))
    return CombinatorialType(curve, r, {}, {'t%d' % (i + 1): Slope.of(u) for i, u in enumerate(legs)})


def test_slope_of_vectors():
    assert Slope.of((2, 4)) == Slope((1, 2), 2)
    assert Slope.of((0, 0)).w == 0
    assert Slope((1, -1), 3).reversed().vector == (-3, 3)
    with pytest.raises(InvalidType):
        Slope.of((Fraction(1, 2),))


def test_non_primitive_direction_is_rejected():
    curve = TropicalCurve((Vertex('v', 1),), (), (Leg('t1', 'v', 1),))
    with pytest.raises(InvalidType):
        CombinatorialType(curve, 1, {}, {'t1': Slope((2,), 1)})


def test_balance_reports_the_vertex(corpus):
    assert balance(corpus('fig4').ctype) == (True, {})
    assert balance(corpus('fig4').map) == (True, {})
    t = one_vertex([(1, 0), (0, 1)], r=2)
    ok, bad = balance(t)
    assert not ok and bad == {'v': (1, 1)}
    with pytest.raises(InvalidType) as err:
        require_balanced(t)
    assert err.value.vertex == 'v'


def test_stability():
    assert unstable_vertices(one_vertex([], genus=1)) == ['v']
    assert is_stable(one_vertex([(1,), (-1,)], genus=1))
    path = TropicalCurve((Vertex('a', 1), Vertex('b')), (Edge('e1', ('a', 'b')),),
                         (Leg('t1', 'b', 1),))
    t = CombinatorialType(path, 1, {'e1': Slope.of((1,))}, {'t1': Slope.of((1,))})
    # b has two flags along the line inside the trivial fan
    assert unstable_vertices(t) == ['b']


def test_projective_fan():
    fan = Fan.projective(2)
    assert len(fan.cones) == 7
    assert fan.complete and not fan.is_trivial
    assert fan.cone_of((0, 0)) == 'c'
    assert fan.cone_of((1, 0)) == 'c0'
    assert fan.cone_of((1, 1)) == 'c01'
    assert fan.cone_of((-1, -1)) == 'c2'
    assert fan.cone_of((-1, 0)) == 'c12'


def test_fan_cone_facets_and_faces():
    quadrant = FanCone('q', ((1, 0), (0, 1)), 2)
    assert {tuple(f) for f in quadrant.facets} == {(1, 0), (0, 1)}
    assert quadrant.pointed
    assert FanCone('ray', ((1, 0),), 2).is_face_of(quadrant)
    assert not FanCone('diag', ((1, 1),), 2).is_face_of(quadrant)
    assert Fan.trivial(2).is_trivial


def test_recession_type_is_idempotent(corpus):
    t = corpus('fig4').ctype
    rec = recession_type(t)
    assert recession_type(rec) == rec
    assert rec.total_weight == 4
    assert recession_type(rec.as_type()) == rec


def test_map_positions_follow_the_lengths(corpus):
    fmap = corpus('fig4', l1=3, l2=1).map
    c1 = fmap.positions['c1']
    assert fmap.positions['c2'] == (c1[0] + 1, c1[1])
    assert fmap.positions['q'] == (c1[0] - 6, c1[1])
    with pytest.raises(InvalidType):
        TropicalMap(fmap.ctype, fmap.lengths, dict(fmap.positions, p=(0, 0)))


def test_cycle_that_does_not_close_is_rejected(corpus):
    t = corpus('fig4').ctype
    with pytest.raises(InvalidType):
        TropicalMap.from_lengths(t, {'e1': 1, 'e2': 2, 'e3': 1, 'e4': 1})


def test_projection_to_a_line(corpus):
    fmap = corpus('fig4').map
    line = project(fmap, (0, 2))
    assert line.ambient_dim == 1
    assert line.ctype.edge_slopes['e3'].w == 0
    assert line.ctype.leg_slopes['t1'] == Slope((1,), 1)
    assert all(line.positions[v] == (fmap.positions[v][1],) for v in fmap.positions)


def test_contraction_radius_is_the_nearest_moving_flag(corpus):
    assert contraction_radius(corpus('fig3').map) == 1
    assert contraction_radius(corpus('fig3', lup=3, ldown=2).map) == 2
    assert contraction_radius(corpus('fig5').map) == 1


def test_contraction_radius_of_a_moving_circuit(corpus):
    fmap = corpus('fig4').map
    assert circuit_moves(fmap)
    assert contraction_radius(fmap) == 0
    # projecting onto the vertical axis contracts the circuit and its two arms
    assert not circuit_moves(fmap, (0, 1))
    verts, edges = contracted_component(fmap, (0, 1))
    assert verts == {'c1', 'c2', 'p', 'q'}
    assert contraction_radius(fmap, (0, 1)) == 1


def test_circuit_spans(corpus):
    assert circuit_span(corpus('fig2').ctype).is_full()
    assert circuit_span(corpus('fig4').ctype).dim == 1
    assert circuit_span(corpus('fig5').ctype).dim == 0


def line_fan():
    return Fan.from_rays([(1,), (-1,)], {'o': (), 'p': (0,), 'n': (1,)})


def tail_through_the_origin(labels):
    # genus-1 vertex a joined to a bivalent vertex b whose flags point both ways along the line
    path = TropicalCurve((Vertex('a', 1), Vertex('b')), (Edge('e1', ('a', 'b')),),
                         (Leg('t1', 'a', 1), Leg('t2', 'b', 2)))
    return CombinatorialType(path, 1, {'e1': Slope.of((1,))}, {'t1': Slope.of((-1,)), 't2': Slope.of((1,))},
                             labels, line_fan())


def test_bivalent_vertex_on_a_wall_is_stable():
    assert is_stable(tail_through_the_origin({'a': 'n', 'b': 'o'}))
    assert unstable_vertices(tail_through_the_origin({'a': 'n', 'b': 'p'})) == ['b']


def test_line_fan_cones():
    fan = line_fan()
    assert not fan.is_trivial
    assert fan.cone('o').facets == () and fan.cone('o').dim == 0
    assert fan.cone_of((0,)) == 'o'
    assert fan.cone_of((Fraction(-1, 2),)) == 'n'
    assert fan.cone('o').is_face_of(fan.cone('p'))
    assert not fan.cone('n').is_face_of(fan.cone('p'))
    assert not fan.cone('p').contains((-1,))


def test_labelled_map_must_sit_in_its_cones():
    t = tail_through_the_origin({'a': 'n', 'b': 'o'})
    fmap = TropicalMap.from_lengths(t, {'e1': 2}, (-2,))
    assert fmap.positions['b'] == (0,)
    with pytest.raises(InvalidType):
        TropicalMap.from_lengths(t, {'e1': 2}, (-1,))


def test_non_pointed_cone():
    plane = FanCone('half', ((1, 0), (0, 1), (0, -1)), 2)
    assert not plane.pointed
    assert [tuple(f) for f in plane.facets] == [(1, 0)]
    assert plane.relint_contains((1, -5))
    assert not plane.relint_contains((0, 1))


def test_positions_propagate_through_parallel_edges(corpus):
    fmap = corpus('fig5', l1=3).map
    assert fmap.positions == {v: (0,) for v in ('a', 'b', 'c1', 'c2')}
    assert fmap.lam('a') == 3


def test_contraction_radius_of_a_constant_projection(corpus):
    with pytest.raises(InvalidType):
        contraction_radius(corpus('fig5').map, (0,))
