from fractions import Fraction

import pytest

from models.curve import (Edge, Leg, TropicalCurve, Vertex, alignment_of, circuit, enumerate_alignments, genus, lam,
                          path_ancestors, radial_path, radial_tree)
from utils.errors import InvalidCurve


def curve(vertices, edges=(), legs=()):
    return TropicalCurve(tuple(Vertex(*v) if isinstance(v, tuple) else Vertex(v) for v in vertices),
                         tuple(Edge(e[0], (e[1], e[2]), None if len(e) < 4 else Fraction(e[3])) for e in edges),
                         tuple(Leg(*l) for l in legs))


def test_genus_of_a_genus_one_vertex():
    assert genus(curve([('v', 1)])) == 1


def test_genus_of_the_triangle_with_pendant():
    c = curve(['v1', 'v2', 'v3', 'v4'], [('e0', 'v1', 'v2'), ('e1', 'v2', 'v3'), ('e2', 'v4', 'v2'),
                                         ('e3', 'v3', 'v4')])
    assert genus(c) == 1
    circ = circuit(c)
    assert circ.vertices == ('v2', 'v3', 'v4')
    assert circ.edges == ('e1', 'e2', 'e3')


def test_genus_of_parallel_edges():
    assert genus(curve(['a', 'b'], [('e1', 'a', 'b'), ('e2', 'a', 'b')])) == 1


def test_disconnected_curve_is_rejected():
    with pytest.raises(InvalidCurve):
        genus(curve(['a', 'b']))


def test_nonpositive_length_is_rejected():
    with pytest.raises(InvalidCurve):
        curve(['a', 'b'], [('e1', 'a', 'b', 0)])


def test_circuit_of_genus_one_vertex_with_tail():
    c = curve([('v', 1), 'w'], [('e1', 'v', 'w')])
    assert circuit(c).vertices == ('v',)
    assert circuit(c).edges == ()


def test_circuit_of_a_loop_with_trees():
    c = curve(['v', 'a', 'b'], [('e1', 'v', 'v'), ('e2', 'v', 'a'), ('e3', 'a', 'b')])
    assert circuit(c).vertices == ('v',)
    assert circuit(c).edges == ('e1',)


def test_circuit_needs_genus_one():
    with pytest.raises(InvalidCurve):
        circuit(curve(['a', 'b'], [('e1', 'a', 'b')]))


def test_lambda_values():
    c = curve(['c', 'a', 'b'], [('e0', 'c', 'c', 1), ('e1', 'c', 'a', 2), ('e2', 'a', 'b', 3)])
    assert lam(c, 'c') == 0
    assert lam(c, 'a') == 2
    assert lam(c, 'b') == 5
    c = curve(['u', 'w'], [('loop', 'u', 'u', 1), ('e', 'u', 'w', Fraction(7, 2))])
    assert lam(c, 'w') == Fraction(7, 2)


def test_lambda_is_monotone_along_paths():
    c = curve(['c', 'a', 'b', 'd'], [('e0', 'c', 'c', 1), ('e1', 'c', 'a', 2), ('e2', 'a', 'b', 1),
                                    ('e3', 'a', 'd', 5)])
    for v, anc in path_ancestors(c).items():
        assert all(lam(c, w) <= lam(c, v) for w in anc)


def test_alignments_of_a_star_with_two_leaves():
    c = curve(['c', 'a', 'b'], [('e0', 'c', 'c'), ('e1', 'c', 'a'), ('e2', 'c', 'b')])
    found = {str(a) for a in enumerate_alignments(c)}
    assert found == {'c < a < b', 'c < b < a', 'c < a=b'}


def test_alignments_of_a_path_are_forced():
    c = curve(['c', 'a', 'b'], [('e0', 'c', 'c'), ('e1', 'c', 'a'), ('e2', 'a', 'b')])
    assert [str(a) for a in enumerate_alignments(c)] == ['c < a < b']


def test_alignment_of_the_circuit_alone():
    assert len(enumerate_alignments(curve([('v', 1)]))) == 1


def test_alignments_count_total_preorders_of_an_antichain():
    # 3 incomparable vertices: 13 ordered set partitions
    c = curve(['c', 'a', 'b', 'd'], [('e0', 'c', 'c'), ('e1', 'c', 'a'), ('e2', 'c', 'b'), ('e3', 'c', 'd')])
    assert len(enumerate_alignments(c)) == 13


def test_alignment_of_lengths():
    c = curve(['c', 'a', 'b'], [('e0', 'c', 'c', 1), ('e1', 'c', 'a', 2), ('e2', 'c', 'b', 2)])
    assert str(alignment_of(c)) == 'c < a=b'
    assert alignment_of(c).leq('a', 'b') and alignment_of(c).leq('b', 'a')


def test_circuit_of_parallel_edges_with_tails():
    c = curve(['a', 'b', 'x', 'y'], [('e1', 'a', 'b'), ('e2', 'b', 'a'), ('e3', 'b', 'x'), ('e4', 'x', 'y')])
    circ = circuit(c)
    assert circ.vertices == ('a', 'b')
    assert circ.edges == ('e1', 'e2')


def test_circuit_of_a_square_with_a_chord_free_tail():
    c = curve(['v1', 'v2', 'v3', 'v4', 'w'], [('e1', 'v1', 'v2'), ('e2', 'v2', 'v3'), ('e3', 'v3', 'v4'),
                                              ('e4', 'v4', 'v1'), ('e5', 'w', 'v3')])
    circ = circuit(c)
    assert circ.vertices == ('v1', 'v2', 'v3', 'v4')
    assert circ.edges == ('e1', 'e2', 'e3', 'e4')


def test_radial_tree_points_back_to_the_circuit():
    c = curve(['v1', 'v2', 'v3', 'a', 'b', 'd'], [('e1', 'v1', 'v2'), ('e2', 'v2', 'v3'), ('e3', 'v3', 'v1'),
                                                  ('e4', 'a', 'v1'), ('e5', 'a', 'b'), ('e6', 'v3', 'd')])
    tree = radial_tree(c)
    assert tree == {'a': ('v1', 'e4'), 'b': ('a', 'e5'), 'd': ('v3', 'e6')}
    assert radial_path(c, 'b', tree) == ('e4', 'e5')
    assert radial_path(c, 'v2', tree) == ()
