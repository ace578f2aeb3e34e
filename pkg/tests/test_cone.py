from fractions import Fraction

import numpy as np
import pytest

from models.cone import Cone, constraints, generated, generators
from utils.errors import DimensionMismatch, InfeasibleCone


def quadrant(strict=False):
    return Cone(('a', 'b'), (), ((1, 0), (0, 1)), (strict, strict))


def test_generated_cone_constraints():
    # cone over (1, 0) and (1, 2): b >= 0 and 2a - b >= 0
    eqs, ineqs = constraints(generated(2, [(1, 0), (Fraction(1, 2), 1)]), 2)
    assert eqs == []
    assert {tuple(g) for g in ineqs} == {(0, 1), (2, -1)}


def test_generators_of_a_half_plane():
    lines, rays = generators(Cone(('a', 'b'), (), ((1, 0),)).closed, 2)
    assert len(lines) == 1 and lines[0][0] == 0
    assert len(rays) == 1 and rays[0][0] > 0


def test_rational_forms_are_rescaled():
    C = Cone(('a', 'b'), (), ((Fraction(1, 2), Fraction(-1, 3)),))
    assert C.implies((3, -2))
    assert not C.implies((-3, 2))
    assert C.with_equalities([(Fraction(3, 4), Fraction(-1, 2))]).vanishes((3, -2))


def test_half_plane_interior():
    C = Cone(('a', 'b'), (), ((1, 0),), (True,))
    assert C.dim == 2
    assert C.relint_contains(C.interior_point())
    assert not C.relint_contains((0, 5))


def test_ragged_forms_are_rejected():
    with pytest.raises(DimensionMismatch):
        Cone(('a', 'b'), (), ((1, 0, 0),))
    with pytest.raises(DimensionMismatch):
        quadrant().is_subcone_of(Cone(('a',), (), ((1,),)))


def test_quadrant_dimension_and_interior():
    C = quadrant(strict=True)
    assert C.dim == 2
    assert not C.is_empty
    assert C.implicit_equalities == ()
    assert C.cell_contains(C.interior_point())


def test_implicit_equalities_collapse_the_cone():
    C = Cone(('a', 'b'), (), ((1, 0), (0, 1), (-1, -1)))
    assert C.dim == 0
    assert set(C.implicit_equalities) == {0, 1, 2}
    strict = Cone(('a', 'b'), (), ((1, 0), (0, 1), (-1, -1)), (True, False, False))
    assert strict.is_empty
    with pytest.raises(InfeasibleCone):
        strict.require_nonempty()


def test_equalities_cut_the_hull():
    C = quadrant().with_equalities([(1, -1)])
    assert C.dim == 1
    assert C.hull.contains((1, 1))
    assert C.contains((2, 2))
    assert not C.contains((2, 1))


def test_split_by_a_form():
    pieces = quadrant(strict=True).split((1, -1))
    assert all(p is not None for p in pieces.values())
    assert pieces[0].dim == 1
    assert pieces[1].cell_contains((2, 1))
    assert not pieces[1].cell_contains((1, 2))
    assert pieces[-1].cell_contains((1, 2))


def test_split_along_a_vanishing_form():
    diagonal = Cone(('a', 'b'), ((1, -1),), ((1, 0),), (True,))
    pieces = diagonal.split((1, -1))
    assert pieces[-1] is None and pieces[1] is None
    assert pieces[0].dim == 1


def test_implies_and_faces():
    C = quadrant()
    assert C.implies((1, 1))
    assert not C.implies((1, -1))
    ray = Cone(('a', 'b'), ((1, 0),), ((0, 1),))
    assert ray.is_face_of(C)
    diagonal = Cone(('a', 'b'), ((1, -1),), ((1, 0),))
    assert diagonal.is_subcone_of(C)
    assert not diagonal.is_face_of(C)
    assert C.is_face_of(C)


def test_pullback_substitutes_forms():
    # a = x, b = x - y
    P = quadrant().pullback(('x', 'y'), {'a': {'x': 1}, 'b': {'x': 1, 'y': -1}})
    assert P.variables == ('x', 'y')
    assert P.contains((1, 1))
    assert not P.contains((1, 2))


def test_form_from_mapping():
    assert quadrant().form({'b': 2, 'a': Fraction(1, 2)}) == (Fraction(1, 2), 2)


def test_sample_points_lie_in_the_open_cell():
    C = quadrant(strict=True).with_inequalities([(1, -1)], strict=True)
    points = C.sample_points(np.random.default_rng(0), count=5)
    assert len(points) == 5
    assert all(C.cell_contains(x) for x in points)


def test_as_dict_is_string_valued():
    d = quadrant().with_equalities([(Fraction(1, 2), -1)]).as_dict()
    assert d['equalities'] == [['1/2', '-1']]
    assert d['dim'] == 1
