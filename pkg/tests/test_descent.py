from fractions import Fraction

import pytest

from models.descent import DescentInstance, configuration_exists, descends, linear_parts
from utils.errors import DescentError


def test_linear_part_of_one_branch():
    inst = DescentInstance(((2, -2),), ((1, -1),), (1,))
    assert linear_parts(inst).b == (-4,)
    inst = DescentInstance(((1, 1, -2),), ((1, 3, Fraction(3, 2)),), (1,))
    assert linear_parts(inst).b == (0,)
    assert descends(inst)


def test_descent_of_two_branches():
    inst = DescentInstance(((2, -2), (1, -1)), ((1, -1), (1, 2)), (1, -8))
    assert linear_parts(inst).b == (-4, Fraction(-1, 2))
    assert descends(inst)
    assert not descends(DescentInstance(inst.slopes, inst.points, (1, 8)))


def test_single_branch_with_nonzero_b_never_descends():
    assert not descends(DescentInstance(((1, -1),), ((1, 2),), (5,)))


@pytest.mark.parametrize('slopes, points, constants', [
    (((1, -1),), ((2, 2),), (1,)),
    (((1, -1),), ((0, 2),), (1,)),
    (((1, -2),), ((1, 2),), (1,)),
    (((1, 0, -1),), ((1, 2, 3),), (1,)),
    (((1, -1),), ((1, 2, 3),), (1,)),
    (((1, -1),), ((1, 2),), (0,)),
    ((), (), ()),
])
def test_invalid_instances(slopes, points, constants):
    with pytest.raises(DescentError):
        DescentInstance(slopes, points, constants)


def test_two_points_admit_no_configuration():
    assert configuration_exists([(1, -1)]) == (False, None)
    assert configuration_exists([(3, -3)], constants=[2]) == (False, None)


def test_three_points_admit_a_configuration():
    exists, witness = configuration_exists([(1, 1, -2)])
    assert exists
    assert descends(witness)
    assert linear_parts(witness).b == (0,)


def test_two_branches_with_constants():
    exists, witness = configuration_exists([(2, -2), (1, -1)], constants=[1, -8], seed=7)
    assert exists
    assert witness.constants == (1, -8)
    assert descends(witness)


def test_search_validates_its_input():
    with pytest.raises(DescentError):
        configuration_exists([(1, 1)])
    with pytest.raises(DescentError):
        configuration_exists([(1, -1), (2, -2)], constants=[1])


def test_search_is_seeded():
    a = configuration_exists([(1, 2, -3)], seed=11)
    b = configuration_exists([(1, 2, -3)], seed=11)
    assert a == b


def random_parts(rng):
    m = int(rng.integers(1, 4))
    parts = []
    for j in range(m):
        size = int(rng.integers(3 if m == 1 else 2, 5))
        part = [int(x) for x in rng.choice([-3, -2, -1, 1, 2, 3], size=size - 1)]
        last = -sum(part)
        if last == 0:
            part[0] += 1 if part[0] != -1 else 2
            last = -sum(part)
        parts.append(tuple(part + [last]))
    return parts


def test_random_two_point_instances_never_descend(rng):
    for _ in range(50):
        a = int(rng.integers(1, 10)) * int(rng.choice([-1, 1]))
        c = int(rng.choice([-3, -1, 1, 2, 5]))
        assert configuration_exists([(a, -a)], [c], seed=int(rng.integers(0, 1000))) == (False, None)


def test_random_instances_with_three_or_more_points(rng):
    for _ in range(200):
        parts = random_parts(rng)
        constants = [int(c) for c in rng.choice([-2, -1, 1, 3], size=len(parts))]
        exists, witness = configuration_exists(parts, constants, seed=int(rng.integers(0, 1000)))
        assert exists, parts
        assert descends(witness)
        for part, points in zip(parts, witness.points):
            assert len(points) == len(part)
            assert len(set(points)) == len(points)
            assert all(x != 0 for x in points)
