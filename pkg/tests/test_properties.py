"""Randomized property sweeps; run with `pytest -m slow`."""
import time

import numpy as np
import pytest

from feeder.random_types import random_contracted_map, random_genus_one_type
from models.moduli import (expected_dim, is_superabundant, moduli_cone, type_complex, verify_subdivision,
                           well_spaced_subcomplex)
from models.tropmap import circuit_span
from models.wellspaced import is_well_spaced, is_well_spaced_line, m_plus_two_check, satisfies_speyer

pytestmark = pytest.mark.slow


@pytest.mark.parametrize('r', [1, 2, 3])
def test_superabundance_tests_agree(r):
    rng = np.random.default_rng(r)
    for _ in range(500 // 3 + 1):
        t = random_genus_one_type(rng, r)
        by_dim = moduli_cone(t).dim > expected_dim(t)
        by_span = not circuit_span(t).is_full()
        assert by_dim == by_span
        assert is_superabundant(t) == by_span


@pytest.mark.parametrize('r', [1, 2])
def test_well_spaced_implies_the_m_plus_two_condition(r):
    rng = np.random.default_rng(100 + r)
    for _ in range(200):
        fmap = random_contracted_map(rng, r)
        ok, _ = is_well_spaced(fmap)
        if ok:
            assert m_plus_two_check(fmap)


def test_speyer_implies_well_spaced_on_the_line():
    rng = np.random.default_rng(7)
    for _ in range(300):
        fmap = random_contracted_map(rng, 1)
        ok, _ = is_well_spaced_line(fmap)
        assert ok == is_well_spaced(fmap)[0]
        if satisfies_speyer(fmap):
            assert ok


def test_well_spaced_cells_are_closed_under_faces():
    start = time.perf_counter()
    for seed in range(100):
        rng = np.random.default_rng(seed)
        fmap = random_contracted_map(rng, 1, arms=1 + seed % 2)
        cx = type_complex(fmap.ctype, name='R%d' % seed)
        assert verify_subdivision(fmap.ctype, seed=seed)
        sub = well_spaced_subcomplex(cx, seed=seed)
        keep = [cx.index(c.name) for c in sub.cells]
        assert cx.is_face_closed(keep)
    assert time.perf_counter() - start < 60
