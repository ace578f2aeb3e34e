import json
import os
import sys

import numpy as np
import pytest

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
if ROOT not in sys.path:
    sys.path.insert(0, ROOT)

from feeder.instance import corpus_path, load_corpus  # noqa: E402


def pytest_configure(config):
    config.addinivalue_line('markers', 'slow: long randomized sweeps')


@pytest.fixture
def corpus():
    """load_corpus(name, **params) with length parameters overridden by keyword."""
    return load_corpus


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def fanned_fig5(tmp_path):
    """fig5 over the fan of the line, every vertex labelled with the origin cone."""
    with open(corpus_path('fig5')) as f:
        data = json.load(f)
    data['fan'] = {'rays': [[1], [-1]], 'cones': {'o': [], 'p': [0], 'n': [1]}}
    data['map']['cones'] = {v['id']: 'o' for v in data['curve']['vertices']}
    path = tmp_path / 'fig5-fan.json'
    path.write_text(json.dumps(data))
    return str(path)
