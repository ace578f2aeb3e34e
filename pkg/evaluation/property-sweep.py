import argparse
import logging
import os, sys

import numpy as np
from joblib import Parallel, delayed

sys.path.append(".")

from feeder.random_types import random_contracted_map, random_genus_one_type
from models.moduli import expected_dim, moduli_cone
from models.tropmap import circuit_span
from models.wellspaced import is_well_spaced, is_well_spaced_line, m_plus_two_check, satisfies_speyer
from utils import general


def superabundance_case(seed, r):
    rng = np.random.default_rng(seed)
    t = random_genus_one_type(rng, r)
    by_dim  = moduli_cone(t).dim > expected_dim(t)
    by_span = not circuit_span(t).is_full()
    return by_dim == by_span


def implication_case(seed, r):
    rng  = np.random.default_rng(seed)
    fmap = random_contracted_map(rng, r)
    ws, _ = is_well_spaced(fmap)
    ok = not ws or m_plus_two_check(fmap)
    if r == 1:
        ok = ok and (not satisfies_speyer(fmap) or is_well_spaced_line(fmap)[0])
    return ok, ws


parser = argparse.ArgumentParser()
parser.add_argument("--samples", type=int, default=500, help="random instances per property")
parser.add_argument("--r",       type=int, default=2,   help="ambient dimension of the superabundance sweep (1..3)")
parser.add_argument("--seed",    type=int, default=0,   help="first seed")
parser.add_argument("--n_jobs",  type=int, default=general.n_threads(), help="parallel workers")
opt = parser.parse_args()
print(opt)

logging.basicConfig(level=logging.WARNING)
out = general.check_runs('property-sweep')
general.write_config(out, __file__, opt)

seeds = range(opt.seed, opt.seed + opt.samples)
agree = Parallel(n_jobs=opt.n_jobs)(delayed(superabundance_case)(s, opt.r) for s in seeds)
impl  = Parallel(n_jobs=opt.n_jobs)(delayed(implication_case)(s, 1 + s % 2) for s in seeds)

summary = {
    'samples': opt.samples,
    'superabundance_disagreements': [s for s, ok in zip(seeds, agree) if not ok],
    'implication_violations': [s for s, (ok, _) in zip(seeds, impl) if not ok],
    'well_spaced_fraction': float(np.mean([ws for _, ws in impl])) if impl else 0.0,
}
general.save(os.path.join(out, 'summary.json'), summary)
print(summary)
