import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Tuple

import numpy as np

from utils.errors import DescentError, InconsistencyError

logger = logging.getLogger(__name__)

MAX_RETRIES = 1000


@dataclass(frozen=True)
class DescentInstance:
    """Branches of a genus-1 singularity: per branch the slopes a_i and points x_i, and a constant c_j."""
    slopes: Tuple[Tuple[int, ...], ...]
    points: Tuple[Tuple[Fraction, ...], ...]
    constants: Tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, 'slopes', tuple(tuple(int(a) for a in part) for part in self.slopes))
        object.__setattr__(self, 'points', tuple(tuple(Fraction(x) for x in part) for part in self.points))
        object.__setattr__(self, 'constants', tuple(Fraction(c) for c in self.constants))
        _check_slopes(self.slopes)
        if len(self.points) != len(self.slopes) or len(self.constants) != len(self.slopes):
            raise DescentError('%d branches of slopes, %d of points and %d constants'
                               % (len(self.slopes), len(self.points), len(self.constants)))
        for j, (a, x) in enumerate(zip(self.slopes, self.points)):
            if len(a) != len(x):
                raise DescentError('branch %d: %d slopes for %d points' % (j + 1, len(a), len(x)))
            if any(p == 0 for p in x):
                raise DescentError('branch %d: points must be nonzero' % (j + 1))
            if len(set(x)) != len(x):
                raise DescentError('branch %d: points must be distinct' % (j + 1))
        if any(c == 0 for c in self.constants):
            raise DescentError('constants must be nonzero')

    @property
    def m(self):
        return len(self.slopes)

    @property
    def n(self):
        return sum(len(part) for part in self.slopes)


@dataclass(frozen=True)
class BranchLinearPart:
    b: Tuple[Fraction, ...]


def _check_slopes(slopes):
    if not slopes:
        raise DescentError('at least one branch is required')
    for j, part in enumerate(slopes):
        if not part:
            raise DescentError('branch %d is empty' % (j + 1))
        if any(a == 0 for a in part):
            raise DescentError('branch %d: slopes must be nonzero' % (j + 1))
        if sum(part) != 0:
            raise DescentError('branch %d: slopes sum to %d, expected 0' % (j + 1, sum(part)))


def linear_parts(inst):
    """b_j = -sum a_i / x_i over the branch."""
    return BranchLinearPart(tuple(-sum((Fraction(a) / x for a, x in zip(part, pts)), Fraction(0))
                                  for part, pts in zip(inst.slopes, inst.points)))


def descends(inst):
    b = linear_parts(inst).b
    return sum((c * x for c, x in zip(inst.constants, b)), Fraction(0)) == 0


def configuration_exists(slopes, constants=None, seed=0):
    """Search distinct nonzero points making sum c_j b_j vanish; returns (found, witness instance or None)."""
    slopes = tuple(tuple(int(a) for a in part) for part in slopes)
    _check_slopes(slopes)
    constants = tuple(Fraction(c) for c in constants) if constants is not None else (Fraction(1),) * len(slopes)
    if len(constants) != len(slopes) or any(c == 0 for c in constants):
        raise DescentError('one nonzero constant per branch is required')

    n = sum(len(part) for part in slopes)
    if n == 2:
        # a single branch (a, -a): b = -a (1/x1 - 1/x2) is never 0 for distinct points
        return False, None

    # Solve for the reciprocal of the last point of the largest branch
    jstar = max(range(len(slopes)), key=lambda j: (len(slopes[j]), -j))
    index = [(j, i) for j, part in enumerate(slopes) for i in range(len(part))]
    solved = (jstar, len(slopes[jstar]) - 1)
    free = [ji for ji in index if ji != solved]

    rng = np.random.default_rng(seed)
    spread = 4 * n
    for attempt in range(MAX_RETRIES):
        values = rng.choice(np.arange(1, spread + 1), size=len(free), replace=False)
        signs  = rng.choice([-1, 1], size=len(free))
        x = {ji: Fraction(int(s * v)) for ji, s, v in zip(free, signs, values)}
        S = sum((constants[j] * slopes[j][i] / x[(j, i)] for j, i in free), Fraction(0))
        if S == 0:
            continue
        j, i = solved
        y = -constants[j] * slopes[j][i] / S
        if y in x.values():
            continue
        x[solved] = y
        points = tuple(tuple(x[(j, i)] for i in range(len(part))) for j, part in enumerate(slopes))
        witness = DescentInstance(slopes, points, constants)
        if not descends(witness):
            raise InconsistencyError('descent witness does not satisfy the residue condition')
        logger.debug('descent witness after %d attempts', attempt + 1)
        return True, witness
    raise InconsistencyError('no descent configuration found in %d attempts' % MAX_RETRIES)
