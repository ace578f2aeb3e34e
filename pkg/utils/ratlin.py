# Exact rational linear algebra: every value is a Fraction, nothing is floating point.

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import gcd
from typing import Tuple

import sympy as sp

from utils.errors import DimensionMismatch


RatVec = Tuple[Fraction, ...]


def vec(entries):
    return tuple(Fraction(x) for x in entries)


def zero(n):
    return tuple(Fraction(0) for _ in range(n))


def unit(n, i):
    return tuple(Fraction(1 if j == i else 0) for j in range(n))


def is_zero(v):
    return all(x == 0 for x in v)


def dot(a, b):
    if len(a) != len(b):
        raise DimensionMismatch('dot product of vectors of dimension %d and %d' % (len(a), len(b)))
    return sum((Fraction(x) * y for x, y in zip(a, b)), Fraction(0))


def add(a, b):
    if len(a) != len(b):
        raise DimensionMismatch('sum of vectors of dimension %d and %d' % (len(a), len(b)))
    return tuple(Fraction(x) + y for x, y in zip(a, b))


def sub(a, b):
    if len(a) != len(b):
        raise DimensionMismatch('difference of vectors of dimension %d and %d' % (len(a), len(b)))
    return tuple(Fraction(x) - y for x, y in zip(a, b))


def scale(c, a):
    c = Fraction(c)
    return tuple(c * x for x in a)


def neg(a):
    return tuple(-Fraction(x) for x in a)


def ambient(vectors, ambient_dim=None):
    dims = {len(v) for v in vectors}
    if ambient_dim is not None:
        dims.add(ambient_dim)
    if len(dims) > 1:
        raise DimensionMismatch('vectors of mixed dimensions %s' % sorted(dims))
    return dims.pop() if dims else 0


def _matrix(rows, ncols):
    rows = [vec(r) for r in rows]
    for r in rows:
        if len(r) != ncols:
            raise DimensionMismatch('row of length %d in a matrix with %d columns' % (len(r), ncols))
    if not rows or ncols == 0:
        return sp.zeros(len(rows), ncols)
    return sp.Matrix([[sp.Rational(x.numerator, x.denominator) for x in r] for r in rows])


def _fraction(x):
    x = sp.Rational(x)
    return Fraction(int(x.p), int(x.q))


def _row(M, i):
    return tuple(_fraction(x) for x in M.row(i))


def rref(rows, ncols):
    """Reduced row-echelon form with leading coefficients 1.

    Returns the nonzero rows and their pivot columns.
    """
    M = _matrix(rows, ncols)
    if M.rows == 0 or ncols == 0:
        return (), ()
    R, pivots = M.rref()
    return tuple(_row(R, i) for i in range(len(pivots))), tuple(pivots)


@dataclass(frozen=True)
class Subspace:
    """A linear subspace of Q^n stored by its canonical RREF basis.

    Two Subspaces compare equal iff they are the same subspace.
    """
    basis: Tuple[RatVec, ...]
    ambient_dim: int

    @property
    def dim(self):
        return len(self.basis)

    @property
    def pivots(self):
        return tuple(next(i for i, x in enumerate(row) if x != 0) for row in self.basis)

    @classmethod
    def zero(cls, n):
        return cls((), n)

    @classmethod
    def full(cls, n):
        return cls(tuple(unit(n, i) for i in range(n)), n)

    def is_full(self):
        return self.dim == self.ambient_dim

    def reduce(self, v):
        """Remainder of v after eliminating the pivot coordinates of the basis."""
        v = list(vec(v))
        if len(v) != self.ambient_dim:
            raise DimensionMismatch('vector of dimension %d against subspace of Q^%d' % (len(v), self.ambient_dim))
        for row, p in zip(self.basis, self.pivots):
            if v[p] != 0:
                f = v[p]
                v = [a - f * b for a, b in zip(v, row)]
        return tuple(v)

    def contains(self, v):
        return is_zero(self.reduce(v))

    def join(self, other):
        return span(self.basis + other.basis, self.ambient_dim)

    def annihilator(self):
        return kernel_of_inclusion(self.basis, self.ambient_dim)

    def key(self):
        return tuple(tuple(str(x) for x in row) for row in self.basis)


def span(vectors, ambient_dim=None):
    vectors = [vec(v) for v in vectors]
    n = ambient(vectors, ambient_dim)
    rows, _ = rref(vectors, n)
    return Subspace(rows, n)


def rank(vectors, ambient_dim=None):
    return span(vectors, ambient_dim).dim


def nullspace(rows, ncols):
    """Basis of {x : r.x = 0 for every row r}, one vector per free column."""
    M = _matrix(rows, ncols)
    if ncols == 0:
        return []
    if M.rows == 0:
        return [unit(ncols, i) for i in range(ncols)]
    return [tuple(_fraction(x) for x in b) for b in M.nullspace()]


def kernel_of_inclusion(vectors, ambient_dim=None):
    """The annihilator {chi : chi(w) = 0 for all w} of the span of `vectors`."""
    vectors = [vec(v) for v in vectors]
    n = ambient(vectors, ambient_dim)
    return span(nullspace(vectors, n), n)


def solve(rows, rhs, ncols):
    """One solution of rows . x = rhs (free variables set to 0), or None."""
    if len(rows) != len(rhs):
        raise DimensionMismatch('%d rows against %d right-hand sides' % (len(rows), len(rhs)))
    if ncols == 0:
        return () if all(Fraction(b) == 0 for b in rhs) else None
    if not rows:
        return zero(ncols)
    A = _matrix(rows, ncols)
    b = sp.Matrix([sp.Rational(Fraction(x).numerator, Fraction(x).denominator) for x in rhs])
    try:
        x, params = A.gauss_jordan_solve(b)
    except ValueError:
        return None
    x = x.subs({p: 0 for p in params})
    return tuple(_fraction(c) for c in x)


def clear_denominators(v):
    """Smallest positive integer multiple of v with integer entries."""
    v = vec(v)
    den = reduce(lambda a, b: a * b // gcd(a, b), (x.denominator for x in v), 1)
    return tuple(int(x * den) for x in v)


def primitive(v):
    """The primitive integer vector u on the ray through v and the scalar s with s*u = v."""
    v = vec(v)
    if is_zero(v):
        raise DimensionMismatch('primitive vector of the zero vector')
    ints = clear_denominators(v)
    g    = reduce(gcd, (abs(x) for x in ints))
    u    = tuple(x // g for x in ints)
    k    = next(i for i, x in enumerate(u) if x != 0)
    return u, v[k] / u[k]


def line_key(v):
    """Canonical key of the line through a nonzero vector (sign-normalized primitive)."""
    u, _ = primitive(v)
    k = next(i for i, x in enumerate(u) if x != 0)
    return tuple(-x for x in u) if u[k] < 0 else u
