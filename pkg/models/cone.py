import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Tuple

import ppl

from utils.errors import DimensionMismatch, InfeasibleCone
from utils.general import format_rational
from utils.ratlin import RatVec, add, clear_denominators, dot, scale, span, vec, zero

logger = logging.getLogger(__name__)


###############################################################################
# Parma Polyhedra Library glue
###############################################################################

def expression(form):
    """Integer linear expression on the ray through a rational form (positive rescaling)."""
    return ppl.Linear_Expression(list(clear_denominators(form)), 0)


def _padded(coeffs, n):
    coeffs = tuple(Fraction(int(c)) for c in coeffs)
    return coeffs + (Fraction(0),) * (n - len(coeffs))


def polyhedron(n, equalities=(), inequalities=(), strict=None):
    """Closed polyhedron {A x = 0, B x >= 0} in Q^n, or the NNC one when strict flags are given."""
    poly = ppl.NNC_Polyhedron(n, 'universe') if strict is not None else ppl.C_Polyhedron(n, 'universe')
    for f in equalities:
        poly.add_constraint(expression(f) == 0)
    for i, g in enumerate(inequalities):
        if strict is not None and strict[i]:
            poly.add_constraint(expression(g) > 0)
        else:
            poly.add_constraint(expression(g) >= 0)
    return poly


def generated(n, rays):
    """Closed cone generated by rational rays (the origin when there are none)."""
    poly = ppl.C_Polyhedron(n, 'empty')
    poly.add_generator(ppl.point())
    for r in rays:
        if any(x != 0 for x in r):
            poly.add_generator(ppl.ray(expression(r)))
    return poly


def entails(poly, constraint):
    return poly.relation_with(constraint).implies(ppl.Poly_Con_Relation.is_included())


def generators(poly, n):
    """(lines, rays) of the minimized generator system, as rational vectors."""
    lines, rays = [], []
    for g in poly.minimized_generators():
        if g.is_line():
            lines.append(_padded(g.coefficients(), n))
        elif g.is_ray():
            rays.append(_padded(g.coefficients(), n))
    return lines, rays


def constraints(poly, n):
    """(equalities, inequalities) of the minimized constraint system of a cone."""
    eqs, ineqs = [], []
    for c in poly.minimized_constraints():
        (eqs if c.is_equality() else ineqs).append(_padded(c.coefficients(), n))
    return eqs, ineqs


###############################################################################
# Cones {x : A x = 0, B x >= 0}
###############################################################################

@dataclass(frozen=True)
class Cone:
    """A rational polyhedral cone in named variables.

    The closed cone is {A x = 0, B x >= 0}; inequalities flagged strict must hold with
    > on the open cell the cone stands for (edge lengths, strict orders).
    """
    variables: Tuple[str, ...]
    equalities: Tuple[RatVec, ...] = ()
    inequalities: Tuple[RatVec, ...] = ()
    strict: Tuple[bool, ...] = field(default=())

    def __post_init__(self):
        n = len(self.variables)
        object.__setattr__(self, 'equalities', tuple(vec(f) for f in self.equalities))
        object.__setattr__(self, 'inequalities', tuple(vec(f) for f in self.inequalities))
        if not self.strict:
            object.__setattr__(self, 'strict', (False,) * len(self.inequalities))
        if len(self.strict) != len(self.inequalities):
            raise DimensionMismatch('%d strict flags for %d inequalities' % (len(self.strict), len(self.inequalities)))
        for f in self.equalities + self.inequalities:
            if len(f) != n:
                raise DimensionMismatch('linear form of length %d on %d variables' % (len(f), n))

    @property
    def n(self):
        return len(self.variables)

    def form(self, coeffs):
        """Linear form from a {variable: coefficient} mapping."""
        index = {v: i for i, v in enumerate(self.variables)}
        f = [Fraction(0)] * self.n
        for v, c in coeffs.items():
            f[index[v]] += Fraction(c)
        return tuple(f)

    # -- analysis ---------------------------------------------------------

    @cached_property
    def closed(self):
        return polyhedron(self.n, self.equalities, self.inequalities)

    @cached_property
    def open_cell(self):
        return polyhedron(self.n, self.equalities, self.inequalities, self.strict)

    @cached_property
    def implicit_equalities(self):
        """Indices of the inequalities that hold with equality on the whole closed cone."""
        out = tuple(i for i, g in enumerate(self.inequalities) if entails(self.closed, expression(g) == 0))
        logger.debug('cone on %d variables: %d implicit equalities of %d inequalities',
                     self.n, len(out), len(self.inequalities))
        return out

    @property
    def is_empty(self):
        """True when the strict inequalities cannot hold together."""
        return self.open_cell.is_empty()

    def require_nonempty(self, what='cone'):
        if self.is_empty:
            bad = [i for i in self.implicit_equalities if self.strict[i]]
            raise InfeasibleCone('%s has empty relative interior (strict inequalities %s forced to 0)' % (what, bad))
        return self

    @cached_property
    def _generators(self):
        return generators(self.closed, self.n)

    def interior_point(self):
        # the sum of the extreme rays lies in the relative interior
        point = zero(self.n)
        for r in self._generators[1]:
            point = add(point, r)
        return point

    @cached_property
    def hull(self):
        """The linear hull of the cone as a canonical subspace."""
        lines, rays = self._generators
        return span(lines + rays, self.n)

    @property
    def dim(self):
        return self.closed.affine_dimension()

    # -- membership -------------------------------------------------------

    def contains(self, x):
        x = vec(x)
        return all(dot(f, x) == 0 for f in self.equalities) and all(dot(g, x) >= 0 for g in self.inequalities)

    def relint_contains(self, x):
        x = vec(x)
        if not self.contains(x):
            return False
        tight = set(self.implicit_equalities)
        return all(dot(g, x) > 0 for i, g in enumerate(self.inequalities) if i not in tight)

    def cell_contains(self, x):
        """Membership in the open cell: strict inequalities must hold with >."""
        x = vec(x)
        return self.contains(x) and all(dot(g, x) > 0 for g, s in zip(self.inequalities, self.strict) if s)

    def implies(self, form):
        """True iff form >= 0 on the whole (closed) cone."""
        return entails(self.closed, expression(vec(form)) >= 0)

    def vanishes(self, form):
        return entails(self.closed, expression(vec(form)) == 0)

    def is_subcone_of(self, other):
        if self.n != other.n:
            raise DimensionMismatch('cones on %d and %d variables' % (self.n, other.n))
        return other.closed.contains(self.closed)

    def is_face_of(self, other):
        """True iff self is (as a closed cone) a face of other in the same variables."""
        if self.variables != other.variables or not self.is_subcone_of(other):
            return False
        tight = [g for g in other.inequalities if self.vanishes(g)]
        return other.with_equalities(tight).closed == self.closed

    # -- constructions ----------------------------------------------------

    def with_equalities(self, forms):
        return Cone(self.variables, self.equalities + tuple(vec(f) for f in forms), self.inequalities, self.strict)

    def with_inequalities(self, forms, strict=False):
        forms = tuple(vec(f) for f in forms)
        return Cone(self.variables, self.equalities, self.inequalities + forms, self.strict + (strict,) * len(forms))

    def closure(self):
        return Cone(self.variables, self.equalities, self.inequalities)

    def split(self, form):
        """Pieces {-1: form < 0, 0: form = 0, 1: form > 0} of the open cell; empty pieces are None."""
        form = vec(form)
        pieces = {
            -1: self.with_inequalities([tuple(-x for x in form)], strict=True),
            0: self.with_equalities([form]),
            1: self.with_inequalities([form], strict=True),
        }
        return {s: (None if p.is_empty else p) for s, p in pieces.items()}

    def pullback(self, variables, substitution):
        """Preimage of the cone under a linear map into our variables.

        `substitution` gives each of our variables as a {new variable: coefficient} form.
        """
        index = {v: i for i, v in enumerate(variables)}

        def pull(f):
            g = [Fraction(0)] * len(variables)
            for v, c in zip(self.variables, f):
                for w, d in substitution.get(v, {}).items():
                    g[index[w]] += c * Fraction(d)
            return tuple(g)

        return Cone(tuple(variables), tuple(pull(f) for f in self.equalities),
                    tuple(pull(g) for g in self.inequalities), self.strict)

    def intersect(self, other):
        if self.variables != other.variables:
            raise DimensionMismatch('cones over different variables')
        return Cone(self.variables, self.equalities + other.equalities,
                    self.inequalities + other.inequalities, self.strict + other.strict)

    def sample_points(self, rng, count=2, spread=3):
        """Seeded rational points in the open cell (relative interior)."""
        self.require_nonempty()
        base  = self.interior_point()
        basis = self.hull.basis
        out   = []
        while len(out) < count:
            coeffs = rng.integers(-spread, spread + 1, size=len(basis)) if basis else []
            step = zero(self.n)
            for c, b in zip(coeffs, basis):
                step = add(step, scale(int(c), b))
            K = 1
            while True:
                x = add(scale(K, base), step)
                if self.relint_contains(x) or K > 2 ** 40:
                    break
                K *= 2
            if self.relint_contains(x):
                out.append(x)
        return out

    def as_dict(self):
        def fmt(f):
            return [format_rational(x) for x in f]
        return {
            'variables': list(self.variables),
            'equalities': [fmt(f) for f in self.equalities],
            'inequalities': [fmt(g) for g in self.inequalities],
            'strict': list(self.strict),
            'dim': self.dim,
            'hull': [fmt(b) for b in self.hull.basis],
        }
