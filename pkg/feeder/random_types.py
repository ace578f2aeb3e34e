"""Seeded generators of balanced genus-1 types and maps for property tests and sweeps."""
import logging
from fractions import Fraction

from models.curve import Edge, Leg, TropicalCurve, Vertex
from models.tropmap import CombinatorialType, Slope, TropicalMap
from utils.ratlin import add, is_zero, neg, sub, zero

logger = logging.getLogger(__name__)


def _random_vector(rng, r, bound=2, nonzero=True):
    while True:
        v = tuple(Fraction(int(x)) for x in rng.integers(-bound, bound + 1, size=r))
        if not nonzero or not is_zero(v):
            return v


class _Builder:

    def __init__(self, r):
        self.r = r
        self.vertices, self.edges, self.legs = [], [], []
        self.edge_slopes, self.leg_slopes = {}, {}

    def vertex(self, genus=0):
        vid = 'v%d' % (len(self.vertices) + 1)
        self.vertices.append(Vertex(vid, genus))
        return vid

    def edge(self, a, b, vector):
        eid = 'e%d' % (len(self.edges) + 1)
        self.edges.append(Edge(eid, (a, b)))
        self.edge_slopes[eid] = Slope.of(vector)
        return eid

    def leg(self, base, vector):
        lid = 't%d' % (len(self.legs) + 1)
        self.legs.append(Leg(lid, base, len(self.legs) + 1))
        self.leg_slopes[lid] = Slope.of(vector)
        return lid

    def close(self, rng, v, defect, extra=True):
        """Balance v with legs, or with a bridge to a trivalent vertex carrying two legs."""
        need = neg(defect)
        if extra and rng.random() < 0.5:
            b = need if not is_zero(need) else _random_vector(rng, self.r)
            if is_zero(need):
                self.leg(v, neg(b))
            w = self.vertex()
            self.edge(v, w, b)
            x = _random_vector(rng, self.r)
            while is_zero(sub(b, x)):
                x = _random_vector(rng, self.r)
            self.leg(w, x)
            self.leg(w, sub(b, x))
        elif is_zero(need):
            a = _random_vector(rng, self.r)
            self.leg(v, a)
            self.leg(v, neg(a))
        else:
            self.leg(v, need)

    def build(self):
        curve = TropicalCurve(tuple(self.vertices), tuple(self.edges), tuple(self.legs))
        return CombinatorialType(curve, self.r, dict(self.edge_slopes), dict(self.leg_slopes))


def random_genus_one_type(rng, r, max_cycle=4, p_contracted=0.2, p_genus_vertex=0.1):
    """A balanced genus-1 type in Q^r with every vertex of valence at least 3.

    The cycle vectors sum to zero, so lengths all equal to 1 close the cycle.
    """
    B = _Builder(r)
    if rng.random() < p_genus_vertex:
        v = B.vertex(genus=1)
        B.close(rng, v, zero(r))
        return B.build()

    k = int(rng.integers(1, max_cycle + 1))
    cyc = [B.vertex() for _ in range(k)]
    if k == 1:
        vectors = [zero(r)]
    else:
        vectors = [zero(r) if rng.random() < p_contracted else _random_vector(rng, r) for _ in range(k - 1)]
        last = zero(r)
        for v in vectors:
            last = sub(last, v)
        vectors.append(last)
    for i in range(k):
        B.edge(cyc[i], cyc[(i + 1) % k], vectors[i])
    for i in range(k):
        # outgoing cycle flags at cyc[i]: vectors[i] forward, -vectors[i-1] backward (a loop cancels)
        defect = sub(vectors[i], vectors[i - 1]) if k > 1 else zero(r)
        B.close(rng, cyc[i], defect)
    return B.build()


def random_contracted_map(rng, r=1, arms=None, p_moving=0.1, lengths=(1, 2)):
    """A genus-1 map whose circuit (two vertices, two contracted edges) is contracted.

    Each arm is a contracted edge of length drawn from `lengths` ending at a vertex with
    two or three balanced legs, so ties in distance to the circuit are common.
    """
    B = _Builder(r)
    c1, c2 = B.vertex(), B.vertex()
    B.edge(c1, c2, zero(r))
    B.edge(c2, c1, zero(r))
    length = {'e1': Fraction(int(rng.integers(1, 3))), 'e2': Fraction(int(rng.integers(1, 3)))}
    if rng.random() < p_moving:
        a = _random_vector(rng, r)
        B.leg(c1, a)
        B.leg(c1, neg(a))
    arms = int(rng.integers(1, 5)) if arms is None else arms
    for _ in range(arms):
        base = c1 if rng.random() < 0.5 else c2
        end  = B.vertex()
        eid  = B.edge(base, end, zero(r))
        length[eid] = Fraction(int(rng.choice(lengths)))
        x = _random_vector(rng, r)
        y = _random_vector(rng, r)
        if rng.random() < 0.5 and not is_zero(add(x, y)):
            B.leg(end, x)
            B.leg(end, y)
            B.leg(end, neg(add(x, y)))
        else:
            B.leg(end, x)
            B.leg(end, neg(x))
    t = B.build()
    return TropicalMap.from_lengths(t, length, _random_vector(rng, r, nonzero=False))


def star_map(k, distance=1, weights=None):
    """Circuit contracted to a genus-1 vertex joined by a contracted edge to a vertex with k moving legs."""
    weights = weights or [1] * (k - 1) + [-(k - 1)]
    if len(weights) != k or sum(weights) != 0:
        raise ValueError('star weights must be k nonzero integers summing to zero')
    B = _Builder(1)
    c = B.vertex(genus=1)
    s = B.vertex()
    B.edge(c, s, (Fraction(0),))
    for a in weights:
        B.leg(s, (Fraction(a),))
    return TropicalMap.from_lengths(B.build(), {'e1': Fraction(distance)})
