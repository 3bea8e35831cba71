"""Independent oracles and random instance generators for the test suite.

Box lattices (products of chains) are used as ambient lattices because their
meets, joins and Möbius function have closed forms that do not go through
the library code under test.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction

import numpy as np
from hypothesis import strategies as st

from latspec.factory import WeightedSubset, factorize
from latspec.poset import PointFunction, from_relation

EX1_COVERS = [(1, 2), (1, 3), (2, 4), (3, 4), (4, 5), (5, 6), (5, 7), (6, 8), (7, 8)]
EX1_F = [1, 2, 3, 6, 4, 5, 8, 10]
EX1_E = [
    "10000000",
    "11000000",
    "10100000",
    "11110000",
    "11111000",
    "11111100",
    "11111010",
    "11111111",
]
EX2_E = [
    "100000000000",
    "110000000000",
    "101000000000",
    "111100000000",
    "111110000000",
    "111101000000",
    "111111100000",
    "111111010000",
    "111111111000",
    "111111111100",
    "111111111010",
    "111111111111",
]

F = Fraction


def fr(xs):
    return [Fraction(x) for x in xs]


class Box:
    """The product of chains ``0..dims[t]-1`` with a product weight."""

    def __init__(self, dims, weights):
        self.dims = tuple(dims)
        self.weights = [tuple(Fraction(w) for w in ws) for ws in weights]
        pts = list(itertools.product(*(range(d) for d in self.dims)))
        pts.sort(key=lambda p: (sum(p), p))
        self.points = pts
        self.index = {p: k for k, p in enumerate(pts)}
        self.poset = from_relation(pts, lambda a, b: all(x <= y for x, y in zip(a, b)))
        self.f = PointFunction(tuple(self.value(p) for p in pts))

    def value(self, p):
        return math.prod((self.weights[t][a] for t, a in enumerate(p)), start=Fraction(1))

    def meet(self, a, b):
        return tuple(map(min, a, b))

    def join(self, a, b):
        return tuple(map(max, a, b))

    def mobius(self, a, b):
        # product of chain Möbius functions
        out = 1
        for x, y in zip(a, b):
            if y < x or y - x > 1:
                return 0
            out *= -1 if y - x == 1 else 1
        return out

    def subset(self, pts):
        return tuple(sorted(self.index[p] for p in pts))

    def weighted(self, pts) -> WeightedSubset:
        return WeightedSubset(self.poset, self.subset(pts), self.f)


def down_closure(gens):
    out = set()
    for g in gens:
        out.update(itertools.product(*(range(a + 1) for a in g)))
    return out


def meet_closure_pts(pts):
    out = set(pts)
    grew = True
    while grew:
        grew = False
        for a, b in itertools.combinations(list(out), 2):
            m = tuple(map(min, a, b))
            if m not in out:
                out.add(m)
                grew = True
    return out


nonzero_rationals = st.builds(
    lambda s, p, q: Fraction(s * p, q),
    st.sampled_from([1, -1]),
    st.integers(1, 9),
    st.integers(1, 6),
)


@st.composite
def weights(draw, dims, kind="any"):
    """Per-coordinate chain weights.

    ``any``: arbitrary nonzero values.  ``increasing``/``decreasing``: positive
    and strictly monotone, so every Möbius difference has a fixed sign.
    """
    out = []
    for d in dims:
        if kind == "any":
            # consecutive values distinct, so no Möbius difference of f or 1/f vanishes
            vals = [Fraction(1)]
            for _ in range(d - 1):
                vals.append(draw(nonzero_rationals.filter(lambda v, prev=vals[-1]: v != prev)))
            out.append(vals)
        else:
            steps = [Fraction(draw(st.integers(1, 7)), draw(st.integers(1, 4))) for _ in range(d - 1)]
            vals = [Fraction(1)]
            for s in steps:
                vals.append(vals[-1] + s)
            if kind == "decreasing":
                vals = [1 / v for v in vals]
            out.append(vals)
    return out


@st.composite
def box_dims(draw, max_points=24):
    k = draw(st.integers(1, 3))
    dims = [draw(st.integers(2, 4)) for _ in range(k)]
    while math.prod(dims) > max_points:
        dims[dims.index(max(dims))] -= 1
    return dims


@st.composite
def lower_closed_instances(draw, kind="any", max_n=10):
    """(Box, down-set points) with 1 <= |S| <= max_n."""
    dims = draw(box_dims())
    box = Box(dims, draw(weights(dims, kind)))
    gens = draw(st.lists(st.sampled_from(box.points), min_size=1, max_size=3))
    pts = down_closure(gens)
    order = sorted(pts, key=lambda p: (sum(p), p))
    pts = set(order[:max_n])
    # truncating a down-set in a linear extension keeps it a down-set
    return box, pts


@st.composite
def meet_closed_instances(draw, max_n=10):
    dims = draw(box_dims())
    box = Box(dims, draw(weights(dims, "any")))
    pts = draw(st.lists(st.sampled_from(box.points), min_size=1, max_size=5, unique=True))
    S = sorted(meet_closure_pts(pts), key=lambda p: (sum(p), p))[:max_n]
    S = meet_closure_pts(S)
    if len(S) > max_n:
        S = {min(S, key=sum)}
    return box, S


def entrywise(box, pts):
    """Meet and join matrices straight from coordinatewise min/max."""
    order = sorted(pts, key=lambda p: (sum(p), p))
    M = [[box.value(box.meet(a, b)) for b in order] for a in order]
    J = [[box.value(box.join(a, b)) for b in order] for a in order]
    return M, J, order


def dense_pencil_eigs(lhs, rhs):
    """scipy generalized eigenvalue oracle."""
    import scipy.linalg

    lhs = np.array([[float(x) for x in r] for r in lhs])
    rhs = np.array([[float(x) for x in r] for r in rhs])
    return scipy.linalg.eigvals(lhs, rhs)


def multiset_close(a, b, tol):
    b = list(b)
    if len(a) != len(b):
        return False
    for z in a:
        k = min(range(len(b)), key=lambda i: abs(b[i] - z))
        if abs(b[k] - z) > tol:
            return False
        b.pop(k)
    return True


def clusters(values, radius):
    """Single-linkage groups of eigenvalues closer than ``radius``, as (centroid, size)."""
    vals = [complex(v) for v in values]
    groups = []
    for z in vals:
        hits = [g for g in groups if any(abs(z - w) <= radius for w in g)]
        merged = [z] + [w for g in hits for w in g]
        groups = [g for g in groups if g not in hits] + [merged]
    return sorted(((sum(g) / len(g), len(g)) for g in groups), key=lambda c: (c[0].real, c[0].imag))


def spectra_close(a, b, tol, radius=1e-4):
    """Compare spectra up to the eps**(1/k) splitting of k-fold defective eigenvalues.

    Cluster centroids of a defective eigenvalue are accurate to O(eps), so they
    are compared at ``tol`` while the members are only grouped (``radius`` is
    relative to the spectral radius).
    """
    scale = max([1.0] + [abs(complex(z)) for z in list(a) + list(b)])
    ca, cb = clusters(a, radius * scale), clusters(b, radius * scale)
    if sorted(n for _, n in ca) != sorted(n for _, n in cb):
        return False
    return multiset_close([c for c, _ in ca], [c for c, _ in cb], tol)


def bundle_for(box, pts):
    return factorize(box.weighted(pts))
