"""Finite posets, meets and joins, and the incidence algebra over them.

Elements are indexed ``0..n-1`` and the indexing is always a linear
extension: ``leq[i][j]`` implies ``i <= j``.  User-facing formats (the poset
file, reports) count from 1; the translation happens in :mod:`latspec.report`.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Hashable, Iterable, Mapping, Sequence

from .errors import CycleError, HypothesisError, MissingMeetError, OrderingError, PosetError
from .rational import Matrix


@dataclass(frozen=True)
class FinitePoset:
    """A finite poset given by its full order relation.

    ``labels[i]`` names element ``i`` (the original index when the poset was
    re-sorted, the integer itself for divisor lattices).
    """

    leq: tuple[tuple[bool, ...], ...]
    labels: tuple[Hashable, ...] = ()

    def __post_init__(self):
        n = len(self.leq)
        if not self.labels:
            object.__setattr__(self, "labels", tuple(range(n)))
        if len(self.labels) != n or any(len(r) != n for r in self.leq):
            raise PosetError("relation must be square and match the labels")
        for i in range(n):
            if not self.leq[i][i]:
                raise PosetError("relation is not reflexive at %d" % i)
            for j in range(n):
                if self.leq[i][j] and i > j:
                    raise OrderingError(
                        "indexing is not a linear extension: %d precedes %d" % (i, j)
                    )

    @property
    def n(self) -> int:
        return len(self.leq)

    def le(self, i: int, j: int) -> bool:
        return self.leq[i][j]

    def down(self, i: int) -> tuple[int, ...]:
        return tuple(z for z in range(i + 1) if self.leq[z][i])

    def up(self, i: int) -> tuple[int, ...]:
        return tuple(z for z in range(i, self.n) if self.leq[i][z])

    @cached_property
    def least(self) -> int | None:
        if self.n and all(self.leq[0]):
            return 0
        return None

    @property
    def has_least(self) -> bool:
        return self.least is not None

    @cached_property
    def covers(self) -> tuple[tuple[int, int], ...]:
        """Hasse diagram edges ``(lower, upper)``."""
        out = []
        for j in range(self.n):
            below = [i for i in range(j) if self.leq[i][j]]
            for i in below:
                if not any(self.leq[i][k] and self.leq[k][j] for k in below if k != i):
                    out.append((i, j))
        return tuple(out)

    @cached_property
    def mobius_table(self) -> tuple[tuple[int, ...], ...]:
        """``mobius_table[x][y] = mu(x, y)``, zero off the order relation."""
        n = self.n
        mu = [[0] * n for _ in range(n)]
        for x in range(n):
            mu[x][x] = 1
            for y in range(x + 1, n):
                if self.leq[x][y]:
                    mu[x][y] = -sum(
                        mu[x][z] for z in range(x, y) if self.leq[x][z] and self.leq[z][y]
                    )
        return tuple(tuple(r) for r in mu)

    def mobius(self, x: int, y: int) -> int:
        return self.mobius_table[x][y]


def transitive_closure(n: int, covers: Iterable[tuple[int, int]]) -> list[list[bool]]:
    leq = [[i == j for j in range(n)] for i in range(n)]
    for a, b in covers:
        leq[a][b] = True
    for k in range(n):
        row_k = leq[k]
        for i in range(n):
            if leq[i][k]:
                row_i = leq[i]
                for j in range(n):
                    if row_k[j]:
                        row_i[j] = True
    return leq


def _find_cycle(n, covers):
    succ = {i: [] for i in range(n)}
    for a, b in covers:
        succ[a].append(b)
    state = [0] * n
    stack_path = []

    def visit(v):
        state[v] = 1
        stack_path.append(v)
        for w in succ[v]:
            if state[w] == 1:
                return stack_path[stack_path.index(w):] + [w]
            if state[w] == 0:
                found = visit(w)
                if found:
                    return found
        stack_path.pop()
        state[v] = 2
        return None

    for v in range(n):
        if state[v] == 0:
            found = visit(v)
            if found:
                return found
    return None


def linear_extension(n: int, covers: Sequence[tuple[int, int]]) -> list[int]:
    """Stable topological order: among available elements the smallest index goes first.

    An indexing that is already a linear extension comes back unchanged.
    """
    indeg = [0] * n
    succ = [[] for _ in range(n)]
    for a, b in covers:
        succ[a].append(b)
        indeg[b] += 1
    heap = [i for i in range(n) if indeg[i] == 0]
    heapq.heapify(heap)
    order = []
    while heap:
        v = heapq.heappop(heap)
        order.append(v)
        for w in succ[v]:
            indeg[w] -= 1
            if indeg[w] == 0:
                heapq.heappush(heap, w)
    if len(order) != n:
        raise CycleError(_find_cycle(n, covers) or ())
    return order


@dataclass(frozen=True)
class PointFunction:
    """A function on the elements of a poset, stored as exact rationals.

    ``exact`` is False when the values are binary64 numbers (for example
    ``x ** 0.5``) that were converted to rationals without rounding.
    """

    values: tuple[Fraction, ...]
    exact: bool = True

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(Fraction(v) for v in self.values))

    def __getitem__(self, i: int) -> Fraction:
        return self.values[i]

    def __len__(self):
        return len(self.values)

    @property
    def nonvanishing(self) -> bool:
        return all(v != 0 for v in self.values)

    def reciprocal(self) -> "PointFunction":
        if not self.nonvanishing:
            raise ZeroDivisionError("function vanishes somewhere; 1/f is undefined")
        return PointFunction(tuple(1 / v for v in self.values), self.exact)

    def permuted(self, order: Sequence[int]) -> "PointFunction":
        return PointFunction(tuple(self.values[k] for k in order), self.exact)


def from_covers(
    n: int,
    covers: Iterable[tuple[int, int]],
    f: Sequence | None = None,
    *,
    strict: bool = False,
) -> tuple[FinitePoset, PointFunction | None]:
    """Build a poset from Hasse edges ``(lower, upper)`` on indices ``0..n-1``.

    When the given indexing is not a linear extension the elements are
    re-sorted; ``poset.labels`` then records the original index of every
    element and ``f`` is permuted along.  With ``strict=True`` such a
    re-sort raises :class:`OrderingError` instead.
    """
    covers = [tuple(c) for c in covers]
    if n < 1:
        raise PosetError("a poset needs at least one element")
    for a, b in covers:
        for v in (a, b):
            if not 0 <= v < n:
                raise PosetError("index %r out of range 0..%d" % (v, n - 1))
        if a == b:
            raise CycleError((a, a))
    if f is not None and len(f) != n:
        raise PosetError("expected %d function values, got %d" % (n, len(f)))
    order = linear_extension(n, covers)
    if order != list(range(n)):
        if strict:
            raise OrderingError("indexing is not a linear extension of the cover relation")
    pos = {v: k for k, v in enumerate(order)}
    relabelled = [(pos[a], pos[b]) for a, b in covers]
    leq = transitive_closure(n, relabelled)
    poset = FinitePoset(tuple(tuple(r) for r in leq), tuple(order))
    pf = None
    if f is not None:
        pf = f if isinstance(f, PointFunction) else PointFunction(tuple(f))
        pf = pf.permuted(order)
    return poset, pf


def from_relation(elements: Sequence[Hashable], le) -> FinitePoset:
    """Poset on ``elements`` (already listed in a linear extension) with order ``le(a, b)``."""
    leq = tuple(tuple(bool(le(a, b)) for b in elements) for a in elements)
    return FinitePoset(leq, tuple(elements))


def chain(n: int) -> FinitePoset:
    return from_covers(n, [(i, i + 1) for i in range(n - 1)])[0]


def antichain(n: int) -> FinitePoset:
    return from_covers(n, [])[0]


def greatest(p: FinitePoset, candidates: Sequence[int]) -> int | None:
    for g in reversed(candidates):
        if all(p.leq[c][g] for c in candidates):
            return g
    return None


def least_of(p: FinitePoset, candidates: Sequence[int]) -> int | None:
    for g in candidates:
        if all(p.leq[g][c] for c in candidates):
            return g
    return None


def meet(p: FinitePoset, i: int, j: int) -> int | None:
    """Greatest lower bound of ``i`` and ``j``, or None when it does not exist."""
    lower = [z for z in range(min(i, j) + 1) if p.leq[z][i] and p.leq[z][j]]
    return greatest(p, lower) if lower else None


def join(p: FinitePoset, i: int, j: int) -> int | None:
    """Least upper bound of ``i`` and ``j``, or None when it does not exist."""
    upper = [z for z in range(max(i, j), p.n) if p.leq[i][z] and p.leq[j][z]]
    return least_of(p, upper) if upper else None


def check_subset(p: FinitePoset, S: Sequence[int]) -> tuple[int, ...]:
    """Validate that ``S`` lists distinct elements compatibly with the order."""
    S = tuple(S)
    if len(set(S)) != len(S):
        raise PosetError("subset has repeated elements")
    for v in S:
        if not 0 <= v < p.n:
            raise PosetError("subset element %r out of range" % (v,))
    for a in range(len(S)):
        for b in range(a):
            if p.leq[S[a]][S[b]]:
                raise OrderingError(
                    "subset order violates the poset: element %d precedes %d" % (S[a], S[b])
                )
    return S


def is_meet_closed(p: FinitePoset, S: Sequence[int]) -> bool:
    S = check_subset(p, S)
    members = set(S)
    for a in range(len(S)):
        for b in range(a + 1, len(S)):
            m = meet(p, S[a], S[b])
            if m is None or m not in members:
                return False
    return True


def is_lower_closed(p: FinitePoset, S: Sequence[int]) -> bool:
    S = check_subset(p, S)
    members = set(S)
    return all(z in members for x in S for z in p.down(x))


def meet_closure(p: FinitePoset, S: Sequence[int]) -> tuple[int, ...]:
    """Smallest meet closed superset of ``S``; raises if some meet is missing."""
    current = set(S)
    while True:
        new = set()
        items = sorted(current)
        for a in range(len(items)):
            for b in range(a + 1, len(items)):
                m = meet(p, items[a], items[b])
                if m is None:
                    raise MissingMeetError(items[a], items[b])
                if m not in current:
                    new.add(m)
        if not new:
            return tuple(sorted(current))
        current |= new


def lower_closure(p: FinitePoset, S: Sequence[int]) -> tuple[int, ...]:
    return tuple(sorted({z for x in S for z in p.down(x)}))


def zeta_matrix(p: FinitePoset, S: Sequence[int]) -> Matrix:
    """``E[i][j] = 1`` iff ``S[j] <= S[i]``; unit lower triangular."""
    S = check_subset(p, S)
    one, zero = Fraction(1), Fraction(0)
    return tuple(tuple(one if p.leq[sj][si] else zero for sj in S) for si in S)


def mobius_matrix(p: FinitePoset, S: Sequence[int]) -> Matrix:
    """Inverse of :func:`zeta_matrix`, whose entries are ``mu(S[j], S[i])``.

    Only valid on lower closed ``S``; elsewhere the inverse is not a table of
    Möbius values.
    """
    S = check_subset(p, S)
    if not is_lower_closed(p, S):
        raise HypothesisError("Möbius matrix requires a lower closed subset")
    mu = p.mobius_table
    return tuple(tuple(Fraction(mu[sj][si]) for sj in S) for si in S)


@dataclass(frozen=True)
class IncidenceFunction:
    """Two-variable function on a poset, zero wherever ``x`` is not below ``y``.

    ``values`` only stores pairs on the order relation; absent pairs are zero.
    """

    poset: FinitePoset
    values: Mapping[tuple[int, int], Fraction] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for (x, y), v in dict(self.values).items():
            if not self.poset.leq[x][y]:
                if v:
                    raise PosetError("incidence function nonzero off the order at (%d, %d)" % (x, y))
                continue
            clean[(x, y)] = Fraction(v)
        object.__setattr__(self, "values", clean)

    def __call__(self, x: int, y: int) -> Fraction:
        return self.values.get((x, y), Fraction(0))

    def __eq__(self, other):
        if not isinstance(other, IncidenceFunction) or other.poset != self.poset:
            return NotImplemented
        n = self.poset.n
        return all(self(x, y) == other(x, y) for x in range(n) for y in range(n))

    def __hash__(self):
        return hash(tuple(sorted((k, v) for k, v in self.values.items() if v)))

    @classmethod
    def build(cls, poset: FinitePoset, fn) -> "IncidenceFunction":
        n = poset.n
        return cls(poset, {(x, y): fn(x, y) for x in range(n) for y in range(x, n) if poset.leq[x][y]})


def delta(p: FinitePoset) -> IncidenceFunction:
    return IncidenceFunction.build(p, lambda x, y: 1 if x == y else 0)


def zeta(p: FinitePoset) -> IncidenceFunction:
    return IncidenceFunction.build(p, lambda x, y: 1)


def mu(p: FinitePoset) -> IncidenceFunction:
    table = p.mobius_table
    return IncidenceFunction.build(p, lambda x, y: table[x][y])


def convolve(f: IncidenceFunction, g: IncidenceFunction) -> IncidenceFunction:
    """``(f*g)(x, y) = sum over x <= z <= y of f(x, z) g(z, y)``."""
    if f.poset != g.poset:
        raise PosetError("cannot convolve incidence functions of different posets")
    p = f.poset
    n = p.n
    out = {}
    for x in range(n):
        for y in range(x, n):
            if p.leq[x][y]:
                s = Fraction(0)
                for z in range(x, y + 1):
                    if p.leq[x][z] and p.leq[z][y]:
                        s += f(x, z) * g(z, y)
                out[(x, y)] = s
    return IncidenceFunction(p, out)


def restricted_convolution(f: PointFunction, p: FinitePoset) -> tuple[Fraction, ...]:
    """Möbius inversion of ``f`` over every down-set: ``(f_d * mu)(0, z)`` for all ``z``."""
    if not p.has_least:
        raise HypothesisError("restricted incidence functions need a least element")
    if len(f) != p.n:
        raise PosetError("function must be defined on every element of the poset")
    mu_t = p.mobius_table
    return tuple(
        sum((f[w] * mu_t[w][z] for w in range(z + 1) if p.leq[w][z]), Fraction(0))
        for z in range(p.n)
    )
