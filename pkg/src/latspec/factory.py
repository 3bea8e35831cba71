"""Meet and join matrices and their exact factorizations.

For a meet closed (or lower closed) subset ``S`` of a poset with a least
element, the meet matrix is ``E D E^T``; when ``f`` is semimultiplicative
and nowhere zero, the join matrix is ``R E L E^T R`` as well.  ``FactorizationBundle`` carries the
factors together with the pencil they define.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Sequence

from . import rational as rq
from .errors import HypothesisError, MissingMeetError, PosetError
from .poset import (
    FinitePoset,
    PointFunction,
    check_subset,
    is_lower_closed,
    is_meet_closed,
    join,
    meet,
    restricted_convolution,
)
from .rational import Matrix


@dataclass(frozen=True)
class WeightedSubset:
    """An ordered subset ``S`` of ``poset`` with ``f`` given on the whole poset."""

    poset: FinitePoset
    subset: tuple[int, ...]
    f: PointFunction

    def __post_init__(self):
        object.__setattr__(self, "subset", check_subset(self.poset, self.subset))
        if len(self.f) != self.poset.n:
            raise PosetError("f must be defined on every element of the ambient poset")

    @classmethod
    def whole(cls, poset: FinitePoset, f) -> "WeightedSubset":
        if not isinstance(f, PointFunction):
            f = PointFunction(tuple(f))
        return cls(poset, tuple(range(poset.n)), f)

    @property
    def n(self) -> int:
        return len(self.subset)

    def values(self) -> tuple[Fraction, ...]:
        return tuple(self.f[x] for x in self.subset)


def meet_matrix(ws: WeightedSubset) -> Matrix:
    """Entrywise ``f(x_i meet x_j)``."""
    p, S = ws.poset, ws.subset
    rows = []
    for a in S:
        row = []
        for b in S:
            m = meet(p, a, b)
            if m is None:
                raise MissingMeetError(a, b)
            row.append(ws.f[m])
        rows.append(tuple(row))
    return tuple(rows)


def join_value(ws: WeightedSubset, a: int, b: int) -> Fraction:
    """``f(a join b)``; extended by ``f(a) f(b) / f(a meet b)`` where the join is absent."""
    j = join(ws.poset, a, b)
    if j is not None:
        return ws.f[j]
    m = meet(ws.poset, a, b)
    if m is None or ws.f[m] == 0:
        raise MissingMeetError(a, b, kind="join")
    return ws.f[a] * ws.f[b] / ws.f[m]


def join_matrix(ws: WeightedSubset) -> Matrix:
    """Entrywise ``f(x_i join x_j)``.

    Missing joins are filled in through the semimultiplicative identity, which
    is refused when ``f`` is observably not semimultiplicative on ``S``.
    """
    p, S = ws.poset, ws.subset
    missing = any(join(p, a, b) is None for a in S for b in S)
    if missing:
        holds, bad = is_semimultiplicative(ws)
        if not holds:
            raise HypothesisError(
                "join of some pair is missing and f is not semimultiplicative (pair %s)" % (bad,)
            )
    return tuple(tuple(join_value(ws, a, b) for b in S) for a in S)


def is_semimultiplicative(ws: WeightedSubset) -> tuple[bool, tuple[int, int] | None]:
    """Check ``f(x meet y) f(x join y) = f(x) f(y)`` over all pairs of ``S``.

    Pairs lacking a meet or a join cannot witness a failure and are skipped.
    Returns the first counterexample as a pair of element indices.
    """
    p, S, f = ws.poset, ws.subset, ws.f
    for ia, a in enumerate(S):
        for b in S[ia + 1:]:
            m, j = meet(p, a, b), join(p, a, b)
            if m is None or j is None:
                continue
            if f[m] * f[j] != f[a] * f[b]:
                return False, (a, b)
    return True, None


def residual_owner(p: FinitePoset, S: Sequence[int]) -> dict[int, int]:
    """Map each ``z`` below some ``x_i`` to the first ``i`` with ``z <= x_i``.

    The preimages are exactly the sets ``{z <= x_i, z not <= x_j for j < i}``,
    so they partition the union of the down-sets of ``S``.
    """
    owner = {}
    for i, x in enumerate(S):
        for z in p.down(x):
            owner.setdefault(z, i)
    return owner


def residual_sums(p: FinitePoset, S: Sequence[int], f: PointFunction) -> tuple[Fraction, ...]:
    """``sum over the i-th residual set of (f_d * mu)(0, z)`` for every ``i``."""
    h = restricted_convolution(f, p)
    out = [Fraction(0)] * len(S)
    for z, i in residual_owner(p, S).items():
        out[i] += h[z]
    return tuple(out)


@dataclass(frozen=True)
class FactorizationBundle:
    """Exact factors of the meet/join pencil on ``ws``.

    ``l`` is None when ``f`` vanishes on the down-set of ``S`` (then ``1/f``
    and everything built from it is undefined).  ``meet`` and ``join`` are the
    factored products ``E D E^T`` and ``R E L E^T R``; ``meet_identity`` and
    ``join_identity`` record whether they agree with the entrywise matrices
    (None when the entrywise matrix is not defined).
    """

    ws: WeightedSubset
    E: Matrix
    d: tuple[Fraction, ...]
    l: tuple[Fraction, ...] | None
    r: tuple[Fraction, ...]
    meet_closed: bool
    lower_closed: bool
    semimultiplicative: bool
    meet_identity: bool | None
    join_identity: bool | None

    @property
    def n(self) -> int:
        return len(self.r)

    @property
    def D(self) -> Matrix:
        return rq.diag(self.d)

    @property
    def L(self) -> Matrix:
        if self.l is None:
            raise HypothesisError("f vanishes, so L is undefined")
        return rq.diag(self.l)

    @property
    def R(self) -> Matrix:
        return rq.diag(self.r)

    @cached_property
    def E_inv(self) -> Matrix:
        return rq.unit_lower_inverse(self.E)

    @cached_property
    def meet(self) -> Matrix:
        return rq.chain(rq.scale_cols(self.E, self.d), rq.transpose(self.E))

    @cached_property
    def join(self) -> Matrix:
        if self.l is None:
            raise HypothesisError("f vanishes, so the join factorization is undefined")
        re = rq.scale_rows(self.r, self.E)
        return rq.chain(rq.scale_cols(re, self.l), rq.transpose(re))

    @property
    def pencil_is_entrywise(self) -> bool:
        """True when the factored pencil equals the meet and join matrices entrywise."""
        return bool(self.meet_identity) and bool(self.join_identity)


def factorize(ws: WeightedSubset) -> FactorizationBundle:
    """Compute ``E``, ``D``, ``L``, ``R`` and verify the reconstruction identities.

    ``S`` must be meet closed or lower closed inside a poset with a least
    element.  On lower closed ``S`` the factors exist even when some meets or
    joins are missing; the pencil is then the factored one.
    """
    p, S = ws.poset, ws.subset
    if not p.has_least:
        raise HypothesisError("factorization needs a least element in the ambient poset")
    mc = is_meet_closed(p, S)
    lc = is_lower_closed(p, S)
    if not (mc or lc):
        raise HypothesisError("S is neither meet closed nor lower closed; use meet_closure first")
    E = rq.as_matrix([[1 if p.leq[b][a] else 0 for b in S] for a in S])
    owner = residual_owner(p, S)
    if sorted(owner) != sorted({z for x in S for z in p.down(x)}):
        raise AssertionError("residual sets do not partition the down-set")
    d = residual_sums(p, S, ws.f)
    down = set(owner)
    f_nonzero = all(ws.f[z] != 0 for z in down)
    l = residual_sums(p, S, _reciprocal_on(ws.f, down)) if f_nonzero else None
    r = ws.values()
    semi, _ = is_semimultiplicative(ws)
    bundle = FactorizationBundle(ws, E, d, l, r, mc, lc, semi, None, None)

    meet_id = None
    if mc:
        meet_id = meet_matrix(ws) == bundle.meet
        if not meet_id:
            raise AssertionError("E D E^T does not reproduce the meet matrix")
    join_id = None
    if l is not None:
        try:
            entrywise = join_matrix(ws)
        except (HypothesisError, MissingMeetError):
            entrywise = None
        if entrywise is not None:
            join_id = entrywise == bundle.join
            if semi and mc and not join_id:
                raise AssertionError("R E L E^T R does not reproduce the join matrix")
    object.__setattr__(bundle, "meet_identity", meet_id)
    object.__setattr__(bundle, "join_identity", join_id)
    return bundle


def _reciprocal_on(f: PointFunction, support) -> PointFunction:
    # 1/f on the elements that matter, 0 elsewhere (never read)
    return PointFunction(
        tuple(1 / v if k in support else Fraction(0) for k, v in enumerate(f.values)), f.exact
    )


class Definiteness(enum.Enum):
    POSITIVE_DEFINITE = "positive definite"
    POSITIVE_SEMIDEFINITE = "positive semidefinite"
    OTHER = "indefinite or other"


def classify(diagonal: Sequence[Fraction]) -> Definiteness:
    if all(x > 0 for x in diagonal):
        return Definiteness.POSITIVE_DEFINITE
    if all(x >= 0 for x in diagonal):
        return Definiteness.POSITIVE_SEMIDEFINITE
    return Definiteness.OTHER


def definiteness(bundle: FactorizationBundle) -> tuple[Definiteness, Definiteness | None]:
    """Definiteness of the meet matrix (signs of ``d``) and of the join matrix
    (signs of ``l``; ``R E`` is a congruence)."""
    return classify(bundle.d), (classify(bundle.l) if bundle.l is not None else None)
