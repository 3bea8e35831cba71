"""Generalized eigenvalues of the meet/join pencil.

The primal problem is ``meet x = lam join x`` and the dual one is
``join x = lam meet x``.  Both are reduced exactly to ordinary eigenvalue
problems (``L^-1 A`` and ``D^-1 B``), converted to binary64 once and solved
densely.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Literal

import numpy as np

from . import rational as rq
from .errors import HypothesisError
from .factory import FactorizationBundle, join_matrix
from .rational import Matrix

Which = Literal["primal", "dual"]
ZERO_THRESHOLD = 1e-8
REAL_TOLERANCE = 1e-8


def _require_l(bundle):
    if bundle.l is None or any(x == 0 for x in bundle.l):
        raise HypothesisError("some l_i vanishes; the join matrix is singular")
    if any(x == 0 for x in bundle.r):
        raise HypothesisError("some f(x_i) vanishes; R is singular")


def _require_d(bundle):
    if any(x == 0 for x in bundle.d):
        raise HypothesisError("some d_i vanishes; the meet matrix is singular")


def reduce_meet_over_join(bundle: FactorizationBundle) -> Matrix:
    """``L^-1 A`` with ``A = (R E)^-1 meet (E^T R)^-1 = K D K^T``, ``K = E^-1 R^-1 E``."""
    _require_l(bundle)
    Ei, E = bundle.E_inv, bundle.E
    K = rq.matmul(rq.scale_cols(Ei, [1 / x for x in bundle.r]), E)
    A = rq.matmul(rq.scale_cols(K, bundle.d), rq.transpose(K))
    return rq.scale_rows([1 / x for x in bundle.l], A)


def reduce_join_over_meet(bundle: FactorizationBundle) -> Matrix:
    """``D^-1 B`` with ``B = E^-1 join E^-T = K L K^T``, ``K = E^-1 R E``."""
    _require_d(bundle)
    if bundle.l is None:
        raise HypothesisError("f vanishes; the join matrix factorization is undefined")
    Ei, E = bundle.E_inv, bundle.E
    K = rq.matmul(rq.scale_cols(Ei, bundle.r), E)
    B = rq.matmul(rq.scale_cols(K, bundle.l), rq.transpose(K))
    return rq.scale_rows([1 / x for x in bundle.d], B)


def reduce(bundle: FactorizationBundle, which: Which) -> Matrix:
    if which == "primal":
        return reduce_meet_over_join(bundle)
    if which == "dual":
        return reduce_join_over_meet(bundle)
    raise ValueError("which must be 'primal' or 'dual', got %r" % (which,))


def pencil_matrix(bundle: FactorizationBundle, which: Which) -> Matrix:
    """``join^-1 meet`` (primal) or ``meet^-1 join`` (dual), exactly.

    Similar to the reduced matrix through ``E^T R`` (primal) or ``E^T``
    (dual).
    """
    red = reduce(bundle, which)
    E, Ei = bundle.E, bundle.E_inv
    EiT = rq.transpose(Ei)
    if which == "primal":
        # (E^T R)^-1 X (E^T R) = R^-1 E^-T X E^T R
        left = rq.scale_rows([1 / x for x in bundle.r], EiT)
        right = rq.scale_cols(rq.transpose(E), bundle.r)
    else:
        left, right = EiT, rq.transpose(E)
    return rq.chain(left, red, right)


def _join_values(bundle):
    return join_matrix(bundle.ws)


def element_formula(bundle: FactorizationBundle, i: int, j: int, which: Which = "primal") -> Fraction:
    """Closed form of one entry of the reduced matrix on a lower closed ``S``.

    Primal: ``l_i^-1 sum mu(x_a, x_i) mu(x_b, x_j) / f(x_a join x_b)``.
    Dual: ``d_i^-1 sum mu(x_a, x_i) mu(x_b, x_j) f(x_a join x_b)``.
    """
    if not bundle.lower_closed:
        raise HypothesisError("the element formula needs a lower closed subset")
    if not bundle.semimultiplicative:
        raise HypothesisError("the element formula needs a semimultiplicative f")
    p, S = bundle.ws.poset, bundle.ws.subset
    mu = p.mobius_table
    J = _join_values(bundle)
    rows_i = [(a, mu[S[a]][S[i]]) for a in range(len(S)) if mu[S[a]][S[i]]]
    rows_j = [(b, mu[S[b]][S[j]]) for b in range(len(S)) if mu[S[b]][S[j]]]
    s = Fraction(0)
    for a, ma in rows_i:
        for b, mb in rows_j:
            v = J[a][b]
            s += ma * mb * (1 / v if which == "primal" else v)
    if which == "primal":
        _require_l(bundle)
        return s / bundle.l[i]
    _require_d(bundle)
    return s / bundle.d[i]


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues of one pencil, sorted by real part then imaginary part.

    ``inertia`` is ``(positive, negative, zero)`` when every eigenvalue is
    real to within tolerance, else None.
    """

    eigenvalues: tuple[complex, ...]
    residuals: tuple[float, ...]
    inertia: tuple[int, int, int] | None
    reduction_used: str
    scale: float

    @property
    def n(self) -> int:
        return len(self.eigenvalues)

    @property
    def max_abs(self) -> float:
        return max(abs(z) for z in self.eigenvalues)

    def nonzero(self) -> list[complex]:
        return [z for z in self.eigenvalues if abs(z) >= ZERO_THRESHOLD * self.scale]


def solve(bundle: FactorizationBundle, which: Which = "primal") -> Spectrum:
    """Solve the pencil through its exact reduction.

    Each residual is ``|lhs x - lam rhs x| / ((|lhs| + |lam| |rhs|) |x|)`` in
    the 2-norm, with ``x`` recovered from the reduced eigenvector.
    """
    red = rq.to_float(reduce(bundle, which))
    w, Y = np.linalg.eig(red)
    Ei = rq.to_float(bundle.E_inv)
    meet = rq.to_float(bundle.meet)
    joinm = rq.to_float(bundle.join)
    if which == "primal":
        lhs, rhs = meet, joinm
        rinv = np.array([1 / float(x) for x in bundle.r])
        # y = E^T R x
        X = rinv[:, None] * (Ei.T @ Y)
    else:
        lhs, rhs = joinm, meet
        # y = E^T x
        X = Ei.T @ Y
    nl, nr = np.linalg.norm(lhs, 2), np.linalg.norm(rhs, 2)
    order = sorted(range(len(w)), key=lambda k: (w[k].real, w[k].imag))
    vals, res = [], []
    for k in order:
        x = X[:, k]
        lam = w[k]
        r = np.linalg.norm(lhs @ x - lam * (rhs @ x))
        res.append(float(r / ((nl + abs(lam) * nr) * np.linalg.norm(x))))
        vals.append(complex(lam))
    scale = float(np.max(np.abs(red))) if red.size else 1.0
    inertia = None
    if all(abs(z.imag) <= REAL_TOLERANCE * max(1.0, scale) for z in vals):
        thr = ZERO_THRESHOLD * scale
        pos = sum(1 for z in vals if z.real >= thr)
        neg = sum(1 for z in vals if z.real <= -thr)
        inertia = (pos, neg, len(vals) - pos - neg)
    tag = "meet_over_join" if which == "primal" else "join_over_meet"
    return Spectrum(tuple(vals), tuple(res), inertia, tag, scale)


def _sign(x) -> int:
    return (x > 0) - (x < 0)


@dataclass(frozen=True)
class InertiaPrediction:
    applicable: bool
    signs: tuple[int, ...] | None = None
    reason: str | None = None

    @property
    def counts(self) -> tuple[int, int, int] | None:
        if self.signs is None:
            return None
        return (self.signs.count(1), self.signs.count(-1), self.signs.count(0))


def inertia_prediction(bundle: FactorizationBundle, which: Which = "primal") -> InertiaPrediction:
    """Signs of the eigenvalues predicted from the factor diagonals.

    Primal: with every ``d_i >= 0`` the eigenvalue signs are those of ``l``.
    Dual: with every ``l_i >= 0`` they are those of ``d``.  The congruence
    argument also needs the hypothesis diagonal to be nonsingular, so a zero
    there makes the prediction inapplicable as well.
    """
    if bundle.l is None:
        return InertiaPrediction(False, reason="f vanishes; l is undefined")
    hyp, pred, hname = (
        (bundle.d, bundle.l, "d") if which == "primal" else (bundle.l, bundle.d, "l")
    )
    if any(x == 0 for x in pred):
        return InertiaPrediction(False, reason="pencil is singular (some %s_i = 0)" % ("l" if hname == "d" else "d"))
    if any(x < 0 for x in hyp):
        return InertiaPrediction(False, reason="some %s_i < 0" % hname)
    if any(x == 0 for x in hyp):
        return InertiaPrediction(False, reason="some %s_i = 0; congruence needs a nonsingular diagonal" % hname)
    return InertiaPrediction(True, tuple(_sign(x) for x in pred))
