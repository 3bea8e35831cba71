"""Eigenvalue bounds for the meet/join pencil.

Global bounds use the extreme constants of K(n) (unit lower triangular 0/1
matrices); local bounds come from Gerschgorin disks of the reduced matrix and
from Fibonacci estimates of the Möbius entries.  Bounds whose hypotheses
fail are returned as :class:`Inapplicable` values rather than infinities.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Literal, Sequence, Union

import numpy as np

from . import divisor
from . import rational as rq
from .errors import HypothesisError
from .factory import FactorizationBundle, WeightedSubset, factorize, join_matrix
from .poset import PointFunction
from .spectral import Which, pencil_matrix, reduce

EXHAUSTIVE_LIMIT = 6


@dataclass(frozen=True)
class Inapplicable:
    reason: str

    def __bool__(self):
        return False


Bound = Union[float, Inapplicable]


@dataclass(frozen=True)
class KnConstants:
    n: int
    c_n: float
    C_n: float
    method: str


def min_matrix(n: int) -> np.ndarray:
    idx = np.arange(1, n + 1)
    return np.minimum.outer(idx, idx).astype(float)


def alternating_matrix(n: int) -> np.ndarray:
    """Unit lower triangular with ``(1 - (-1)**(i+j)) / 2`` below the diagonal."""
    Y = np.eye(n)
    for i in range(n):
        for j in range(i):
            Y[i, j] = (i + j) % 2
    return Y


def _exhaustive(n: int) -> tuple[float, float]:
    pairs = [(i, j) for i in range(n) for j in range(i)]
    m = len(pairs)
    lo, hi = math.inf, -math.inf
    chunk = 4096
    for start in range(0, 2**m, chunk):
        codes = np.arange(start, min(start + chunk, 2**m))
        X = np.broadcast_to(np.eye(n), (len(codes), n, n)).copy()
        for k, (i, j) in enumerate(pairs):
            X[:, i, j] = (codes >> k) & 1
        w = np.linalg.eigvalsh(X @ X.transpose(0, 2, 1))
        lo = min(lo, float(w[:, 0].min()))
        hi = max(hi, float(w[:, -1].max()))
    return lo, hi


def kn_constants(n: int, method: str = "closed_form") -> KnConstants:
    """Smallest and largest eigenvalue of ``X X^T`` over ``X`` in K(n).

    ``closed_form`` uses the known extremal members: the largest comes from
    the all-ones lower triangle (``X X^T = min(i, j)``), the smallest from the
    alternating pattern.  ``exhaustive`` enumerates all 2**(n(n-1)/2) members.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if method == "closed_form":
        Y = alternating_matrix(n)
        c = float(np.linalg.eigvalsh(Y @ Y.T)[0])
        C = float(np.linalg.eigvalsh(min_matrix(n))[-1])
    elif method == "exhaustive":
        if n > EXHAUSTIVE_LIMIT:
            raise ValueError("exhaustive search is limited to n <= %d" % EXHAUSTIVE_LIMIT)
        c, C = _exhaustive(n)
    else:
        raise ValueError("unknown method %r" % (method,))
    return KnConstants(n, c, C, method)


def fibonacci(k: int) -> int:
    """``F_1 = F_2 = 1``."""
    a, b = 0, 1
    for _ in range(k):
        a, b = b, a + b
    return a


@dataclass(frozen=True)
class PencilConstants:
    """Exact scalars entering the bounds; ``None`` where undefined."""

    M_f: Fraction
    m_f: Fraction
    M_g: Fraction | None
    m_g: Fraction | None
    c_f: Fraction | None
    C_f: Fraction | None
    min_abs_f: Fraction
    max_abs_f: Fraction


def pencil_constants(bundle: FactorizationBundle) -> PencilConstants:
    d = [abs(x) for x in bundle.d]
    l = [abs(x) for x in bundle.l] if bundle.l is not None else None
    c_f = C_f = None
    if bundle.semimultiplicative:
        try:
            J = join_matrix(bundle.ws)
        except Exception:
            J = None
        if J is not None:
            vals = [abs(x) for row in J for x in row]
            c_f, C_f = min(vals), max(vals)
    fa = [abs(x) for x in bundle.r]
    return PencilConstants(
        max(d), min(d),
        max(l) if l else None, min(l) if l else None,
        c_f, C_f, min(fa), max(fa),
    )


@dataclass(frozen=True)
class GlobalBounds:
    upper: Bound
    lower: Bound


def global_bounds(bundle: FactorizationBundle, constants: KnConstants, which: Which = "primal") -> GlobalBounds:
    if constants.n != bundle.n:
        raise ValueError("K(n) constants are for n=%d, pencil has n=%d" % (constants.n, bundle.n))
    pc = pencil_constants(bundle)
    ratio = constants.C_n / constants.c_n
    l_ok = pc.m_g is not None and pc.m_g != 0
    d_ok = pc.m_f != 0
    if pc.min_abs_f == 0:
        none = Inapplicable("f vanishes on S")
        return GlobalBounds(none, none)
    if which == "primal":
        upper = (
            float(pc.M_f / pc.m_g / pc.min_abs_f**2) * ratio
            if l_ok else Inapplicable("some l_i = 0 (join matrix singular)")
        )
        if not l_ok:
            lower = Inapplicable("some l_i = 0 (join matrix singular)")
        elif not d_ok:
            lower = Inapplicable("some d_i = 0 (zero eigenvalue possible)")
        else:
            lower = float(pc.m_f / pc.M_g / pc.max_abs_f**2) / ratio
    elif which == "dual":
        if pc.M_g is None:
            none = Inapplicable("f vanishes; l is undefined")
            return GlobalBounds(none, none)
        upper = (
            float(pc.max_abs_f**2 * pc.M_g / pc.m_f) * ratio
            if d_ok else Inapplicable("some d_i = 0 (meet matrix singular)")
        )
        if not d_ok:
            lower = Inapplicable("some d_i = 0 (meet matrix singular)")
        elif not l_ok:
            lower = Inapplicable("some l_i = 0 (zero eigenvalue possible)")
        else:
            lower = float(pc.min_abs_f**2 * pc.m_g / pc.M_f) / ratio
    else:
        raise ValueError("which must be 'primal' or 'dual'")
    return GlobalBounds(upper, lower)


@dataclass(frozen=True)
class Disk:
    center: Fraction
    radius: Fraction

    def contains(self, z: complex, slack: float = 0.0) -> bool:
        return abs(complex(z) - float(self.center)) <= float(self.radius) + slack


def disks_of(matrix) -> list[Disk]:
    n = len(matrix)
    return [
        Disk(matrix[i][i], sum((abs(matrix[i][j]) for j in range(n) if j != i), Fraction(0)))
        for i in range(n)
    ]


def gerschgorin_disks(
    bundle: FactorizationBundle,
    which: Which = "primal",
    form: Literal["pencil", "reduced"] = "pencil",
) -> list[Disk]:
    """Exact Gerschgorin disks, one per element of ``S``.

    ``reduced`` takes the rows of ``L^-1 A`` (primal) or ``D^-1 B`` (dual),
    the matrices of the closed-form entry formulas.  ``pencil`` takes the rows
    of the similar matrix ``join^-1 meet`` (resp. ``meet^-1 join``).  Both
    disk unions contain the whole spectrum.
    """
    if not bundle.lower_closed:
        raise HypothesisError("local bounds need a lower closed subset")
    if form == "reduced":
        return disks_of(reduce(bundle, which))
    if form == "pencil":
        return disks_of(pencil_matrix(bundle, which))
    raise ValueError("form must be 'pencil' or 'reduced'")


def in_union(z: complex, disks: Sequence[Disk], slack: float = 0.0) -> bool:
    return any(dk.contains(z, slack) for dk in disks)


def fibonacci_factor(n: int) -> int:
    return fibonacci(n + 1) * (fibonacci(n + 3) - 2)


def fibonacci_bound(bundle: FactorizationBundle, which: Which = "primal") -> Bound:
    """``c_f^-1 m_g^-1 F_{n+1} (F_{n+3} - 2)`` (primal) or ``C_f m_f^-1 ...`` (dual)."""
    if not bundle.lower_closed:
        return Inapplicable("S is not lower closed")
    if not bundle.semimultiplicative:
        return Inapplicable("f is not semimultiplicative on S")
    pc = pencil_constants(bundle)
    if pc.c_f is None:
        return Inapplicable("join values of S are unavailable")
    fib = fibonacci_factor(bundle.n)
    if which == "primal":
        if pc.m_g is None or pc.m_g == 0:
            return Inapplicable("some l_i = 0 (join matrix singular)")
        if pc.c_f == 0:
            return Inapplicable("c_f = 0")
        return float(fib / (pc.c_f * pc.m_g))
    if which == "dual":
        if pc.m_f == 0:
            return Inapplicable("some d_i = 0 (meet matrix singular)")
        return float(fib * pc.C_f / pc.m_f)
    raise ValueError("which must be 'primal' or 'dual'")


@dataclass(frozen=True)
class GcdLcmBound:
    """Bounds on the GCD-over-LCM spectrum for a factor closed integer set.

    ``certified`` is the exact Möbius-sum bound.  ``omega_form`` replaces the
    row sums by ``2**omega`` (equal on factor closed sets) and ``tau_form``
    the total by ``sum tau``.  ``sqrt_form`` and ``robin_form`` use the
    leading terms of the average order of tau and are annotations only.
    """

    certified: float
    omega_form: float
    tau_form: float
    sqrt_form: float
    robin_form: float | None
    row_sums: tuple[int, ...]
    two_pow_omega: tuple[int, ...]
    tau_sum: int
    c_f: Fraction
    m_g: Fraction


def gcd_lcm_bound(S: Sequence[int], f=None, bundle: FactorizationBundle | None = None) -> GcdLcmBound:
    """Divisor-lattice bound for the primal problem.

    ``f`` is either a :class:`PointFunction` on ``S`` or a callable on
    integers; ``bundle`` may be passed to reuse an existing factorization.
    """
    S = list(S)
    if S != sorted(set(S)):
        raise ValueError("S must be sorted ascending without repeats")
    if not divisor.is_factor_closed(S):
        raise ValueError("S must be factor closed")
    if bundle is None:
        if f is None:
            raise ValueError("need f or a factorization bundle")
        if not isinstance(f, PointFunction):
            f = PointFunction(tuple(Fraction(f(x)) for x in S))
        bundle = factorize(WeightedSubset.whole(divisor.divisor_poset(S), f))
    pc = pencil_constants(bundle)
    if pc.m_g is None or pc.m_g == 0:
        raise HypothesisError("some l_i = 0; the LCM matrix is singular")
    if pc.c_f is None or pc.c_f == 0:
        raise HypothesisError("f is not semimultiplicative or vanishes on lcm values")
    rows = tuple(sum(abs(divisor.mobius(x // d)) for d in S if x % d == 0) for x in S)
    tpo = tuple(2 ** divisor.omega(x) for x in S)
    tau_sum = divisor.tau_partial_sum(S)
    scale = 1 / (pc.m_g * pc.c_f)
    certified = float(scale * max(rows) * sum(rows))
    omega_form = float(scale * max(tpo) * sum(tpo))
    tau_form = float(scale * max(tpo) * tau_sum.exact)
    xn = S[-1]
    sqrt_form = float(scale) * 2 * math.sqrt(xn) * tau_sum.average_order
    robin_form = float(scale) * divisor.robin_bound(xn) * tau_sum.average_order if xn > 70 else None
    return GcdLcmBound(
        certified, omega_form, tau_form, sqrt_form, robin_form,
        rows, tpo, tau_sum.exact, pc.c_f, pc.m_g,
    )
