from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import (
    EX1_COVERS,
    EX1_E,
    EX1_F,
    EX2_E,
    Box,
    entrywise,
    fr,
    lower_closed_instances,
    meet_closed_instances,
)
from latspec.errors import HypothesisError, MissingMeetError, PosetError
from latspec.factory import (
    Definiteness,
    WeightedSubset,
    definiteness,
    factorize,
    is_semimultiplicative,
    join_matrix,
    meet_matrix,
    residual_owner,
)
from latspec.poset import PointFunction, from_covers
from latspec.report import fixture_text, parse_poset_file


def fixture_bundle(name):
    parsed = parse_poset_file(fixture_text(name))
    return factorize(WeightedSubset(parsed.poset, parsed.subset, parsed.f))


def bits(E):
    return ["".join(str(int(x)) for x in row) for row in E]


def test_example1_factors_exact():
    b = fixture_bundle("example1")
    assert bits(b.E) == EX1_E
    assert b.r == tuple(fr(EX1_F))
    assert b.d == tuple(fr([1, 1, 2, 2, -2, 1, 4, 1]))
    assert b.l == tuple(fr([1, "-1/2", "-2/3", "1/3", "1/12", "-1/20", "-1/8", "1/40"]))
    assert b.meet_identity and b.join_identity and b.semimultiplicative


def test_example2_factors_exact():
    b = fixture_bundle("example2")
    assert bits(b.E) == EX2_E
    assert b.r == tuple(fr([1, 2, 4, 8, 4, 6, 6, 4, 3, 5, 9, 45]))
    assert b.d == tuple(fr([1, 1, 3, 3, -4, -2, 4, 2, -5, 2, 6, 34]))
    assert b.l == tuple(
        fr([1, "-1/2", "-3/4", "3/8", "1/8", "1/24", "-1/8", "-1/24", "5/24", "-2/15", "-2/9", "2/45"])
    )


def test_example2_is_lower_closed_but_not_a_lattice():
    b = fixture_bundle("example2")
    assert b.lower_closed and not b.meet_closed
    assert b.meet_identity is None
    # f(4 meet 9)... a concrete failing pair: elements 10 and 11 (0-based 9, 10)
    holds, pair = is_semimultiplicative(b.ws)
    assert not holds and pair == (9, 10)
    with pytest.raises(MissingMeetError):
        meet_matrix(b.ws)


def test_refuses_sets_neither_meet_nor_lower_closed():
    p, f = from_covers(4, [(0, 1), (0, 2), (1, 3), (2, 3)], [1, 2, 3, 6])
    with pytest.raises(HypothesisError):
        factorize(WeightedSubset(p, (1, 2), f))


def test_needs_least_element():
    p, f = from_covers(2, [], [1, 1])
    with pytest.raises(HypothesisError):
        factorize(WeightedSubset.whole(p, f))


def test_f_must_cover_poset():
    p, _ = from_covers(2, [(0, 1)])
    with pytest.raises(PosetError):
        WeightedSubset(p, (0,), PointFunction((Fraction(1),)))


def test_vanishing_f_leaves_l_undefined():
    p, f = from_covers(2, [(0, 1)], [1, 0])
    b = factorize(WeightedSubset.whole(p, f))
    assert b.l is None and b.d == (1, -1)
    with pytest.raises(HypothesisError):
        b.L


def test_definiteness_from_diagonal():
    b = fixture_bundle("example1")
    meet_def, join_def = definiteness(b)
    assert meet_def is Definiteness.OTHER and join_def is Definiteness.OTHER
    box = Box([3], [[1, 2, 3]])
    b = factorize(box.weighted(box.points))
    assert definiteness(b)[0] is Definiteness.POSITIVE_DEFINITE


@settings(max_examples=200, deadline=None)
@given(meet_closed_instances())
def test_identities_on_meet_closed(inst):
    box, pts = inst
    b = factorize(box.weighted(pts))
    M, J, order = entrywise(box, pts)
    assert b.meet == tuple(map(tuple, M))
    assert b.join == tuple(map(tuple, J))
    n = len(order)
    for i in range(n):
        for j in range(n):
            assert M[i][j] * J[i][j] == box.value(order[i]) * box.value(order[j])


@settings(max_examples=100, deadline=None)
@given(lower_closed_instances())
def test_residual_sets_partition(inst):
    box, pts = inst
    ws = box.weighted(pts)
    owner = residual_owner(box.poset, ws.subset)
    assert set(owner) == set(ws.subset)
    # on a lower closed set the i-th residual set is {x_i}
    assert all(ws.subset[i] == z for z, i in owner.items())


@settings(max_examples=100, deadline=None)
@given(lower_closed_instances())
def test_entrywise_matrices(inst):
    box, pts = inst
    M, J, _ = entrywise(box, pts)
    ws = box.weighted(pts)
    assert meet_matrix(ws) == tuple(map(tuple, M))
    assert join_matrix(ws) == tuple(map(tuple, J))


@settings(max_examples=200, deadline=None)
@given(meet_closed_instances(max_n=12), st.data())
def test_meet_identity_any_rational_f(inst, data):
    box, pts = inst
    vals = data.draw(st.lists(st.fractions(min_value=-6, max_value=6, max_denominator=4),
                              min_size=len(box.points), max_size=len(box.points)))
    ws = WeightedSubset(box.poset, box.subset(pts), PointFunction(tuple(vals)))
    b = factorize(ws)
    order = sorted(pts, key=lambda p: (sum(p), p))
    M = [[vals[box.index[box.meet(a, c)]] for c in order] for a in order]
    assert b.meet == tuple(map(tuple, M))


@settings(max_examples=100, deadline=None)
@given(lower_closed_instances(kind="any"), st.data())
def test_join_invertible_iff_l_nonzero(inst, data):
    from latspec import rational as rq

    box, pts = inst
    # allow repeated chain weights so some l_i vanish
    w = [[Fraction(1)] + [Fraction(data.draw(st.sampled_from([1, 2, 3]))) for _ in range(d - 1)]
         for d in box.dims]
    box = Box(box.dims, w)
    b = factorize(box.weighted(pts))
    _, J, _ = entrywise(box, pts)
    assert (rq.determinant(rq.as_matrix(J)) != 0) == all(x != 0 for x in b.l)
