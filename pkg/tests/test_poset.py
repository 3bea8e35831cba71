from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import EX1_COVERS, EX1_E, Box, box_dims, down_closure
from latspec import rational as rq
from latspec.errors import CycleError, HypothesisError, OrderingError, PosetError
from latspec.poset import (
    FinitePoset,
    chain,
    check_subset,
    convolve,
    delta,
    from_covers,
    is_lower_closed,
    is_meet_closed,
    join,
    linear_extension,
    lower_closure,
    meet,
    meet_closure,
    mobius_matrix,
    mu,
    restricted_convolution,
    zeta,
    zeta_matrix,
)


def ex1():
    return from_covers(8, [(a - 1, b - 1) for a, b in EX1_COVERS], [1, 2, 3, 6, 4, 5, 8, 10])


def test_example1_zeta_matrix_is_expected_E():
    p, _ = ex1()
    E = zeta_matrix(p, range(8))
    assert ["".join(str(int(x)) for x in row) for row in E] == EX1_E


def test_chain_mobius():
    p = chain(4)
    assert [p.mobius(0, j) for j in range(4)] == [1, -1, 0, 0]


def test_covers_round_trip():
    p, _ = ex1()
    assert sorted(p.covers) == sorted((a - 1, b - 1) for a, b in EX1_COVERS)


def test_resorting_records_labels_and_permutes_f():
    # 0 above 1: not a linear extension
    p, f = from_covers(2, [(1, 0)], [5, 7])
    assert p.labels == (1, 0)
    assert f.values == (Fraction(7), Fraction(5))
    with pytest.raises(OrderingError):
        from_covers(2, [(1, 0)], [5, 7], strict=True)


def test_cycles_rejected():
    with pytest.raises(CycleError):
        from_covers(2, [(0, 0)])
    with pytest.raises(CycleError) as exc:
        from_covers(3, [(0, 1), (1, 2), (2, 1)])
    assert set(exc.value.cycle) >= {1, 2}


def test_bad_index():
    with pytest.raises(PosetError):
        from_covers(2, [(0, 2)])


def test_nonreflexive_relation_rejected():
    with pytest.raises(PosetError):
        FinitePoset(((False,),))


def test_meets_and_joins_example1():
    p, _ = ex1()
    assert meet(p, 1, 2) == 0 and join(p, 1, 2) == 3
    assert meet(p, 5, 6) == 4 and join(p, 5, 6) == 7


def test_missing_join_in_example2_shape():
    # two maximal elements above a bottom: no join
    p, _ = from_covers(3, [(0, 1), (0, 2)])
    assert join(p, 1, 2) is None and meet(p, 1, 2) == 0


def test_subset_checks():
    p, _ = ex1()
    with pytest.raises(PosetError):
        check_subset(p, [0, 0])
    with pytest.raises(OrderingError):
        check_subset(p, [3, 1])
    assert is_lower_closed(p, [0, 1])
    assert not is_lower_closed(p, [0, 3])
    assert is_meet_closed(p, [0, 3])
    assert not is_meet_closed(p, [1, 2])
    assert meet_closure(p, [1, 2]) == (0, 1, 2)
    assert lower_closure(p, [3]) == (0, 1, 2, 3)
    with pytest.raises(HypothesisError):
        mobius_matrix(p, [0, 3])


def test_linear_extension_is_stable():
    assert linear_extension(3, [(0, 2)]) == [0, 1, 2]


@settings(max_examples=60, deadline=None)
@given(box_dims(max_points=18))
def test_mobius_table_matches_product_formula(dims):
    box = Box(dims, [[1] * d for d in dims])
    p = box.poset
    for a, x in enumerate(box.points):
        for b, y in enumerate(box.points):
            assert p.mobius(a, b) == box.mobius(x, y)


@settings(max_examples=30, deadline=None)
@given(box_dims(max_points=12))
def test_mu_inverts_zeta(dims):
    p = Box(dims, [[1] * d for d in dims]).poset
    assert convolve(mu(p), zeta(p)) == delta(p)
    assert convolve(zeta(p), mu(p)) == delta(p)


@settings(max_examples=40, deadline=None)
@given(box_dims(max_points=16), st.data())
def test_mobius_matrix_inverts_zeta_on_lower_closed(dims, data):
    box = Box(dims, [[1] * d for d in dims])
    gens = data.draw(st.lists(st.sampled_from(box.points), min_size=1, max_size=3))
    S = box.subset(down_closure(gens))
    E = zeta_matrix(box.poset, S)
    assert rq.matmul(E, mobius_matrix(box.poset, S)) == rq.identity(len(S))


def test_restricted_convolution_chain():
    # Möbius inversion on a chain is the first difference
    p = chain(4)
    from latspec.poset import PointFunction

    f = PointFunction((Fraction(1), Fraction(3), Fraction(4), Fraction(10)))
    assert restricted_convolution(f, p) == (1, 2, 1, 6)


@st.composite
def random_dags(draw, n_max=10):
    n = draw(st.integers(1, n_max))
    covers = [(a, b) for a in range(n) for b in range(a + 1, n) if draw(st.integers(0, 3)) == 0]
    return n, covers


@settings(max_examples=100, deadline=None)
@given(random_dags(12))
def test_generated_orders_are_partial_orders(dag):
    n, covers = dag
    p, _ = from_covers(n, covers)
    L = p.leq
    for i in range(n):
        assert L[i][i]
        for j in range(n):
            if L[i][j] and L[j][i]:
                assert i == j
            for k in range(n):
                if L[i][j] and L[j][k]:
                    assert L[i][k]


@settings(max_examples=100, deadline=None)
@given(random_dags(10), st.data())
def test_zeta_matrix_is_in_K(dag, data):
    n, covers = dag
    p, _ = from_covers(n, covers)
    S = sorted(data.draw(st.sets(st.integers(0, n - 1), min_size=1)))
    E = zeta_matrix(p, S)
    for i, row in enumerate(E):
        assert row[i] == 1
        assert all(x in (0, 1) for x in row)
        assert all(x == 0 for x in row[i + 1:])


@st.composite
def incidence_triples(draw):
    from latspec.poset import IncidenceFunction

    n, covers = draw(random_dags(10))
    p, _ = from_covers(n, covers)
    vals = st.fractions(min_value=-4, max_value=4, max_denominator=3)

    def one():
        return IncidenceFunction(p, {(x, y): draw(vals) for x in range(n) for y in p.up(x)})

    return p, one(), one(), one()


@settings(max_examples=100, deadline=None)
@given(incidence_triples())
def test_convolution_associative_and_unital(t):
    p, f, g, h = t
    assert convolve(convolve(f, g), h) == convolve(f, convolve(g, h))
    assert convolve(delta(p), f) == f == convolve(f, delta(p))


@settings(max_examples=100, deadline=None)
@given(box_dims(max_points=16), st.data())
def test_lower_closed_d_is_mobius_inversion(dims, data):
    from latspec.factory import WeightedSubset, factorize
    from latspec.poset import PointFunction

    box = Box(dims, [[1] * d for d in dims])
    vals = data.draw(st.lists(st.fractions(min_value=-5, max_value=5, max_denominator=3),
                              min_size=len(box.points), max_size=len(box.points)))
    vals[0] = Fraction(1)
    f = PointFunction(tuple(vals))
    gens = data.draw(st.lists(st.sampled_from(box.points), min_size=1, max_size=3))
    S = box.subset(down_closure(gens))
    b = factorize(WeightedSubset(box.poset, S, f))
    h = restricted_convolution(f, box.poset)
    assert b.d == tuple(h[x] for x in S)
    # f(x_i) is the sum of d_j over j with x_j <= x_i
    for i, x in enumerate(S):
        assert f[x] == sum(b.d[j] for j, y in enumerate(S) if box.poset.leq[y][x])
