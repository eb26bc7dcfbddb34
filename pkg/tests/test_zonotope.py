from itertools import permutations

import pytest
from hypothesis import given, settings, strategies as st

from cfl.errors import NotIncreasing, PreconditionViolated
from cfl.zonotope import (
    CyclicConfiguration,
    check_cyclic,
    column_det,
    combinations_distinct,
    default_configuration,
    det,
    dot,
    normal,
    subset_point,
    veronese_configuration,
)


def leibniz(m):
    n = len(m)
    total = 0
    for perm in permutations(range(n)):
        inversions = sum(perm[i] > perm[j] for i in range(n) for j in range(i + 1, n))
        term = -1 if inversions % 2 else 1
        for r, c in enumerate(perm):
            term *= m[r][c]
        total += term
    return total


square = st.integers(1, 5).flatmap(
    lambda n: st.lists(st.lists(st.integers(-20, 20), min_size=n, max_size=n), min_size=n, max_size=n)
)


@settings(max_examples=200, deadline=None)
@given(square)
def test_det_matches_leibniz(m):
    assert det(m) == leibniz(m)


def test_det_edge_cases():
    assert det([]) == 1
    assert det([[0, 1], [1, 0]]) == -1
    assert det([[1, 2], [2, 4]]) == 0
    with pytest.raises(ValueError):
        det([[1, 2]])


@settings(max_examples=100, deadline=None)
@given(st.integers(2, 4).flatmap(lambda d: st.tuples(
    st.just(d),
    st.lists(st.lists(st.integers(-9, 9), min_size=d, max_size=d), min_size=d, max_size=d),
)))
def test_normal_is_generalized_cross_product(case):
    d, cols = case
    h = normal(cols[:-1], d)
    assert dot(h, cols[-1]) == column_det(cols[:-1] + [cols[-1]])


def test_veronese_vectors():
    assert veronese_configuration((0, 1, 2, 3), 2).vectors == ((1, 0), (1, 1), (1, 2), (1, 3))
    assert (1, 3, 9) in veronese_configuration((0, 1, 2, 3), 3).vectors


@pytest.mark.parametrize("t, d, error", [((1, 1, 2), 2, NotIncreasing), ((0, 1), 3, PreconditionViolated)])
def test_veronese_rejects(t, d, error):
    with pytest.raises(error):
        veronese_configuration(t, d)


@pytest.mark.parametrize(
    "config, expected",
    [
        (veronese_configuration((0, 1, 2, 3), 3), True),
        (CyclicConfiguration(((1, 0), (1, -1)), 2), False),
        (veronese_configuration((0, 2, 5), 2), True),
        (CyclicConfiguration(((2, 0), (1, 1)), 2), False),
    ],
)
def test_check_cyclic(config, expected):
    assert check_cyclic(config) is expected


@settings(max_examples=50, deadline=None)
@given(st.lists(st.integers(-30, 30), min_size=2, max_size=7, unique=True), st.integers(1, 4))
def test_veronese_is_cyclic_and_projects(ts, d):
    ts = sorted(ts)
    if len(ts) < d:
        return
    config = veronese_configuration(ts, d)
    assert check_cyclic(config)
    if d >= 2:
        assert check_cyclic(config.project())


def test_subset_points():
    config = veronese_configuration((0, 1, 2, 3), 2)
    assert subset_point(config, []) == (0, 0)
    assert subset_point(config, [2, 4]) == (2, 4)
    assert subset_point(config, [1, 2, 3, 4]) == (4, 6)


def test_default_configuration_respaces_on_collision():
    # 0 + 3 = 1 + 2 makes t = 0..3 ambiguous as a vertex labeling in dimension 2
    assert not combinations_distinct(veronese_configuration(range(4), 2))
    config = default_configuration(4, 2)
    assert config.t == (1, 2, 4, 8)
    assert combinations_distinct(config)


def test_default_configuration_keeps_distinct_points():
    config = default_configuration(3, 2)
    assert config.t == (0, 1, 2)


def test_lift_and_delete():
    config = veronese_configuration((0, 1, 2, 3), 2)
    up = config.lift()
    assert up.d == 3 and up.vectors[3] == (1, 3, 9)
    assert config.delete(2).t == (0, 2, 3)
    assert config.restrict([1, 4]).vectors == ((1, 0), (1, 3))
    with pytest.raises(PreconditionViolated):
        CyclicConfiguration(((1, 0),), 2).lift()


def test_orientation_cache_consistent():
    config = default_configuration(5, 3)
    assert config.orientation([1, 2, 3]) == 1
    assert config.orientation([2, 1, 3]) == -1
