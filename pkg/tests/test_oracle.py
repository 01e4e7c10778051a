"""Hand-checked fixtures pinning the reference implementation itself."""

from domscan.monoids import COUNT, MAX, SUM
from domscan.oracle import brute_force, brute_force_ranks
from domscan.pipeline import data_point, query_point


def test_no_point_strictly_below_in_both_coordinates():
    data = [data_point(0, (1, 2)), data_point(1, (2, 1))]
    assert brute_force(data, [query_point(2, (2, 2))], COUNT) == {2: 0}


def test_single_dominated_point_weight():
    data = [data_point(0, (0, 0), 5)]
    assert brute_force(data, [query_point(1, (1, 1))], SUM) == {1: 5}


def test_empty_data_gives_unit():
    assert brute_force([], [query_point(0, (1, 1))], SUM) == {0: 0}
    assert brute_force([], [query_point(0, (1, 1))], MAX) == {0: float("-inf")}


def test_three_point_count_fixture():
    # (1,1) is below (3,3), (2,2) and (4,4); (2,3) and (3,2) only below (4,4)
    data = [data_point(0, (1, 1)), data_point(1, (2, 3)), data_point(2, (3, 2))]
    queries = [query_point(3, (3, 3)), query_point(4, (2, 2)), query_point(5, (4, 4))]
    assert brute_force(data, queries, COUNT) == {3: 1, 4: 1, 5: 3}


def test_max_fixture_ignores_ties():
    data = [data_point(0, (1, 1), 3), data_point(1, (2, 2), 7)]
    queries = [query_point(2, (3, 3)), query_point(3, (2, 2)), query_point(4, (0, 0))]
    assert brute_force(data, queries, MAX) == {2: 7, 3: 3, 4: float("-inf")}


def test_brute_force_ranks():
    assert brute_force_ranks([5, 2, 5, 7]) == [2, 1, 2, 3]
    assert brute_force_ranks([1]) == [1]
    assert brute_force_ranks([3, 3]) == [1, 1]
