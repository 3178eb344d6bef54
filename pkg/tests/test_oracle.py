import math

import numpy as np
import pytest

from wardclust.analysis import topology_equal
from wardclust.core import DataMatrix, Dendrogram
from wardclust.criteria import error_sum_of_squares
from wardclust.engine import agglomerate_naive, agglomerate_nnchain, transform_heights
from wardclust.linkage import ward_weighted_input
from wardclust.oracle import compare_with_engine, greedy_ess_agglomerate


def test_three_point_trace(three_points):
    trace = greedy_ess_agglomerate(three_points)
    assert [(s.left, s.right) for s in trace.steps] == [(0, 1), (3, 2)]
    assert trace.delta_ess == pytest.approx([0.5, 361 / 6], rel=1e-14)
    assert [s.criterion for s in trace.steps] == pytest.approx([0.5, 361 / 6], rel=1e-14)
    assert trace.delta_ess.sum() == pytest.approx(182 / 3, rel=1e-14)
    assert trace.steps[-1].centroid == pytest.approx([11 / 3])
    assert trace.steps[-1].size == 3.0


def test_two_points():
    trace = greedy_ess_agglomerate(DataMatrix([[0.0, 0.0], [3.0, 4.0]]))
    assert len(trace.steps) == 1
    assert trace.steps[0].delta_ess == pytest.approx(25 / 2)


def test_oracle_errors():
    with pytest.raises(ValueError):
        greedy_ess_agglomerate(DataMatrix([[1.0]]))
    with pytest.raises(ValueError):
        greedy_ess_agglomerate(DataMatrix(np.zeros((5, 1))), max_n=4)


def test_compare_three_points(three_points):
    trace = greedy_ess_agglomerate(three_points)
    d1 = agglomerate_naive(three_points.dissimilarities(squared=True), "ward.D")
    cmp = compare_with_engine(trace, d1)
    assert cmp.topology_equal and cmp.max_relative_deviation < 1e-15
    d2 = agglomerate_naive(three_points.dissimilarities(), "ward.D2")
    cmp = compare_with_engine(trace, d2)
    assert cmp.topology_equal and cmp.max_relative_deviation < 1e-12
    cmp = compare_with_engine(trace, transform_heights(d1, "sqrt"))
    assert cmp.ok(1e-12)


def test_compare_leaf_mismatch(three_points):
    trace = greedy_ess_agglomerate(three_points)
    other = Dendrogram(2, ((0, 1, 1.0, 2.0),), "ward.D")
    with pytest.raises(ValueError):
        compare_with_engine(trace, other)


def test_compare_detects_wrong_topology(three_points):
    trace = greedy_ess_agglomerate(three_points)
    wrong = Dendrogram(3, ((0, 2, 1.0, 2.0), (3, 1, 120.0, 3.0)), "ward.D")
    assert not compare_with_engine(trace, wrong).topology_equal


@pytest.mark.parametrize("seed", range(8))
def test_oracle_matches_engine_and_telescopes(seed):
    rng = np.random.default_rng(seed)
    data = DataMatrix(rng.normal(size=(int(rng.integers(3, 50)), int(rng.integers(1, 6)))))
    trace = greedy_ess_agglomerate(data)
    dend = agglomerate_nnchain(data.dissimilarities(squared=True), "ward.D")
    assert compare_with_engine(trace, dend).ok(1e-9)
    total = error_sum_of_squares(data, range(data.n))
    assert trace.delta_ess.sum() == pytest.approx(total, rel=1e-10)
    assert np.all(np.diff(trace.delta_ess) >= -1e-12 * total)
    # the two cost formulas inside the oracle agree
    assert trace.delta_ess == pytest.approx([s.criterion for s in trace.steps], rel=1e-9)


def test_oracle_with_masses_matches_scaled_engine(rng):
    data = DataMatrix(rng.normal(size=(20, 3)), masses=rng.uniform(0.3, 3.0, size=20))
    trace = greedy_ess_agglomerate(data)
    start = ward_weighted_input(data.dissimilarities(squared=True), data.masses)
    dend = agglomerate_nnchain(start, "ward.D", masses=data.masses)
    cmp = compare_with_engine(trace, dend)
    assert cmp.ok(1e-9), cmp
