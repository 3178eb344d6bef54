import itertools

import numpy as np
import pytest

from wardclust.core import (DataMatrix, Dendrogram, DissimilarityMatrix, LinkageMethod, Partition, Scale,
                            ScaleError, ValidationError, condensed_index, leaf_sizes, n_from_condensed,
                            validate)


def enumerate_pairs(n):
    """Condensed order written out longhand: row-major over i < j."""
    return [(i, j) for i in range(n) for j in range(i + 1, n)]


def test_condensed_index_examples():
    assert condensed_index(0, 1, 3) == 0
    assert enumerate_pairs(3).index((1, 2)) == 2
    assert condensed_index(1, 2, 3) == 2
    assert condensed_index(2, 1, 3) == 2


@pytest.mark.parametrize("n", [2, 3, 7, 50])
def test_condensed_index_is_bijection(n):
    pairs = enumerate_pairs(n)
    got = [condensed_index(i, j, n) for i, j in pairs]
    assert got == list(range(n * (n - 1) // 2))
    assert all(condensed_index(j, i, n) == condensed_index(i, j, n) for i, j in pairs)


def test_condensed_index_errors():
    with pytest.raises(ValueError):
        condensed_index(1, 1, 3)
    with pytest.raises(IndexError):
        condensed_index(0, 3, 3)
    with pytest.raises(IndexError):
        condensed_index(-1, 0, 3)


def test_n_from_condensed():
    assert [n_from_condensed(m) for m in (0, 1, 3, 6, 190)] == [1, 2, 3, 4, 20]
    with pytest.raises(ValueError):
        n_from_condensed(4)


def test_validate_ok_and_errors():
    assert validate(np.ones((3, 2))) == []
    bad = np.ones((3, 2))
    bad[1, 0] = np.nan
    problems = validate(bad)
    assert len(problems) == 1 and "row 1, column 0" in problems[0]
    assert validate((np.ones((3, 2)), [1, 1, 0])) == ["non-positive mass at row 2"]
    assert "empty" in validate(np.empty((0, 2)))[0]


def test_data_matrix_reports_every_violation():
    values = np.ones((3, 2))
    values[0, 1] = np.inf
    with pytest.raises(ValidationError) as err:
        DataMatrix(values, masses=[1, -1, 1])
    assert len(err.value.problems) == 2


def test_data_matrix_is_immutable():
    x = DataMatrix([[0.0, 1.0]])
    with pytest.raises(ValueError):
        x.values[0, 0] = 3.0


def test_dissimilarity_from_data_matches_bruteforce(rng):
    x = DataMatrix(rng.normal(size=(6, 3)))
    d = x.dissimilarities()
    d2 = x.dissimilarities(squared=True)
    for i, j in itertools.combinations(range(6), 2):
        assert d[i, j] == pytest.approx(np.linalg.norm(x.values[i] - x.values[j]), rel=1e-14)
        assert d2[i, j] == pytest.approx(((x.values[i] - x.values[j]) ** 2).sum(), rel=1e-14)
    assert d.scale is Scale.PLAIN and d2.scale is Scale.SQUARED
    assert d[2, 2] == 0.0


def test_dissimilarity_validation():
    with pytest.raises(ValidationError):
        DissimilarityMatrix(3, [1.0, -1.0, 2.0])
    with pytest.raises(ValidationError):
        DissimilarityMatrix(3, [1.0, 2.0])
    with pytest.raises(ValidationError):
        DissimilarityMatrix.from_square([[0, 1], [2, 0]])
    with pytest.raises(ValidationError):
        DissimilarityMatrix.from_square([[1, 1], [1, 0]])


def test_scale_conversions():
    d = DissimilarityMatrix(3, [1.0, 2.0, 3.0])
    assert np.array_equal(d.squared().entries, [1.0, 4.0, 9.0])
    assert np.array_equal(d.squared().rooted().entries, d.entries)
    with pytest.raises(ScaleError):
        d.rooted()
    with pytest.raises(ScaleError):
        d.squared().squared()


def test_square_round_trip(rng):
    d = DataMatrix(rng.random((5, 2))).dissimilarities()
    back = DissimilarityMatrix.from_square(d.to_square())
    assert np.array_equal(back.entries, d.entries)


def test_linkage_method_flags():
    assert [m for m in LinkageMethod if m.takes_root] == [LinkageMethod.WARD_D2]
    assert {m for m in LinkageMethod if not m.reducible} == {LinkageMethod.CENTROID, LinkageMethod.MEDIAN}
    assert LinkageMethod.parse("ward.D2") is LinkageMethod.WARD_D2
    assert LinkageMethod.parse("ward_d") is LinkageMethod.WARD_D
    with pytest.raises(ValueError):
        LinkageMethod.parse("weighted")


def test_dendrogram_invariants():
    ok = Dendrogram(3, ((0, 1, 1.0, 2.0), (3, 2, 5.0, 3.0)), "ward.D")
    assert ok.order == (0, 1, 2)
    assert leaf_sizes(3, ok.steps)[-1] == 3
    with pytest.raises(ValidationError):
        Dendrogram(3, ((0, 1, 1.0, 2.0), (0, 2, 5.0, 3.0)), "ward.D")  # leaf 0 reused
    with pytest.raises(ValidationError):
        Dendrogram(3, ((0, 1, 1.0, 2.0), (3, 2, 5.0, 4.0)), "ward.D")  # bad size
    with pytest.raises(ValidationError):
        Dendrogram(3, ((0, 1, 1.0, 2.0),), "ward.D")


def test_partition():
    p = Partition([0, 1, 1, 0])
    assert p.k == 2
    assert list(p.members(1)) == [1, 2]
    with pytest.raises(ValidationError):
        Partition([0, 2, 2])
