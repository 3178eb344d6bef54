import json

import numpy as np
import pytest

from wardclust import io as wio
from wardclust.core import DataMatrix, Dendrogram, DissimilarityMatrix, HeightScale, Scale
from wardclust.engine import agglomerate_naive, agglomerate_nnchain, transform_heights


@pytest.fixture
def ward_tree(three_points):
    return agglomerate_naive(three_points.dissimilarities(squared=True), "ward.D")


def test_ingest_data(tmp_path):
    path = tmp_path / "x.csv"
    path.write_text("name,a,b\np,0,0\nq,3,4\n")
    data = wio.ingest(path, "data")
    assert data.row_labels == ("p", "q")
    assert np.array_equal(data.values, [[0, 0], [3, 4]])
    path.write_text("0,0\n3,4\n")
    assert wio.ingest(path, "data").row_labels is None


def test_ingest_reports_bad_cell_line(tmp_path):
    path = tmp_path / "x.csv"
    path.write_text("a,b\n1,2\n3,oops\n")
    with pytest.raises(wio.ParseError, match="line 3"):
        wio.ingest(path, "data")
    path.write_text("1,2\n3\n")
    with pytest.raises(wio.ParseError, match="line 2"):
        wio.ingest(path, "data")


def test_ingest_nonfinite_lists_every_problem(tmp_path):
    path = tmp_path / "x.csv"
    path.write_text("1,nan\ninf,2\n")
    with pytest.raises(ValueError) as info:
        wio.ingest(path, "data")
    assert "row 0, column 1" in str(info.value) and "row 1, column 0" in str(info.value)


def test_ingest_square_dissimilarity(tmp_path):
    path = tmp_path / "d.csv"
    path.write_text(",a,b,c\na,0,1,10\nb,1,0,9\nc,10,9,0\n")
    d = wio.ingest(path, "dissim")
    assert d.n == 3 and list(d.entries) == [1, 10, 9] and d.labels == ("a", "b", "c")
    assert wio.ingest(path, "dissim", Scale.SQUARED).scale is Scale.SQUARED


def test_ingest_asymmetric_names_pair(tmp_path):
    path = tmp_path / "d.csv"
    path.write_text("0,1,10\n1,0,9\n10,8,0\n")
    with pytest.raises(ValueError, match=r"\(1, 2\)|1.*2"):
        wio.ingest(path, "dissim")


def test_ingest_condensed(tmp_path):
    path = tmp_path / "d.csv"
    path.write_text("# n=3\n1\n10\n9\n")
    assert list(wio.ingest(path, "dissim").entries) == [1, 10, 9]
    path.write_text("1,10,9\n")
    assert wio.ingest(path, "dissim").n == 3
    path.write_text("# n=4\n1\n10\n9\n")
    with pytest.raises(wio.ParseError):
        wio.ingest(path, "dissim")
    path.write_text("1\n2\n")
    with pytest.raises(wio.ParseError):
        wio.ingest(path, "dissim")


def test_ingest_unknown_kind(tmp_path):
    path = tmp_path / "d.csv"
    path.write_text("1\n")
    with pytest.raises(ValueError):
        wio.ingest(path, "tree")


def test_merge_table(ward_tree):
    lines = wio.merge_table(ward_tree).splitlines()
    assert lines[0].startswith("# leaves are 0..n-1")
    assert lines[1:] == ["left,right,height,size", "0,1,1,2", "3,2,120.3333,3"]


def test_newick_two_leaves():
    dend = agglomerate_naive(DissimilarityMatrix(2, [2.0], Scale.SQUARED), "ward.D")
    assert wio.newick(dend) == "(0:2.0,1:2.0);"


def test_newick_three_points(ward_tree):
    h = 361 / 3
    assert wio.newick(ward_tree) == f"((0:1.0,1:1.0):{h - 1.0!r},2:{h!r});"


def test_newick_quotes_labels():
    d = DissimilarityMatrix(2, [1.0], labels=["a b", "c"])
    dend = agglomerate_naive(d, "single")
    assert wio.newick(dend) == "('a b':1.0,c:1.0);"


def test_json_round_trip(ward_tree, rng):
    back = wio.from_json(wio.to_json(ward_tree))
    assert back == ward_tree and back.metadata == ward_tree.metadata
    rooted = transform_heights(ward_tree, "sqrt")
    assert wio.from_json(wio.to_json(rooted)).height_scale is HeightScale.SQRT
    data = DataMatrix(rng.normal(size=(12, 2)), masses=rng.uniform(1, 2, size=12))
    weighted = agglomerate_nnchain(data.dissimilarities(squared=True), "ward.D", data.masses)
    assert wio.from_json(wio.to_json(weighted)).masses == weighted.masses


def test_json_rejects_foreign_documents():
    with pytest.raises(wio.ParseError):
        wio.from_json(json.dumps({"n": 2}))
    doc = {"format": wio.JSON_FORMAT, "n": 2, "method": "ward.D", "height_scale": "raw",
           "steps": [[0, 0, 1.0, 2.0]], "order": [0, 1]}
    with pytest.raises(wio.ParseError):
        wio.from_json(json.dumps(doc))


def test_exports_are_deterministic(rng):
    data = DataMatrix(rng.uniform(size=(30, 2)))
    d = data.dissimilarities()
    for fmt in wio.FORMATS:
        a = wio.export(agglomerate_nnchain(d, "ward.D2"), fmt)
        b = wio.export(agglomerate_nnchain(d, "ward.D2"), fmt)
        assert a == b and len(a) > 0
    with pytest.raises(ValueError):
        wio.export(agglomerate_nnchain(d, "ward.D2"), "pdf")


def test_svg_is_wellformed(ward_tree):
    import xml.etree.ElementTree as ET

    root = ET.fromstring(wio.svg(ward_tree))
    assert root.tag.endswith("svg")
    assert len(root.findall(".//{http://www.w3.org/2000/svg}path")) == 2
