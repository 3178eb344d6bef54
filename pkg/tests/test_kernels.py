"""Compiled and pure-Python kernels must agree step for step."""
import numpy as np
import pytest

from wardclust import _pykernels, kernels
from wardclust.core import DataMatrix, LinkageMethod

pytestmark = pytest.mark.skipif("compiled" not in kernels.BACKENDS, reason="compiled kernels not built")

METHODS = list(LinkageMethod)


CASES = [(m, k) for k in ("naive", "nnchain") for m in METHODS if k == "naive" or m.reducible]


@pytest.mark.parametrize("method,kernel", CASES, ids=lambda v: getattr(v, "value", v))
def test_backends_agree(method, kernel, rng):
    compiled = getattr(kernels.BACKENDS["compiled"], kernel)
    python = getattr(_pykernels, kernel)
    for _ in range(5):
        n = int(rng.integers(2, 70))
        data = DataMatrix(rng.uniform(size=(n, 3)))
        d = data.dissimilarities(squared=method.required_scale is not None and method is not LinkageMethod.WARD_D2)
        w = rng.uniform(0.5, 2.0, size=n)
        a = compiled(d.entries, n, method.code, w)
        b = python(d.entries, n, method.code, w)
        np.testing.assert_array_equal(a[0], b[0])
        np.testing.assert_array_equal(a[1], b[1])
        np.testing.assert_allclose(a[2], b[2], rtol=1e-13, atol=0)
        np.testing.assert_allclose(a[3], b[3], rtol=1e-13)


def test_inputs_not_mutated(rng):
    d = DataMatrix(rng.uniform(size=(10, 2))).dissimilarities()
    before = d.entries.copy()
    for backend in kernels.BACKENDS.values():
        backend.naive(d.entries, 10, 1, np.ones(10))
        backend.nnchain(d.entries, 10, 1, np.ones(10))
    np.testing.assert_array_equal(d.entries, before)


def test_backend_selection():
    assert kernels.get("python") is _pykernels
    with pytest.raises(ValueError):
        kernels.get("fortran")
