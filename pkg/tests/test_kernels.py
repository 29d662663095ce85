import itertools

import numpy as np
import pytest

from idmtree import _kernels
from idmtree._kernels import _pykernels

compiled = pytest.mark.skipif("cython" not in _kernels.available(), reason="extension not built")


def test_use_roundtrip():
    before = _kernels.backend_name()
    assert _kernels.use("python") == before
    assert _kernels.backend_name() == "python"
    _kernels.use(before)
    with pytest.raises(ValueError):
        _kernels.use("fortran")


@compiled
@pytest.mark.parametrize("order", [0, 1, 2])
def test_polygamma_parity(order):
    from idmtree._kernels import _ckernels
    z = np.concatenate([np.geomspace(1e-3, 1e4, 400), np.arange(1, 50, 0.5)])
    py, cy = _pykernels.polygamma(order, z), _ckernels.polygamma(order, z)
    np.testing.assert_allclose(cy, py, rtol=1e-13, atol=0)


@compiled
@pytest.mark.parametrize("order", [0, 1, 2])
def test_h_family_parity(order):
    from idmtree._kernels import _ckernels
    u = np.linspace(0, 1, 501)
    for total in (1.0, 7.5, 41.0, 1001.0):
        np.testing.assert_allclose(_ckernels.h_family(order, u, total),
                                   _pykernels.h_family(order, u, total), rtol=1e-12, atol=1e-12)


@compiled
def test_strong_mask_parity():
    from idmtree._kernels import _ckernels
    rng = np.random.default_rng(0)
    for m in (2, 3, 5, 8, 12):
        edges = list(itertools.combinations(range(m), 2))
        ea = np.array([e[0] for e in edges], dtype=np.int64)
        eb = np.array([e[1] for e in edges], dtype=np.int64)
        for _ in range(20):
            lo = rng.random(len(edges))
            hi = lo + rng.random(len(edges)) * rng.random()
            dom = lo[:, None] > hi[None, :]
            np.fill_diagonal(dom, False)
            assert np.array_equal(_ckernels.strong_exact_mask(dom, ea, eb, m),
                                  _pykernels.strong_exact_mask(dom, ea, eb, m))
