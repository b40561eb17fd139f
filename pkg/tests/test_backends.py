import numpy as np
import pytest

from energyclust import _backend, _fallback
from energyclust.energy import energy_distance_vstat

needs_ext = pytest.mark.skipif("cython" not in _backend.BACKENDS, reason="compiled extension not built")


def test_python_backend_always_available():
    assert _backend.get_backend("python") is _fallback
    with pytest.raises(ValueError):
        _backend.get_backend("fortran")


@pytest.mark.parametrize("shape", [(1, 1), (7, 1), (300, 1), (40, 3), (600, 2)])
def test_fallback_matches_brute_force(shape, rng):
    a = np.ascontiguousarray(rng.standard_normal(shape))
    b = np.ascontiguousarray(rng.standard_normal((shape[0] + 3, shape[1])))
    s = _fallback.distance_sum(a, b)
    exact = sum(np.sqrt(((a[i] - b) ** 2).sum(axis=1)).sum() for i in range(a.shape[0]))
    assert s == pytest.approx(exact, rel=1e-12)


@needs_ext
@pytest.mark.parametrize("shape", [(1, 1), (9, 1), (513, 1), (40, 3), (700, 4)])
def test_backends_agree(shape, rng):
    cy, py = _backend.get_backend("cython"), _fallback
    a = np.ascontiguousarray(rng.standard_normal(shape))
    b = np.ascontiguousarray(rng.standard_normal((shape[0] // 2 + 1, shape[1])) + 0.5)
    for x, y in ((a, b), (a, a), (b, a)):
        assert cy.distance_sum(x, y) == pytest.approx(py.distance_sum(x, y), rel=1e-12)
    if shape[1] == 1:
        u, v = a[:, 0].copy(), b[:, 0].copy()
        for sigma in (0.1, 1.0, 7.0):
            assert cy.gaussian_kernel_sum(u, v, sigma) == pytest.approx(py.gaussian_kernel_sum(u, v, sigma), rel=1e-12)


@needs_ext
def test_extension_rejects_mismatched_dims(rng):
    cy = _backend.get_backend("cython")
    with pytest.raises(ValueError):
        cy.distance_sum(np.ones((3, 2)), np.ones((3, 3)))


def test_forced_python_backend(monkeypatch, rng):
    y, z = rng.standard_normal((50, 2)), rng.standard_normal((40, 2))
    expected = energy_distance_vstat(y, z)
    monkeypatch.setattr(_backend, "distance_sum", _fallback.distance_sum)
    assert energy_distance_vstat(y, z) == pytest.approx(expected, rel=1e-12)
    assert energy_distance_vstat(y, y) == 0.0
