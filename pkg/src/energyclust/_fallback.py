"""Pure numpy versions of the compiled kernels in ``_kernels.pyx``.

Rows are processed in blocks; each row total comes from numpy's pairwise
summation and the row totals are combined with :func:`math.fsum`, so the
result is deterministic and agrees with the compiled kernels to a few ulps
of the total.
"""
import math

import numpy as np
from scipy.spatial.distance import cdist

_BLOCK = 256


def distance_sum(a, b):
    """Return sum_{j,k} |a_j - b_k| with Euclidean norm over rows."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape[1] != b.shape[1]:
        raise ValueError("dimension mismatch")
    rows = []
    for start in range(0, a.shape[0], _BLOCK):
        chunk = a[start:start + _BLOCK]
        if a.shape[1] == 1:
            dist = np.abs(chunk[:, 0, None] - b[None, :, 0])
        else:
            dist = cdist(chunk, b)
        rows.extend(dist.sum(axis=1).tolist())
    return math.fsum(rows)


def gaussian_kernel_sum(a, b, sigma):
    """Return sum_{j,k} exp(-sigma^2 (a_j - b_k)^2 / 2) for scalar samples."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    half_s2 = 0.5 * sigma * sigma
    rows = []
    for start in range(0, a.shape[0], _BLOCK):
        diff = a[start:start + _BLOCK, None] - b[None, :]
        rows.extend(np.exp(-half_s2 * diff * diff).sum(axis=1).tolist())
    return math.fsum(rows)
