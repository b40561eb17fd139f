"""Lagged embeddings of component series and energy dissimilarity matrices."""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from . import _backend
from .energy import as_sample, canonical_pair, combine_sums


class DataError(ValueError):
    """Input data violates a structural requirement (non-finite, nonpositive, ...)."""


@dataclass(frozen=True)
class TimeSeriesPanel:
    """``n x d`` panel: rows are time points, columns are component series."""

    values: np.ndarray
    names: tuple = field(default=())

    def __post_init__(self):
        values = np.array(self.values, dtype=np.float64, copy=True)
        if values.ndim != 2:
            raise DataError("panel values must be a 2-D array")
        n, d = values.shape
        if n < 2 or d < 2:
            raise DataError(f"panel needs n >= 2 and d >= 2, got {values.shape}")
        if not np.all(np.isfinite(values)):
            raise DataError("panel contains missing or non-finite values")
        names = tuple(str(s) for s in self.names) if len(self.names) else tuple(f"X{j + 1}" for j in range(d))
        if len(names) != d:
            raise DataError(f"{len(names)} names for {d} columns")
        if len(set(names)) != d:
            raise DataError("component names must be unique")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "names", names)

    @property
    def n(self):
        return self.values.shape[0]

    @property
    def d(self):
        return self.values.shape[1]

    def column(self, j):
        return self.values[:, j]

    def take(self, columns):
        """Panel restricted to (or reordered by) ``columns``."""
        columns = list(columns)
        return TimeSeriesPanel(self.values[:, columns], tuple(self.names[j] for j in columns))


def lag_embed(series, h):
    """Stack the windows ``(x_t, ..., x_{t+h})`` for ``t = 1 .. n-h`` as rows."""
    x = np.asarray(series, dtype=np.float64).ravel()
    if h < 0:
        raise ValueError("lag must be nonnegative")
    if h >= x.shape[0]:
        raise ValueError(f"lag {h} needs more than {x.shape[0]} observations")
    return np.ascontiguousarray(np.lib.stride_tricks.sliding_window_view(x, h + 1))


def pair_embed_bivariate(series, ell):
    """Rows ``(x_t, x_{t+ell})`` for ``t = 1 .. n-ell``."""
    x = np.asarray(series, dtype=np.float64).ravel()
    if ell < 1:
        raise ValueError("ell must be a positive integer")
    if ell >= x.shape[0]:
        raise ValueError(f"lag {ell} needs more than {x.shape[0]} observations")
    return np.ascontiguousarray(np.column_stack([x[:-ell], x[ell:]]))


def _resolve_threads(threads):
    if threads is None:
        return os.cpu_count() or 1
    if threads < 1:
        raise ValueError("threads must be >= 1")
    return threads


def dissimilarity_from_samples(samples, threads=None):
    """Energy V-statistic between every pair of ``samples`` as a d x d matrix.

    Within-sample sums are computed once per sample. Every entry is bitwise
    equal to ``energy_distance_vstat(samples[j], samples[k])`` and the result
    does not depend on ``threads``.
    """
    samples = [as_sample(s) for s in samples]
    d = len(samples)
    dsum = _backend.distance_sum
    pairs = list(combinations(range(d), 2))

    def cross(pair):
        j, k = pair
        first, second = canonical_pair(samples[j], samples[k])
        return dsum(first, second), first is not samples[j]

    workers = min(_resolve_threads(threads), max(len(pairs), 1))
    with ThreadPoolExecutor(max_workers=workers) as pool:
        within = list(pool.map(lambda s: dsum(s, s), samples))
        crosses = list(pool.map(cross, pairs))

    D = np.zeros((d, d))
    for (j, k), (c, swapped) in zip(pairs, crosses):
        a, b = (k, j) if swapped else (j, k)
        D[j, k] = D[k, j] = combine_sums(c, within[a], within[b], samples[a].shape[0], samples[b].shape[0])
    return D


def joint_dissimilarity_matrix(panel, h, threads=None):
    """Energy distances between the (h+1)-dimensional lagged laws of each column."""
    if h >= panel.n:
        raise ValueError(f"lag {h} needs more than {panel.n} observations")
    return dissimilarity_from_samples([lag_embed(panel.column(j), h) for j in range(panel.d)], threads)


def lagged_pair_matrices(panel, h, threads=None):
    """The list ``[D0, D1, ..., Dh]``: marginal matrix then one per bivariate lag."""
    if h < 0:
        raise ValueError("lag must be nonnegative")
    if h >= panel.n:
        raise ValueError(f"lag {h} needs more than {panel.n} observations")
    mats = [joint_dissimilarity_matrix(panel, 0, threads)]
    for ell in range(1, h + 1):
        mats.append(dissimilarity_from_samples(
            [pair_embed_bivariate(panel.column(j), ell) for j in range(panel.d)], threads))
    return mats


def bivariate_sum_dissimilarity_matrix(panel, h, threads=None):
    """Sum of the marginal and lag-1..h bivariate energy dissimilarity matrices."""
    mats = lagged_pair_matrices(panel, h, threads)
    total = mats[0].copy()
    for m in mats[1:]:
        total += m
    return total


def normalize(panel):
    """Rescale each column to sample mean 0 and sample sd 1 (denominator n-1)."""
    x = panel.values
    sd = x.std(axis=0, ddof=1)
    if np.any(sd == 0):
        bad = [panel.names[j] for j in np.flatnonzero(sd == 0)]
        raise DataError(f"constant column(s) cannot be normalized: {', '.join(bad)}")
    centered = x - x.mean(axis=0)
    return TimeSeriesPanel(centered / sd, panel.names)


def log_growth(panel):
    """Period-on-period log growth ``log(x_t) - log(x_{t-1})``; one row shorter."""
    x = panel.values
    if np.any(x <= 0):
        raise DataError("log growth needs strictly positive values")
    logs = np.log(x)
    return TimeSeriesPanel(logs[1:] - logs[:-1], panel.names)


TRANSFORMS = {
    "none": lambda p: p,
    "normalize": normalize,
    "log_growth": log_growth,
    "log_growth_then_normalize": lambda p: normalize(log_growth(p)),
}


def check_dissimilarity(D):
    """Validate a dissimilarity matrix and return it as a float array."""
    D = np.asarray(D, dtype=np.float64)
    if D.ndim != 2 or D.shape[0] != D.shape[1]:
        raise ValueError("dissimilarity matrix must be square")
    if not np.all(np.isfinite(D)):
        raise ValueError("dissimilarity matrix has non-finite entries")
    if np.any(np.diag(D) != 0):
        raise ValueError("dissimilarity matrix must have a zero diagonal")
    if not np.array_equal(D, D.T):
        raise ValueError("dissimilarity matrix must be symmetric")
    if np.any(D < 0):
        raise ValueError("dissimilarity matrix has negative entries")
    return D
