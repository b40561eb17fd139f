"""Second-order baseline dissimilarities: ACF/PACF and periodogram distances."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

METHODS = ("ACF", "PACF", "PER", "PER_LP", "INT_PER")


@dataclass(frozen=True)
class BaselineSpec:
    method: str
    L: int = 10
    p_weight: float = 0.05

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown baseline {self.method!r}; choose from {METHODS}")
        if self.L < 1:
            raise ValueError("L must be >= 1")
        if not 0 < self.p_weight < 1:
            raise ValueError("p_weight must lie in (0, 1)")


def _series(x):
    x = np.asarray(x, dtype=np.float64).ravel()
    if not np.all(np.isfinite(x)):
        raise ValueError("series contains non-finite values")
    return x


def acf(series, L):
    """Sample autocorrelations at lags 1..L (autocovariances use denominator n)."""
    x = _series(series)
    n = x.shape[0]
    if not 1 <= L < n:
        raise ValueError(f"need 1 <= L < n, got L={L}, n={n}")
    xc = x - x.mean()
    c0 = xc @ xc / n
    if c0 == 0:
        raise ValueError("constant series has no autocorrelation")
    return np.array([xc[:-lag] @ xc[lag:] / n for lag in range(1, L + 1)]) / c0


def pacf_from_acf(rho):
    """Partial autocorrelations via the Durbin-Levinson recursion."""
    rho = np.asarray(rho, dtype=np.float64)
    L = rho.shape[0]
    out = np.empty(L)
    phi = np.zeros(0)
    v = 1.0
    for k in range(L):
        num = rho[k] - phi @ rho[:k][::-1]
        a = num / v
        out[k] = a
        phi = np.concatenate([phi - a * phi[::-1], [a]])
        v *= 1.0 - a * a
        if v <= 1e-14:
            if k + 1 < L:
                raise ValueError(f"Durbin-Levinson recursion is singular at lag {k + 1}")
    return out


def pacf(series, L):
    """Sample partial autocorrelations at lags 1..L."""
    return pacf_from_acf(acf(series, L))


def _geometric_weights(L, p_weight):
    return p_weight * (1.0 - p_weight) ** np.arange(1, L + 1)


def _weighted_feature_distance(fx, fy, p_weight):
    w = _geometric_weights(fx.shape[0], p_weight)
    return float(np.sqrt(np.sum(w * (fx - fy) ** 2)))


def weighted_acf_distance(x, y, L, p_weight=0.05):
    """Geometrically down-weighted Euclidean distance between sample ACFs."""
    return _weighted_feature_distance(acf(x, L), acf(y, L), p_weight)


def weighted_pacf_distance(x, y, L, p_weight=0.05):
    """Same as :func:`weighted_acf_distance` on partial autocorrelations."""
    return _weighted_feature_distance(pacf(x, L), pacf(y, L), p_weight)


def periodogram(series):
    """``I(w_j) = |sum_t x_t exp(-i t w_j)|^2 / n`` at ``w_j = 2 pi j / n``, j = 1..n//2."""
    x = _series(series)
    n = x.shape[0]
    if n < 4:
        raise ValueError("periodogram needs at least 4 observations")
    f = np.fft.rfft(x)
    return (f.real ** 2 + f.imag ** 2)[1: n // 2 + 1] / n


def _periodogram_feature(series, variant):
    I = periodogram(series)
    if variant == "raw":
        return I
    if variant == "log":
        if np.any(I <= 0):
            raise ValueError("log periodogram undefined: zero ordinate")
        return np.log(I)
    if variant == "integrated":
        total = I.sum()
        if total == 0:
            raise ValueError("integrated periodogram undefined for a zero periodogram")
        return np.cumsum(I) / total
    raise ValueError(f"unknown periodogram variant {variant!r}")


def periodogram_distance(x, y, variant="raw"):
    """Euclidean distance between raw, log or normalized cumulative periodograms."""
    if np.size(x) != np.size(y):
        raise ValueError("periodogram distance needs series of equal length")
    return float(np.linalg.norm(_periodogram_feature(x, variant) - _periodogram_feature(y, variant)))


_PERIODOGRAM_VARIANT = {"PER": "raw", "PER_LP": "log", "INT_PER": "integrated"}


def _features(panel, spec):
    cols = [panel.values[:, j] for j in range(panel.d)]
    if spec.method == "ACF":
        return [acf(c, spec.L) for c in cols]
    if spec.method == "PACF":
        return [pacf(c, spec.L) for c in cols]
    return [_periodogram_feature(c, _PERIODOGRAM_VARIANT[spec.method]) for c in cols]


def baseline_dissimilarity_matrix(panel, spec):
    """Pairwise baseline distances between the columns of ``panel``."""
    feats = _features(panel, spec)
    d = panel.d
    D = np.zeros((d, d))
    weighted = spec.method in ("ACF", "PACF")
    for j, k in combinations(range(d), 2):
        if weighted:
            D[j, k] = _weighted_feature_distance(feats[j], feats[k], spec.p_weight)
        else:
            D[j, k] = float(np.linalg.norm(feats[j] - feats[k]))
        D[k, j] = D[j, k]
    return D
