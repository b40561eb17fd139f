"""Seeded simulation designs with known cluster structure.

Randomness comes from Philox counter-based streams keyed by ``(seed, key)``,
one stream per generated unit (a scalar column or a VAR block). A unit's
output therefore depends only on the seed and its own key, never on the
order in which units are produced.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np
from scipy.signal import lfilter

from .embedding import TimeSeriesPanel, normalize

DEFAULT_BURN_IN = 500
STABILITY_MARGIN = 1.05


def rng_stream(seed, *key):
    """Independent Philox generator for ``seed`` and an integer key path."""
    if seed < 0:
        raise ValueError("seed must be nonnegative")
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(int(k) for k in key))
    return np.random.Generator(np.random.Philox(ss))


def _innovations(n_total, seed, innovations, key=()):
    if innovations is None:
        return rng_stream(seed, *key).standard_normal(n_total)
    eps = np.asarray(innovations, dtype=np.float64).ravel()
    if eps.shape[0] != n_total:
        raise ValueError(f"expected {n_total} innovations, got {eps.shape[0]}")
    return eps


NONLINEAR_MODELS = ("TAR", "EXPAR", "MA1", "NLMA")


def gen_nonlinear(model, n, seed=0, burn_in=DEFAULT_BURN_IN, innovations=None, key=()):
    """Simulate one of the nonlinear benchmark models with N(0, 1) noise.

    TAR    X_t = 0.5 X_{t-1} 1(X_{t-1} <= 0) - 2 X_{t-1} 1(X_{t-1} > 0) + e_t
    EXPAR  X_t = (0.3 - 10 exp(-X_{t-1}^2)) X_{t-1} + e_t
    MA1    X_t = e_t - 0.4 e_{t-1}
    NLMA   X_t = e_t - 0.5 e_{t-1} + 0.8 e_{t-1}^2

    The recursion starts from ``X_0 = e_0 = 0``; the first ``burn_in``
    values are dropped. ``innovations`` (length ``burn_in + n``) replaces the
    random draws, which is handy for checking the recursions by hand.
    """
    if model not in NONLINEAR_MODELS:
        raise ValueError(f"unknown model {model!r}")
    if n < 1 or burn_in < 0:
        raise ValueError("need n >= 1 and burn_in >= 0")
    total = n + burn_in
    eps = _innovations(total, seed, innovations, key)
    prev_eps = np.concatenate([[0.0], eps[:-1]])
    if model == "MA1":
        x = eps - 0.4 * prev_eps
    elif model == "NLMA":
        x = eps - 0.5 * prev_eps + 0.8 * prev_eps ** 2
    else:
        x = np.empty(total)
        prev = 0.0
        for t in range(total):
            if model == "TAR":
                prev = (0.5 * prev if prev <= 0 else -2.0 * prev) + eps[t]
            else:
                prev = (0.3 - 10.0 * np.exp(-prev * prev)) * prev + eps[t]
            x[t] = prev
    return x[burn_in:]


def companion_spectral_radius(coeffs):
    """Spectral radius of the companion matrix of a (V)AR coefficient list."""
    mats = [np.atleast_2d(np.asarray(c, dtype=np.float64)) for c in coeffs]
    if not mats:
        return 0.0
    k = mats[0].shape[0]
    p = len(mats)
    comp = np.zeros((k * p, k * p))
    comp[:k, :] = np.hstack(mats)
    comp[k:, :-k] = np.eye(k * (p - 1))
    return float(np.max(np.abs(np.linalg.eigvals(comp))))


def check_causal(ar):
    if len(ar) and companion_spectral_radius([[[a]] for a in ar]) >= 1.0:
        raise ValueError(f"AR coefficients {list(ar)} are not causal")


def gen_arma(ar, ma, n, seed=0, burn_in=DEFAULT_BURN_IN, innovations=None, key=()):
    """ARMA recursion ``X_t = sum ar_i X_{t-i} + e_t + sum ma_j e_{t-j}`` from zero start."""
    ar = [float(a) for a in ar]
    ma = [float(m) for m in ma]
    check_causal(ar)
    if n < 1 or burn_in < 0:
        raise ValueError("need n >= 1 and burn_in >= 0")
    eps = _innovations(n + burn_in, seed, innovations, key)
    x = lfilter(np.r_[1.0, ma], np.r_[1.0, -np.asarray(ar)], eps)
    return x[burn_in:]


def _column_major(lo, hi, k=10):
    return np.linspace(lo, hi, k * k).reshape((k, k), order="F")


def var_coefficients(kind):
    """Coefficient matrices of the 10-dimensional VAR benchmark models.

    VAR1: ``linspace(-1, 1, 100)`` filled column-wise, divided by 1.05 times
    its largest singular value. VAR2: ``B1`` from ``[-1, 0]`` and ``B2`` from
    ``[0, 1]``, both divided by the largest eigenvalue of
    ``(B1 + B2)(B1 + B2)^T``. Dividing by its square root instead would leave
    the VAR(2) companion matrix with spectral radius about 1.41 (explosive).
    """
    if kind == "VAR1":
        B = _column_major(-1.0, 1.0)
        return [B / (STABILITY_MARGIN * np.linalg.norm(B, 2))]
    if kind == "VAR2":
        B1 = _column_major(-1.0, 0.0)
        B2 = _column_major(0.0, 1.0)
        S = B1 + B2
        scale = np.linalg.eigvalsh(S @ S.T).max()
        return [B1 / scale, B2 / scale]
    raise ValueError(f"unknown VAR kind {kind!r}")


def gen_var(coeffs, noise, n, seed=0, burn_in=DEFAULT_BURN_IN, innovations=None, initial=None, key=()):
    """Simulate ``X_t = sum_i B_i X_{t-i} + e_t``.

    ``noise`` is ``"normal"`` (iid N(0, 1) components) or ``"t2"`` (iid
    Student-t with 2 degrees of freedom, unscaled). ``initial`` optionally
    gives the last ``len(coeffs)`` states before the first step (most recent
    last); the default is zeros.
    """
    mats = [np.asarray(B, dtype=np.float64) for B in coeffs]
    k = mats[0].shape[0]
    order = len(mats)
    if companion_spectral_radius(mats) >= 1.0:
        raise ValueError("VAR coefficients are not stable")
    total = n + burn_in
    if innovations is not None:
        eps = np.asarray(innovations, dtype=np.float64)
        if eps.shape != (total, k):
            raise ValueError(f"expected innovations of shape {(total, k)}")
    else:
        rng = rng_stream(seed, *key)
        if noise == "normal":
            eps = rng.standard_normal((total, k))
        elif noise == "t2":
            eps = rng.standard_t(2, size=(total, k))
        else:
            raise ValueError(f"unknown noise {noise!r}")
    x = np.zeros((order + total, k))
    if initial is not None:
        x[:order] = np.asarray(initial, dtype=np.float64).reshape(order, k)
    for t in range(total):
        acc = eps[t].copy()
        for i, B in enumerate(mats, start=1):
            acc += B @ x[order + t - i]
        x[order + t] = acc
    return x[order + burn_in:]


class Scenario(str, enum.Enum):
    NONLINEAR_16 = "NONLINEAR_16"
    ARMA_20 = "ARMA_20"
    VAR_40 = "VAR_40"


ARMA_MODELS = (
    ("AR1", [0.5], []),
    ("MA1", [], [0.7]),
    ("AR2", [0.6, 0.2], []),
    ("MA2", [], [0.8, -0.6]),
    ("ARMA11", [0.8], [0.2]),
)

VAR_MODELS = (
    ("VAR1_N", "VAR1", "normal"),
    ("VAR1_T2", "VAR1", "t2"),
    ("VAR2_N", "VAR2", "normal"),
    ("VAR2_T2", "VAR2", "t2"),
)

DEFAULT_N = {Scenario.NONLINEAR_16: 200, Scenario.ARMA_20: 1000, Scenario.VAR_40: 200}
GROUP_SIZE = 4


@dataclass(frozen=True)
class SimSpec:
    scenario: Scenario
    n: int = 0
    seed: int = 0
    burn_in: int = DEFAULT_BURN_IN

    def __post_init__(self):
        object.__setattr__(self, "scenario", Scenario(self.scenario))
        if self.n == 0:
            object.__setattr__(self, "n", DEFAULT_N[self.scenario])
        if self.n < 10:
            raise ValueError("n must be at least 10")
        if self.burn_in < 0:
            raise ValueError("burn_in must be nonnegative")
        if self.seed < 0 or self.seed >= 2 ** 64:
            raise ValueError("seed must be a 64-bit unsigned integer")

    def to_dict(self):
        return {"scenario": self.scenario.value, "n": self.n, "seed": self.seed, "burn_in": self.burn_in}


@dataclass(frozen=True)
class GroundTruth:
    labels: np.ndarray
    K0: int

    def to_dict(self):
        return {"K0": self.K0, "labels": [int(v) for v in self.labels]}


def build_experiment(spec):
    """Generate the panel for ``spec`` together with its true partition.

    Every scenario is normalized column-wise after simulation.
    """
    cols, labels, names = [], [], []
    if spec.scenario is Scenario.NONLINEAR_16:
        for g, model in enumerate(NONLINEAR_MODELS):
            for r in range(GROUP_SIZE):
                c = len(cols)
                cols.append(gen_nonlinear(model, spec.n, spec.seed, spec.burn_in, key=(c,)))
                labels.append(g + 1)
                names.append(f"{model}_{r + 1}")
    elif spec.scenario is Scenario.ARMA_20:
        for g, (name, ar, ma) in enumerate(ARMA_MODELS):
            for r in range(GROUP_SIZE):
                c = len(cols)
                cols.append(gen_arma(ar, ma, spec.n, spec.seed, spec.burn_in, key=(c,)))
                labels.append(g + 1)
                names.append(f"{name}_{r + 1}")
    else:
        for g, (name, kind, noise) in enumerate(VAR_MODELS):
            block = gen_var(var_coefficients(kind), noise, spec.n, spec.seed, spec.burn_in, key=(g,))
            for r in range(block.shape[1]):
                cols.append(block[:, r])
                labels.append(g + 1)
                names.append(f"{name}_{r + 1}")
    panel = normalize(TimeSeriesPanel(np.column_stack(cols), tuple(names)))
    labels = np.asarray(labels, dtype=np.int64)
    return panel, GroundTruth(labels, int(labels.max()))
