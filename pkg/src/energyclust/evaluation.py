"""Similarity index and the replicated simulation benchmark."""
from __future__ import annotations

import math
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .baselines import BaselineSpec, baseline_dissimilarity_matrix
from .embedding import bivariate_sum_dissimilarity_matrix, joint_dissimilarity_matrix
from .hclust import agglomerate, cut, select_k
from .simgen import SimSpec, build_experiment

REPORT_SCHEMA = "energyclust.experiment-report/1"


def _groups(labels):
    labels = np.asarray(labels)
    return [set(np.flatnonzero(labels == c).tolist()) for c in np.unique(labels)]


def similarity_index(truth, candidate):
    """Mean over true clusters of the best Dice overlap with a candidate cluster.

    ``Sim(G, A) = (1/K) sum_i max_j 2 |G_i & A_j| / (|G_i| + |A_j|)`` where
    ``K`` is the number of clusters in ``truth``. Both arguments are label
    vectors over the same items; label values themselves are irrelevant.
    """
    truth = np.asarray(truth)
    candidate = np.asarray(candidate)
    if truth.shape != candidate.shape or truth.ndim != 1:
        raise ValueError("partitions must label the same items")
    G, A = _groups(truth), _groups(candidate)
    scores = [max(2.0 * len(g & a) / (len(g) + len(a)) for a in A) for g in G]
    # fsum is exactly rounded, so relabeling (which reorders the terms) cannot change the result
    return math.fsum(scores) / len(G)


_METHOD_RE = re.compile(r"^(energy|energy-sum|acf|pacf|per|per-lp|int-per)(?::(\d+))?$")


@dataclass(frozen=True)
class Method:
    """A dissimilarity method: energy (joint or bivariate-sum) at lag ``lag`` or a baseline."""

    kind: str
    lag: int = 0
    p_weight: float = 0.05

    @classmethod
    def parse(cls, text, p_weight=0.05):
        """Parse ``energy:1``, ``energy-sum:2``, ``acf:10``, ``pacf:25``, ``per``, ``per-lp``, ``int-per``."""
        m = _METHOD_RE.match(text.strip().lower())
        if not m:
            raise ValueError(f"cannot parse method {text!r}")
        kind, num = m.group(1), m.group(2)
        if kind in ("energy", "energy-sum"):
            return cls(kind, int(num or 0))
        if kind in ("acf", "pacf"):
            return cls(kind, int(num or 10), p_weight)
        if num is not None:
            raise ValueError(f"method {kind!r} takes no parameter")
        return cls(kind)

    @property
    def label(self):
        if self.kind in ("energy", "energy-sum", "acf", "pacf"):
            return f"{self.kind}:{self.lag}"
        return self.kind

    def dissimilarity(self, panel, threads=1):
        if self.kind == "energy":
            return joint_dissimilarity_matrix(panel, self.lag, threads)
        if self.kind == "energy-sum":
            return bivariate_sum_dissimilarity_matrix(panel, self.lag, threads)
        method = {"acf": "ACF", "pacf": "PACF", "per": "PER", "per-lp": "PER_LP", "int-per": "INT_PER"}[self.kind]
        return baseline_dissimilarity_matrix(panel, BaselineSpec(method, max(self.lag, 1), self.p_weight))


def _summary(values):
    v = np.asarray(values, dtype=np.float64)
    q1, med, q3 = np.quantile(v, [0.25, 0.5, 0.75])
    return {
        "mean": float(v.mean()),
        "median": float(med),
        "q1": float(q1),
        "q3": float(q3),
        "iqr": float(q3 - q1),
        "min": float(v.min()),
        "max": float(v.max()),
    }


@dataclass(frozen=True)
class ExperimentReport:
    scenario: str
    n: int
    reps: int
    base_seed: int
    k_mode: str
    methods: tuple
    scores: dict
    chosen_k: dict

    def summary(self):
        return {m: _summary(self.scores[m]) for m in self.methods}

    def to_dict(self):
        return {
            "schema": REPORT_SCHEMA,
            "scenario": self.scenario,
            "n": self.n,
            "reps": self.reps,
            "base_seed": self.base_seed,
            "k_mode": self.k_mode,
            "methods": list(self.methods),
            "scores": {m: list(self.scores[m]) for m in self.methods},
            "chosen_k": {m: list(self.chosen_k[m]) for m in self.methods},
            "summary": self.summary(),
        }


def replicate_seed(base_seed, r):
    return base_seed ^ r


def _score_replicate(spec, methods, k_mode, threads):
    panel, truth = build_experiment(spec)
    out = []
    for method in methods:
        D = method.dissimilarity(panel, threads)
        dend = agglomerate(D)
        if k_mode == "known_K0":
            K = truth.K0
        else:
            K, _ = select_k(dend, D)
        out.append((similarity_index(truth.labels, cut(dend, K)), K))
    return out


def run_experiment(spec, methods, reps, base_seed=0, k_mode="known_K0", threads=1):
    """Simulate ``reps`` panels and score each method's clustering against the truth.

    Replicate ``r`` uses seed ``base_seed XOR r``; the panels depend only on
    that seed, so adding or removing methods never changes them. Replicates
    run concurrently on ``threads`` workers with results stored by index.
    """
    if reps < 1:
        raise ValueError("reps must be >= 1")
    if not methods:
        raise ValueError("at least one method is required")
    if k_mode not in ("known_K0", "silhouette"):
        raise ValueError(f"unknown k_mode {k_mode!r}")
    methods = [m if isinstance(m, Method) else Method.parse(m) for m in methods]
    labels = [m.label for m in methods]
    if len(set(labels)) != len(labels):
        raise ValueError("duplicate methods")
    spec = SimSpec(spec.scenario, spec.n, spec.seed, spec.burn_in)

    def one(r):
        rep_spec = SimSpec(spec.scenario, spec.n, replicate_seed(base_seed, r), spec.burn_in)
        return _score_replicate(rep_spec, methods, k_mode, 1)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(one, range(reps)))
    else:
        results = [one(r) for r in range(reps)]
    scores = {lab: [res[i][0] for res in results] for i, lab in enumerate(labels)}
    chosen = {lab: [res[i][1] for res in results] for i, lab in enumerate(labels)}
    return ExperimentReport(spec.scenario.value, spec.n, reps, base_seed, k_mode, tuple(labels), scores, chosen)
