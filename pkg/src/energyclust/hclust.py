"""Agglomerative clustering with the generalized Ward update.

Cluster ids follow the usual convention: leaves are ``0 .. d-1`` and the
cluster formed by merge ``i`` gets id ``d + i``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .embedding import check_dissimilarity


class Merge(NamedTuple):
    left: int
    right: int
    height: float
    size: int


@dataclass(frozen=True)
class Dendrogram:
    merges: tuple
    n_leaves: int

    def to_dict(self, names=None):
        names = list(names) if names is not None else [str(i) for i in range(self.n_leaves)]
        return {
            "leaves": names,
            "merges": [m._asdict() for m in self.merges],
        }

    def to_json(self, names=None, **extra):
        doc = dict(extra)
        doc.update(self.to_dict(names))
        return json.dumps(doc, indent=2, sort_keys=True)

    @classmethod
    def from_dict(cls, doc):
        merges = tuple(Merge(int(m["left"]), int(m["right"]), float(m["height"]), int(m["size"]))
                       for m in doc["merges"])
        return cls(merges, len(doc["leaves"]))

    def to_newick(self, names=None):
        """Newick text; branch length = parent height minus child height."""
        d = self.n_leaves
        names = list(names) if names is not None else [str(i) for i in range(d)]
        if d == 1:
            return f"{_newick_label(names[0])};"
        heights = [0.0] * d + [m.height for m in self.merges]

        def render(node, parent_height):
            length = repr(float(parent_height - heights[node]))
            if node < d:
                return f"{_newick_label(names[node])}:{length}"
            m = self.merges[node - d]
            return f"({render(m.left, m.height)},{render(m.right, m.height)}):{length}"

        root = self.merges[-1]
        return f"({render(root.left, root.height)},{render(root.right, root.height)});"


def _newick_label(name):
    if any(c in name for c in " ():;,[]'\t\n"):
        return "'" + name.replace("'", "''") + "'"
    return name


def agglomerate(D):
    """Build the merge sequence for dissimilarity matrix ``D``.

    At every step the closest pair of active clusters is merged (ties go to
    the lexicographically smallest pair of cluster ids) and distances to the
    new cluster follow the Lance-Williams generalized Ward recursion::

        d(j+k, l) = [(n_j+n_l) d(j,l) + (n_k+n_l) d(k,l) - n_l d(j,k)] / (n_j+n_k+n_l)

    The merge height is the merged pair's dissimilarity.
    """
    D = check_dissimilarity(D)
    d = D.shape[0]
    if d < 2:
        raise ValueError("need at least two items to cluster")
    total = 2 * d - 1
    dist = np.full((total, total), np.inf)
    dist[:d, :d] = D
    np.fill_diagonal(dist, np.inf)
    # only the upper triangle (row id < column id) is searched
    dist[np.tril_indices(total)] = np.inf
    sizes = np.zeros(total, dtype=np.int64)
    sizes[:d] = 1
    active = list(range(d))
    merges = []
    for step in range(d - 1):
        flat = int(np.argmin(dist))
        j, k = divmod(flat, total)
        height = float(dist[j, k])
        new = d + step
        n_j, n_k = sizes[j], sizes[k]
        active.remove(j)
        active.remove(k)
        for ell in active:
            n_l = sizes[ell]
            d_jl = dist[min(j, ell), max(j, ell)]
            d_kl = dist[min(k, ell), max(k, ell)]
            dist[ell, new] = ((n_j + n_l) * d_jl + (n_k + n_l) * d_kl - n_l * height) / (n_j + n_k + n_l)
        dist[j, :] = dist[:, j] = np.inf
        dist[k, :] = dist[:, k] = np.inf
        sizes[new] = n_j + n_k
        active.append(new)
        merges.append(Merge(j, k, height, int(n_j + n_k)))
    return Dendrogram(tuple(merges), d)


def _relabel(roots):
    # number clusters 1..K in order of first appearance along the leaves
    mapping = {}
    labels = np.empty(len(roots), dtype=np.int64)
    for i, r in enumerate(roots):
        labels[i] = mapping.setdefault(r, len(mapping) + 1)
    return labels


def cut(dend, K):
    """Labels (1..K) obtained by undoing the last ``K - 1`` merges."""
    d = dend.n_leaves
    if not 1 <= K <= d:
        raise ValueError(f"K must be in [1, {d}], got {K}")
    parent = list(range(2 * d - 1))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for step, m in enumerate(dend.merges[: d - K]):
        parent[find(m.left)] = d + step
        parent[find(m.right)] = d + step
    return _relabel([find(i) for i in range(d)])


@dataclass(frozen=True)
class SilhouetteReport:
    s: np.ndarray
    average: float
    K: int

    def to_dict(self):
        return {"K": self.K, "average": self.average, "s": self.s.tolist()}


def silhouette(D, labels):
    """Silhouette width of each item for the partition ``labels``.

    ``s(i) = (b - a) / max(a, b)`` where ``a`` is the mean dissimilarity to
    the other members of i's cluster and ``b`` the smallest mean
    dissimilarity to another cluster. Members of singleton clusters get 0.
    """
    D = check_dissimilarity(D)
    labels = np.asarray(labels)
    if labels.shape != (D.shape[0],):
        raise ValueError("labels do not match the dissimilarity matrix")
    clusters = np.unique(labels)
    K = clusters.size
    if K < 2:
        raise ValueError("silhouette needs at least two clusters")
    members = [labels == c for c in clusters]
    s = np.zeros(D.shape[0])
    for i in range(D.shape[0]):
        own = int(np.searchsorted(clusters, labels[i]))
        n_own = members[own].sum()
        if n_own == 1:
            continue
        a = D[i, members[own]].sum() / (n_own - 1)
        b = min(D[i, members[c]].mean() for c in range(K) if c != own)
        denom = max(a, b)
        s[i] = 0.0 if denom == 0 else (b - a) / denom
    return SilhouetteReport(s, float(s.mean()), int(K))


def default_k_max(d):
    return min(d - 1, 10)


def select_k(dend, D, k_max=None):
    """Pick K in ``2..k_max`` maximising the average silhouette (ties -> smaller K)."""
    d = dend.n_leaves
    k_max = default_k_max(d) if k_max is None else k_max
    if not 2 <= k_max <= d - 1:
        raise ValueError(f"k_max must be in [2, {d - 1}], got {k_max}")
    reports = [silhouette(D, cut(dend, K)) for K in range(2, k_max + 1)]
    best = max(reports, key=lambda r: (r.average, -r.K))
    return best.K, reports
