"""Per-node topology statistics feeding the composite generative weights.

The model weights every node by delta_i = degree + clustering coefficient +
betweenness centrality (mode "bc"), by degree alone (mode "degree"), or
uniformly (mode "unit").  Betweenness is exact, computed with Brandes'
dependency accumulation over unordered pairs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .network import AttributedNetwork

__all__ = [
    "NodeWeights",
    "WEIGHT_MODES",
    "degrees",
    "clustering_coefficients",
    "betweenness",
    "node_weights",
]

WEIGHT_MODES = ("bc", "degree", "unit")


def degrees(net: AttributedNetwork) -> np.ndarray:
    """Node degrees; a self-loop adds 2 so that degrees sum to 2m."""
    k = np.bincount(net.ei, minlength=net.n) + np.bincount(net.ej, minlength=net.n)
    return k.astype(np.int64)


def clustering_coefficients(net: AttributedNetwork) -> np.ndarray:
    """Local clustering c_i = 2 l_i / (k_i (k_i - 1)).

    l_i counts edges among the distinct neighbors of i; self-loops are
    ignored, and c_i = 0 for nodes with fewer than two neighbors.
    """
    indptr, indices = net.csr_simple
    neigh = [set(indices[indptr[i]:indptr[i + 1]]) for i in range(net.n)]
    out = np.zeros(net.n)
    for i in range(net.n):
        ki = len(neigh[i])
        if ki < 2:
            continue
        links = sum(len(neigh[j] & neigh[i]) for j in neigh[i]) // 2
        out[i] = 2.0 * links / (ki * (ki - 1))
    return out


def betweenness(net: AttributedNetwork, normalized: bool = False) -> np.ndarray:
    """Exact betweenness centrality over unordered pairs {s, t}, s != t != i.

    Unit edge lengths; self-loops ignored; pairs in different components
    contribute nothing.  With normalized=True the result is divided by
    (n-1)(n-2)/2 (zeros when n < 3).
    """
    n = net.n
    indptr, indices = net.csr_simple
    bc = np.zeros(n)
    dist = np.empty(n, dtype=np.int64)
    sigma = np.empty(n)
    delta = np.empty(n)
    for s in range(n):
        dist.fill(-1)
        sigma.fill(0.0)
        dist[s] = 0
        sigma[s] = 1.0
        frontier = np.array([s], dtype=np.int64)
        levels = [frontier]
        d = 0
        while True:
            targets = np.concatenate(
                [indices[indptr[v]:indptr[v + 1]] for v in frontier]
            ) if frontier.size else np.empty(0, dtype=np.int64)
            if not targets.size:
                break
            srcs = np.repeat(frontier, indptr[frontier + 1] - indptr[frontier])
            fresh = np.unique(targets[dist[targets] == -1])
            dist[fresh] = d + 1
            step = dist[targets] == d + 1
            np.add.at(sigma, targets[step], sigma[srcs[step]])
            if not fresh.size:
                break
            levels.append(fresh)
            frontier = fresh
            d += 1
        delta.fill(0.0)
        for lvl in range(len(levels) - 1, 0, -1):
            ws = levels[lvl]
            targets = np.concatenate([indices[indptr[v]:indptr[v + 1]] for v in ws])
            srcs = np.repeat(ws, indptr[ws + 1] - indptr[ws])
            back = dist[targets] == lvl - 1
            wsrc, vpred = srcs[back], targets[back]
            np.add.at(delta, vpred, sigma[vpred] / sigma[wsrc] * (1.0 + delta[wsrc]))
        delta[s] = 0.0
        bc += delta
    bc /= 2.0
    if normalized:
        if n >= 3:
            bc /= (n - 1) * (n - 2) / 2.0
        else:
            bc = np.zeros(n)
    return bc


@dataclass(frozen=True)
class NodeWeights:
    """Topology statistics and the composite per-node weight.

    clustering and betweenness are None for modes that do not use them.
    composite[i] is 0 exactly for isolated nodes under bc/degree modes; such
    nodes carry no model mass.
    """

    degree: np.ndarray
    clustering: np.ndarray | None
    betweenness: np.ndarray | None
    composite: np.ndarray
    mode: str
    normalized_betweenness: bool = False

    @property
    def n(self) -> int:
        return len(self.composite)

    @property
    def isolated(self) -> np.ndarray:
        return self.composite == 0.0


def node_weights(
    net: AttributedNetwork,
    mode: str = "bc",
    normalized_betweenness: bool = False,
) -> NodeWeights:
    """Composite weights for one of the modes in WEIGHT_MODES.

    bc: degree + clustering + betweenness, degree: degree alone,
    unit: every node weighs 1 (ablations drop the topology terms).
    """
    if mode not in WEIGHT_MODES:
        raise ValueError(f"unknown weight mode {mode!r}; expected one of {WEIGHT_MODES}")
    k = degrees(net)
    cc = btw = None
    if mode == "bc":
        cc = clustering_coefficients(net)
        btw = betweenness(net, normalized=normalized_betweenness)
        composite = k + cc + btw
    elif mode == "degree":
        composite = k.astype(float)
    else:
        composite = np.ones(net.n)
    return NodeWeights(
        degree=k, clustering=cc, betweenness=btw,
        composite=composite, mode=mode,
        normalized_betweenness=bool(normalized_betweenness),
    )
