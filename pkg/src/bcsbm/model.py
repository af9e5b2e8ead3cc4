"""Poisson block model over links and binary node attributes.

Every node i carries a fixed nonnegative weight w_i (see topology.node_weights).
With membership matrix D (n x c), symmetric block matrix T (c x c), and
attribute matrix P (c x K), the model posits independent Poisson counts

    links:      a_ij ~ Poisson( sum_rs w_i D_ir T_rs w_j D_js )
    attributes: x_ik ~ Poisson( sum_r  w_i D_ir P_rk )

with a_ii counting a self-loop as 2.  Parameters are kept on the scaled
simplexes  sum_i w_i D_ir = 1 (per community r),  sum_rs T_rs = 1,  and
sum_k P_rk = 1 (per row r), which pins the expected total link mass at 1/2
and the expected attribute mass at c.

Fitting maximizes the joint log-likelihood by EM.  The E-step splits each
observed link across community pairs (r, s) and each observed attribute
across communities r; the M-step renormalizes the resulting responsibility
counts.  Responsibilities are stored sparsely, one c x c block per edge and
one c-vector per present attribute, so an iteration costs
O(m c^2 + (#attribute presences) c).

Attribute presences on zero-weight (isolated) nodes have model rate 0 under
every parameter value; they are excluded from the fit and counted in
FitResult.skipped_attr_entries.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from joblib import Parallel, delayed

from .network import AttributedNetwork, Partition
from .topology import NodeWeights, node_weights

__all__ = [
    "DegenerateRateError",
    "ModelParams",
    "Responsibilities",
    "FitConfig",
    "RestartRecord",
    "FitResult",
    "INIT_SCHEMES",
    "log_likelihood",
    "lower_bound",
    "e_step",
    "m_step",
    "init_params",
    "hard_partition",
    "membership_scores",
    "zero_score_rows",
    "fit",
]

INIT_SCHEMES = ("assortative", "disassortative", "uniform")

# Rates are clipped here before logs inside the EM loop, so a collapsing
# parameter cannot poison the trace with -inf mid-run.
RATE_FLOOR = 1e-12


class DegenerateRateError(ArithmeticError):
    """An observed link or attribute has zero model rate (or responsibility
    mass sits on a zero-weight node)."""


@dataclass(frozen=True)
class ModelParams:
    """Model parameters; see the module docstring for the rate formulas."""

    membership: np.ndarray   # (n, c), rows of isolated nodes are all-zero
    block: np.ndarray        # (c, c), symmetric
    attr_weights: np.ndarray  # (c, K)

    @property
    def n(self) -> int:
        return self.membership.shape[0]

    @property
    def c(self) -> int:
        return self.membership.shape[1]

    @property
    def n_attrs(self) -> int:
        return self.attr_weights.shape[1]

    def copy(self) -> "ModelParams":
        return ModelParams(self.membership.copy(), self.block.copy(),
                           self.attr_weights.copy())

    def constraint_residual(self, weights: NodeWeights) -> float:
        """Largest absolute violation of the three normalization constraints
        (and of block symmetry)."""
        col = self.membership * weights.composite[:, None]
        res = float(np.abs(col.sum(axis=0) - 1.0).max())
        res = max(res, abs(float(self.block.sum()) - 1.0))
        res = max(res, float(np.abs(self.block - self.block.T).max()))
        if self.n_attrs:
            res = max(res, float(np.abs(self.attr_weights.sum(axis=1) - 1.0).max()))
        return res


@dataclass(frozen=True)
class Responsibilities:
    """Sparse posterior splits of the observed counts.

    edge_resp[e, r, s] splits edge e = (ei[e], ej[e]) across community pairs,
    with r indexing the ei endpoint; rows sum to 1 over (r, s).  attr_resp[p]
    splits the attribute presence attr_sel[p] (an index into the network's
    presence arrays) across communities.
    """

    edge_resp: np.ndarray
    attr_resp: np.ndarray
    attr_sel: np.ndarray


def active_attr_entries(net: AttributedNetwork, weights: NodeWeights) -> np.ndarray:
    """Indices of attribute presences on nodes with positive weight."""
    return np.flatnonzero(weights.composite[net.attr_node] > 0.0)


def _weighted_membership(weights, params):
    return params.membership * weights.composite[:, None]


def _edge_rates(net, weights, params):
    dw = _weighted_membership(weights, params)
    return np.einsum("er,rs,es->e", dw[net.ei], params.block, dw[net.ej],
                     optimize=True)


def _attr_rates(net, weights, params, attr_sel):
    dw = _weighted_membership(weights, params)
    nodes = net.attr_node[attr_sel]
    cols = net.attr_index[attr_sel]
    return np.sum(dw[nodes] * params.attr_weights[:, cols].T, axis=1)


def _loglik(net, weights, params, attr_sel, floor=None):
    """(log-likelihood, #rates floored); -inf when floor is None and a rate
    vanishes."""
    dw = _weighted_membership(weights, params)
    col_mass = dw.sum(axis=0)                      # sum_i w_i D_ir
    expected_links = 0.5 * float(col_mass @ params.block @ col_mass)
    expected_attrs = float(col_mass @ params.attr_weights.sum(axis=1))

    edge_rate = _edge_rates(net, weights, params)
    attr_rate = _attr_rates(net, weights, params, attr_sel)
    floored = 0
    if floor is not None:
        floored = int(np.count_nonzero(edge_rate < floor)
                      + np.count_nonzero(attr_rate < floor))
        edge_rate = np.maximum(edge_rate, floor)
        attr_rate = np.maximum(attr_rate, floor)
    elif (edge_rate <= 0.0).any() or (attr_rate <= 0.0).any():
        return -math.inf, 0
    ll = float(np.log(edge_rate).sum() + np.log(attr_rate).sum()
               - expected_links - expected_attrs)
    return ll, floored


def log_likelihood(net: AttributedNetwork, weights: NodeWeights,
                   params: ModelParams) -> float:
    """Joint log-likelihood of the stored links and attribute presences.

    Constant terms that do not depend on the parameters are dropped.  Each
    stored edge contributes log(rate) once (self-loops included, via the
    a_ii = 2 convention); the expected-count subtractions run over all
    ordered node pairs and are computed in factorized form, which equals
    direct summation for any parameter value.  Returns -inf when an observed
    entry has zero rate.
    """
    sel = active_attr_entries(net, weights)
    return _loglik(net, weights, params, sel)[0]


def lower_bound(net: AttributedNetwork, weights: NodeWeights,
                params: ModelParams, resp: Responsibilities) -> float:
    """Jensen lower bound on log_likelihood for arbitrary responsibilities.

    Tight (equal to the log-likelihood) when resp comes from e_step at the
    same parameters.  Zero responsibility entries contribute nothing.
    """
    dw = _weighted_membership(weights, params)
    col_mass = dw.sum(axis=0)
    bound = -0.5 * float(col_mass @ params.block @ col_mass)
    bound -= float(col_mass @ params.attr_weights.sum(axis=1))

    if net.m:
        numer = np.einsum("er,rs,es->ers", dw[net.ei], params.block,
                          dw[net.ej], optimize=True)
        q = resp.edge_resp
        mask = q > 0.0
        if (numer[mask] <= 0.0).any():
            return -math.inf
        bound += float(np.sum(q[mask] * np.log(numer[mask] / q[mask])))
    if len(resp.attr_sel):
        nodes = net.attr_node[resp.attr_sel]
        cols = net.attr_index[resp.attr_sel]
        numer = dw[nodes] * params.attr_weights[:, cols].T
        g = resp.attr_resp
        mask = g > 0.0
        if (numer[mask] <= 0.0).any():
            return -math.inf
        bound += float(np.sum(g[mask] * np.log(numer[mask] / g[mask])))
    return bound


def e_step(net: AttributedNetwork, weights: NodeWeights,
           params: ModelParams) -> Responsibilities:
    """Posterior responsibilities at the current parameters.

    Raises DegenerateRateError if a stored edge or active attribute presence
    has zero total rate.
    """
    dw = _weighted_membership(weights, params)
    numer = np.einsum("er,rs,es->ers", dw[net.ei], params.block, dw[net.ej],
                      optimize=True)
    totals = numer.sum(axis=(1, 2))
    bad = np.flatnonzero(totals <= 0.0)
    if bad.size:
        e = int(bad[0])
        raise DegenerateRateError(
            f"zero model rate for edge ({net.id_of(net.ei[e])!r}, "
            f"{net.id_of(net.ej[e])!r})")
    q = numer / totals[:, None, None]

    sel = active_attr_entries(net, weights)
    nodes = net.attr_node[sel]
    cols = net.attr_index[sel]
    numer_a = dw[nodes] * params.attr_weights[:, cols].T
    totals_a = numer_a.sum(axis=1)
    bad = np.flatnonzero(totals_a <= 0.0)
    if bad.size:
        p = int(bad[0])
        raise DegenerateRateError(
            f"zero model rate for attribute {cols[p]} on node "
            f"{net.id_of(nodes[p])!r}")
    g = numer_a / totals_a[:, None]
    return Responsibilities(edge_resp=q, attr_resp=g, attr_sel=sel)


def m_step(net: AttributedNetwork, weights: NodeWeights,
           resp: Responsibilities) -> ModelParams:
    """Closed-form maximizer of the lower bound given the responsibilities.

    Each node's new membership is proportional to the responsibility mass it
    received (links plus attributes, equally weighted), rescaled by 1/w_i and
    normalized per community; the block and attribute matrices are the
    normalized responsibility totals.
    """
    n = net.n
    q = resp.edge_resp
    c = q.shape[1] if q.ndim == 3 and q.shape[0] else resp.attr_resp.shape[1]

    link_counts = np.zeros((n, c))
    if net.m:
        np.add.at(link_counts, net.ei, q.sum(axis=2))
        np.add.at(link_counts, net.ej, q.sum(axis=1))
        block_counts = q.sum(axis=0)
        block_counts = block_counts + block_counts.T
    else:
        block_counts = np.zeros((c, c))

    attr_counts = np.zeros((n, c))
    n_attrs = net.n_attrs
    attr_col = np.zeros((n_attrs, c))
    if len(resp.attr_sel):
        np.add.at(attr_counts, net.attr_node[resp.attr_sel], resp.attr_resp)
        np.add.at(attr_col, net.attr_index[resp.attr_sel], resp.attr_resp)

    mass = link_counts + attr_counts
    isolated = weights.composite <= 0.0
    if mass[isolated].any():
        i = int(np.flatnonzero(isolated & (mass > 0).any(axis=1))[0])
        raise DegenerateRateError(
            f"responsibility mass on zero-weight node {net.id_of(i)!r}")
    col_tot = mass.sum(axis=0)
    if (col_tot <= 0.0).any():
        r = int(np.flatnonzero(col_tot <= 0.0)[0])
        raise DegenerateRateError(f"community {r} received no responsibility mass")
    membership = np.zeros((n, c))
    active = ~isolated
    membership[active] = (mass[active] / col_tot) / weights.composite[active, None]

    total_block = block_counts.sum()
    if total_block > 0.0:
        block = block_counts / total_block
    else:
        block = np.full((c, c), 1.0 / (c * c))  # no links: flat placeholder

    attr_weights = np.zeros((c, n_attrs))
    if n_attrs:
        row_tot = attr_col.sum(axis=0)           # per community r
        attr_weights = attr_col.T.copy()
        flat = row_tot <= 0.0
        if flat.any():
            attr_weights[flat] = 1.0 / n_attrs   # no attribute mass: flat row
        attr_weights[~flat] /= row_tot[~flat, None]
    return ModelParams(membership=membership, block=block,
                       attr_weights=attr_weights)


def init_params(net: AttributedNetwork, weights: NodeWeights, c: int,
                scheme: str, rng: np.random.Generator) -> ModelParams:
    """Random parameters satisfying the normalization constraints.

    The block matrix starts assortative (diagonal strictly dominant),
    disassortative (off-diagonal strictly dominant), or uniform (flat with
    +-10% relative jitter); memberships and attribute rows are uniform draws
    normalized on their scaled simplexes.
    """
    if scheme not in INIT_SCHEMES:
        raise ValueError(f"unknown init scheme {scheme!r}; expected one of {INIT_SCHEMES}")
    if c < 1:
        raise ValueError("c must be at least 1")
    active = weights.composite > 0.0
    if not active.any():
        raise ValueError("every node has zero weight; nothing to model")

    n = net.n
    draw = rng.uniform(0.05, 1.0, size=(int(active.sum()), c))
    membership = np.zeros((n, c))
    membership[active] = (draw / draw.sum(axis=0)) / weights.composite[active, None]

    lo = rng.uniform(0.05, 0.95, size=(c, c))
    lo = (lo + lo.T) / 2.0
    hi = rng.uniform(1.05, 1.95, size=(c, c))
    hi = (hi + hi.T) / 2.0
    if scheme == "assortative":
        block = lo
        block[np.diag_indices(c)] = np.diag(hi)
    elif scheme == "disassortative":
        block = hi
        block[np.diag_indices(c)] = np.diag(lo)
    else:
        jitter = rng.uniform(-0.1, 0.1, size=(c, c))
        block = 0.5 * (1.0 + (jitter + jitter.T) / 2.0)
    block /= block.sum()

    if net.n_attrs:
        rows = rng.uniform(0.05, 1.0, size=(c, net.n_attrs))
        attr_weights = rows / rows.sum(axis=1, keepdims=True)
    else:
        attr_weights = np.zeros((c, 0))
    return ModelParams(membership=membership, block=block, attr_weights=attr_weights)


def membership_scores(params: ModelParams, weights: NodeWeights | None = None) -> np.ndarray:
    """Per-node community scores: membership scaled by block row mass,
    normalized per node.  Passing weights multiplies rows by the composite
    weight first (diagnostic variant; the per-node argmax is unchanged for
    positive weights).  Zero rows stay zero."""
    row_mass = params.block.sum(axis=1)
    scores = params.membership * row_mass[None, :]
    if weights is not None:
        scores = scores * weights.composite[:, None]
    tot = scores.sum(axis=1, keepdims=True)
    safe = tot[:, 0] > 0.0
    scores[safe] /= tot[safe]
    return scores


def zero_score_rows(params: ModelParams) -> np.ndarray:
    """Nodes whose score row is all zero (no membership mass anywhere)."""
    row_mass = params.block.sum(axis=1)
    return np.flatnonzero((params.membership * row_mass[None, :]).sum(axis=1) <= 0.0)


def hard_partition(params: ModelParams) -> Partition:
    """Assign each node to its highest-scoring community.

    Ties break toward the smallest community index.  All-zero rows (isolated
    nodes) fall to community 0; fit() records them separately.
    """
    scores = membership_scores(params)
    return Partition(np.argmax(scores, axis=1), params.c)


@dataclass(frozen=True)
class FitConfig:
    """EM driver settings.

    init_scheme is one of INIT_SCHEMES or "auto", which tries every scheme
    with probe_runs short runs (capped at probe_max_iter iterations each) and
    keeps the scheme with the highest mean final log-likelihood.
    """

    c: int
    max_iter: int = 500
    tol: float = 1e-6
    restarts: int = 1
    seed: int = 0
    init_scheme: str = "auto"
    weight_mode: str = "bc"
    normalized_betweenness: bool = False
    probe_runs: int = 10
    probe_max_iter: int = 50


@dataclass(frozen=True)
class RestartRecord:
    final_log_likelihood: float
    iterations: int
    scheme: str
    partition: np.ndarray


@dataclass(frozen=True)
class FitResult:
    """Outcome of fit(): best restart plus per-restart records."""

    params: ModelParams
    log_likelihood_trace: np.ndarray   # best restart, one entry per iteration + init
    partition: Partition
    per_restart: tuple
    chosen_scheme: str
    best_restart: int
    weights: NodeWeights
    skipped_attr_entries: int
    degenerate_nodes: tuple            # all-zero score rows, assigned community 0
    floored_rates: int

    @property
    def final_log_likelihood(self) -> float:
        return float(self.log_likelihood_trace[-1])


def _restart_rng(seed: int, stream: int, *key: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence((seed, stream) + key))


def _run_em(net, weights, c, scheme, rng, max_iter, tol):
    params = init_params(net, weights, c, scheme, rng)
    sel = active_attr_entries(net, weights)
    ll, floored = _loglik(net, weights, params, sel, floor=RATE_FLOOR)
    trace = [ll]
    for _ in range(max_iter):
        resp = e_step(net, weights, params)
        params = m_step(net, weights, resp)
        ll, f = _loglik(net, weights, params, sel, floor=RATE_FLOOR)
        floored += f
        trace.append(ll)
        if abs(trace[-1] - trace[-2]) < tol:
            break
    return params, np.array(trace), floored


def fit(net: AttributedNetwork, config: FitConfig, n_jobs: int = 1) -> FitResult:
    """Fit the model with restarts; returns the highest-likelihood restart.

    Every restart draws its starting point from an independent stream seeded
    by (config.seed, restart index), so results do not depend on n_jobs or
    execution order.  Ties in final likelihood break toward the smallest
    restart index.
    """
    if not 1 <= config.c <= net.n:
        raise ValueError(f"c must lie in 1..{net.n}, got {config.c}")
    if config.restarts < 1 or config.max_iter < 1:
        raise ValueError("restarts and max_iter must be positive")
    if config.tol <= 0.0:
        raise ValueError("tol must be positive")
    if config.init_scheme != "auto" and config.init_scheme not in INIT_SCHEMES:
        raise ValueError(f"unknown init scheme {config.init_scheme!r}")

    weights = node_weights(net, config.weight_mode, config.normalized_betweenness)
    skipped = net.n_attr_entries - len(active_attr_entries(net, weights))

    scheme = config.init_scheme
    if scheme == "auto":
        means = []
        for si, cand in enumerate(INIT_SCHEMES):
            finals = []
            for p in range(config.probe_runs):
                rng = _restart_rng(config.seed, 1, si, p)
                _, trace, _ = _run_em(net, weights, config.c, cand, rng,
                                      config.probe_max_iter, config.tol)
                finals.append(trace[-1])
            means.append(float(np.mean(finals)))
        scheme = INIT_SCHEMES[int(np.argmax(means))]

    def one_restart(idx):
        rng = _restart_rng(config.seed, 2, idx)
        return _run_em(net, weights, config.c, scheme, rng,
                       config.max_iter, config.tol)

    if n_jobs == 1 or config.restarts == 1:
        runs = [one_restart(i) for i in range(config.restarts)]
    else:
        runs = Parallel(n_jobs=n_jobs)(
            delayed(one_restart)(i) for i in range(config.restarts))

    records = []
    for params_i, trace_i, _ in runs:
        records.append(RestartRecord(
            final_log_likelihood=float(trace_i[-1]),
            iterations=len(trace_i) - 1,
            scheme=scheme,
            partition=hard_partition(params_i).assignment,
        ))
    finals = np.array([r.final_log_likelihood for r in records])
    best = int(np.argmax(finals))          # ties: smallest index
    params, trace, floored = runs[best]
    return FitResult(
        params=params,
        log_likelihood_trace=trace,
        partition=hard_partition(params),
        per_restart=tuple(records),
        chosen_scheme=scheme,
        best_restart=best,
        weights=weights,
        skipped_attr_entries=int(skipped),
        degenerate_nodes=tuple(int(i) for i in zero_score_rows(params)),
        floored_rates=int(floored),
    )
