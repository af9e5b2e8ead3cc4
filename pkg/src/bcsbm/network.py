"""Core containers: undirected attributed networks and node partitions.

A network holds an undirected simple graph (self-loops allowed, stored once),
a sparse binary node-attribute matrix, and optional ground-truth class labels.
Nodes are relabeled to dense indices 0..n-1; the original identifiers are kept
for file round-trips.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

__all__ = ["AttributedNetwork", "Partition", "build_network", "edge_csr"]


def _sorted_ids(ids):
    """Deterministic ordering for string ids: numeric when every id parses as
    an int, lexicographic otherwise.  Input line order never matters."""
    ids = list(ids)
    try:
        return sorted(ids, key=lambda s: (int(s), s))
    except ValueError:
        return sorted(ids)


def edge_csr(n: int, ei: np.ndarray, ej: np.ndarray, drop_self: bool = False):
    """CSR adjacency (indptr, indices) from canonical edge arrays.

    Each non-loop edge appears in both endpoint rows; a self-loop appears
    once in its row unless drop_self is set.  Rows are sorted.
    """
    if drop_self:
        keep = ei != ej
        ei, ej = ei[keep], ej[keep]
        src = np.concatenate([ei, ej])
        dst = np.concatenate([ej, ei])
    else:
        loops = ei == ej
        src = np.concatenate([ei, ej[~loops]])
        dst = np.concatenate([ej, ei[~loops]])
    order = np.lexsort((dst, src))
    src, dst = src[order], dst[order]
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.add.at(indptr, src + 1, 1)
    np.cumsum(indptr, out=indptr)
    return indptr, dst.astype(np.int64)


@dataclass(frozen=True)
class AttributedNetwork:
    """Undirected network with binary node attributes.

    Edges are canonical: ei[k] <= ej[k], lexicographically sorted, no
    duplicates.  Attribute presences (attr_node[p], attr_index[p]) are the
    (i, k) pairs with x_ik = 1, sorted the same way.
    """

    n: int
    ei: np.ndarray
    ej: np.ndarray
    attr_node: np.ndarray
    attr_index: np.ndarray
    n_attrs: int
    node_ids: tuple
    labels: np.ndarray | None = None
    label_values: tuple = ()
    duplicate_edges: int = 0
    duplicate_attrs: int = 0

    @property
    def m(self) -> int:
        """Edge count: unordered linked pairs plus self-loops."""
        return len(self.ei)

    @property
    def n_self_loops(self) -> int:
        return int(np.count_nonzero(self.ei == self.ej))

    @property
    def n_attr_entries(self) -> int:
        return len(self.attr_node)

    @cached_property
    def csr(self):
        """(indptr, indices) with self-loop neighbors kept (listed once)."""
        return edge_csr(self.n, self.ei, self.ej)

    @cached_property
    def csr_simple(self):
        """(indptr, indices) with self-loops stripped, for path statistics."""
        return edge_csr(self.n, self.ei, self.ej, drop_self=True)

    def id_of(self, i: int):
        return self.node_ids[i]

    def index_of(self, node_id) -> int:
        return self._id_lookup[str(node_id)]

    @cached_property
    def _id_lookup(self):
        return {v: i for i, v in enumerate(self.node_ids)}

    def label_partition(self) -> "Partition":
        """Ground-truth labels as a Partition; raises if labels are absent."""
        if self.labels is None:
            raise ValueError("network has no ground-truth labels")
        return Partition(self.labels.copy(), len(self.label_values))


@dataclass(frozen=True)
class Partition:
    """Hard assignment of every node to one community.

    assignment[i] is the community of node i, an integer in 0..c-1.
    c may exceed the number of communities actually used.
    """

    assignment: np.ndarray
    c: int

    def __post_init__(self):
        a = np.asarray(self.assignment, dtype=np.int64)
        object.__setattr__(self, "assignment", a)
        if a.ndim != 1:
            raise ValueError("assignment must be one-dimensional")
        if len(a) and (a.min() < 0 or a.max() >= self.c):
            raise ValueError(f"community indices must lie in 0..{self.c - 1}")

    @property
    def n(self) -> int:
        return len(self.assignment)

    def sizes(self) -> np.ndarray:
        return np.bincount(self.assignment, minlength=self.c)


def build_network(edges, attributes, n_attrs: int, labels=None) -> AttributedNetwork:
    """Assemble a canonical AttributedNetwork from raw id-based input.

    Args:
        edges: iterable of (id_a, id_b) pairs; order within a pair and
            duplicate pairs do not matter (duplicates collapse, counted).
        attributes: iterable of (node_id, attr_index) presence pairs.
        n_attrs: number of attribute columns K; indices must lie in 0..K-1.
        labels: optional {node_id: label} mapping or iterable of
            (node_id, label) pairs; when given, every node must be covered.

    The node set is the union of ids seen in edges, attributes, and labels.
    Ids and label values are normalized to strings so that file round-trips
    are exact.
    """
    edges = [(str(a), str(b)) for a, b in edges]
    attributes = [(str(v), int(k)) for v, k in attributes]
    if labels is not None:
        items = labels.items() if isinstance(labels, dict) else labels
        labels = {str(v): str(lab) for v, lab in items}

    if n_attrs < 0:
        raise ValueError("n_attrs must be nonnegative")
    for v, k in attributes:
        if k < 0 or k >= n_attrs:
            raise ValueError(
                f"attribute index {k} out of range 0..{n_attrs - 1} for node {v!r}"
            )

    seen = set()
    for a, b in edges:
        seen.add(a)
        seen.add(b)
    seen.update(v for v, _ in attributes)
    if labels:
        seen.update(labels)
    node_ids = tuple(_sorted_ids(seen))
    idx = {v: i for i, v in enumerate(node_ids)}
    n = len(node_ids)

    if edges:
        raw = np.array([[idx[a], idx[b]] for a, b in edges], dtype=np.int64)
        lo = raw.min(axis=1)
        hi = raw.max(axis=1)
        pairs = np.unique(np.stack([lo, hi], axis=1), axis=0)
        ei, ej = pairs[:, 0], pairs[:, 1]
        dup_e = len(raw) - len(pairs)
    else:
        ei = ej = np.empty(0, dtype=np.int64)
        dup_e = 0

    if attributes:
        raw = np.array([[idx[v], k] for v, k in attributes], dtype=np.int64)
        pairs = np.unique(raw, axis=0)
        an, ak = pairs[:, 0], pairs[:, 1]
        dup_a = len(raw) - len(pairs)
    else:
        an = ak = np.empty(0, dtype=np.int64)
        dup_a = 0

    lab_arr = None
    lab_values = ()
    if labels:
        missing = [v for v in node_ids if v not in labels]
        if missing:
            raise ValueError(f"label missing for node {missing[0]!r}")
        lab_values = tuple(_sorted_ids(set(labels.values())))
        code = {v: i for i, v in enumerate(lab_values)}
        lab_arr = np.array([code[labels[v]] for v in node_ids], dtype=np.int64)

    return AttributedNetwork(
        n=n, ei=ei, ej=ej,
        attr_node=an, attr_index=ak, n_attrs=int(n_attrs),
        node_ids=node_ids, labels=lab_arr, label_values=lab_values,
        duplicate_edges=int(dup_e), duplicate_attrs=int(dup_a),
    )
