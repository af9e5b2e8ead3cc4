"""Partition agreement scores: normalized mutual information and pairwise F.

Both scores compare hard partitions of the same node set and are invariant
to community relabeling.
"""

from __future__ import annotations

import numpy as np

from .network import Partition

__all__ = ["confusion_counts", "nmi", "pwf"]


def _as_labels(p) -> np.ndarray:
    if isinstance(p, Partition):
        return p.assignment
    return np.asarray(p)


def confusion_counts(pred, truth) -> np.ndarray:
    """Contingency table N[r, s] = #nodes in predicted r and true s.

    Rows/columns follow np.unique order of the respective label sets, so
    empty communities never produce zero rows.
    """
    a = _as_labels(pred)
    b = _as_labels(truth)
    if a.shape != b.shape:
        raise ValueError("partitions cover different numbers of nodes")
    _, ai = np.unique(a, return_inverse=True)
    _, bi = np.unique(b, return_inverse=True)
    table = np.zeros((ai.max() + 1, bi.max() + 1), dtype=np.int64)
    np.add.at(table, (ai, bi), 1)
    return table

def nmi(pred, truth) -> float:
    """Normalized mutual information 2 I(A;B) / (H(A) + H(B)), natural log.

    Zero-count cells contribute nothing.  When both partitions are a single
    cluster (both entropies zero) the partitions coincide up to relabeling
    and the score is 1.
    """
    table = confusion_counts(pred, truth)
    total = table.sum()
    if total == 0:
        raise ValueError("empty partitions")
    rows = table.sum(axis=1)
    cols = table.sum(axis=0)
    hr = -np.sum(rows / total * np.log(rows / total))
    hc = -np.sum(cols / total * np.log(cols / total))
    if hr + hc == 0.0:
        return 1.0
    nz = table > 0
    # one nonzero per row and per column: the partitions coincide up to
    # relabeling, where the score is exactly 1 (rounding would blur it)
    if nz.sum(axis=0).max() == 1 and nz.sum(axis=1).max() == 1:
        return 1.0
    cells = table[nz] / total
    outer = np.outer(rows, cols)[nz] / (total * total)
    mi = np.sum(cells * np.log(cells / outer))
    return float(min(max(2.0 * mi / (hr + hc), 0.0), 1.0))


def _same_pairs(counts) -> int:
    counts = np.asarray(counts, dtype=np.int64)
    return int((counts * (counts - 1) // 2).sum())


def pwf(pred, truth) -> float:
    """Pairwise F-score between same-community pair sets.

    S = unordered node pairs sharing a predicted community, T = pairs sharing
    a true community; precision |S&T|/|S|, recall |S&T|/|T|, F their harmonic
    mean.  An empty S or T makes its ratio 0 and the score 0, except that two
    all-singleton partitions (both sets empty) agree perfectly and score 1.
    """
    table = confusion_counts(pred, truth)
    n_s = _same_pairs(table.sum(axis=1))
    n_t = _same_pairs(table.sum(axis=0))
    n_both = _same_pairs(table.ravel())
    if n_s == 0 and n_t == 0:
        return 1.0
    precision = n_both / n_s if n_s else 0.0
    recall = n_both / n_t if n_t else 0.0
    if precision + recall == 0.0:
        return 0.0
    return float(2.0 * precision * recall / (precision + recall))
