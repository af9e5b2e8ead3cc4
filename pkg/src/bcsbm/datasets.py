"""File ingest and export.

Two text formats, whitespace-delimited, UTF-8:

* citation corpora: a content file with lines
  ``<node_id> <w_1> ... <w_K> <label>`` (w in {0,1}) and a cites file with
  ``<id_a> <id_b>`` lines, read as undirected;
* a generic interchange format: an edges file (two ids per line), an optional
  attributes file (header line ``K <int>``, then ``<node_id> <attr_index>``
  presence pairs), and an optional labels file (``<node_id> <label>``).

Loading is order-independent: permuting input lines yields the same network.
Partition files are ``<node_id> <community>`` lines, communities numbered
from 1.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .network import AttributedNetwork, Partition, build_network

__all__ = [
    "DataFormatError",
    "DatasetManifest",
    "IngestReport",
    "EXPECTED_STATS",
    "REFERENCE_SCORES",
    "manifest_for",
    "load_citation_dataset",
    "load_generic",
    "write_generic",
    "write_partition",
    "load_partition",
]


class DataFormatError(ValueError):
    """Unparseable input; the message carries file and line number."""


# Published corpus statistics (n, m, K, classes) used to sanity-check loads.
EXPECTED_STATS = {
    "cornell": (195, 304, 1703, 5),
    "texas": (187, 328, 1703, 5),
    "washington": (230, 446, 1703, 5),
    "wisconsin": (265, 530, 1703, 5),
    "cora": (2708, 5429, 1433, 7),
    "citeseer": (3312, 4723, 3703, 6),
}

# Published 30-run mean/max reference scores for this model on the same
# corpora, shown as comparison columns by the benchmark command.
REFERENCE_SCORES = {
    "cornell": {"nmi": (0.3550, 0.4555), "pwf": (0.4882, 0.6637)},
    "texas": {"nmi": (0.3214, 0.4636), "pwf": (0.4852, 0.5854)},
    "washington": {"nmi": (0.3617, 0.4106), "pwf": (0.5233, 0.6175)},
    "wisconsin": {"nmi": (0.4219, 0.4787), "pwf": (0.5916, 0.6501)},
    "cora": {"nmi": (0.3360, 0.3593), "pwf": (0.3846, 0.4073)},
    "citeseer": {"nmi": (0.3045, 0.3862), "pwf": (0.4014, 0.4318)},
}


@dataclass(frozen=True)
class DatasetManifest:
    """Where a citation corpus lives and, optionally, what to expect of it."""

    name: str
    content_path: str
    cites_path: str
    expected_n: int | None = None
    expected_m: int | None = None
    expected_attrs: int | None = None
    expected_classes: int | None = None


@dataclass(frozen=True)
class IngestReport:
    """Counts of repairs applied while loading."""

    dangling_citations: int = 0
    duplicate_edges: int = 0
    duplicate_attrs: int = 0
    notes: tuple = ()


def manifest_for(name: str, data_dir) -> DatasetManifest:
    """Manifest for a corpus laid out as <data_dir>/<name>.content and
    <data_dir>/<name>.cites, with expected stats attached for known names."""
    d = Path(data_dir)
    exp = EXPECTED_STATS.get(name.lower(), (None, None, None, None))
    return DatasetManifest(
        name=name,
        content_path=str(d / f"{name}.content"),
        cites_path=str(d / f"{name}.cites"),
        expected_n=exp[0], expected_m=exp[1],
        expected_attrs=exp[2], expected_classes=exp[3],
    )


def _lines(path):
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            parts = raw.split()
            if parts:
                yield lineno, parts


def load_citation_dataset(manifest: DatasetManifest):
    """Load a citation corpus -> (AttributedNetwork, IngestReport).

    Citations are symmetrized; citations naming ids absent from the content
    file are dropped and counted.  Expected-stat mismatches warn rather than
    fail (reported edge counts in the literature may predate symmetrization
    and dedup).
    """
    attrs = []
    labels = {}
    n_attrs = None
    for lineno, parts in _lines(manifest.content_path):
        if len(parts) < 2:
            raise DataFormatError(
                f"{manifest.content_path}:{lineno}: need <id> <w_1>..<w_K> <label>")
        node, vals, label = parts[0], parts[1:-1], parts[-1]
        if n_attrs is None:
            n_attrs = len(vals)
        elif len(vals) != n_attrs:
            raise DataFormatError(
                f"{manifest.content_path}:{lineno}: {len(vals)} attribute "
                f"columns, expected {n_attrs}")
        if node in labels:
            raise DataFormatError(
                f"{manifest.content_path}:{lineno}: duplicate node id {node!r}")
        for k, v in enumerate(vals):
            if v == "1":
                attrs.append((node, k))
            elif v != "0":
                raise DataFormatError(
                    f"{manifest.content_path}:{lineno}: attribute value {v!r} "
                    f"is not binary")
        labels[node] = label

    known = set(labels)
    edges = []
    dangling = 0
    any_cites = False
    for lineno, parts in _lines(manifest.cites_path):
        any_cites = True
        if len(parts) != 2:
            raise DataFormatError(
                f"{manifest.cites_path}:{lineno}: need exactly two ids")
        a, b = parts
        if a in known and b in known:
            edges.append((a, b))
        else:
            dangling += 1
    notes = []
    if not any_cites:
        msg = f"{manifest.cites_path}: no citations found; network has no edges"
        warnings.warn(msg)
        notes.append(msg)

    net = build_network(edges, attrs, n_attrs or 0, labels=labels)
    for what, got, want in [
        ("n", net.n, manifest.expected_n),
        ("m", net.m, manifest.expected_m),
        ("K", net.n_attrs, manifest.expected_attrs),
        ("classes", len(net.label_values), manifest.expected_classes),
    ]:
        if want is not None and got != want:
            msg = f"{manifest.name}: {what}={got} but expected {want}"
            warnings.warn(msg)
            notes.append(msg)
    report = IngestReport(
        dangling_citations=dangling,
        duplicate_edges=net.duplicate_edges,
        duplicate_attrs=net.duplicate_attrs,
        notes=tuple(notes),
    )
    return net, report


def load_generic(edges_path, attrs_path=None, labels_path=None):
    """Load the generic interchange format -> (AttributedNetwork, IngestReport).

    Nodes are the union of ids across all three files, so attribute-only or
    label-only nodes are retained as isolated nodes.
    """
    edges = []
    for lineno, parts in _lines(edges_path):
        if len(parts) != 2:
            raise DataFormatError(f"{edges_path}:{lineno}: need exactly two ids")
        edges.append((parts[0], parts[1]))

    attrs = []
    n_attrs = 0
    if attrs_path is not None:
        rows = _lines(attrs_path)
        header = next(rows, None)
        if header is None:
            raise DataFormatError(f"{attrs_path}: missing 'K <int>' header")
        lineno, parts = header
        if len(parts) != 2 or parts[0] != "K":
            raise DataFormatError(f"{attrs_path}:{lineno}: expected 'K <int>' header")
        try:
            n_attrs = int(parts[1])
        except ValueError:
            raise DataFormatError(f"{attrs_path}:{lineno}: K is not an integer") from None
        for lineno, parts in rows:
            if len(parts) != 2:
                raise DataFormatError(
                    f"{attrs_path}:{lineno}: need <node_id> <attr_index>")
            try:
                k = int(parts[1])
            except ValueError:
                raise DataFormatError(
                    f"{attrs_path}:{lineno}: attribute index {parts[1]!r} "
                    f"is not an integer") from None
            if not 0 <= k < n_attrs:
                raise DataFormatError(
                    f"{attrs_path}:{lineno}: attribute index {k} out of "
                    f"range 0..{n_attrs - 1}")
            attrs.append((parts[0], k))

    labels = None
    if labels_path is not None:
        labels = {}
        for lineno, parts in _lines(labels_path):
            if len(parts) != 2:
                raise DataFormatError(f"{labels_path}:{lineno}: need <node_id> <label>")
            if parts[0] in labels:
                raise DataFormatError(
                    f"{labels_path}:{lineno}: duplicate label for {parts[0]!r}")
            labels[parts[0]] = parts[1]

    net = build_network(edges, attrs, n_attrs, labels=labels)
    report = IngestReport(duplicate_edges=net.duplicate_edges,
                          duplicate_attrs=net.duplicate_attrs)
    return net, report


def write_generic(net: AttributedNetwork, edges_path, attrs_path=None,
                  labels_path=None) -> None:
    """Canonical export readable by load_generic (round-trips exactly)."""
    with open(edges_path, "w", encoding="utf-8") as fh:
        for a, b in zip(net.ei, net.ej):
            fh.write(f"{net.id_of(a)} {net.id_of(b)}\n")
    if attrs_path is not None:
        with open(attrs_path, "w", encoding="utf-8") as fh:
            fh.write(f"K {net.n_attrs}\n")
            for v, k in zip(net.attr_node, net.attr_index):
                fh.write(f"{net.id_of(v)} {k}\n")
    if labels_path is not None:
        if net.labels is None:
            raise ValueError("network has no labels to write")
        with open(labels_path, "w", encoding="utf-8") as fh:
            for i in range(net.n):
                fh.write(f"{net.id_of(i)} {net.label_values[net.labels[i]]}\n")


def write_partition(path, node_ids, partition: Partition) -> None:
    """Write `<node_id> <community>` lines, communities numbered from 1."""
    with open(path, "w", encoding="utf-8") as fh:
        for v, g in zip(node_ids, partition.assignment):
            fh.write(f"{v} {int(g) + 1}\n")


def load_partition(path):
    """Read a partition file -> (node_ids tuple, community labels tuple).

    Community tokens are kept verbatim; scoring treats them categorically.
    """
    ids, groups = [], []
    seen = set()
    for lineno, parts in _lines(path):
        if len(parts) != 2:
            raise DataFormatError(f"{path}:{lineno}: need <node_id> <community>")
        if parts[0] in seen:
            raise DataFormatError(f"{path}:{lineno}: duplicate node id {parts[0]!r}")
        seen.add(parts[0])
        ids.append(parts[0])
        groups.append(parts[1])
    if not ids:
        raise DataFormatError(f"{path}: empty partition file")
    return tuple(ids), tuple(groups)
