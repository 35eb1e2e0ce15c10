"""Benchmark utilities: splits, F1 scores, and planted partitions.

The conventions follow the usual multi-class bookkeeping: micro scores
pool true/false positive counts over classes, macro scores average the
per-class precision and recall first and take the harmonic mean of the
two averages, and any 0/0 ratio along the way counts as 0.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import FormatError
from .graph import Graph


@dataclass(frozen=True)
class LabeledDataset:
    """Ground-truth class per node, classes indexed 0..n_classes-1."""

    labels: np.ndarray
    n_classes: int

    def __post_init__(self) -> None:
        labels = np.asarray(self.labels, dtype=int)
        if labels.ndim != 1 or labels.size == 0:
            raise ValueError("labels must be a non-empty 1-d array")
        if self.n_classes < 2:
            raise ValueError("need at least two classes")
        if labels.min() < 0 or labels.max() >= self.n_classes:
            raise ValueError("label out of range")
        counts = np.bincount(labels, minlength=self.n_classes)
        if np.any(counts == 0):
            missing = int(np.flatnonzero(counts == 0)[0])
            raise ValueError(f"class {missing} has no members")
        object.__setattr__(self, "labels", labels)

    @property
    def n(self) -> int:
        return self.labels.size


@dataclass(frozen=True)
class F1Report:
    """Micro/macro F1 with the per-class counts they came from."""

    micro_f1: float
    macro_f1: float
    tp: np.ndarray
    fp: np.ndarray
    fn: np.ndarray

    @property
    def evaluated(self) -> int:
        return int(self.tp.sum() + self.fn.sum())


def _ratio(num: float, den: float) -> float:
    return num / den if den > 0 else 0.0


def train_test_split(
    dataset: LabeledDataset,
    train_fraction: float,
    seed: int,
    stratified: bool = True,
) -> tuple[dict[int, int], np.ndarray]:
    """Seeded split into a training label map and holdout indices.

    Stratified mode draws round(fraction * class size) nodes per class
    without replacement, so every class lands in the training set; a
    fraction too small to give some class even one node is rejected, as
    is a split that leaves the holdout empty. Unstratified mode draws
    round(fraction * n) nodes from the whole range and offers no
    per-class guarantee.
    """
    if not 0.0 < train_fraction < 1.0:
        raise ValueError("train fraction must lie strictly between 0 and 1")
    rng = np.random.default_rng(seed)
    n = dataset.n
    chosen: list[np.ndarray] = []
    if stratified:
        for c in range(dataset.n_classes):
            members = np.flatnonzero(dataset.labels == c)
            count = int(round(train_fraction * members.size))
            if count == 0:
                raise ValueError(
                    f"train fraction {train_fraction} cannot represent class {c} "
                    f"({members.size} members)"
                )
            chosen.append(rng.choice(members, size=count, replace=False))
    else:
        count = int(round(train_fraction * n))
        if count == 0:
            raise ValueError(f"train fraction {train_fraction} selects no nodes")
        chosen.append(rng.choice(n, size=count, replace=False))
    train = np.sort(np.concatenate(chosen))
    if train.size >= n:
        raise ValueError("split leaves an empty holdout")
    mask = np.ones(n, dtype=bool)
    mask[train] = False
    holdout = np.flatnonzero(mask)
    label_map = {int(i): int(dataset.labels[i]) for i in train}
    return label_map, holdout


def micro_macro_f1(
    truth: np.ndarray,
    predicted: np.ndarray,
    holdout: np.ndarray | None = None,
    n_classes: int | None = None,
) -> F1Report:
    """Score predictions against ground truth on the holdout nodes.

    Micro-F1 pools counts: precision = recall = sum TP / (sum TP + sum
    FP or FN). Macro-F1 averages per-class precision and recall without
    weighting and combines the two averages harmonically. Classes the
    holdout never touches contribute zeros to the macro averages.
    """
    truth = np.asarray(truth, dtype=int)
    predicted = np.asarray(predicted, dtype=int)
    if truth.shape != predicted.shape:
        raise ValueError("truth and prediction vectors must have equal length")
    if holdout is not None:
        holdout = np.asarray(holdout, dtype=int)
        if holdout.size == 0:
            raise ValueError("holdout is empty")
        truth = truth[holdout]
        predicted = predicted[holdout]
    if truth.size == 0:
        raise ValueError("nothing to evaluate")
    if n_classes is None:
        n_classes = int(max(truth.max(), predicted.max())) + 1
    elif max(truth.max(), predicted.max()) >= n_classes:
        raise ValueError("class index out of range for the declared class count")
    tp = np.zeros(n_classes, dtype=int)
    fp = np.zeros(n_classes, dtype=int)
    fn = np.zeros(n_classes, dtype=int)
    for c in range(n_classes):
        tp[c] = int(np.sum((predicted == c) & (truth == c)))
        fp[c] = int(np.sum((predicted == c) & (truth != c)))
        fn[c] = int(np.sum((predicted != c) & (truth == c)))
    micro_p = _ratio(tp.sum(), tp.sum() + fp.sum())
    micro_r = _ratio(tp.sum(), tp.sum() + fn.sum())
    micro = _ratio(2.0 * micro_p * micro_r, micro_p + micro_r)
    per_p = np.array([_ratio(tp[c], tp[c] + fp[c]) for c in range(n_classes)])
    per_r = np.array([_ratio(tp[c], tp[c] + fn[c]) for c in range(n_classes)])
    macro_p = float(per_p.mean())
    macro_r = float(per_r.mean())
    macro = _ratio(2.0 * macro_p * macro_r, macro_p + macro_r)
    return F1Report(micro_f1=float(micro), macro_f1=float(macro), tp=tp, fp=fp, fn=fn)


def planted_partition(
    blocks: int,
    block_size: int,
    p_in: float,
    p_out: float,
    seed: int,
    ensure_connected: bool = False,
) -> tuple[Graph, LabeledDataset]:
    """Random graph with equal-size blocks and two edge densities.

    Within-block pairs get an edge with probability ``p_in``, others
    with ``p_out``. With ``ensure_connected`` a handful of seeded
    repair edges is added so sparse draws come out connected: isolated
    nodes are attached inside their block and remaining components are
    chained together. Expected degree below 1 triggers a warning.
    """
    if blocks < 2 or block_size < 1:
        raise ValueError("need at least two blocks of at least one node")
    if not (0.0 <= p_out <= p_in <= 1.0):
        raise ValueError("require 0 <= p_out <= p_in <= 1")
    n = blocks * block_size
    labels = np.repeat(np.arange(blocks), block_size)
    expected_degree = p_in * (block_size - 1) + p_out * (n - block_size)
    if expected_degree < 1.0:
        warnings.warn(
            f"expected degree {expected_degree:.3f} < 1: isolated nodes likely",
            RuntimeWarning,
            stacklevel=2,
        )
    rng = np.random.default_rng(seed)
    same = labels[:, None] == labels[None, :]
    prob = np.where(same, p_in, p_out)
    draw = rng.random((n, n))
    upper = np.triu(np.ones((n, n), dtype=bool), k=1)
    present = upper & (draw < prob)
    edge_array = np.argwhere(present)
    edges = [(int(u), int(w), 1.0) for u, w in edge_array]
    if ensure_connected:
        edges = _repair_connectivity(edges, labels, n, block_size, rng)
    g = Graph.from_edges(edges, n=n, ids=[str(i) for i in range(n)])
    return g, LabeledDataset(labels=labels, n_classes=blocks)


def _repair_connectivity(
    edges: list[tuple[int, int, float]],
    labels: np.ndarray,
    n: int,
    block_size: int,
    rng: np.random.Generator,
) -> list[tuple[int, int, float]]:
    existing = {(u, w) for u, w, _ in edges}

    def add(u: int, w: int) -> None:
        key = (min(u, w), max(u, w))
        if u != w and key not in existing:
            existing.add(key)
            edges.append((key[0], key[1], 1.0))

    degree = np.zeros(n, dtype=int)
    for u, w, _ in edges:
        degree[u] += 1
        degree[w] += 1
    for u in np.flatnonzero(degree == 0):
        mates = np.flatnonzero(labels == labels[u])
        mates = mates[mates != u]
        if mates.size:
            add(int(u), int(rng.choice(mates)))
        else:
            add(int(u), int(rng.choice([v for v in range(n) if v != u])))
    components = _components(edges, n)
    while len(components) > 1:
        a = components[0]
        b = components[1]
        add(int(rng.choice(a)), int(rng.choice(b)))
        components = _components(edges, n)
    return edges


def _components(edges: list[tuple[int, int, float]], n: int) -> list[np.ndarray]:
    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, w, _ in edges:
        ru, rw = find(u), find(w)
        if ru != rw:
            parent[ru] = rw
    roots: dict[int, list[int]] = {}
    for v in range(n):
        roots.setdefault(find(v), []).append(v)
    return [np.array(members) for members in roots.values()]


def load_labels(path: str | Path, g: Graph) -> tuple[LabeledDataset, list[str]]:
    """Read a label file of ``<node_id> <label>`` lines for a graph.

    Every graph node must be labeled exactly once. Label names are
    mapped to class indices in sorted order; the sorted names are
    returned so reports can use the original spelling.
    """
    raw: dict[int, str] = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            text = line.split("#", 1)[0].strip()
            if not text:
                continue
            fields = text.split()
            if len(fields) != 2:
                raise FormatError(f"line {lineno}: expected '<node_id> <label>'")
            node, name = fields
            try:
                idx = g.index_of(node)
            except KeyError:
                raise FormatError(f"line {lineno}: unknown node id {node!r}") from None
            if idx in raw:
                raise FormatError(f"line {lineno}: node {node!r} labeled twice")
            raw[idx] = name
    if len(raw) != g.n:
        raise FormatError(f"label file covers {len(raw)} of {g.n} nodes")
    names = sorted(set(raw.values()))
    index = {name: i for i, name in enumerate(names)}
    labels = np.array([index[raw[i]] for i in range(g.n)])
    return LabeledDataset(labels=labels, n_classes=len(names)), names


def write_report_tsv(rows: Sequence[tuple[str, object]], path: str | Path) -> None:
    """Write metric/value pairs as TSV, floats at 17 significant digits."""
    with open(path, "w", newline="\n") as fh:
        fh.write("metric\tvalue\n")
        for key, value in rows:
            if isinstance(value, float):
                fh.write(f"{key}\t{value:.17g}\n")
            else:
                fh.write(f"{key}\t{value}\n")
