"""Datasets, shape matching, and clustering/classification scoring.

Also hosts the exhaustive non-private frequent-shape oracle used as ground
truth in tests and end-to-end checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .ldp import RandomSource
from .metrics import DistanceMetric, distance
from .series import SymbolSequence, TimeSeries, normalize, transform_series


@dataclass(eq=False)
class Dataset:
    """A list of labelled (or unlabelled) series plus optional class names."""

    instances: list[TimeSeries]
    class_names: list[str] | None = None

    def __post_init__(self):
        if not self.instances:
            raise ValueError("dataset must hold at least one instance")
        if self.class_names is not None:
            bound = len(self.class_names)
            for i, ts in enumerate(self.instances):
                if ts.label is not None and not 0 <= ts.label < bound:
                    raise ValueError(f"instance {i} labels class {ts.label} outside 0..{bound - 1}")

    def __len__(self) -> int:
        return len(self.instances)

    @property
    def labels(self) -> list[int | None]:
        return [ts.label for ts in self.instances]

    def num_classes(self) -> int:
        if self.class_names is not None:
            return len(self.class_names)
        labels = [lbl for lbl in self.labels if lbl is not None]
        return max(labels) + 1 if labels else 0


@dataclass(frozen=True)
class FrequentShapeQuery:
    """Neighborhood radius, metric, and count threshold for shape frequency."""

    theta: float
    metric: DistanceMetric
    min_count: int

    def __post_init__(self):
        if self.theta < 0:
            raise ValueError(f"theta must be >= 0, got {self.theta}")
        if self.min_count < 1:
            raise ValueError(f"min_count must be >= 1, got {self.min_count}")


def match_shape(seq: SymbolSequence, shapes: Sequence[SymbolSequence],
                metric: DistanceMetric) -> int:
    """Index of the closest shape; ties resolve to the smallest index."""
    if not shapes:
        raise ValueError("cannot match against an empty shape list")
    best_idx = 0
    best = distance(seq, shapes[0], metric)
    for i, shape in enumerate(shapes[1:], start=1):
        d = distance(seq, shape, metric)
        if d < best:
            best, best_idx = d, i
    return best_idx


def frequent_shapes_oracle(sequences: Sequence[SymbolSequence], query: FrequentShapeQuery,
                           alphabet_size: int | None = None,
                           max_length: int = 6, max_symbols: int = 4,
                           ) -> list[tuple[SymbolSequence, int]]:
    """Exhaustive ground truth: every no-adjacent-repeat sequence whose
    theta-neighborhood covers at least min_count dataset sequences.

    Brute force over the whole candidate universe; the length and alphabet
    caps guard against the exponential blow-up.  Results are ordered by
    frequency (desc), then lexicographically.
    """
    if not sequences:
        raise ValueError("oracle needs a non-empty dataset")
    t = alphabet_size if alphabet_size is not None else max(max(s.symbols) for s in sequences) + 1
    longest = min(max(len(s) for s in sequences), max_length)
    if t > max_symbols:
        raise ValueError(f"alphabet of {t} exceeds the oracle cap of {max_symbols}")
    if max(len(s) for s in sequences) > max_length:
        raise ValueError(f"sequences longer than the oracle cap of {max_length}")

    results: list[tuple[SymbolSequence, int]] = []
    frontier: list[tuple[int, ...]] = [()]
    for _ in range(longest):
        frontier = [prefix + (s,) for prefix in frontier for s in range(t)
                    if not prefix or prefix[-1] != s]
        for cand_syms in frontier:
            cand = SymbolSequence(cand_syms, compressed=True)
            freq = sum(1 for s in sequences if distance(cand, s, query.metric) <= query.theta)
            if freq >= query.min_count:
                results.append((cand, freq))
    results.sort(key=lambda item: (-item[1], item[0].symbols))
    return results


def adjusted_rand_index(predicted: Sequence[int], truth: Sequence[int]) -> float:
    """Chance-corrected partition agreement from the contingency table."""
    if len(predicted) != len(truth):
        raise ValueError("label vectors differ in length")
    n = len(predicted)
    if n < 2:
        raise ValueError("ARI needs at least 2 items")
    pred_ids = {lbl: i for i, lbl in enumerate(dict.fromkeys(predicted))}
    true_ids = {lbl: i for i, lbl in enumerate(dict.fromkeys(truth))}
    table = np.zeros((len(pred_ids), len(true_ids)), dtype=np.int64)
    for p, t in zip(predicted, truth):
        table[pred_ids[p], true_ids[t]] += 1
    comb2 = np.vectorize(lambda x: math.comb(int(x), 2))
    index = comb2(table).sum()
    row_comb = comb2(table.sum(axis=1)).sum()
    col_comb = comb2(table.sum(axis=0)).sum()
    expected = row_comb * col_comb / math.comb(n, 2)
    max_index = (row_comb + col_comb) / 2.0
    if max_index == expected:
        return 1.0 if index == expected else 0.0
    return float((index - expected) / (max_index - expected))


def classify_accuracy(test: Dataset, shapes: Sequence[SymbolSequence],
                      shape_labels: Sequence[int], metric: DistanceMetric,
                      t: int, w: int, *, no_sax: bool = False,
                      no_compress: bool = False) -> float:
    """Fraction of test instances whose nearest extracted shape carries the
    true label.  Instances go through the same symbolic front end."""
    if not test.instances:
        raise ValueError("empty test set")
    if len(shapes) != len(shape_labels):
        raise ValueError("every shape needs a label")
    correct = 0
    for ts in test.instances:
        seq = transform_series(ts, t, w, no_sax=no_sax, no_compress=no_compress)
        predicted = shape_labels[match_shape(seq, shapes, metric)]
        if predicted == ts.label:
            correct += 1
    return correct / len(test.instances)


def cluster_labels(dataset: Dataset, shapes: Sequence[SymbolSequence],
                   metric: DistanceMetric, t: int, w: int, *, no_sax: bool = False,
                   no_compress: bool = False) -> list[int]:
    """Assign every instance to its nearest extracted shape (cluster id)."""
    out = []
    for ts in dataset.instances:
        seq = transform_series(ts, t, w, no_sax=no_sax, no_compress=no_compress)
        out.append(match_shape(seq, shapes, metric))
    return out


def gen_trig_waves(count: int, lengths: Sequence[int], noise_sigma: float,
                   rng: RandomSource, mode: str = "full") -> Dataset:
    """Sine/cosine instances over one period, z-normalized, labelled 0/1.

    ``full`` squeezes one whole period into each requested length (shape
    stays put as the length varies); ``prefix`` samples the first L points
    of a 1000-point period (shape changes with the length).
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    if mode not in ("full", "prefix"):
        raise ValueError(f"mode must be 'full' or 'prefix', got {mode!r}")
    lengths = [int(v) for v in lengths]
    if any(v < 4 for v in lengths):
        raise ValueError("wave lengths must be >= 4")
    period = 1000
    instances: list[TimeSeries] = []
    for i in range(count):
        label = i % 2
        length = lengths[(i // 2) % len(lengths)]
        idx = np.arange(length)
        phase = 2.0 * np.pi * idx / (length if mode == "full" else period)
        values = np.cos(phase) if label else np.sin(phase)
        if noise_sigma > 0:
            values = values + rng.normal(noise_sigma, length)
        instances.append(normalize(TimeSeries(values, label=label)))
    return Dataset(instances, class_names=["sine", "cosine"])


def load_ucr(path: str | Path) -> Dataset:
    """Read UCR-style text: one instance per line, integer class label first,
    values after, tab- or comma-separated (auto-detected).  Lines may have
    differing lengths."""
    text = Path(path).read_text()
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValueError(f"{path}: no instances found")
    sep = "\t" if "\t" in lines[0] else ","
    raw: list[tuple[int, np.ndarray]] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        fields = line.strip().split(sep)
        if len(fields) < 2:
            raise ValueError(f"{path}:{lineno}: expected a label and at least one value")
        try:
            label = int(float(fields[0]))
            values = np.array([float(v) for v in fields[1:]])
        except ValueError:
            raise ValueError(f"{path}:{lineno}: unparseable field") from None
        raw.append((label, values))
    classes = sorted({label for label, _ in raw})
    class_ids = {lbl: i for i, lbl in enumerate(classes)}
    instances = [TimeSeries(values, label=class_ids[label]) for label, values in raw]
    return Dataset(instances, class_names=[str(lbl) for lbl in classes])


def write_ucr(dataset: Dataset, path: str | Path) -> None:
    """Write a dataset in the same tab-separated text format load_ucr reads."""
    with open(path, "w") as fh:
        for ts in dataset.instances:
            label = ts.label if ts.label is not None else 0
            fields = [str(label)] + [repr(float(v)) for v in ts.values]
            fh.write("\t".join(fields) + "\n")
