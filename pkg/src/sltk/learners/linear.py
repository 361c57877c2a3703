"""Multiclass averaged perceptron over feature bags.

Training promotes the gold class and demotes the predicted class on every
mistake; the returned model uses the running average of all weight vectors,
computed lazily with per-weight timestamps.  Shuffling is driven by the seed,
so identical data and seed give bit-identical models.  Features map to dense
indices in first-seen order, which fixes the serialized layout.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from sltk.errors import ToolkitError


@dataclass
class LinearModel:
    classes: list[str]
    feature_index: dict[str, int]
    # averaged weights, shape [n_features][n_classes], row-major python floats
    weights: list[list[float]]
    epochs: int
    seed: int

    def scores(self, bag: set[str] | frozenset[str]) -> dict[str, float]:
        totals = [0.0] * len(self.classes)
        for feat in bag:
            idx = self.feature_index.get(feat)
            if idx is None:
                continue  # unseen features contribute nothing
            row = self.weights[idx]
            for c in range(len(totals)):
                totals[c] += row[c]
        return dict(zip(self.classes, totals))

    def predict(self, bag: set[str] | frozenset[str]) -> str:
        scores = self.scores(bag)
        # highest score, ties by lexicographic class name
        return min(scores.items(), key=lambda kv: (-kv[1], kv[0]))[0]


def train_linear(data: list[tuple[set[str], str]], epochs: int = 5,
                 seed: int = 0) -> LinearModel:
    if not data:
        raise ToolkitError("E_EMPTY_TRAINSET", "linear model needs >= 1 example")
    classes = sorted({y for _, y in data})
    class_idx = {c: i for i, c in enumerate(classes)}

    feature_index: dict[str, int] = {}
    examples: list[tuple[list[int], int]] = []
    for bag, y in data:
        feats = []
        for f in sorted(bag):
            if f not in feature_index:
                feature_index[f] = len(feature_index)
            feats.append(feature_index[f])
        examples.append((feats, class_idx[y]))

    n_feat, n_cls = len(feature_index), len(classes)
    w = [[0.0] * n_cls for _ in range(n_feat)]
    acc = [[0.0] * n_cls for _ in range(n_feat)]
    stamp = [[0] * n_cls for _ in range(n_feat)]
    rng = random.Random(seed)
    order = list(range(len(examples)))
    t = 0

    def bump(f: int, c: int, delta: float) -> None:
        acc[f][c] += (t - stamp[f][c]) * w[f][c]
        stamp[f][c] = t
        w[f][c] += delta

    for _ in range(epochs):
        rng.shuffle(order)
        for i in order:
            feats, gold = examples[i]
            best, best_score = 0, None
            for c in range(n_cls):
                s = sum(w[f][c] for f in feats)
                if best_score is None or s > best_score or (s == best_score and c < best):
                    best, best_score = c, s
            if best != gold:
                for f in feats:
                    bump(f, gold, 1.0)
                    bump(f, best, -1.0)
            t += 1

    total = max(t, 1)
    averaged = [
        [(acc[f][c] + (total - stamp[f][c]) * w[f][c]) / total for c in range(n_cls)]
        for f in range(n_feat)
    ]
    return LinearModel(classes, feature_index, averaged, epochs, seed)
