"""Multiway classification trees over categorical slot vectors.

Split criterion is information gain ratio with ties broken by lexicographic
slot name.  When every remaining slot has zero gain but the node is still
impure (XOR-style data), the first multi-valued untested slot is split anyway
so that consistent training sets are always fit exactly.  Prediction falls
back to the node's majority class when it meets a value unseen in training.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field

from sltk.errors import ToolkitError

Example = tuple[dict[str, str], str]


@dataclass
class TreeNode:
    # leaf: slot is None; internal: children keyed by observed slot value
    slot: str | None
    majority: str
    distribution: dict[str, int]
    children: dict[str, "TreeNode"] = field(default_factory=dict)

    @property
    def is_leaf(self) -> bool:
        return self.slot is None


@dataclass
class ClassTree:
    root: TreeNode
    slots: list[str]
    classes: list[str]

    def predict(self, x: dict[str, str]) -> tuple[str, dict[str, float]]:
        node = self.root
        while not node.is_leaf:
            if node.slot not in x:
                raise ToolkitError("E_SLOT_MISSING", node.slot)
            child = node.children.get(x[node.slot])
            if child is None:
                break  # unseen value: answer with this node's majority
            node = child
        total = sum(node.distribution.values())
        dist = {c: n / total for c, n in node.distribution.items()}
        return node.majority, dist

    def depth(self) -> int:
        def rec(node: TreeNode) -> int:
            if node.is_leaf:
                return 0
            return 1 + max(rec(c) for c in node.children.values())

        return rec(self.root)


def _entropy(counts: Counter) -> float:
    total = sum(counts.values())
    h = 0.0
    for n in counts.values():
        if n:
            p = n / total
            h -= p * math.log2(p)
    return h


def gain_ratio(examples: list[Example], slot: str) -> float:
    """Information gain of splitting on ``slot`` divided by the split info.

    Returns 0.0 when the slot takes a single value (useless split).
    """
    label_counts = Counter(y for _, y in examples)
    by_value: dict[str, Counter] = {}
    for x, y in examples:
        by_value.setdefault(x[slot], Counter())[y] += 1
    if len(by_value) < 2:
        return 0.0
    total = len(examples)
    remainder = sum(
        sum(c.values()) / total * _entropy(c) for c in by_value.values()
    )
    gain = _entropy(label_counts) - remainder
    split_info = _entropy(Counter({v: sum(c.values()) for v, c in by_value.items()}))
    if gain <= 1e-12 or split_info <= 0.0:
        return 0.0
    return gain / split_info


def _majority(counts: Counter) -> str:
    # deterministic: highest count, then lexicographic class
    return min(counts.items(), key=lambda kv: (-kv[1], kv[0]))[0]


def _grow(examples: list[Example], remaining: list[str],
          min_leaf: int, max_depth: int | None, depth: int) -> TreeNode:
    counts = Counter(y for _, y in examples)
    node = TreeNode(None, _majority(counts), dict(sorted(counts.items())))
    if len(counts) == 1 or not remaining:
        return node
    if max_depth is not None and depth >= max_depth:
        return node
    if len(examples) < 2 * min_leaf:
        return node

    scored = [(slot, gain_ratio(examples, slot)) for slot in sorted(remaining)]
    # strict > keeps the lexicographically smallest slot on ties
    best_slot, best_score = None, 0.0
    for slot, score in scored:
        if best_slot is None or score > best_score:
            best_slot, best_score = slot, score
    if best_score <= 0.0:
        # forced split on the first multi-valued slot keeps consistent sets fittable
        best_slot = next(
            (s for s, _ in scored if len({x[s] for x, _ in examples}) > 1), None
        )
        if best_slot is None:
            return node
    node.slot = best_slot
    rest = [s for s in remaining if s != best_slot]
    by_value: dict[str, list[Example]] = {}
    for ex in examples:
        by_value.setdefault(ex[0][best_slot], []).append(ex)
    for value in sorted(by_value):
        node.children[value] = _grow(by_value[value], rest, min_leaf, max_depth, depth + 1)
    return node


def train_classify(data: list[Example], min_leaf: int = 1,
                   max_depth: int | None = None) -> ClassTree:
    if not data:
        raise ToolkitError("E_EMPTY_TRAINSET", "classification tree needs >= 1 example")
    slots = sorted(data[0][0])
    for x, _ in data:
        if sorted(x) != slots:
            raise ToolkitError("E_SLOT_MISMATCH", "all vectors must share one slot inventory")
    root = _grow(data, slots, min_leaf, max_depth, 0)
    classes = sorted({y for _, y in data})
    return ClassTree(root, slots, classes)
