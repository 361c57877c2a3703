"""Regression trees with binary bag-membership questions and Gaussian leaves.

Each internal node asks "does the feature bag contain token t"; leaves hold a
mean vector, a diagonal variance vector, and (when voicing flags are supplied
with the targets) the fraction of voiced training frames.  The split that
maximally reduces total summed squared error is chosen greedily; ties go to
the lexicographically smallest token.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from sltk.errors import ToolkitError


@dataclass
class RegLeaf:
    mean: np.ndarray
    variance: np.ndarray
    count: int
    voiced_fraction: float | None = None


@dataclass
class RegNode:
    question: str
    yes: "RegNode | RegLeaf"
    no: "RegNode | RegLeaf"


@dataclass
class RegTree:
    root: "RegNode | RegLeaf"
    dim: int

    def predict(self, bag: frozenset[str] | set[str]) -> RegLeaf:
        node = self.root
        while isinstance(node, RegNode):
            node = node.yes if node.question in bag else node.no
        return node

    def leaves(self) -> list[RegLeaf]:
        out: list[RegLeaf] = []
        stack: list[RegNode | RegLeaf] = [self.root]
        while stack:
            n = stack.pop()
            if isinstance(n, RegLeaf):
                out.append(n)
            else:
                stack.extend((n.no, n.yes))
        return out

    def total_sse(self) -> float:
        return float(sum(leaf.variance.sum() * leaf.count for leaf in self.leaves()))


def _make_leaf(targets: np.ndarray, voiced: np.ndarray | None) -> RegLeaf:
    mean = targets.mean(axis=0)
    variance = targets.var(axis=0)
    vf = float(voiced.mean()) if voiced is not None else None
    return RegLeaf(mean, variance, len(targets), vf)


def _sse(targets: np.ndarray) -> float:
    return float(((targets - targets.mean(axis=0)) ** 2).sum())


def _grow(bags: list[frozenset[str]], targets: np.ndarray,
          voiced: np.ndarray | None, min_leaf: int, min_gain: float):
    n = len(bags)
    if n < 2 * min_leaf:
        return _make_leaf(targets, voiced)
    parent_sse = _sse(targets)
    candidates = sorted(set().union(*bags)) if bags else []
    best = None  # (gain, token, yes mask)
    for token in candidates:
        mask = np.fromiter((token in b for b in bags), dtype=bool, count=n)
        n_yes = int(mask.sum())
        if n_yes < min_leaf or n - n_yes < min_leaf:
            continue
        gain = parent_sse - _sse(targets[mask]) - _sse(targets[~mask])
        if gain >= min_gain and (best is None or gain > best[0]):
            best = (gain, token, mask)
    if best is None:
        return _make_leaf(targets, voiced)
    _, token, mask = best
    v_yes = voiced[mask] if voiced is not None else None
    v_no = voiced[~mask] if voiced is not None else None
    return RegNode(
        token,
        _grow([b for b, m in zip(bags, mask) if m], targets[mask], v_yes, min_leaf, min_gain),
        _grow([b for b, m in zip(bags, mask) if not m], targets[~mask], v_no, min_leaf, min_gain),
    )


def train_regress(data: list[tuple[set[str], np.ndarray]],
                  voiced: list[float] | None = None,
                  min_leaf: int = 10, min_gain: float = 1e-9) -> RegTree:
    if not data:
        raise ToolkitError("E_EMPTY_TRAINSET", "regression tree needs >= 1 example")
    targets = [np.atleast_1d(np.asarray(t, dtype=np.float64)) for _, t in data]
    dim = targets[0].shape[0]
    for t in targets:
        if t.shape != (dim,):
            raise ToolkitError("E_DIM_MISMATCH", f"expected dimension {dim}, got {t.shape}")
    bags = [frozenset(b) for b, _ in data]
    stacked = np.stack(targets)
    varr = np.asarray(voiced, dtype=np.float64) if voiced is not None else None
    if varr is not None and len(varr) != len(bags):
        raise ToolkitError("E_DIM_MISMATCH", "voicing flags must match example count")
    return RegTree(_grow(bags, stacked, varr, min_leaf, min_gain), dim)
