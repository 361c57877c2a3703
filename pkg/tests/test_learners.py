import math
from collections import Counter

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sltk.errors import ToolkitError
from sltk.learners import (
    train_classify,
    train_linear,
    train_regress,
)
from sltk.learners.classtree import gain_ratio
from sltk.learners.model_io import model_from_bytes, model_to_bytes


# --- independent oracles ---

def entropy_oracle(labels):
    counts = Counter(labels)
    total = len(labels)
    return -sum(n / total * math.log2(n / total) for n in counts.values())


def gain_ratio_oracle(examples, slot):
    """Brute-force gain ratio from first principles."""
    values = {x[slot] for x, _ in examples}
    if len(values) < 2:
        return 0.0
    total = len(examples)
    h = entropy_oracle([y for _, y in examples])
    remainder = 0.0
    split_counts = []
    for v in sorted(values):
        sub = [y for x, y in examples if x[slot] == v]
        split_counts.append(len(sub))
        remainder += len(sub) / total * entropy_oracle(sub)
    gain = h - remainder
    split_info = entropy_oracle(
        [i for i, n in enumerate(split_counts) for _ in range(n)]
    )
    if gain <= 1e-12 or split_info <= 0:
        return 0.0
    return gain / split_info


def sse_oracle(targets):
    arr = np.asarray(targets, dtype=float)
    return float(((arr - arr.mean(axis=0)) ** 2).sum())


# --- classification trees ---

def test_single_class_is_single_leaf():
    data = [({"a": str(i % 3)}, "X") for i in range(10)]
    tree = train_classify(data)
    assert tree.root.is_leaf
    assert tree.predict({"a": "7"})[0] == "X"


def test_xor_depth_two_and_exact_fit():
    data = [({"a": a, "b": b}, str(int(a != b))) for a in "01" for b in "01"]
    tree = train_classify(data)
    assert tree.depth() == 2
    for x, y in data:
        assert tree.predict(x)[0] == y


def test_root_splits_on_determining_slot():
    # `suffix` alone determines the class; `first` is noisy
    data = [
        ({"first": "a", "suffix": "ul"}, "N"),
        ({"first": "b", "suffix": "ul"}, "N"),
        ({"first": "a", "suffix": "ez"}, "V"),
        ({"first": "b", "suffix": "ez"}, "V"),
        ({"first": "a", "suffix": "ii"}, "N"),
        ({"first": "c", "suffix": "ez"}, "V"),
    ]
    assert gain_ratio(data, "suffix") == pytest.approx(gain_ratio_oracle(data, "suffix"))
    assert gain_ratio(data, "suffix") > gain_ratio(data, "first")
    tree = train_classify(data)
    assert tree.root.slot == "suffix"


@settings(max_examples=200, deadline=None)
@given(
    st.lists(
        st.tuples(
            st.fixed_dictionaries(
                {"s0": st.sampled_from("abc"), "s1": st.sampled_from("abc"),
                 "s2": st.sampled_from("ab")}),
            st.sampled_from(["X", "Y", "Z"]),
        ),
        min_size=1, max_size=20,
    )
)
def test_gain_ratio_matches_oracle(data):
    for slot in ("s0", "s1", "s2"):
        assert gain_ratio(data, slot) == pytest.approx(gain_ratio_oracle(data, slot))


@settings(max_examples=100, deadline=None)
@given(st.data())
def test_consistent_sets_fit_exactly(data):
    # draw a random deterministic labelling function, then random vectors
    rule = data.draw(st.dictionaries(
        st.tuples(st.sampled_from("ab"), st.sampled_from("ab"), st.sampled_from("ab")),
        st.sampled_from(["X", "Y"]),
        min_size=8, max_size=8,
    ))
    keys = data.draw(st.lists(st.sampled_from(sorted(rule)), min_size=1, max_size=20))
    examples = [({"a": k[0], "b": k[1], "c": k[2]}, rule[k]) for k in keys]
    tree = train_classify(examples)
    for x, y in examples:
        assert tree.predict(x)[0] == y
    assert tree.depth() <= 3  # never tests a slot twice on one path


def test_unseen_value_falls_back_to_majority():
    data = [({"a": "0"}, "Y"), ({"a": "0"}, "Y"), ({"a": "1"}, "N")]
    tree = train_classify(data)
    label, dist = tree.predict({"a": "weird"})
    assert label == "Y"
    assert sum(dist.values()) == pytest.approx(1.0)


def test_distribution_normalized_everywhere():
    data = [({"a": str(i % 2), "b": str(i % 3)}, "XY"[i % 2]) for i in range(12)]
    tree = train_classify(data)
    for a in "012":
        for b in "0123":
            _, dist = tree.predict({"a": a, "b": b})
            assert sum(dist.values()) == pytest.approx(1.0)


def test_classtree_errors():
    with pytest.raises(ToolkitError) as e:
        train_classify([])
    assert e.value.code == "E_EMPTY_TRAINSET"
    with pytest.raises(ToolkitError) as e:
        train_classify([({"a": "1"}, "X"), ({"b": "1"}, "X")])
    assert e.value.code == "E_SLOT_MISMATCH"
    tree = train_classify([({"a": "1"}, "X"), ({"a": "2"}, "Y")])
    with pytest.raises(ToolkitError) as e:
        tree.predict({"b": "1"})
    assert e.value.code == "E_SLOT_MISSING"


# --- regression trees ---

def test_constant_targets_single_leaf():
    data = [({"t%d" % i}, np.array([3.0, 1.0])) for i in range(8)]
    tree = train_regress(data, min_leaf=1)
    leaf = tree.predict({"whatever"})
    assert np.allclose(leaf.mean, [3.0, 1.0])
    assert np.allclose(leaf.variance, 0.0)


def test_perfect_separator_chosen_at_root():
    data = []
    for i in range(10):
        data.append(({"CP=a", f"x{i}"}, np.array([10.0 + 0.01 * i])))
        data.append(({"CP=b", f"y{i}"}, np.array([-10.0 - 0.01 * i])))
    tree = train_regress(data, min_leaf=5)
    assert tree.root.question == "CP=a"
    # oracle: no candidate token reduces SSE more
    targets = [t for _, t in data]
    best_gain = -1.0
    best_token = None
    for token in sorted(set().union(*(b for b, _ in data))):
        yes = [t for (b, t) in data if token in b]
        no = [t for (b, t) in data if token not in b]
        if len(yes) < 5 or len(no) < 5:
            continue
        gain = sse_oracle(targets) - sse_oracle(yes) - sse_oracle(no)
        if gain > best_gain:
            best_gain, best_token = gain, token
    assert best_token == "CP=a"


def test_min_occupancy_limits_splits():
    data = [({"a"} if i < 6 else {"b"}, np.array([float(i)])) for i in range(12)]
    tree = train_regress(data, min_leaf=10)
    assert len(tree.leaves()) <= 2


def test_total_sse_non_increasing_in_tree_size():
    rng = np.random.default_rng(5)
    data = [
        ({f"f{j}" for j in rng.choice(6, size=3, replace=False)},
         rng.normal(size=2))
        for _ in range(40)
    ]
    sses = [train_regress(data, min_leaf=m).total_sse() for m in (40, 10, 3, 1)]
    for bigger, smaller in zip(sses, sses[1:]):
        assert smaller <= bigger + 1e-9


def test_voiced_fraction_tracked():
    data = [({"v"}, np.array([1.0]))] * 3 + [({"u"}, np.array([0.0]))] * 1
    tree = train_regress(data, voiced=[1, 1, 1, 0], min_leaf=4)
    assert tree.predict({"v"}).voiced_fraction == pytest.approx(0.75)


def test_regtree_errors():
    with pytest.raises(ToolkitError) as e:
        train_regress([])
    assert e.value.code == "E_EMPTY_TRAINSET"
    with pytest.raises(ToolkitError) as e:
        train_regress([({"a"}, np.array([1.0])), ({"b"}, np.array([1.0, 2.0]))])
    assert e.value.code == "E_DIM_MISMATCH"


# --- linear model ---

def separable_toyset():
    # class = presence of marker feature; separable by construction
    data = []
    for i in range(10):
        data.append(({"M=pos", f"n{i}"}, "P"))
        data.append(({"M=neg", f"n{i}"}, "N"))
    return data


def test_separable_set_fit_within_five_epochs():
    data = separable_toyset()
    model = train_linear(data, epochs=5, seed=1)
    assert all(model.predict(bag) == y for bag, y in data)


def test_single_example_one_epoch():
    model = train_linear([({"f"}, "A")], epochs=1, seed=0)
    assert model.predict({"f"}) == "A"


def test_training_determinism_bit_identical():
    data = separable_toyset()
    m1 = train_linear(data, epochs=5, seed=42)
    m2 = train_linear(data, epochs=5, seed=42)
    assert model_to_bytes(m1) == model_to_bytes(m2)


def test_unseen_feature_never_changes_predictions():
    data = separable_toyset()
    model = train_linear(data, epochs=5, seed=1)
    for bag, _ in data:
        assert model.predict(bag) == model.predict(bag | {"NEVER_SEEN"})


# --- serialization round-trips ---

def test_xor_tree_roundtrip_exhaustive():
    data = [({"a": a, "b": b}, str(int(a != b))) for a in "01" for b in "01"]
    tree = train_classify(data)
    back = model_from_bytes(model_to_bytes(tree))
    for x, _ in data:
        assert back.predict(x) == tree.predict(x)


def test_regtree_single_leaf_roundtrip():
    tree = train_regress([({"a"}, np.array([1.5, -2.0]))], min_leaf=1)
    back = model_from_bytes(model_to_bytes(tree))
    leaf, orig = back.predict(set()), tree.predict(set())
    assert np.array_equal(leaf.mean, orig.mean)
    assert np.array_equal(leaf.variance, orig.variance)


def test_linear_roundtrip_identical_predictions():
    data = separable_toyset()
    model = train_linear(data, epochs=3, seed=9)
    back = model_from_bytes(model_to_bytes(model))
    for bag, _ in data:
        assert back.predict(bag) == model.predict(bag)
        assert back.scores(bag) == model.scores(bag)


def test_truncated_file_is_rejected():
    blob = model_to_bytes(train_linear(separable_toyset(), epochs=1, seed=0))
    with pytest.raises(ToolkitError) as e:
        model_from_bytes(blob[: len(blob) // 2])
    assert e.value.code == "E_MODEL_FORMAT"
    with pytest.raises(ToolkitError) as e:
        model_from_bytes(b"NOPE" + blob[4:])
    assert e.value.code == "E_MODEL_FORMAT"
