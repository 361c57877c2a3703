"""Classifier families shipped with the toolkit.

Two tree flavours plus an averaged linear model:

* :class:`ClassTree` — multiway splits on categorical slot values, used by the
  text-processing stages.
* :class:`RegTree` — binary bag-membership questions with Gaussian leaves,
  used for the synthesis parameter streams.
* :class:`LinearModel` — multiclass averaged perceptron over feature bags.

All training is single-threaded and deterministic; trained models are
immutable and safe to share across threads.
"""

from sltk.learners.classtree import ClassTree, train_classify
from sltk.learners.linear import LinearModel, train_linear
from sltk.learners.model_io import load_model, save_model
from sltk.learners.regtree import RegTree, train_regress

__all__ = [
    "ClassTree",
    "RegTree",
    "LinearModel",
    "train_classify",
    "train_regress",
    "train_linear",
    "save_model",
    "load_model",
]
