"""Task-specific pipeline stages built on the shipped learners.

Seven tasks: tag, lemma, chunk, parse, syllabify, lts, stress.  Sequence
tasks decode greedily left-to-right; the parser is a greedy arc-standard
transition parser trained from a static oracle.  Default backends: linear
model for tag/lemma/chunk/parse, classification tree for
syllabify/lts/stress.
"""

from sltk.processors.features import PAD, extract_features
from sltk.processors.parser import (
    ParserState,
    apply_transitions,
    parser_oracle,
)
from sltk.processors.tasks import (
    DEFAULT_BACKEND,
    TASKS,
    apply_processor,
    train_processor,
)

__all__ = [
    "PAD",
    "extract_features",
    "ParserState",
    "parser_oracle",
    "apply_transitions",
    "train_processor",
    "apply_processor",
    "TASKS",
    "DEFAULT_BACKEND",
]
