"""Training and application of the seven pipeline tasks."""

from __future__ import annotations

from dataclasses import dataclass

from sltk.errors import ToolkitError
from sltk.learners import ClassTree, LinearModel, train_classify, train_linear
from sltk.processors import features as F
from sltk.processors.parser import ParserState, parser_oracle
from sltk.tokens import Sentence, Token, is_punct

TASKS = ("tag", "lemma", "chunk", "parse", "syllabify", "lts", "stress")

# chosen backends: the character-level tasks sit comfortably in small trees,
# the word-level tasks want the wider linear feature space
DEFAULT_BACKEND = {
    "tag": "linear",
    "lemma": "linear",
    "chunk": "linear",
    "parse": "linear",
    "syllabify": "tree",
    "lts": "tree",
    "stress": "tree",
}

_GOLD_ATTR = {
    "tag": "pos",
    "lemma": "lemma",
    "chunk": "chunk",
    "parse": "dep_head",
    "syllabify": "syllables",
    "lts": "transcription",
    "stress": "stress",
}

PHONE_SEP = "+"       # composite letter-to-sound output symbol separator
NO_PHONE = F.NONE


@dataclass(frozen=True)
class LemmaRule:
    """Suffix transform: drop ``strip`` trailing characters, add ``append``."""

    strip: int
    append: str

    def apply(self, wordform: str) -> str | None:
        if self.strip > len(wordform):
            return None
        base = wordform[: len(wordform) - self.strip] if self.strip else wordform
        return base + self.append

    def render(self) -> str:
        return f"{self.strip}|{self.append}"

    @classmethod
    def parse(cls, text: str) -> "LemmaRule":
        strip, _, append = text.partition("|")
        return cls(int(strip), append)

    @classmethod
    def induce(cls, wordform: str, lemma: str) -> "LemmaRule":
        w, l = wordform.lower(), lemma
        common = 0
        for a, b in zip(w, l):
            if a != b:
                break
            common += 1
        return cls(len(wordform) - common, l[common:])


def _require_gold(corpus: list[Sentence], task: str) -> None:
    attr = _GOLD_ATTR[task]
    for sentence in corpus:
        for token in sentence.tokens:
            if task == "stress" and not F.has_vowel(token.wordform):
                continue  # vowel-less tokens carry no stress by definition
            if task == "lts" and is_punct(token.wordform):
                continue  # punctuation is silent; missing transcription means empty
            if getattr(token, attr) is None:
                raise ToolkitError(
                    "E_GOLD_MISSING",
                    f"token {token.wordform!r} lacks gold {attr} for task {task}")


def _training_instances(task: str, corpus: list[Sentence]) -> list[tuple[dict, str]]:
    instances: list[tuple[dict, str]] = []
    for sentence in corpus:
        if task == "tag":
            for i, token in enumerate(sentence.tokens):
                instances.append((F.extract_features("tag", sentence, i), token.pos))
        elif task == "lemma":
            for i, token in enumerate(sentence.tokens):
                rule = LemmaRule.induce(token.wordform, token.lemma)
                instances.append((F.extract_features("lemma", sentence, i), rule.render()))
        elif task == "chunk":
            for i, token in enumerate(sentence.tokens):
                instances.append((F.extract_features("chunk", sentence, i), token.chunk))
        elif task == "syllabify":
            for i, token in enumerate(sentence.tokens):
                boundaries = {b for _, b in (token.syllables or [])[:-1]}
                word = token.wordform
                for c in range(len(word) - 1):
                    label = "B" if c + 1 in boundaries else "O"
                    instances.append((F.extract_features("syllabify", sentence, (i, c)), label))
        elif task == "lts":
            for i, token in enumerate(sentence.tokens):
                aligned = align_letters(token.wordform, token.transcription or [])
                for c, phones in enumerate(aligned):
                    label = PHONE_SEP.join(phones) if phones else NO_PHONE
                    instances.append((F.extract_features("lts", sentence, (i, c)), label))
        elif task == "stress":
            for i, token in enumerate(sentence.tokens):
                if token.stress is None:
                    continue
                syls = token.syllable_texts() or []
                for s in range(len(syls)):
                    label = "1" if token.stress == s else "0"
                    instances.append((F.extract_features("stress", sentence, (i, s)), label))
        elif task == "parse":
            heads = [t.dep_head for t in sentence.tokens]
            labels = [t.dep_label or "dep" for t in sentence.tokens]
            try:
                sequence = parser_oracle(heads, labels)
            except ToolkitError as err:
                if err.code != "E_NONPROJECTIVE":
                    raise
                import warnings
                warnings.warn(f"skipping non-projective sentence {sentence.id}")
                continue
            state = ParserState.initial(len(sentence.tokens))
            for action in sequence:
                instances.append((F.extract_features("parse", sentence, state), action))
                state.apply(action)
        else:
            raise ValueError(f"unknown task {task!r}")
    return instances


def train_processor(task: str, corpus: list[Sentence], backend: str | None = None,
                    epochs: int = 5, seed: int = 0, min_leaf: int = 1):
    """Train one task's model on a gold-annotated corpus."""
    if task not in TASKS:
        raise ValueError(f"unknown task {task!r}")
    _require_gold(corpus, task)
    backend = backend or DEFAULT_BACKEND[task]
    instances = _training_instances(task, corpus)
    if not instances:
        raise ToolkitError("E_EMPTY_TRAINSET", f"no training instances for {task}")
    if backend == "tree":
        return train_classify(instances, min_leaf=min_leaf)
    return train_linear([(F.to_bag(x), y) for x, y in instances],
                        epochs=epochs, seed=seed)


def _predict(model, feats: dict[str, str]) -> str:
    if isinstance(model, ClassTree):
        return model.predict(feats)[0]
    return model.predict(F.to_bag(feats))


def _predict_score(model, feats: dict[str, str], label: str) -> float:
    if isinstance(model, ClassTree):
        _, dist = model.predict(feats)
        return dist.get(label, 0.0)
    scores = model.scores(F.to_bag(feats))
    return scores.get(label, 0.0)


def align_letters(wordform: str, phones: list[str]) -> list[list[str]]:
    """Deterministic character-to-phoneme alignment, 0..2 phonemes per letter.

    Dynamic programming over (letter, phoneme) positions; matching a letter
    with a phoneme that starts with the same character is free, anything else
    costs 1, and consuming a single phoneme is preferred on ties.
    """
    word = wordform.lower()
    n, m = len(word), len(phones)
    INF = float("inf")
    # cost[i][j]: letters < i consumed phones < j
    cost = [[INF] * (m + 1) for _ in range(n + 1)]
    choice: dict[tuple[int, int], int] = {}
    cost[0][0] = 0.0
    for i in range(n + 1):
        for j in range(m + 1):
            here = cost[i][j]
            if here == INF or i == n:
                continue
            for take in (1, 2, 0):
                if j + take > m:
                    continue
                step = 0.0
                if take == 0:
                    step = 1.0
                else:
                    for k in range(take):
                        step += 0.0 if phones[j + k][:1] == word[i] else 1.0
                    if take == 2:
                        step += 0.5  # mild preference for one phoneme per letter
                if here + step < cost[i + 1][j + take]:
                    cost[i + 1][j + take] = here + step
                    choice[(i + 1, j + take)] = take
    if cost[n][m] == INF:
        # more than 2 phonemes per letter somewhere; dump the tail on the last letter
        per = [[p] for p in phones[: n - 1]]
        per += [[] for _ in range(n - 1 - len(per))]
        per.append(list(phones[n - 1:]))
        return per
    out: list[list[str]] = []
    i, j = n, m
    while i > 0:
        take = choice[(i, j)]
        out.append(list(phones[j - take: j]))
        i, j = i - 1, j - take
    out.reverse()
    return out


def apply_processor(task: str, model, sentence: Sentence) -> Sentence:
    """Fill the task's own attribute in place; everything else is untouched."""
    if task not in TASKS:
        raise ValueError(f"unknown task {task!r}")
    _check_dependencies(task, sentence)

    if task == "tag":
        for i, token in enumerate(sentence.tokens):
            token.pos = _predict(model, F.extract_features("tag", sentence, i))
    elif task == "lemma":
        for i, token in enumerate(sentence.tokens):
            rule = LemmaRule.parse(_predict(model, F.extract_features("lemma", sentence, i)))
            lemma = rule.apply(token.wordform.lower())
            token.lemma = lemma if lemma else token.wordform.lower()
    elif task == "chunk":
        for i, token in enumerate(sentence.tokens):
            token.chunk = _predict(model, F.extract_features("chunk", sentence, i))
    elif task == "syllabify":
        for i, token in enumerate(sentence.tokens):
            token.syllables = _syllabify_word(model, sentence, i)
    elif task == "lts":
        for i, token in enumerate(sentence.tokens):
            phones: list[str] = []
            for c in range(len(token.wordform)):
                label = _predict(model, F.extract_features("lts", sentence, (i, c)))
                if label != NO_PHONE:
                    phones.extend(label.split(PHONE_SEP))
            token.transcription = phones
    elif task == "stress":
        for i, token in enumerate(sentence.tokens):
            token.stress = _stress_word(model, sentence, i)
    elif task == "parse":
        _parse_sentence(model, sentence)
    return sentence


_TASK_REQUIRES = {
    "lemma": ("pos",),
    "chunk": ("pos",),
    "parse": ("pos",),
    "stress": ("syllables",),
}


def _check_dependencies(task: str, sentence: Sentence) -> None:
    for attr in _TASK_REQUIRES.get(task, ()):
        if any(getattr(t, attr) is None for t in sentence.tokens):
            raise ToolkitError(
                "E_STAGE_DEPENDENCY",
                f"task {task} requires attribute {attr} on every token")


def _syllabify_word(model, sentence: Sentence, i: int) -> list[tuple[int, int]]:
    word = sentence.tokens[i].wordform
    boundaries = [
        c + 1
        for c in range(len(word) - 1)
        if _predict(model, F.extract_features("syllabify", sentence, (i, c))) == "B"
    ]
    spans, start = [], 0
    for b in boundaries:
        spans.append((start, b))
        start = b
    spans.append((start, len(word)))
    return spans


def _stress_word(model, sentence: Sentence, i: int) -> int | None:
    token = sentence.tokens[i]
    if not F.has_vowel(token.wordform):
        return None
    syls = token.syllable_texts() or []
    if len(syls) == 1:
        return 0
    best, best_score = 0, None
    for s in range(len(syls)):
        score = _predict_score(model, F.extract_features("stress", sentence, (i, s)), "1")
        if best_score is None or score > best_score:
            best, best_score = s, score
    return best


def _parse_sentence(model, sentence: Sentence) -> None:
    state = ParserState.initial(len(sentence.tokens))
    while not state.terminal:
        valid = state.valid_transitions()
        feats = F.extract_features("parse", sentence, state)
        if isinstance(model, ClassTree):
            _, dist = model.predict(feats)
            scores = dist
        else:
            scores = model.scores(F.to_bag(feats))
        best = None
        for action in sorted(set(a for a in scores) | {"SHIFT"}):
            kind = action.partition(":")[0]
            if kind not in valid:
                continue
            s = scores.get(action, float("-inf"))
            if best is None or s > best[1]:
                best = (action, s)
        if best is None:
            # model suggests nothing usable: deterministic fallback
            kind = valid[0]
            best = (kind if kind == "SHIFT" else f"{kind}:dep", 0.0)
        state.apply(best[0])
    for head, dep, label in state.arcs:
        sentence.tokens[dep - 1].dep_head = head
        sentence.tokens[dep - 1].dep_label = label
