"""Three-layer annotation pipeline: input processor, chained base processors,
output formatter.

The chain is driven by an INI-like config file with sections ``[Input]``,
``[Pipeline]`` and ``[Output]`` (one registry key per line, ``#`` comments)
plus an optional ``[Options]`` section of ``stage.key=value`` lines.  Stages
declare which token attributes they require and produce; dependency checking
happens when the config is loaded, so a broken chain never starts running.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from sltk.errors import ToolkitError
from sltk.tokens import Sentence, Token, is_punct

# --- stage registry ---

@dataclass(frozen=True)
class StageSpec:
    key: str
    kind: str               # input | stage | output
    requires: frozenset[str]
    produces: frozenset[str]


_REGISTRY: dict[str, StageSpec] = {}


def register_stage(key: str, kind: str, requires=(), produces=()) -> None:
    _REGISTRY[key] = StageSpec(key, kind, frozenset(requires), frozenset(produces))


register_stage("input.basic-tokenizer", "input")
register_stage("proc.tagger", "stage", produces={"pos"})
register_stage("proc.lemmatizer", "stage", requires={"pos"}, produces={"lemma"})
register_stage("proc.chunker", "stage", requires={"pos"}, produces={"chunk"})
register_stage("proc.parser", "stage", requires={"pos"}, produces={"dep_head", "dep_label"})
register_stage("proc.syllabifier", "stage", produces={"syllables"})
register_stage("proc.lts", "stage", produces={"transcription"})
register_stage("proc.stress", "stage", requires={"syllables"}, produces={"stress"})
register_stage("out.tsv", "output")


def registry() -> dict[str, StageSpec]:
    return dict(_REGISTRY)


# --- configuration ---

@dataclass
class PipelineConfig:
    input: str
    stages: list[str]
    output: str
    options: dict[str, str] = field(default_factory=dict)


_SECTIONS = ("Input", "Pipeline", "Output", "Options")


def parse_config(source: str) -> PipelineConfig:
    sections: dict[str, list[str]] = {}
    current: str | None = None
    for lineno, rawline in enumerate(source.splitlines(), start=1):
        line = rawline.split("#", 1)[0].strip()
        if not line:
            continue
        m = re.fullmatch(r"\[([A-Za-z]+)\]", line)
        if m:
            current = m.group(1)
            sections.setdefault(current, [])
            continue
        if current is None:
            raise ToolkitError("E_CONFIG_SECTION", f"entry before any section at line {lineno}")
        sections[current].append(line)

    for required in ("Input", "Pipeline", "Output"):
        if required not in sections:
            raise ToolkitError("E_CONFIG_SECTION", f"missing [{required}] section")
    if len(sections["Input"]) != 1 or len(sections["Output"]) != 1:
        raise ToolkitError(
            "E_CONFIG_CARDINALITY",
            "exactly one entry required in [Input] and [Output]")

    options: dict[str, str] = {}
    for entry in sections.get("Options", []):
        if "=" not in entry:
            raise ToolkitError("E_CONFIG_SECTION", f"malformed option line: {entry!r}")
        key, value = entry.split("=", 1)
        options[key.strip()] = value.strip()

    config = PipelineConfig(
        input=sections["Input"][0],
        stages=list(sections["Pipeline"]),
        output=sections["Output"][0],
        options=options,
    )
    _check_keys(config)
    check_dependencies(config)
    return config


def _check_keys(config: PipelineConfig) -> None:
    for key in [config.input, *config.stages, config.output]:
        if key not in _REGISTRY:
            raise ToolkitError("E_UNKNOWN_PROCESSOR", key)
    if _REGISTRY[config.input].kind != "input":
        raise ToolkitError("E_UNKNOWN_PROCESSOR", f"{config.input} is not an input processor")
    if _REGISTRY[config.output].kind != "output":
        raise ToolkitError("E_UNKNOWN_PROCESSOR", f"{config.output} is not an output formatter")
    for key in config.stages:
        if _REGISTRY[key].kind != "stage":
            raise ToolkitError("E_UNKNOWN_PROCESSOR", f"{key} is not a base processor")


def check_dependencies(config: PipelineConfig) -> None:
    available: set[str] = {"wordform"}
    for key in config.stages:
        spec = _REGISTRY[key]
        missing = spec.requires - available
        if missing:
            producers = sorted(
                s.key for s in _REGISTRY.values() if s.produces & missing
            )
            raise ToolkitError(
                "E_STAGE_DEPENDENCY",
                f"{key} requires {sorted(missing)} produced by none of the "
                f"earlier stages (provided by {producers})")
        available |= spec.produces


def serialize_config(config: PipelineConfig) -> str:
    lines = ["[Input]", config.input, "[Pipeline]", *config.stages,
             "[Output]", config.output]
    if config.options:
        lines.append("[Options]")
        lines.extend(f"{k}={v}" for k, v in sorted(config.options.items()))
    return "\n".join(lines) + "\n"


# --- input processor: rule-based tokenizer and sentence splitter ---

DEFAULT_ABBREVIATIONS = frozenset({
    "dr.", "prof.", "nr.", "str.", "etc.", "d-na.", "dl.", "sf.",
})

_TERMINAL = {".", "?", "!"}


def tokenize_word(chunk: str) -> list[str]:
    """Split one whitespace-delimited chunk into word and punctuation tokens.

    Leading/trailing punctuation detaches one character at a time; internal
    hyphens and apostrophes stay attached.
    """
    leading: list[str] = []
    trailing: list[str] = []
    while len(chunk) > 1 and is_punct(chunk[0]):
        leading.append(chunk[0])
        chunk = chunk[1:]
    while len(chunk) > 1 and is_punct(chunk[-1]):
        trailing.append(chunk[-1])
        chunk = chunk[:-1]
    return leading + ([chunk] if chunk else []) + list(reversed(trailing))


def tokenize(text: str, abbreviations: frozenset[str] = DEFAULT_ABBREVIATIONS,
             id_prefix: str = "s") -> list[Sentence]:
    """Whitespace tokenization with punctuation detachment and rule-based
    sentence splitting (terminal ``. ? !`` followed by whitespace and an
    uppercase letter, except after known abbreviations)."""
    chunks = text.split()
    sentences: list[Sentence] = []
    current: list[Token] = []
    raw_parts: list[str] = []

    def flush():
        nonlocal current, raw_parts
        if current:
            sid = f"{id_prefix}{len(sentences) + 1}"
            sentences.append(Sentence(current, " ".join(raw_parts), sid))
        current, raw_parts = [], []

    for i, chunk in enumerate(chunks):
        raw_parts.append(chunk)
        toks = tokenize_word(chunk)
        current.extend(Token(t) for t in toks)
        ends_terminal = toks and toks[-1] in _TERMINAL
        is_abbrev = chunk.lower() in abbreviations
        nxt = chunks[i + 1] if i + 1 < len(chunks) else None
        if ends_terminal and not is_abbrev and (nxt is None or nxt[:1].isupper()):
            flush()
    flush()
    return sentences


# --- pipeline execution ---

def run_pipeline(config: PipelineConfig, models: dict, text: str) -> list[Sentence]:
    """Tokenize, then run every stage in declared order.

    ``models`` maps stage keys to loaded models (rule-based stages may map to
    ``None``).  Each stage fills only the attributes it owns; the framework
    verifies that nothing else changed.
    """
    from sltk import processors  # stages live one layer up; import is lazy

    stage_task = {
        "proc.tagger": "tag", "proc.lemmatizer": "lemma", "proc.chunker": "chunk",
        "proc.parser": "parse", "proc.syllabifier": "syllabify",
        "proc.lts": "lts", "proc.stress": "stress",
    }
    check_dependencies(config)
    sentences = tokenize(text)
    for key in config.stages:
        spec = _REGISTRY[key]
        task = stage_task[key]
        for sentence in sentences:
            before = [t.copy() for t in sentence.tokens]
            processors.apply_processor(task, models.get(key), sentence)
            _assert_ownership(key, spec, before, sentence.tokens)
    return sentences


_ATTRS = ("lemma", "pos", "transcription", "syllables", "stress", "chunk",
          "dep_head", "dep_label")


def _assert_ownership(key: str, spec: StageSpec, before: list[Token],
                      after: list[Token]) -> None:
    for b, a in zip(before, after):
        for attr in _ATTRS:
            if attr in spec.produces:
                continue
            if getattr(b, attr) != getattr(a, attr):
                raise ToolkitError(
                    "E_STAGE_DEPENDENCY",
                    f"{key} modified attribute {attr} it does not own")


# --- output formatter ---

_COLUMNS = ("wordform", "lemma", "pos", "chunk", "head", "label",
            "transcription", "syllables", "stress")


def _render_cell(token: Token, column: str) -> str:
    if column == "wordform":
        return token.wordform
    if column == "head":
        return "" if token.dep_head is None else str(token.dep_head)
    if column == "label":
        return token.dep_label or ""
    if column == "transcription":
        return " ".join(token.transcription) if token.transcription else ""
    if column == "syllables":
        texts = token.syllable_texts()
        return "-".join(texts) if texts else ""
    if column == "stress":
        return "" if token.stress is None else str(token.stress)
    value = getattr(token, column)
    return value or ""


def format_tsv(sentences: list[Sentence]) -> str:
    """One token per line, ``_`` for unset attributes, blank line between
    sentences."""
    blocks = []
    for sentence in sentences:
        lines = []
        for token in sentence.tokens:
            cells = [_render_cell(token, c) or "_" for c in _COLUMNS]
            lines.append("\t".join(cells))
        blocks.append("\n".join(lines))
    return "\n\n".join(blocks) + "\n"


def parse_tsv(text: str, id_prefix: str = "s") -> list[Sentence]:
    """Read the ``format_tsv`` layout back, e.g. as a gold training corpus."""
    sentences: list[Sentence] = []
    for block in text.strip("\n").split("\n\n"):
        if not block.strip():
            continue
        tokens = []
        for line in block.splitlines():
            cells = line.split("\t")
            if len(cells) != len(_COLUMNS):
                raise ToolkitError("E_CONFIG_SECTION",
                                   f"expected {len(_COLUMNS)} columns, got {len(cells)}")
            cells = [None if c == "_" else c for c in cells]
            wf = cells[0] or ""
            token = Token(wf)
            token.lemma = cells[1]
            token.pos = cells[2]
            token.chunk = cells[3]
            token.dep_head = int(cells[4]) if cells[4] is not None else None
            token.dep_label = cells[5]
            token.transcription = cells[6].split(" ") if cells[6] else None
            if cells[7]:
                spans, at = [], 0
                for part in cells[7].split("-"):
                    spans.append((at, at + len(part)))
                    at += len(part)
                token.syllables = spans
            token.stress = int(cells[8]) if cells[8] is not None else None
            tokens.append(token)
        sentences.append(Sentence(tokens, " ".join(t.wordform for t in tokens),
                                  f"{id_prefix}{len(sentences) + 1}"))
    return sentences
