"""Oral-corpus query core: inverted index over annotated utterances, a small
bracket query language, sequence search with KWIC hits, and the HTTP service.

Query syntax, one bracket per token position:

    [word="mere"] [lemma="avea" pos="V*"]

Attribute patterns: ``word`` and ``lemma`` match casefolded exact; ``pos``
is an anchored glob where ``.`` matches one character and ``*`` any suffix.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from pathlib import Path

from sltk.errors import ToolkitError

SNAPSHOT_MAGIC = b"FLIX"
SNAPSHOT_VERSION = 1

MAX_LIMIT = 1000
CONTEXT_TOKENS = 8


@dataclass
class QToken:
    wordform: str
    lemma: str | None = None
    pos: str | None = None
    span: tuple[int, int] | None = None


@dataclass
class Utterance:
    id: str
    audio_file: str
    tokens: list[QToken]


@dataclass
class Pattern:
    wordform: str | None = None
    lemma: str | None = None
    pos: str | None = None


@dataclass
class Query:
    patterns: list[Pattern]
    limit: int = 50
    offset: int = 0


@dataclass
class Hit:
    utterance: str
    start: int
    end: int
    tokens: list[dict]
    left: list[str]
    right: list[str]
    audio_file: str
    start_ms: int | None
    end_ms: int | None


@dataclass
class IndexedCorpus:
    utterances: dict[str, Utterance]
    by_wordform: dict[str, list[tuple[str, int]]] = field(default_factory=dict)
    by_lemma: dict[str, list[tuple[str, int]]] = field(default_factory=dict)
    by_pos: dict[str, list[tuple[str, int]]] = field(default_factory=dict)
    name: str = ""
    audio_base: str = ""


# --- corpus input ---

def utterance_from_json(doc: dict) -> Utterance:
    tokens = [
        QToken(t["wordform"], t.get("lemma"), t.get("pos"),
               tuple(t["span"]) if t.get("span") else None)
        for t in doc["tokens"]
    ]
    return Utterance(doc["id"], doc.get("audio", ""), tokens)


def utterance_to_json(utt: Utterance) -> dict:
    return {
        "id": utt.id,
        "audio": utt.audio_file,
        "tokens": [
            {"wordform": t.wordform, "lemma": t.lemma, "pos": t.pos,
             "span": list(t.span) if t.span else None}
            for t in utt.tokens
        ],
    }


def read_jsonl(text: str) -> list[Utterance]:
    return [utterance_from_json(json.loads(line))
            for line in text.splitlines() if line.strip()]


# --- indexing ---

def build_index(utterances: list[Utterance], name: str = "",
                audio_base: str = "") -> IndexedCorpus:
    index = IndexedCorpus({}, name=name, audio_base=audio_base)
    for utt in utterances:
        if utt.id in index.utterances:
            raise ToolkitError("E_DUP_ID", f"duplicate utterance id {utt.id!r}")
        index.utterances[utt.id] = utt
        for i, token in enumerate(utt.tokens):
            index.by_wordform.setdefault(
                token.wordform.casefold(), []).append((utt.id, i))
            if token.lemma is not None:
                index.by_lemma.setdefault(
                    token.lemma.casefold(), []).append((utt.id, i))
            if token.pos is not None:
                index.by_pos.setdefault(token.pos, []).append((utt.id, i))
    return index


def save_snapshot(index: IndexedCorpus, path) -> None:
    payload = json.dumps({
        "name": index.name,
        "audio_base": index.audio_base,
        "utterances": [utterance_to_json(u) for u in index.utterances.values()],
    }, ensure_ascii=False).encode("utf-8")
    with open(path, "wb") as f:
        f.write(SNAPSHOT_MAGIC + bytes([SNAPSHOT_VERSION]) + payload)


def load_snapshot(path) -> IndexedCorpus:
    data = Path(path).read_bytes()
    if data[:4] != SNAPSHOT_MAGIC:
        raise ToolkitError("E_MODEL_FORMAT", "bad snapshot magic at byte 0")
    if data[4] != SNAPSHOT_VERSION:
        raise ToolkitError("E_MODEL_FORMAT", "unsupported snapshot version")
    doc = json.loads(data[5:].decode("utf-8"))
    return build_index([utterance_from_json(u) for u in doc["utterances"]],
                       name=doc["name"], audio_base=doc["audio_base"])


# --- query parsing ---

_KEYS = ("word", "lemma", "pos")


def parse_query(text: str, limit: int = 50, offset: int = 0) -> Query:
    patterns: list[Pattern] = []
    i, n = 0, len(text)
    while i < n:
        if text[i].isspace():
            i += 1
            continue
        if text[i] != "[":
            raise ToolkitError(
                "E_QUERY_SYNTAX", f"expected '[' at column {i + 1}")
        i += 1
        pattern = Pattern()
        saw_constraint = False
        while True:
            while i < n and text[i].isspace():
                i += 1
            if i >= n:
                raise ToolkitError(
                    "E_QUERY_SYNTAX", f"unclosed bracket at column {i + 1}")
            if text[i] == "]":
                i += 1
                break
            m = re.match(r"(\w+)=\"([^\"]*)\"", text[i:])
            if not m:
                raise ToolkitError(
                    "E_QUERY_SYNTAX", f"bad constraint at column {i + 1}")
            key, value = m.group(1), m.group(2)
            if key not in _KEYS:
                raise ToolkitError(
                    "E_QUERY_SYNTAX",
                    f"unknown attribute {key!r} at column {i + 1}")
            if key == "word":
                pattern.wordform = value.casefold()
            elif key == "lemma":
                pattern.lemma = value.casefold()
            else:
                pattern.pos = value
            saw_constraint = True
            i += m.end()
        if not saw_constraint:
            raise ToolkitError("E_QUERY_EMPTY", "empty bracket")
        patterns.append(pattern)
    if not patterns:
        raise ToolkitError("E_QUERY_EMPTY", "query has no patterns")
    limit = min(int(limit), MAX_LIMIT)
    return Query(patterns, limit=limit, offset=max(0, int(offset)))


def _pos_regex(glob: str) -> re.Pattern:
    out = []
    for c in glob:
        if c == "*":
            out.append(".*")
        elif c == ".":
            out.append(".")
        else:
            out.append(re.escape(c))
    return re.compile("".join(out))


def _matches(pattern: Pattern, token: QToken,
             pos_re: re.Pattern | None) -> bool:
    if pattern.wordform is not None and token.wordform.casefold() != pattern.wordform:
        return False
    if pattern.lemma is not None and (
            token.lemma is None or token.lemma.casefold() != pattern.lemma):
        return False
    if pattern.pos is not None:
        if token.pos is None or pos_re is None or not pos_re.fullmatch(token.pos):
            return False
    return True


# --- search ---

def _make_hit(utt: Utterance, start: int, count: int) -> Hit:
    span = utt.tokens[start:start + count]
    starts = [t.span[0] for t in span if t.span]
    ends = [t.span[1] for t in span if t.span]
    return Hit(
        utterance=utt.id,
        start=start,
        end=start + count,
        tokens=[{"wordform": t.wordform, "lemma": t.lemma, "pos": t.pos}
                for t in span],
        left=[t.wordform for t in utt.tokens[max(0, start - CONTEXT_TOKENS):start]],
        right=[t.wordform
               for t in utt.tokens[start + count:start + count + CONTEXT_TOKENS]],
        audio_file=utt.audio_file,
        start_ms=min(starts) if starts else None,
        end_ms=max(ends) if ends else None,
    )


def search(index: IndexedCorpus, query: Query) -> tuple[list[Hit], int]:
    """All positions where pattern i matches token start+i, ordered by
    (utterance order, start index), paginated by limit/offset."""
    pos_res = [_pos_regex(p.pos) if p.pos is not None else None
               for p in query.patterns]
    count = len(query.patterns)
    hits: list[Hit] = []
    for utt in index.utterances.values():
        for start in range(len(utt.tokens) - count + 1):
            if all(_matches(p, utt.tokens[start + i], pos_res[i])
                   for i, p in enumerate(query.patterns)):
                hits.append(_make_hit(utt, start, count))
    total = len(hits)
    return hits[query.offset:query.offset + query.limit], total


# --- HTTP service ---

def create_app(index: IndexedCorpus, audio_dir=None, cors_origins=("*",)):
    from fastapi import FastAPI, Header
    from fastapi.middleware.cors import CORSMiddleware
    from fastapi.responses import JSONResponse, Response

    app = FastAPI(title="oral corpus query service")
    app.add_middleware(
        CORSMiddleware, allow_origins=list(cors_origins),
        allow_methods=["GET"], allow_headers=["*"])
    base = Path(audio_dir) if audio_dir else Path(index.audio_base or ".")

    @app.get("/health")
    def health():
        return {"status": "ok"}

    @app.get("/search")
    def do_search(q: str = "", limit: int = 50, offset: int = 0):
        try:
            query = parse_query(q, limit=limit, offset=offset)
        except ToolkitError as err:
            return JSONResponse(
                status_code=400,
                content={"error": err.code, "detail": str(err)})
        hits, total = search(index, query)
        return {
            "total": total,
            "hits": [{
                "utterance": h.utterance,
                "span": [h.start, h.end],
                "tokens": h.tokens,
                "left": h.left,
                "right": h.right,
                "audio": {"file": h.audio_file,
                          "start_ms": h.start_ms, "end_ms": h.end_ms},
            } for h in hits],
        }

    @app.get("/utterance/{utt_id}")
    def utterance(utt_id: str):
        utt = index.utterances.get(utt_id)
        if utt is None:
            return JSONResponse(status_code=404,
                                content={"error": "E_NOT_FOUND",
                                         "detail": utt_id})
        return utterance_to_json(utt)

    @app.get("/audio/{file_name}")
    def audio(file_name: str, range_header: str | None = Header(
            default=None, alias="range")):
        path = base / file_name
        if "/" in file_name or "\\" in file_name or not path.is_file():
            return JSONResponse(status_code=404,
                                content={"error": "E_NOT_FOUND",
                                         "detail": file_name})
        data = path.read_bytes()
        headers = {"Accept-Ranges": "bytes"}
        if range_header:
            m = re.fullmatch(r"bytes=(\d*)-(\d*)", range_header.strip())
            if not m or (not m.group(1) and not m.group(2)):
                return Response(status_code=416, headers=headers)
            if m.group(1):
                lo = int(m.group(1))
                hi = int(m.group(2)) if m.group(2) else len(data) - 1
            else:
                lo = len(data) - int(m.group(2))
                hi = len(data) - 1
            if lo >= len(data) or lo > hi:
                return Response(status_code=416, headers=headers)
            hi = min(hi, len(data) - 1)
            headers["Content-Range"] = f"bytes {lo}-{hi}/{len(data)}"
            return Response(content=data[lo:hi + 1], status_code=206,
                            media_type="audio/wav", headers=headers)
        return Response(content=data, media_type="audio/wav", headers=headers)

    return app


def serve(index: IndexedCorpus, host: str = "127.0.0.1", port: int = 8000,
          audio_dir=None, cors_origins=("*",)) -> None:
    import uvicorn

    uvicorn.run(create_app(index, audio_dir, cors_origins),
                host=host, port=port, log_level="warning")
