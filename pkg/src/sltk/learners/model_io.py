"""Binary model container.

Layout: magic ``FLMD``, one format-version byte, one model-kind byte
(``C`` classification tree, ``R`` regression tree, ``L`` linear model,
``V`` voice), followed by length-prefixed sections.  All integers are
little-endian; floats are IEEE-754 binary64.  Corruption raises
``E_MODEL_FORMAT`` carrying the byte offset where decoding failed.
"""

from __future__ import annotations

import struct

import numpy as np

from sltk.errors import ToolkitError
from sltk.learners.classtree import ClassTree, TreeNode
from sltk.learners.linear import LinearModel
from sltk.learners.regtree import RegLeaf, RegNode, RegTree

MAGIC = b"FLMD"
VERSION = 1

KIND_CLASSTREE = ord("C")
KIND_REGTREE = ord("R")
KIND_LINEAR = ord("L")
KIND_VOICE = ord("V")


class ByteWriter:
    def __init__(self):
        self.parts: list[bytes] = []

    def u8(self, v: int):
        self.parts.append(struct.pack("<B", v))

    def u32(self, v: int):
        self.parts.append(struct.pack("<I", v))

    def u64(self, v: int):
        self.parts.append(struct.pack("<Q", v))

    def i64(self, v: int):
        self.parts.append(struct.pack("<q", v))

    def f64(self, v: float):
        self.parts.append(struct.pack("<d", v))

    def text(self, s: str):
        raw = s.encode("utf-8")
        self.u32(len(raw))
        self.parts.append(raw)

    def getvalue(self) -> bytes:
        return b"".join(self.parts)


class ByteReader:
    def __init__(self, data: bytes, offset: int = 0):
        self.data = data
        self.offset = offset

    def _take(self, n: int) -> bytes:
        if self.offset + n > len(self.data):
            raise ToolkitError("E_MODEL_FORMAT", f"truncated at byte {self.offset}")
        out = self.data[self.offset:self.offset + n]
        self.offset += n
        return out

    def u8(self) -> int:
        return struct.unpack("<B", self._take(1))[0]

    def u32(self) -> int:
        return struct.unpack("<I", self._take(4))[0]

    def u64(self) -> int:
        return struct.unpack("<Q", self._take(8))[0]

    def i64(self) -> int:
        return struct.unpack("<q", self._take(8))[0]

    def f64(self) -> float:
        return struct.unpack("<d", self._take(8))[0]

    def text(self) -> str:
        n = self.u32()
        at = self.offset
        try:
            return self._take(n).decode("utf-8")
        except UnicodeDecodeError:
            raise ToolkitError("E_MODEL_FORMAT", f"bad utf-8 at byte {at}")

    def done(self) -> bool:
        return self.offset >= len(self.data)


# --- classification tree ---

def _write_class_node(w: ByteWriter, node: TreeNode):
    w.u8(0 if node.is_leaf else 1)
    w.text(node.majority)
    w.u32(len(node.distribution))
    for cls, count in node.distribution.items():
        w.text(cls)
        w.u64(count)
    if not node.is_leaf:
        w.text(node.slot)
        w.u32(len(node.children))
        for value, child in node.children.items():
            w.text(value)
            _write_class_node(w, child)


def _read_class_node(r: ByteReader) -> TreeNode:
    at = r.offset
    tag = r.u8()
    if tag not in (0, 1):
        raise ToolkitError("E_MODEL_FORMAT", f"bad node tag at byte {at}")
    majority = r.text()
    dist = {}
    for _ in range(r.u32()):
        cls = r.text()
        dist[cls] = r.u64()
    node = TreeNode(None, majority, dist)
    if tag == 1:
        node.slot = r.text()
        for _ in range(r.u32()):
            value = r.text()
            node.children[value] = _read_class_node(r)
    return node


def _encode_classtree(w: ByteWriter, tree: ClassTree):
    w.u32(len(tree.slots))
    for s in tree.slots:
        w.text(s)
    w.u32(len(tree.classes))
    for c in tree.classes:
        w.text(c)
    _write_class_node(w, tree.root)


def _decode_classtree(r: ByteReader) -> ClassTree:
    slots = [r.text() for _ in range(r.u32())]
    classes = [r.text() for _ in range(r.u32())]
    return ClassTree(_read_class_node(r), slots, classes)


# --- regression tree ---

def _write_reg_node(w: ByteWriter, node, dim: int):
    if isinstance(node, RegLeaf):
        w.u8(0)
        w.u64(node.count)
        for v in node.mean:
            w.f64(float(v))
        for v in node.variance:
            w.f64(float(v))
        if node.voiced_fraction is None:
            w.u8(0)
        else:
            w.u8(1)
            w.f64(node.voiced_fraction)
    else:
        w.u8(1)
        w.text(node.question)
        _write_reg_node(w, node.yes, dim)
        _write_reg_node(w, node.no, dim)


def _read_reg_node(r: ByteReader, dim: int):
    at = r.offset
    tag = r.u8()
    if tag == 0:
        count = r.u64()
        mean = np.array([r.f64() for _ in range(dim)])
        var = np.array([r.f64() for _ in range(dim)])
        vf = r.f64() if r.u8() else None
        return RegLeaf(mean, var, count, vf)
    if tag == 1:
        question = r.text()
        yes = _read_reg_node(r, dim)
        no = _read_reg_node(r, dim)
        return RegNode(question, yes, no)
    raise ToolkitError("E_MODEL_FORMAT", f"bad node tag at byte {at}")


def encode_regtree(w: ByteWriter, tree: RegTree):
    w.u32(tree.dim)
    _write_reg_node(w, tree.root, tree.dim)


def decode_regtree(r: ByteReader) -> RegTree:
    dim = r.u32()
    return RegTree(_read_reg_node(r, dim), dim)


# --- linear model ---

def _encode_linear(w: ByteWriter, model: LinearModel):
    w.u32(len(model.classes))
    for c in model.classes:
        w.text(c)
    features = sorted(model.feature_index, key=model.feature_index.get)
    w.u32(len(features))
    for f in features:
        w.text(f)
    w.u32(model.epochs)
    w.i64(model.seed)
    for row in model.weights:
        for v in row:
            w.f64(v)


def _decode_linear(r: ByteReader) -> LinearModel:
    classes = [r.text() for _ in range(r.u32())]
    features = [r.text() for _ in range(r.u32())]
    epochs = r.u32()
    seed = r.i64()
    weights = [[r.f64() for _ in classes] for _ in features]
    return LinearModel(classes, {f: i for i, f in enumerate(features)},
                       weights, epochs, seed)


_KINDS = {
    ClassTree: (KIND_CLASSTREE, _encode_classtree),
    RegTree: (KIND_REGTREE, encode_regtree),
    LinearModel: (KIND_LINEAR, _encode_linear),
}
_DECODERS = {
    KIND_CLASSTREE: _decode_classtree,
    KIND_REGTREE: decode_regtree,
    KIND_LINEAR: _decode_linear,
}


def model_to_bytes(model) -> bytes:
    kind, encode = _KINDS[type(model)]
    body = ByteWriter()
    encode(body, model)
    payload = body.getvalue()
    head = ByteWriter()
    head.parts.append(MAGIC)
    head.u8(VERSION)
    head.u8(kind)
    head.u32(len(payload))
    return head.getvalue() + payload


def model_from_bytes(data: bytes):
    if data[:4] != MAGIC:
        raise ToolkitError("E_MODEL_FORMAT", "bad magic at byte 0")
    r = ByteReader(data, 4)
    version = r.u8()
    if version != VERSION:
        raise ToolkitError("E_MODEL_FORMAT", f"unsupported version at byte 4")
    kind = r.u8()
    decoder = _DECODERS.get(kind)
    if decoder is None:
        raise ToolkitError("E_MODEL_FORMAT", "unknown model kind at byte 5")
    length = r.u32()
    if r.offset + length > len(data):
        raise ToolkitError("E_MODEL_FORMAT", f"truncated at byte {r.offset}")
    model = decoder(r)
    return model


def save_model(model, path):
    with open(path, "wb") as f:
        f.write(model_to_bytes(model))


def load_model(path):
    with open(path, "rb") as f:
        return model_from_bytes(f.read())
