"""JSON documents, collections, and their NDJSON encoding.

A document body is a plain ``dict`` whose insertion order is significant.
Numbers read from NDJSON keep their decimal text: integers become ``int``
and anything with a fraction or exponent becomes :class:`decimal.Decimal`.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from decimal import Decimal
from typing import Any, Iterable

from .errors import DocumentTooLarge, DuplicateId, MalformedDocument, MissingId

DEFAULT_MAX_DOC_BYTES = 16_000_000

JsonValue = Any  # str | int | Decimal | bool | None | dict[str, JsonValue] | list[JsonValue]


class Representation(str, enum.Enum):
    SNV = "snv"
    DT = "dt"
    CNV = "cnv"

    def __str__(self):
        return self.value.upper()


@dataclass(frozen=True)
class JsonDocument:
    id: str
    body: dict

    def __post_init__(self):
        if self.body.get("id") != self.id:
            raise ValueError(f"document body must carry \"id\": {self.id!r}")


@dataclass(frozen=True)
class DocCollection:
    representation: Representation
    documents: tuple[JsonDocument, ...] = ()
    max_doc_bytes: int = DEFAULT_MAX_DOC_BYTES
    _by_id: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "representation", Representation(self.representation))
        object.__setattr__(self, "documents", tuple(self.documents))
        if self.max_doc_bytes <= 0:
            raise ValueError("max_doc_bytes must be positive")
        by_id = {}
        for doc in self.documents:
            if doc.id in by_id:
                raise DuplicateId(doc.id)
            by_id[doc.id] = doc
        object.__setattr__(self, "_by_id", by_id)

    def __len__(self):
        return len(self.documents)

    def __iter__(self):
        return iter(self.documents)

    def get(self, doc_id: str) -> JsonDocument | None:
        return self._by_id.get(doc_id)


class _NeedsSlowPath(Exception):
    pass


def _refuse(obj):
    raise _NeedsSlowPath


def _dump_slow(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if value is None:
        return "null"
    if isinstance(value, str):
        return json.dumps(value, ensure_ascii=False)
    if isinstance(value, (int, Decimal)):
        if isinstance(value, Decimal) and not value.is_finite():
            raise ValueError(f"non-finite number {value}")
        return str(value)
    if isinstance(value, dict):
        return "{" + ",".join(f"{json.dumps(k, ensure_ascii=False)}:{_dump_slow(v)}"
                              for k, v in value.items()) + "}"
    if isinstance(value, (list, tuple)):
        return "[" + ",".join(_dump_slow(v) for v in value) + "]"
    raise TypeError(f"not a JSON value: {value!r}")


def dumps(value: JsonValue) -> str:
    """Compact, deterministic JSON text; names keep their stored order."""
    try:
        return json.dumps(value, ensure_ascii=False, separators=(",", ":"),
                          allow_nan=False, default=_refuse)
    except _NeedsSlowPath:
        return _dump_slow(value)


def document_size(doc: JsonDocument) -> int:
    return len(dumps(doc.body).encode("utf-8"))


def check_size(doc: JsonDocument, limit: int) -> str:
    line = dumps(doc.body)
    size = len(line.encode("utf-8"))
    if size > limit:
        raise DocumentTooLarge(doc.id, size, limit)
    return line


def serialize_ndjson(coll: DocCollection) -> str:
    return "".join(check_size(doc, coll.max_doc_bytes) + "\n" for doc in coll.documents)


def _pairs_hook(line_no):
    def hook(pairs):
        out = {}
        for name, value in pairs:
            if name in out:
                raise MalformedDocument(line_no, f"duplicate name {name!r}")
            out[name] = value
        return out
    return hook


def _bad_constant(name):
    raise ValueError(f"{name} is not valid JSON")


def parse_ndjson(source: str | Iterable[str], representation: Representation | str,
                 max_doc_bytes: int = DEFAULT_MAX_DOC_BYTES) -> DocCollection:
    lines = source.split("\n") if isinstance(source, str) else source
    docs = []
    seen = set()
    for line_no, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            body = json.loads(line, object_pairs_hook=_pairs_hook(line_no),
                              parse_float=Decimal, parse_constant=_bad_constant)
        except MalformedDocument:
            raise
        except ValueError as exc:
            raise MalformedDocument(line_no, str(exc)) from None
        if not isinstance(body, dict):
            raise MalformedDocument(line_no, "line is not a JSON object")
        doc_id = body.get("id")
        if not isinstance(doc_id, str):
            raise MissingId(line_no)
        if doc_id in seen:
            raise DuplicateId(doc_id)
        seen.add(doc_id)
        docs.append(JsonDocument(doc_id, body))
    return DocCollection(Representation(representation), tuple(docs), max_doc_bytes)
