"""Build SNV, DT and CNV document collections from a knowledge graph and back.

All three layouts use the same convention for terms inside JSON:

* document ids, ``Subject``/``Predicate`` values and predicate names are the
  bare IRI text (those positions can only hold IRIs);
* an IRI in object position is written ``<iri>``;
* a plain literal is written as its text, unless the text starts with ``<``
  or ``"`` or the literal carries a language tag or datatype, in which case
  the N-Triples form ``"text"@en`` / ``"text"^^<iri>`` is used.

With that convention every collection inverts to exactly the source triples.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from decimal import Decimal
from functools import lru_cache
from itertools import groupby
from typing import Iterator

from .errors import DocumentTooLarge, MalformedLine, SchemaViolation
from .jsondoc import (DEFAULT_MAX_DOC_BYTES, DocCollection, JsonDocument, Representation,
                      check_size)
from .ntriples import IRI, LITERAL, KnowledgeGraph, Term, Triple, scan_term

DEFAULT_MAX_DEPTH = 5

XSD = "http://www.w3.org/2001/XMLSchema#"


def encode_object(t: Term) -> str:
    if t.kind == IRI:
        return f"<{t.lexical}>"
    if t.datatype or t.lexical.startswith(("<", '"')):
        return t.n3()
    return t.lexical


@lru_cache(maxsize=1 << 18)
def decode_object(value: str) -> Term:
    if value.startswith("<") and value.endswith(">") and len(value) > 2:
        return Term(value[1:-1], IRI)
    if value.startswith('"'):
        try:
            term, end = scan_term(value, 0)
        except MalformedLine:
            end = -1
        if end == len(value):
            return term
        raise ValueError(f"bad literal encoding {value!r}")
    return Term(value, LITERAL)


def atomic_term(doc_id, value) -> Term:
    if isinstance(value, str):
        try:
            return decode_object(value)
        except ValueError as exc:
            raise SchemaViolation(doc_id, str(exc)) from None
    if isinstance(value, bool):
        return Term("true" if value else "false", LITERAL, f"^^<{XSD}boolean>")
    if isinstance(value, int):
        return Term(str(value), LITERAL, f"^^<{XSD}integer>")
    if isinstance(value, Decimal):
        return Term(str(value), LITERAL, f"^^<{XSD}decimal>")
    raise SchemaViolation(doc_id, f"unsupported value {value!r}")


def _name_iri(doc_id, name: str) -> Term:
    if not name or any(c.isspace() for c in name):
        raise SchemaViolation(doc_id, f"name {name!r} is not an IRI")
    return Term(name, IRI)


def _by_subject(kg: KnowledgeGraph):
    """Yield ``(subject, [(predicate, [objects...]), ...])`` in canonical order."""
    for s, s_triples in groupby(kg.triples, key=lambda t: t.subject):
        groups = []
        for p, p_triples in groupby(s_triples, key=lambda t: t.predicate):
            if p.lexical == "id":
                raise SchemaViolation(s.lexical, 'predicate "id" clashes with the id pair')
            groups.append((p.lexical, [t.object for t in p_triples]))
        yield s, groups


def _finish(representation, docs, max_doc_bytes) -> DocCollection:
    for doc in docs:
        check_size(doc, max_doc_bytes)
    return DocCollection(representation, tuple(docs), max_doc_bytes)


def build_snv(kg: KnowledgeGraph, max_doc_bytes: int = DEFAULT_MAX_DOC_BYTES) -> DocCollection:
    docs = []
    for s, groups in _by_subject(kg):
        body = {"id": s.lexical}
        for p, objs in groups:
            vals = [encode_object(o) for o in objs]
            body[p] = vals[0] if len(vals) == 1 else vals
        docs.append(JsonDocument(s.lexical, body))
    return _finish(Representation.SNV, docs, max_doc_bytes)


def build_dt(kg: KnowledgeGraph, max_doc_bytes: int = DEFAULT_MAX_DOC_BYTES) -> DocCollection:
    docs = []
    for k, (s, p, o) in enumerate(kg.triples):
        doc_id = f"t{k}"
        docs.append(JsonDocument(doc_id, {"id": doc_id, "Subject": s.lexical,
                                          "Predicate": p.lexical, "Object": encode_object(o)}))
    return _finish(Representation.DT, docs, max_doc_bytes)


def build_cnv(kg: KnowledgeGraph, max_depth: int = DEFAULT_MAX_DEPTH,
              max_doc_bytes: int = DEFAULT_MAX_DOC_BYTES) -> DocCollection:
    """One document per subject with outgoing edges expanded along IRI objects.

    An IRI object that is itself a subject is replaced by that subject's node
    unless it already occurs on the current root-to-node path or the node
    would sit ``max_depth`` edges below the root; then it stays atomic.
    """
    if max_depth < 1:
        raise ValueError("max_depth must be >= 1")
    adj = {s.lexical: groups for s, groups in _by_subject(kg)}
    docs = []
    for root in adj:
        budget = [0]

        def node(s, depth, on_path):
            body = {"id": s}
            budget[0] += len(s) + 8
            for p, objs in adj[s]:
                vals = []
                for o in objs:
                    if (o.kind == IRI and depth + 1 < max_depth and o.lexical in adj
                            and o.lexical not in on_path):
                        on_path.add(o.lexical)
                        vals.append(node(o.lexical, depth + 1, on_path))
                        on_path.discard(o.lexical)
                    else:
                        v = encode_object(o)
                        budget[0] += len(v) + 3
                        vals.append(v)
                budget[0] += len(p) + 3
                if budget[0] > max_doc_bytes:
                    # a lower bound on the final size already breaks the limit
                    raise DocumentTooLarge(root, budget[0], max_doc_bytes)
                body[p] = vals[0] if len(vals) == 1 else vals
            return body

        docs.append(JsonDocument(root, node(root, 0, {root})))
    return _finish(Representation.CNV, docs, max_doc_bytes)


BUILDERS = {
    Representation.SNV: build_snv,
    Representation.DT: build_dt,
    Representation.CNV: build_cnv,
}


def build(kg: KnowledgeGraph, representation, max_depth: int = DEFAULT_MAX_DEPTH,
          max_doc_bytes: int = DEFAULT_MAX_DOC_BYTES) -> DocCollection:
    representation = Representation(representation)
    if representation is Representation.CNV:
        return build_cnv(kg, max_depth, max_doc_bytes)
    return BUILDERS[representation](kg, max_doc_bytes)


# -- inversion ---------------------------------------------------------------

def _values(value):
    return value if isinstance(value, list) else (value,)


def _snv_triples(doc: JsonDocument) -> Iterator[Triple]:
    s = _name_iri(doc.id, doc.id)
    for name, value in doc.body.items():
        if name == "id":
            continue
        p = _name_iri(doc.id, name)
        if isinstance(value, list) and not value:
            raise SchemaViolation(doc.id, f"empty array under {name!r}")
        for v in _values(value):
            if isinstance(v, (dict, list)):
                raise SchemaViolation(doc.id, f"nested value under {name!r} in an SNV document")
            yield Triple(s, p, atomic_term(doc.id, v))


def _dt_triples(doc: JsonDocument) -> Iterator[Triple]:
    body = doc.body
    if set(body) != {"id", "Subject", "Predicate", "Object"}:
        raise SchemaViolation(doc.id, "DT documents hold exactly id, Subject, Predicate, Object")
    s, p, o = body["Subject"], body["Predicate"], body["Object"]
    if not isinstance(s, str) or not isinstance(p, str):
        raise SchemaViolation(doc.id, "Subject and Predicate must be IRI text")
    if isinstance(o, (dict, list)):
        raise SchemaViolation(doc.id, "DT documents contain no nested values")
    yield Triple(_name_iri(doc.id, s), _name_iri(doc.id, p), atomic_term(doc.id, o))


def _cnv_triples(doc: JsonDocument) -> Iterator[Triple]:
    stack = [doc.body]
    while stack:
        node = stack.pop()
        node_id = node.get("id")
        if not isinstance(node_id, str):
            raise SchemaViolation(doc.id, "nested node without an id")
        s = _name_iri(doc.id, node_id)
        for name, value in node.items():
            if name == "id":
                continue
            p = _name_iri(doc.id, name)
            if isinstance(value, list) and not value:
                raise SchemaViolation(doc.id, f"empty array under {name!r}")
            for v in _values(value):
                if isinstance(v, dict):
                    stack.append(v)
                    child = v.get("id")
                    if not isinstance(child, str):
                        raise SchemaViolation(doc.id, "nested node without an id")
                    yield Triple(s, p, _name_iri(doc.id, child))
                elif isinstance(v, list):
                    raise SchemaViolation(doc.id, "arrays cannot nest directly")
                else:
                    yield Triple(s, p, atomic_term(doc.id, v))


_EXTRACTORS = {
    Representation.SNV: _snv_triples,
    Representation.DT: _dt_triples,
    Representation.CNV: _cnv_triples,
}


def document_triples(doc: JsonDocument, representation) -> Iterator[Triple]:
    """Triples carried by one document (CNV documents may repeat some)."""
    return _EXTRACTORS[Representation(representation)](doc)


def extract_triples(coll: DocCollection) -> KnowledgeGraph:
    extract = _EXTRACTORS[coll.representation]
    return KnowledgeGraph(t for doc in coll.documents for t in extract(doc))


@dataclass
class EquivalenceReport:
    equivalent: bool
    missing_in_target: list = field(default_factory=list)
    missing_in_source: list = field(default_factory=list)
    mapping_trace: list = field(default_factory=list)


def check_equivalence(a: DocCollection, b: DocCollection, trace: bool = True) -> EquivalenceReport:
    """Map every name/value occurrence of ``a`` onto a document of ``b``.

    Each trace entry is ``(source doc id, target doc id, (predicate, value))``;
    occurrences with no counterpart land in ``missing_in_target``.
    """
    extract_a = _EXTRACTORS[a.representation]
    extract_b = _EXTRACTORS[b.representation]
    located = {}
    for doc in b.documents:
        for t in extract_b(doc):
            located.setdefault(t, doc.id)
    seen_a = set()
    mapping = []
    for doc in a.documents:
        for t in extract_a(doc):
            seen_a.add(t)
            target = located.get(t)
            if trace and target is not None:
                mapping.append((doc.id, target, (t.predicate.lexical, encode_object(t.object))))
    missing_in_target = sorted(seen_a - located.keys())
    missing_in_source = sorted(located.keys() - seen_a)
    return EquivalenceReport(not missing_in_target and not missing_in_source,
                             missing_in_target, missing_in_source, mapping)
