"""Immutable in-memory document store with ordered indexes and op counters."""

from __future__ import annotations

import time
from bisect import bisect_left
from dataclasses import dataclass, field, fields
from typing import NamedTuple

from .errors import NotACnvStore, QueryTimeout
from .jsondoc import DocCollection, JsonDocument, Representation
from .ntriples import IRI, Term, Triple
from .representations import DEFAULT_MAX_DEPTH, atomic_term, decode_object, document_triples


@dataclass
class OpCounters:
    """Work done by one query execution.

    ``key_comparisons`` counts three-way key comparisons inside ordered
    index probes.  ``deadline`` is a monotonic timestamp; :meth:`tick` raises
    :class:`QueryTimeout` once it has passed.
    """

    index_probes: int = 0
    docs_fetched: int = 0
    entries_scanned: int = 0
    bindings_materialized: int = 0
    key_comparisons: int = 0
    deadline: float | None = field(default=None, compare=False, repr=False)
    _ticks: int = field(default=0, compare=False, repr=False)

    REPORTED = ("index_probes", "docs_fetched", "entries_scanned", "bindings_materialized")

    def reset(self):
        for f in fields(self):
            if f.name not in ("deadline",):
                setattr(self, f.name, 0)

    def as_dict(self) -> dict:
        return {name: getattr(self, name) for name in self.REPORTED}

    def tick(self, n: int = 1):
        self._ticks += n
        if self.deadline is not None and self._ticks >= 4096:
            self._ticks = 0
            if time.monotonic() > self.deadline:
                raise QueryTimeout("query exceeded its time budget")


class OrderedIndex:
    """A sorted array map: logarithmic point probes and prefix range scans."""

    __slots__ = ("keys", "values")

    def __init__(self, items=()):
        pairs = sorted(items, key=lambda kv: kv[0])
        self.keys = [k for k, _ in pairs]
        self.values = [v for _, v in pairs]
        for a, b in zip(self.keys, self.keys[1:]):
            if a == b:
                raise ValueError(f"duplicate index key {a!r}")

    def __len__(self):
        return len(self.keys)

    def items(self):
        return zip(self.keys, self.values)

    def find(self, key, counters: OpCounters | None = None):
        """Binary search; returns the value or ``None``."""
        keys = self.keys
        lo, hi = 0, len(keys)
        comparisons = 0
        while lo < hi:
            mid = (lo + hi) // 2
            k = keys[mid]
            comparisons += 1
            if k == key:
                if counters is not None:
                    counters.key_comparisons += comparisons
                return self.values[mid]
            if k < key:
                lo = mid + 1
            else:
                hi = mid
        if counters is not None:
            counters.key_comparisons += comparisons
        return None

    def prefix(self, head):
        """Yield ``(key, value)`` for every tuple key whose first element is ``head``."""
        keys = self.keys
        i = bisect_left(keys, (head,))
        n = len(keys)
        while i < n and keys[i][0] == head:
            yield keys[i], self.values[i]
            i += 1


class PathHit(NamedTuple):
    root: Term
    hops: tuple  # entities strictly between root and leaf
    leaf: Term


def _values(value):
    return value if isinstance(value, list) else (value,)


def _term(value) -> Term:
    if isinstance(value, dict):
        return Term(value["id"], IRI)
    if isinstance(value, str):
        return decode_object(value)
    return atomic_term("?", value)


class Store:
    """A loaded collection plus its indexes.

    * ``subject_index``: document id -> document (subject IRI for SNV/CNV,
      synthetic ``t<k>`` id for DT)
    * ``po_index``: ``(predicate, object term)`` -> sorted subject terms
    * ``subject_rows`` (DT only): subject IRI -> ids of that subject's documents
    * ``path_index`` (CNV only): ``(predicate sequence, leaf term)`` -> hits
    """

    def __init__(self, collection: DocCollection, max_depth: int = DEFAULT_MAX_DEPTH):
        started = time.perf_counter()
        self.collection = collection
        self.representation = collection.representation
        self.max_depth = max_depth
        self.subject_index = OrderedIndex((doc.id, doc) for doc in collection.documents)

        po = {}
        rows = {}
        pred_counts = {}
        degree = {}
        n_triples = 0
        for doc in collection.documents:
            for s, p, o in self._doc_edges(doc):
                po.setdefault((p.lexical, o), set()).add(s)
                pred_counts[p.lexical] = pred_counts.get(p.lexical, 0) + 1
                degree[s.lexical] = degree.get(s.lexical, 0) + 1
                n_triples += 1
                if self.representation is Representation.DT:
                    rows.setdefault(s.lexical, []).append(doc.id)
        self.po_index = OrderedIndex((k, tuple(sorted(v))) for k, v in po.items())
        self.subject_rows = (OrderedIndex((k, tuple(v)) for k, v in rows.items())
                             if self.representation is Representation.DT else None)
        self.predicate_counts = pred_counts
        self.subject_degree = degree
        self.triple_count = n_triples
        self.path_index = (self._build_path_index()
                           if self.representation is Representation.CNV else None)
        self.load_seconds = time.perf_counter() - started

    # -- loading helpers -------------------------------------------------

    def _doc_edges(self, doc: JsonDocument):
        if self.representation is Representation.DT:
            yield from document_triples(doc, Representation.DT)
            return
        s = Term(doc.id, IRI)
        for name, value in doc.body.items():
            if name == "id":
                continue
            p = Term(name, IRI)
            for v in _values(value):
                yield Triple(s, p, _term(v))

    def _build_path_index(self):
        bodies = {doc.id: doc.body for doc in self.collection.documents}
        max_depth = self.max_depth
        seqs = {}
        index = {}

        def visit(root, body, seq, hops):
            for name, value in body.items():
                if name == "id":
                    continue
                seq2 = seqs.setdefault(seq + (name,), seq + (name,))
                for v in _values(value):
                    leaf = _term(v)
                    # entries hold the walk's nodes root..leaf so rows need no reshaping
                    index.setdefault((seq2, leaf), []).append((root, *hops, leaf))
                    if len(seq2) >= max_depth or leaf.kind != IRI:
                        continue
                    # atomic IRIs below the cap are cycle cuts; keep walking through
                    # that entity's own document so non-simple chains are indexed too
                    child = v if isinstance(v, dict) else bodies.get(leaf.lexical)
                    if child is not None:
                        visit(root, child, seq2, hops + (leaf,))

        for doc in self.collection.documents:
            visit(Term(doc.id, IRI), doc.body, (), ())
        return OrderedIndex((k, tuple(sorted(v))) for k, v in index.items())

    # -- statistics --------------------------------------------------------

    def index_stats(self) -> dict:
        out = {
            "representation": str(self.representation),
            "documents": len(self.collection),
            "triples": self.triple_count,
            "subject_index": len(self.subject_index),
            "predicate_object_index": len(self.po_index),
            "load_seconds": round(self.load_seconds, 6),
        }
        if self.subject_rows is not None:
            out["subject_rows_index"] = len(self.subject_rows)
        if self.path_index is not None:
            out["path_index_keys"] = len(self.path_index)
            out["path_index_entries"] = sum(len(v) for v in self.path_index.values)
        return out

    def estimate(self, s: Term | None, p: Term | None, o: Term | None) -> int:
        """Catalog estimate of a pattern's match count; does not touch counters."""
        if p is not None and o is not None:
            hits = self.po_index.find((p.lexical, o))
            n = len(hits) if hits else 0
            if s is not None:
                return 1 if hits and s in hits else 0
            return n
        if s is not None:
            if s.kind != IRI:
                return 0
            return self.subject_degree.get(s.lexical, 0)
        if p is not None:
            return self.predicate_counts.get(p.lexical, 0)
        return self.triple_count

    # -- access paths ------------------------------------------------------

    def subject_edges(self, s: Term, counters: OpCounters) -> list[tuple[Term, Term]]:
        """All ``(predicate, object)`` pairs of subject ``s``, via an index probe."""
        counters.index_probes += 1
        if s.kind != IRI:
            return []  # a literal never keys the index; the probe still counts
        if self.representation is Representation.DT:
            ids = self.subject_rows.find(s.lexical, counters)
            if not ids:
                return []
            out = []
            for doc_id in ids:
                doc = self.subject_index.find(doc_id)
                counters.docs_fetched += 1
                body = doc.body
                out.append((Term(body["Predicate"], IRI), _term(body["Object"])))
            return out
        doc = self.subject_index.find(s.lexical, counters)
        if doc is None:
            return []
        counters.docs_fetched += 1
        return [(p, o) for _, p, o in self._doc_edges(doc)]

    def scan(self, counters: OpCounters):
        """Every triple of the store, in document order."""
        for doc in self.collection.documents:
            counters.docs_fetched += 1
            for t in self._doc_edges(doc):
                counters.entries_scanned += 1
                counters.tick()
                yield t

    def match_triples(self, s: Term | None, p: Term | None, o: Term | None,
                      counters: OpCounters):
        """Triples agreeing with the given constants, through the cheapest index."""
        if s is not None:
            for pp, oo in self.subject_edges(s, counters):
                counters.entries_scanned += 1
                counters.tick()
                if (p is None or pp == p) and (o is None or oo == o):
                    yield Triple(s, pp, oo)
            return
        if p is not None and o is not None:
            for subj in lookup_predicate_object(self, p, o, counters):
                yield Triple(subj, p, o)
            return
        if p is not None:
            counters.index_probes += 1
            for (_, obj), subjects in self.po_index.prefix(p.lexical):
                counters.entries_scanned += len(subjects)
                counters.tick(len(subjects))
                for subj in subjects:
                    yield Triple(subj, p, obj)
            return
        for t in self.scan(counters):
            if o is None or t.object == o:
                yield t


def load(collection: DocCollection, max_depth: int = DEFAULT_MAX_DEPTH) -> Store:
    return Store(collection, max_depth)


def lookup_subject(store: Store, s: Term | str, counters: OpCounters | None = None):
    counters = counters if counters is not None else OpCounters()
    key = s.lexical if isinstance(s, Term) else s
    counters.index_probes += 1
    doc = store.subject_index.find(key, counters)
    if doc is not None:
        counters.docs_fetched += 1
    return doc


def lookup_predicate_object(store: Store, p: Term, o: Term,
                            counters: OpCounters | None = None) -> list[Term]:
    counters = counters if counters is not None else OpCounters()
    counters.index_probes += 1
    hits = store.po_index.find((p.lexical, o), counters) or ()
    counters.entries_scanned += len(hits)
    counters.tick(len(hits))
    return list(hits)


def path_walks(store: Store, predicates, leaf: Term | None = None,
               counters: OpCounters | None = None) -> list[tuple]:
    """Like :func:`lookup_path` but returns bare ``(root, *hops, leaf)`` tuples."""
    if store.representation is not Representation.CNV:
        raise NotACnvStore(f"path lookups need a CNV store, not {store.representation}")
    seq = tuple(p.lexical if isinstance(p, Term) else p for p in predicates)
    if not 1 <= len(seq) <= store.max_depth:
        raise ValueError(f"path length must be within 1..{store.max_depth}, got {len(seq)}")
    counters = counters if counters is not None else OpCounters()
    counters.index_probes += 1
    if leaf is not None:
        out = store.path_index.find((seq, leaf), counters) or ()
    else:
        out = []
        for _, entries in store.path_index.prefix(seq):
            out.extend(entries)
    counters.entries_scanned += len(out)
    counters.tick(len(out))
    return out


def lookup_path(store: Store, predicates, leaf: Term | None = None,
                counters: OpCounters | None = None) -> list[PathHit]:
    """Chains ``root -p1-> h1 -p2-> ... -pk-> leaf`` answered by one path-index probe."""
    return [PathHit(w[0], w[1:-1], w[-1]) for w in path_walks(store, predicates, leaf, counters)]
