"""SELECT-only basic graph pattern queries: model, parser, classification.

Grammar::

    SELECT ?a ?b | *  WHERE { term term term . term term term [.] }

Terms are ``?var``, ``<iri>``, ``"literal"`` (optionally ``@lang`` or
``^^<iri>``) or a bare token such as ``StatueOfLiberty`` or ``bsbm:Product``,
which is read as an IRI.  ``#`` starts a comment outside literals.
"""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass
from typing import Iterable, NamedTuple

from .errors import MalformedLine, QuerySyntaxError, UnboundProjection
from .ntriples import Term, scan_term

DEFAULT_SELECTIVITY_THRESHOLD = 10


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self):
        return f"?{self.name}"


class TriplePattern(NamedTuple):
    subject: Term | Var
    predicate: Term | Var
    object: Term | Var

    def variables(self) -> list[str]:
        out = []
        for x in self:
            if isinstance(x, Var) and x.name not in out:
                out.append(x.name)
        return out

    def constants(self):
        """``(s, p, o)`` with ``None`` in variable positions."""
        return tuple(None if isinstance(x, Var) else x for x in self)

    def __str__(self):
        return " ".join(str(x) if isinstance(x, Var) else x.n3() for x in self) + " ."


@dataclass(frozen=True)
class Query:
    projection: tuple[str, ...]
    patterns: tuple[TriplePattern, ...]

    def __post_init__(self):
        object.__setattr__(self, "projection", tuple(self.projection))
        object.__setattr__(self, "patterns", tuple(TriplePattern(*p) for p in self.patterns))
        if not self.patterns:
            raise ValueError("a query needs at least one triple pattern")
        known = set(self.variables())
        for v in self.projection:
            if v not in known:
                raise UnboundProjection(v)

    def variables(self) -> list[str]:
        out = []
        for tp in self.patterns:
            for v in tp.variables():
                if v not in out:
                    out.append(v)
        return out

    def to_text(self) -> str:
        head = " ".join(f"?{v}" for v in self.projection)
        body = "\n".join(f"  {tp}" for tp in self.patterns)
        return f"SELECT {head}\nWHERE {{\n{body}\n}}\n"


class ResultSet:
    """A set of solutions projected onto ``variables``; rows are term tuples."""

    __slots__ = ("variables", "rows")

    def __init__(self, variables: Iterable[str], rows: Iterable[tuple] = ()):
        self.variables = tuple(variables)
        self.rows = frozenset(rows)

    @classmethod
    def from_bindings(cls, variables, bindings: Iterable[dict]):
        variables = tuple(variables)
        return cls(variables, (tuple(b[v] for v in variables) for b in bindings))

    def __len__(self):
        return len(self.rows)

    def __iter__(self):
        return iter(self.bindings())

    def __eq__(self, other):
        if not isinstance(other, ResultSet):
            return NotImplemented
        if set(self.variables) != set(other.variables):
            return False
        if self.variables == other.variables:
            return self.rows == other.rows
        return self.rows == other.project(self.variables).rows

    def __hash__(self):
        return hash(self.project(sorted(self.variables)).rows)

    def __repr__(self):
        return f"ResultSet({list(self.variables)}, {len(self.rows)} rows)"

    def project(self, variables) -> "ResultSet":
        variables = tuple(variables)
        if variables == self.variables:
            return self
        idx = [self.variables.index(v) for v in variables]
        return ResultSet(variables, (tuple(r[i] for i in idx) for r in self.rows))

    def bindings(self) -> list[dict]:
        return [dict(zip(self.variables, r)) for r in sorted(self.rows)]

    def to_tsv(self) -> str:
        """Header of ``?var`` names, then one sorted line per solution."""
        header = "\t".join(f"?{v}" for v in self.variables)
        lines = sorted("\t".join(t.n3() for t in r) for r in self.rows)
        return "\n".join([header, *lines]) + "\n"

    def digest(self) -> str:
        return hashlib.sha256(self.to_tsv().encode("utf-8")).hexdigest()


# -- parsing -----------------------------------------------------------------

_VAR = re.compile(r"[?$]([A-Za-z_][A-Za-z0-9_]*)")
_KEYWORD = re.compile(r"[A-Za-z]+")


class _Reader:
    def __init__(self, text):
        self.text = text
        self.i = 0

    def skip(self):
        text, n = self.text, len(self.text)
        while self.i < n:
            c = text[self.i]
            if c.isspace():
                self.i += 1
            elif c == "#":
                end = text.find("\n", self.i)
                self.i = n if end < 0 else end + 1
            else:
                break

    def peek(self):
        self.skip()
        return self.text[self.i] if self.i < len(self.text) else ""

    def keyword(self, word):
        self.skip()
        m = _KEYWORD.match(self.text, self.i)
        if not m or m.group(0).upper() != word:
            raise QuerySyntaxError(self.i, f"expected {word}")
        self.i = m.end()

    def expect(self, ch):
        if self.peek() != ch:
            raise QuerySyntaxError(self.i, f"expected {ch!r}")
        self.i += 1

    def var(self):
        m = _VAR.match(self.text, self.i)
        if not m:
            return None
        self.i = m.end()
        return m.group(1)

    def term(self):
        self.skip()
        if self.i >= len(self.text):
            raise QuerySyntaxError(self.i, "unexpected end of query")
        name = self.var()
        if name is not None:
            return Var(name)
        try:
            t, self.i = scan_term(self.text, self.i, allow_bare=True)
        except MalformedLine as exc:
            raise QuerySyntaxError(self.i, exc.reason) from None
        return t


def parse_query(text: str) -> Query:
    r = _Reader(text)
    r.keyword("SELECT")
    projection = []
    star = False
    if r.peek() == "*":
        r.i += 1
        star = True
    else:
        while r.peek() in ("?", "$"):
            name = r.var()
            if name is None:
                raise QuerySyntaxError(r.i, "bad variable name")
            if name not in projection:
                projection.append(name)
        if not projection:
            raise QuerySyntaxError(r.i, "SELECT needs variables or *")
    r.keyword("WHERE")
    r.expect("{")
    patterns = []
    while r.peek() != "}":
        if r.peek() == "":
            raise QuerySyntaxError(r.i, "unterminated group, expected '}'")
        start = r.i
        s, p, o = r.term(), r.term(), r.term()
        if isinstance(s, Term) and not s.is_iri:
            raise QuerySyntaxError(start, "literal in subject position")
        if isinstance(p, Term) and not p.is_iri:
            raise QuerySyntaxError(start, "literal in predicate position")
        patterns.append(TriplePattern(s, p, o))
        if r.peek() == ".":
            r.i += 1
        elif r.peek() != "}":
            raise QuerySyntaxError(r.i, "expected '.' or '}'")
    r.i += 1
    if r.peek():
        raise QuerySyntaxError(r.i, "trailing text after '}'")
    if not patterns:
        raise QuerySyntaxError(r.i - 1, "empty basic graph pattern")
    if star:
        projection = []
        for tp in patterns:
            for v in tp.variables():
                if v not in projection:
                    projection.append(v)
    return Query(tuple(projection), tuple(patterns))


# -- classification ------------------------------------------------------------

SS, SO, CO, SINGLE = "SS", "SO", "Co", "SinglePattern"


@dataclass(frozen=True)
class QueryClass:
    kind: str
    selective: bool


def _subject_key(tp: TriplePattern):
    return tp.subject


def has_ss_join(q: Query) -> bool:
    keys = [_subject_key(tp) for tp in q.patterns]
    return len(set(keys)) < len(keys)


def has_so_join(q: Query) -> bool:
    objects = {tp.object for tp in q.patterns if isinstance(tp.object, Var)}
    for i, tp in enumerate(q.patterns):
        if isinstance(tp.subject, Var) and tp.subject in objects:
            # a pattern may not chain onto itself (?x p ?x)
            if any(j != i and other.object == tp.subject for j, other in enumerate(q.patterns)):
                return True
    return False


def classify_query(q: Query, store=None,
                   threshold: int = DEFAULT_SELECTIVITY_THRESHOLD) -> QueryClass:
    """Kind by join shape; selectivity from the store's catalog when given.

    A star whose patterns all share one subject is SS; subject-object chaining
    without any shared subject is SO; chaining plus shared subjects is Co.
    Joins of neither shape (object-object, disconnected) also count as Co.
    """
    if len(q.patterns) == 1:
        kind = SINGLE
    elif len({_subject_key(tp) for tp in q.patterns}) == 1:
        kind = SS
    elif has_so_join(q):
        kind = CO if has_ss_join(q) else SO
    else:
        kind = CO
    selective = False
    if store is not None:
        estimate = min(store.estimate(*tp.constants()) for tp in q.patterns)
        selective = estimate <= threshold
    return QueryClass(kind, selective)
