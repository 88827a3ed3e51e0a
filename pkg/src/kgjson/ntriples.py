"""RDF terms, knowledge graphs, and the N-Triples line format.

Only IRIs and literals are supported.  Literal language tags and ``^^``
datatypes are kept verbatim in :attr:`Term.datatype` and never interpreted.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator, NamedTuple

from .errors import AmbiguousPrefix, MalformedLine, NonIriSubject

IRI = "iri"
LITERAL = "literal"

_WS = re.compile(r"\s")
_LANG = re.compile(r"@[A-Za-z]+(-[A-Za-z0-9]+)*")
_BARE = re.compile(r"[^\s<>\"{}.;,]+(?:\.[^\s<>\"{}.;,]+)*")

_UNESCAPE = {'"': '"', "\\": "\\", "n": "\n", "r": "\r", "t": "\t", "'": "'",
             "b": "\b", "f": "\f"}


class Term(NamedTuple):
    """An IRI or a literal.

    Field order doubles as the canonical sort key, so tuples of terms sort
    without any Python-level comparison code.
    """

    lexical: str
    kind: str = IRI
    datatype: str = ""  # raw suffix, "@en" or "^^<iri>"; literals only

    @property
    def is_iri(self) -> bool:
        return self.kind == IRI

    def n3(self) -> str:
        if self.kind == IRI:
            return f"<{self.lexical}>"
        return f'"{escape_literal(self.lexical)}"{self.datatype}'

    def __str__(self) -> str:
        return self.n3()


def iri(value: str) -> Term:
    if not value or _WS.search(value):
        raise ValueError(f"invalid IRI {value!r}")
    return Term(value, IRI)


def literal(value: str, datatype: str = "") -> Term:
    return Term(value, LITERAL, datatype)


class Triple(NamedTuple):
    subject: Term
    predicate: Term
    object: Term

    def n3(self) -> str:
        return f"{self.subject.n3()} {self.predicate.n3()} {self.object.n3()} ."


class KnowledgeGraph:
    """An immutable set of triples kept in canonical (s, p, o) order."""

    __slots__ = ("triples", "subjects", "predicates", "objects", "_set")

    def __init__(self, triples: Iterable[Triple] = ()):
        unique = {t if type(t) is Triple else Triple(*t) for t in triples}
        for t in unique:
            if t.subject.kind != IRI or t.predicate.kind != IRI:
                raise ValueError(f"subject and predicate must be IRIs: {t}")
        self._set = frozenset(unique)
        self.triples: tuple[Triple, ...] = tuple(sorted(unique))
        self.subjects = frozenset(t.subject for t in self.triples)
        self.predicates = frozenset(t.predicate for t in self.triples)
        self.objects = frozenset(t.object for t in self.triples)

    def __len__(self) -> int:
        return len(self.triples)

    def __iter__(self) -> Iterator[Triple]:
        return iter(self.triples)

    def __contains__(self, triple) -> bool:
        return triple in self._set

    def __eq__(self, other) -> bool:
        if not isinstance(other, KnowledgeGraph):
            return NotImplemented
        return self._set == other._set

    def __hash__(self) -> int:
        return hash(self._set)

    def __repr__(self) -> str:
        return (f"KnowledgeGraph({len(self.triples)} triples, {len(self.subjects)} subjects, "
                f"{len(self.predicates)} predicates)")

    def as_set(self) -> frozenset:
        return self._set

    def difference(self, other: "KnowledgeGraph") -> list[Triple]:
        return sorted(self._set - other._set)


# -- term scanning -----------------------------------------------------------

def escape_literal(text: str) -> str:
    return (text.replace("\\", "\\\\").replace('"', '\\"')
            .replace("\n", "\\n").replace("\r", "\\r"))


def scan_term(text: str, i: int, line_no: int = 0, allow_bare: bool = False) -> tuple[Term, int]:
    """Read one term starting at ``text[i]``; return it and the index after it.

    With ``allow_bare`` a token such as ``StatueOfLiberty`` or ``ex:City`` is
    read as an IRI, which is how the query language writes them.
    """
    c = text[i]
    if c == "<":
        end = text.find(">", i + 1)
        if end < 0:
            raise MalformedLine(line_no, "unbalanced angle bracket")
        value = text[i + 1:end]
        if not value or _WS.search(value) or "<" in value:
            raise MalformedLine(line_no, f"invalid IRI <{value}>")
        return Term(value, IRI), end + 1
    if c == '"':
        chars = []
        j = i + 1
        n = len(text)
        while True:
            if j >= n:
                raise MalformedLine(line_no, "unbalanced quote")
            ch = text[j]
            if ch == '"':
                break
            if ch == "\\":
                if j + 1 >= n:
                    raise MalformedLine(line_no, "dangling escape")
                e = text[j + 1]
                if e in _UNESCAPE:
                    chars.append(_UNESCAPE[e])
                    j += 2
                elif e in "uU":
                    width = 4 if e == "u" else 8
                    digits = text[j + 2:j + 2 + width]
                    if len(digits) != width:
                        raise MalformedLine(line_no, "short unicode escape")
                    try:
                        chars.append(chr(int(digits, 16)))
                    except ValueError:
                        raise MalformedLine(line_no, f"bad unicode escape \\{e}{digits}") from None
                    j += 2 + width
                else:
                    raise MalformedLine(line_no, f"unknown escape \\{e}")
                continue
            chars.append(ch)
            j += 1
        j += 1
        tag = ""
        if text.startswith("^^", j):
            if j + 2 >= len(text) or text[j + 2] != "<":
                raise MalformedLine(line_no, "datatype must be an IRI")
            dt, k = scan_term(text, j + 2, line_no)
            tag = f"^^<{dt.lexical}>"
            j = k
        elif j < len(text) and text[j] == "@":
            m = _LANG.match(text, j)
            if not m:
                raise MalformedLine(line_no, "bad language tag")
            tag = m.group(0)
            j = m.end()
        return Term("".join(chars), LITERAL, tag), j
    if allow_bare:
        m = _BARE.match(text, i)
        if m:
            return Term(m.group(0), IRI), m.end()
    raise MalformedLine(line_no, f"unexpected character {c!r} at column {i + 1}")


def _skip_ws(text: str, i: int) -> int:
    n = len(text)
    while i < n and text[i] in " \t":
        i += 1
    return i


def parse_line(line: str, line_no: int = 0) -> Triple | None:
    """Parse one N-Triples line; ``None`` for blank and comment lines."""
    i = _skip_ws(line, 0)
    if i >= len(line) or line[i] == "#":
        return None
    terms = []
    for position in ("subject", "predicate", "object"):
        if i >= len(line):
            raise MalformedLine(line_no, f"missing {position}")
        term, i = scan_term(line, i, line_no)
        if position != "object" and term.kind != IRI:
            raise NonIriSubject(line_no, position)
        terms.append(term)
        j = _skip_ws(line, i)
        if position != "object" and j == i:
            raise MalformedLine(line_no, f"no space after {position}")
        i = j
    if i >= len(line) or line[i] != ".":
        raise MalformedLine(line_no, "missing terminating '.'")
    i = _skip_ws(line, i + 1)
    if i < len(line) and line[i] != "#":
        raise MalformedLine(line_no, "trailing characters after '.'")
    return Triple(*terms)


def parse_ntriples(source: str | Iterable[str]) -> KnowledgeGraph:
    """Parse N-Triples text (or an iterable of lines) into a knowledge graph."""
    lines = source.split("\n") if isinstance(source, str) else source
    triples = []
    for line_no, line in enumerate(lines, start=1):
        t = parse_line(line.rstrip("\r\n"), line_no)
        if t is not None:
            triples.append(t)
    return KnowledgeGraph(triples)


def write_ntriples(kg: KnowledgeGraph) -> str:
    return "".join(t.n3() + "\n" for t in kg.triples)


# -- prefix maps -------------------------------------------------------------

@dataclass(frozen=True)
class PrefixMap:
    """Ordered ``(prefix IRI, short name)`` pairs used to shorten long IRIs.

    ``shorten`` rewrites the longest matching prefix to ``short:rest``;
    ``expand`` undoes it.
    """

    entries: tuple[tuple[str, str], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple((p, s) for p, s in self.entries))
        shorts = [s for _, s in self.entries]
        if len(set(shorts)) != len(shorts):
            raise ValueError("short names in a prefix map must be unique")
        for prefix, short in self.entries:
            if not prefix or not short or ":" in short:
                raise ValueError(f"invalid prefix entry ({prefix!r}, {short!r})")
        by_len = sorted(self.entries, key=lambda e: -len(e[0]))
        object.__setattr__(self, "_by_len", tuple(by_len))
        object.__setattr__(self, "_by_short", dict((s, p) for p, s in self.entries))

    def __len__(self):
        return len(self.entries)

    def check(self) -> None:
        seen = {}
        for prefix, short in self.entries:
            if prefix in seen and seen[prefix] != short:
                raise AmbiguousPrefix(f"{prefix!r} maps to both {seen[prefix]!r} and {short!r}")
            seen[prefix] = short

    def shorten(self, value: str) -> str:
        for prefix, short in self._by_len:
            if value.startswith(prefix):
                return f"{short}:{value[len(prefix):]}"
        return value

    def expand(self, value: str) -> str:
        short, sep, rest = value.partition(":")
        if sep and short in self._by_short:
            return self._by_short[short] + rest
        return value


def read_prefix_map(text: str) -> PrefixMap:
    """Read a tab-separated ``prefixIri<TAB>shortName`` file."""
    entries = []
    for line_no, line in enumerate(text.splitlines(), start=1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        parts = line.strip().split("\t")
        if len(parts) != 2:
            raise MalformedLine(line_no, "expected prefixIri<TAB>shortName")
        entries.append((parts[0], parts[1]))
    return PrefixMap(tuple(entries))


def _rewrite(kg: KnowledgeGraph, fn) -> KnowledgeGraph:
    cache = {}

    def term(t: Term) -> Term:
        if t.kind != IRI:
            return t
        out = cache.get(t)
        if out is None:
            out = cache[t] = Term(fn(t.lexical), IRI)
        return out

    return KnowledgeGraph(Triple(term(s), term(p), term(o)) for s, p, o in kg.triples)


def apply_prefix_map(kg: KnowledgeGraph, pm: PrefixMap) -> KnowledgeGraph:
    pm.check()
    if not pm.entries:
        return kg
    return _rewrite(kg, pm.shorten)


def expand_prefix_map(kg: KnowledgeGraph, pm: PrefixMap) -> KnowledgeGraph:
    pm.check()
    if not pm.entries:
        return kg
    return _rewrite(kg, pm.expand)
