"""Query execution over a :class:`~kgjson.store.Store`.

Every strategy returns the same solutions; they differ in the access paths
they use and therefore in the work recorded in :class:`OpCounters`.
"""

from __future__ import annotations

import enum
import time
from operator import itemgetter

from .errors import ChainTooLong, NoSharedVariable, StrategyMismatch
from .jsondoc import Representation
from .ntriples import IRI, KnowledgeGraph, Term
from .query import SO, SS, Query, ResultSet, TriplePattern, Var, classify_query
from .representations import extract_triples
from .store import OpCounters, Store, _term, _values, lookup_predicate_object, path_walks, \
    lookup_subject


class Strategy(str, enum.Enum):
    ORACLE = "oracle"
    HASH_JOIN = "hash-join"
    INDEX_NESTED_LOOP = "index-nested-loop"
    SNV_SUBJECT_LOOKUP = "snv-lookup"
    CNV_PATH_LOOKUP = "cnv-path"
    AUTO = "auto"

    def __str__(self):
        return self.value


def compatible_strategies(representation) -> list[Strategy]:
    representation = Representation(representation)
    out = [Strategy.HASH_JOIN, Strategy.INDEX_NESTED_LOOP]
    if representation is Representation.SNV:
        out.append(Strategy.SNV_SUBJECT_LOOKUP)
    if representation is Representation.CNV:
        out.append(Strategy.CNV_PATH_LOOKUP)
    return out


# -- single patterns -----------------------------------------------------------

def _unify(tp: TriplePattern, triple, binding: dict | None = None) -> dict | None:
    b = dict(binding) if binding else {}
    for x, t in zip(tp, triple):
        if isinstance(x, Var):
            bound = b.get(x.name)
            if bound is None:
                b[x.name] = t
            elif bound != t:
                return None
        elif x != t:
            return None
    return b


def match_bgp(store: Store, tp: TriplePattern, counters: OpCounters | None = None) -> ResultSet:
    """All solutions of one triple pattern, using the cheapest applicable index."""
    counters = counters if counters is not None else OpCounters()
    tp = TriplePattern(*tp)
    variables = tp.variables()
    rows = set()
    for t in store.match_triples(*tp.constants(), counters):
        b = _unify(tp, t)
        if b is not None:
            rows.add(tuple(b[v] for v in variables))
    counters.bindings_materialized += len(rows)
    return ResultSet(variables, rows)


# -- joins -------------------------------------------------------------------

def join_bindings(left: ResultSet, right: ResultSet, kind: str | None = None,
                  counters: OpCounters | None = None) -> ResultSet:
    """Hash join on the shared variables: build on the smaller input, probe the larger.

    ``kind`` ("SS" or "SO") documents the join shape and is not needed to
    compute it.  Inputs without a shared variable are refused.
    """
    if kind not in (None, SS, SO):
        raise ValueError(f"unknown join kind {kind!r}")
    counters = counters if counters is not None else OpCounters()
    shared = [v for v in left.variables if v in right.variables]
    if not shared:
        raise NoSharedVariable(f"{left.variables} and {right.variables} share no variable")
    build, probe = (left, right) if len(left) <= len(right) else (right, left)
    b_key = [build.variables.index(v) for v in shared]
    p_key = [probe.variables.index(v) for v in shared]
    b_rest = [i for i, v in enumerate(build.variables) if v not in shared]
    p_rest = [i for i, v in enumerate(probe.variables) if v not in shared]
    out_vars = (tuple(shared) + tuple(build.variables[i] for i in b_rest)
                + tuple(probe.variables[i] for i in p_rest))
    table = {}
    for row in build.rows:
        table.setdefault(tuple(row[i] for i in b_key), []).append(tuple(row[i] for i in b_rest))
    counters.entries_scanned += len(build.rows)
    out = set()
    for row in probe.rows:
        counters.tick()
        matches = table.get(tuple(row[i] for i in p_key))
        if matches:
            head = tuple(row[i] for i in p_key)
            tail = tuple(row[i] for i in p_rest)
            for m in matches:
                out.add(head + m + tail)
    counters.entries_scanned += len(probe.rows)
    counters.bindings_materialized += len(out)
    result = ResultSet(out_vars, out)
    order = list(left.variables) + [v for v in right.variables if v not in left.variables]
    return result.project(order)


def _cross(left: ResultSet, right: ResultSet, counters: OpCounters) -> ResultSet:
    rows = set()
    for a in left.rows:
        counters.tick(len(right.rows) or 1)
        for b in right.rows:
            rows.add(a + b)
    counters.bindings_materialized += len(rows)
    return ResultSet(left.variables + right.variables, rows)


def _combine(acc: ResultSet, nxt: ResultSet, counters: OpCounters) -> ResultSet:
    if any(v in acc.variables for v in nxt.variables):
        return join_bindings(acc, nxt, counters=counters)
    # disconnected inputs or a ground pattern: BGP semantics need the product
    return _cross(acc, nxt, counters)


def _plan(items):
    """Join order: ascending estimate, ties by position, preferring connected inputs.

    ``items`` is a list of ``(estimate, position, variables, payload)``.
    """
    pending = sorted(items, key=lambda it: (it[0], it[1]))
    order = [pending.pop(0)]
    seen = set(order[0][2])
    while pending:
        pick = next((k for k, it in enumerate(pending) if seen & set(it[2])), 0)
        it = pending.pop(pick)
        seen |= set(it[2])
        order.append(it)
    return order


def _join_all(results: list[tuple[int, int, ResultSet]], counters: OpCounters) -> ResultSet:
    order = _plan([(est, pos, rs.variables, rs) for est, pos, rs in results])
    acc = order[0][3]
    for _, _, _, rs in order[1:]:
        acc = _combine(acc, rs, counters)
    return acc


def _estimate(store: Store, tp: TriplePattern) -> int:
    return store.estimate(*tp.constants())


# -- strategies ----------------------------------------------------------------

def _hash_join(store: Store, q: Query, counters: OpCounters) -> ResultSet:
    scans = [(_estimate(store, tp), i, match_bgp(store, tp, counters))
             for i, tp in enumerate(q.patterns)]
    return _join_all(scans, counters)


def _substitute(tp: TriplePattern, b: dict) -> TriplePattern:
    return TriplePattern(*(b.get(x.name, x) if isinstance(x, Var) else x for x in tp))


def _index_nested_loop(store: Store, q: Query, counters: OpCounters) -> ResultSet:
    order = _plan([(_estimate(store, tp), i, tp.variables(), tp)
                   for i, tp in enumerate(q.patterns)])
    first = match_bgp(store, order[0][3], counters)
    variables = list(first.variables)
    bindings = first.bindings()
    for _, _, _, tp in order[1:]:
        extended = []
        for b in bindings:
            counters.tick()
            bound = _substitute(tp, b)
            for t in store.match_triples(*bound.constants(), counters):
                nb = _unify(bound, t, b)
                if nb is not None:
                    extended.append(nb)
        counters.bindings_materialized += len(extended)
        variables += [v for v in tp.variables() if v not in variables]
        bindings = extended
    return ResultSet.from_bindings(variables, bindings)


def _doc_values(body: dict, p: Term | Var):
    if isinstance(p, Var):
        for name, value in body.items():
            if name != "id":
                for v in _values(value):
                    yield Term(name, IRI), _term(v)
        return
    value = body.get(p.lexical)
    if value is not None:
        for v in _values(value):
            yield p, _term(v)


def _star_in_doc(doc, subject: Term, star, counters: OpCounters) -> list[dict]:
    bindings = [{}]
    for tp in star:
        extended = []
        for b in bindings:
            for p, o in _doc_values(doc.body, tp.predicate):
                counters.entries_scanned += 1
                nb = _unify(tp, (subject, p, o), b)
                if nb is not None:
                    extended.append(nb)
        bindings = extended
        if not bindings:
            break
    return bindings


def _snv_subject_lookup(store: Store, q: Query, counters: OpCounters) -> ResultSet:
    stars = {}
    for i, tp in enumerate(q.patterns):
        stars.setdefault(tp.subject, []).append((i, tp))
    results = []
    for subject, members in stars.items():
        star = [tp for _, tp in members]
        variables = []
        for tp in star:
            variables += [v for v in tp.variables() if v not in variables]
        if isinstance(subject, Term):
            candidates = [subject]
        else:
            seeds = [(_estimate(store, tp), i, tp) for i, tp in members
                     if isinstance(tp.predicate, Term) and isinstance(tp.object, Term)]
            if seeds:
                _, _, seed = min(seeds, key=lambda s: (s[0], s[1]))
                candidates = lookup_predicate_object(store, seed.predicate, seed.object, counters)
            else:
                candidates = [Term(k, IRI) for k in store.subject_index.keys]
                counters.entries_scanned += len(candidates)
        found = []
        for c in candidates:
            counters.tick()
            doc = lookup_subject(store, c, counters)
            if doc is not None:
                found.extend(_star_in_doc(doc, c, star, counters))
        counters.bindings_materialized += len(found)
        rs = ResultSet.from_bindings(variables, found)
        results.append((len(rs), members[0][0], rs))
    return _join_all(results, counters)


def _chains(q: Query, max_depth: int):
    """Split the patterns into subject-object chains with constant predicates.

    Returns ``(chains, rest)``: lists of pattern positions per chain, and
    positions of patterns with a variable predicate.
    """
    pats = q.patterns
    eligible = [i for i, tp in enumerate(pats) if isinstance(tp.predicate, Term)]
    rest = [i for i, tp in enumerate(pats) if not isinstance(tp.predicate, Term)]
    succ = {i: [j for j in eligible if j != i and isinstance(pats[i].object, Var)
                and pats[j].subject == pats[i].object] for i in eligible}
    used = set()

    def grow(i):
        chain = [i]
        used.add(i)
        while True:
            nxt = next((j for j in succ[chain[-1]] if j not in used), None)
            if nxt is None:
                return chain
            chain.append(nxt)
            used.add(nxt)

    chains = []
    for i in eligible:
        if i in used:
            continue
        if any(i in succ[h] for h in eligible if h not in used and h != i):
            continue
        chains.append(grow(i))
    for i in eligible:
        if i not in used:
            chains.append(grow(i))
    for chain in chains:
        if len(chain) > max_depth:
            raise ChainTooLong(len(chain), max_depth)
    return chains, rest


def _cnv_path_lookup(store: Store, q: Query, counters: OpCounters) -> ResultSet:
    chains, rest = _chains(q, store.max_depth)
    results = []
    for chain in chains:
        pats = [q.patterns[i] for i in chain]
        root = pats[0].subject
        leaf = pats[-1].object
        # positions bound by each hit: root, then each pattern's object
        slots = [root] + [tp.object for tp in pats]
        variables = []
        for x in slots:
            if isinstance(x, Var) and x.name not in variables:
                variables.append(x.name)
        walks = path_walks(store, [tp.predicate for tp in pats],
                           leaf if isinstance(leaf, Term) else None, counters)
        first = {}
        checks = []  # (position, constant) or (position, earlier position)
        for k, x in enumerate(slots):
            if isinstance(x, Var):
                if x.name in first:
                    checks.append((k, first[x.name]))
                else:
                    first[x.name] = k
            elif not (k == len(slots) - 1 and isinstance(leaf, Term)):
                checks.append((k, x))  # a probed leaf constant already matches
        pick = [first[v] for v in variables]
        if not checks and len(pick) > 1:
            rows = set(map(itemgetter(*pick), walks))
        elif not checks:
            rows = {(w[pick[0]],) for w in walks}
        else:
            rows = set()
            for w in walks:
                if all(w[k] == (w[c] if isinstance(c, int) else c) for k, c in checks):
                    rows.add(tuple(w[k] for k in pick))
        counters.bindings_materialized += len(rows)
        results.append((len(rows), chain[0], ResultSet(variables, rows)))
    for i in rest:
        rs = match_bgp(store, q.patterns[i], counters)
        results.append((len(rs), i, rs))
    return _join_all(results, counters)


def _oracle_on_store(store: Store, q: Query, counters: OpCounters) -> ResultSet:
    return oracle_execute(extract_triples(store.collection), q)


_RUNNERS = {
    Strategy.ORACLE: _oracle_on_store,
    Strategy.HASH_JOIN: _hash_join,
    Strategy.INDEX_NESTED_LOOP: _index_nested_loop,
    Strategy.SNV_SUBJECT_LOOKUP: _snv_subject_lookup,
    Strategy.CNV_PATH_LOOKUP: _cnv_path_lookup,
}


def choose_strategy(store: Store, q: Query) -> Strategy:
    kind = classify_query(q).kind
    if kind == SS and store.representation is Representation.SNV:
        return Strategy.SNV_SUBJECT_LOOKUP
    if kind == SO and store.representation is Representation.CNV:
        return Strategy.CNV_PATH_LOOKUP
    return Strategy.HASH_JOIN


def execute(store: Store, q: Query, strategy: Strategy | str = Strategy.AUTO,
            counters: OpCounters | None = None,
            timeout: float | None = None) -> tuple[ResultSet, OpCounters]:
    """Run ``q`` on ``store``; ``timeout`` is in seconds."""
    strategy = Strategy(strategy)
    if strategy is Strategy.SNV_SUBJECT_LOOKUP and store.representation is not Representation.SNV:
        raise StrategyMismatch(strategy, store.representation)
    if strategy is Strategy.CNV_PATH_LOOKUP and store.representation is not Representation.CNV:
        raise StrategyMismatch(strategy, store.representation)
    if strategy is Strategy.AUTO:
        strategy = choose_strategy(store, q)
    counters = counters if counters is not None else OpCounters()
    if timeout is not None:
        counters.deadline = time.monotonic() + timeout
    result = _RUNNERS[strategy](store, q, counters)
    return result.project(q.projection), counters


# -- oracle --------------------------------------------------------------------

def oracle_execute(kg: KnowledgeGraph, q: Query) -> ResultSet:
    """Nested-loop evaluation straight over the triple list, with no indexes.

    Each pattern's candidates come from a full pass over the triples; the
    nested loop then visits patterns fewest-candidates-first, preferring ones
    connected to what is already bound.
    """
    triples = kg.triples
    cands = []
    for tp in q.patterns:
        s, p, o = tp.constants()
        cands.append([t for t in triples
                      if (s is None or t[0] == s) and (p is None or t[1] == p)
                      and (o is None or t[2] == o)])
    remaining = list(range(len(q.patterns)))
    remaining.sort(key=lambda i: len(cands[i]))
    bound_vars = set()
    bindings = [{}]
    while remaining:
        pick = next((i for i in remaining if bound_vars & set(q.patterns[i].variables())),
                    remaining[0])
        remaining.remove(pick)
        tp = q.patterns[pick]
        nxt = []
        for b in bindings:
            for t in cands[pick]:
                nb = dict(b)
                for x, term in zip(tp, t):
                    if isinstance(x, Var) and nb.setdefault(x.name, term) != term:
                        break
                else:
                    nxt.append(nb)
        bindings = nxt
        bound_vars |= set(tp.variables())
        if not bindings:
            break
    return ResultSet(q.projection, {tuple(b[v] for v in q.projection) for b in bindings})
