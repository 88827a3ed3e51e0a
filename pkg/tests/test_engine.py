import pytest
from hypothesis import HealthCheck, given, settings, strategies as st

from kgjson import (LITERAL, KnowledgeGraph, OpCounters, Query, Representation, ResultSet,
                    Strategy, Term, Var, build, compatible_strategies, execute, join_bindings,
                    load, match_bgp, oracle_execute, parse_query)
from kgjson.errors import ChainTooLong, NoSharedVariable, QueryTimeout, StrategyMismatch
from kgjson.engine import choose_strategy
from kgjson.generator import random_kg, random_query
from kgjson.store import lookup_predicate_object

from conftest import graphs

EXPECTED = {"type": ("Ins", "Statue", LITERAL), "ss": ("x", "StatueOfLiberty", "iri"),
            "so": ("y", "StatueOfLiberty", "iri")}


def stores(kg, max_depth=5):
    return [load(build(kg, r, max_depth), max_depth) for r in Representation]


def pairs(kg):
    for store in stores(kg):
        for s in compatible_strategies(store.representation) + [Strategy.AUTO]:
            yield store, s


@pytest.mark.parametrize("name", ["type", "ss", "so"])
def test_statue_every_pair(statue, statue_q, name):
    var, value, kind = EXPECTED[name]
    want = ResultSet((var,), [(Term(value, kind),)])
    assert oracle_execute(statue, statue_q[name]) == want
    for store, s in pairs(statue):
        got, _ = execute(store, statue_q[name], s)
        assert got == want, (store.representation, s)


def test_statue_counters(statue, statue_q):
    snv, _, cnv = stores(statue)
    _, c = execute(snv, statue_q["ss"], "snv-lookup")
    assert c.docs_fetched == 1
    _, c = execute(cnv, statue_q["so"], "cnv-path")
    assert c.index_probes == 1


def test_match_bgp(statue):
    store = stores(statue)[0]
    rs = match_bgp(store, (Term("StatueOfLiberty"), Term("instance_of"), Var("Ins")))
    assert rs == ResultSet(("Ins",), [(Term("Statue", LITERAL),)])
    rs = match_bgp(store, (Var("x"), Term("located_in"), Term("The US", LITERAL)))
    assert rs.bindings() == [{"x": Term("StatueOfLiberty")}]
    assert len(match_bgp(store, (Var("a"), Var("b"), Var("c")))) == 8


def test_repeated_variable_pattern():
    kg = KnowledgeGraph([(Term("a"), Term("p"), Term("a")), (Term("a"), Term("p"), Term("b"))])
    q = parse_query("SELECT ?x WHERE { ?x <p> ?x }")
    for store, s in pairs(kg):
        assert execute(store, q, s)[0] == ResultSet(("x",), [(Term("a"),)])


def test_ground_patterns(statue):
    yes = parse_query('SELECT ?y WHERE { <StatueOfLiberty> <instance_of> "Statue" . '
                      '?y <located_in> <UnitedStates> }')
    no = parse_query('SELECT ?y WHERE { <StatueOfLiberty> <instance_of> "Dog" . '
                     '?y <located_in> <UnitedStates> }')
    for store, s in pairs(statue):
        assert execute(store, yes, s)[0] == ResultSet(("y",), [(Term("NewYork"),)])
        assert len(execute(store, no, s)[0]) == 0


def test_disconnected_patterns_cross(statue):
    q = parse_query('SELECT ?a ?b WHERE { ?a <known_as> ?x . ?b <instance_of> "city" }')
    want = oracle_execute(statue, q)
    assert len(want) == 1
    for store, s in pairs(statue):
        assert execute(store, q, s)[0] == want


# -- joins ---------------------------------------------------------------------

def _rs(var, *names):
    return ResultSet((var,), [(Term(n),) for n in names])


def test_join_examples():
    sol = _rs("x", "StatueOfLiberty")
    assert join_bindings(sol, sol, "SS") == sol
    assert len(join_bindings(_rs("x", "NewYork"), _rs("x", "Boston"))) == 0
    assert len(join_bindings(_rs("x", "a", "b", "c"), _rs("x"))) == 0
    with pytest.raises(NoSharedVariable):
        join_bindings(_rs("x", "a"), _rs("y", "a"))
    with pytest.raises(ValueError):
        join_bindings(sol, sol, "XY")


rows = st.lists(st.tuples(st.integers(0, 4), st.integers(0, 4)), max_size=12)


@given(rows, rows)
def test_join_commutes(a, b):
    left = ResultSet(("x", "y"), [(Term(f"n{i}"), Term(f"m{j}")) for i, j in a])
    right = ResultSet(("y", "z"), [(Term(f"m{i}"), Term(f"k{j}")) for i, j in b])
    lr = join_bindings(left, right)
    assert lr == join_bindings(right, left)
    want = {(x, y, z) for x, y in left.rows for y2, z in right.rows if y == y2}
    assert lr.project(("x", "y", "z")).rows == want


# -- strategy rules --------------------------------------------------------------

def test_strategy_mismatch(statue, statue_q):
    snv, dt, cnv = stores(statue)
    with pytest.raises(StrategyMismatch):
        execute(snv, statue_q["so"], "cnv-path")
    with pytest.raises(StrategyMismatch):
        execute(dt, statue_q["ss"], "snv-lookup")
    with pytest.raises(StrategyMismatch):
        execute(cnv, statue_q["ss"], Strategy.SNV_SUBJECT_LOOKUP)


def test_chain_too_long(statue):
    q = parse_query("SELECT ?a WHERE { ?a <located_in> ?b . ?b <located_in> ?c . "
                    "?c <located_in> ?d }")
    cnv = load(build(statue, "cnv", 2), 2)
    with pytest.raises(ChainTooLong):
        execute(cnv, q, "cnv-path")
    assert execute(cnv, q, "hash-join")[0] == oracle_execute(statue, q)


def test_auto_choices(statue, statue_q):
    snv, dt, cnv = stores(statue)
    assert choose_strategy(snv, statue_q["ss"]) is Strategy.SNV_SUBJECT_LOOKUP
    assert choose_strategy(cnv, statue_q["so"]) is Strategy.CNV_PATH_LOOKUP
    assert choose_strategy(dt, statue_q["ss"]) is Strategy.HASH_JOIN
    assert choose_strategy(snv, statue_q["so"]) is Strategy.HASH_JOIN


def test_timeout():
    kg = random_kg(11, 1000)
    q = parse_query("SELECT * WHERE { ?a ?p ?b . ?c ?q ?d }")
    store = stores(kg)[1]
    with pytest.raises(QueryTimeout):
        execute(store, q, "hash-join", timeout=0.0)


def test_unsatisfiable(statue):
    q = parse_query('SELECT ?x WHERE { ?x <instance_of> "Dog" }')
    assert len(oracle_execute(statue, q)) == 0
    for store, s in pairs(statue):
        assert len(execute(store, q, s)[0]) == 0


# -- counter bounds ------------------------------------------------------------------

@pytest.mark.parametrize("seed", range(20))
def test_ss_counter_bounds(seed):
    kg = random_kg(seed, 400)
    snv = load(build(kg, "snv"))
    dt = load(build(kg, "dt"))
    t1, t2 = kg.triples[0], kg.triples[-1]
    q = Query(("s",), [(Var("s"), t1.predicate, t1.object), (Var("s"), t2.predicate, Var("o"))])
    res, c = execute(snv, q, "snv-lookup")
    candidates = lookup_predicate_object(snv, t1.predicate, t1.object)
    assert c.docs_fetched <= len(candidates)
    assert c.index_probes <= len(candidates) + 1
    _, h = execute(dt, q, "hash-join")
    m1 = match_bgp(dt, q.patterns[0])
    m2 = match_bgp(dt, q.patterns[1])
    assert h.entries_scanned >= len(m1) + len(m2)
    assert res == oracle_execute(kg, q)


@pytest.mark.parametrize("seed", range(20))
def test_so_counter_bounds(seed):
    kg = random_kg(seed, 400)
    cnv = load(build(kg, "cnv"))
    dt = load(build(kg, "dt"))
    links = [t for t in kg if t.object in kg.subjects]
    if not links:
        pytest.skip("graph has no subject-object link")
    t = links[0]
    nxt = next(u for u in kg if u.subject == t.object)
    q = Query(("a",), [(Var("a"), t.predicate, Var("b")), (Var("b"), nxt.predicate, Var("c"))])
    res, c = execute(cnv, q, "cnv-path")
    assert c.index_probes == 1
    _, n = execute(dt, q, "index-nested-loop")
    plan_first = min(q.patterns, key=lambda tp: dt.estimate(*tp.constants()))
    assert n.index_probes >= len(match_bgp(dt, plan_first))
    assert res == oracle_execute(kg, q)


# -- soundness against the oracle -------------------------------------------------------

@pytest.mark.parametrize("seed", range(40))
def test_random_queries_match_oracle(seed):
    kg = random_kg(seed, 300)
    for k in range(5):
        q = random_query(kg, seed * 31 + k)
        want = oracle_execute(kg, q)
        for store, s in pairs(kg):
            assert execute(store, q, s)[0] == want, (store.representation, s, q.to_text())


@settings(max_examples=40, suppress_health_check=[HealthCheck.too_slow])
@given(graphs(max_triples=25), st.integers(0, 10_000))
def test_hypothesis_queries_match_oracle(kg, seed):
    if not kg.triples:
        return
    q = random_query(kg, seed)
    want = oracle_execute(kg, q)
    for store, s in pairs(kg):
        assert execute(store, q, s)[0] == want


def test_oracle_strategy_value(statue, statue_q):
    store = stores(statue)[0]
    assert execute(store, statue_q["ss"], Strategy.ORACLE)[0] == oracle_execute(
        statue, statue_q["ss"])


def test_private_counters(statue, statue_q):
    store = stores(statue)[0]
    mine = OpCounters()
    _, got = execute(store, statue_q["ss"], "hash-join", counters=mine)
    assert got is mine and mine.index_probes > 0
