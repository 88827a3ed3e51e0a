"""Acceptance criteria, one test each; every test prints a single PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v``; the lines appear even when
output capture is on.
"""

import time

import pytest

from kgjson import (KnowledgeGraph, Representation, ResultSet, Term, build, build_cnv,
                    build_snv, check_equivalence, compatible_strategies, execute, extract_triples,
                    load, match_bgp, oracle_execute)
from kgjson.bench import run_benchmark
from kgjson.errors import DocumentTooLarge
from kgjson.generator import GeneratorConfig, generate_kg, generate_workload, random_kg, \
    random_query
from kgjson.query import SO, SS
from kgjson.samples import statue_of_liberty, statue_queries
from kgjson.store import lookup_predicate_object

# about 100K triples
SCALE = GeneratorConfig(product_count=1900, seed=7)
SPEEDUP = 3.0
RUNS = 5


@pytest.fixture
def verdict(capsys):
    def emit(number, title, ok, detail):
        with capsys.disabled():
            print(f"\n[acceptance {number}] {'PASS' if ok else 'FAIL'}  {title}: {detail}")
        assert ok, detail
    return emit


def stores_for(kg):
    return {r: load(build(kg, r)) for r in Representation}


@pytest.fixture(scope="module")
def scaled():
    kg = generate_kg(SCALE)
    workload = generate_workload(SCALE, kg)
    return kg, stores_for(kg), workload


def timed_mean(store, q, strategy, runs=RUNS):
    times = []
    for _ in range(runs):
        started = time.perf_counter()
        execute(store, q, strategy)
        times.append(time.perf_counter() - started)
    return sum(times) / len(times)


def test_1_statue_micro_suite(verdict):
    started = time.perf_counter()
    kg = statue_of_liberty()
    queries = statue_queries()
    want = {"type": ResultSet(("Ins",), [(Term("Statue", "literal"),)]),
            "ss": ResultSet(("x",), [(Term("StatueOfLiberty"),)]),
            "so": ResultSet(("y",), [(Term("StatueOfLiberty"),)])}
    bad = []
    checked = 0
    for r, store in stores_for(kg).items():
        for s in compatible_strategies(r):
            for name, q in queries.items():
                checked += 1
                if execute(store, q, s)[0] != want[name]:
                    bad.append(f"{r}/{s}/{name}")
    cnv = build_cnv(kg)
    in_all = all("biggest_city_is" in str(d.body) for d in cnv)
    elapsed = time.perf_counter() - started
    ok = not bad and len(cnv) == 3 and in_all and elapsed < 1.0
    verdict(1, "Statue of Liberty micro-suite", ok,
            f"{checked} executions, wrong={bad}, CNV docs={len(cnv)}, "
            f"biggest_city_is in all={in_all}, {elapsed:.3f}s (limit 1s)")


def test_2_round_trip_property(verdict):
    started = time.perf_counter()
    failures = []
    for seed in range(200):
        kg = random_kg(seed, 1000)
        colls = [build(kg, r) for r in Representation]
        for coll in colls:
            if extract_triples(coll) != kg:
                failures.append((seed, str(coll.representation), "round trip"))
        for i in range(3):
            for j in range(i + 1, 3):
                if not check_equivalence(colls[i], colls[j], trace=False).equivalent:
                    failures.append((seed, "pair", i, j))
    elapsed = time.perf_counter() - started
    verdict(2, "round trip on 200 random graphs", not failures and elapsed < 120,
            f"failures={failures[:5]}, {elapsed:.1f}s (limit 120s)")


def test_3_oracle_equivalence(verdict):
    started = time.perf_counter()
    mismatches = []
    executions = 0
    for case in range(100):
        kg = random_kg(10_000 + case, 500)
        q = random_query(kg, case)
        want = oracle_execute(kg, q)
        for r, store in stores_for(kg).items():
            for s in compatible_strategies(r):
                executions += 1
                if execute(store, q, s)[0] != want:
                    mismatches.append((case, str(r), s.value))
    elapsed = time.perf_counter() - started
    verdict(3, "strategies agree with the oracle", not mismatches and elapsed < 300,
            f"{executions} executions over 100 cases, mismatches={mismatches[:5]}, "
            f"{elapsed:.1f}s (limit 300s)")


def test_4_cardinality_identities(verdict, scaled):
    graphs = [random_kg(seed, 1000) for seed in range(50)]
    graphs += [generate_kg(GeneratorConfig(n, n, h)) for n, h in ((1, 0), (40, 0.3), (250, 0.5))]
    graphs.append(scaled[0])
    bad = []
    for k, kg in enumerate(graphs):
        sizes = {r: len(build(kg, r)) for r in Representation}
        if not (sizes[Representation.SNV] == len(kg.subjects) == sizes[Representation.CNV]
                and sizes[Representation.DT] == len(kg)):
            bad.append((k, sizes))
    verdict(4, "document counts", not bad, f"{len(graphs)} graphs, violations={bad}")


def test_5_ss_trend(verdict, scaled):
    kg, stores, workload = scaled
    snv, dt = stores[Representation.SNV], stores[Representation.DT]
    ss = [(qid, q) for qid, q, kind in workload if kind == SS]
    fast = slow = 0.0
    counter_problems = []
    ratios = []
    for qid, q in ss:
        a = timed_mean(snv, q, "snv-lookup")
        b = timed_mean(dt, q, "hash-join")
        fast += a
        slow += b
        ratios.append(f"{qid}={b / a:.1f}x")
        _, c = execute(snv, q, "snv-lookup")
        seeds = [tp for tp in q.patterns if isinstance(tp.object, Term)]
        if isinstance(q.patterns[0].subject, Term):
            candidates = 1
        else:
            seed = min(seeds, key=lambda tp: snv.estimate(*tp.constants()))
            candidates = len(lookup_predicate_object(snv, seed.predicate, seed.object))
        if c.docs_fetched > candidates:
            counter_problems.append(f"{qid}: docs {c.docs_fetched} > candidates {candidates}")
        _, h = execute(dt, q, "hash-join")
        needed = len(match_bgp(dt, q.patterns[0])) + len(match_bgp(dt, q.patterns[1]))
        if h.entries_scanned < needed:
            counter_problems.append(f"{qid}: scanned {h.entries_scanned} < {needed}")
    speedup = slow / fast
    verdict(5, "SS: snv-lookup vs hash-join over DT",
            speedup >= SPEEDUP and not counter_problems,
            f"{len(kg)} triples, {len(ss)} SS queries, workload speedup {speedup:.1f}x "
            f"(bar {SPEEDUP}x; {', '.join(ratios)}), counter problems={counter_problems}")


def test_6_so_trend(verdict, scaled):
    kg, stores, workload = scaled
    cnv, dt = stores[Representation.CNV], stores[Representation.DT]
    so = [(qid, q) for qid, q, kind in workload if kind == SO]
    fast = slow = 0.0
    probe_problems = []
    ratios = []
    for qid, q in so:
        a = timed_mean(cnv, q, "cnv-path")
        b = timed_mean(dt, q, "index-nested-loop")
        fast += a
        slow += b
        ratios.append(f"{qid}={b / a:.1f}x")
        _, c = execute(cnv, q, "cnv-path")
        if c.index_probes != 1:
            probe_problems.append(f"{qid}: {c.index_probes} probes")
    speedup = slow / fast
    verdict(6, "SO: cnv-path vs index-nested-loop over DT",
            speedup >= SPEEDUP and not probe_problems,
            f"{len(so)} SO chain queries, workload speedup {speedup:.1f}x "
            f"(bar {SPEEDUP}x; {', '.join(ratios)}), probe problems={probe_problems}")


def test_7_benchmark_integrity(verdict, scaled):
    kg, stores, workload = scaled
    report = run_benchmark(list(stores.values()), workload, runs=RUNS)
    digests = {}
    for row in report.rows:
        digests.setdefault(row.query_id, set()).add(row.digest)
    split = [qid for qid, d in digests.items() if len(d) != 1]
    timings = {len(row.run_times_ms) for row in report.rows}
    oracle_ok = all(
        oracle_execute(kg, q).digest() in digests[qid] for qid, q, _ in workload)
    ok = not split and timings == {RUNS} and oracle_ok
    verdict(7, "benchmark digests and run counts", ok,
            f"{len(report.rows)} rows over {len(workload)} queries, split digests={split}, "
            f"timings per row={sorted(timings)}, oracle digests match={oracle_ok}")


def test_8_document_size_guard(verdict):
    hub = [(Term("hub"), Term("link"), Term(f"n{k}")) for k in range(200)]
    leaves = [(Term(f"n{k}"), Term("val"), Term("v" * 60, "literal")) for k in range(200)]
    kg = KnowledgeGraph(hub + leaves)
    limit = 8_000
    snv_ok = len(build_snv(kg, max_doc_bytes=limit)) == 201
    try:
        build_cnv(kg, max_doc_bytes=limit)
        raised = None
    except DocumentTooLarge as exc:
        raised = exc
    ok = snv_ok and raised is not None and raised.doc_id == "hub"
    verdict(8, "CNV hub expansion over the document limit", ok,
            f"SNV fits={snv_ok}, CNV raised={type(raised).__name__ if raised else None}"
            f"{f' for {raised.doc_id!r}' if raised else ''} (limit {limit} bytes)")
