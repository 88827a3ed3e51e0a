"""
Where each layout pays off
==========================

Generate an e-commerce graph, build all three stores, and time the typed
workload.  Star queries (SS) favour one-document-per-subject lookups; chain
queries (SO) favour the precomputed paths of the nested layout.

Pass a product count to change the scale: ``python demos/join_strategies.py 1900``
gives roughly 100K triples.
"""

import sys
import time

from kgjson import Representation, build, load
from kgjson.bench import emit_report, run_benchmark
from kgjson.generator import GeneratorConfig, generate_kg, generate_workload

products = int(sys.argv[1]) if len(sys.argv) > 1 else 400
cfg = GeneratorConfig(product_count=products, seed=7)

started = time.perf_counter()
kg = generate_kg(cfg)
workload = generate_workload(cfg, kg)
print(f"{len(kg)} triples, {len(kg.subjects)} subjects, {len(kg.predicates)} predicates "
      f"({time.perf_counter() - started:.1f}s)")

stores = []
for r in Representation:
    started = time.perf_counter()
    stores.append(load(build(kg, r)))
    print(f"  {r} store ready in {time.perf_counter() - started:.1f}s")

for qid, q, kind in workload[:3]:
    print(f"\n{qid} ({kind})\n{q.to_text()}", end="")

report = run_benchmark(stores, workload, runs=5)
print()
print(emit_report(report, "text"))


def total(kind, rep, strategy):
    return sum(r.mean_ms for r in report.rows
               if r.kind == kind and r.representation == rep and r.strategy == strategy)


ss = total("SS", "DT", "hash-join") / total("SS", "SNV", "snv-lookup")
so = total("SO", "DT", "index-nested-loop") / total("SO", "CNV", "cnv-path")
print(f"SS workload: snv-lookup is {ss:.1f}x faster than hash-join over DT")
print(f"SO workload: cnv-path is {so:.1f}x faster than index-nested-loop over DT")
