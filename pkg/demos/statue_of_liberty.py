"""
Three JSON layouts of one small graph
=====================================

An eight-triple graph about the Statue of Liberty, stored three ways and
queried with every strategy each layout supports.
"""

from kgjson import (Representation, build, compatible_strategies, execute, load,
                    serialize_ndjson)
from kgjson.samples import statue_of_liberty, statue_queries

kg = statue_of_liberty()
print(f"{len(kg)} triples, {len(kg.subjects)} subjects\n")

# One document per subject, one per triple, and one per subject with the
# object->subject links expanded in place.
collections = {r: build(kg, r) for r in Representation}
for r, coll in collections.items():
    print(f"--- {r}: {len(coll)} documents")
    print(serialize_ndjson(coll))

# The nested layout repeats UnitedStates inside the other two documents.  The
# expansion stops at NewYork because NewYork is already on the path.
stores = {r: load(c) for r, c in collections.items()}
print(stores[Representation.CNV].index_stats(), "\n")

for name, q in statue_queries().items():
    print(f"--- {name} query")
    print(q.to_text())
    for r, store in stores.items():
        for s in compatible_strategies(r):
            result, counters = execute(store, q, s)
            rows = [" ".join(t.n3() for t in row) for row in sorted(result.rows)]
            print(f"  {str(r):3} {s.value:18} {rows}  {counters.as_dict()}")
    print()
