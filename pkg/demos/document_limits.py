"""
Nesting depth and the document size limit
==========================================

The nested layout copies reachable subjects into every document that links
to them.  A hub with many linked subjects can outgrow a store's document
limit even though each flat document is tiny.
"""

from kgjson import KnowledgeGraph, Term, build_cnv, build_snv
from kgjson.errors import DocumentTooLarge
from kgjson.jsondoc import document_size
from kgjson.samples import statue_of_liberty

kg = statue_of_liberty()
for depth in (1, 2, 3, 5):
    docs = build_cnv(kg, max_depth=depth)
    sizes = {d.id: document_size(d) for d in docs}
    print(f"max_depth={depth}: {sizes}")

hub = [(Term("hub"), Term("link"), Term(f"n{k}")) for k in range(200)]
leaves = [(Term(f"n{k}"), Term("val"), Term("v" * 60, "literal")) for k in range(200)]
big = KnowledgeGraph(hub + leaves)

limit = 8_000
flat = build_snv(big, max_doc_bytes=limit)
print(f"\nflat layout: largest document {max(document_size(d) for d in flat)} bytes")
try:
    build_cnv(big, max_doc_bytes=limit)
except DocumentTooLarge as exc:
    print(f"nested layout refused: {exc}")
