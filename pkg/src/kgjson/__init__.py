"""Knowledge graphs stored as SNV, DT and CNV JSON documents, queried and benchmarked."""

from .engine import (Strategy, compatible_strategies, execute, join_bindings, match_bgp,
                     oracle_execute)
from .errors import *  # noqa: F401,F403
from .jsondoc import (DEFAULT_MAX_DOC_BYTES, DocCollection, JsonDocument, Representation,
                      parse_ndjson, serialize_ndjson)
from .ntriples import (IRI, LITERAL, KnowledgeGraph, PrefixMap, Term, Triple, apply_prefix_map,
                       expand_prefix_map, iri, literal, parse_ntriples, read_prefix_map,
                       write_ntriples)
from .query import Query, QueryClass, ResultSet, TriplePattern, Var, classify_query, parse_query
from .representations import (DEFAULT_MAX_DEPTH, EquivalenceReport, build, build_cnv, build_dt,
                              build_snv, check_equivalence, extract_triples)
from .store import (OpCounters, PathHit, Store, load, lookup_path, lookup_predicate_object,
                    lookup_subject)

__version__ = "0.1.0"
