"""Seeded synthetic data: a BSBM-shaped e-commerce graph, its typed workload,
and small random graphs/queries for property tests.

The e-commerce graph scales with the number of products.  Every output uses
all 40 predicates of :data:`VOCABULARY`, at any scale.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .engine import oracle_execute
from .ntriples import IRI, LITERAL, KnowledgeGraph, PrefixMap, Term, Triple
from .query import CO, SINGLE, SO, SS, Query, TriplePattern, Var

BSBM = "http://www4.wiwiss.fu-berlin.de/bizer/bsbm/v01/vocabulary/"
INST = "http://www4.wiwiss.fu-berlin.de/bizer/bsbm/v01/instances/"
RDF = "http://www.w3.org/1999/02/22-rdf-syntax-ns#"
RDFS = "http://www.w3.org/2000/01/rdf-schema#"
DC = "http://purl.org/dc/elements/1.1/"
FOAF = "http://xmlns.com/foaf/0.1/"
REV = "http://purl.org/stuff/rev#"
XSD = "http://www.w3.org/2001/XMLSchema#"
COUNTRIES = "http://downlode.org/rdf/iso-3166/countries#"

BSBM_PREFIXES = PrefixMap((
    (BSBM, "bsbm"), (INST, "inst"), (RDF, "rdf"), (RDFS, "rdfs"), (DC, "dc"),
    (FOAF, "foaf"), (REV, "rev"), (XSD, "xsd"), (COUNTRIES, "country"),
))

VOCABULARY = (
    RDF + "type", RDFS + "label", RDFS + "comment", RDFS + "subClassOf",
    BSBM + "producer", BSBM + "productFeature",
    *(f"{BSBM}productPropertyTextual{i}" for i in range(1, 7)),
    *(f"{BSBM}productPropertyNumeric{i}" for i in range(1, 7)),
    BSBM + "country", FOAF + "homepage",
    BSBM + "vendor", BSBM + "product", BSBM + "price", BSBM + "validFrom", BSBM + "validTo",
    BSBM + "deliveryDays", BSBM + "offerWebpage",
    BSBM + "reviewFor", REV + "reviewer", BSBM + "reviewDate", DC + "title", REV + "text",
    *(f"{BSBM}rating{i}" for i in range(1, 5)),
    FOAF + "name", FOAF + "mbox_sha1sum",
    DC + "publisher", DC + "date",
)
assert len(VOCABULARY) == 40

_P = {v.rsplit("/", 1)[-1].rsplit("#", 1)[-1]: Term(v, IRI) for v in VOCABULARY}

# predicates a heterogeneous subject may lack
OPTIONAL = frozenset(_P[n] for n in (
    "comment", "productPropertyTextual4", "productPropertyTextual5", "productPropertyTextual6",
    "productPropertyNumeric4", "productPropertyNumeric5", "productPropertyNumeric6",
    "validTo", "deliveryDays", "rating2", "rating3", "rating4", "mbox_sha1sum", "homepage",
))

_WORDS = ("alpha", "bravo", "charlie", "delta", "echo", "foxtrot", "golf", "hotel", "india",
          "juliet", "kilo", "lima", "mike", "november", "oscar", "papa", "quebec", "romeo",
          "sierra", "tango", "uniform", "victor", "whiskey", "xray", "yankee", "zulu")
_COUNTRY_CODES = ("US", "GB", "DE", "FR", "JP", "CN", "RU", "ES", "AT", "KR")


@dataclass(frozen=True)
class GeneratorConfig:
    product_count: int = 100
    seed: int = 0
    heterogeneity: float = 0.0  # chance of dropping each optional predicate, 0..0.5
    vocabulary: tuple = VOCABULARY

    def __post_init__(self):
        if self.product_count < 1:
            raise ValueError("product_count must be >= 1")
        if not 0.0 <= self.heterogeneity <= 0.5:
            raise ValueError("heterogeneity must lie in [0, 0.5]")


def _inst(kind, k):
    return Term(f"{INST}{kind}{k}", IRI)


def _int(n):
    return Term(str(n), LITERAL, f"^^<{XSD}integer>")


def _date(rng):
    return Term(f"2008-{rng.randint(1, 12):02d}-{rng.randint(1, 28):02d}", LITERAL,
                f"^^<{XSD}date>")


def _text(rng, n):
    return Term(" ".join(rng.choice(_WORDS) for _ in range(n)), LITERAL)


def generate_kg(cfg: GeneratorConfig) -> KnowledgeGraph:
    rng = random.Random(cfg.seed)
    n = cfg.product_count
    n_types = max(3, n // 40 + 2)
    n_features = max(3, n // 5)
    n_producers = max(1, n // 25)
    n_vendors = max(1, n // 50)
    n_persons = max(1, n // 8)
    triples = []
    first_of_kind = set()
    P = _P

    def emit(kind, subject, edges):
        # the first entity of each kind keeps every predicate so all 40 occur
        keep_all = kind not in first_of_kind
        first_of_kind.add(kind)
        for p, o in edges:
            if (not keep_all and cfg.heterogeneity and p in OPTIONAL
                    and rng.random() < cfg.heterogeneity):
                continue
            triples.append(Triple(subject, p, o))

    def std():
        return [(P["publisher"], Term(f"{INST}StandardizationInstitution1", IRI)),
                (P["date"], _date(rng))]

    for k in range(n_types):
        s = _inst("ProductType", k)
        edges = [(P["type"], Term(BSBM + "ProductType", IRI)), (P["label"], _text(rng, 2)),
                 (P["comment"], _text(rng, 6))]
        if k > 0:
            edges.append((P["subClassOf"], _inst("ProductType", (k - 1) // 2)))
        emit("type", s, edges + std())
    leaf_types = list(range(n_types // 2, n_types))

    for k in range(n_features):
        emit("feature", _inst("ProductFeature", k),
             [(P["type"], Term(BSBM + "ProductFeature", IRI)), (P["label"], _text(rng, 2)),
              (P["comment"], _text(rng, 5))] + std())

    for kind, count in (("Producer", n_producers), ("Vendor", n_vendors)):
        for k in range(count):
            s = _inst(kind, k)
            emit(kind, s, [
                (P["type"], Term(BSBM + kind, IRI)), (P["label"], _text(rng, 2)),
                (P["comment"], _text(rng, 5)),
                (P["homepage"], Term(f"http://www.{kind.lower()}{k}.com/", IRI)),
                (P["country"], Term(COUNTRIES + rng.choice(_COUNTRY_CODES), IRI)),
            ] + std())

    for k in range(n_persons):
        emit("person", _inst("Reviewer", k), [
            (P["type"], Term(FOAF + "Person", IRI)), (P["name"], _text(rng, 2)),
            (P["mbox_sha1sum"], Term(f"{rng.getrandbits(64):016x}", LITERAL)),
            (P["country"], Term(COUNTRIES + rng.choice(_COUNTRY_CODES), IRI)),
            (P["publisher"], _inst("RatingSite", k % 3)), (P["date"], _date(rng)),
        ])

    offer_id = 0
    for k in range(n):
        s = _inst("Product", k)
        # the first few products cover every producer/feature so the graph stays connected
        producer = _inst("Producer", k if k < n_producers else rng.randrange(n_producers))
        edges = [(P["type"], _inst("ProductType", rng.choice(leaf_types))),
                 (P["label"], Term(f"product {k} {rng.choice(_WORDS)}", LITERAL)),
                 (P["comment"], _text(rng, 8)), (P["producer"], producer)]
        first = k % n_features
        others = rng.sample([f for f in range(n_features) if f != first], 2)
        for f in [first, *others]:
            edges.append((P["productFeature"], _inst("ProductFeature", f)))
        for i in range(1, 7):
            edges.append((P[f"productPropertyTextual{i}"], _text(rng, 3)))
            edges.append((P[f"productPropertyNumeric{i}"], _int(rng.randint(1, 2000))))
        edges += [(P["publisher"], producer), (P["date"], _date(rng))]
        emit("product", s, edges)

        for _ in range(2):
            o = _inst("Offer", offer_id)
            v = offer_id if offer_id < n_vendors else rng.randrange(n_vendors)
            vendor = _inst("Vendor", v)
            emit("offer", o, [
                (P["type"], Term(BSBM + "Offer", IRI)), (P["product"], s), (P["vendor"], vendor),
                (P["price"], Term(f"{rng.randint(5, 10000)}.{rng.randint(0, 99):02d}", LITERAL,
                                  f"^^<{XSD}decimal>")),
                (P["validFrom"], _date(rng)), (P["validTo"], _date(rng)),
                (P["deliveryDays"], _int(rng.randint(1, 21))),
                (P["offerWebpage"], Term(f"http://www.vendor.com/offers/{offer_id}", IRI)),
                (P["publisher"], vendor), (P["date"], _date(rng)),
            ])
            offer_id += 1

        r = _inst("Review", k)
        emit("review", r, [
            (P["type"], Term(REV + "Review", IRI)), (P["reviewFor"], s),
            (P["reviewer"], _inst("Reviewer", k if k < n_persons else rng.randrange(n_persons))),
            (P["reviewDate"], _date(rng)), (P["title"], _text(rng, 4)), (P["text"], _text(rng, 12)),
            *((P[f"rating{i}"], _int(rng.randint(1, 10))) for i in range(1, 5)),
            (P["publisher"], _inst("RatingSite", k % 3)), (P["date"], _date(rng)),
        ])
    return KnowledgeGraph(triples)


# -- workload ------------------------------------------------------------------

def _q(projection, *patterns):
    return Query(tuple(projection), tuple(TriplePattern(*p) for p in patterns))


def _objects(kg_index, s, p):
    return kg_index.get((s, p), [])


def generate_workload(cfg: GeneratorConfig, kg: KnowledgeGraph | None = None,
                      attempts: int = 50) -> list[tuple[str, Query, str]]:
    """Typed queries with constants drawn from the generated graph.

    Returns ``(query id, query, expected kind)``; every query has a non-empty
    answer, checked with the oracle.
    """
    kg = kg if kg is not None else generate_kg(cfg)
    rng = random.Random(cfg.seed ^ 0x5EED)
    P = _P
    by_sp = {}
    for s, p, o in kg.triples:
        by_sp.setdefault((s, p), []).append(o)
    subjects_of = {}
    for s in kg.subjects:
        kind = s.lexical[len(INST):].rstrip("0123456789") if s.lexical.startswith(INST) else ""
        subjects_of.setdefault(kind, []).append(s)
    for v in subjects_of.values():
        v.sort()

    def one(s, p):
        vals = _objects(by_sp, s, p)
        return vals[0] if vals else None

    x, y, z = Var("x"), Var("y"), Var("z")
    product, offer, review = Var("product"), Var("offer"), Var("review")
    label, producer, person = Var("label"), Var("producer"), Var("person")

    def templates():
        p = rng.choice(subjects_of["Product"])
        feats = _objects(by_sp, p, P["productFeature"])
        ptype = one(p, P["type"])
        prod = one(p, P["producer"])
        country = one(prod, P["country"])
        o = rng.choice(subjects_of["Offer"])
        op = one(o, P["product"])
        ov = one(o, P["vendor"])
        of = _objects(by_sp, op, P["productFeature"])[0]
        r = rng.choice(subjects_of["Review"])
        rp = one(r, P["reviewer"])
        rcountry = one(rp, P["country"])
        web = one(o, P["offerWebpage"])
        return [
            ("SS1", SS, _q(["product", "label"],
                           (product, P["type"], ptype), (product, P["productFeature"], feats[0]),
                           (product, P["productFeature"], feats[1]), (product, P["label"], label))),
            ("SS2", SS, _q(["product", "x", "y"],
                           (product, P["type"], ptype), (product, P["productFeature"], feats[2]),
                           (product, P["productPropertyNumeric1"], x),
                           (product, P["productPropertyTextual1"], y))),
            ("SS3", SS, _q(["label", "producer", "x"],
                           (p, P["label"], label), (p, P["producer"], producer),
                           (p, P["productPropertyTextual1"], x))),
            ("SS4", SS, _q(["review", "person", "x"],
                           (review, P["reviewFor"], op), (review, P["reviewer"], person),
                           (review, P["rating1"], x))),
            ("SO1", SO, _q(["offer", "product"],
                           (offer, P["product"], product), (product, P["producer"], prod))),
            ("SO2", SO, _q(["review", "product"],
                           (review, P["reviewFor"], product), (product, P["type"], ptype))),
            ("SO3", SO, _q(["offer", "product", "producer"],
                           (offer, P["product"], product), (product, P["producer"], producer),
                           (producer, P["country"], country))),
            ("SO4", SO, _q(["review", "person"],
                           (review, P["reviewer"], person), (person, P["country"], rcountry))),
            ("Co1", CO, _q(["product", "producer"],
                           (product, P["type"], ptype), (product, P["producer"], producer),
                           (producer, P["country"], country))),
            ("Co2", CO, _q(["offer", "product"],
                           (offer, P["product"], product), (offer, P["vendor"], ov),
                           (product, P["productFeature"], of))),
            ("Co3", CO, _q(["review", "product", "producer"],
                           (review, P["reviewFor"], product), (review, P["reviewer"], rp),
                           (product, P["producer"], producer))),
            ("SP1", SINGLE, _q(["product"], (product, P["label"], one(p, P["label"])))),
            ("SP2", SINGLE, _q(["offer"], (offer, P["offerWebpage"], web))),
            ("SP3", SINGLE, _q(["review"], (review, P["reviewFor"], p))),
        ]

    for _ in range(attempts):
        try:
            workload = templates()
        except (IndexError, KeyError, TypeError):
            continue
        if all(len(oracle_execute(kg, q)) > 0 for _, _, q in workload):
            return [(qid, q, kind) for qid, kind, q in workload]
    raise RuntimeError("could not draw a non-empty workload from this graph")


# -- random graphs and queries for tests ----------------------------------------

_ODD_LITERALS = ("", "The US", "<not an iri>", '"quoted"', "back\\slash", "tab\there",
                 "new\nline", "naïve ☃", "NewYork")


def random_kg(seed: int, max_triples: int = 1000) -> KnowledgeGraph:
    """A random graph with cycles, shared literals and awkward strings.

    Links between subjects are kept sparse (about 1.5 per subject) so nested
    CNV expansion stays small.
    """
    rng = random.Random(seed)
    n_triples = rng.randint(0, max_triples)
    n_subjects = max(1, rng.randint(max(1, n_triples // 8), max(1, n_triples // 3)))
    n_preds = rng.randint(1, 8)
    subjects = [Term(f"http://ex.org/s{k}", IRI) for k in range(n_subjects)]
    preds = [Term(f"http://ex.org/p{k}", IRI) for k in range(n_preds)]
    p_link = min(0.35, 1.5 * n_subjects / max(1, n_triples))
    triples = []
    for _ in range(n_triples):
        s = rng.choice(subjects)
        p = rng.choice(preds)
        r = rng.random()
        if r < p_link:
            o = rng.choice(subjects)
        elif r < p_link + 0.2:
            o = Term(f"http://ex.org/o{rng.randrange(20)}", IRI)
        elif r < p_link + 0.25:
            o = Term(rng.choice(_ODD_LITERALS), LITERAL)
        elif r < p_link + 0.3:
            o = Term(str(rng.randrange(100)), LITERAL, f"^^<{XSD}integer>")
        elif r < p_link + 0.33:
            o = Term(rng.choice(_WORDS), LITERAL, rng.choice(("@en", "@de-AT")))
        else:
            o = Term(rng.choice(_WORDS), LITERAL)
        triples.append(Triple(s, p, o))
    return KnowledgeGraph(triples)


def random_query(kg: KnowledgeGraph, seed: int, max_patterns: int = 4) -> Query:
    """A connected 1..max_patterns pattern query grown from edges of ``kg``.

    Most queries have answers; a few constants are perturbed so some do not.
    """
    rng = random.Random(seed)
    triples = kg.triples
    if not triples:
        return _q(["x"], (Var("x"), Var("p"), Var("o")))
    by_subject = {}
    by_object = {}
    for t in triples:
        by_subject.setdefault(t.subject, []).append(t)
        by_object.setdefault(t.object, []).append(t)
    chosen = [rng.choice(triples)]
    want = rng.randint(1, max_patterns)
    for _ in range(want * 4):
        if len(chosen) >= want:
            break
        anchor = rng.choice(chosen)
        move = rng.random()
        if move < 0.4:
            pool = by_subject.get(anchor.subject, [])        # star
        elif move < 0.8:
            pool = by_subject.get(anchor.object, [])         # chain forward
        else:
            pool = by_object.get(anchor.subject, [])         # chain backward
        pool = [t for t in pool if t not in chosen]
        if pool:
            chosen.append(rng.choice(pool))
    nodes = []
    for t in chosen:
        for x in (t.subject, t.object):
            if x not in nodes:
                nodes.append(x)
    var_of = {}
    for k, node in enumerate(nodes):
        if rng.random() < 0.7:
            var_of[node] = Var(f"v{k}")
    pred_vars = {}
    patterns = []
    for t in chosen:
        s = var_of.get(t.subject, t.subject)
        o = var_of.get(t.object, t.object)
        p = t.predicate
        if rng.random() < 0.1:
            p = pred_vars.setdefault(t.predicate, Var(f"p{len(pred_vars)}"))
        patterns.append(TriplePattern(s, p, o))
    if rng.random() < 0.08:
        i = rng.randrange(len(patterns))
        patterns[i] = patterns[i]._replace(object=Term("no such value", LITERAL))
    rng.shuffle(patterns)
    variables = []
    for tp in patterns:
        variables += [v for v in tp.variables() if v not in variables]
    if not variables:
        patterns[0] = patterns[0]._replace(subject=Var("s"))
        variables = ["s"]
    k = rng.randint(1, len(variables))
    projection = rng.sample(variables, k)
    return Query(tuple(projection), tuple(patterns))
