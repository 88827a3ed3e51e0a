import pytest
from hypothesis import settings, strategies as st

from kgjson import IRI, LITERAL, KnowledgeGraph, Term, Triple
from kgjson.samples import statue_of_liberty, statue_queries

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")


@pytest.fixture
def statue():
    return statue_of_liberty()


@pytest.fixture
def statue_q():
    return statue_queries()


def T(s, p, o):
    return Triple(Term(s), Term(p), o if isinstance(o, Term) else Term(o))


# -- hypothesis strategies ------------------------------------------------------

iri_text = st.text(
    alphabet=st.characters(blacklist_categories=("Cs", "Zs", "Zl", "Zp", "Cc"),
                           blacklist_characters='<>"{}|^`\\ '),
    min_size=1, max_size=12).map(lambda s: "http://ex.org/" + s)

lang = st.from_regex(r"@[a-z]{2}(-[A-Z]{2})?", fullmatch=True)
datatype = st.sampled_from(["^^<http://www.w3.org/2001/XMLSchema#integer>",
                            "^^<http://ex.org/dt>"])

iris = iri_text.map(lambda v: Term(v, IRI))
literals = st.builds(lambda text, tag: Term(text, LITERAL, tag),
                     st.text(st.characters(blacklist_categories=("Cs",)), max_size=15),
                     st.one_of(st.just(""), st.just(""), lang, datatype))
objects = st.one_of(iris, literals)


@st.composite
def graphs(draw, max_triples=30):
    # a small pool of subjects so objects often point back at subjects
    subjects = draw(st.lists(iris, min_size=1, max_size=6, unique=True))
    preds = draw(st.lists(iris, min_size=1, max_size=4, unique=True))
    obj = st.one_of(st.sampled_from(subjects), objects)
    triples = draw(st.lists(st.builds(Triple, st.sampled_from(subjects),
                                      st.sampled_from(preds), obj), max_size=max_triples))
    return KnowledgeGraph(triples)
