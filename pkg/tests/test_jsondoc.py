import json
from decimal import Decimal

import pytest
from hypothesis import given, strategies as st

from kgjson import DocCollection, JsonDocument, Representation, build_dt, build_snv
from kgjson.errors import DocumentTooLarge, DuplicateId, MalformedDocument, MissingId
from kgjson.jsondoc import document_size, dumps, parse_ndjson, serialize_ndjson
from kgjson.samples import statue_of_liberty

from conftest import T, graphs


def test_empty_collection():
    coll = DocCollection(Representation.SNV)
    assert serialize_ndjson(coll) == ""
    assert len(parse_ndjson("", "snv")) == 0


def test_dt_line_has_four_pairs():
    from kgjson import KnowledgeGraph
    coll = build_dt(KnowledgeGraph([T("s", "p", "o")]))
    (line,) = serialize_ndjson(coll).splitlines()
    assert list(json.loads(line)) == ["id", "Subject", "Predicate", "Object"]


def test_size_limit_boundary():
    body = {"id": "x", "v": "a" * 10}
    size = len(dumps(body).encode())
    ok = DocCollection("snv", [JsonDocument("x", body)], max_doc_bytes=size)
    assert serialize_ndjson(ok)
    tight = DocCollection("snv", [JsonDocument("x", body)], max_doc_bytes=size - 1)
    with pytest.raises(DocumentTooLarge) as info:
        serialize_ndjson(tight)
    assert info.value.size == size


def test_size_counts_utf8_bytes():
    doc = JsonDocument("x", {"id": "x", "v": "é"})
    assert document_size(doc) == len('{"id":"x","v":"é"}'.encode())


def test_statue_round_trip():
    coll = build_snv(statue_of_liberty())
    text = serialize_ndjson(coll)
    back = parse_ndjson(text, "snv")
    assert back == coll
    assert serialize_ndjson(back) == text


def test_duplicate_id():
    with pytest.raises(DuplicateId):
        parse_ndjson('{"id":"a"}\n{"id":"a","x":"1"}\n', "snv")


def test_blank_lines_skipped():
    coll = parse_ndjson('\n{"id":"a"}\n   \n{"id":"b"}\n', "snv")
    assert [d.id for d in coll] == ["a", "b"]


@pytest.mark.parametrize("text, cls", [
    ('{"x":"1"}', MissingId),
    ('{"id":3}', MissingId),
    ('[1,2]', MalformedDocument),
    ('{"id":"a"', MalformedDocument),
    ('{"id":"a","p":"1","p":"2"}', MalformedDocument),
    ('{"id":"a","p":NaN}', MalformedDocument),
])
def test_malformed(text, cls):
    with pytest.raises(cls):
        parse_ndjson('{"id":"ok"}\n' + text, "snv")


def test_numbers_stay_decimal():
    coll = parse_ndjson('{"id":"a","p":0.1,"q":12345678901234567890}', "snv")
    body = coll.documents[0].body
    assert body["p"] == Decimal("0.1")
    assert serialize_ndjson(coll) == '{"id":"a","p":0.1,"q":12345678901234567890}\n'


def test_body_must_carry_id():
    with pytest.raises(ValueError):
        JsonDocument("a", {"id": "b"})


json_values = st.recursive(
    st.one_of(st.text(max_size=8), st.integers(), st.booleans(), st.none(),
              st.decimals(allow_nan=False, allow_infinity=False, places=3)),
    lambda inner: st.one_of(st.lists(inner, max_size=3),
                            st.dictionaries(st.text(max_size=5), inner, max_size=3)),
    max_leaves=10)


@given(st.lists(st.dictionaries(st.text(max_size=5).filter(lambda k: k != "id"), json_values,
                                max_size=4), max_size=5))
def test_ndjson_round_trip(bodies):
    docs = [JsonDocument(f"d{i}", {"id": f"d{i}", **b}) for i, b in enumerate(bodies)]
    coll = DocCollection("cnv", docs)
    text = serialize_ndjson(coll)
    back = parse_ndjson(text, "cnv")
    assert serialize_ndjson(back) == text
    assert [list(d.body) for d in back] == [list(d.body) for d in coll]


@given(graphs())
def test_order_stable(kg):
    coll = build_snv(kg)
    assert [d.id for d in parse_ndjson(serialize_ndjson(coll), "snv")] == [d.id for d in coll]
