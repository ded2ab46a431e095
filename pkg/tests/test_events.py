import json

import pytest
from hypothesis import given, strategies as st

from scenplay.events import Event, Trace, TraceFormatError, event_to_jsonl_line


def test_structural_equality():
    a = Event("PlaceYellow", row=0, col=3)
    b = Event("PlaceYellow", {"col": 3, "row": 0})
    assert a == b
    assert hash(a) == hash(b)
    assert a != Event("PlaceYellow", row=1, col=3)
    assert a != Event("PlaceRed", row=0, col=3)


def test_payload_sorted_and_immutable():
    e = Event("X", b=2, a=1)
    assert e.payload == (("a", 1), ("b", 2))
    with pytest.raises(AttributeError):
        e.name = "Y"


def test_total_order():
    events = [Event("B"), Event("A", k=2), Event("A", k=1), Event("A")]
    ordered = sorted(events)
    assert ordered == [Event("A"), Event("A", k=1), Event("A", k=2), Event("B")]


def test_mixed_payload_types_order():
    # ints order before strings under the same key
    a = Event("E", v=5)
    b = Event("E", v="5")
    assert sorted([b, a]) == [a, b]


def test_rejects_bad_payload():
    with pytest.raises(TypeError):
        Event("E", v=1.5)
    with pytest.raises(TypeError):
        Event("E", v=True)
    with pytest.raises(TypeError):
        Event("")


def test_jsonl_line_format():
    e = Event("PlaceYellow", row=0, col=3)
    line = event_to_jsonl_line(e)
    assert line == '{"name":"PlaceYellow","payload":{"col":3,"row":0}}\n'
    assert json.loads(line)["payload"] == {"col": 3, "row": 0}


def test_trace_roundtrip(tmp_path):
    trace = Trace([Event("Hot"), Event("PlaceRed", row=1, col=2)])
    path = tmp_path / "t.jsonl"
    trace.save(path)
    assert Trace.load(path) == trace


def test_trace_error_reports_line_number():
    with pytest.raises(TraceFormatError) as err:
        Trace.from_jsonl('{"name":"A","payload":{}}\nnot json\n')
    assert err.value.lineno == 2


names = st.sampled_from(["Hot", "Cold", "PlaceRed", "Win", "a", "b"])
scalars = st.one_of(st.integers(-1000, 1000),
                    st.sampled_from(["", "Y", "R", "x y"]))
payloads = st.dictionaries(st.sampled_from(["p", "q", "row", "col"]),
                           scalars, max_size=3)


@given(names, payloads)
def test_roundtrip_property(name, payload):
    e = Event(name, payload)
    assert Event.from_json_obj(json.loads(event_to_jsonl_line(e))) == e


@given(st.lists(st.tuples(names, payloads), max_size=6))
def test_order_is_total_and_consistent(items):
    events = [Event(n, p) for n, p in items]
    ordered = sorted(events)
    for x, y in zip(ordered, ordered[1:]):
        assert x <= y
        assert not y < x
