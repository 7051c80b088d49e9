import gzip

import pytest
from hypothesis import given, strategies as st

from lpmine import ConfigurationError, EventLog, LogParseError
from lpmine.eventlog import (
    RawEvent,
    activity_count,
    group_by_resource_day,
    parse_csv,
    parse_timestamp,
    parse_xes,
    parse_xes_events,
    project,
    read_log,
    total_events,
)

traces_st = st.lists(st.lists(st.sampled_from("abcde"), max_size=8), max_size=8)
logs_st = traces_st.map(lambda ts: EventLog(ts))


def test_multiset_merge_and_len():
    log = EventLog([("a", "b"), ("a",), ("a", "b")])
    assert log.traces == {("a",): 1, ("a", "b"): 2}
    assert len(log) == 3
    assert log.n_variants == 2
    assert log.alphabet == {"a", "b"}


def test_alphabet_can_be_widened_not_narrowed():
    assert EventLog([("a",)], alphabet="ab").alphabet == {"a", "b"}
    with pytest.raises(ValueError):
        EventLog([("a", "c")], alphabet="a")


def test_empty_trace_and_empty_log():
    log = EventLog([()])
    assert len(log) == 1 and total_events(log) == 0 and not log.alphabet
    assert total_events(EventLog()) == 0


def test_equality_and_hash():
    a = EventLog({("x", "y"): 2})
    b = EventLog([("x", "y"), ("x", "y")])
    assert a == b and hash(a) == hash(b)


# projection and counts


def test_project_trace():
    log = EventLog([tuple("abcabc")])
    assert project(log, "ac").traces == {tuple("acac"): 1}


def test_project_merges_multiplicities():
    log = EventLog({tuple("abc"): 2, tuple("bac"): 3})
    projected = project(log, {"a", "c"})
    assert projected.traces == {("a", "c"): 5}
    assert projected.alphabet == {"a", "c"}


def test_project_keeps_empty_traces():
    log = EventLog({("a",): 2, ("b",): 1})
    assert project(log, {"b"}).traces == {(): 2, ("b",): 1}


def test_project_alphabet_is_intersection():
    log = EventLog([("a", "b")])
    assert project(log, {"a", "z"}).alphabet == {"a"}


def test_activity_count():
    assert activity_count(EventLog([tuple("abca")]), "a") == 2
    log = EventLog({tuple("abc"): 2, tuple("bac"): 3})
    assert activity_count(log, "a") == 5
    assert activity_count(log, "z") == 0


def test_total_events(fig1_log):
    assert total_events(fig1_log) == 66
    assert total_events(EventLog({("a",): 3})) == 3


@given(logs_st)
def test_project_full_alphabet_is_identity(log):
    assert project(log, log.alphabet) == log


@given(logs_st, st.sets(st.sampled_from("abcdez")))
def test_project_properties(log, labels):
    once = project(log, labels)
    assert project(once, labels) == once
    assert len(once) == len(log)
    assert total_events(once) == sum(activity_count(log, a) for a in labels)


# CSV


def test_csv_grouping():
    log = parse_csv(b"case,activity\n1,a\n1,b\n2,a\n")
    assert log.traces == {("a", "b"): 1, ("a",): 1}


def test_csv_header_only():
    log = parse_csv(b"case,activity\n")
    assert len(log) == 0 and not log.alphabet


def test_csv_timestamp_order_with_stable_ties():
    data = (
        "case,activity,timestamp\n"
        "1,c,2024-01-01T10:00:00Z\n"
        "1,a,2024-01-01T09:00:00Z\n"
        "1,d,2024-01-01T10:00:00Z\n"
        "1,b,2024-01-01T09:00:00Z\n"
        "1,e,2024-01-01T08:00:00Z\n"
    ).encode()
    # by hand: e (08h), then a, b (09h, row order), then c, d (10h, row order)
    assert parse_csv(data).traces == {tuple("eabcd"): 1}
    assert parse_csv(data, timestamp="").traces == {tuple("cadbe"): 1}


def test_csv_custom_columns_and_epoch_timestamps():
    data = b"id,act,t\nx,b,20\nx,a,10\n"
    assert parse_csv(data, case="id", activity="act", timestamp="t").traces == {("a", "b"): 1}


def test_csv_missing_column():
    with pytest.raises(ConfigurationError):
        parse_csv(b"case,name\n1,a\n")
    with pytest.raises(ConfigurationError):
        parse_csv(b"case,activity\n1,a\n", timestamp="when")


def test_csv_bad_timestamp_names_line():
    with pytest.raises(LogParseError, match="line 3"):
        parse_csv(b"case,activity,timestamp\n1,a,5\n1,b,yesterday\n")


def test_parse_timestamp_forms():
    assert parse_timestamp("0") == 0.0
    assert parse_timestamp("1970-01-01T00:01:00Z") == 60.0
    assert parse_timestamp("1970-01-01T01:00:00+01:00") == 0.0
    assert parse_timestamp("1970-01-01 00:00:10") == 10.0


# XES

XES = b"""<?xml version="1.0" encoding="UTF-8"?>
<log xmlns="http://www.xes-standard.org/">
  <trace><string key="concept:name" value="c1"/>
    <event><string key="concept:name" value="A"/><string key="org:resource" value="r1"/>
      <date key="time:timestamp" value="2020-01-01T10:00:00+00:00"/></event>
    <event><string key="concept:name" value="B"/><string key="org:resource" value="r1"/>
      <date key="time:timestamp" value="2020-01-01T09:00:00+00:00"/></event>
  </trace>
  <trace>
    <event><string key="concept:name" value="A"/><string key="org:resource" value="r2"/>
      <date key="time:timestamp" value="2020-01-01T11:00:00+00:00"/></event>
    <event><string key="concept:name" value="B"/><string key="org:resource" value="r1"/>
      <date key="time:timestamp" value="2020-01-02T08:00:00+00:00"/></event>
  </trace>
</log>
"""


def test_xes_minimal():
    log = parse_xes(
        b'<log><trace><event><string key="concept:name" value="A"/></event>'
        b'<event><string key="concept:name" value="B"/></event></trace></log>'
    )
    assert log.traces == {("A", "B"): 1}


def test_xes_multiplicity_and_namespaces():
    log = parse_xes(XES)
    assert log.traces == {("A", "B"): 2}


def test_xes_zero_traces():
    assert len(parse_xes(b"<log></log>")) == 0


def test_xes_malformed_reports_location():
    with pytest.raises(LogParseError, match="line 1"):
        parse_xes(b"<log><trace></log>")


def test_xes_missing_name_reports_trace():
    doc = b'<log><trace><event><string key="concept:name" value="A"/></event></trace><trace><event/></trace></log>'
    with pytest.raises(LogParseError, match="trace 1"):
        parse_xes(doc)


def test_xes_gzip(tmp_path):
    path = tmp_path / "log.xes.gz"
    path.write_bytes(gzip.compress(XES))
    assert read_log(path) == parse_xes(XES)


def test_csv_and_xes_agree(tmp_path):
    csv_path = tmp_path / "log.csv"
    csv_path.write_text("case,activity\n1,A\n1,B\n2,A\n2,B\n")
    assert read_log(csv_path) == parse_xes(XES)


def test_read_log_unknown_extension(tmp_path):
    path = tmp_path / "log.txt"
    path.write_text("")
    with pytest.raises(ConfigurationError):
        read_log(path)


def test_group_by_resource_day():
    events = parse_xes_events(XES)
    assert [e.activity for e in events] == ["A", "B", "A", "B"]
    by_time = group_by_resource_day(events, "r1")
    assert by_time.traces == {("B", "A"): 1, ("B",): 1}
    by_doc = group_by_resource_day(events, "r1", order="log")
    assert by_doc.traces == {("A", "B"): 1, ("B",): 1}


def test_group_by_resource_day_needs_timestamps():
    with pytest.raises(LogParseError):
        group_by_resource_day([RawEvent(0, "a", "r", None)], "r")
    with pytest.raises(ConfigurationError):
        group_by_resource_day([], "r", order="random")
