import math
from datetime import date

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from port_tfidf.cleanse import (
    AUTO,
    DEFAULT_STOP_PORTS,
    CleanseConfig,
    apply_noise_threshold,
    apply_stop_ports,
    auto_select_threshold,
    cleanse_corpus,
    idf_histogram,
    remove_stop_ports,
    resolve_threshold,
    select_from_counts,
    threshold_corpus,
)
from port_tfidf.corpus import DayDocument
from port_tfidf.errors import EmptyCorpus, InsufficientHistory, NoSurvivingPorts

from conftest import four_step_corpus, make_corpus

DAY = date(2020, 8, 1)


def test_stop_ports_removed():
    doc = DayDocument(DAY, "tcp", {445: 900, 23: 10, 9530: 7})
    assert dict(apply_stop_ports(doc, DEFAULT_STOP_PORTS).counts) == {9530: 7}


def test_noise_threshold_keeps_equal_counts():
    doc = DayDocument(DAY, "tcp", {1: 999, 2: 1000, 3: 1001})
    assert dict(apply_noise_threshold(doc, 1000).counts) == {2: 1000, 3: 1001}


def test_noise_threshold_rejects_zero():
    with pytest.raises(ValueError):
        apply_noise_threshold(DayDocument(DAY, "tcp", {1: 1}), 0)


def test_config_parses_threshold():
    assert CleanseConfig(threshold="auto").threshold == AUTO
    assert CleanseConfig(threshold="16").threshold == 16
    with pytest.raises(ValueError):
        CleanseConfig(threshold=0)


def test_histogram_values_for_thirty_days():
    # port 1 appears once, port 2 on every day
    days = [{2: 5} for _ in range(30)]
    days[0] = {1: 5, 2: 5}
    hist = idf_histogram(make_corpus(days), threshold=1, bins=40)
    assert hist.top_bin_count == 1
    assert hist.distinct_ports == 2
    assert hist.idf_max == pytest.approx(3.7080502, abs=1e-6)
    assert sum(hist.bin_counts) == 2
    # df=30 gives ln(30/31) + 1 = 0.96722
    lo_bin = int(0.96722 / (hist.idf_max / 40))
    assert hist.bin_counts[lo_bin] == 1
    assert hist.bin_counts[-1] == 1


def test_top_bin_empty_when_ports_are_everywhere():
    hist = idf_histogram(make_corpus([{1: 3, 2: 3}] * 5), threshold=1)
    assert hist.top_bin_count == 0


def test_histogram_raises_without_survivors():
    with pytest.raises(NoSurvivingPorts):
        idf_histogram(make_corpus([{1: 3}, {2: 3}]), threshold=4)
    with pytest.raises(EmptyCorpus):
        idf_histogram(make_corpus([]), threshold=1)


def test_top_bin_count_matches_brute_force():
    import random
    rng = random.Random(3)
    for _ in range(50):
        days = [{p: rng.randrange(1, 30) for p in rng.sample(range(40), rng.randrange(0, 15))}
                for _ in range(rng.randrange(2, 8))]
        t = rng.choice([1, 5, 10, 20])
        seen = {}
        for d in days:
            for p, n in d.items():
                if n >= t:
                    seen[p] = seen.get(p, 0) + 1
        if not seen:
            continue
        hist = idf_histogram(make_corpus(days), t)
        assert hist.top_bin_count == sum(1 for k in seen.values() if k == 1)
        assert hist.distinct_ports == len(seen)


def test_select_from_counts_stops_at_first_drop():
    assert select_from_counts([1000, 2000, 4000, 8000], [12, 19, 27, 21]) == 4000
    assert select_from_counts([1000, 2000], [10, 4]) == 1000
    # a tie keeps the sweep going
    assert select_from_counts([1, 2, 4, 8], [5, 5, 7, 3]) == 4
    assert select_from_counts([1, 2, 4], [1, 2, 3]) == 4


def _exhaustive_top_counts(days, thresholds):
    out = []
    for t in thresholds:
        seen = {}
        for d in days:
            for p, n in d.items():
                if n >= t:
                    seen[p] = seen.get(p, 0) + 1
        out.append(sum(1 for k in seen.values() if k == 1))
    return out


def test_four_step_corpus_peaks_at_four_times_start():
    s = 1000
    chosen, trace = auto_select_threshold(make_corpus(four_step_corpus(s)), sweep_start=s)
    assert [h.top_bin_count for h in trace] == [12, 19, 27, 21]
    assert chosen == 4 * s


@settings(max_examples=60, deadline=None)
@given(st.lists(st.dictionaries(st.integers(0, 30), st.integers(1, 200), max_size=10),
                min_size=2, max_size=8),
       st.sampled_from([1, 2, 3, 5]))
def test_auto_select_matches_exhaustive_sweep(days, start):
    days = [dict(d) for d in days]
    days[0][99] = 10_000  # keeps every threshold of the sweep non-empty
    thresholds = [start << i for i in range(20) if start << i <= 10_000]
    counts = _exhaustive_top_counts(days, thresholds)
    chosen, trace = auto_select_threshold(make_corpus(days), sweep_start=start)
    assert chosen == select_from_counts(thresholds, counts)
    assert [h.top_bin_count for h in trace] == counts[:len(trace)]


def test_auto_select_needs_history():
    with pytest.raises(InsufficientHistory):
        auto_select_threshold(make_corpus([{1: 5}]), sweep_start=1)


def test_auto_select_stops_when_everything_vanishes():
    # counts 1..3 with one df=1 port; at 4 nothing survives
    corpus = make_corpus([{1: 3, 2: 3}, {2: 3}])
    chosen, trace = auto_select_threshold(corpus, sweep_start=1)
    assert chosen == 2
    assert [h.threshold for h in trace] == [1, 2]


def test_cleanse_corpus_fixed_threshold():
    corpus = make_corpus([{445: 5000, 9530: 40, 1: 3}, {23: 50, 9530: 2}])
    out = cleanse_corpus(corpus, CleanseConfig(threshold=10))
    assert [dict(d.counts) for d in out.docs] == [{9530: 40}, {}]
    assert resolve_threshold(corpus, CleanseConfig(threshold=10)) == (10, [])


# --- properties -------------------------------------------------------------

docs_st = st.lists(st.dictionaries(st.integers(0, 60), st.integers(1, 500), max_size=12),
                   min_size=1, max_size=6)
stops_st = st.frozensets(st.integers(0, 60), max_size=10)


@settings(max_examples=80, deadline=None)
@given(docs_st, stops_st, st.integers(1, 600))
def test_filters_never_increase_counts(days, stops, t):
    corpus = make_corpus(days)
    out = threshold_corpus(remove_stop_ports(corpus, stops), t)
    for before, after in zip(corpus.docs, out.docs):
        for port, n in after.counts.items():
            assert n == before.get(port)
            assert port not in stops and n >= t
        assert after.total() <= before.total()


@settings(max_examples=80, deadline=None)
@given(docs_st, stops_st, st.integers(1, 600))
def test_filters_idempotent_and_commute(days, stops, t):
    corpus = make_corpus(days)
    a = threshold_corpus(remove_stop_ports(corpus, stops), t)
    b = remove_stop_ports(threshold_corpus(corpus, t), stops)
    assert a == b
    assert threshold_corpus(a, t) == a
    assert remove_stop_ports(a, stops) == a


@settings(max_examples=80, deadline=None)
@given(docs_st, st.integers(1, 300), st.integers(1, 300))
def test_higher_threshold_shrinks_df(days, t1, t2):
    lo, hi = sorted((t1, t2))
    corpus = make_corpus(days)
    a, b = threshold_corpus(corpus, lo), threshold_corpus(corpus, hi)
    for port in range(61):
        assert b.df(port) <= a.df(port)


def test_histogram_edges_span_zero_to_max_idf():
    hist = idf_histogram(make_corpus([{1: 1}, {2: 1}, {2: 1}]), 1, bins=10)
    assert hist.bin_edges[0] == 0.0
    assert hist.bin_edges[-1] == pytest.approx(math.log(3 / 2) + 1)
    assert len(hist.bin_counts) == 10
