import math
import random
from datetime import date

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from port_tfidf.corpus import DayDocument
from port_tfidf.errors import EmptyDocument, InsufficientHistory, RangeOutOfCorpus
from port_tfidf.scoring import (
    IdfMode,
    ScoringConfig,
    TfMode,
    common_idf,
    idf_common,
    idf_smoothed,
    port_history,
    score_day,
    sliding_scan,
    smoothed_idf,
    tf,
    tf_log,
)

from conftest import make_corpus

DAY = date(2020, 8, 1)


def test_tf_is_share_of_day():
    doc = DayDocument(DAY, "tcp", {1: 25, 2: 75})
    assert tf(1, doc) == 0.25
    assert tf(3, doc) == 0.0


def test_tf_log():
    doc = DayDocument(DAY, "tcp", {1: 9, 2: 90})
    assert tf_log(1, doc) == pytest.approx(math.log(10) / math.log(100))
    assert tf_log(7, doc) == 0.0
    assert tf_log(1, DayDocument(DAY, "tcp", {1: 4})) == 1.0


def test_tf_rejects_empty_document():
    with pytest.raises(EmptyDocument):
        tf(1, DayDocument(DAY, "tcp", {}))
    with pytest.raises(EmptyDocument):
        tf_log(1, DayDocument(DAY, "tcp", {}))


@pytest.mark.parametrize("n, df, smoothed, common", [
    (30, 1, 3.7080502, 2.7080502),
    (30, 29, 1.0, 0.0),
    (30, 30, 0.96722, -0.0328),
    (2, 2, 0.59453, -0.40547),
])
def test_idf_values(n, df, smoothed, common):
    assert smoothed_idf(n, df) == pytest.approx(smoothed, abs=1e-4)
    assert common_idf(n, df) == pytest.approx(common, abs=1e-4)


def test_idf_pin_natural_log():
    assert abs(smoothed_idf(30, 1) - 3.7080502) < 1e-6


def test_idf_from_corpus():
    corpus = make_corpus([{1: 1}, {2: 1}, {1: 1, 2: 1}, {}])
    assert idf_smoothed(1, corpus) == pytest.approx(math.log(4 / 3) + 1)
    assert idf_common(3, corpus) == pytest.approx(math.log(4))


def test_score_day_example():
    # 30 days of port 1 only; the last day adds a newcomer with 20% of traffic
    days = [{1: 100} for _ in range(30)]
    days[-1] = {1: 80, 9530: 20}
    ranking = score_day(make_corpus(days), 29)
    # the everyday port still wins: 0.8 x 0.967216 = 0.773768
    assert ranking.ports == [1, 9530]
    assert ranking.entries[0].tfidf == pytest.approx(0.773768, abs=1e-6)
    top = ranking.entries[1]
    assert top.tf == pytest.approx(0.2)
    assert top.idf == pytest.approx(3.7080502, abs=1e-6)
    assert top.tfidf == pytest.approx(0.74161, abs=1e-5)
    assert ranking.rank_of(9530) == 2 and ranking.rank_of(1) == 1
    assert ranking.rank_of(4) is None


def test_score_day_empty_target_gives_empty_ranking():
    days = [{1: 5}] * 29 + [{}]
    assert score_day(make_corpus(days), 29).entries == ()


def test_score_day_tie_breaks_on_port():
    days = [{}] * 29 + [{7: 5, 3: 5, 5: 5}]
    assert score_day(make_corpus(days), 29).ports == [3, 5, 7]


def test_top_k_truncates():
    days = [{}] * 29 + [{p: p for p in range(1, 20)}]
    ranking = score_day(make_corpus(days), -1, ScoringConfig(top_k=5))
    assert ranking.ports == [19, 18, 17, 16, 15]


def test_score_day_needs_history():
    corpus = make_corpus([{1: 1}] * 30)
    with pytest.raises(InsufficientHistory):
        score_day(corpus, 28)
    with pytest.raises(InsufficientHistory):
        score_day(corpus, 30)


def test_sliding_scan_counts():
    assert len(sliding_scan(make_corpus([{1: 1}] * 30))) == 1
    assert len(sliding_scan(make_corpus([{1: 1}] * 91))) == 62
    with pytest.raises(InsufficientHistory):
        sliding_scan(make_corpus([{1: 1}] * 29))


def test_window_only_sees_its_own_days():
    # port 2 appears only on day 0; on day 30 the window is days 1..30
    days = [{2: 1, 1: 1}] + [{1: 1}] * 29 + [{1: 1, 2: 1}]
    scan = sliding_scan(make_corpus(days))
    assert scan[1].entries[0].port == 2
    assert scan[1].entries[0].idf == pytest.approx(smoothed_idf(30, 1))


def test_modes_are_selectable():
    days = [{1: 10}] * 29 + [{1: 10, 2: 90}]
    corpus = make_corpus(days)
    r = score_day(corpus, 29, ScoringConfig(idf_mode=IdfMode.COMMON, tf_mode=TfMode.LOG))
    by_port = {e.port: e for e in r.entries}
    assert by_port[1].idf == pytest.approx(math.log(30 / 31))
    assert by_port[2].tf == pytest.approx(math.log(91) / math.log(101))


def test_config_validation():
    with pytest.raises(ValueError):
        ScoringConfig(window_days=1)
    with pytest.raises(ValueError):
        ScoringConfig(top_k=0)
    with pytest.raises(ValueError):
        ScoringConfig(idf_mode="bogus")


def test_port_history():
    corpus = make_corpus([{9530: 3}, {}, {9530: 8}])
    assert port_history(corpus, 9530) == [(date(2020, 7, 1), 3), (date(2020, 7, 2), 0), (date(2020, 7, 3), 8)]
    assert port_history(corpus, 9530, (date(2020, 7, 2), date(2020, 7, 3))) == [
        (date(2020, 7, 2), 0), (date(2020, 7, 3), 8)]
    with pytest.raises(RangeOutOfCorpus):
        port_history(corpus, 9530, (date(2020, 6, 30), date(2020, 7, 3)))
    with pytest.raises(RangeOutOfCorpus):
        port_history(corpus, 9530, (date(2020, 7, 3), date(2020, 7, 2)))


# --- oracle and properties --------------------------------------------------

def brute_force_scores(days):
    """Straight evaluation of share x (ln(N/(df+1)) + 1) for the last day."""
    n = len(days)
    last = days[-1]
    total = sum(last.values())
    out = {}
    for port, count in last.items():
        if count == 0:
            continue
        df = sum(1 for d in days if d.get(port, 0) > 0)
        out[port] = (count / total) * (math.log(n / (df + 1)) + 1)
    return out


def random_days(rng):
    n_days = rng.randint(2, 5)
    return [{p: rng.randint(0, 100) for p in rng.sample(range(6), rng.randint(0, 6))}
            for _ in range(n_days)]


def test_score_day_matches_brute_force():
    rng = random.Random(7)
    for _ in range(200):
        days = random_days(rng)
        if not any(days[-1].values()):
            days[-1][0] = 1
        corpus = make_corpus(days)
        ranking = score_day(corpus, -1, ScoringConfig(window_days=len(days), top_k=6))
        expected = brute_force_scores(days)
        assert {e.port for e in ranking.entries} == set(expected)
        for e in ranking.entries:
            assert e.tfidf == pytest.approx(expected[e.port], rel=1e-12)


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 10_000), st.data())
def test_smoothed_minus_common_is_one(n, data):
    df = data.draw(st.integers(1, n))
    assert abs(smoothed_idf(n, df) - common_idf(n, df) - 1.0) <= 1e-12


counts_st = st.dictionaries(st.integers(0, 20), st.integers(1, 1000), min_size=1, max_size=8)


@settings(max_examples=60, deadline=None)
@given(st.lists(counts_st, min_size=2, max_size=6), st.integers(2, 9))
def test_ranking_invariant_to_scaling_target_day(days, factor):
    # tf is a share, so multiplying the target day's counts changes nothing
    cfg = ScoringConfig(window_days=len(days), top_k=10)
    a = score_day(make_corpus(days), -1, cfg)
    scaled = days[:-1] + [{p: n * factor for p, n in days[-1].items()}]
    b = score_day(make_corpus(scaled), -1, cfg)
    assert a.ports == b.ports
    for x, y in zip(a.entries, b.entries):
        assert x.tfidf == pytest.approx(y.tfidf, rel=1e-12)


@settings(max_examples=60, deadline=None)
@given(st.lists(counts_st, min_size=2, max_size=6))
def test_ranking_is_sorted_and_tf_sums_to_one(days):
    cfg = ScoringConfig(window_days=len(days), top_k=50)
    r = score_day(make_corpus(days), -1, cfg)
    keys = [(-e.tfidf, e.port) for e in r.entries]
    assert keys == sorted(keys)
    assert sum(e.tf for e in r.entries) == pytest.approx(1.0, abs=1e-9)
