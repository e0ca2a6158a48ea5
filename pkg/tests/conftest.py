from datetime import date, timedelta

import pytest

from port_tfidf.corpus import Corpus, DayDocument, Protocol

ACCEPTANCE_LINES = []


def make_corpus(day_counts, start=date(2020, 7, 1), protocol=Protocol.TCP):
    """Corpus from a list of {port: count} dicts, one per consecutive day."""
    return Corpus(protocol, tuple(DayDocument(start + timedelta(days=i), protocol, c)
                                  for i, c in enumerate(day_counts)))


def record_criterion(number, name, ok, detail=""):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number:>2}: {name}" + (f" ({detail})" if detail else "")
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def corpus_factory():
    return make_corpus


def four_step_corpus(s):
    """Ten days whose df=1 port counts are 12, 19, 27, 21 at s, 2s, 4s, 8s.

    Each group is df=1 at exactly one threshold: a single day at that level,
    plus (except the first) an echo day one step lower that drops out there.
    """
    days = [dict() for _ in range(10)]
    nxt = [10000]

    def add(n, peak, echo=None):
        for _ in range(n):
            p = nxt[0]
            nxt[0] += 1
            days[p % 10][p] = peak
            if echo is not None:
                days[(p + 1) % 10][p] = echo

    add(12, s)
    add(19, 2 * s, echo=s)
    add(27, 4 * s, echo=2 * s)
    add(21, 8 * s, echo=4 * s)
    for d in days:
        d[1] = 16 * s  # present every day, so no threshold empties the corpus
    return days


@pytest.fixture(scope="session")
def paper_traffic():
    from port_tfidf.synth import generate, paper_scenario
    return generate(paper_scenario())
