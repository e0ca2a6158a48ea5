"""TF-IDF scoring of ports over a sliding window of day documents."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from datetime import date

from .corpus import Corpus, DayDocument
from .errors import EmptyDocument, InsufficientHistory, RangeOutOfCorpus


class IdfMode(str, enum.Enum):
    SMOOTHED = "smoothed"
    COMMON = "common"


class TfMode(str, enum.Enum):
    LINEAR = "linear"
    LOG = "log"


@dataclass(frozen=True)
class ScoringConfig:
    window_days: int = 30
    top_k: int = 5
    idf_mode: IdfMode = IdfMode.SMOOTHED
    tf_mode: TfMode = TfMode.LINEAR

    def __post_init__(self):
        object.__setattr__(self, "idf_mode", IdfMode(self.idf_mode))
        object.__setattr__(self, "tf_mode", TfMode(self.tf_mode))
        if self.window_days < 2:
            raise ValueError("window_days must be >= 2")
        if self.top_k < 1:
            raise ValueError("top_k must be >= 1")


@dataclass(frozen=True)
class TfidfScore:
    port: int
    tf: float
    idf: float
    tfidf: float
    day: date

    def to_dict(self) -> dict:
        return {"port": self.port, "tf": self.tf, "idf": self.idf, "tfidf": self.tfidf}


@dataclass(frozen=True)
class TfidfRanking:
    day: date
    window_days: int
    k: int
    entries: tuple[TfidfScore, ...] = field(default_factory=tuple)

    @property
    def ports(self) -> list[int]:
        return [e.port for e in self.entries]

    def rank_of(self, port: int) -> int | None:
        """1-based rank of ``port``, or None if it is not listed."""
        for i, e in enumerate(self.entries, 1):
            if e.port == port:
                return i
        return None


def _require_total(doc: DayDocument) -> int:
    total = doc.total()
    if total <= 0:
        raise EmptyDocument(f"document {doc.day} is empty")
    return total


def tf(port: int, doc: DayDocument) -> float:
    total = _require_total(doc)
    return doc.get(port) / total


def tf_log(port: int, doc: DayDocument) -> float:
    total = _require_total(doc)
    n = doc.get(port)
    if not n:
        return 0.0
    return math.log1p(n) / math.log1p(total)


def smoothed_idf(n_docs: int, df: int) -> float:
    """ln(N / (df + 1)) + 1, natural log."""
    return math.log(n_docs / (df + 1)) + 1.0


def common_idf(n_docs: int, df: int) -> float:
    return math.log(n_docs / (df + 1))


def idf_smoothed(port: int, corpus: Corpus) -> float:
    return smoothed_idf(corpus.n_docs, corpus.df(port))


def idf_common(port: int, corpus: Corpus) -> float:
    return common_idf(corpus.n_docs, corpus.df(port))


_TF = {TfMode.LINEAR: tf, TfMode.LOG: tf_log}
_IDF = {IdfMode.SMOOTHED: smoothed_idf, IdfMode.COMMON: common_idf}


def rank_key(score: TfidfScore):
    return (-score.tfidf, score.port)


def score_window(window: Corpus, config: ScoringConfig) -> list[TfidfScore]:
    """Score every port of the window's last document; full list, ranked."""
    target = window.docs[-1]
    if not target.counts:
        return []
    df = window.df_counts()
    n_docs = window.n_docs
    tf_fn = _TF[config.tf_mode]
    idf_fn = _IDF[config.idf_mode]
    scores = []
    for port in target.counts:
        t = tf_fn(port, target)
        i = idf_fn(n_docs, df[port])
        scores.append(TfidfScore(port, t, i, t * i, target.day))
    scores.sort(key=rank_key)
    return scores


def score_day(corpus: Corpus, day_index: int, config: ScoringConfig | None = None) -> TfidfRanking:
    config = config or ScoringConfig()
    if day_index < 0:
        day_index += corpus.n_docs
    if day_index < config.window_days - 1 or day_index >= corpus.n_docs:
        raise InsufficientHistory(
            f"day index {day_index} needs {config.window_days - 1} prior days "
            f"within a corpus of {corpus.n_docs} days"
        )
    window = corpus.window(day_index, config.window_days)
    scores = score_window(window, config)
    return TfidfRanking(window.docs[-1].day, config.window_days, config.top_k, tuple(scores[:config.top_k]))


def sliding_scan(corpus: Corpus, config: ScoringConfig | None = None) -> list[TfidfRanking]:
    config = config or ScoringConfig()
    if corpus.n_docs < config.window_days:
        raise InsufficientHistory(f"corpus has {corpus.n_docs} days, window needs {config.window_days}")
    return [score_day(corpus, i, config) for i in range(config.window_days - 1, corpus.n_docs)]


def port_history(corpus: Corpus, port: int, date_range: tuple[date, date] | None = None) -> list[tuple[date, int]]:
    """Daily counts for one port, zeros included."""
    if not corpus.docs:
        raise RangeOutOfCorpus("corpus is empty")
    if date_range is None:
        first, last = corpus.docs[0].day, corpus.docs[-1].day
    else:
        first, last = date_range
    if first > last or first < corpus.docs[0].day or last > corpus.docs[-1].day:
        raise RangeOutOfCorpus(f"{first}..{last} outside {corpus.docs[0].day}..{corpus.docs[-1].day}")
    lo, hi = corpus.index_of(first), corpus.index_of(last)
    return [(d.day, d.get(port)) for d in corpus.docs[lo:hi + 1]]
