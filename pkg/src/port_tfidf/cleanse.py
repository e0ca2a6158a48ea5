"""Stop-port removal, per-day noise thresholding and threshold auto-selection.

The auto-selection sweep starts at ``sweep_start`` accesses/day and doubles
the threshold while the number of ports seen on exactly one day (those with
the largest attainable IDF) keeps growing.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .corpus import Corpus, DayDocument
from .errors import EmptyCorpus, InsufficientHistory, NoSurvivingPorts
from .scoring import smoothed_idf

DEFAULT_STOP_PORTS = frozenset({445, 23, 22, 80, 81, 8080, 443})
AUTO = "auto"


@dataclass(frozen=True)
class CleanseConfig:
    stop_ports: frozenset = DEFAULT_STOP_PORTS
    threshold: int | str = AUTO
    sweep_start: int = 1000
    histogram_bins: int = 40

    def __post_init__(self):
        object.__setattr__(self, "stop_ports", frozenset(int(p) for p in self.stop_ports))
        if isinstance(self.threshold, str):
            if self.threshold.lower() != AUTO:
                object.__setattr__(self, "threshold", int(self.threshold))
            else:
                object.__setattr__(self, "threshold", AUTO)
        if self.threshold != AUTO and self.threshold < 1:
            raise ValueError("threshold must be >= 1")
        if self.sweep_start < 1:
            raise ValueError("sweep_start must be >= 1")
        if self.histogram_bins < 2:
            raise ValueError("histogram_bins must be >= 2")


@dataclass(frozen=True)
class IdfHistogram:
    threshold: int
    n_docs: int
    bin_edges: tuple[float, ...]
    bin_counts: tuple[int, ...]
    top_bin_count: int
    distinct_ports: int = field(default=0)

    @property
    def idf_max(self) -> float:
        return self.bin_edges[-1]


def apply_stop_ports(doc: DayDocument, stop_ports) -> DayDocument:
    stop_ports = frozenset(stop_ports)
    return doc.replace_counts({p: n for p, n in doc.counts.items() if p not in stop_ports})


def apply_noise_threshold(doc: DayDocument, threshold: int) -> DayDocument:
    # "less than threshold" is noise, so a count equal to the threshold stays
    if threshold < 1:
        raise ValueError("threshold must be >= 1")
    return doc.replace_counts({p: n for p, n in doc.counts.items() if n >= threshold})


def remove_stop_ports(corpus: Corpus, stop_ports) -> Corpus:
    stop_ports = frozenset(stop_ports)
    return corpus.map_docs(lambda d: apply_stop_ports(d, stop_ports))


def threshold_corpus(corpus: Corpus, threshold: int) -> Corpus:
    return corpus.map_docs(lambda d: apply_noise_threshold(d, threshold))


def max_idf(n_docs: int) -> float:
    return smoothed_idf(n_docs, 1)


def idf_histogram(corpus: Corpus, threshold: int, bins: int = 40) -> IdfHistogram:
    if not corpus.docs:
        raise EmptyCorpus("corpus has no documents")
    df = threshold_corpus(corpus, threshold).df_counts()
    if not df:
        raise NoSurvivingPorts(f"no port reaches {threshold} accesses on any day")
    n_docs = corpus.n_docs
    top = max_idf(n_docs)
    values = [smoothed_idf(n_docs, k) for k in df.values()]
    counts, edges = np.histogram(values, bins=bins, range=(0.0, top))
    return IdfHistogram(
        threshold=threshold,
        n_docs=n_docs,
        bin_edges=tuple(float(e) for e in edges),
        bin_counts=tuple(int(c) for c in counts),
        top_bin_count=sum(1 for k in df.values() if k == 1),
        distinct_ports=len(df),
    )


def auto_select_threshold(corpus: Corpus, sweep_start: int = 1000, bins: int = 40):
    """Return ``(threshold, trace)``.

    The sweep stops at the first strict drop in the df=1 port count and
    returns the threshold just before it; equal counts keep sweeping.  A
    threshold that wipes out every port ends the sweep the same way.
    """
    if not corpus.docs:
        raise EmptyCorpus("corpus has no documents")
    if corpus.n_docs < 2:
        raise InsufficientHistory("threshold sweep needs at least 2 days")
    trace = [idf_histogram(corpus, sweep_start, bins)]
    threshold = sweep_start
    while True:
        threshold *= 2
        try:
            hist = idf_histogram(corpus, threshold, bins)
        except NoSurvivingPorts:
            break
        if hist.top_bin_count < trace[-1].top_bin_count:
            trace.append(hist)
            return trace[-2].threshold, trace
        trace.append(hist)
    return trace[-1].threshold, trace


def select_from_counts(thresholds, top_counts) -> int:
    """Apply the sweep stop rule to a precomputed trace."""
    best = thresholds[0]
    prev = top_counts[0]
    for t, c in zip(thresholds[1:], top_counts[1:]):
        if c < prev:
            return best
        best, prev = t, c
    return best


def cleanse_corpus(corpus: Corpus, config: CleanseConfig | None = None) -> Corpus:
    config = config or CleanseConfig()
    if not corpus.docs:
        raise EmptyCorpus("corpus has no documents")
    filtered = remove_stop_ports(corpus, config.stop_ports)
    threshold = config.threshold
    if threshold == AUTO:
        threshold, _ = auto_select_threshold(filtered, config.sweep_start, config.histogram_bins)
    return threshold_corpus(filtered, threshold)


def resolve_threshold(corpus: Corpus, config: CleanseConfig):
    """Threshold to use and the sweep trace (empty when fixed)."""
    if config.threshold != AUTO:
        return config.threshold, []
    return auto_select_threshold(remove_stop_ports(corpus, config.stop_ports),
                                 config.sweep_start, config.histogram_bins)
