"""TF-IDF scoring of darknet port-access statistics.

Each UTC day's destination-port counts form a document, ports are words.
After stop-port removal and a per-day noise threshold, ports are ranked by
smoothed TF-IDF over a sliding window of days.
"""

from .cleanse import (
    DEFAULT_STOP_PORTS,
    CleanseConfig,
    IdfHistogram,
    apply_noise_threshold,
    apply_stop_ports,
    auto_select_threshold,
    cleanse_corpus,
    idf_histogram,
)
from .corpus import (
    AccessRecord,
    Corpus,
    DayDocument,
    HourlySeries,
    Protocol,
    aggregate_daily,
    aggregate_hourly,
    parse_record,
    port_ratio_table,
    read_records,
)
from .forensics import (
    detect_wave,
    hilbert_xy,
    isn_fingerprint,
    payload_distribution,
    source_heatmap,
    srcport_distribution,
)
from .scoring import (
    IdfMode,
    ScoringConfig,
    TfidfRanking,
    TfidfScore,
    TfMode,
    idf_common,
    idf_smoothed,
    port_history,
    score_day,
    sliding_scan,
    tf,
    tf_log,
)
from .synth import ScenarioSpec, generate, paper_scenario

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_STOP_PORTS",
    "CleanseConfig",
    "IdfHistogram",
    "apply_noise_threshold",
    "apply_stop_ports",
    "auto_select_threshold",
    "cleanse_corpus",
    "idf_histogram",
    "AccessRecord",
    "Corpus",
    "DayDocument",
    "HourlySeries",
    "Protocol",
    "aggregate_daily",
    "aggregate_hourly",
    "parse_record",
    "port_ratio_table",
    "read_records",
    "detect_wave",
    "hilbert_xy",
    "isn_fingerprint",
    "payload_distribution",
    "source_heatmap",
    "srcport_distribution",
    "IdfMode",
    "ScoringConfig",
    "TfidfRanking",
    "TfidfScore",
    "TfMode",
    "idf_common",
    "idf_smoothed",
    "port_history",
    "score_day",
    "sliding_scan",
    "tf",
    "tf_log",
    "ScenarioSpec",
    "generate",
    "paper_scenario",
]
