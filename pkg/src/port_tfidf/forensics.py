"""Follow-up analyses for ports flagged by the scan.

Covers the Mirai-style ISN fingerprint, detection of a UDP port that
rotates every UTC day, payload-length and source-port distributions, and
a /8 source-block heatmap laid out along a Hilbert curve.
"""

from __future__ import annotations

import enum
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from datetime import date
from typing import Iterable

from .corpus import AccessRecord, HourlySeries, Protocol, date_span
from .errors import BlockOutOfRange, EmptyRange, NoSamples

HILBERT_SIDE = 16
EPHEMERAL_MIN = 50000


@dataclass(frozen=True)
class IsnReport:
    port: int
    total_syn: int
    matched: int

    @property
    def fraction(self) -> float:
        return self.matched / self.total_syn if self.total_syn else 0.0

    def to_dict(self) -> dict:
        return {"port": self.port, "total_syn": self.total_syn, "matched": self.matched,
                "fraction": self.fraction}


@dataclass(frozen=True)
class WaveSegment:
    day: date
    dominant_port: int | None
    share: float
    day_total: int


@dataclass(frozen=True)
class WaveReport:
    segments: tuple[WaveSegment, ...]
    rotation_detected: bool
    min_share: float
    min_days: int
    rotation_days: tuple[date, ...] = ()
    boundary_hour: int = 0

    @property
    def rotation_ports(self) -> list[int]:
        days = set(self.rotation_days)
        return [s.dominant_port for s in self.segments if s.day in days]

    def to_dict(self) -> dict:
        return {
            "rotation_detected": self.rotation_detected,
            "boundary_hour_utc": self.boundary_hour,
            "min_share": self.min_share,
            "min_days": self.min_days,
            "rotation_days": [d.isoformat() for d in self.rotation_days],
            "segments": [
                {"day": s.day.isoformat(), "dominant_port": s.dominant_port,
                 "share": s.share, "day_total": s.day_total}
                for s in self.segments
            ],
        }


class DistributionKind(str, enum.Enum):
    PAYLOAD_LEN = "payload_len"
    SRC_PORT = "src_port"


@dataclass(frozen=True)
class Distribution:
    kind: DistributionKind
    histogram: dict[int, int]
    min: int
    max: int
    total: int

    @classmethod
    def from_values(cls, kind, values: Iterable[int]) -> "Distribution":
        hist = Counter(values)
        if not hist:
            raise NoSamples(f"no samples for {DistributionKind(kind).value} distribution")
        return cls(DistributionKind(kind), dict(sorted(hist.items())), min(hist), max(hist),
                   sum(hist.values()))


@dataclass(frozen=True)
class HilbertHeatmap:
    port: int
    grid: tuple[tuple[int, ...], ...]  # grid[y][x]
    block_counts: dict[int, int] = field(default_factory=dict)
    date_range: tuple[date, date] | None = None

    @property
    def total(self) -> int:
        return sum(map(sum, self.grid))

    def cells(self):
        """Yield ``(x, y, count)`` for all 256 cells, row-major."""
        for y, row in enumerate(self.grid):
            for x, count in enumerate(row):
                yield x, y, count


def _in_range(day: date, date_range) -> bool:
    return date_range is None or date_range[0] <= day <= date_range[1]


def isn_fingerprint(records: Iterable[AccessRecord], port: int) -> IsnReport:
    total = matched = 0
    for rec in records:
        if rec.protocol is not Protocol.TCP or rec.tcp_isn is None or rec.dst_port != port:
            continue
        total += 1
        if rec.tcp_isn == rec.dst_ip:
            matched += 1
    if not total:
        raise NoSamples(f"no TCP SYN records with an ISN for port {port}")
    return IsnReport(port, total, matched)


def detect_wave(hourly: HourlySeries, date_range: tuple[date, date] | None = None,
                min_share: float = 0.8, min_days: int = 3, stop_ports=frozenset()) -> WaveReport:
    """Look for a run of days each owned by a single, different port.

    Dominance uses daily sums, so reshuffling traffic between hours of the
    same day does not change the outcome.  Shares are relative to the
    day's traffic on non-stop ports.
    """
    if not 0.5 < min_share <= 1:
        raise ValueError("min_share must be in (0.5, 1]")
    if min_days < 2:
        raise ValueError("min_days must be >= 2")
    stop_ports = frozenset(stop_ports)
    if date_range is None:
        days = date_span(hourly.days[0], hourly.days[-1]) if hourly.days else []
    else:
        days = date_span(*date_range)
    if not days or not any(hourly.day_counts(d) for d in days):
        raise EmptyRange("no traffic in the requested range")

    segments = []
    for day in days:
        counts = {p: n for p, n in hourly.day_counts(day).items() if p not in stop_ports}
        total = sum(counts.values())
        if total:
            port = min(counts, key=lambda p: (-counts[p], p))
            segments.append(WaveSegment(day, port, counts[port] / total, total))
        else:
            segments.append(WaveSegment(day, None, 0.0, 0))

    best: list[WaveSegment] = []
    run: list[WaveSegment] = []
    for seg in segments:
        if seg.dominant_port is None or seg.share < min_share:
            run = []
            continue
        if run and (seg.dominant_port == run[-1].dominant_port or (seg.day - run[-1].day).days != 1):
            run = []
        run.append(seg)
        if len(run) > len(best):
            best = list(run)
    detected = len(best) >= min_days
    return WaveReport(
        segments=tuple(segments),
        rotation_detected=detected,
        min_share=min_share,
        min_days=min_days,
        rotation_days=tuple(s.day for s in best) if detected else (),
    )


def hourly_dominance(hourly: HourlySeries, day: date) -> list[int | None]:
    """Dominant port of each hour of ``day`` (None for an empty hour)."""
    out = []
    for hour in range(24):
        counts = hourly.hour_counts(day, hour)
        out.append(min(counts, key=lambda p: (-counts[p], p)) if counts else None)
    return out


def _select(records, port, date_range):
    for rec in records:
        if rec.dst_port == port and _in_range(rec.day, date_range):
            yield rec


def payload_distribution(records: Iterable[AccessRecord], port: int, date_range=None) -> Distribution:
    return Distribution.from_values(DistributionKind.PAYLOAD_LEN,
                                    (r.payload_len for r in _select(records, port, date_range)))


def srcport_distribution(records: Iterable[AccessRecord], port: int, date_range=None,
                         high_port: int = EPHEMERAL_MIN) -> tuple[Distribution, float]:
    dist = Distribution.from_values(DistributionKind.SRC_PORT,
                                    (r.src_port for r in _select(records, port, date_range)))
    high = sum(n for p, n in dist.histogram.items() if p >= high_port)
    return dist, high / dist.total


def _rot(n, x, y, rx, ry):
    if ry == 0:
        if rx == 1:
            x = n - 1 - x
            y = n - 1 - y
        x, y = y, x
    return x, y


def hilbert_xy(block: int, side: int = HILBERT_SIDE) -> tuple[int, int]:
    """Position of ``block`` on a side x side Hilbert curve.

    Index 0 sits at (0, 0) and the last index at (side - 1, 0).
    """
    if not 0 <= block < side * side:
        raise BlockOutOfRange(f"block {block} outside 0..{side * side - 1}")
    x = y = 0
    t = block
    s = 1
    while s < side:
        rx = 1 & (t // 2)
        ry = 1 & (t ^ rx)
        x, y = _rot(s, x, y, rx, ry)
        x += s * rx
        y += s * ry
        t //= 4
        s *= 2
    return x, y


def source_heatmap(records: Iterable[AccessRecord], port: int, date_range=None) -> HilbertHeatmap:
    """Distinct source addresses per /8 block, placed on a 16x16 Hilbert grid."""
    sources = defaultdict(set)
    for rec in _select(records, port, date_range):
        sources[rec.src_ip >> 24].add(rec.src_ip)
    if not sources:
        raise NoSamples(f"no records for port {port}")
    grid = [[0] * HILBERT_SIDE for _ in range(HILBERT_SIDE)]
    block_counts = {}
    for block, ips in sorted(sources.items()):
        x, y = hilbert_xy(block)
        grid[y][x] = len(ips)
        block_counts[block] = len(ips)
    return HilbertHeatmap(port, tuple(tuple(r) for r in grid), block_counts, date_range)
