"""Access records and their aggregation into per-day port-count documents.

A day of destination-port counts plays the role of a text document and
each destination port plays the role of a word.  Days are UTC calendar
days; a day with no records is still a (empty) document.
"""

from __future__ import annotations

import enum
import functools
import gzip
import json
import socket
import struct
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from datetime import date, timedelta
from pathlib import Path
from typing import Iterable, Iterator, Mapping, NamedTuple

from .errors import (
    EmptyCorpus,
    EmptyInput,
    FieldOutOfRange,
    InputError,
    MalformedRecord,
    UnsupportedProtocol,
)

MAX_PORT = 65535
MAX_U32 = 0xFFFFFFFF
SECONDS_PER_DAY = 86400
_EPOCH_DAY = date(1970, 1, 1)


class Protocol(str, enum.Enum):
    TCP = "tcp"
    UDP = "udp"

    @classmethod
    def parse(cls, value) -> "Protocol":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).strip().lower())
        except ValueError:
            raise UnsupportedProtocol(f"unsupported protocol {value!r} (only tcp and udp)") from None


class RecordFormat(str, enum.Enum):
    NDJSON = "ndjson"
    CSV = "csv"


def ip_to_int(text: str) -> int:
    """Strict dotted-quad to 32-bit integer (network byte order)."""
    try:
        return struct.unpack("!I", socket.inet_pton(socket.AF_INET, text))[0]
    except (OSError, TypeError):
        raise FieldOutOfRange(f"bad IPv4 address {text!r}") from None


def int_to_ip(value: int) -> str:
    return socket.inet_ntoa(struct.pack("!I", value))


def utc_day(timestamp: int) -> date:
    return _EPOCH_DAY + timedelta(days=timestamp // SECONDS_PER_DAY)


def day_start(day: date) -> int:
    """Epoch seconds of 00:00 UTC on ``day``."""
    return (day - _EPOCH_DAY).days * SECONDS_PER_DAY


class AccessRecord(NamedTuple):
    """One packet seen by the telescope.

    Addresses are held as 32-bit unsigned integers; use ``int_to_ip`` to
    render them.  ``tcp_isn`` is only ever set on TCP records.
    """

    timestamp: int
    protocol: Protocol
    src_ip: int
    src_port: int
    dst_ip: int
    dst_port: int
    payload_len: int
    tcp_isn: int | None = None

    @property
    def day(self) -> date:
        return utc_day(self.timestamp)

    @property
    def hour(self) -> int:
        return (self.timestamp % SECONDS_PER_DAY) // 3600


_PROTOCOLS = {"tcp": Protocol.TCP, "udp": Protocol.UDP}
try:
    import orjson
    _decode_json = orjson.loads
except ImportError:  # pragma: no cover
    _decode_json = json.JSONDecoder().decode


def _protocol(value) -> Protocol:
    proto = _PROTOCOLS.get(value)
    return proto if proto is not None else Protocol.parse(value)


def _as_int(value, name: str) -> int:
    if type(value) is int:
        return value
    if isinstance(value, str):
        try:
            return int(value)
        except ValueError:
            pass
    raise MalformedRecord(f"field {name!r} is not an integer: {value!r}")


def _check_range(value: int, name: str, hi: int) -> int:
    if not 0 <= value <= hi:
        raise FieldOutOfRange(f"field {name!r} out of range: {value}")
    return value


@functools.lru_cache(maxsize=1 << 16)
def _cached_ip(text: str) -> int:
    return ip_to_int(text)


def _build(ts, proto, src, sport, dst, dport, plen, isn) -> AccessRecord:
    protocol = _protocol(proto)
    ts = _as_int(ts, "ts")
    if ts < 0:
        raise FieldOutOfRange(f"negative timestamp {ts}")
    sport = _check_range(_as_int(sport, "sport"), "sport", MAX_PORT)
    dport = _check_range(_as_int(dport, "dport"), "dport", MAX_PORT)
    plen = _as_int(plen, "plen")
    if plen < 0:
        raise FieldOutOfRange(f"negative payload length {plen}")
    if type(src) is not str or type(dst) is not str:
        raise MalformedRecord("addresses must be dotted-quad strings")
    if isn is not None:
        if protocol is Protocol.UDP:
            raise MalformedRecord("isn present on a udp record")
        isn = _check_range(_as_int(isn, "isn"), "isn", MAX_U32)
    return AccessRecord(ts, protocol, ip_to_int(src), sport, _cached_ip(dst), dport, plen, isn)


def _parse_ndjson(line: str) -> AccessRecord:
    try:
        obj = _decode_json(line)
    except ValueError as exc:
        raise MalformedRecord(f"invalid JSON: {exc}") from None
    if type(obj) is not dict:
        raise MalformedRecord("record is not a JSON object")
    if "proto" not in obj:
        raise MalformedRecord("missing field 'proto'")
    protocol = _protocol(obj["proto"])
    get = obj.get
    ts, sport, dport, plen, isn = get("ts"), get("sport"), get("dport"), get("plen"), get("isn")
    src, dst = get("src"), get("dst")
    # well-formed records take this branch; anything else goes through _build for the error
    if (type(ts) is int and type(sport) is int and type(dport) is int and type(plen) is int
            and ts >= 0 and plen >= 0 and 0 <= sport <= MAX_PORT and 0 <= dport <= MAX_PORT
            and type(src) is str and type(dst) is str
            and (isn is None or (type(isn) is int and protocol is Protocol.TCP and 0 <= isn <= MAX_U32))):
        return AccessRecord(ts, protocol, ip_to_int(src), sport, _cached_ip(dst), dport, plen, isn)
    try:
        return _build(obj["ts"], obj["proto"], obj["src"], obj["sport"], obj["dst"],
                      obj["dport"], obj["plen"], isn)
    except KeyError as exc:
        raise MalformedRecord(f"missing field {exc.args[0]!r}") from None


def _parse_csv(line: str) -> AccessRecord:
    parts = [p.strip() for p in line.strip().split(",")]
    if len(parts) not in (7, 8):
        raise MalformedRecord(f"expected 7 or 8 CSV fields, got {len(parts)}")
    _protocol(parts[1].lower())
    isn = parts[7] if len(parts) == 8 and parts[7] != "" else None
    return _build(parts[0], parts[1].lower(), parts[2], parts[3], parts[4], parts[5], parts[6], isn)


_PARSERS = {RecordFormat.NDJSON: _parse_ndjson, RecordFormat.CSV: _parse_csv}


def parse_record(line: str, fmt: RecordFormat | str = RecordFormat.NDJSON) -> AccessRecord:
    return _PARSERS[RecordFormat(fmt)](line)


def guess_format(path) -> RecordFormat:
    name = str(path).lower().removesuffix(".gz")
    return RecordFormat.CSV if name.endswith(".csv") else RecordFormat.NDJSON


def _open_text(path):
    path = Path(path)
    if path.suffix == ".gz":
        return gzip.open(path, "rt", encoding="utf-8")
    return open(path, encoding="utf-8")


def read_records(paths, fmt: RecordFormat | str | None = None) -> Iterator[AccessRecord]:
    """Yield records from one or more files, skipping blank lines.

    Parse errors are re-raised with ``path:lineno`` prepended.
    """
    if isinstance(paths, (str, Path)):
        paths = [paths]
    for path in paths:
        parse = _PARSERS[RecordFormat(fmt) if fmt else guess_format(path)]
        with _open_text(path) as fh:
            for lineno, line in enumerate(fh, 1):
                if not line or line.isspace():
                    continue
                try:
                    yield parse(line)
                except InputError as exc:
                    raise type(exc)(f"{path}:{lineno}: {exc}") from None


def _clean_counts(counts: Mapping) -> dict[int, int]:
    out = {}
    for port, n in sorted(counts.items(), key=lambda kv: int(kv[0])):
        port = int(port)
        n = int(n)
        if not 0 <= port <= MAX_PORT:
            raise FieldOutOfRange(f"port {port} out of range")
        if n < 0:
            raise ValueError(f"negative count {n} for port {port}")
        if n:
            out[port] = n
    return out


@dataclass(frozen=True)
class DayDocument:
    day: date
    protocol: Protocol
    counts: Mapping[int, int] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "protocol", Protocol.parse(self.protocol))
        object.__setattr__(self, "counts", _clean_counts(self.counts))

    def total(self) -> int:
        return sum(self.counts.values())

    def get(self, port: int) -> int:
        return self.counts.get(port, 0)

    def __contains__(self, port) -> bool:
        return port in self.counts

    def __len__(self) -> int:
        return len(self.counts)

    def replace_counts(self, counts: Mapping[int, int]) -> "DayDocument":
        return DayDocument(self.day, self.protocol, counts)


@dataclass(frozen=True)
class Corpus:
    """Consecutive run of day documents for one protocol."""

    protocol: Protocol
    docs: tuple[DayDocument, ...]

    def __post_init__(self):
        object.__setattr__(self, "protocol", Protocol.parse(self.protocol))
        docs = tuple(self.docs)
        object.__setattr__(self, "docs", docs)
        for prev, cur in zip(docs, docs[1:]):
            if cur.day - prev.day != timedelta(days=1):
                raise ValueError(f"corpus days not consecutive: {prev.day} -> {cur.day}")
        for doc in docs:
            if doc.protocol is not self.protocol:
                raise ValueError(f"document {doc.day} is {doc.protocol.value}, corpus is {self.protocol.value}")

    @property
    def n_docs(self) -> int:
        return len(self.docs)

    def __len__(self) -> int:
        return len(self.docs)

    def __getitem__(self, index):
        return self.docs[index]

    @property
    def days(self) -> list[date]:
        return [d.day for d in self.docs]

    def df(self, port: int) -> int:
        return sum(1 for d in self.docs if port in d.counts)

    def df_counts(self) -> Counter:
        df = Counter()
        for doc in self.docs:
            df.update(doc.counts.keys())
        return df

    def total(self) -> int:
        return sum(d.total() for d in self.docs)

    def index_of(self, day: date) -> int:
        if not self.docs or not self.docs[0].day <= day <= self.docs[-1].day:
            raise KeyError(day)
        return (day - self.docs[0].day).days

    def window(self, end_index: int, size: int) -> "Corpus":
        """The ``size`` documents ending at ``end_index`` inclusive."""
        start = end_index - size + 1
        if start < 0 or end_index >= len(self.docs):
            raise IndexError(f"window [{start}, {end_index}] outside corpus of {len(self.docs)} days")
        return Corpus(self.protocol, self.docs[start:end_index + 1])

    def map_docs(self, fn) -> "Corpus":
        return Corpus(self.protocol, tuple(fn(d) for d in self.docs))

    def to_dict(self) -> dict:
        return {
            "protocol": self.protocol.value,
            "days": [
                {"day": d.day.isoformat(), "counts": {str(p): n for p, n in d.counts.items()}}
                for d in self.docs
            ],
        }

    @classmethod
    def from_dict(cls, obj: dict) -> "Corpus":
        proto = Protocol.parse(obj["protocol"])
        docs = tuple(
            DayDocument(date.fromisoformat(d["day"]), proto, {int(p): n for p, n in d["counts"].items()})
            for d in obj["days"]
        )
        return cls(proto, docs)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))

    @classmethod
    def load(cls, path) -> "Corpus":
        with open(path, encoding="utf-8") as fh:
            try:
                obj = json.load(fh)
            except ValueError as exc:
                raise MalformedRecord(f"{path}: invalid corpus JSON: {exc}") from None
        try:
            return cls.from_dict(obj)
        except (KeyError, TypeError, ValueError) as exc:
            raise MalformedRecord(f"{path}: invalid corpus file: {exc}") from None


@dataclass(frozen=True)
class HourlySeries:
    protocol: Protocol
    buckets: Mapping[tuple[date, int], Mapping[int, int]]

    def __post_init__(self):
        object.__setattr__(self, "protocol", Protocol.parse(self.protocol))
        clean = {}
        for (day, hour), counts in sorted(self.buckets.items()):
            if not 0 <= hour <= 23:
                raise ValueError(f"hour {hour} out of range")
            counts = _clean_counts(counts)
            if counts:
                clean[(day, hour)] = counts
        object.__setattr__(self, "buckets", clean)

    @property
    def days(self) -> list[date]:
        return sorted({day for day, _ in self.buckets})

    def hour_counts(self, day: date, hour: int) -> dict[int, int]:
        return dict(self.buckets.get((day, hour), {}))

    def day_counts(self, day: date) -> dict[int, int]:
        total = Counter()
        for hour in range(24):
            total.update(self.buckets.get((day, hour), {}))
        return dict(total)

    def port_series(self, port: int, days) -> list[tuple[date, int, int]]:
        return [(d, h, self.buckets.get((d, h), {}).get(port, 0)) for d in days for h in range(24)]


def date_span(first: date, last: date) -> list[date]:
    return [first + timedelta(days=i) for i in range((last - first).days + 1)]


def aggregate_daily(records: Iterable[AccessRecord], protocol) -> Corpus:
    protocol = Protocol.parse(protocol)
    per_day: dict[int, Counter] = defaultdict(Counter)
    for rec in records:
        if rec.protocol is protocol:
            per_day[rec.timestamp // SECONDS_PER_DAY][rec.dst_port] += 1
    if not per_day:
        raise EmptyInput(f"no {protocol.value} records")
    first, last = min(per_day), max(per_day)
    docs = tuple(
        DayDocument(_EPOCH_DAY + timedelta(days=k), protocol, per_day.get(k, {}))
        for k in range(first, last + 1)
    )
    return Corpus(protocol, docs)


def aggregate_hourly(records: Iterable[AccessRecord], protocol) -> HourlySeries:
    protocol = Protocol.parse(protocol)
    buckets: dict[int, Counter] = defaultdict(Counter)
    for rec in records:
        if rec.protocol is protocol:
            buckets[rec.timestamp // 3600][rec.dst_port] += 1
    if not buckets:
        raise EmptyInput(f"no {protocol.value} records")
    keyed = {}
    for hour_no, counts in buckets.items():
        day = _EPOCH_DAY + timedelta(days=hour_no // 24)
        keyed[(day, hour_no % 24)] = counts
    return HourlySeries(protocol, keyed)


def port_ratio_table(corpus: Corpus, top_k: int | None = None) -> list[tuple[int, float]]:
    """Share of all accesses in the corpus going to each port, largest first."""
    totals = Counter()
    for doc in corpus.docs:
        totals.update(doc.counts)
    grand = sum(totals.values())
    if not grand:
        raise EmptyCorpus("corpus has no accesses")
    table = sorted(((p, n / grand) for p, n in totals.items()), key=lambda pr: (-pr[1], pr[0]))
    return table if top_k is None else table[:top_k]


def summarize(corpus: Corpus) -> dict:
    """Days and packet totals, per month and overall."""
    months = Counter()
    for doc in corpus.docs:
        months[doc.day.strftime("%Y-%m")] += doc.total()
    return {
        "protocol": corpus.protocol.value,
        "days": corpus.n_docs,
        "first_day": corpus.docs[0].day.isoformat() if corpus.docs else None,
        "last_day": corpus.docs[-1].day.isoformat() if corpus.docs else None,
        "packets": corpus.total(),
        "packets_by_month": dict(sorted(months.items())),
    }
