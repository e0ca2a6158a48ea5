"""Seeded synthetic darknet traffic with ground-truth labels.

Each event draws from its own counter-based generator keyed by
``(seed, event index, day index)``, so any (event, day) slice can be
regenerated on its own and the merged output does not depend on the order
slices are produced in.  Records are merged by timestamp with a stable
sort, which makes the output byte-for-byte reproducible.
"""

from __future__ import annotations

import ipaddress
import json
import math
from dataclasses import asdict, dataclass, field, fields
from datetime import date, timedelta
from typing import Iterator

import numpy as np

from .corpus import AccessRecord, Protocol, date_span, day_start, int_to_ip
from .errors import InvalidSpec

# Reference shares of the busiest TCP ports; 443 is a stop port added with a small share.
TOP_TCP_SHARES = {445: 0.101, 23: 0.071, 1433: 0.026, 22: 0.022, 21: 0.019, 80: 0.015,
                  1723: 0.010, 5555: 0.009, 81: 0.008, 8080: 0.008, 443: 0.007}
COMMON_UDP = {53: 0.08, 123: 0.06, 1900: 0.05, 5060: 0.05, 137: 0.04, 161: 0.03,
              389: 0.03, 11211: 0.02}

# First octets excluded when drawing spoofed unicast sources.
RESERVED_FIRST_OCTETS = frozenset({0, 10, 127} | set(range(224, 256)))
UNICAST_FIRST_OCTETS = np.array([o for o in range(256) if o not in RESERVED_FIRST_OCTETS], dtype=np.int64)

ANOMALY_TYPES = ("burst", "correlated_pair", "udp_wave")
_SETUP = 1 << 32
_PROTO_CODE = {Protocol.TCP: 0, Protocol.UDP: 1}
_CODE_PROTO = {0: Protocol.TCP, 1: Protocol.UDP}


def default_hourly_profile() -> list[float]:
    """Day-night sinusoid peaking at 15:00 UTC."""
    return [round(1.0 + 0.6 * math.cos(2 * math.pi * (h - 15) / 24), 6) for h in range(24)]


@dataclass
class Background:
    protocol: str = "tcp"
    daily_count_range: tuple[int, int] = (12000, 14000)
    popular_port_bias: dict[int, float] = field(default_factory=lambda: dict(TOP_TCP_SHARES))
    ports_per_day: int = 1500
    tail_pool_size: int = 1500
    tail_zipf: float = 0.3
    spikes_per_day: int = 3
    spike_count_range: tuple[int, int] = (40, 60)
    type: str = field(default="background", init=False)


@dataclass
class Burst:
    port: int
    start_day: date
    ramp_days: int = 5
    peak_daily_count: int = 4000
    decay_days: int = 50
    isn_fingerprint_fraction: float = 0.0
    source_pool: int = 3000
    protocol: str = "tcp"
    type: str = field(default="burst", init=False)

    def daily_counts(self) -> list[int]:
        """Quadratic ramp up to the peak, then linear decay."""
        ramp = [round(self.peak_daily_count * ((k + 1) / self.ramp_days) ** 2) for k in range(self.ramp_days)]
        decay = [round(self.peak_daily_count * (1 - (j + 1) / (self.decay_days + 1)))
                 for j in range(self.decay_days)]
        return ramp + decay


@dataclass
class CorrelatedPair:
    primary_port: int
    shadow_port: int
    start_day: date
    end_day: date
    daily_count: int = 50
    volume_ratio: float = 0.5
    ramp_days: int = 4
    source_pool: int = 800
    protocol: str = "tcp"
    type: str = field(default="correlated_pair", init=False)

    def daily_counts(self) -> list[tuple[int, int]]:
        n = (self.end_day - self.start_day).days + 1
        out = []
        for k in range(n):
            primary = round(self.daily_count * min(1.0, (k + 1) / self.ramp_days))
            out.append((primary, round(primary * self.volume_ratio)))
        return out


@dataclass
class UdpWave:
    port_schedule: list[tuple[date, int]]
    daily_count: int = 30000
    hourly_profile: list[float] = field(default_factory=default_hourly_profile)
    payload_range: tuple[int, int] = (65, 226)
    srcport_min: int = 50000
    srcport_high_fraction: float = 0.95
    spoofed_sources: bool = True
    source_pool: int = 5000
    type: str = field(default="udp_wave", init=False)
    protocol: str = field(default="udp", init=False)

    def hourly_counts(self) -> list[int]:
        return allocate(self.daily_count, self.hourly_profile)


EVENT_TYPES = {cls.__dataclass_fields__["type"].default: cls
               for cls in (Background, Burst, CorrelatedPair, UdpWave)}


@dataclass
class ScenarioSpec:
    seed: int
    start: date
    end: date
    events: list = field(default_factory=list)
    telescope: str = "192.0.2.0/24"

    @property
    def days(self) -> list[date]:
        return date_span(self.start, self.end)

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "start": self.start.isoformat(),
            "end": self.end.isoformat(),
            "telescope": self.telescope,
            "events": [_event_to_dict(e) for e in self.events],
        }

    @classmethod
    def from_dict(cls, obj: dict) -> "ScenarioSpec":
        try:
            return cls(
                seed=int(obj["seed"]),
                start=date.fromisoformat(obj["start"]),
                end=date.fromisoformat(obj["end"]),
                telescope=obj.get("telescope", "192.0.2.0/24"),
                events=[_event_from_dict(e) for e in obj.get("events", [])],
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidSpec(f"bad scenario spec: {exc}") from None

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def load(cls, path) -> "ScenarioSpec":
        with open(path, encoding="utf-8") as fh:
            try:
                return cls.from_dict(json.load(fh))
            except ValueError as exc:
                raise InvalidSpec(f"{path}: {exc}") from None


def _jsonable(value):
    if isinstance(value, date):
        return value.isoformat()
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


def _event_to_dict(event) -> dict:
    return {k: _jsonable(v) for k, v in asdict(event).items()}


def _event_from_dict(obj: dict):
    obj = dict(obj)
    kind = obj.pop("type", None)
    if kind not in EVENT_TYPES:
        raise InvalidSpec(f"unknown event type {kind!r}")
    cls = EVENT_TYPES[kind]
    names = {f.name for f in fields(cls) if f.init}
    unknown = set(obj) - names - {"protocol"}
    if unknown:
        raise InvalidSpec(f"{kind}: unknown fields {sorted(unknown)}")
    if cls is UdpWave:
        obj.pop("protocol", None)
    for key in ("start_day", "end_day"):
        if key in obj:
            obj[key] = date.fromisoformat(obj[key])
    if "port_schedule" in obj:
        obj["port_schedule"] = [(date.fromisoformat(d), int(p)) for d, p in obj["port_schedule"]]
    if "popular_port_bias" in obj:
        obj["popular_port_bias"] = {int(p): float(r) for p, r in obj["popular_port_bias"].items()}
    for key in ("daily_count_range", "spike_count_range", "payload_range"):
        if key in obj:
            obj[key] = tuple(obj[key])
    return cls(**obj)


def allocate(total: int, weights) -> list[int]:
    """Split ``total`` into integer parts proportional to ``weights``.

    Largest-remainder rounding; ties go to the earlier index.
    """
    w = [float(x) for x in weights]
    s = sum(w)
    raw = [total * x / s for x in w]
    parts = [math.floor(r) for r in raw]
    short = total - sum(parts)
    order = sorted(range(len(w)), key=lambda i: (-(raw[i] - parts[i]), i))
    for i in order[:short]:
        parts[i] += 1
    return parts


def _split_exact(counts: list[int], fraction: float) -> list[int]:
    """Per-day sizes of a sub-population holding ``fraction`` of the running total."""
    out, cum, given = [], 0, 0
    for n in counts:
        cum += n
        target = round(fraction * cum)
        out.append(target - given)
        given = target
    return out


def _event_ports(event) -> dict[int, Protocol]:
    if isinstance(event, Burst):
        return {event.port: Protocol.parse(event.protocol)}
    if isinstance(event, CorrelatedPair):
        proto = Protocol.parse(event.protocol)
        return {event.primary_port: proto, event.shadow_port: proto}
    if isinstance(event, UdpWave):
        return {p: Protocol.UDP for _, p in event.port_schedule}
    return {}


def _event_days(event) -> set[date]:
    if isinstance(event, Burst):
        return {event.start_day + timedelta(days=k) for k in range(event.ramp_days + event.decay_days)}
    if isinstance(event, CorrelatedPair):
        return set(date_span(event.start_day, event.end_day))
    if isinstance(event, UdpWave):
        return {d for d, _ in event.port_schedule}
    return set()


def _fail(msg):
    raise InvalidSpec(msg)


def validate(spec: ScenarioSpec) -> None:
    if spec.start > spec.end:
        _fail("scenario start is after end")
    if not 0 <= spec.seed < 2 ** 64:
        _fail("seed must be a 64-bit unsigned integer")
    try:
        ipaddress.IPv4Network(spec.telescope)
    except ValueError as exc:
        _fail(f"bad telescope prefix: {exc}")
    span = set(spec.days)
    claimed: dict[tuple[Protocol, int], list[set]] = {}
    popular: set[tuple[Protocol, int]] = set()
    for i, ev in enumerate(spec.events):
        where = f"event {i} ({ev.type})"
        if isinstance(ev, Background):
            proto = Protocol.parse(ev.protocol)
            lo, hi = ev.daily_count_range
            if not 0 <= lo <= hi:
                _fail(f"{where}: bad daily_count_range")
            if any(r < 0 for r in ev.popular_port_bias.values()) or sum(ev.popular_port_bias.values()) > 1:
                _fail(f"{where}: popular_port_bias must be non-negative and sum to <= 1")
            if not 0 <= ev.ports_per_day <= ev.tail_pool_size:
                _fail(f"{where}: ports_per_day must be within the tail pool")
            slo, shi = ev.spike_count_range
            if not 0 <= slo <= shi or ev.spikes_per_day < 0:
                _fail(f"{where}: bad spike settings")
            popular |= {(proto, p) for p in ev.popular_port_bias}
            continue
        if isinstance(ev, Burst):
            if ev.ramp_days < 1 or ev.decay_days < 0 or ev.peak_daily_count < 0:
                _fail(f"{where}: bad burst shape")
            if not 0 <= ev.isn_fingerprint_fraction <= 1:
                _fail(f"{where}: isn_fingerprint_fraction must be in [0, 1]")
            if ev.isn_fingerprint_fraction and Protocol.parse(ev.protocol) is not Protocol.TCP:
                _fail(f"{where}: ISN fingerprint needs TCP")
        elif isinstance(ev, CorrelatedPair):
            if not 0 < ev.volume_ratio <= 1:
                _fail(f"{where}: volume_ratio must be in (0, 1]")
            if ev.primary_port == ev.shadow_port or ev.start_day > ev.end_day:
                _fail(f"{where}: bad correlated pair")
            if ev.daily_count < 0 or ev.ramp_days < 1:
                _fail(f"{where}: bad correlated pair volume")
        elif isinstance(ev, UdpWave):
            prof = ev.hourly_profile
            if len(prof) != 24 or any(w < 0 for w in prof) or sum(prof) <= 0:
                _fail(f"{where}: hourly_profile needs 24 non-negative weights with positive sum")
            lo, hi = ev.payload_range
            if not 0 <= lo <= hi:
                _fail(f"{where}: bad payload_range")
            if not 1 <= ev.srcport_min <= 65535 or not 0 <= ev.srcport_high_fraction <= 1:
                _fail(f"{where}: bad source-port settings")
            if ev.daily_count < 0:
                _fail(f"{where}: negative daily_count")
            sched_days = [d for d, _ in ev.port_schedule]
            if len(set(sched_days)) != len(sched_days):
                _fail(f"{where}: two ports scheduled on one day")
        else:
            _fail(f"{where}: unknown event")
        days = _event_days(ev)
        if not days <= span:
            _fail(f"{where}: days outside scenario range")
        for port, proto in _event_ports(ev).items():
            if not 0 <= port <= 65535:
                _fail(f"{where}: port {port} out of range")
            for other in claimed.get((proto, port), []):
                if other & days:
                    _fail(f"{where}: port {port}/{proto.value} overlaps another event")
            claimed.setdefault((proto, port), []).append(days)
    clash = popular & set(claimed)
    if clash:
        _fail(f"event ports collide with background popular ports: {sorted(p for _, p in clash)}")


# Doubling from here crosses the scenario's noise floor in four steps.
PAPER_SWEEP_START = 4


def paper_scenario(seed: int = 20200701) -> ScenarioSpec:
    """92-day stand-in for the July to September 2020 telescope capture."""
    start = date(2020, 7, 1)
    wave_ports = [58246, 51455, 60793, 53313, 62091]
    return ScenarioSpec(
        seed=seed,
        start=start,
        end=date(2020, 9, 30),
        events=[
            Background(protocol="tcp"),
            Background(protocol="udp", daily_count_range=(2500, 3000),
                       popular_port_bias=dict(COMMON_UDP), ports_per_day=120,
                       tail_pool_size=400, spikes_per_day=2, spike_count_range=(20, 80)),
            Burst(port=9530, start_day=date(2020, 7, 30), ramp_days=5, peak_daily_count=4000,
                  decay_days=50, isn_fingerprint_fraction=0.95),
            CorrelatedPair(primary_port=8291, shadow_port=8728, start_day=date(2020, 9, 8),
                           end_day=date(2020, 9, 30), daily_count=30, volume_ratio=0.5),
            UdpWave(port_schedule=[(date(2020, 8, 1) + timedelta(days=i), p)
                                   for i, p in enumerate(wave_ports)]),
        ],
    )


class _Chunk:
    __slots__ = ("ts", "proto", "src", "sport", "dst", "dport", "plen", "isn")

    def __init__(self, n, proto):
        self.ts = np.zeros(n, dtype=np.int64)
        self.proto = np.full(n, _PROTO_CODE[proto], dtype=np.int8)
        self.src = np.zeros(n, dtype=np.int64)
        self.sport = np.zeros(n, dtype=np.int64)
        self.dst = np.zeros(n, dtype=np.int64)
        self.dport = np.zeros(n, dtype=np.int64)
        self.plen = np.zeros(n, dtype=np.int64)
        self.isn = np.full(n, -1, dtype=np.int64)


def _rng(seed: int, event: int, day: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, event, day])))


def _unicast(rng, n) -> np.ndarray:
    first = rng.choice(UNICAST_FIRST_OCTETS, size=n)
    return (first << 24) | rng.integers(0, 1 << 24, size=n)


class _Telescope:
    def __init__(self, prefix: str):
        net = ipaddress.IPv4Network(prefix)
        self.base = int(net.network_address)
        self.size = net.num_addresses

    def draw(self, rng, n):
        return self.base + rng.integers(0, self.size, size=n)


def _fill_common(chunk, rng, proto, telescope, day_ts):
    n = len(chunk.ts)
    chunk.dst[:] = telescope.draw(rng, n)
    chunk.sport[:] = rng.integers(1024, 65536, size=n)
    if proto is Protocol.TCP:
        isn = rng.integers(0, 1 << 32, size=n)
        # a random ISN must not accidentally carry the fingerprint
        isn[isn == chunk.dst] ^= 1
        chunk.isn[:] = isn
    else:
        chunk.plen[:] = rng.integers(0, 513, size=n)


def _background_day(ev: Background, rng, pool, pool_w, telescope, day_ts):
    proto = Protocol.parse(ev.protocol)
    lo, hi = ev.daily_count_range
    total = int(rng.integers(lo, hi + 1))
    pop_ports = list(ev.popular_port_bias)
    shares = [ev.popular_port_bias[p] for p in pop_ports]
    counts = rng.multinomial(total, shares + [max(0.0, 1 - sum(shares))])
    ports = [np.full(c, p, dtype=np.int64) for p, c in zip(pop_ports, counts[:-1])]
    tail = int(counts[-1])
    if ev.ports_per_day and tail:
        active = rng.choice(len(pool), size=ev.ports_per_day, replace=False, p=pool_w)
        w = pool_w[active] / pool_w[active].sum()
        tail_counts = rng.multinomial(tail, w)
        ports += [np.full(c, pool[i], dtype=np.int64) for i, c in zip(active, tail_counts)]
    if ev.spikes_per_day:
        slo, shi = ev.spike_count_range
        for i in rng.integers(0, len(pool), size=ev.spikes_per_day):
            ports.append(np.full(int(rng.integers(slo, shi + 1)), pool[i], dtype=np.int64))
    dport = np.concatenate(ports) if ports else np.zeros(0, dtype=np.int64)
    chunk = _Chunk(len(dport), proto)
    chunk.dport[:] = dport
    chunk.ts[:] = day_ts + rng.integers(0, 86400, size=len(dport))
    chunk.src[:] = _unicast(rng, len(dport))
    _fill_common(chunk, rng, proto, telescope, day_ts)
    return chunk


def _tail_pool(ev: Background, rng, reserved: set[int]):
    candidates = np.array([p for p in range(1, 65536) if p not in reserved], dtype=np.int64)
    pool = rng.choice(candidates, size=ev.tail_pool_size, replace=False)
    w = 1.0 / np.arange(1, ev.tail_pool_size + 1) ** ev.tail_zipf
    return pool, w / w.sum()


def _sources(rng, pool_size):
    return _unicast(rng, pool_size)


def _targeted_chunk(n, port, proto, rng, telescope, day_ts, sources):
    chunk = _Chunk(n, proto)
    chunk.dport[:] = port
    chunk.ts[:] = day_ts + rng.integers(0, 86400, size=n)
    chunk.src[:] = rng.choice(sources, size=n)
    _fill_common(chunk, rng, proto, telescope, day_ts)
    return chunk


@dataclass
class SyntheticTraffic:
    """Generated records (column arrays, timestamp order) and their labels."""

    columns: dict[str, np.ndarray]
    labels: list[dict]

    def __len__(self) -> int:
        return len(self.columns["ts"])

    def iter_lines(self) -> Iterator[str]:
        c = self.columns
        names = {code: p.value for code, p in _CODE_PROTO.items()}
        ip_cache: dict[int, str] = {}

        def ip(v):
            s = ip_cache.get(v)
            if s is None:
                s = ip_cache[v] = int_to_ip(v)
            return s

        for ts, pr, src, sport, dst, dport, plen, isn in zip(
                c["ts"].tolist(), c["proto"].tolist(), c["src"].tolist(), c["sport"].tolist(),
                c["dst"].tolist(), c["dport"].tolist(), c["plen"].tolist(), c["isn"].tolist()):
            line = (f'{{"ts":{ts},"proto":"{names[pr]}","src":"{int_to_ip(src)}","sport":{sport},'
                    f'"dst":"{ip(dst)}","dport":{dport},"plen":{plen}')
            yield line + (f',"isn":{isn}}}' if isn >= 0 else "}")

    def records(self) -> Iterator[AccessRecord]:
        c = self.columns
        for ts, pr, src, sport, dst, dport, plen, isn in zip(
                c["ts"].tolist(), c["proto"].tolist(), c["src"].tolist(), c["sport"].tolist(),
                c["dst"].tolist(), c["dport"].tolist(), c["plen"].tolist(), c["isn"].tolist()):
            yield AccessRecord(ts, _CODE_PROTO[pr], src, sport, dst, dport, plen, isn if isn >= 0 else None)

    def write_ndjson(self, fh) -> int:
        n = 0
        for line in self.iter_lines():
            fh.write(line)
            fh.write("\n")
            n += 1
        return n

    def labels_json(self) -> str:
        return json.dumps(self.labels, indent=2)


def anomaly_labels(labels: list[dict]) -> list[dict]:
    return [lab for lab in labels if lab["type"] in ANOMALY_TYPES]


def generate(spec: ScenarioSpec) -> SyntheticTraffic:
    validate(spec)
    telescope = _Telescope(spec.telescope)
    days = spec.days
    day_index = {d: i for i, d in enumerate(days)}
    reserved = {p for ev in spec.events for p in _event_ports(ev)}
    chunks: list[_Chunk] = []
    labels: list[dict] = []

    for e, ev in enumerate(spec.events):
        setup = _rng(spec.seed, e, _SETUP)
        if isinstance(ev, Background):
            pool, pool_w = _tail_pool(ev, setup, reserved | set(ev.popular_port_bias))
            n = 0
            for i, d in enumerate(days):
                ch = _background_day(ev, _rng(spec.seed, e, i), pool, pool_w, telescope, day_start(d))
                chunks.append(ch)
                n += len(ch.ts)
            labels.append({"type": "background", "protocol": Protocol.parse(ev.protocol).value,
                           "records": n})

        elif isinstance(ev, Burst):
            proto = Protocol.parse(ev.protocol)
            sources = _sources(setup, ev.source_pool)
            counts = ev.daily_counts()
            fingerprinted = _split_exact(counts, ev.isn_fingerprint_fraction)
            burst_days = [ev.start_day + timedelta(days=k) for k in range(len(counts))]
            for d, n, m in zip(burst_days, counts, fingerprinted):
                rng = _rng(spec.seed, e, day_index[d])
                ch = _targeted_chunk(n, ev.port, proto, rng, telescope, day_start(d), sources)
                if m:
                    idx = rng.choice(n, size=m, replace=False)
                    ch.isn[idx] = ch.dst[idx]
                chunks.append(ch)
            growth = [c - p for c, p in zip(counts, [0] + counts[:-1])]
            labels.append({
                "type": "burst", "protocol": proto.value, "port": ev.port,
                "days": [d.isoformat() for d in burst_days], "daily_counts": counts,
                "onset_day": burst_days[0].isoformat(),
                "peak_growth_day": burst_days[growth.index(max(growth))].isoformat(),
                "isn_fingerprint_fraction": ev.isn_fingerprint_fraction,
                "isn_matched": sum(fingerprinted), "records": sum(counts),
            })

        elif isinstance(ev, CorrelatedPair):
            proto = Protocol.parse(ev.protocol)
            sources = _sources(setup, ev.source_pool)
            counts = ev.daily_counts()
            pair_days = date_span(ev.start_day, ev.end_day)
            for d, (n1, n2) in zip(pair_days, counts):
                rng = _rng(spec.seed, e, day_index[d])
                chunks.append(_targeted_chunk(n1, ev.primary_port, proto, rng, telescope, day_start(d), sources))
                chunks.append(_targeted_chunk(n2, ev.shadow_port, proto, rng, telescope, day_start(d), sources))
            labels.append({
                "type": "correlated_pair", "protocol": proto.value, "port": ev.primary_port,
                "shadow_port": ev.shadow_port, "volume_ratio": ev.volume_ratio,
                "days": [d.isoformat() for d in pair_days],
                "daily_counts": [a for a, _ in counts], "shadow_daily_counts": [b for _, b in counts],
                "records": sum(a + b for a, b in counts),
            })

        elif isinstance(ev, UdpWave):
            sources = None if ev.spoofed_sources else _sources(setup, ev.source_pool)
            hours = ev.hourly_counts()
            n_day = sum(hours)
            high = _split_exact([n_day] * len(ev.port_schedule), ev.srcport_high_fraction)
            lo, hi = ev.payload_range
            for (d, port), n_high in zip(ev.port_schedule, high):
                rng = _rng(spec.seed, e, day_index[d])
                ch = _Chunk(n_day, Protocol.UDP)
                ch.dport[:] = port
                hour_of = np.repeat(np.arange(24, dtype=np.int64), hours)
                ch.ts[:] = day_start(d) + hour_of * 3600 + rng.integers(0, 3600, size=n_day)
                ch.src[:] = _unicast(rng, n_day) if sources is None else rng.choice(sources, size=n_day)
                ch.dst[:] = telescope.draw(rng, n_day)
                ch.plen[:] = rng.integers(lo, hi + 1, size=n_day)
                sport = np.empty(n_day, dtype=np.int64)
                sport[:n_high] = rng.integers(ev.srcport_min, 65536, size=n_high)
                sport[n_high:] = rng.integers(1024, max(1025, ev.srcport_min), size=n_day - n_high)
                ch.sport[:] = rng.permutation(sport)
                chunks.append(ch)
            labels.append({
                "type": "udp_wave", "protocol": "udp",
                "days": [d.isoformat() for d, _ in ev.port_schedule],
                "ports": [p for _, p in ev.port_schedule],
                "daily_counts": [n_day] * len(ev.port_schedule), "hourly_counts": hours,
                "payload_range": list(ev.payload_range), "srcport_min": ev.srcport_min,
                "srcport_high": sum(high), "records": n_day * len(ev.port_schedule),
            })

    columns = {name: np.concatenate([getattr(c, name) for c in chunks]) if chunks else np.zeros(0, np.int64)
               for name in _Chunk.__slots__}
    order = np.argsort(columns["ts"], kind="stable")
    columns = {k: v[order] for k, v in columns.items()}
    return SyntheticTraffic(columns, labels)
