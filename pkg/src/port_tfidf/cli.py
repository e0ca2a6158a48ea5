"""``port-tfidf`` command line.

Exit codes: 0 success, 1 internal fault, 2 bad input, 3 input was fine
but there is nothing to report (no samples, too few days, ...).
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from datetime import date
from pathlib import Path

from . import report
from .cleanse import AUTO, DEFAULT_STOP_PORTS, CleanseConfig, cleanse_corpus, resolve_threshold
from .corpus import Corpus, Protocol, aggregate_daily, aggregate_hourly, read_records, summarize
from .errors import EmptyInput, InputError, NoSamples, PortTfidfError
from .forensics import (
    detect_wave,
    isn_fingerprint,
    payload_distribution,
    source_heatmap,
    srcport_distribution,
)
from .scoring import ScoringConfig, port_history, sliding_scan
from .synth import ScenarioSpec, anomaly_labels, generate, paper_scenario

log = logging.getLogger("port_tfidf")

DEFAULTS = {
    "inputs": [],
    "format": None,
    "protocol": None,
    "out": ".",
    "corpus": None,
    "cleanse": {
        "stop_ports": sorted(DEFAULT_STOP_PORTS),
        "threshold": AUTO,
        "sweep_start": 1000,
        "histogram_bins": 40,
    },
    "scoring": {"window_days": 30, "top_k": 5, "idf_mode": "smoothed", "tf_mode": "linear"},
    "wave": {"port": None, "start": None, "end": None, "min_share": 0.8, "min_days": 3, "stop_ports": []},
    "synth": {"spec": None, "seed": None},
    "isn": {"port": None},
}

# flag name -> (section, key); section None means top level
FLAG_KEYS = {
    "inputs": (None, "inputs"),
    "format": (None, "format"),
    "proto": (None, "protocol"),
    "out": (None, "out"),
    "corpus": (None, "corpus"),
    "stop_ports": ("cleanse", "stop_ports"),
    "threshold": ("cleanse", "threshold"),
    "sweep_start": ("cleanse", "sweep_start"),
    "bins": ("cleanse", "histogram_bins"),
    "window": ("scoring", "window_days"),
    "top_k": ("scoring", "top_k"),
    "idf": ("scoring", "idf_mode"),
    "tf": ("scoring", "tf_mode"),
    "port": ("wave", "port"),
    "start": ("wave", "start"),
    "end": ("wave", "end"),
    "min_share": ("wave", "min_share"),
    "min_days": ("wave", "min_days"),
    "wave_stop_ports": ("wave", "stop_ports"),
    "spec": ("synth", "spec"),
    "seed": ("synth", "seed"),
    "isn_port": ("isn", "port"),
}


def port_list(text: str) -> list[int]:
    try:
        return sorted({int(p) for p in text.split(",") if p.strip()})
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad port list {text!r}") from None


def threshold_arg(text: str):
    if text.lower() == AUTO:
        return AUTO
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError("threshold must be 'auto' or a positive integer") from None
    if value < 1:
        raise argparse.ArgumentTypeError("threshold must be >= 1")
    return value


def load_config(args) -> dict:
    """Defaults, overlaid by the ``--config`` file, overlaid by flags."""
    cfg = json.loads(json.dumps(DEFAULTS))
    if args.config:
        try:
            with open(args.config, encoding="utf-8") as fh:
                file_cfg = json.load(fh)
        except ValueError as exc:
            raise InputError(f"{args.config}: invalid config JSON: {exc}") from None
        for key, value in file_cfg.items():
            if isinstance(value, dict) and isinstance(cfg.get(key), dict):
                cfg[key].update(value)
            else:
                cfg[key] = value
    for flag, (section, key) in FLAG_KEYS.items():
        value = getattr(args, flag, None)
        if value is None or value == []:
            continue
        if section is None:
            cfg[key] = value
        else:
            cfg[section][key] = value
    return cfg


def cleanse_config(cfg) -> CleanseConfig:
    c = cfg["cleanse"]
    return CleanseConfig(stop_ports=frozenset(c["stop_ports"]), threshold=c["threshold"],
                         sweep_start=int(c["sweep_start"]), histogram_bins=int(c["histogram_bins"]))


def scoring_config(cfg) -> ScoringConfig:
    s = cfg["scoring"]
    return ScoringConfig(window_days=int(s["window_days"]), top_k=int(s["top_k"]),
                         idf_mode=s["idf_mode"], tf_mode=s["tf_mode"])


def echo_config(out: Path, command: str, cfg: dict) -> None:
    report.write_json(out / f"{command}_config.json", {"command": command, **cfg})


def _require_file(path, what):
    if not path:
        raise InputError(f"no {what} given")
    if not Path(path).is_file():
        raise InputError(f"{what} not found: {path}")


def _load_corpus(cfg) -> Corpus:
    _require_file(cfg["corpus"], "corpus file")
    return Corpus.load(cfg["corpus"])


def _inputs(cfg) -> list[str]:
    if not cfg["inputs"]:
        raise InputError("no input files given")
    for path in cfg["inputs"]:
        _require_file(path, "input file")
    return list(cfg["inputs"])


def cmd_ingest(cfg) -> int:
    out = Path(cfg["out"])
    proto = Protocol.parse(cfg["protocol"] or "tcp")
    corpus = aggregate_daily(read_records(_inputs(cfg), cfg["format"]), proto)
    path = report.atomic_write(out / f"corpus-{proto.value}.json", corpus.to_json() + "\n")
    summary = summarize(corpus)
    report.write_json(out / f"summary-{proto.value}.json", summary)
    echo_config(out, "ingest", cfg)
    print(f"{path}: {summary['days']} days, {summary['packets']} {proto.value} packets "
          f"({summary['first_day']} .. {summary['last_day']})")
    return 0


def cmd_sweep(cfg) -> int:
    out = Path(cfg["out"])
    corpus = _load_corpus(cfg)
    ccfg = cleanse_config(cfg)
    threshold, trace = resolve_threshold(corpus, CleanseConfig(
        stop_ports=ccfg.stop_ports, threshold=AUTO, sweep_start=ccfg.sweep_start,
        histogram_bins=ccfg.histogram_bins))
    report.write_sweep(out, trace, threshold)
    echo_config(out, "sweep", cfg)
    for h in trace:
        print(f"threshold {h.threshold:>8}: {h.top_bin_count} ports at max IDF, {h.distinct_ports} ports")
    print(f"selected threshold: {threshold}")
    return 0


def cmd_scan(cfg) -> int:
    out = Path(cfg["out"])
    corpus = _load_corpus(cfg)
    ccfg = cleanse_config(cfg)
    scfg = scoring_config(cfg)
    threshold, trace = resolve_threshold(corpus, ccfg)
    if trace:
        report.write_sweep(out, trace, threshold)
    cleansed = cleanse_corpus(corpus, CleanseConfig(stop_ports=ccfg.stop_ports, threshold=threshold))
    rankings = sliding_scan(cleansed, scfg)
    report.write_rankings(out, rankings, scfg)
    flagged = sorted({p for r in rankings for p in r.ports})
    for port in flagged:
        report.write_history(out / "history" / f"port_{port}.csv", port_history(corpus, port))
    echo_config(out, "scan", {**cfg, "resolved_threshold": threshold})
    print(f"threshold {threshold}; {len(rankings)} days ranked; {len(flagged)} ports ever in top {scfg.top_k}")
    for r in rankings:
        print(f"{r.day}  " + " ".join(f"{e.port}:{e.tfidf:.4f}" for e in r.entries))
    return 0


def _parse_day(value):
    return value if value is None or isinstance(value, date) else date.fromisoformat(value)


def cmd_wave(cfg) -> int:
    out = Path(cfg["out"])
    w = cfg["wave"]
    proto = Protocol.parse(cfg["protocol"] or "udp")
    records = [r for r in read_records(_inputs(cfg), cfg["format"]) if r.protocol is proto]
    if not records:
        raise EmptyInput(f"no {proto.value} records")
    hourly = aggregate_hourly(records, proto)
    start, end = _parse_day(w["start"]), _parse_day(w["end"])
    if start is not None or end is not None:
        date_range = (start or hourly.days[0], end or hourly.days[-1])
    else:
        date_range = None
    wave = detect_wave(hourly, date_range, float(w["min_share"]), int(w["min_days"]),
                       frozenset(w["stop_ports"]))
    port = w["port"]
    if port is None:
        if wave.rotation_detected:
            port = wave.rotation_ports[0]
        else:
            port = next((s.dominant_port for s in wave.segments if s.dominant_port is not None), None)
    if port is None:
        raise NoSamples("no port to analyse")
    port = int(port)
    payload = payload_distribution(records, port, date_range)
    srcports, high_fraction = srcport_distribution(records, port, date_range)
    heatmap = source_heatmap(records, port, date_range)

    days = [s.day for s in wave.segments]
    dominant = sorted({s.dominant_port for s in wave.segments if s.dominant_port is not None})
    report.write_csv(out / "hourly.csv", ["day", "hour", "port", "count"],
                     ((d.isoformat(), h, p, hourly.buckets.get((d, h), {}).get(p, 0))
                      for p in dominant for d in days for h in range(24)))
    report.write_distribution(out / f"payload_{port}.csv", payload)
    report.write_distribution(out / f"srcport_{port}.csv", srcports)
    report.write_heatmap_csv(out / f"heatmap_{port}.csv", heatmap)
    report.write_heatmap_svg(out / f"heatmap_{port}.svg", heatmap)
    report.write_json(out / "wave_report.json", {
        **wave.to_dict(),
        "port": port,
        "payload": {"min": payload.min, "max": payload.max, "total": payload.total},
        "srcport": {"min": srcports.min, "max": srcports.max, "total": srcports.total,
                    "high_fraction": high_fraction},
        "heatmap": {"distinct_sources": heatmap.total, "blocks": len(heatmap.block_counts)},
    })
    echo_config(out, "wave", cfg)
    print(f"rotation detected: {wave.rotation_detected} ({len(wave.segments)} days examined)")
    for seg in wave.segments:
        if seg.share >= wave.min_share:
            print(f"{seg.day}  port {seg.dominant_port}  share {seg.share:.3f}")
    print(f"port {port}: payload {payload.min}-{payload.max} bytes, "
          f"{high_fraction:.3f} of source ports >= 50000, {heatmap.total} distinct sources")
    return 0


def cmd_isn(cfg) -> int:
    out = Path(cfg["out"])
    port = cfg["isn"]["port"]
    if port is None:
        raise InputError("--port is required")
    rep = isn_fingerprint(read_records(_inputs(cfg), cfg["format"]), int(port))
    report.write_json(out / f"isn_{rep.port}.json", rep.to_dict())
    print(f"port {rep.port}: {rep.matched}/{rep.total_syn} SYNs carry ISN == destination address "
          f"({rep.fraction:.4f})")
    return 0


def cmd_synth(cfg) -> int:
    out = Path(cfg["out"])
    s = cfg["synth"]
    spec = ScenarioSpec.load(s["spec"]) if s["spec"] else paper_scenario()
    if s["seed"] is not None:
        spec.seed = int(s["seed"])
    traffic = generate(spec)
    report.atomic_stream(out / "records.ndjson", traffic.write_ndjson)
    report.atomic_write(out / "labels.json", traffic.labels_json() + "\n")
    report.atomic_write(out / "scenario.json", spec.to_json() + "\n")
    echo_config(out, "synth", cfg)
    print(f"{len(traffic)} records, {len(anomaly_labels(traffic.labels))} planted anomalies -> {out}")
    return 0


COMMANDS = {
    "ingest": cmd_ingest,
    "sweep": cmd_sweep,
    "scan": cmd_scan,
    "wave": cmd_wave,
    "isn": cmd_isn,
    "synth": cmd_synth,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="port-tfidf",
                                     description="TF-IDF based detection of unusual port access in darknet traffic.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON config file; flags override its values")
    common.add_argument("--out", help="output directory (default: current directory)")

    records = argparse.ArgumentParser(add_help=False)
    records.add_argument("inputs", nargs="*", help="record files (.ndjson/.jsonl/.csv, optionally .gz)")
    records.add_argument("--format", choices=["ndjson", "csv"], help="record format (default: by extension)")
    records.add_argument("--proto", choices=["tcp", "udp"])

    cleanse = argparse.ArgumentParser(add_help=False)
    cleanse.add_argument("--corpus", help="corpus JSON written by 'ingest'")
    cleanse.add_argument("--stop-ports", type=port_list, help="comma-separated stop ports")
    cleanse.add_argument("--sweep-start", type=int, help="first threshold of the sweep (default 1000)")
    cleanse.add_argument("--bins", type=int, help="IDF histogram bins (default 40)")

    sub.add_parser("ingest", parents=[common, records], help="aggregate records into a daily corpus")
    sub.add_parser("sweep", parents=[common, cleanse], help="auto-select the noise threshold")

    scan = sub.add_parser("scan", parents=[common, cleanse], help="sliding-window TF-IDF ranking")
    scan.add_argument("--threshold", type=threshold_arg, help="'auto' or accesses/day")
    scan.add_argument("--window", type=int, help="window length in days (default 30)")
    scan.add_argument("--top-k", type=int, help="ports reported per day (default 5)")
    scan.add_argument("--idf", choices=["smoothed", "common"])
    scan.add_argument("--tf", choices=["linear", "log"])

    wave = sub.add_parser("wave", parents=[common, records], help="daily port-rotation forensics")
    wave.add_argument("--port", type=int, help="port to characterise (default: auto)")
    wave.add_argument("--start", type=date.fromisoformat, help="first UTC day, YYYY-MM-DD")
    wave.add_argument("--end", type=date.fromisoformat, help="last UTC day, YYYY-MM-DD")
    wave.add_argument("--min-share", type=float)
    wave.add_argument("--min-days", type=int)
    wave.add_argument("--stop-ports", dest="wave_stop_ports", type=port_list)

    isn = sub.add_parser("isn", parents=[common, records], help="ISN == destination address fingerprint")
    isn.add_argument("--port", dest="isn_port", type=int, required=True)

    synth = sub.add_parser("synth", parents=[common], help="generate a synthetic scenario")
    synth.add_argument("--spec", help="scenario JSON (default: built-in 92-day scenario)")
    synth.add_argument("--seed", type=int)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = load_config(args)
        if args.command == "wave" and cfg["wave"]["start"] is not None:
            cfg["wave"]["start"] = str(cfg["wave"]["start"])
        if args.command == "wave" and cfg["wave"]["end"] is not None:
            cfg["wave"]["end"] = str(cfg["wave"]["end"])
        return COMMANDS[args.command](cfg)
    except PortTfidfError as exc:
        print(f"port-tfidf {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        if exc.exit_code == 3 and args.command in ("sweep", "scan"):
            print("hint: lower --sweep-start / --threshold or use a shorter --window", file=sys.stderr)
        return exc.exit_code
    except (OSError, ValueError) as exc:
        print(f"port-tfidf {args.command}: {exc}", file=sys.stderr)
        return 2
    except Exception:
        log.exception("internal error")
        return 1


if __name__ == "__main__":
    sys.exit(main())
