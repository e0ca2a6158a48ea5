"""Plot-ready output files: CSV, JSON and a small SVG heatmap.

All writers go through ``atomic_stream`` (temp file in the target
directory, then rename) so a crashed run never leaves half a file.
"""

from __future__ import annotations

import csv
import io
import json
import os
import tempfile
from pathlib import Path

from .forensics import hilbert_xy


def atomic_stream(path, write_fn) -> Path:
    """Create ``path`` atomically from whatever ``write_fn(fh)`` writes."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            write_fn(fh)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def atomic_write(path, text: str) -> Path:
    return atomic_stream(path, lambda fh: fh.write(text))


def write_json(path, obj) -> Path:
    return atomic_write(path, json.dumps(obj, indent=2, sort_keys=False) + "\n")


def csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def write_csv(path, header, rows) -> Path:
    return atomic_write(path, csv_text(header, rows))


def ranking_to_dict(ranking, idf_mode, tf_mode) -> dict:
    return {
        "day": ranking.day.isoformat(),
        "window": ranking.window_days,
        "mode": {"idf": idf_mode.value, "tf": tf_mode.value},
        "top": [e.to_dict() for e in ranking.entries],
    }


def ranking_rows(rankings):
    for r in rankings:
        for rank, e in enumerate(r.entries, 1):
            yield [r.day.isoformat(), rank, e.port, repr(e.tf), repr(e.idf), repr(e.tfidf)]


def write_rankings(out_dir, rankings, config):
    out_dir = Path(out_dir)
    write_json(out_dir / "rankings.json",
               [ranking_to_dict(r, config.idf_mode, config.tf_mode) for r in rankings])
    write_csv(out_dir / "rankings.csv", ["day", "rank", "port", "tf", "idf", "tfidf"], ranking_rows(rankings))


def write_history(path, series) -> Path:
    return write_csv(path, ["day", "count"], ((d.isoformat(), n) for d, n in series))


def write_sweep(out_dir, trace, selected) -> list[Path]:
    out_dir = Path(out_dir)
    paths = [write_csv(out_dir / "sweep_trace.csv", ["threshold", "top_bin_count", "distinct_ports"],
                       ([h.threshold, h.top_bin_count, h.distinct_ports] for h in trace))]
    for h in trace:
        rows = ((repr(lo), repr(hi), c) for lo, hi, c in zip(h.bin_edges, h.bin_edges[1:], h.bin_counts))
        paths.append(write_csv(out_dir / f"idf_hist_{h.threshold}.csv", ["bin_low", "bin_high", "count"], rows))
    paths.append(write_json(out_dir / "threshold.json", {
        "selected_threshold": selected,
        "trace": [{"threshold": h.threshold, "top_bin_count": h.top_bin_count,
                   "distinct_ports": h.distinct_ports} for h in trace],
    }))
    return paths


def write_distribution(path, dist) -> Path:
    return write_csv(path, ["value", "count"], dist.histogram.items())


def write_heatmap_csv(path, heatmap) -> Path:
    return write_csv(path, ["x", "y", "count"], heatmap.cells())


def heatmap_svg(heatmap, cell: int = 24) -> str:
    side = len(heatmap.grid)
    peak = max((c for _, _, c in heatmap.cells()), default=0) or 1
    size = side * cell
    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size + 20}" '
             f'viewBox="0 0 {size} {size + 20}">',
             f'<title>distinct sources per /8, port {heatmap.port}</title>']
    block_at = {hilbert_xy(b): b for b in range(side * side)}
    for x, y, count in heatmap.cells():
        # darker means more sources; y grows downward in SVG so flip rows
        level = 255 - round(255 * count / peak)
        px, py = x * cell, (side - 1 - y) * cell
        parts.append(f'<rect x="{px}" y="{py}" width="{cell}" height="{cell}" '
                     f'fill="rgb({level},{level},255)" stroke="#ccc" stroke-width="0.5">'
                     f'<title>{block_at[(x, y)]}/8: {count}</title></rect>')
    parts.append(f'<text x="2" y="{size + 14}" font-size="12" font-family="sans-serif">'
                 f'port {heatmap.port}, max {peak} sources per /8</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def write_heatmap_svg(path, heatmap) -> Path:
    return atomic_write(path, heatmap_svg(heatmap))
