"""Report emitters: line-record scores, summary tables, token heatmaps.

All emitters are deterministic (identical inputs produce byte-identical
files) and embed the scoring backend's identity, since fraction scores are
only meaningful relative to a specific backend.
"""

from __future__ import annotations

import html
import json

from fpscore.fp import FpSummary
from fpscore.types import SampleScore


def _f(value: float) -> str:
    """Floating values with 9 significant digits."""
    return format(value, ".9g")


def sample_to_json_line(sample: SampleScore) -> str:
    tokens = ", ".join(
        '{"surface": %s, "fp": %s, "rank": %d, "entropy_nats": %s}'
        % (json.dumps(ts.surface, ensure_ascii=False), _f(ts.fp), ts.rank, _f(ts.entropy_nats))
        for ts in sample.token_scores
    )
    return (
        '{"sample_id": %s, "k": %d, "fp_s": %s, "backend": {"name": %s, "fingerprint": %s}, '
        '"tokens": [%s]}'
        % (
            json.dumps(sample.sample_id, ensure_ascii=False),
            sample.k,
            _f(sample.fp_s),
            json.dumps(sample.backend.backend_name, ensure_ascii=False),
            json.dumps(sample.backend.model_fingerprint, ensure_ascii=False),
            tokens,
        )
    )


def emit_jsonl(samples: list[SampleScore], path) -> None:
    """Write one JSON record per sample, in input order."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for sample in samples:
            fh.write(sample_to_json_line(sample))
            fh.write("\n")


def read_jsonl(path) -> list[dict]:
    """Parse a score record file back into dicts."""
    records = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                records.append(json.loads(line))
    return records


def _cell(summary: FpSummary) -> str:
    return f"{summary.mean:.3f} ({summary.stdev:.3f})"


def emit_fp_table(grid: dict, path) -> None:
    """CSV of mean fractions: rows = generators, column pairs per discriminator.

    grid maps (generator label, discriminator label) to a dict with
    FpSummary entries "gen" and "gold". Header ordering is deterministic
    (sorted by label).
    """
    if not grid:
        raise ValueError("empty grid")
    generators = sorted({g for g, _ in grid})
    discriminators = sorted({d for _, d in grid})
    header = ["generator"]
    for d in discriminators:
        header += [f"{d} Fp_gen", f"{d} Fp_gold"]
    lines = [",".join(header)]
    for g in generators:
        row = [g]
        for d in discriminators:
            cell = grid.get((g, d))
            if cell is None:
                row += ["", ""]
            else:
                row += [_cell(cell["gen"]), _cell(cell["gold"])]
        lines.append(",".join(row))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


_BUCKETS = [
    (0.25, "fp-green", "#8bd48b"),
    (0.50, "fp-yellow", "#e8e85a"),
    (0.75, "fp-orange", "#f0a85a"),
    (1.01, "fp-red", "#f07070"),
]


def fp_bucket(fp: float) -> str:
    """Bucket name for a fraction value; intervals are left-closed."""
    for upper, name, _color in _BUCKETS:
        if fp < upper:
            return name
    return _BUCKETS[-1][1]


def emit_heatmap(sample: SampleScore, path) -> None:
    """Write a self-contained HTML page with one colored span per token."""
    css = "\n".join(
        f".{name} {{ background-color: {color}; }}" for _u, name, color in _BUCKETS
    )
    spans = []
    for ts in sample.token_scores:
        title = f"fp={_f(ts.fp)} rank={ts.rank} entropy={_f(ts.entropy_nats)} nats"
        spans.append(
            f'<span class="tok {fp_bucket(ts.fp)}" title="{html.escape(title)}">'
            f"{html.escape(ts.surface)}</span>"
        )
    legend = " ".join(
        f'<span class="tok {name}">{label}</span>'
        for (_u, name, _c), label in zip(
            _BUCKETS, ["fp &lt; 0.25", "0.25 &le; fp &lt; 0.5", "0.5 &le; fp &lt; 0.75", "fp &ge; 0.75"]
        )
    )
    page = f"""<!DOCTYPE html>
<html lang="en">
<head>
<meta charset="utf-8">
<title>Token fraction heatmap: {html.escape(sample.sample_id)}</title>
<style>
body {{ font-family: sans-serif; margin: 2em; }}
.tok {{ padding: 1px 3px; margin: 1px; border-radius: 3px; display: inline-block; }}
.meta {{ color: #555; font-size: 0.9em; margin-bottom: 1em; }}
{css}
</style>
</head>
<body>
<h1>Token fraction heatmap</h1>
<p class="meta">sample: {html.escape(sample.sample_id)} |
backend: {html.escape(sample.backend.backend_name)}
(fingerprint {html.escape(sample.backend.model_fingerprint)}) |
k = {sample.k} | mean fraction = {_f(sample.fp_s)}</p>
<p>Legend: {legend}</p>
<p class="text">{' '.join(spans)}</p>
</body>
</html>
"""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(page)
