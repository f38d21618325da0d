"""Rendering of shot histograms and grouped comparison bars.

Values are plotted exactly as read (no normalization); every image gets a
``<image>.values.txt`` sidecar echoing the plotted cells verbatim for
diffing against the input CSV.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .csvio import SchemaError, read_csv, require_columns

VARIANT_ORDER = ["grover", "modified", "optimized"]
VARIANT_LABELS = {"grover": "Grover", "modified": "Modified", "optimized": "Optimized"}
PNG_METADATA = {"Software": "exact-search-plots"}


def _save(fig, out_path: Path) -> None:
    out_path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(out_path, format="png", dpi=120, metadata=PNG_METADATA)
    plt.close(fig)


def _write_sidecar(out_path: Path, lines: list[str]) -> None:
    sidecar = out_path.with_suffix(out_path.suffix + ".values.txt")
    sidecar.write_text("\n".join(lines) + "\n")


def render_histogram(in_path: str, out_path: str, title: str = "") -> Path:
    """Bar chart of a ``bitstring,count`` shot histogram."""
    table = read_csv(in_path)
    require_columns(table, ["bitstring", "count"], in_path)
    labels = table.column("bitstring")
    raw_counts = table.column("count")
    try:
        counts = [int(c) for c in raw_counts]
    except ValueError as exc:
        raise SchemaError(f"{in_path}: non-integer count: {exc}") from None

    fig, ax = plt.subplots(figsize=(6, 4))
    ax.bar(range(len(labels)), counts, color="#3b6ea5")
    ax.set_xticks(range(len(labels)))
    ax.set_xticklabels(labels, rotation=45 if len(labels) > 8 else 0)
    ax.set_xlabel("measured basis state")
    ax.set_ylabel("shots")
    if title:
        ax.set_title(title)
    for x, count in enumerate(counts):
        ax.annotate(str(count), (x, count), ha="center", va="bottom", fontsize=8)
    fig.tight_layout()
    out = Path(out_path)
    _save(fig, out)
    _write_sidecar(out, [f"{b},{c}" for b, c in zip(labels, raw_counts)])
    return out


def render_grouped_bars(
    in_path: str, out_path: str, metric: str = "gates_total", title: str = ""
) -> Path:
    """Grouped bars of one compare-CSV metric, one group per preset.

    Bars within a group are ordered Grover, Modified, Optimized.
    """
    table = read_csv(in_path)
    require_columns(table, ["preset", "variant", metric], in_path)
    presets: list[str] = []
    values: dict[tuple[str, str], str] = {}
    p_idx = table.columns.index("preset")
    v_idx = table.columns.index("variant")
    m_idx = table.columns.index(metric)
    for row in table.rows:
        preset, variant, raw = row[p_idx], row[v_idx], row[m_idx]
        if preset not in presets:
            presets.append(preset)
        values[(preset, variant)] = raw

    fig, ax = plt.subplots(figsize=(7, 4.5))
    width = 0.26
    sidecar_lines = []
    for offset, variant in enumerate(VARIANT_ORDER):
        xs, ys = [], []
        for gi, preset in enumerate(presets):
            raw = values.get((preset, variant))
            if raw is None:
                continue
            try:
                y = float(raw)
            except ValueError:
                raise SchemaError(
                    f"{in_path}: non-numeric {metric} cell {raw!r}"
                ) from None
            xs.append(gi + (offset - 1) * width)
            ys.append(y)
            sidecar_lines.append(f"{preset},{variant},{raw}")
        ax.bar(xs, ys, width=width, label=VARIANT_LABELS[variant])
        for x, y in zip(xs, ys):
            ax.annotate(
                f"{y:g}", (x, y), ha="center", va="bottom", fontsize=8
            )
    ax.set_xticks(range(len(presets)))
    ax.set_xticklabels(presets)
    ax.set_ylabel(metric)
    ax.legend()
    if title:
        ax.set_title(title)
    fig.tight_layout()
    out = Path(out_path)
    _save(fig, out)
    _write_sidecar(out, sidecar_lines)
    return out
