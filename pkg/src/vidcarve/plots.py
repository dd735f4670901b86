"""Figure rendering for bench reports.

Renders per-variant bar charts for the collected metrics and the buffer
threshold curve with its worst-case ASDE markers, as PNG files next to
the delimited metrics report.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .buffering import BufferPolicy, threshold
from .pipeline import RunMetrics


def render_report_figures(
    results: dict[str, RunMetrics],
    outdir: str | Path,
    policy: BufferPolicy | None = None,
) -> list[Path]:
    """Write the report figures and return their paths."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    policy = policy or BufferPolicy()
    written = [
        _bar_chart(results, lambda m: m.dp_passes, "DP passes", outdir / "dp_passes.png"),
        _bar_chart(results, lambda m: m.wall_time, "Wall time (s)", outdir / "wall_time.png"),
    ]
    with_jitter = {k: m for k, m in results.items() if m.jitter is not None}
    if with_jitter:
        written.append(
            _bar_chart(with_jitter, lambda m: m.jitter, "Jitter", outdir / "jitter.png")
        )
    written.append(_threshold_curve(policy, outdir / "threshold_curve.png"))
    return written


def _bar_chart(results, value, ylabel, path: Path) -> Path:
    names = list(results)
    values = [value(results[n]) for n in names]
    fig, ax = plt.subplots(figsize=(4.5, 3.0))
    ax.bar(names, values, color="tab:blue", width=0.6)
    ax.set_ylabel(ylabel)
    ax.spines["right"].set_visible(False)
    ax.spines["top"].set_visible(False)
    for x, v in enumerate(values):
        ax.annotate(f"{v:g}", (x, v), ha="center", va="bottom", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def _threshold_curve(policy: BufferPolicy, path: Path) -> Path:
    sizes = np.arange(1, max(policy.max_len, 16) + 1)
    phi = [threshold(int(n), policy) for n in sizes]
    marker_sizes = np.arange(2, min(int(sizes[-1]), 16) + 1)
    worst = [
        policy.alpha * _worst_case_asde(int(n), policy.maxval) for n in marker_sizes
    ]
    fig, ax = plt.subplots(figsize=(4.5, 3.0))
    ax.plot(sizes, phi, color="tab:blue", label="threshold")
    ax.plot(marker_sizes, worst, "x", color="tab:red", label="alpha x worst-case ASDE")
    ax.set_xlabel("buffer size")
    ax.set_ylabel("energy std")
    ax.spines["right"].set_visible(False)
    ax.spines["top"].set_visible(False)
    ax.legend(frameon=False, fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def _worst_case_asde(n: int, maxval: float) -> float:
    # (n - 1) all-minimum maps and one all-maximum map; every pixel has the
    # same temporal series, so the ASDE is that series' population std.
    series = np.zeros(n)
    series[-1] = maxval
    return float(series.std())
