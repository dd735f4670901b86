"""Synthetic corpora, the temporal jitter metric, and mode comparison.

Jitter quantifies frame-to-frame displacement of content as the mean
absolute luma difference between consecutive frames, averaged over
sliding windows (4 frames by default). Zero exactly when every window is
locally constant; retargeted static footage should score zero in
buffered mode.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .energy import to_luma
from .pipeline import RetargetConfig, RunMetrics, retarget_video

SYNTHETIC_KINDS = ("static", "moving-box", "brightness-ramp")


@dataclass(frozen=True)
class JitterReport:
    window: int
    value: float


@dataclass(frozen=True)
class SyntheticSpec:
    """Deterministic corpus recipe; same seed, same bytes."""

    kind: str
    width: int = 320
    height: int = 240
    frames: int = 32
    seed: int = 0


def jitter(frames: list[np.ndarray], window: int = 4) -> JitterReport:
    """Windowed mean absolute inter-frame luma difference.

    Streams shorter than the window are scored as a single window over
    all their frames.
    """
    if len(frames) < 2:
        raise ValueError(f"need at least 2 frames, got {len(frames)}")
    lumas = [to_luma(f).astype(np.float64) for f in frames]
    for i, l in enumerate(lumas[1:], start=1):
        if l.shape != lumas[0].shape:
            raise ValueError(f"frame {i}: dimensions differ from frame 0")
    diffs = np.array(
        [np.abs(lumas[i + 1] - lumas[i]).mean() for i in range(len(lumas) - 1)]
    )
    win = min(window, len(frames))
    pairs = win - 1
    values = [diffs[t : t + pairs].mean() for t in range(len(frames) - win + 1)]
    return JitterReport(window=window, value=float(np.mean(values)))


def generate(spec: SyntheticSpec) -> list[np.ndarray]:
    """Build a deterministic RGB corpus for benchmarking."""
    if spec.kind not in SYNTHETIC_KINDS:
        raise ValueError(f"unknown corpus kind {spec.kind!r}, expected one of {SYNTHETIC_KINDS}")
    if spec.width < 3 or spec.height < 3:
        raise ValueError(f"corpus frames must be at least 3x3, got {spec.width}x{spec.height}")
    if spec.frames < 1:
        raise ValueError(f"frame count must be >= 1, got {spec.frames}")
    rng = np.random.default_rng(spec.seed)
    h, w, n = spec.height, spec.width, spec.frames

    if spec.kind == "static":
        # Moderate-contrast noise: keeps the mean gradient low enough that a
        # static stream is admitted as one buffered run at default alpha
        # (the first frame's map is pure gradient, the rest are blended).
        base = rng.integers(112, 144, size=(h, w, 3), dtype=np.uint8)
        return [base.copy() for _ in range(n)]

    if spec.kind == "moving-box":
        background = rng.integers(0, 128, size=(h, w, 3), dtype=np.uint8)
        box_w = max(4, w // 8)
        box_h = max(4, h // 8)
        y0 = h // 4
        frames = []
        for t in range(n):
            frame = background.copy()
            x = t % (w - box_w + 1)
            frame[y0 : y0 + box_h, x : x + box_w] = 250
            frames.append(frame)
        return frames

    # brightness-ramp: global luma rises linearly and wraps; the wrap frame
    # is the energy upheaval that forces an ASDE flush.
    base = rng.integers(0, 64, size=(h, w, 3), dtype=np.int64)
    step, span = 16, 192
    return [
        np.clip(base + (t * step) % span, 0, 255).astype(np.uint8) for t in range(n)
    ]


def compare(
    frames: list[np.ndarray], variants: dict[str, RetargetConfig]
) -> dict[str, RunMetrics]:
    """Run every variant over the corpus and collect metrics."""
    if not variants:
        raise ValueError("need at least one config variant")
    results: dict[str, RunMetrics] = {}
    for name, config in variants.items():
        out, metrics = retarget_video(frames, config)
        if len(out) >= 2:
            metrics.jitter = jitter(out).value
        results[name] = metrics
    return results


def format_metrics(results: RunMetrics | dict[str, RunMetrics]) -> str:
    """Flat key=value report; variant names prefix the keys when comparing."""
    lines: list[str] = []

    def emit(prefix: str, m: RunMetrics) -> None:
        lines.append(f"{prefix}dp_passes={m.dp_passes}")
        lines.append(f"{prefix}wall_time_s={m.wall_time:.6f}")
        lines.append(f"{prefix}frames_out={m.frames_out}")
        if m.jitter is not None:
            lines.append(f"{prefix}jitter={m.jitter:.6f}")

    if isinstance(results, dict):
        for name, metrics in results.items():
            emit(f"{name}.", metrics)
    else:
        emit("", results)
    return "\n".join(lines) + "\n"
