"""Retargeting orchestration for images and frame streams.

Three modes:

* ``raw`` — one DP pass per removed seam per frame, gradient energy only
  (the classic per-frame carving baseline).
* ``scpl`` — batched per-frame carving; each frame's first DP pass runs on
  the motion-blended map against the previous original frame.
* ``buffered`` — frames accumulate in the temporal buffer; each fixed run
  is carved once on its uniform energy map and the recorded batches are
  replayed onto every frame of the run.

Width is carved before height by default; height carving is transpose,
vertical carve, transpose back. Energy recomputed mid-carve is always
gradient energy of the carved frame: the motion reference still has the
original dimensions at that point, so the blended term is undefined.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .batching import (
    SeamBatch,
    batch_carve,
    default_energy,
    label_parents,
    remove_batch,
    select_batch,
)
from .buffering import BufferPolicy, FixedRun, SpatioTemporalBuffer
from .energy import DEFAULT_GRADIENT_WEIGHT, DEFAULT_MOTION_WEIGHT, motion_energy
from .seams import cumulative_energy, min_seam, remove_seam, transpose

MODES = ("raw", "scpl", "buffered")


@dataclass
class RetargetConfig:
    """Targets, mode, and knobs for one retargeting run.

    Targets of None keep the source dimension. reaverage_energy switches
    the buffered per-batch energy recompute from the run's representative
    frame to a fresh mean over every carved frame (slower, for quality
    studies). height_first flips the axis order.
    """

    target_width: int | None = None
    target_height: int | None = None
    mode: str = "scpl"
    policy: BufferPolicy = field(default_factory=BufferPolicy)
    w_motion: float = DEFAULT_MOTION_WEIGHT
    w_grad: float = DEFAULT_GRADIENT_WEIGHT
    reaverage_energy: bool = False
    height_first: bool = False

    def __post_init__(self) -> None:
        if self.mode not in MODES:
            raise ValueError(f"unknown mode {self.mode!r}, expected one of {MODES}")
        if self.w_motion < 0 or self.w_grad < 0 or abs(self.w_motion + self.w_grad - 1.0) > 1e-9:
            raise ValueError(
                f"weights must be non-negative and sum to 1, got {self.w_motion} + {self.w_grad}"
            )


@dataclass
class RunMetrics:
    """Instrumentation for one run; dp_passes counts DP table fills."""

    dp_passes: int = 0
    wall_time: float = 0.0
    frames_out: int = 0
    jitter: float | None = None


def retarget_image(frame: np.ndarray, config: RetargetConfig) -> tuple[np.ndarray, RunMetrics]:
    """Carve a single frame to the configured targets."""
    start = time.perf_counter()
    arr = np.asarray(frame)
    _check_carvable(arr)
    tw = _resolve_target(arr.shape[1], config.target_width, "width")
    th = _resolve_target(arr.shape[0], config.target_height, "height")
    out, passes = _retarget_single(arr, config, tw, th, initial_energy=None)
    metrics = RunMetrics(dp_passes=passes, wall_time=time.perf_counter() - start, frames_out=1)
    return out, metrics


def retarget_video(
    frames: Iterable[np.ndarray], config: RetargetConfig
) -> tuple[list[np.ndarray], RunMetrics]:
    """Carve a stream of frames; output count always equals input count."""
    start = time.perf_counter()
    out: list[np.ndarray] = []
    passes = 0
    shape: tuple[int, int] | None = None
    targets: tuple[int, int] | None = None

    if config.mode == "buffered":
        buf = SpatioTemporalBuffer(policy=config.policy)
        prev: np.ndarray | None = None
        for idx, frame in enumerate(frames):
            arr = np.asarray(frame)
            shape, targets = _admit(arr, shape, targets, config, idx)
            emap = motion_energy(arr, prev, config.w_motion, config.w_grad)
            prev = arr
            run = buf.push(arr, emap)
            if run is not None:
                carved, n = _process_run(run, config, *targets)
                out.extend(carved)
                passes += n
        run = buf.flush()
        if run is not None:
            carved, n = _process_run(run, config, *targets)
            out.extend(carved)
            passes += n
    else:
        prev = None
        for idx, frame in enumerate(frames):
            arr = np.asarray(frame)
            shape, targets = _admit(arr, shape, targets, config, idx)
            if config.mode == "raw":
                init = None
            else:
                init = motion_energy(arr, prev, config.w_motion, config.w_grad)
            prev = arr
            carved, n = _retarget_single(arr, config, *targets, initial_energy=init)
            out.append(carved)
            passes += n

    metrics = RunMetrics(
        dp_passes=passes, wall_time=time.perf_counter() - start, frames_out=len(out)
    )
    return out, metrics


def replay_batches(
    run_frames: Iterable[np.ndarray], batches: list[SeamBatch]
) -> list[np.ndarray]:
    """Apply recorded batches, in order, to every frame of a run.

    Purely dimensional contract: any frame of the right size is accepted;
    all outputs end up at the same width.
    """
    out = []
    for frame in run_frames:
        cur = np.asarray(frame)
        for batch in batches:
            cur = remove_batch(cur, batch)
        out.append(cur)
    return out


def _admit(arr, shape, targets, config, idx):
    """Validate a stream frame and resolve targets on the first one."""
    if shape is None:
        _check_carvable(arr)
        shape = arr.shape[:2]
        targets = (
            _resolve_target(shape[1], config.target_width, "width"),
            _resolve_target(shape[0], config.target_height, "height"),
        )
    elif arr.shape[:2] != shape:
        raise ValueError(
            f"frame {idx}: dimension change mid-stream, "
            f"expected {shape}, got {arr.shape[:2]}"
        )
    return shape, targets


def _check_carvable(arr: np.ndarray) -> None:
    if arr.ndim not in (2, 3):
        raise ValueError(f"expected a 2-d or 3-d frame array, got shape {arr.shape}")
    h, w = arr.shape[:2]
    if h < 3 or w < 3:
        raise ValueError(f"frame too small to carve: {w}x{h}, need at least 3x3")


def _resolve_target(size: int, target: int | None, axis: str) -> int:
    if target is None:
        return size
    if target < 1:
        raise ValueError(f"target {axis} must be >= 1, got {target}")
    if target > size:
        raise ValueError(f"target {axis} {target} exceeds source {size} (reduction only)")
    return target


def _phase_order(config: RetargetConfig) -> tuple[str, str]:
    return ("height", "width") if config.height_first else ("width", "height")


def _retarget_single(
    frame: np.ndarray,
    config: RetargetConfig,
    tw: int,
    th: int,
    initial_energy: np.ndarray | None,
) -> tuple[np.ndarray, int]:
    """Two-phase carve of one frame; the initial map only fits the first phase."""
    cur = np.asarray(frame)
    passes = 0
    emap = initial_energy
    for axis in _phase_order(config):
        target = th if axis == "height" else tw
        size = cur.shape[0] if axis == "height" else cur.shape[1]
        if target >= size:
            continue
        if axis == "height":
            cur = transpose(cur)
            phase_energy = transpose(emap) if emap is not None else None
        else:
            phase_energy = emap
        if config.mode == "raw":
            cur, n = _carve_width_raw(cur, target, phase_energy)
            passes += n
        else:
            cur, batches = batch_carve(cur, target, energy=phase_energy)
            passes += len(batches)
        if axis == "height":
            cur = transpose(cur)
        emap = None
    return cur, passes


def _carve_width_raw(
    frame: np.ndarray, target_width: int, energy: np.ndarray | None
) -> tuple[np.ndarray, int]:
    """One minimal seam per DP pass until the width is reached."""
    cur = np.asarray(frame)
    passes = 0
    emap = energy
    while cur.shape[1] > target_width:
        if emap is None:
            emap = default_energy(cur)
        tables = cumulative_energy(emap)
        passes += 1
        cur = remove_seam(cur, min_seam(tables))
        emap = None
    return cur, passes


def _process_run(
    run: FixedRun, config: RetargetConfig, tw: int, th: int
) -> tuple[list[np.ndarray], int]:
    """Carve a fixed run with one shared seam set per axis.

    The first carved axis uses the run's uniform (motion-blended) map,
    transposed if that axis is height; once anything has been carved the
    stored maps are stale and later phases recompute from carved frames.
    """
    frames = run.frames
    passes = 0
    uniform: np.ndarray | None = run.uniform_energy()
    for axis in _phase_order(config):
        target = th if axis == "height" else tw
        size = frames[0].shape[0] if axis == "height" else frames[0].shape[1]
        if target >= size:
            continue
        if axis == "height":
            work = [transpose(f) for f in frames]
            phase_energy = transpose(uniform) if uniform is not None else None
        else:
            work = frames
            phase_energy = uniform
        if config.reaverage_energy:
            work, batches = _carve_run_reaverage(work, target, phase_energy)
        else:
            _, batches = batch_carve(work[0], target, energy=phase_energy)
            work = replay_batches(work, batches)
        passes += len(batches)
        frames = [transpose(f) for f in work] if axis == "height" else work
        uniform = None
    return frames, passes


def _carve_run_reaverage(
    frames: list[np.ndarray], target_width: int, energy: np.ndarray | None
) -> tuple[list[np.ndarray], list[SeamBatch]]:
    """Batch carve a whole run, re-averaging energy over every carved frame."""
    cur = [np.asarray(f) for f in frames]
    batches: list[SeamBatch] = []
    emap = energy
    while cur[0].shape[1] > target_width:
        if emap is None:
            emap = np.stack([default_energy(f) for f in cur]).mean(axis=0)
        tables = cumulative_energy(emap)
        labels = label_parents(tables)
        batch = select_batch(tables, labels, k=cur[0].shape[1] - target_width)
        cur = [remove_batch(f, batch) for f in cur]
        batches.append(batch)
        emap = None
    return cur, batches
