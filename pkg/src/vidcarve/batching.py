"""Batched seam removal via parent labeling.

Every seam traced back from the last row lands on some first-row column,
its parent. Tracing is deterministic, so the preimages of the parents
partition the last row, traced paths never cross, and removing the
cheapest child of each parent takes out several pairwise-disjoint seams
in a single DP pass while keeping every row the same width.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .energy import gradient_energy, to_luma
from .seams import DpTables, Seam, cumulative_energy, trace_columns


@dataclass(frozen=True, eq=False)
class SeamBatch:
    """Pairwise-disjoint vertical seams, sorted by last-row column.

    source_width records the width the batch was selected on, so a replay
    onto a frame of the wrong size fails instead of silently removing the
    wrong pixels.
    """

    seams: tuple[Seam, ...]
    source_width: int | None = None

    def __len__(self) -> int:
        return len(self.seams)

    def __iter__(self):
        return iter(self.seams)


def label_parents(tables: DpTables) -> np.ndarray:
    """First-row landing column for every last-row column."""
    back = tables.back
    h, w = back.shape
    cols = np.arange(w, dtype=np.intp)
    for i in range(h - 1, 0, -1):
        cols = cols + back[i, cols]
    return cols


def select_batch(tables: DpTables, labels: np.ndarray, k: int | None = None) -> SeamBatch:
    """One cheapest child per parent, optionally truncated to the k cheapest.

    Ties within a parent go to the smaller column; truncation ties go to
    the smaller last-row column. The global minimum seam is always in the
    batch.
    """
    if k is not None and k < 1:
        raise ValueError(f"k must be >= 1 or None, got {k}")
    last = tables.ce[-1]
    best: dict[int, int] = {}
    for col in range(last.size):
        parent = int(labels[col])
        cur = best.get(parent)
        if cur is None or last[col] < last[cur]:
            best[parent] = col
    cols = sorted(best.values())
    if k is not None and k < len(cols):
        cols = sorted(cols, key=lambda c: (last[c], c))[:k]
        cols.sort()
    offsets = trace_columns(tables.back, np.asarray(cols, dtype=np.intp))
    seams = tuple(
        Seam(offsets=offsets[:, i].copy(), cost=float(last[c])) for i, c in enumerate(cols)
    )
    return SeamBatch(seams=seams, source_width=int(last.size))


def remove_batch(frame: np.ndarray, batch: SeamBatch) -> np.ndarray:
    """Remove every seam of the batch in one pass.

    Offsets address the original frame's columns, so removal order cannot
    invalidate them; each row loses exactly len(batch) pixels and keeps
    its relative order.
    """
    arr = np.asarray(frame)
    h, w = arr.shape[:2]
    if batch.source_width is not None and w != batch.source_width:
        raise ValueError(
            f"batch was selected on width {batch.source_width}, frame has width {w}"
        )
    if len(batch) == 0:
        return arr.copy()
    offs = []
    for seam in batch:
        o = np.asarray(seam.offsets)
        if o.shape != (h,):
            raise ValueError(f"seam length {o.shape} does not match frame height {h}")
        if (o < 0).any() or (o >= w).any():
            raise ValueError(f"seam offset out of range for width {w}")
        offs.append(o)
    stacked = np.stack(offs)
    keep = np.ones((h, w), dtype=bool)
    keep[np.arange(h)[None, :], stacked] = False
    # Batches from select_batch are disjoint by construction; anything else
    # is a programming error upstream.
    assert (~keep).sum(axis=1).max() == len(batch), "non-disjoint seam batch"
    if arr.ndim == 3:
        return arr[keep].reshape(h, w - len(batch), arr.shape[2])
    return arr[keep].reshape(h, w - len(batch))


def default_energy(frame: np.ndarray) -> np.ndarray:
    """Gradient energy of a frame, zero map below the 3x3 Sobel domain."""
    luma = to_luma(frame)
    if min(luma.shape) < 3:
        return np.zeros(luma.shape, dtype=np.float64)
    return gradient_energy(luma)


def batch_carve(
    frame: np.ndarray,
    target_width: int,
    energy: np.ndarray | None = None,
    energy_fn=default_energy,
) -> tuple[np.ndarray, list[SeamBatch]]:
    """Carve the frame down to target_width in batches.

    Repeats DP -> label -> select (k = seams still needed) -> remove, then
    recomputes energy on the carved frame, until the width is reached.
    The returned batches can be replayed onto other frames of the same
    original width.
    """
    arr = np.asarray(frame)
    width = arr.shape[1]
    if target_width < 1:
        raise ValueError(f"target width must be >= 1, got {target_width}")
    if target_width > width:
        raise ValueError(f"target width {target_width} exceeds frame width {width}")
    emap = energy
    if emap is not None and np.asarray(emap).shape != arr.shape[:2]:
        raise ValueError(
            f"energy map shape {np.asarray(emap).shape} does not match frame {arr.shape[:2]}"
        )
    batches: list[SeamBatch] = []
    cur = arr
    while cur.shape[1] > target_width:
        if emap is None:
            emap = energy_fn(cur)
        tables = cumulative_energy(emap)
        labels = label_parents(tables)
        batch = select_batch(tables, labels, k=cur.shape[1] - target_width)
        cur = remove_batch(cur, batch)
        batches.append(batch)
        emap = None
    return cur, batches


__all__ = [
    "SeamBatch",
    "label_parents",
    "select_batch",
    "remove_batch",
    "batch_carve",
    "default_energy",
]
