"""Cumulative-energy dynamic programming and single-seam operations.

A vertical seam holds one column offset per row, 8-connected
(|offsets[i] - offsets[i-1]| <= 1) and monotone (exactly one pixel per
row). All tie-breaking is deterministic leftmost: the DP prefers the -1
predecessor delta over 0 over +1, and the final argmin prefers the
smallest column. Horizontal carving is transpose, vertical carve,
transpose back.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True, eq=False)
class Seam:
    """One column offset per row, plus the cumulative energy of the path."""

    offsets: np.ndarray
    cost: float
    orientation: str = "vertical"


@dataclass(eq=False)
class DpTables:
    """Cumulative energy and the predecessor column delta per pixel.

    ``ce[0]`` equals the energy map's first row; ``back`` holds deltas in
    {-1, 0, +1} (row 0 is all zeros, there is nothing to point at).
    """

    ce: np.ndarray
    back: np.ndarray


def cumulative_energy(energy: np.ndarray) -> DpTables:
    """Fill the DP tables row by row.

    Each pixel takes the cheapest of its three upper neighbours; at the
    left/right borders the out-of-range neighbour is excluded. Values stay
    real-valued throughout (uniform maps are means, no rounding).
    """
    e = np.asarray(energy, dtype=np.float64)
    if e.ndim != 2 or e.size == 0:
        raise ValueError(f"expected a non-empty 2-d energy map, got shape {e.shape}")
    h, w = e.shape
    ce = np.empty((h, w), dtype=np.float64)
    back = np.zeros((h, w), dtype=np.int8)
    ce[0] = e[0]
    cand = np.empty((3, w), dtype=np.float64)
    for i in range(1, h):
        prev = ce[i - 1]
        cand[0, 0] = np.inf
        cand[0, 1:] = prev[:-1]
        cand[1] = prev
        cand[2, :-1] = prev[1:]
        cand[2, -1] = np.inf
        # argmin returns the first minimum, which is the smaller delta.
        choice = np.argmin(cand, axis=0)
        ce[i] = e[i] + np.take_along_axis(cand, choice[None, :], axis=0)[0]
        back[i] = choice - 1
    return DpTables(ce=ce, back=back)


def trace_columns(back: np.ndarray, last_cols: np.ndarray) -> np.ndarray:
    """Walk the predecessor deltas up from the last row.

    Returns an ``(h, len(last_cols))`` matrix of column offsets, one seam
    per input column, top row first.
    """
    h = back.shape[0]
    cols = np.asarray(last_cols, dtype=np.intp)
    offsets = np.empty((h, cols.size), dtype=np.intp)
    offsets[h - 1] = cols
    for i in range(h - 1, 0, -1):
        cols = cols + back[i, cols]
        offsets[i - 1] = cols
    return offsets


def min_seam(tables: DpTables) -> Seam:
    """Trace the seam ending at the cheapest last-row pixel."""
    last = tables.ce[-1]
    col = int(np.argmin(last))
    offsets = trace_columns(tables.back, np.array([col]))[:, 0]
    return Seam(offsets=offsets, cost=float(last[col]))


def remove_seam(frame: np.ndarray, seam: Seam) -> np.ndarray:
    """Drop one pixel per row; width shrinks by one, row order is kept."""
    arr = np.asarray(frame)
    h, w = arr.shape[:2]
    offs = np.asarray(seam.offsets)
    if offs.shape != (h,):
        raise ValueError(f"seam length {offs.shape} does not match frame height {h}")
    if (offs < 0).any() or (offs >= w).any():
        raise ValueError(f"seam offset out of range for width {w}")
    keep = np.ones((h, w), dtype=bool)
    keep[np.arange(h), offs] = False
    if arr.ndim == 3:
        return arr[keep].reshape(h, w - 1, arr.shape[2])
    return arr[keep].reshape(h, w - 1)


def transpose(frame: np.ndarray) -> np.ndarray:
    """Swap rows and columns (channels untouched); its own inverse."""
    arr = np.asarray(frame)
    return np.ascontiguousarray(np.swapaxes(arr, 0, 1))
