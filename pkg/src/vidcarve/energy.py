"""Energy (saliency) maps for seam selection.

A frame is a row-major numpy array: ``(h, w)`` uint8 luma or ``(h, w, 3)``
uint8 RGB, values in [0, 255]. An energy map is a float64 ``(h, w)`` array
whose values live on the same [0, 255] scale (``MAXVAL``); keeping the
scale fixed is what makes the buffer threshold in :mod:`vidcarve.buffering`
meaningful.
"""

from __future__ import annotations

import numpy as np

MAXVAL = 255.0

# ITU-R BT.601 luma weights.
_LUMA_WEIGHTS = np.array([0.299, 0.587, 0.114])

DEFAULT_MOTION_WEIGHT = 0.6
DEFAULT_GRADIENT_WEIGHT = 0.4


def to_luma(frame: np.ndarray) -> np.ndarray:
    """Collapse an RGB frame to luma; luma input is returned unchanged.

    RGB channels are combined with BT.601 weights and rounded to the
    nearest integer, so a gray pixel (v, v, v) maps back to v exactly.
    """
    arr = np.asarray(frame)
    if arr.ndim == 2:
        return arr
    if arr.ndim == 3 and arr.shape[2] == 1:
        return arr[:, :, 0]
    if arr.ndim == 3 and arr.shape[2] == 3:
        mixed = arr.astype(np.float64) @ _LUMA_WEIGHTS
        return np.rint(mixed).astype(np.uint8)
    raise ValueError(f"unsupported channel count: expected 1 or 3, got shape {arr.shape}")


def gradient_energy(luma: np.ndarray) -> np.ndarray:
    """Sobel gradient energy |Gx| + |Gy|, clamped to [0, 255].

    Border pixels are computed with edge replication so the margin does
    not accumulate artificially high energy that would repel seams.
    Requires a 3x3 neighbourhood, hence the minimum size.
    """
    img = np.asarray(luma)
    if img.ndim != 2:
        raise ValueError(f"expected a single-channel frame, got shape {img.shape}")
    h, w = img.shape
    if h < 3 or w < 3:
        raise ValueError(f"frame too small for 3x3 Sobel: {w}x{h}, need at least 3x3")
    p = np.pad(img.astype(np.float64), 1, mode="edge")
    # Column sums of the replicated neighbourhood; Sobel as weighted shifts.
    right = p[:-2, 2:] + 2.0 * p[1:-1, 2:] + p[2:, 2:]
    left = p[:-2, :-2] + 2.0 * p[1:-1, :-2] + p[2:, :-2]
    bottom = p[2:, :-2] + 2.0 * p[2:, 1:-1] + p[2:, 2:]
    top = p[:-2, :-2] + 2.0 * p[:-2, 1:-1] + p[:-2, 2:]
    return np.minimum(np.abs(right - left) + np.abs(bottom - top), MAXVAL)


def motion_energy(
    curr: np.ndarray,
    prev: np.ndarray | None,
    w_motion: float = DEFAULT_MOTION_WEIGHT,
    w_grad: float = DEFAULT_GRADIENT_WEIGHT,
) -> np.ndarray:
    """Blend the luma frame difference with gradient energy.

    Per pixel: ``w_motion * |luma(curr) - luma(prev)| + w_grad *
    gradient_energy(curr)``, clamped to [0, 255]. The first frame of a
    stream has no predecessor; with ``prev`` absent the map is pure
    gradient energy (not scaled by ``w_grad``).
    """
    if w_motion < 0 or w_grad < 0 or abs(w_motion + w_grad - 1.0) > 1e-9:
        raise ValueError(f"weights must be non-negative and sum to 1, got {w_motion} + {w_grad}")
    curr_luma = to_luma(curr)
    grad = gradient_energy(curr_luma)
    if prev is None:
        return grad
    prev_luma = to_luma(prev)
    if prev_luma.shape != curr_luma.shape:
        raise ValueError(
            f"dimension mismatch: current frame {curr_luma.shape}, previous {prev_luma.shape}"
        )
    diff = np.abs(curr_luma.astype(np.float64) - prev_luma.astype(np.float64))
    return np.minimum(w_motion * diff + w_grad * grad, MAXVAL)
