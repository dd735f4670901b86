"""Dynamic temporal buffer of frames and their energy maps.

The buffer grows while the frames' energy maps stay similar and is cut
into a fixed run once the average per-pixel standard deviation of energy
(ASDE) exceeds a size-dependent threshold. Each fixed run is then carved
with one shared seam set, which is both the speedup and the source of the
temporal stability.

The threshold simulates the worst case for a buffer of size n: (n - 1)
all-minimum maps followed by one all-maximum map. A fraction alpha of
that buffer's ASDE bounds what the real buffer may accumulate, so the
same upheaval weighs less in a longer buffer exactly as the worst-case
curve predicts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .energy import MAXVAL


@dataclass(frozen=True)
class BufferPolicy:
    """Knobs for the buffer growth test.

    alpha is the fraction of the worst-case ASDE tolerated; its useful
    range is [0.15, 0.25]. max_len is a hard cap on the run length so
    memory and flush latency stay bounded.
    """

    alpha: float = 0.2
    maxval: float = MAXVAL
    max_len: int = 64

    def __post_init__(self) -> None:
        if self.alpha <= 0:
            raise ValueError(f"alpha must be positive, got {self.alpha}")
        if self.max_len < 1:
            raise ValueError(f"max_len must be >= 1, got {self.max_len}")


def threshold(n: int, policy: BufferPolicy) -> float:
    """ASDE bound for a buffer of size n.

    alpha * sqrt(((maxval - maxval/n)^2 + (n-1)(maxval/n)^2) / n); zero at
    n = 1 and strictly decreasing from n = 2 on.
    """
    if n < 1:
        raise ValueError(f"buffer size must be >= 1, got {n}")
    m = policy.maxval
    step = m / n
    return policy.alpha * math.sqrt(((m - step) ** 2 + (n - 1) * step**2) / n)


@dataclass(eq=False)
class FixedRun:
    """A flushed buffer: frames plus the energy maps they entered with."""

    frames: list[np.ndarray]
    energy_maps: list[np.ndarray]

    def __len__(self) -> int:
        return len(self.frames)

    def uniform_energy(self) -> np.ndarray:
        """Per-pixel mean of the run's maps, the carving target for the run."""
        return np.stack(self.energy_maps).mean(axis=0)


@dataclass(eq=False)
class SpatioTemporalBuffer:
    """Single-owner buffer of frames and energy maps with running stats.

    sum and sum_sq accumulate the buffered maps per pixel so the ASDE test
    never rescans the stack. A rejected push restarts the buffer with the
    incoming frame and fresh accumulators, so rejection never leaves
    floating-point residue behind.
    """

    policy: BufferPolicy = field(default_factory=BufferPolicy)
    frames: list[np.ndarray] = field(default_factory=list)
    energy_maps: list[np.ndarray] = field(default_factory=list)
    _sum: np.ndarray | None = None
    _sum_sq: np.ndarray | None = None

    def __len__(self) -> int:
        return len(self.frames)

    def push(self, frame: np.ndarray, energy: np.ndarray) -> FixedRun | None:
        """Append if the buffer stays stable, otherwise flush.

        The candidate is appended tentatively; if the ASDE of the enlarged
        buffer stays within threshold(n) and n is within the cap, it is
        kept (None returned). Otherwise the previous contents come back as
        a FixedRun and the buffer restarts holding only the new frame.
        """
        arr = np.asarray(frame)
        emap = np.asarray(energy, dtype=np.float64)
        if emap.shape != arr.shape[:2]:
            raise ValueError(
                f"energy map shape {emap.shape} does not match frame {arr.shape[:2]}"
            )
        if self.frames and arr.shape[:2] != self.frames[0].shape[:2]:
            raise ValueError(
                f"dimension mismatch: buffer holds {self.frames[0].shape[:2]}, "
                f"got {arr.shape[:2]}"
            )
        if not self.frames:
            self._start(arr, emap)
            return None
        n = len(self.frames) + 1
        cand_sum = self._sum + emap
        cand_sq = self._sum_sq + emap * emap
        asde = _asde_from_sums(cand_sum, cand_sq, n)
        if asde <= threshold(n, self.policy) and n <= self.policy.max_len:
            self.frames.append(arr)
            self.energy_maps.append(emap)
            self._sum = cand_sum
            self._sum_sq = cand_sq
            return None
        run = FixedRun(frames=self.frames, energy_maps=self.energy_maps)
        self._start(arr, emap)
        return run

    def flush(self) -> FixedRun | None:
        """Close the buffer at end of stream; None when already empty."""
        if not self.frames:
            return None
        run = FixedRun(frames=self.frames, energy_maps=self.energy_maps)
        self.frames = []
        self.energy_maps = []
        self._sum = None
        self._sum_sq = None
        return run

    def std_map(self) -> np.ndarray:
        """Per-pixel population standard deviation across the buffered maps."""
        self._require_nonempty()
        t = len(self.energy_maps)
        var = self._sum_sq / t - (self._sum / t) ** 2
        return np.sqrt(np.maximum(var, 0.0))

    def pixel_std(self, i: int, j: int) -> float:
        self._require_nonempty()
        t = len(self.energy_maps)
        var = self._sum_sq[i, j] / t - (self._sum[i, j] / t) ** 2
        return math.sqrt(max(var, 0.0))

    def asde(self) -> float:
        """Mean of pixel_std over all pixels."""
        self._require_nonempty()
        return float(self.std_map().mean())

    def uniform_energy(self) -> np.ndarray:
        """Per-pixel arithmetic mean of the buffered maps."""
        self._require_nonempty()
        return self._sum / len(self.energy_maps)

    def _start(self, frame: np.ndarray, emap: np.ndarray) -> None:
        self.frames = [frame]
        self.energy_maps = [emap]
        self._sum = emap.copy()
        self._sum_sq = emap * emap

    def _require_nonempty(self) -> None:
        if not self.frames:
            raise ValueError("empty buffer")


def _asde_from_sums(total: np.ndarray, total_sq: np.ndarray, n: int) -> float:
    var = total_sq / n - (total / n) ** 2
    return float(np.sqrt(np.maximum(var, 0.0)).mean())
