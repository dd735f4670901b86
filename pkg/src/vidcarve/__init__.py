"""Content-aware image and video retargeting.

Batched seam carving (one cheapest child per first-row parent, removed
in a single DP pass) plus a dynamic temporal buffer that carves one
shared seam set across runs of similar frames, with a motion-blended
energy map for video.
"""

from .batching import SeamBatch, batch_carve, label_parents, remove_batch, select_batch
from .bench import (
    JitterReport,
    SyntheticSpec,
    compare,
    format_metrics,
    generate,
    jitter,
)
from .buffering import BufferPolicy, FixedRun, SpatioTemporalBuffer, threshold
from .energy import MAXVAL, gradient_energy, motion_energy, to_luma
from .media import MediaFormatError, read_frames, write_frames
from .pipeline import (
    MODES,
    RetargetConfig,
    RunMetrics,
    replay_batches,
    retarget_image,
    retarget_video,
)
from .seams import DpTables, Seam, cumulative_energy, min_seam, remove_seam, transpose

__version__ = "0.1.0"

__all__ = [
    "MAXVAL",
    "MODES",
    "BufferPolicy",
    "DpTables",
    "FixedRun",
    "JitterReport",
    "MediaFormatError",
    "RetargetConfig",
    "RunMetrics",
    "Seam",
    "SeamBatch",
    "SpatioTemporalBuffer",
    "SyntheticSpec",
    "batch_carve",
    "compare",
    "cumulative_energy",
    "format_metrics",
    "generate",
    "gradient_energy",
    "jitter",
    "label_parents",
    "min_seam",
    "motion_energy",
    "read_frames",
    "remove_batch",
    "remove_seam",
    "replay_batches",
    "retarget_image",
    "retarget_video",
    "select_batch",
    "threshold",
    "to_luma",
    "transpose",
    "write_frames",
]
