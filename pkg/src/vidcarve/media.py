"""Frame ingestion and emission.

Sources and sinks come in three kinds: single image files (PPM P6,
PGM P5, PNG), directories of numbered image files, and concatenated
binary PNM streams on standard input/output (``"-"``) or any binary
file object. PPM/PGM records use the strict byte grammar: magic,
whitespace-separated width/height/maxval (255 only), a single whitespace
byte, then the binary payload. Comments (``#`` to end of line) are
accepted between header tokens on input and never written.

Every frame from one source must share dimensions; violations and any
malformed data raise MediaFormatError carrying the frame index.
"""

from __future__ import annotations

import re
import sys
from pathlib import Path
from typing import BinaryIO, Iterable, Iterator

import numpy as np
from PIL import Image

IMAGE_SUFFIXES = (".ppm", ".pgm", ".png")
_WHITESPACE = b" \t\r\n\x0b\x0c"


class MediaFormatError(Exception):
    """Malformed or unsupported media data."""


def read_frames(source: str | Path | BinaryIO) -> Iterator[np.ndarray]:
    """Yield frames from a file, directory, or stream, in index order."""
    first: tuple[int, int] | None = None
    for idx, frame in enumerate(_iter_source(source)):
        if first is None:
            first = frame.shape[:2]
        elif frame.shape[:2] != first:
            raise MediaFormatError(
                f"frame {idx}: dimension change mid-stream, "
                f"expected {first[1]}x{first[0]}, got {frame.shape[1]}x{frame.shape[0]}"
            )
        yield frame


def write_frames(sink: str | Path | BinaryIO, frames: Iterable[np.ndarray]) -> None:
    """Write frames to a file, directory, or stream.

    Stream sinks get concatenated P6 records flushed per frame (gray
    frames are promoted to RGB; P6 has no gray form). ``.ppm``/``.pgm``
    file sinks hold any number of concatenated records; ``.png`` holds
    exactly one frame. Anything else is treated as a directory of
    numbered ``.ppm``/``.pgm`` files.
    """
    if sink == "-":
        _write_stream(sys.stdout.buffer, frames)
        return
    if hasattr(sink, "write"):
        _write_stream(sink, frames)
        return
    path = Path(sink)
    suffix = path.suffix.lower()
    if suffix == ".png":
        frames = list(frames)
        if len(frames) != 1:
            raise MediaFormatError(
                f"PNG sink {path} holds exactly one frame, got {len(frames)}"
            )
        _write_png(path, frames[0])
    elif suffix in (".ppm", ".pgm"):
        with open(path, "wb") as fh:
            for frame in frames:
                fh.write(_encode_pnm(frame, force_rgb=suffix == ".ppm"))
    else:
        path.mkdir(parents=True, exist_ok=True)
        for idx, frame in enumerate(frames):
            arr = np.asarray(frame)
            name = f"frame_{idx:05d}" + (".ppm" if arr.ndim == 3 else ".pgm")
            with open(path / name, "wb") as fh:
                fh.write(_encode_pnm(arr))


# ---------------------------------------------------------------------------
# sources


def _iter_source(source) -> Iterator[np.ndarray]:
    if source == "-":
        yield from _read_pnm_stream(sys.stdin.buffer)
        return
    if hasattr(source, "read"):
        yield from _read_pnm_stream(source)
        return
    path = Path(source)
    if path.is_dir():
        files = sorted(
            (f for f in path.iterdir() if f.suffix.lower() in IMAGE_SUFFIXES),
            key=_numeric_key,
        )
        for f in files:
            yield from _read_file(f)
        return
    if not path.exists():
        raise FileNotFoundError(f"no such file or directory: {path}")
    yield from _read_file(path)


def _read_file(path: Path) -> Iterator[np.ndarray]:
    suffix = path.suffix.lower()
    if suffix == ".png":
        yield _read_png(path)
    elif suffix in (".ppm", ".pgm"):
        with open(path, "rb") as fh:
            yield from _read_pnm_stream(fh, label=str(path))
    else:
        raise MediaFormatError(f"unsupported image format: {path}")


def _numeric_key(path: Path):
    """Order by the last number in the stem; plain names sort after."""
    nums = re.findall(r"\d+", path.stem)
    if nums:
        return (0, int(nums[-1]), path.name)
    return (1, 0, path.name)


def _read_png(path: Path) -> np.ndarray:
    with Image.open(path) as img:
        if img.mode == "L":
            return np.asarray(img, dtype=np.uint8)
        return np.asarray(img.convert("RGB"), dtype=np.uint8)


# ---------------------------------------------------------------------------
# PNM byte grammar


def _read_pnm_stream(stream: BinaryIO, label: str = "stream") -> Iterator[np.ndarray]:
    idx = 0
    while True:
        frame = _read_pnm_record(stream, idx, label)
        if frame is None:
            return
        yield frame
        idx += 1


def _read_pnm_record(stream: BinaryIO, idx: int, label: str) -> np.ndarray | None:
    magic = _read_token(stream, idx, label, allow_eof=True)
    if magic is None:
        return None
    if magic not in (b"P6", b"P5"):
        raise MediaFormatError(f"{label}, frame {idx}: bad magic {magic!r}, expected P6 or P5")
    width = _read_int(stream, idx, label, "width")
    height = _read_int(stream, idx, label, "height")
    maxval = _read_int(stream, idx, label, "maxval")
    if width < 1 or height < 1:
        raise MediaFormatError(f"{label}, frame {idx}: bad dimensions {width}x{height}")
    if maxval != 255:
        raise MediaFormatError(f"{label}, frame {idx}: unsupported maxval {maxval}, need 255")
    channels = 3 if magic == b"P6" else 1
    need = width * height * channels
    payload = _read_exact(stream, need)
    if len(payload) < need:
        raise MediaFormatError(
            f"{label}, frame {idx}: truncated payload, need {need} bytes, got {len(payload)}"
        )
    arr = np.frombuffer(payload, dtype=np.uint8)
    if channels == 3:
        return arr.reshape(height, width, 3)
    return arr.reshape(height, width)


def _read_token(stream, idx, label, allow_eof=False) -> bytes | None:
    """Next whitespace-delimited token, skipping ``#`` comments.

    The delimiter that terminates the token is consumed, which is exactly
    the single whitespace byte the grammar puts between maxval and the
    payload.
    """
    token = b""
    while True:
        c = stream.read(1)
        if c == b"":
            if token:
                return token
            if allow_eof:
                return None
            raise MediaFormatError(f"{label}, frame {idx}: malformed header, unexpected end of data")
        if c in _WHITESPACE:
            if token:
                return token
            continue
        if c == b"#" and not token:
            while c not in (b"\n", b""):
                c = stream.read(1)
            continue
        token += c


def _read_int(stream, idx, label, what) -> int:
    token = _read_token(stream, idx, label)
    try:
        return int(token)
    except ValueError:
        raise MediaFormatError(
            f"{label}, frame {idx}: malformed header, bad {what} {token!r}"
        ) from None


def _read_exact(stream: BinaryIO, n: int) -> bytes:
    buf = bytearray()
    while len(buf) < n:
        chunk = stream.read(n - len(buf))
        if not chunk:
            break
        buf.extend(chunk)
    return bytes(buf)


# ---------------------------------------------------------------------------
# sinks


def _write_stream(stream: BinaryIO, frames: Iterable[np.ndarray]) -> None:
    for frame in frames:
        stream.write(_encode_pnm(frame, force_rgb=True))
        stream.flush()


def _encode_pnm(frame: np.ndarray, force_rgb: bool = False) -> bytes:
    arr = np.ascontiguousarray(np.asarray(frame, dtype=np.uint8))
    if arr.ndim == 2 and force_rgb:
        arr = np.repeat(arr[:, :, None], 3, axis=2)
    if arr.ndim == 3:
        if arr.shape[2] != 3:
            raise MediaFormatError(f"cannot encode frame with {arr.shape[2]} channels")
        magic = b"P6"
    elif arr.ndim == 2:
        magic = b"P5"
    else:
        raise MediaFormatError(f"cannot encode array of shape {arr.shape}")
    h, w = arr.shape[:2]
    return magic + b"\n" + f"{w} {h}\n255\n".encode("ascii") + arr.tobytes()


def _write_png(path: Path, frame: np.ndarray) -> None:
    arr = np.ascontiguousarray(np.asarray(frame, dtype=np.uint8))
    if arr.ndim not in (2, 3) or (arr.ndim == 3 and arr.shape[2] != 3):
        raise MediaFormatError(f"cannot encode array of shape {arr.shape}")
    Image.fromarray(arr).save(path, format="PNG")
