"""Raw planar YUV ingestion: headerless file reading, luma extraction, cropping.

Input files are headerless planar sequences (per frame: Y plane row-major,
then U, then V, sized per the chroma format). Only the luminance plane is
ever processed; chroma bytes are skipped when seeking.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from .errors import DataError

CHROMA_FORMATS = ("420", "422", "444", "luma")


@dataclass(frozen=True)
class VideoSpec:
    """Geometry of a headerless planar YUV file."""

    width: int
    height: int
    chroma_format: str = "420"
    bit_depth: int = 8

    def __post_init__(self) -> None:
        if self.width <= 0 or self.height <= 0:
            raise DataError(
                f"invalid dimensions {self.width}x{self.height}: must be positive"
            )
        if self.chroma_format not in CHROMA_FORMATS:
            raise DataError(
                f"unknown chroma format {self.chroma_format!r}; "
                f"expected one of {CHROMA_FORMATS}"
            )
        if self.bit_depth != 8:
            raise DataError(f"bit depth {self.bit_depth} unsupported (8 only)")
        if self.chroma_format == "420" and (self.width % 2 or self.height % 2):
            raise DataError("4:2:0 requires even width and height")
        if self.chroma_format == "422" and self.width % 2:
            raise DataError("4:2:2 requires even width")

    @property
    def luma_bytes(self) -> int:
        return self.width * self.height

    @property
    def frame_bytes(self) -> int:
        w, h = self.width, self.height
        if self.chroma_format == "luma":
            return w * h
        if self.chroma_format == "420":
            return w * h + 2 * (w // 2) * (h // 2)
        if self.chroma_format == "422":
            return w * h + 2 * (w // 2) * h
        return 3 * w * h  # 444


@dataclass(frozen=True)
class LumaFrame:
    """One frame's luminance plane. Immutable after construction.

    ``samples`` is a 2-D uint8 array of shape (height, width).
    """

    samples: np.ndarray

    def __post_init__(self) -> None:
        s = self.samples
        if s.ndim != 2:
            raise DataError(f"luma plane must be 2-D, got shape {s.shape}")
        if s.dtype != np.uint8:
            raise DataError(f"luma samples must be uint8, got {s.dtype}")
        s.setflags(write=False)

    @property
    def height(self) -> int:
        return self.samples.shape[0]

    @property
    def width(self) -> int:
        return self.samples.shape[1]


class FrameSource:
    """Sequential/random-access provider of luma frames from one YUV file.

    Single-reader: do not share one instance between threads. Open distinct
    sources over the same file for concurrent access. When ``access_log`` is
    a list, every frame index read is appended to it (used to audit which
    frames a scoring pass touched).
    """

    def __init__(self, path: str | os.PathLike, spec: VideoSpec,
                 access_log: list[int] | None = None):
        self.path = os.fspath(path)
        self.spec = spec
        self.access_log = access_log
        if not os.path.isfile(self.path):
            raise DataError(f"no such file: {self.path}")
        size = os.path.getsize(self.path)
        per_frame = spec.frame_bytes
        if size == 0 or size % per_frame != 0:
            want = per_frame * max(1, round(size / per_frame))
            raise DataError(
                f"size mismatch for {self.path}: {size} bytes is not a "
                f"multiple of the {per_frame}-byte frame size "
                f"({spec.width}x{spec.height} {spec.chroma_format}); "
                f"nearest whole-frame size would be {want} bytes"
            )
        self.frame_count = size // per_frame
        self._fh = open(self.path, "rb")

    def read_luma(self, index: int) -> LumaFrame:
        """Read the Y plane of frame ``index``; chroma bytes are skipped."""
        if not 0 <= index < self.frame_count:
            raise DataError(
                f"frame index {index} out of range [0, {self.frame_count})"
            )
        if self.access_log is not None:
            self.access_log.append(index)
        self._fh.seek(index * self.spec.frame_bytes)
        raw = self._fh.read(self.spec.luma_bytes)
        if len(raw) != self.spec.luma_bytes:
            raise DataError(f"short read at frame {index} of {self.path}")
        plane = np.frombuffer(raw, dtype=np.uint8).reshape(
            self.spec.height, self.spec.width
        )
        return LumaFrame(plane.copy())

    def close(self) -> None:
        self._fh.close()

    def __enter__(self) -> "FrameSource":
        return self

    def __exit__(self, *exc) -> None:
        self.close()


def open_sequence(path: str | os.PathLike, spec: VideoSpec,
                  access_log: list[int] | None = None) -> FrameSource:
    """Open a raw YUV file and validate its size against ``spec``."""
    return FrameSource(path, spec, access_log=access_log)


def crop(frame: LumaFrame, margin: int) -> LumaFrame:
    """Return the interior region after removing ``margin`` pixels per side."""
    if margin < 0:
        raise DataError(f"negative crop margin {margin}")
    if margin == 0:
        return frame
    if 2 * margin >= frame.width or 2 * margin >= frame.height:
        raise DataError(
            f"crop margin {margin} too large for {frame.width}x{frame.height} frame"
        )
    inner = frame.samples[margin:frame.height - margin,
                          margin:frame.width - margin]
    return LumaFrame(np.ascontiguousarray(inner))


def write_sequence(path: str | os.PathLike, frames: list[np.ndarray],
                   spec: VideoSpec, chroma_fill: int = 128) -> None:
    """Write luma planes as a raw planar file per ``spec``.

    Chroma planes (when the format has them) are filled with ``chroma_fill``.
    Mainly used to synthesize test clips and calibration fixtures.
    """
    w, h = spec.width, spec.height
    chroma_len = spec.frame_bytes - spec.luma_bytes
    chroma = bytes([chroma_fill]) * chroma_len
    with open(path, "wb") as fh:
        for i, plane in enumerate(frames):
            arr = np.asarray(plane)
            if arr.shape != (h, w):
                raise DataError(
                    f"frame {i} has shape {arr.shape}, expected ({h}, {w})"
                )
            fh.write(arr.astype(np.uint8).tobytes())
            fh.write(chroma)
