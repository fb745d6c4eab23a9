"""Bit-exact tensor serialization and color frame conversion.

QTN1 format: magic "QTN1", one unsigned byte for the order N, then N
little-endian uint64 dimensions, then prod(dims) entries of four
little-endian float64 components in (w, x, y, z) order, entries in
generalized column-major order (first index fastest).

Color frames map to pure quaternion tensors of shape (frame, row,
column): real part 0, imaginary parts are the R, G, B channels scaled
to [0, 1].
"""

from __future__ import annotations

import os
import struct
from pathlib import Path

import numpy as np

from .errors import (BadMagicError, DataError, TensorFormatError,
                     TruncatedPayloadError)
from .qtensor import QTensor

__all__ = ["write_tensor", "read_tensor", "frames_to_tensor",
           "tensor_to_frames", "read_ppm", "write_ppm", "load_frame",
           "save_frame", "read_frames", "write_frames", "FRAME_SUFFIXES"]

MAGIC = b"QTN1"
MAX_ELEMENTS = 1 << 40  # refuse absurd headers before allocating

FRAME_SUFFIXES = (".ppm", ".png")


def _entry_major(comp: np.ndarray) -> np.ndarray:
    # flatten the dims axes first-index-fastest, keeping components per entry
    n = comp.ndim - 1
    perm = tuple(reversed(range(n))) + (n,)
    return np.transpose(comp, perm).reshape(-1, 4)


def write_tensor(T: QTensor, sink) -> None:
    """Serialize in QTN1 form to a path or a binary file object."""
    header = MAGIC + struct.pack("<B", T.order)
    header += struct.pack(f"<{T.order}Q", *T.dims)
    payload = np.ascontiguousarray(_entry_major(T.components), dtype="<f8")
    if hasattr(sink, "write"):
        sink.write(header)
        sink.write(payload.tobytes())
    else:
        with open(sink, "wb") as fh:
            fh.write(header)
            fh.write(payload.tobytes())


def read_tensor(source) -> QTensor:
    """Parse a QTN1 stream; the round trip through write_tensor is bit-exact."""
    if hasattr(source, "read"):
        raw = source.read()
    else:
        raw = Path(source).read_bytes()
    if len(raw) < 4 or raw[:4] != MAGIC:
        raise BadMagicError(
            f"expected magic {MAGIC!r}, found {raw[:4]!r}")
    if len(raw) < 5:
        raise TruncatedPayloadError("file ends before the order byte")
    order = raw[4]
    if order == 0:
        raise TensorFormatError("tensor order 0 is not valid")
    dims_end = 5 + 8 * order
    if len(raw) < dims_end:
        raise TruncatedPayloadError("file ends inside the dimension list")
    dims = struct.unpack(f"<{order}Q", raw[5:dims_end])
    if any(d == 0 for d in dims):
        raise TensorFormatError(f"zero dimension in header: {dims}")
    count = 1
    for d in dims:
        count *= d
        if count > MAX_ELEMENTS:
            raise TensorFormatError(f"dimension overflow: {dims}")
    expected = dims_end + count * 32
    if len(raw) < expected:
        raise TruncatedPayloadError(
            f"payload holds {(len(raw) - dims_end) // 32} of {count} entries")
    if len(raw) > expected:
        raise TensorFormatError(f"{len(raw) - expected} trailing bytes after payload")
    flat = np.frombuffer(raw, dtype="<f8", offset=dims_end).reshape(-1, 4)
    comp = flat.reshape(tuple(reversed(dims)) + (4,))
    comp = np.transpose(comp, tuple(reversed(range(order))) + (order,))
    return QTensor.from_components(comp.astype(np.float64))


def frames_to_tensor(frames) -> QTensor:
    """Stack equal-size RGB frames into a pure tensor of dims (F, H, W)."""
    frames = list(frames)
    if not frames:
        raise DataError("need at least one frame")
    arrs = []
    shape = None
    for f in frames:
        a = np.asarray(f)
        if a.ndim != 3 or a.shape[2] != 3:
            raise DataError(f"frames must be HxWx3 arrays, got {a.shape}")
        if shape is None:
            shape = a.shape
        elif a.shape != shape:
            raise DataError(f"mixed frame sizes: {shape} vs {a.shape}")
        arrs.append(a.astype(np.float64) / 255.0)
    stack = np.stack(arrs)  # (F, H, W, 3)
    comp = np.zeros(stack.shape[:3] + (4,))
    comp[..., 1:] = stack
    return QTensor.from_components(comp)


def tensor_to_frames(T: QTensor) -> list:
    """Imaginary parts -> RGB channels, clamped to [0, 1], rounded
    half-to-even to 0..255; the real part is discarded."""
    if T.order != 3:
        raise DataError(f"frame emission needs an order-3 tensor, got order {T.order}")
    comp = T.components[..., 1:]
    pixels = np.rint(np.clip(comp, 0.0, 1.0) * 255.0)
    return [frame.astype(np.uint8) for frame in pixels]


def read_ppm(path) -> np.ndarray:
    """Binary PPM (P6), maxval 255 only."""
    data = Path(path).read_bytes()
    fields = []
    pos = 0
    while len(fields) < 4:
        while pos < len(data) and data[pos] in b" \t\r\n":
            pos += 1
        if pos < len(data) and data[pos:pos + 1] == b"#":
            while pos < len(data) and data[pos] not in b"\r\n":
                pos += 1
            continue
        start = pos
        while pos < len(data) and data[pos] not in b" \t\r\n":
            pos += 1
        if start == pos:
            raise DataError(f"{path}: truncated PPM header")
        fields.append(data[start:pos])
    if fields[0] != b"P6":
        raise DataError(f"{path}: not a binary PPM (P6) file")
    width, height, maxval = (int(f) for f in fields[1:])
    if maxval != 255:
        raise DataError(f"{path}: only maxval 255 is supported, got {maxval}")
    pos += 1  # single whitespace after maxval
    need = width * height * 3
    raster = data[pos:pos + need]
    if len(raster) != need:
        raise DataError(f"{path}: raster holds {len(raster)} of {need} bytes")
    return np.frombuffer(raster, dtype=np.uint8).reshape(height, width, 3).copy()


def write_ppm(path, pixels) -> None:
    pixels = np.asarray(pixels, dtype=np.uint8)
    if pixels.ndim != 3 or pixels.shape[2] != 3:
        raise DataError(f"PPM pixels must be HxWx3, got {pixels.shape}")
    h, w = pixels.shape[:2]
    with open(path, "wb") as fh:
        fh.write(f"P6\n{w} {h}\n255\n".encode("ascii"))
        fh.write(pixels.tobytes())


def load_frame(path) -> np.ndarray:
    path = Path(path)
    if path.suffix.lower() == ".ppm":
        return read_ppm(path)
    if path.suffix.lower() == ".png":
        try:
            from PIL import Image
        except ImportError as exc:
            raise DataError("PNG support needs the optional Pillow dependency") from exc
        with Image.open(path) as img:
            return np.asarray(img.convert("RGB"))
    raise DataError(f"unsupported frame format: {path.name}")


def save_frame(path, pixels) -> None:
    path = Path(path)
    if path.suffix.lower() == ".ppm":
        write_ppm(path, pixels)
        return
    if path.suffix.lower() == ".png":
        try:
            from PIL import Image
        except ImportError as exc:
            raise DataError("PNG support needs the optional Pillow dependency") from exc
        Image.fromarray(np.asarray(pixels, dtype=np.uint8), mode="RGB").save(path)
        return
    raise DataError(f"unsupported frame format: {path.name}")


def read_frames(directory) -> list:
    """Frames from a directory, lexicographic over file names."""
    directory = Path(directory)
    names = sorted(p for p in os.listdir(directory)
                   if Path(p).suffix.lower() in FRAME_SUFFIXES)
    if not names:
        raise DataError(f"no frame files (*.ppm, *.png) in {directory}")
    return [load_frame(directory / n) for n in names]


def write_frames(directory, frames, suffix: str = ".ppm", stem: str = "frame") -> list:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    width = max(3, len(str(len(frames) - 1)))
    paths = []
    for i, frame in enumerate(frames):
        p = directory / f"{stem}_{i:0{width}d}{suffix}"
        save_frame(p, frame)
        paths.append(p)
    return paths
