"""Binary PGM (P5) image reader/writer for 8-bit grayscale frames."""

from __future__ import annotations

import numpy as np


def read_pgm(data: bytes) -> np.ndarray:
    """Parse P5 bytes into a (H, W) uint8 array."""
    tokens = []
    pos = 0
    while len(tokens) < 4:
        if pos >= len(data):
            raise ValueError("pgm: truncated header")
        # skip whitespace and comment lines
        if data[pos : pos + 1].isspace():
            pos += 1
            continue
        if data[pos : pos + 1] == b"#":
            nl = data.find(b"\n", pos)
            pos = len(data) if nl < 0 else nl + 1
            continue
        end = pos
        while end < len(data) and not data[end : end + 1].isspace():
            end += 1
        tokens.append(data[pos:end])
        pos = end
    if tokens[0] != b"P5":
        raise ValueError(f"pgm: expected P5 magic, got {tokens[0]!r}")
    width, height, maxval = (int(t) for t in tokens[1:4])
    if maxval != 255:
        raise ValueError("pgm: only 8-bit images are supported")
    pos += 1  # single whitespace after maxval
    raster = data[pos : pos + width * height]
    if len(raster) != width * height:
        raise ValueError("pgm: truncated raster")
    return np.frombuffer(raster, dtype=np.uint8).reshape(height, width).copy()


def write_pgm(image: np.ndarray) -> bytes:
    image = np.asarray(image, dtype=np.uint8)
    if image.ndim != 2:
        raise ValueError("pgm: expected a 2-D grayscale array")
    h, w = image.shape
    return b"P5\n%d %d\n255\n" % (w, h) + image.tobytes()


def load_pgm(path) -> np.ndarray:
    with open(path, "rb") as fh:
        return read_pgm(fh.read())


def save_pgm(path, image: np.ndarray) -> None:
    with open(path, "wb") as fh:
        fh.write(write_pgm(image))


def save_gop(directory, frames) -> None:
    """Write a GOP as frame_00.pgm, frame_01.pgm, ... (I-frame first)."""
    from pathlib import Path

    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    for i, frame in enumerate(frames):
        save_pgm(directory / f"frame_{i:02d}.pgm", frame)


def load_gop(directory) -> list:
    """Read back a numbered PGM frame sequence, in index order."""
    from pathlib import Path

    paths = sorted(Path(directory).glob("frame_*.pgm"))
    if not paths:
        raise ValueError(f"no frame_*.pgm files under {directory}")
    return [load_pgm(p) for p in paths]
