"""Portable graymap (PGM) files and synthetic test patterns."""

from __future__ import annotations

import re
from pathlib import Path

import numpy as np

from .image import Image

PATTERNS = ("checkerboard", "disk", "gradient", "unique-columns")


class PGMError(ValueError):
    pass


class MalformedHeaderError(PGMError):
    pass


class UnsupportedMagicError(PGMError):
    pass


class MaxvalError(PGMError):
    pass


class TruncatedDataError(PGMError):
    pass


_TOKEN = re.compile(rb"(?:\s|#[^\n\r]*)*([^\s#]+)")


def _header(data: bytes):
    """Return (magic, width, height, maxval, offset of first data byte)."""
    if len(data) < 2:
        raise MalformedHeaderError("file too short for a PGM header")
    magic = data[:2]
    if magic not in (b"P2", b"P5"):
        raise UnsupportedMagicError(f"unsupported magic {magic.decode('latin-1')!r} (need P2 or P5)")
    pos = 2
    values = []
    for name in ("width", "height", "maxval"):
        m = _TOKEN.match(data, pos)
        if not m:
            raise MalformedHeaderError(f"missing {name} in header")
        tok = m.group(1)
        if not tok.isdigit():
            raise MalformedHeaderError(f"bad {name} {tok.decode('latin-1')!r} in header")
        values.append(int(tok))
        pos = m.end()
    width, height, maxval = values
    if width < 1 or height < 1:
        raise MalformedHeaderError(f"bad dimensions {width}x{height}")
    if maxval < 1:
        raise MalformedHeaderError(f"bad maxval {maxval}")
    if maxval > 255:
        raise MaxvalError(f"maxval {maxval} exceeds 255")
    if magic == b"P5":
        if pos >= len(data) or not data[pos:pos + 1].isspace():
            raise MalformedHeaderError("missing whitespace after maxval")
        pos += 1
    return magic, width, height, maxval, pos


def parse_pgm(data: bytes, background: int = 0) -> Image:
    magic, width, height, maxval, pos = _header(data)
    n = width * height
    if magic == b"P5":
        raw = data[pos:pos + n]
        if len(raw) < n:
            raise TruncatedDataError(f"expected {n} data bytes, found {len(raw)}")
        pixels = np.frombuffer(raw, dtype=np.uint8).reshape(height, width)
    else:
        body = re.sub(rb"#[^\n\r]*", b" ", data[pos:])
        tokens = body.split()
        if len(tokens) < n:
            raise TruncatedDataError(f"expected {n} samples, found {len(tokens)}")
        try:
            pixels = np.array([int(t) for t in tokens[:n]], dtype=np.int64).reshape(height, width)
        except ValueError:
            raise PGMError("non-numeric sample in P2 data") from None
    if pixels.max(initial=0) > maxval:
        raise MaxvalError(f"sample exceeds maxval {maxval}")
    return Image(pixels, background)


def read_pgm(path, background: int = 0) -> Image:
    return parse_pgm(Path(path).read_bytes(), background)


def format_pgm(img: Image, binary: bool = True) -> bytes:
    h, w = img.shape
    if binary:
        return f"P5\n{w} {h}\n255\n".encode("ascii") + img.pixels.tobytes()
    rows = [" ".join(str(int(v)) for v in row) for row in img.pixels]
    return (f"P2\n{w} {h}\n255\n" + "\n".join(rows) + "\n").encode("ascii")


def write_pgm(img: Image, path, binary: bool = True) -> None:
    Path(path).write_bytes(format_pgm(img, binary))


def make_pattern(kind: str, height: int, width: int, background: int = 0) -> Image:
    """Deterministic synthetic image.

    ``checkerboard`` alternates 0/255 per cell, ``disk`` is a 255 disk of
    radius ``min(H, W)/4`` centred on the array centre, ``gradient`` ramps
    0..255 left to right and ``unique-columns`` stores ``j mod 256`` in
    column ``j``.
    """
    i, j = np.indices((height, width))
    if kind == "checkerboard":
        pix = ((i + j) % 2) * 255
    elif kind == "disk":
        r = min(height, width) / 4
        dy = i + 0.5 - height / 2
        dx = j + 0.5 - width / 2
        pix = np.where(dx * dx + dy * dy <= r * r, 255, background)
    elif kind == "gradient":
        pix = (j * 255) // max(width - 1, 1)
    elif kind == "unique-columns":
        pix = j % 256
    else:
        raise ValueError(f"unknown pattern {kind!r}; expected one of {PATTERNS}")
    return Image(pix, background)
