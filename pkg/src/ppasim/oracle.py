"""Scalar reference transforms on plain images.

Nothing here touches :class:`~ppasim.array_core.ArrayState`; every output
cell is computed directly from the source image with explicit loops so the
results can serve as ground truth for the array kernels.
"""

from __future__ import annotations

import math

import numpy as np

from .image import Image

__all__ = ["Image", "ref_shear", "ref_scale", "ref_rotate_nn", "ref_rotate_three_shear",
           "diff_images", "removed_lines", "repeated_lines"]


def ref_shear(img: Image, axis: str, alpha: float) -> Image:
    """Translate each row (or column) by ``ceil(alpha*(n/2 - index))``.

    Horizontal: ``out[i, j] = img[i, j - r_i]``.  Vertical:
    ``out[i, j] = img[i - c_j, j]``.  Sources outside the image give the
    background value.
    """
    h, w = img.shape
    src = img.pixels
    out = np.full((h, w), img.background, dtype=np.uint8)
    if axis == "horizontal":
        for i in range(h):
            r = math.ceil(alpha * (h // 2 - i))
            for j in range(max(r, 0), min(w + r, w)):
                out[i, j] = src[i, j - r]
    elif axis == "vertical":
        for j in range(w):
            c = math.ceil(alpha * (w // 2 - j))
            for i in range(max(c, 0), min(h + c, h)):
                out[i, j] = src[i - c, j]
    else:
        raise ValueError(f"unknown axis {axis!r}")
    return Image(out, img.background)


def ref_rotate_three_shear(img: Image, theta: float) -> Image:
    t = -math.tan(theta / 2)
    s = math.sin(theta)
    out = ref_shear(img, "horizontal", t)
    out = ref_shear(out, "vertical", s)
    return ref_shear(out, "horizontal", t)


def removed_lines(factor: float, half: int) -> set[int]:
    """Offsets (outward from the centre) dropped from one half by down-scaling."""
    n_remove = half - math.ceil(factor * half)
    if n_remove <= 0:
        return set()
    gap = math.ceil(half / n_remove)
    chosen = set()
    offset = gap - 1
    while offset < half and len(chosen) < n_remove:
        chosen.add(offset)
        offset += gap
    # not enough room for evenly spaced picks: drop the outermost remaining ones
    offset = half - 1
    while len(chosen) < n_remove:
        if offset not in chosen:
            chosen.add(offset)
        offset -= 1
    return chosen


def repeated_lines(factor: float, half: int) -> set[int]:
    """Offsets duplicated in one half by up-scaling."""
    n_dup = math.ceil((factor - 1) * half)
    if n_dup <= 0:
        return set()
    gap = math.ceil(half / n_dup)
    return {m * gap - 1 for m in range(1, n_dup + 1) if m * gap - 1 <= half - 2}


def _scale_half(line: list, factor: float, fill) -> list:
    # ``line`` runs outward from the centre
    half = len(line)
    out = []
    if factor < 1:
        gone = removed_lines(factor, half)
        out = [v for k, v in enumerate(line) if k not in gone]
    elif factor > 1:
        dup = repeated_lines(factor, half)
        for k, v in enumerate(line):
            out.append(v)
            if k in dup:
                out.append(v)
    else:
        out = list(line)
    out = out[:half]
    return out + [fill] * (half - len(out))


def ref_scale(img: Image, axis: str, factor: float) -> Image:
    """Nearest-neighbour scaling about the centre by line removal/duplication."""
    if not (0 < factor <= 2):
        raise ValueError(f"factor must lie in (0, 2], got {factor}")
    if axis == "vertical":
        return ref_scale(img.transpose(), "horizontal", factor).transpose()
    if axis != "horizontal":
        raise ValueError(f"unknown axis {axis!r}")
    h, w = img.shape
    half = w // 2
    out = np.empty((h, w), dtype=np.uint8)
    for i in range(h):
        row = [int(v) for v in img.pixels[i]]
        right = _scale_half(row[half:], factor, img.background)
        left = _scale_half(row[:half][::-1], factor, img.background)
        out[i] = left[::-1] + right
    return Image(out, img.background)


def ref_scale2(img: Image, sx: float, sy: float) -> Image:
    return ref_scale(ref_scale(img, "horizontal", sx), "vertical", sy)


def _round_half_down(v: float) -> int:
    return math.ceil(v - 0.5)


def ref_rotate_nn(img: Image, theta: float) -> Image:
    """Direct nearest-neighbour rotation about the image centre.

    Coordinates are centred, with x along columns (east) and y along rows
    (south); the forward map is ``(x, y) -> (x cos + y sin, -x sin + y cos)``,
    the same map the three-shear kernels realise.  Each output cell pulls
    from the inverse-mapped source cell; ties round toward the lower index.
    """
    if abs(theta) > math.pi / 2:
        raise ValueError("|theta| must not exceed pi/2")
    h, w = img.shape
    c, s = math.cos(theta), math.sin(theta)
    cy, cx = h / 2, w / 2
    out = np.full((h, w), img.background, dtype=np.uint8)
    for i in range(h):
        for j in range(w):
            # cell centre in centred coordinates
            x = j + 0.5 - cx
            y = i + 0.5 - cy
            # inverse rotation is the transpose
            xs = x * c - y * s
            ys = x * s + y * c
            sj = _round_half_down(xs + cx - 0.5)
            si = _round_half_down(ys + cy - 0.5)
            if 0 <= si < h and 0 <= sj < w:
                out[i, j] = img.pixels[si, sj]
    return Image(out, img.background)


def diff_images(a: Image, b: Image) -> tuple[int, float]:
    """(number of differing cells, fraction of differing cells)."""
    if a.shape != b.shape:
        raise ValueError(f"geometry mismatch: {a.shape} vs {b.shape}")
    count = int(np.count_nonzero(a.pixels != b.pixels))
    return count, count / a.pixels.size
